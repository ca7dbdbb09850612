//! Continued fractions `α = [a_1, a_2, …]` (with `a_0 = 0`), their
//! convergents, and the exact transformations used by the induced-rotation
//! steps.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{parse_surd, QuadSurd, RealEnclosure};

/// Step cap for periodicity detection of surd expansions.
const MAX_GAUSS_STEPS: usize = 100_000;

/// What follows the explicit prefix of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Nothing; the value is rational.
    Finite,
    /// The given block repeats forever; the value is a quadratic irrational.
    Periodic(Vec<u64>),
    /// More entries exist but are unknown.
    Truncated,
}

/// Partial-quotient sequence `[a_1, a_2, …]`.
///
/// Always canonical: finite expansions never end in 1 (unless the whole
/// expansion is `[1]`), periodic blocks are primitive and the prefix is as
/// short as possible, so equal values have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFExpansion {
    prefix: Vec<u64>,
    tail: Tail,
}

fn check_entries(entries: &[u64]) -> Result<()> {
    match entries.iter().find(|&&a| a == 0) {
        Some(&a) => Err(Error::InvalidPartialQuotient(a)),
        None => Ok(()),
    }
}

fn primitive_block(block: &[u64]) -> Vec<u64> {
    let n = block.len();
    for len in 1..=n {
        if n.is_multiple_of(len) && (len..n).all(|i| block[i] == block[i - len]) {
            return block[..len].to_vec();
        }
    }
    block.to_vec()
}

impl CFExpansion {
    pub fn finite(entries: Vec<u64>) -> Result<Self> {
        check_entries(&entries)?;
        let mut prefix = entries;
        if prefix.len() >= 2 && prefix.last() == Some(&1) {
            prefix.pop();
            *prefix.last_mut().unwrap() += 1;
        }
        Ok(CFExpansion {
            prefix,
            tail: Tail::Finite,
        })
    }

    pub fn periodic(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        check_entries(&prefix)?;
        check_entries(&period)?;
        if period.is_empty() {
            return Err(Error::InvalidArgument("empty periodic block".into()));
        }
        let mut prefix = prefix;
        let mut period = primitive_block(&period);
        while let (Some(&p), Some(&q)) = (prefix.last(), period.last()) {
            if p != q {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(CFExpansion {
            prefix,
            tail: Tail::Periodic(period),
        })
    }

    pub fn truncated(prefix: Vec<u64>) -> Result<Self> {
        check_entries(&prefix)?;
        Ok(CFExpansion {
            prefix,
            tail: Tail::Truncated,
        })
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_finite(&self) -> bool {
        self.tail == Tail::Finite
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic(_))
    }

    pub fn is_truncated(&self) -> bool {
        self.tail == Tail::Truncated
    }

    /// Finite or periodic: the expansion determines an exact value.
    pub fn is_exact(&self) -> bool {
        !self.is_truncated()
    }

    /// Number of known entries, `None` when periodic (unbounded).
    pub fn available(&self) -> Option<usize> {
        match self.tail {
            Tail::Periodic(_) => None,
            _ => Some(self.prefix.len()),
        }
    }

    pub fn has_at_least(&self, n: usize) -> bool {
        self.available().is_none_or(|k| k >= n)
    }

    /// Entry `a_{i+1}` (zero-based index `i`).
    pub fn get(&self, i: usize) -> Option<u64> {
        if i < self.prefix.len() {
            return Some(self.prefix[i]);
        }
        match &self.tail {
            Tail::Periodic(block) => Some(block[(i - self.prefix.len()) % block.len()]),
            _ => None,
        }
    }

    /// The first `n` entries, unrolling a periodic tail.
    pub fn entries(&self, n: usize) -> Result<Vec<u64>> {
        (0..n)
            .map(|i| {
                self.get(i).ok_or(Error::TooFewEntries {
                    needed: n,
                    available: self.prefix.len(),
                })
            })
            .collect()
    }

    fn rebuild(&self, prefix: Vec<u64>, tail: Tail) -> Self {
        match tail {
            Tail::Finite => CFExpansion::finite(prefix).expect("entries stay positive"),
            Tail::Periodic(block) => {
                CFExpansion::periodic(prefix, block).expect("entries stay positive")
            }
            Tail::Truncated => CFExpansion {
                prefix,
                tail: Tail::Truncated,
            },
        }
    }

    /// Drop the first `k` entries.
    pub fn drop_front(&self, k: usize) -> Result<Self> {
        if k <= self.prefix.len() {
            return Ok(self.rebuild(self.prefix[k..].to_vec(), self.tail.clone()));
        }
        match &self.tail {
            Tail::Periodic(block) => {
                let mut block = block.clone();
                let shift = (k - self.prefix.len()) % block.len();
                block.rotate_left(shift);
                Ok(self.rebuild(Vec::new(), Tail::Periodic(block)))
            }
            _ => Err(Error::TooFewEntries {
                needed: k,
                available: self.prefix.len(),
            }),
        }
    }

    /// Replace the first `k` entries by `head`.
    pub fn replace_front(&self, k: usize, head: &[u64]) -> Result<Self> {
        let rest = self.drop_front(k)?;
        let mut prefix = head.to_vec();
        prefix.extend_from_slice(&rest.prefix);
        Ok(self.rebuild(prefix, rest.tail))
    }

    /// Exact value; `PrecisionExhausted` for truncated expansions.
    pub fn value(&self) -> Result<QuadSurd> {
        match &self.tail {
            Tail::Truncated => Err(Error::PrecisionExhausted),
            Tail::Finite => Ok(QuadSurd::from_rational(finite_value(&self.prefix))),
            Tail::Periodic(block) => Ok(periodic_value(&self.prefix, block)),
        }
    }

    /// Rational interval containing every number with this expansion.
    pub fn value_interval(&self) -> (BigRational, BigRational) {
        match &self.tail {
            Tail::Truncated => prefix_interval(&self.prefix),
            _ => {
                let v = self.value().expect("exact expansion");
                v.bracket(96)
            }
        }
    }

    /// Enclosure of the value at `bits` fractional bits.
    pub fn enclosure(&self, bits: u32) -> RealEnclosure {
        match self.value() {
            Ok(v) => RealEnclosure::of_surd(&v, bits),
            Err(_) => {
                let (lo, hi) = prefix_interval(&self.prefix);
                RealEnclosure::new(lo, hi, bits)
            }
        }
    }
}

/// `[a_1, …, a_k]` evaluated exactly (empty means 0).
pub fn finite_value(entries: &[u64]) -> BigRational {
    let mut v = BigRational::zero();
    for &a in entries.iter().rev() {
        v = (BigRational::from_integer(BigInt::from(a)) + v).recip();
    }
    v
}

/// Closed interval of all reals whose expansion begins with `entries`.
pub fn prefix_interval(entries: &[u64]) -> (BigRational, BigRational) {
    let Some((&last, init)) = entries.split_last() else {
        return (BigRational::zero(), BigRational::one());
    };
    let a = finite_value(entries);
    let mut bumped = init.to_vec();
    bumped.push(last + 1);
    let b = finite_value(&bumped);
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Convergent numerators/denominators of `[0; a_1..a_k]` as `(p_k, q_k, p_{k-1}, q_{k-1})`.
fn convergent_pair(entries: &[u64]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    for &a in entries {
        let a = BigInt::from(a);
        let np = &a * &p + &p_prev;
        let nq = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
    (p, q, p_prev, q_prev)
}

fn periodic_value(prefix: &[u64], block: &[u64]) -> QuadSurd {
    // y = [(block)] solves Q' y² + (Q − P') y − P = 0 with the convergents of the block.
    let (p, q, p1, q1) = convergent_pair(block);
    let b = &q - &p1;
    let disc = &b * &b + BigInt::from(4) * &q1 * &p;
    let root = QuadSurd::sqrt_rational(&BigRational::from_integer(disc)).expect("positive");
    let y = (&root - &QuadSurd::from_integer(b)) / QuadSurd::from_integer(BigInt::from(2) * q1);
    // α = (P_k + P_{k−1} y) / (Q_k + Q_{k−1} y) over the prefix convergents.
    let (pk, qk, pk1, qk1) = convergent_pair(prefix);
    let num = &QuadSurd::from_integer(pk) + &(&QuadSurd::from_integer(pk1) * &y);
    let den = &QuadSurd::from_integer(qk) + &(&QuadSurd::from_integer(qk1) * &y);
    num / den
}

fn to_quotient(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::PartialQuotientTooLarge(n.to_string()))
}

/// Continued fraction of `x ∈ (0,1)`: finite for rationals, periodic for
/// quadratic surds (detected by exact recurrence of the Gauss-map state).
pub fn cf_of(x: &QuadSurd) -> Result<CFExpansion> {
    if !x.is_positive() || x.compare(&QuadSurd::one())? != std::cmp::Ordering::Less {
        return Err(Error::OutOfUnitInterval(x.to_string()));
    }
    if let Some(q) = x.to_rational() {
        let mut entries = Vec::new();
        let (mut num, mut den) = (q.numer().clone(), q.denom().clone());
        while !num.is_zero() {
            let (a, r) = (&den / &num, &den % &num);
            entries.push(to_quotient(&a)?);
            den = std::mem::replace(&mut num, r);
        }
        return CFExpansion::finite(entries);
    }
    let mut seen: HashMap<QuadSurd, usize> = HashMap::new();
    let mut entries = Vec::new();
    let mut state = x.clone();
    for step in 0..MAX_GAUSS_STEPS {
        if let Some(&start) = seen.get(&state) {
            let period = entries[start..].to_vec();
            entries.truncate(start);
            return CFExpansion::periodic(entries, period);
        }
        seen.insert(state.clone(), step);
        let (a, frac) = state.recip()?.floor_frac();
        entries.push(to_quotient(&a)?);
        state = frac;
    }
    Err(Error::PeriodNotFound(MAX_GAUSS_STEPS))
}

/// One row `p_n / q_n` of a convergent table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(serialize_with = "ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub q: BigInt,
}

fn ser_display<S: Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentTable {
    pub rows: Vec<Convergent>,
}

impl ConvergentTable {
    pub fn q(&self, n: usize) -> Option<&BigInt> {
        self.rows.get(n).map(|r| &r.q)
    }

    pub fn p(&self, n: usize) -> Option<&BigInt> {
        self.rows.get(n).map(|r| &r.p)
    }

    pub fn last_ratio(&self) -> BigRational {
        let r = self.rows.last().expect("table has row 0");
        BigRational::new(r.p.clone(), r.q.clone())
    }
}

/// Convergents `p_0/q_0 … p_n/q_n` with seeds `(0,1)` and `(1,0)`.
pub fn convergents(cf: &CFExpansion, n: usize) -> Result<ConvergentTable> {
    let entries = cf.entries(n)?;
    let mut rows = vec![Convergent {
        index: 0,
        p: BigInt::zero(),
        q: BigInt::one(),
    }];
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    for (i, &a) in entries.iter().enumerate() {
        let last = rows.last().unwrap();
        let a = BigInt::from(a);
        let p = &a * &last.p + &p_prev;
        let q = &a * &last.q + &q_prev;
        p_prev = last.p.clone();
        q_prev = last.q.clone();
        rows.push(Convergent { index: i + 1, p, q });
    }
    Ok(ConvergentTable { rows })
}

/// Open interval `(a_2/(a_1a_2+1), (a_2+1)/(a_1(a_2+1)+1))` containing every
/// `α = [a_1, a_2, …]`.
pub fn value_bounds(a1: u64, a2: u64) -> (BigRational, BigRational) {
    let (a1, a2) = (BigInt::from(a1), BigInt::from(a2));
    let lo = BigRational::new(a2.clone(), &a1 * &a2 + 1);
    let hi = BigRational::new(&a2 + 1, &a1 * (&a2 + 1) + 1);
    (lo, hi)
}

/// Gauss shift `[a_1, a_2, …] ↦ [a_2, a_3, …]`, i.e. `α ↦ {1/α}`.
pub fn gauss_shift(cf: &CFExpansion) -> Result<CFExpansion> {
    if cf.get(0).is_none() {
        return Err(Error::EmptyExpansion);
    }
    cf.drop_front(1)
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let head = join(&self.prefix);
        match &self.tail {
            Tail::Finite => write!(f, "[{head}]"),
            Tail::Periodic(block) if head.is_empty() => write!(f, "[({})]", join(block)),
            Tail::Periodic(block) => write!(f, "[{head};({})]", join(block)),
            Tail::Truncated if head.is_empty() => write!(f, "[?]"),
            Tail::Truncated => write!(f, "[{head};?]"),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim().trim_end_matches([',', ';']).trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad partial quotient '{}'", t.trim())))
        })
        .collect()
}

/// Parse `"[2,2]"`, `"[3;(2)]"`, `"[(2)]"` or `"[2,2;?]"` (truncated).
pub fn parse_cf(s: &str) -> Result<CFExpansion> {
    let s = s.trim();
    let body = s
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("continued fraction must be bracketed: '{s}'")))?;
    if body.contains("...") || body.contains('\u{2026}') {
        return Err(Error::Parse(
            "ellipsis is not a continued fraction; mark the period explicitly, e.g. [4;(3,4)]"
                .into(),
        ));
    }
    if let Some(open) = body.find('(') {
        let close = body
            .rfind(')')
            .filter(|&c| c > open && body[c + 1..].trim().is_empty())
            .ok_or_else(|| Error::Parse(format!("unbalanced period in '{s}'")))?;
        let prefix = parse_list(&body[..open])?;
        let period = parse_list(&body[open + 1..close])?;
        return CFExpansion::periodic(prefix, period);
    }
    let trimmed = body.trim();
    if let Some(head) = trimmed.strip_suffix('?') {
        return CFExpansion::truncated(parse_list(head)?);
    }
    CFExpansion::finite(parse_list(trimmed)?)
}

/// A rotation amount given either exactly or by a known expansion prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    cf: CFExpansion,
    value: Option<QuadSurd>,
}

impl Rotation {
    /// Rotation by `{x}`; integers are rejected.
    pub fn from_value(x: &QuadSurd) -> Result<Self> {
        let frac = x.fract();
        let cf = cf_of(&frac)?;
        Ok(Rotation {
            cf,
            value: Some(frac),
        })
    }

    pub fn from_cf(cf: CFExpansion) -> Result<Self> {
        let value = match cf.value() {
            Ok(v) => Some(v),
            Err(Error::PrecisionExhausted) => None,
            Err(e) => return Err(e),
        };
        if let Some(v) = &value {
            if !v.is_positive() || v.compare(&QuadSurd::one())? != std::cmp::Ordering::Less {
                return Err(Error::OutOfUnitInterval(v.to_string()));
            }
        }
        Ok(Rotation { cf, value })
    }

    /// Parse a cf literal (`[..]`) or a surd/rational expression.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('[') {
            Self::from_cf(parse_cf(s)?)
        } else {
            Self::from_value(&parse_surd(s)?)
        }
    }

    pub fn cf(&self) -> &CFExpansion {
        &self.cf
    }

    pub fn value(&self) -> Option<&QuadSurd> {
        self.value.as_ref()
    }

    pub fn exact_value(&self) -> Result<&QuadSurd> {
        self.value.as_ref().ok_or(Error::PrecisionExhausted)
    }

    pub fn is_rational(&self) -> bool {
        self.cf.is_finite()
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}", self.cf),
        }
    }
}
