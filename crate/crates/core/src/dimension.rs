//! Dimension of heavy sets from the renormalization history, the closed form
//! for period-two expansions, the lower-bound process and its almost-sure
//! constant, and expansions built to hit a target dimension.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::contfrac::{CFExpansion, Rotation};
use crate::error::{Error, Result};
use crate::exactnum::{ln_bounds, pi_enclosure, QuadSurd, RealEnclosure, DEFAULT_BITS};
use crate::renorm::{run_frame, Frame};

/// One renormalization step as seen by the estimators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryStep {
    pub m: u64,
    pub delta: RealEnclosure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DepthValue {
    pub k: usize,
    pub m: u64,
    pub delta: f64,
    /// `log(m_1⋯m_k) / −log(δ_1⋯δ_k)`
    pub value: RealEnclosure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub per_depth: Vec<DepthValue>,
    /// Enclosure of the minimum over the last `⌈k/2⌉` values.
    pub liminf_proxy: RealEnclosure,
    pub broken_seen: bool,
    pub sub_factorial: bool,
}

impl DimensionEstimate {
    /// The ratio is the dimension (not just a bound): no broken islands and
    /// the child counts grow slowly.
    pub fn is_exact(&self) -> bool {
        !self.broken_seen && self.sub_factorial
    }

    pub fn last(&self) -> &DepthValue {
        self.per_depth.last().expect("estimate is nonempty")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,m_k,delta_k,value_k\n");
        for d in &self.per_depth {
            let _ = writeln!(
                out,
                "{},{},{:.17e},{:.17e}",
                d.k,
                d.m,
                d.delta,
                d.value.mid_f64()
            );
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "per_depth": self.per_depth.iter().map(|d| json!({
                "k": d.k,
                "m_k": d.m,
                "delta_k": d.delta,
                "value": d.value.mid_f64(),
                "value_lo": d.value.lo_f64(),
                "value_hi": d.value.hi_f64(),
            })).collect::<Vec<_>>(),
            "liminf_proxy": {
                "lo": self.liminf_proxy.lo_f64(),
                "hi": self.liminf_proxy.hi_f64(),
            },
            "broken_seen": self.broken_seen,
            "sub_factorial": self.sub_factorial,
            "exact": self.is_exact(),
        })
    }
}

fn ln_int(m: u64, bits: u32) -> RealEnclosure {
    if m == 1 {
        return RealEnclosure::from_integer(0);
    }
    let (lo, hi) = ln_bounds(&BigRational::from_integer(BigInt::from(m)), bits);
    RealEnclosure::new(lo, hi, bits)
}

/// Finite stand-in for sub-factorial growth: over the second half of the
/// history, `log m_{k+1} ≤ ½·log(m_1⋯m_k)`.
pub fn sub_factorial(ms: &[u64]) -> bool {
    let logs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let mut prefix = 0.0;
    let mut ok = true;
    let start = ms.len() / 2;
    for (k, l) in logs.iter().enumerate() {
        if k >= start.max(1) && *l > 0.5 * prefix + 1e-12 {
            ok = false;
        }
        prefix += l;
    }
    ok
}

/// Ratios `log(m_1⋯m_k)/−log(δ_1⋯δ_k)` for every prefix of `history`.
pub fn estimate(
    history: &[HistoryStep],
    broken_seen: bool,
    bits: u32,
) -> Result<DimensionEstimate> {
    if history.is_empty() {
        return Err(Error::InvalidArgument(
            "empty renormalization history".into(),
        ));
    }
    let mut num = RealEnclosure::from_integer(0);
    let mut den = RealEnclosure::from_integer(0);
    let mut ln_m: HashMap<u64, RealEnclosure> = HashMap::new();
    let mut ln_d: HashMap<(BigRational, BigRational), RealEnclosure> = HashMap::new();
    let mut per_depth = Vec::with_capacity(history.len());
    for (i, h) in history.iter().enumerate() {
        let lm = ln_m.entry(h.m).or_insert_with(|| ln_int(h.m, bits)).clone();
        let key = (h.delta.lo().clone(), h.delta.hi().clone());
        let ld = match ln_d.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = h.delta.ln()?;
                ln_d.insert(key, v.clone());
                v
            }
        };
        num = num.add(&lm);
        den = den.sub(&ld);
        let value = if num.hi().is_zero() {
            RealEnclosure::from_integer(0)
        } else {
            num.div(&den)?
        };
        per_depth.push(DepthValue {
            k: i + 1,
            m: h.m,
            delta: h.delta.mid_f64(),
            value,
        });
    }
    let tail = per_depth.len().div_ceil(2);
    let window = &per_depth[per_depth.len() - tail..];
    let lo = window.iter().map(|d| d.value.lo().clone()).min().unwrap();
    let hi = window.iter().map(|d| d.value.hi().clone()).min().unwrap();
    let ms: Vec<u64> = history.iter().map(|h| h.m).collect();
    Ok(DimensionEstimate {
        per_depth,
        liminf_proxy: RealEnclosure::new(lo, hi, bits),
        broken_seen,
        sub_factorial: sub_factorial(&ms),
    })
}

pub fn frame_history(frame: &Frame, bits: u32) -> Vec<HistoryStep> {
    frame
        .history
        .iter()
        .map(|h| HistoryStep {
            m: h.m,
            delta: RealEnclosure::of_surd(&h.delta, bits),
        })
        .collect()
}

pub fn dim_estimate(frame: &Frame) -> Result<DimensionEstimate> {
    dim_estimate_bits(frame, DEFAULT_BITS)
}

pub fn dim_estimate_bits(frame: &Frame, bits: u32) -> Result<DimensionEstimate> {
    estimate(&frame_history(frame, bits), frame.broken_seen, bits)
}

/// Read position in an expansion whose first entries were rewritten.
struct Cursor<'a> {
    entries: &'a [u64],
    head: Vec<u64>,
    pos: usize,
}

impl Cursor<'_> {
    fn get(&self, i: usize) -> Option<u64> {
        if i < self.head.len() {
            Some(self.head[i])
        } else {
            self.entries.get(self.pos + i - self.head.len()).copied()
        }
    }

    fn consume(&mut self, k: usize) {
        let from_head = k.min(self.head.len());
        self.head.drain(..from_head);
        self.pos += k - from_head;
    }
}

/// History of a truncated expansion, with every `δ` enclosed from the
/// values all continuations of the prefix could take.
pub fn prefix_history(
    cf: &CFExpansion,
    max_depth: usize,
    bits: u32,
) -> Result<(Vec<HistoryStep>, bool)> {
    let entries = match cf.available() {
        Some(n) => cf.entries(n)?,
        None => cf.entries(cf.prefix().len() + 3 * max_depth.min(1 << 16) + 3)?,
    };
    // suffix[p] encloses [a_{p+1}, a_{p+2}, …] over every continuation.
    let mut suffix =
        vec![RealEnclosure::new(BigRational::zero(), BigRational::one(), bits); entries.len() + 1];
    if cf.is_finite() {
        suffix[entries.len()] = RealEnclosure::from_integer(0);
    }
    let one = RealEnclosure::from_integer(1);
    for p in (0..entries.len()).rev() {
        let a = RealEnclosure::from_integer(entries[p] as i64);
        suffix[p] = one.div(&a.add(&suffix[p + 1]))?;
    }
    let mut cur = Cursor {
        entries: &entries,
        head: Vec::new(),
        pos: 0,
    };
    let value = |cur: &Cursor| -> Result<RealEnclosure> {
        let mut v = suffix[cur.pos.min(entries.len())].clone();
        for &h in cur.head.iter().rev() {
            v = one.div(&RealEnclosure::from_integer(h as i64).add(&v))?;
        }
        Ok(v)
    };
    let mut history = Vec::new();
    let mut broken = false;
    while history.len() < max_depth {
        let (Some(a1), Some(a2), Some(a3)) = (cur.get(0), cur.get(1), cur.get(2)) else {
            break;
        };
        if a1 == 1 {
            cur.consume(2);
            cur.head.insert(0, a2 + 1);
            continue;
        }
        let alpha = value(&cur)?;
        let two_n = RealEnclosure::from_integer((a1 - a1 % 2) as i64);
        let delta = one.sub(&two_n.mul(&alpha));
        if a1 % 2 == 1 {
            broken = true;
            cur.consume(1);
            cur.head.insert(0, 1);
            history.push(HistoryStep { m: 1, delta });
        } else {
            broken |= a3 == 1;
            cur.consume(2);
            history.push(HistoryStep { m: a2 + 1, delta });
        }
    }
    Ok((history, broken))
}

/// Estimate for any rotation: exact frames for exact expansions, prefix
/// enclosures for truncated ones.
pub fn dim_estimate_rotation(
    rotation: &Rotation,
    depth: usize,
    bits: u32,
) -> Result<DimensionEstimate> {
    if rotation.value().is_some() {
        dim_estimate_bits(&run_frame(rotation, depth)?, bits)
    } else {
        let (h, broken) = prefix_history(rotation.cf(), depth, bits)?;
        estimate(&h, broken, bits)
    }
}

/// Rotation `[2n, m, 2n, m, …]` and its exact dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodTwo {
    pub alpha: QuadSurd,
    pub delta: QuadSurd,
    pub value: RealEnclosure,
}

/// `log(m+1) / −log(1 + nm − √(nm(nm+2)))`, with `α` the positive root of
/// `2nα² + 2nmα − m = 0`.
pub fn closed_form_period2(n: u64, m: u64) -> Result<PeriodTwo> {
    closed_form_period2_bits(n, m, DEFAULT_BITS)
}

pub fn closed_form_period2_bits(n: u64, m: u64, bits: u32) -> Result<PeriodTwo> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "n = {n}, m = {m} must be positive"
        )));
    }
    let nm = BigInt::from(n) * BigInt::from(m);
    let root = QuadSurd::sqrt_rational(&BigRational::from_integer(&nm * (&nm + 2)))?;
    let nm = QuadSurd::from_integer(nm);
    let alpha = (&root - &nm) / QuadSurd::from_integer(2 * n);
    let delta = &(&QuadSurd::one() + &nm) - &root;
    let den = RealEnclosure::of_surd(&delta, bits).ln()?.neg();
    let value = ln_int(m + 1, bits).div(&den)?;
    Ok(PeriodTwo {
        alpha,
        delta,
        value,
    })
}

/// Double-precision `closed_form_period2` for searches.
pub fn period2_f64(n: u64, m: u64) -> f64 {
    let x = n as f64 * m as f64;
    // 1 + x − √(x(x+2)) = 1 / (1 + x + √(x(x+2)))
    let delta = 1.0 / (1.0 + x + (x * (x + 2.0)).sqrt());
    ((m + 1) as f64).ln() / -delta.ln()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundStep {
    pub case: u8,
    pub n: BigInt,
    pub l: BigRational,
    /// Index (from 1) of the first partial quotient not yet consumed.
    pub consumed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundTrace {
    pub steps: Vec<LowerBoundStep>,
    /// Stopped because the prefix ran out.
    pub exhausted: bool,
    /// A leading 1 was merged into the next entry first.
    pub normalized: bool,
}

impl LowerBoundTrace {
    /// `log n_i / −log l_i` at the last step.
    pub fn ratio(&self, bits: u32) -> Result<Option<RealEnclosure>> {
        let Some(last) = self.steps.last() else {
            return Ok(None);
        };
        if last.l.is_one() {
            return Ok(None);
        }
        let num = if last.n.is_one() {
            RealEnclosure::from_integer(0)
        } else {
            let (lo, hi) = ln_bounds(&BigRational::from_integer(last.n.clone()), bits);
            RealEnclosure::new(lo, hi, bits)
        };
        let (lo, hi) = ln_bounds(&last.l, bits);
        let den = RealEnclosure::new(lo, hi, bits).neg();
        Ok(Some(num.div(&den)?))
    }

    pub fn to_json(&self) -> Value {
        let ratio = self.ratio(DEFAULT_BITS).ok().flatten().map(|r| r.mid_f64());
        json!({
            "steps": self.steps.iter().map(|s| json!({
                "case": s.case,
                "n": s.n.to_string(),
                "l": s.l.to_string(),
                "consumed": s.consumed,
            })).collect::<Vec<_>>(),
            "exhausted": self.exhausted,
            "normalized": self.normalized,
            "ratio": ratio,
        })
    }
}

/// The three-case process that discards broken islands and tracks the
/// surviving count `n_i` and length `l_i`.
pub fn lower_bound_process(prefix: &[u64], max_steps: usize) -> Result<LowerBoundTrace> {
    if let Some(&bad) = prefix.iter().find(|&&a| a == 0) {
        return Err(Error::InvalidPartialQuotient(bad));
    }
    let mut seq: Vec<u64> = prefix.to_vec();
    let normalized = seq.len() >= 2 && seq[0] == 1;
    if normalized {
        let a2 = seq[1];
        seq.splice(0..2, [a2 + 1]);
    }
    let mut head = 0usize;
    let mut n = BigInt::one();
    let mut l = BigRational::one();
    let mut steps = Vec::new();
    let mut exhausted = false;
    let at = |seq: &[u64], i: usize| seq.get(i).copied();
    while steps.len() < max_steps {
        let Some(a1) = at(&seq, head) else {
            exhausted = true;
            break;
        };
        let Some(a2) = at(&seq, head + 1) else {
            exhausted = true;
            break;
        };
        let case = if a1 % 2 == 1 {
            3
        } else {
            match at(&seq, head + 2) {
                Some(1) => 2,
                Some(_) => 1,
                None => {
                    exhausted = true;
                    break;
                }
            }
        };
        match case {
            1 | 2 => {
                n *= BigInt::from(a2 + 1);
                l /= BigRational::from_integer(BigInt::from(a1 + 1) * BigInt::from(a2 + 1));
                if case == 1 {
                    head += 2;
                } else {
                    head += 3;
                    if let Some(a4) = seq.get_mut(head) {
                        *a4 += 1;
                    }
                }
            }
            _ => {
                l /= BigRational::from_integer(BigInt::from(a1 + 1));
                head += 1;
                seq[head] += 1;
            }
        }
        steps.push(LowerBoundStep {
            case,
            n: n.clone(),
            l: l.clone(),
            consumed: head + 1,
        });
    }
    Ok(LowerBoundTrace {
        steps,
        exhausted,
        normalized,
    })
}

/// `(log 2 − log(π/2)) / (6·log k)` with `log k ∈ [lo, hi]`.
pub fn almost_sure_constant_with(
    log_k_lo: BigRational,
    log_k_hi: BigRational,
) -> Result<RealEnclosure> {
    let bits = DEFAULT_BITS;
    let two = BigRational::from_integer(BigInt::from(2));
    let ln2 = {
        let (lo, hi) = ln_bounds(&two, bits);
        RealEnclosure::new(lo, hi, bits)
    };
    let half_pi = pi_enclosure(bits).div(&RealEnclosure::exact(two))?;
    let num = ln2.sub(&half_pi.ln()?);
    let den = RealEnclosure::new(log_k_lo, log_k_hi, bits).mul(&RealEnclosure::from_integer(6));
    num.div(&den)
}

/// The constant with `1.4097 < log k₁ < 1.4098`.
pub fn almost_sure_constant() -> Result<RealEnclosure> {
    almost_sure_constant_with(
        BigRational::new(14097.into(), 10000.into()),
        BigRational::new(14098.into(), 10000.into()),
    )
}

/// The constant with `0.9877 < log k₀ < 0.9878`.
pub fn almost_sure_constant_k0() -> Result<RealEnclosure> {
    almost_sure_constant_with(
        BigRational::new(9877.into(), 10000.into()),
        BigRational::new(9878.into(), 10000.into()),
    )
}

/// A block of `reps` copies of the pair `(2n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub n: u64,
    pub m: u64,
    pub reps: usize,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub cf: CFExpansion,
    pub blocks: Vec<Block>,
    pub estimate: DimensionEstimate,
    /// Pairs used (equals the history depth).
    pub depth: usize,
    /// `|running estimate − target|` at `depth`, counting enclosure width.
    pub error: f64,
}

const PAIR_N_MAX: u64 = 1 << 12;
const PAIR_M_MAX: u64 = 1 << 24;

/// Pair with `n ≤ n_max`, `m ≤ m_max` whose period-two dimension is closest
/// to `target`.
fn best_pair(target: f64, n_max: u64, m_max: u64) -> (u64, u64) {
    let mut best = (1, 1);
    let mut best_err = f64::INFINITY;
    for n in 1..=n_max {
        // increasing in m: locate the crossing by bisection
        let (mut lo, mut hi) = (1u64, m_max);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if period2_f64(n, mid) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        for m in [lo.saturating_sub(1).max(1), lo] {
            let err = (period2_f64(n, m) - target).abs();
            if err + 1e-12 < best_err {
                best_err = err;
                best = (n, m);
            }
        }
    }
    best
}

/// Prefix `[2n_1, m_1, …]` of blocks whose period-two dimensions approach
/// `target`, with block lengths doubling and pair ranges widening.
pub fn construct_cf_for_dimension(target: f64, depth_budget: usize) -> Result<Construction> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidArgument(format!(
            "target {target} outside [0, 1]"
        )));
    }
    let depth_budget = depth_budget.max(1);
    let bits = 64;
    let mut blocks: Vec<Block> = Vec::new();
    let mut used = 0usize;
    let mut round = 0u32;
    while used < depth_budget {
        let n_max = (4u64 << (2 * round.min(10))).min(PAIR_N_MAX);
        let m_max = (4u64 << (2 * round.min(11))).min(PAIR_M_MAX);
        let (n, m) = best_pair(target, n_max, m_max);
        let reps = (2usize << round.min(20)).min(depth_budget - used);
        match blocks.last_mut() {
            Some(b) if b.n == n && b.m == m => b.reps += reps,
            _ => blocks.push(Block { n, m, reps }),
        }
        used += reps;
        round += 1;
    }
    let entries: Vec<u64> = blocks
        .iter()
        .flat_map(|b| std::iter::repeat_n([2 * b.n, b.m], b.reps).flatten())
        .collect();
    let cf = CFExpansion::truncated(entries)?;
    let (history, broken) = prefix_history(&cf, usize::MAX, bits)?;
    let estimate = estimate(&history, broken, bits)?;
    let depth = estimate.per_depth.len();
    let v = &estimate.last().value;
    let error = (v.lo_f64() - target).abs().max((v.hi_f64() - target).abs());
    Ok(Construction {
        cf,
        blocks,
        estimate,
        depth,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::parse_cf;
    use crate::exactnum::parse_surd;

    fn rot(s: &str) -> Rotation {
        Rotation::parse(s).unwrap()
    }

    #[test]
    fn silver_ratio_estimate() {
        let e = dim_estimate(&run_frame(&rot("[(2)]"), 10).unwrap()).unwrap();
        for d in &e.per_depth {
            assert!((d.value.mid_f64() - 0.623_238_717_864_908).abs() < 1e-12);
        }
        assert!(e.is_exact());
    }

    #[test]
    fn zero_dimension_cases() {
        let e = dim_estimate(&run_frame(&rot("[3;(2)]"), 8).unwrap()).unwrap();
        assert!(e.per_depth.iter().all(|d| d.value.hi().is_zero()));
        assert!(e.broken_seen);
    }

    #[test]
    fn empty_history_is_an_error() {
        let f = run_frame(&rot("[(2)]"), 0).unwrap();
        assert!(dim_estimate(&f).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let a = closed_form_period2(1, 2).unwrap();
        assert_eq!(a.alpha, parse_surd("sqrt(2) - 1").unwrap());
        assert!((a.value.mid_f64() - 0.623_238_717_864_908).abs() < 1e-12);
        let b = closed_form_period2(1, 1).unwrap();
        assert_eq!(b.delta, parse_surd("2 - sqrt(3)").unwrap());
        assert_eq!(parse_cf("[(2,1)]").unwrap().value().unwrap(), b.alpha);
        assert!((b.value.mid_f64() - 0.526_324_480_211_926).abs() < 1e-10);
        let mut prev = 0.0;
        for m in [1, 2, 5, 20, 100, 10_000] {
            let v = closed_form_period2(1, m).unwrap().value.mid_f64();
            assert!(v > prev && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn closed_form_matches_float() {
        for (n, m) in [(1, 1), (2, 3), (7, 1), (3, 40)] {
            let exact = closed_form_period2(n, m).unwrap().value.mid_f64();
            assert!((exact - period2_f64(n, m)).abs() < 1e-12);
        }
    }

    #[test]
    fn lower_bound_examples() {
        let t = lower_bound_process(&[2, 2, 2, 2, 2, 2], 10).unwrap();
        assert_eq!(t.steps.len(), 2);
        assert!(t.steps.iter().all(|s| s.case == 1));
        assert_eq!(t.steps[1].n, BigInt::from(9));
        assert_eq!(t.steps[1].l, BigRational::new(1.into(), 81.into()));
        assert!((t.ratio(64).unwrap().unwrap().mid_f64() - 0.5).abs() < 1e-15);

        let t = lower_bound_process(&[3, 2, 2, 2], 1).unwrap();
        assert_eq!(t.steps[0].case, 3);
        assert_eq!(t.steps[0].n, BigInt::from(1));
        assert_eq!(t.steps[0].l, BigRational::new(1.into(), 4.into()));
        assert_eq!(t.steps[0].consumed, 2);

        let t = lower_bound_process(&[], 5).unwrap();
        assert!(t.steps.is_empty() && t.exhausted);
    }

    #[test]
    fn constant_is_certified() {
        let c = almost_sure_constant().unwrap();
        let lo = BigRational::new(2855.into(), 100_000.into());
        let hi = BigRational::new(2857.into(), 100_000.into());
        assert!(*c.lo() > lo && *c.hi() < hi);
        let k0 = almost_sure_constant_k0().unwrap();
        assert!(k0.lo_f64() > c.hi_f64());
    }

    #[test]
    fn prefix_history_matches_exact_frame() {
        let exact = dim_estimate(&run_frame(&rot("[(2)]"), 6).unwrap()).unwrap();
        let cf = CFExpansion::truncated(vec![2; 40]).unwrap();
        let (h, broken) = prefix_history(&cf, 6, 96).unwrap();
        let approx = estimate(&h, broken, 96).unwrap();
        for (a, b) in exact.per_depth.iter().zip(&approx.per_depth) {
            assert!(
                b.value.contains(&a.value.mid())
                    || (a.value.mid_f64() - b.value.mid_f64()).abs() < 1e-12
            );
        }
    }

    #[test]
    fn construction_hits_golden_value() {
        let c = construct_cf_for_dimension(0.623_238_717_864_908, 40).unwrap();
        assert!(c.blocks.iter().all(|b| b.n == 1 && b.m == 2));
        let v = c.estimate.per_depth[9].value.mid_f64();
        assert!((v - 0.623_238_717_864_908).abs() < 1e-6);
    }
}
