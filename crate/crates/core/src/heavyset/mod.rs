//! Queries on heavy sets: covers, membership, the strictly heavy point, the
//! exact rational heavy set, word reduction and the `[0, 1/k]` criterion.

mod intervals;
mod kheavy;
mod rational;
mod simulate;
mod words;

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

pub use intervals::{Interval, IntervalSet};
pub use kheavy::{k_heavy_criterion, k_heavy_simulate, CriterionScope, KHeavyCriterion};
pub use rational::{heavy_grid, rational_heavy_set, rational_heavy_set_renormalized};
pub use simulate::{find_k_witness, find_witness, partial_sums, WITNESS_BUDGET};
pub use words::{word_reduce, SignedWord};

use crate::contfrac::{CFExpansion, Rotation};
use crate::error::{Error, Result};
use crate::exactnum::{BigRational, QuadSurd, RealEnclosure};
use crate::renorm::{run, Frame, IslandPlacement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The renormalized state recurred after this many steps.
    Cycle(u64),
    /// No negative sum among the first `n`.
    Simulated(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Heavy(Certificate),
    /// `S_n(x) < 0` for this `n`.
    NotHeavy(u64),
    /// Undecided after this many renormalization steps.
    Unknown(u64),
}

impl Verdict {
    pub fn is_heavy(&self) -> bool {
        matches!(self, Verdict::Heavy(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Heavy(Certificate::Cycle(p)) => {
                json!({"verdict": "heavy", "certificate": "cycle", "period": p})
            }
            Verdict::Heavy(Certificate::Simulated(n)) => {
                json!({"verdict": "heavy", "certificate": "simulated", "n_checked": n})
            }
            Verdict::NotHeavy(n) => json!({"verdict": "not_heavy", "witness_n": n}),
            Verdict::Unknown(d) => json!({"verdict": "unknown", "depth_reached": d}),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Heavy(Certificate::Cycle(p)) => write!(f, "heavy (state cycle of length {p})"),
            Verdict::Heavy(Certificate::Simulated(n)) => {
                write!(f, "heavy (no negative sum up to n = {n})")
            }
            Verdict::NotHeavy(n) => write!(f, "not heavy (S_{n} < 0)"),
            Verdict::Unknown(d) => write!(f, "unknown (depth {d} reached)"),
        }
    }
}

/// Union of the island extents at `depth`; always contains `H_α`.
pub fn cover(rotation: &Rotation, depth: usize) -> Result<IntervalSet> {
    let state = run(rotation, depth)?;
    Ok(IntervalSet::new(
        state
            .islands
            .iter()
            .map(|i| {
                let (lo, hi) = i.extent();
                Interval::closed(lo, hi)
            })
            .collect(),
    ))
}

fn check_point(x: &QuadSurd) -> Result<()> {
    if x.is_negative() || *x >= QuadSurd::one() {
        return Err(Error::PointOutOfRange(x.to_string()));
    }
    Ok(())
}

fn witness_or_unknown(x: &QuadSurd, alpha: &QuadSurd, depth: u64) -> Result<Verdict> {
    Ok(match find_witness(x, alpha, WITNESS_BUDGET)? {
        Some(n) => Verdict::NotHeavy(n),
        None => Verdict::Unknown(depth),
    })
}

/// Decide whether `x` is heavy.
///
/// Rational `α`: one full period is simulated exactly. Quadratic `α`: the
/// point is followed through the islands; a repeated local state (tail of
/// the expansion, local coordinate, window) proves heaviness, and leaving
/// every island is confirmed by an exact negative partial sum.
pub fn member(rotation: &Rotation, x: &QuadSurd, max_depth: usize) -> Result<Verdict> {
    check_point(x)?;
    if *x > QuadSurd::ratio(1, 2) {
        return Ok(Verdict::NotHeavy(1));
    }
    let Some(alpha) = rotation.value() else {
        return Ok(Verdict::Unknown(0));
    };
    if !x.is_rational() && !x.compatible(alpha) {
        return Err(Error::IncompatibleRadicands(
            x.d().to_string(),
            alpha.d().to_string(),
        ));
    }
    if let Some(a) = alpha.to_rational() {
        let period =
            a.denom().to_string().parse::<u64>().map_err(|_| {
                Error::InvalidArgument(format!("period of {a} too long to simulate"))
            })?;
        return Ok(match find_witness(x, alpha, period)? {
            Some(n) => Verdict::NotHeavy(n),
            None => Verdict::Heavy(Certificate::Cycle(period)),
        });
    }

    let mut frame = Frame::new(rotation)?;
    let mut tau = x.clone();
    let mut window = IslandPlacement::root();
    let mut seen: HashMap<(CFExpansion, QuadSurd, QuadSurd, QuadSurd), u64> = HashMap::new();
    let mut steps = 0u64;
    loop {
        let key = (
            frame.cf_tail.clone(),
            tau.clone(),
            window.w_lo.clone(),
            window.w_hi.clone(),
        );
        if let Some(&first) = seen.get(&key) {
            return Ok(Verdict::Heavy(Certificate::Cycle(steps - first)));
        }
        seen.insert(key, steps);
        if frame.depth >= max_depth {
            return Ok(Verdict::Unknown(frame.depth as u64));
        }
        let t = frame.transition()?;
        let Some(child) = frame.child_containing(&t, &tau)? else {
            return witness_or_unknown(x, alpha, frame.depth as u64);
        };
        let Some(next) = window.compose(&child) else {
            return witness_or_unknown(x, alpha, frame.depth as u64);
        };
        tau = child.unmap(&tau);
        let on_cut = |w: &QuadSurd| *w == tau && !w.is_zero() && *w != QuadSurd::ratio(1, 2);
        if on_cut(&next.w_lo) || on_cut(&next.w_hi) {
            return witness_or_unknown(x, alpha, frame.depth as u64);
        }
        window = IslandPlacement {
            offset: QuadSurd::zero(),
            scale: QuadSurd::one(),
            orientation: 1,
            ..next
        };
        frame = t.next;
        steps += 1;
    }
}

/// Enclosure of the unique strictly heavy point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictPoint {
    pub enclosure: RealEnclosure,
    /// Exact value when `α` is a quadratic irrational.
    pub exact: Option<QuadSurd>,
    /// The enclosure meets the requested tolerance.
    pub within_tol: bool,
}

fn bits_for(tol: f64) -> Result<u32> {
    if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    Ok(((-tol.log2()).ceil().max(1.0) as u32 + 2).min(4096))
}

const MAX_POINT_STEPS: usize = 100_000;

/// The point kept by always descending into the least complete child.
pub fn strictly_heavy_point(rotation: &Rotation, tol: f64) -> Result<StrictPoint> {
    let bits = bits_for(tol)?;
    if rotation.is_rational() {
        return Err(Error::RationalRotation(rotation.to_string()));
    }
    let tol_q =
        BigRational::from_float(tol).ok_or_else(|| Error::InvalidArgument(tol.to_string()))?;
    if let Some(alpha) = rotation.value() {
        let x = exact_strict_point(rotation.cf(), alpha)?;
        let enclosure = RealEnclosure::of_surd(&x, bits);
        let within_tol = enclosure.width() <= tol_q;
        return Ok(StrictPoint {
            enclosure,
            exact: Some(x),
            within_tol,
        });
    }
    let enclosure = truncated_strict_point(rotation.cf(), bits)?;
    let within_tol = enclosure.width() <= tol_q;
    Ok(StrictPoint {
        enclosure,
        exact: None,
        within_tol,
    })
}

fn exact_strict_point(cf: &CFExpansion, alpha: &QuadSurd) -> Result<QuadSurd> {
    let half = QuadSurd::ratio(1, 2);
    let mut cf = cf.clone();
    let mut alpha = alpha.clone();
    let (mut off, mut sc) = (QuadSurd::zero(), QuadSurd::one());
    let mut seen: HashMap<CFExpansion, (QuadSurd, QuadSurd)> = HashMap::new();
    for _ in 0..MAX_POINT_STEPS {
        if let Some((off1, sc1)) = seen.get(&cf) {
            // off + sc·τ = off1 + sc1·P(τ) with P(τ) = p0 + ps·τ; take P's fixed point.
            let ps = &sc / sc1;
            let p0 = &(&off - off1) / sc1;
            let fixed = &p0 / &(&QuadSurd::one() - &ps);
            return Ok(off1 + &(sc1 * &fixed));
        }
        seen.insert(cf.clone(), (off.clone(), sc.clone()));
        let a1 = cf.get(0).ok_or(Error::EmptyExpansion)?;
        if a1 == 1 {
            let a2 = cf.get(1).ok_or(Error::EmptyExpansion)?;
            off = &off + &(&sc * &half);
            sc = -sc;
            cf = cf.replace_front(2, &[a2 + 1])?;
            alpha = &QuadSurd::one() - &alpha;
            continue;
        }
        let two_n = QuadSurd::from_integer(a1 - a1 % 2);
        let delta = &QuadSurd::one() - &(&two_n * &alpha);
        sc = &sc * &delta;
        if a1 % 2 == 0 {
            cf = cf.drop_front(2)?;
            alpha = (&alpha / &delta).fract();
        } else {
            cf = cf.replace_front(1, &[1])?;
            alpha = &alpha / &delta;
        }
    }
    Err(Error::PeriodNotFound(MAX_POINT_STEPS))
}

fn truncated_strict_point(cf: &CFExpansion, bits: u32) -> Result<RealEnclosure> {
    let half = RealEnclosure::exact(BigRational::new(1.into(), 2.into()));
    let one = RealEnclosure::from_integer(1);
    let mut cf = cf.clone();
    let (mut off, mut sc) = (RealEnclosure::from_integer(0), one.clone());
    while let Some(a1) = cf.get(0) {
        if a1 == 1 {
            let Some(a2) = cf.get(1) else { break };
            off = off.add(&sc.mul(&half));
            sc = sc.neg();
            cf = cf.replace_front(2, &[a2 + 1])?;
            continue;
        }
        if a1 % 2 == 0 && cf.get(1).is_none() {
            break;
        }
        let alpha = cf.enclosure(bits + 8);
        let two_n = RealEnclosure::from_integer((a1 - a1 % 2) as i64);
        let delta = one.sub(&two_n.mul(&alpha));
        sc = sc.mul(&delta);
        cf = if a1 % 2 == 0 {
            cf.drop_front(2)?
        } else {
            cf.replace_front(1, &[1])?
        };
    }
    let end = off.add(&sc.mul(&half));
    Ok(off.hull(&end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_surd;

    fn rot(s: &str) -> Rotation {
        Rotation::parse(s).unwrap()
    }

    #[test]
    fn cover_examples() {
        let c = cover(&rot("sqrt(2) - 1"), 1).unwrap();
        let s = parse_surd("3 - 2*sqrt(2)").unwrap();
        assert_eq!(c.len(), 3);
        for (k, i) in c.intervals().iter().enumerate() {
            assert_eq!(i.lo, &QuadSurd::from(k as i64) * &s);
            assert_eq!(i.length(), &s / &QuadSurd::from(2));
        }
        let c0 = cover(&rot("2/7"), 0).unwrap();
        assert_eq!(c0.to_string(), "[0, 1/2]");
    }

    #[test]
    fn member_examples() {
        let silver = rot("sqrt(2) - 1");
        assert_eq!(
            member(&silver, &QuadSurd::ratio(3, 5), 10).unwrap(),
            Verdict::NotHeavy(1)
        );
        assert!(member(&silver, &QuadSurd::zero(), 10).unwrap().is_heavy());
        let odd = rot("(2 - sqrt(2))/2");
        let p = parse_surd("(2 - sqrt(2))/4").unwrap();
        assert!(member(&odd, &p, 20).unwrap().is_heavy());
        assert!(member(&silver, &QuadSurd::one(), 5).is_err());
    }

    #[test]
    fn member_rational() {
        let r = rot("1/3");
        assert_eq!(
            member(&r, &QuadSurd::ratio(2, 5), 0).unwrap(),
            Verdict::Heavy(Certificate::Cycle(3))
        );
        assert!(matches!(
            member(&r, &QuadSurd::ratio(1, 4), 0).unwrap(),
            Verdict::NotHeavy(_)
        ));
    }

    #[test]
    fn member_agrees_with_simulation() {
        let a = parse_surd("sqrt(2) - 1").unwrap();
        let r = Rotation::from_value(&a).unwrap();
        for j in 0..60 {
            let x = QuadSurd::ratio(j, 120);
            match member(&r, &x, 30).unwrap() {
                Verdict::NotHeavy(n) => {
                    assert!(partial_sums(&x, &a, n).unwrap()[n as usize - 1] < 0)
                }
                Verdict::Heavy(_) => assert_eq!(find_witness(&x, &a, 20_000).unwrap(), None),
                Verdict::Unknown(_) => {}
            }
        }
    }

    #[test]
    fn strict_point_examples() {
        let p = strictly_heavy_point(&rot("(2 - sqrt(2))/2"), 1e-10).unwrap();
        assert_eq!(p.exact, Some(parse_surd("(2 - sqrt(2))/4").unwrap()));
        assert!(p.within_tol);
        let q = strictly_heavy_point(&rot("sqrt(2) - 1"), 1e-6).unwrap();
        assert!(q.enclosure.width_f64() <= 1e-6);
        let x = q.exact.unwrap();
        assert!(member(&rot("sqrt(2) - 1"), &x, 20).unwrap().is_heavy());
        assert!(matches!(
            strictly_heavy_point(&rot("1/3"), 1e-6),
            Err(Error::RationalRotation(_))
        ));
    }

    #[test]
    fn strict_point_from_truncation() {
        let p = strictly_heavy_point(&rot("[3,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2;?]"), 1e-3).unwrap();
        let want = parse_surd("(2 - sqrt(2))/4").unwrap();
        assert!(p.enclosure.contains_surd(&want));
        assert!(p.within_tol);
    }
}
