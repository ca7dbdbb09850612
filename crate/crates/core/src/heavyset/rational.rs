use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::intervals::{Interval, IntervalSet};
use crate::contfrac::Rotation;
use crate::error::{Error, Result};
use crate::exactnum::{BigRational, QuadSurd};
use crate::renorm::{run, IslandPlacement};

fn check_pq(p: u64, q: u64) -> Result<()> {
    if p == 0 || p >= q || p.gcd(&q) != 1 {
        return Err(Error::InvalidRational { p, q });
    }
    Ok(())
}

/// Heaviness of every grid point `X/(4q)`, `X = 0..=2q`.
///
/// Even `X` include every critical point; odd `X` stand for the open cell
/// around them, on which the orbit's hit pattern is constant.
pub fn heavy_grid(p: u64, q: u64) -> Result<Vec<bool>> {
    check_pq(p, q)?;
    let n = 4 * q;
    let half = 2 * q;
    let step = 4 * p;
    Ok((0..=half)
        .map(|x| {
            let mut pos = x;
            let mut sum: i64 = 0;
            for _ in 0..q {
                sum += if pos <= half { 1 } else { -1 };
                if sum < 0 {
                    return false;
                }
                pos = (pos + step) % n;
            }
            true
        })
        .collect())
}

/// Exact heavy set of rotation by `p/q`.
pub fn rational_heavy_set(p: u64, q: u64) -> Result<IntervalSet> {
    let grid = heavy_grid(p, q)?;
    let n = 4 * q as i64;
    let at = |x: usize| QuadSurd::ratio(x as i64, n);
    let mut pieces = Vec::new();
    let mut x = 0;
    while x < grid.len() {
        if !grid[x] {
            x += 1;
            continue;
        }
        let start = x;
        while x + 1 < grid.len() && grid[x + 1] {
            x += 1;
        }
        let end = x;
        let (lo, lo_closed) = if start % 2 == 1 {
            (at(start - 1), false)
        } else {
            (at(start), true)
        };
        let (hi, hi_closed) = if end % 2 == 1 {
            (at(end + 1), false)
        } else {
            (at(end), true)
        };
        pieces.push(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        });
        x += 1;
    }
    Ok(IntervalSet::new(pieces))
}

fn place(island: &IslandPlacement, local: &Interval) -> Option<Interval> {
    let (lo, lo_closed) = if local.lo > island.w_lo {
        (local.lo.clone(), local.lo_closed)
    } else {
        (
            island.w_lo.clone(),
            local.lo_closed || local.lo < island.w_lo,
        )
    };
    let (hi, hi_closed) = if local.hi < island.w_hi {
        (local.hi.clone(), local.hi_closed)
    } else {
        (
            island.w_hi.clone(),
            local.hi_closed || local.hi > island.w_hi,
        )
    };
    let clipped = Interval {
        lo,
        hi,
        lo_closed,
        hi_closed,
    };
    if clipped.is_empty() {
        return None;
    }
    let (a, b) = (island.map(&clipped.lo), island.map(&clipped.hi));
    Some(if island.orientation > 0 {
        Interval {
            lo: a,
            hi: b,
            lo_closed: clipped.lo_closed,
            hi_closed: clipped.hi_closed,
        }
    } else {
        Interval {
            lo: b,
            hi: a,
            lo_closed: clipped.hi_closed,
            hi_closed: clipped.lo_closed,
        }
    })
}

/// Heavy set of `p/q` computed by renormalizing until fewer than three
/// partial quotients remain, then solving the residual rotation on the grid
/// inside every island.
pub fn rational_heavy_set_renormalized(p: u64, q: u64) -> Result<IntervalSet> {
    check_pq(p, q)?;
    let rot = Rotation::from_value(&QuadSurd::from_rational(BigRational::new(
        p.into(),
        q.into(),
    )))?;
    let state = run(&rot, usize::MAX)?;
    let residual =
        state.frame.alpha.to_rational().ok_or_else(|| {
            Error::InvalidArgument("rational rotation renormalized to a surd".into())
        })?;
    let (rp, rq) = (residual.numer(), residual.denom());
    if rp.is_zero() || rp >= rq {
        return Err(Error::OutOfUnitInterval(residual.to_string()));
    }
    let to_u64 = |n: &BigInt| {
        n.to_u64()
            .ok_or_else(|| Error::PartialQuotientTooLarge(n.to_string()))
    };
    let base = rational_heavy_set(to_u64(rp)?, to_u64(rq)?)?;
    let pieces = state
        .islands
        .iter()
        .flat_map(|island| {
            base.intervals()
                .iter()
                .filter_map(move |i| place(island, i))
        })
        .collect();
    Ok(IntervalSet::new(pieces))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> QuadSurd {
        QuadSurd::ratio(n, d)
    }

    #[test]
    fn one_half() {
        assert_eq!(rational_heavy_set(1, 2).unwrap().to_string(), "[0, 1/2]");
    }

    #[test]
    fn one_third() {
        assert_eq!(
            rational_heavy_set(1, 3).unwrap().to_string(),
            "[0, 1/6] ∪ [1/3, 1/2]"
        );
    }

    #[test]
    fn two_fifths() {
        assert_eq!(
            rational_heavy_set(2, 5).unwrap().to_string(),
            "[0, 1/10] ∪ [1/5, 3/10] ∪ [2/5, 1/2]"
        );
    }

    #[test]
    fn invalid_input() {
        for (p, q) in [(0, 3), (3, 3), (2, 4), (5, 3)] {
            assert!(rational_heavy_set(p, q).is_err());
        }
    }

    #[test]
    fn renormalized_matches_grid_on_small_denominators() {
        for qq in 2..=20u64 {
            for pp in 1..qq {
                if pp.gcd(&qq) != 1 {
                    continue;
                }
                let a = rational_heavy_set(pp, qq).unwrap();
                let b = rational_heavy_set_renormalized(pp, qq).unwrap();
                for j in 0..2 * qq * qq {
                    let x = q((2 * j + 1) as i64, (4 * qq * qq) as i64);
                    assert_eq!(a.contains(&x), b.contains(&x), "{pp}/{qq} at {x}");
                }
            }
        }
    }
}
