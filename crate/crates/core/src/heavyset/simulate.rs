use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Result;
use crate::exactnum::{OrbitWalker, QuadSurd};

/// Default step budget when searching for a negative partial sum.
pub const WITNESS_BUDGET: u64 = 2_000_000;

fn walker(x0: &QuadSurd, alpha: &QuadSurd, threshold: BigRational) -> Result<OrbitWalker> {
    OrbitWalker::new(x0, alpha, &[threshold])
}

/// `S_1(x), …, S_n(x)` for the weight `+1` on `[0, 1/2]`, `−1` elsewhere.
pub fn partial_sums(x: &QuadSurd, alpha: &QuadSurd, n: u64) -> Result<Vec<i64>> {
    let mut w = walker(x, alpha, BigRational::new(1.into(), 2.into()))?;
    let mut s = 0i64;
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        s += if w.at_or_below(0) { 1 } else { -1 };
        out.push(s);
        w.advance();
    }
    Ok(out)
}

/// First `n ≤ budget` with `S_n(x) < 0`.
pub fn find_witness(x: &QuadSurd, alpha: &QuadSurd, budget: u64) -> Result<Option<u64>> {
    let mut w = walker(x, alpha, BigRational::new(1.into(), 2.into()))?;
    let mut s = 0i64;
    for n in 1..=budget {
        s += if w.at_or_below(0) { 1 } else { -1 };
        if s < 0 {
            return Ok(Some(n));
        }
        w.advance();
    }
    Ok(None)
}

/// First `n ≤ budget` with `Σ_{i=1..n} (k·χ_{[0,1/k]}({iα}) − 1) < 0`.
pub fn find_k_witness(alpha: &QuadSurd, k: u64, budget: u64) -> Result<Option<u64>> {
    let start = alpha.fract();
    let mut w = walker(
        &start,
        alpha,
        BigRational::new(BigInt::from(1), BigInt::from(k)),
    )?;
    let k = k as i64;
    let mut s = 0i64;
    for n in 1..=budget {
        s += if w.at_or_below(0) { k - 1 } else { -1 };
        if s < 0 {
            return Ok(Some(n));
        }
        w.advance();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_surd;

    #[test]
    fn sums_step_by_one() {
        let a = parse_surd("sqrt(2) - 1").unwrap();
        let s = partial_sums(&QuadSurd::zero(), &a, 100).unwrap();
        assert_eq!(s[0], 1);
        let mut prev = 0;
        for v in s {
            assert_eq!((v - prev).abs(), 1);
            prev = v;
        }
    }

    #[test]
    fn witness_outside_a() {
        let a = parse_surd("sqrt(2) - 1").unwrap();
        assert_eq!(
            find_witness(&QuadSurd::ratio(3, 5), &a, 10).unwrap(),
            Some(1)
        );
        assert_eq!(find_witness(&QuadSurd::zero(), &a, 1000).unwrap(), None);
    }

    #[test]
    fn k_sums_for_one_third() {
        assert_eq!(find_k_witness(&QuadSurd::ratio(1, 3), 3, 3).unwrap(), None);
    }
}
