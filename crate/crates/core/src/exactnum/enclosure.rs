//! Rigorous rational enclosures of real numbers.
//!
//! Every operation rounds outward to a dyadic grid of `precision_bits`
//! fractional bits so numerators stay bounded while the true value is never
//! lost.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::QuadSurd;
use crate::error::{Error, Result};

/// Default working precision for logarithms and float reporting.
pub const DEFAULT_BITS: u32 = 128;

/// Closed interval `[lo, hi]` known to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: BigRational,
    hi: BigRational,
    precision_bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Largest multiple of 2^-bits not above `q`.
pub fn round_down(q: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let n = (q * BigRational::from_integer(scale.clone()))
        .floor()
        .to_integer();
    BigRational::new(n, scale)
}

/// Smallest multiple of 2^-bits not below `q`.
pub fn round_up(q: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let n = (q * BigRational::from_integer(scale.clone()))
        .ceil()
        .to_integer();
    BigRational::new(n, scale)
}

impl RealEnclosure {
    pub fn new(lo: BigRational, hi: BigRational, precision_bits: u32) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order");
        RealEnclosure {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn exact(q: BigRational) -> Self {
        RealEnclosure {
            lo: q.clone(),
            hi: q,
            precision_bits: u32::MAX,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Enclosure of an exact surd at `bits` fractional bits.
    pub fn of_surd(x: &QuadSurd, bits: u32) -> Self {
        if let Some(q) = x.to_rational() {
            return Self::exact(q);
        }
        let (lo, hi) = x.bracket(bits + 2);
        Self::rounded(lo, hi, bits)
    }

    fn rounded(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        RealEnclosure {
            lo: round_down(&lo, bits),
            hi: round_up(&hi, bits),
            precision_bits: bits,
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_surd(&self, x: &QuadSurd) -> bool {
        let lo = QuadSurd::from_rational(self.lo.clone());
        let hi = QuadSurd::from_rational(self.hi.clone());
        lo.compare(x) != Ok(Ordering::Greater) && x.compare(&hi) != Ok(Ordering::Greater)
    }

    pub fn is_subset_of(&self, other: &RealEnclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Decided order between two enclosures, or `None` if they overlap.
    pub fn compare(&self, other: &RealEnclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn bits_with(&self, other: &RealEnclosure) -> u32 {
        self.precision_bits.min(other.precision_bits).min(4096)
    }

    fn finish(lo: BigRational, hi: BigRational, bits: u32) -> Self {
        if bits >= 4096 && lo == hi {
            return Self::exact(lo);
        }
        let bits = bits.min(4096);
        Self::rounded(lo, hi, bits)
    }

    pub fn add(&self, other: &RealEnclosure) -> Self {
        Self::finish(
            &self.lo + &other.lo,
            &self.hi + &other.hi,
            self.bits_with(other),
        )
    }

    pub fn sub(&self, other: &RealEnclosure) -> Self {
        Self::finish(
            &self.lo - &other.hi,
            &self.hi - &other.lo,
            self.bits_with(other),
        )
    }

    pub fn neg(&self) -> Self {
        RealEnclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &RealEnclosure) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Self::finish(lo, hi, self.bits_with(other))
    }

    pub fn div(&self, other: &RealEnclosure) -> Result<Self> {
        if other.lo <= BigRational::zero() && other.hi >= BigRational::zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = RealEnclosure {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
            precision_bits: other.precision_bits,
        };
        Ok(self.mul(&inv))
    }

    /// Convex hull of two enclosures.
    pub fn hull(&self, other: &RealEnclosure) -> Self {
        RealEnclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    /// Natural logarithm; requires a strictly positive enclosure.
    pub fn ln(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::NonPositiveLog);
        }
        let bits = if self.precision_bits == u32::MAX {
            DEFAULT_BITS
        } else {
            self.precision_bits.clamp(64, 1024)
        };
        let (lo, _) = ln_bounds(&self.lo, bits);
        let (_, hi) = ln_bounds(&self.hi, bits);
        Ok(RealEnclosure {
            lo,
            hi,
            precision_bits: bits,
        })
    }
}

/// Sum of `atanh(t) = Σ t^(2j+1)/(2j+1)` bounded from below and above for
/// `0 ≤ t ≤ 1/3`.
fn atanh_bounds(t: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let work = bits + 16;
    let t_lo = round_down(t, work);
    let t_hi = round_up(t, work);
    let t2_lo = round_down(&(&t_lo * &t_lo), work);
    let t2_hi = round_up(&(&t_hi * &t_hi), work);
    let cutoff = BigRational::new(BigInt::one(), pow2(bits + 4));

    let mut sum_lo = BigRational::zero();
    let mut sum_hi = BigRational::zero();
    let mut pow_lo = t_lo;
    let mut pow_hi = t_hi;
    let mut j: i64 = 0;
    loop {
        let k = BigRational::from_integer(BigInt::from(2 * j + 1));
        sum_lo += round_down(&(&pow_lo / &k), work);
        sum_hi += round_up(&(&pow_hi / &k), work);
        pow_lo = round_down(&(&pow_lo * &t2_lo), work);
        pow_hi = round_up(&(&pow_hi * &t2_hi), work);
        j += 1;
        if pow_hi < cutoff {
            break;
        }
    }
    // Tail ≤ t^(2j+1) / ((2j+1)(1 − t²)) ≤ (9/8)·t^(2j+1)/(2j+1) for t ≤ 1/3.
    let k = BigRational::from_integer(BigInt::from(2 * j + 1));
    let nine_eighths = BigRational::new(BigInt::from(9), BigInt::from(8));
    sum_hi += round_up(&(&pow_hi * nine_eighths / k), work);
    (round_down(&sum_lo, bits), round_up(&sum_hi, bits))
}

/// Bounds on `ln 2`.
pub fn ln2_bounds(bits: u32) -> (BigRational, BigRational) {
    let (lo, hi) = atanh_bounds(&BigRational::new(BigInt::one(), BigInt::from(3)), bits + 2);
    let two = BigRational::from_integer(BigInt::from(2));
    (round_down(&(lo * &two), bits), round_up(&(hi * two), bits))
}

/// Rigorous bounds on `ln q` for rational `q > 0`.
pub fn ln_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(q.is_positive(), "ln of non-positive rational");
    // q = 2^k · y with 1 ≤ y < 2
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let y = loop {
        let y = if k >= 0 {
            q / BigRational::from_integer(BigInt::one() << k as usize)
        } else {
            q * BigRational::from_integer(BigInt::one() << (-k) as usize)
        };
        if y < BigRational::one() {
            k -= 1;
        } else if y >= BigRational::from_integer(BigInt::from(2)) {
            k += 1;
        } else {
            break y;
        }
    };
    let one = BigRational::one();
    let t = (&y - &one) / (&y + &one);
    let work = bits + 8 + (64 - k.unsigned_abs().leading_zeros());
    let (a_lo, a_hi) = atanh_bounds(&t, work);
    let two = BigRational::from_integer(BigInt::from(2));
    let (l2_lo, l2_hi) = ln2_bounds(work);
    let kq = BigRational::from_integer(BigInt::from(k));
    let (kl_lo, kl_hi) = if k >= 0 {
        (&kq * l2_lo, &kq * l2_hi)
    } else {
        (&kq * l2_hi, &kq * l2_lo)
    };
    (
        round_down(&(kl_lo + &two * a_lo), bits),
        round_up(&(kl_hi + &two * a_hi), bits),
    )
}

/// Partial sums of the alternating arctangent series bracketing `atan(1/n)`.
fn atan_inv_bounds(n: i64, terms: usize) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let mut pow = x.clone();
    let mut sum = BigRational::zero();
    let mut prev = BigRational::zero();
    for j in 0..terms {
        prev = sum.clone();
        let term = &pow / BigRational::from_integer(BigInt::from(2 * j as i64 + 1));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &x2;
    }
    if prev < sum {
        (prev, sum)
    } else {
        (sum, prev)
    }
}

/// Enclosure of π from Machin's formula.
pub fn pi_enclosure(bits: u32) -> RealEnclosure {
    let terms = (bits as usize) / 4 + 4;
    let (a_lo, a_hi) = atan_inv_bounds(5, terms);
    let (b_lo, b_hi) = atan_inv_bounds(239, terms);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    let lo = &sixteen * a_lo - &four * b_hi;
    let hi = sixteen * a_hi - four * b_lo;
    RealEnclosure::rounded(lo, hi, bits)
}

/// A number that can tighten its own enclosure on request.
pub trait Refinable {
    fn enclosure(&self) -> &RealEnclosure;
    /// Tighten the enclosure; returns `false` if no further progress is possible.
    fn refine(&mut self) -> bool;
}

/// Refinable view of an exact surd.
#[derive(Clone, Debug)]
pub struct SurdApprox {
    value: QuadSurd,
    enclosure: RealEnclosure,
}

impl SurdApprox {
    pub fn new(value: QuadSurd, bits: u32) -> Self {
        let enclosure = RealEnclosure::of_surd(&value, bits);
        SurdApprox { value, enclosure }
    }

    pub fn value(&self) -> &QuadSurd {
        &self.value
    }
}

impl Refinable for SurdApprox {
    fn enclosure(&self) -> &RealEnclosure {
        &self.enclosure
    }

    fn refine(&mut self) -> bool {
        if self.enclosure.lo == self.enclosure.hi {
            return false;
        }
        let bits = self.enclosure.precision_bits.saturating_mul(2);
        self.enclosure = RealEnclosure::of_surd(&self.value, bits);
        true
    }
}

/// Outcome of an enclosure-based comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Decided(Ordering),
    Undecided { bits: u32 },
}

/// Compare two refinable numbers, refining both until their enclosures
/// separate or the bit budget is spent.
pub fn compare_refining(
    x: &mut dyn Refinable,
    y: &mut dyn Refinable,
    budget_bits: u32,
) -> Decision {
    loop {
        if let Some(ord) = x.enclosure().compare(y.enclosure()) {
            return Decision::Decided(ord);
        }
        let bits = [x.enclosure(), y.enclosure()]
            .iter()
            .filter(|e| e.lo != e.hi)
            .map(|e| e.precision_bits)
            .max()
            .unwrap_or(0);
        if bits >= budget_bits {
            return Decision::Undecided { bits };
        }
        let moved_x = x.refine();
        let moved_y = y.refine();
        if !moved_x && !moved_y {
            return Decision::Undecided { bits };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_matches_float() {
        let (lo, hi) = ln2_bounds(128);
        let l = std::f64::consts::LN_2;
        assert!(lo.to_f64().unwrap() <= l && l <= hi.to_f64().unwrap());
        assert!((&hi - &lo).to_f64().unwrap() < 1e-36);
    }

    #[test]
    fn ln_of_various_rationals() {
        for (n, d) in [
            (1i64, 1i64),
            (3, 1),
            (1, 7),
            (1000, 3),
            (5, 4),
            (1, 1_000_000),
        ] {
            let q = BigRational::new(BigInt::from(n), BigInt::from(d));
            let (lo, hi) = ln_bounds(&q, 96);
            let want = (n as f64 / d as f64).ln();
            assert!(lo <= hi);
            assert!((lo.to_f64().unwrap() - want).abs() < 1e-12, "{n}/{d}");
            assert!((hi.to_f64().unwrap() - want).abs() < 1e-12, "{n}/{d}");
        }
    }

    #[test]
    fn pi_encloses() {
        let pi = pi_enclosure(128);
        assert!(pi.lo_f64() <= std::f64::consts::PI && std::f64::consts::PI <= pi.hi_f64());
        assert!(pi.width_f64() < 1e-30);
    }

    #[test]
    fn refinement_shrinks_width() {
        let s = QuadSurd::sqrt_rational(&BigRational::from_integer(BigInt::from(2))).unwrap();
        let mut a = SurdApprox::new(s, 16);
        let w0 = a.enclosure().width();
        assert!(a.refine());
        assert!(a.enclosure().width() < w0);
    }

    #[test]
    fn refining_compare_decides_close_values() {
        let s = QuadSurd::sqrt_rational(&BigRational::from_integer(BigInt::from(2))).unwrap();
        let q = QuadSurd::ratio(1_414_213_562, 1_000_000_000);
        let mut x = SurdApprox::new(s.clone(), 8);
        let mut y = SurdApprox::new(q, 8);
        assert_eq!(
            compare_refining(&mut x, &mut y, 256),
            Decision::Decided(Ordering::Greater)
        );
        let mut x = SurdApprox::new(s.clone(), 8);
        let mut y = SurdApprox::new(s, 8);
        assert!(matches!(
            compare_refining(&mut x, &mut y, 64),
            Decision::Undecided { .. }
        ));
    }

    #[test]
    fn interval_ops_contain_true_value() {
        let a = RealEnclosure::of_surd(
            &QuadSurd::sqrt_rational(&BigRational::from_integer(BigInt::from(3))).unwrap(),
            64,
        );
        let b = RealEnclosure::exact(BigRational::new(BigInt::from(-2), BigInt::from(7)));
        let p = a.mul(&b);
        let want = 3f64.sqrt() * (-2.0 / 7.0);
        assert!(p.lo_f64() <= want + 1e-15 && want - 1e-15 <= p.hi_f64());
        assert!(p.width_f64() < 1e-15);
        let q = a.div(&b).unwrap();
        let want = 3f64.sqrt() / (-2.0 / 7.0);
        assert!(q.lo_f64() <= want + 1e-14 && want - 1e-14 <= q.hi_f64());
        assert!(q.contains_surd(
            &(QuadSurd::sqrt_rational(&BigRational::from_integer(BigInt::from(3))).unwrap()
                / QuadSurd::ratio(-2, 7))
        ));
    }
}
