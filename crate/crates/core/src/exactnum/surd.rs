use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact element `a + b·√d` of a real quadratic field, `d` square-free.
///
/// The representation is canonical: rationals always carry `b = 0, d = 1`,
/// and irrational values have `b ≠ 0` with square-free `d > 1`. Structural
/// equality is therefore value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

/// Arithmetic operation selector for [`surd_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurdOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Apply `op` to two surds, reporting mixed radicands and division by zero.
pub fn surd_arith(op: SurdOp, x: &QuadSurd, y: &QuadSurd) -> Result<QuadSurd> {
    match op {
        SurdOp::Add => x.try_add(y),
        SurdOp::Sub => x.try_sub(y),
        SurdOp::Mul => x.try_mul(y),
        SurdOp::Div => x.try_div(y),
    }
}

/// Split `n = s²·d` with `d` square-free.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut rem = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rem {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            square *= &p;
        }
        if (&rem % &p).is_zero() {
            rem /= &p;
            free *= &p;
        }
        p += 1u32;
    }
    // rem now has at most two prime factors, both larger than every tried p.
    let r = rem.sqrt();
    if &r * &r == rem {
        square *= r;
    } else {
        free *= rem;
    }
    (square, free)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadSurd {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadSurd {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `num/den` as a surd.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b·√d` for any non-negative integer `d`; square factors of `d` are
    /// folded into `b`.
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidArgument(format!("negative radicand {d}")));
        }
        let (s, free) = squarefree_split(&d.to_biguint().expect("non-negative"));
        let b = b * BigRational::from_integer(BigInt::from(s));
        Ok(Self::canonical(a, b, BigInt::from(free)))
    }

    /// `√q` for a non-negative rational `q`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidArgument(format!("sqrt of negative {q}")));
        }
        // √(n/m) = √(n·m)/m
        let m = q.denom().clone();
        let nm = q.numer() * &m;
        Self::new(BigRational::zero(), BigRational::new(BigInt::one(), m), nm)
    }

    fn canonical(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            Self::from_rational(a)
        } else if d.is_one() {
            Self::from_rational(a + b)
        } else {
            QuadSurd { a, b, d }
        }
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of the radical.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Square-free radicand (1 for rationals).
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.a.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn radicand_with(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::IncompatibleRadicands(
                self.d.to_string(),
                other.d.to_string(),
            )),
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.radicand_with(other).is_ok()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.radicand_with(other)?;
        Ok(Self::canonical(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let d = self.radicand_with(other)?;
        Ok(Self::canonical(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.radicand_with(other)?;
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * &dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.radicand_with(other)?;
        let norm = other.norm();
        let num = self.try_mul(&other.conj())?;
        Ok(Self::canonical(&num.a / &norm, &num.b / &norm, num.d))
    }

    /// Galois conjugate `a − b√d`.
    pub fn conj(&self) -> Self {
        Self::canonical(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().try_div(self)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign, decided by rational sign tests and one squaring.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        // a² = b²d is impossible for square-free d > 1.
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    /// Exact comparison; never approximates.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.b.is_zero() && other.b.is_zero() {
            return Ok(self.a.cmp(&other.a));
        }
        Ok(self.try_sub(other)?.signum())
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `(⌊x⌋, {x})` with `0 ≤ {x} < 1`, exact.
    pub fn floor_frac(&self) -> (BigInt, QuadSurd) {
        let n = self.floor();
        let frac = self - &Self::from_integer(n.clone());
        (n, frac)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // Candidate from an integer square root, then exact correction.
        let bn = self.b.numer();
        let bd = self.b.denom();
        let s = (bn * bn * &self.d).sqrt();
        let surd_part = if bn.is_negative() {
            BigRational::new(-s, bd.clone())
        } else {
            BigRational::new(s, bd.clone())
        };
        let mut n = (&self.a + surd_part).floor().to_integer();
        loop {
            let below = self
                .try_sub(&Self::from_integer(n.clone()))
                .unwrap()
                .signum();
            if below == Ordering::Less {
                n -= 1;
                continue;
            }
            let above = self.try_sub(&Self::from_integer(&n + 1)).unwrap().signum();
            if above != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Fractional part `{x}`.
    pub fn fract(&self) -> QuadSurd {
        self.floor_frac().1
    }

    /// Rational bracket `lo ≤ x ≤ hi` using a `bits`-bit approximation of √d.
    pub fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let scale = BigInt::one() << (2 * bits as usize);
        let r = (&self.d * &scale).sqrt();
        let den = BigInt::one() << bits as usize;
        let root_lo = BigRational::new(r.clone(), den.clone());
        let root_hi = BigRational::new(r + 1, den);
        let (lo, hi) = if self.b.is_negative() {
            (&self.b * root_hi, &self.b * root_lo)
        } else {
            (&self.b * root_lo, &self.b * root_hi)
        };
        (&self.a + lo, &self.a + hi)
    }

    /// Correctly scaled double approximation (relative error about 2⁻⁵²).
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return self.a.to_f64().unwrap_or(f64::NAN);
        }
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.bracket(bits);
            let same_sign = lo.is_positive() == hi.is_positive() && !lo.is_zero();
            if same_sign {
                let width = &hi - &lo;
                let tol = lo.abs() / BigRational::from_integer(BigInt::one() << 60usize);
                if width <= tol {
                    let mid = (lo + hi) / rat(2);
                    return mid.to_f64().unwrap_or(f64::NAN);
                }
            }
            bits *= 2;
        }
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl From<BigRational> for QuadSurd {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for QuadSurd {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for QuadSurd {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::canonical(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}

// Operators panic on mixed radicands; every computation in this crate stays
// inside one field. Use the `try_*` methods at trust boundaries.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadSurd> for &QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: &QuadSurd) -> QuadSurd {
                self.$try(rhs)
                    .expect(concat!("QuadSurd::", stringify!($method)))
            }
        }
        impl $trait<QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: &QuadSurd) -> QuadSurd {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadSurd> for &QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::literal::format_surd(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> QuadSurd {
        QuadSurd::new(rat(0), rat(1), BigInt::from(2)).unwrap()
    }

    #[test]
    fn conjugate_cancellation() {
        let x = &QuadSurd::one() + &sqrt2();
        let y = &QuadSurd::from(2) - &sqrt2();
        assert_eq!(&x + &y, QuadSurd::from(3));
    }

    #[test]
    fn difference_of_squares() {
        let x = &sqrt2() - &QuadSurd::one();
        let y = &sqrt2() + &QuadSurd::one();
        assert_eq!(&x * &y, QuadSurd::one());
    }

    #[test]
    fn one_minus_twice_alpha() {
        let alpha = &sqrt2() - &QuadSurd::one();
        let got = &QuadSurd::one() - &(&QuadSurd::from(2) * &alpha);
        let want = &QuadSurd::from(3) - &(&QuadSurd::from(2) * &sqrt2());
        assert_eq!(got, want);
    }

    #[test]
    fn compare_examples() {
        let alpha = &sqrt2() - &QuadSurd::one();
        assert_eq!(
            alpha.compare(&QuadSurd::ratio(2, 5)).unwrap(),
            Ordering::Greater
        );
        assert_eq!(alpha.compare(&alpha).unwrap(), Ordering::Equal);
        let x = &QuadSurd::from(3) - &(&QuadSurd::from(2) * &sqrt2());
        assert_eq!(x.compare(&QuadSurd::zero()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn floor_frac_examples() {
        let x = &QuadSurd::from(5) * &sqrt2();
        let (n, f) = x.floor_frac();
        assert_eq!(n, BigInt::from(7));
        assert_eq!(f, &x - &QuadSurd::from(7));

        let (n, f) = QuadSurd::ratio(3, 4).floor_frac();
        assert_eq!(n, BigInt::from(0));
        assert_eq!(f, QuadSurd::ratio(3, 4));

        let (n, f) = sqrt2().floor_frac();
        assert_eq!(n, BigInt::from(1));
        assert_eq!(f, &sqrt2() - &QuadSurd::one());
    }

    #[test]
    fn floor_of_negative_surd() {
        let x = -&sqrt2();
        assert_eq!(x.floor(), BigInt::from(-2));
    }

    #[test]
    fn radicand_reduction() {
        let x = QuadSurd::new(rat(0), rat(1), BigInt::from(8)).unwrap();
        assert_eq!(x, &QuadSurd::from(2) * &sqrt2());
        let y = QuadSurd::new(rat(1), rat(3), BigInt::from(9)).unwrap();
        assert_eq!(y, QuadSurd::from(10));
    }

    #[test]
    fn mixed_radicands_rejected() {
        let s3 = QuadSurd::new(rat(0), rat(1), BigInt::from(3)).unwrap();
        assert!(matches!(
            surd_arith(SurdOp::Add, &sqrt2(), &s3),
            Err(Error::IncompatibleRadicands(_, _))
        ));
        // rationals mix with anything
        assert!(surd_arith(SurdOp::Mul, &QuadSurd::ratio(1, 2), &s3).is_ok());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            surd_arith(SurdOp::Div, &sqrt2(), &QuadSurd::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn squarefree_examples() {
        let cases = [
            (1u32, 1u32, 1u32),
            (8, 2, 2),
            (12, 2, 3),
            (49, 7, 1),
            (30, 1, 30),
            (72, 6, 2),
        ];
        for (n, s, d) in cases {
            let (gs, gd) = squarefree_split(&BigUint::from(n));
            assert_eq!((gs, gd), (BigUint::from(s), BigUint::from(d)), "n = {n}");
        }
        // product of two large primes stays square-free
        let p = BigUint::from(1_000_003u64) * BigUint::from(999_983u64);
        assert_eq!(squarefree_split(&p).0, BigUint::one());
        let sq = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64) * 5u32;
        assert_eq!(
            squarefree_split(&sq),
            (BigUint::from(1_000_003u64), BigUint::from(5u32))
        );
    }

    #[test]
    fn float_conversion_survives_cancellation() {
        let delta = &QuadSurd::from(3) - &(&QuadSurd::from(2) * &sqrt2());
        let p = delta.pow(20);
        let want = (3.0f64 - 2.0 * 2f64.sqrt()).powi(20);
        // naive float evaluation of p's coefficients would lose everything
        assert!((p.to_f64() / want - 1.0).abs() < 1e-9);
    }
}
