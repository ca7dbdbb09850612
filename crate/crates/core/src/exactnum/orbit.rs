use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::QuadSurd;
use crate::error::{Error, Result};

/// Sign of `a + v·√d` for integers, `d` square-free (or 1).
fn sign_int(a: &BigInt, v: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sv = v.sign();
    let zero = BigInt::zero();
    let sa_ord = a.cmp(&zero);
    let sv_ord = v.cmp(&zero);
    if sv == num_bigint::Sign::NoSign {
        return sa_ord;
    }
    if sa == num_bigint::Sign::NoSign || sa == sv {
        return sv_ord;
    }
    let a2 = a * a;
    let v2d = v * v * d;
    match a2.cmp(&v2d) {
        Ordering::Greater => sa_ord,
        Ordering::Less => sv_ord,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Exact walk of `x0 + nα mod 1`.
///
/// Positions are held as integer numerators `(u + v√d)/D` over one common
/// denominator; each step adds α's numerators and subtracts `D` on wraparound.
/// Nothing is ever rounded.
#[derive(Clone, Debug)]
pub struct OrbitWalker {
    u: BigInt,
    v: BigInt,
    step_u: BigInt,
    step_v: BigInt,
    den: BigInt,
    radicand: BigInt,
    marks: Vec<BigInt>,
    steps: u64,
}

impl OrbitWalker {
    /// Start at `x0 ∈ [0,1)`, rotating by `{alpha}`. `marks` are rational
    /// thresholds available to [`OrbitWalker::at_or_below`].
    pub fn new(x0: &QuadSurd, alpha: &QuadSurd, marks: &[BigRational]) -> Result<Self> {
        if x0.is_negative() || x0.compare(&QuadSurd::one())? != Ordering::Less {
            return Err(Error::PointOutOfRange(x0.to_string()));
        }
        let alpha = alpha.fract();
        let radicand = if x0.is_rational() {
            alpha.d().clone()
        } else {
            x0.compatible(&alpha)
                .then(|| x0.d().clone())
                .ok_or_else(|| {
                    Error::IncompatibleRadicands(x0.d().to_string(), alpha.d().to_string())
                })?
        };
        let mut den = BigInt::one();
        for q in [x0.a(), x0.b(), alpha.a(), alpha.b()]
            .into_iter()
            .chain(marks)
        {
            den = den.lcm(q.denom());
        }
        let scale = |q: &BigRational| -> BigInt {
            (q * BigRational::from_integer(den.clone())).to_integer()
        };
        Ok(OrbitWalker {
            u: scale(x0.a()),
            v: scale(x0.b()),
            step_u: scale(alpha.a()),
            step_v: scale(alpha.b()),
            marks: marks.iter().map(scale).collect(),
            den,
            radicand,
            steps: 0,
        })
    }

    /// Number of steps taken so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Whether the current position is `≤ marks[i]`.
    pub fn at_or_below(&self, i: usize) -> bool {
        let a = &self.u - &self.marks[i];
        sign_int(&a, &self.v, &self.radicand) != Ordering::Greater
    }

    pub fn position(&self) -> QuadSurd {
        let den = BigRational::from_integer(self.den.clone());
        let a = BigRational::from_integer(self.u.clone()) / &den;
        let b = BigRational::from_integer(self.v.clone()) / &den;
        QuadSurd::new(a, b, self.radicand.clone()).expect("radicand is non-negative")
    }

    pub fn advance(&mut self) {
        self.u += &self.step_u;
        self.v += &self.step_v;
        let a = &self.u - &self.den;
        if sign_int(&a, &self.v, &self.radicand) != Ordering::Less {
            self.u = a;
        }
        self.steps += 1;
    }
}
