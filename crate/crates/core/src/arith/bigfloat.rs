//! Arbitrary-precision binary floats and complex numbers built on them.

use std::cmp::Ordering;
use std::fmt;

use dashu_base::{Abs, BitTest, SquareRoot};
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;

use super::rational::Rational;

const ZERO: FBig = FBig::ZERO;
const ONE: FBig = FBig::ONE;

/// A binary float with a fixed working precision in bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigFloat(FBig);

impl BigFloat {
    pub fn zero(prec: usize) -> Self {
        BigFloat(ZERO.with_precision(prec).value())
    }

    pub fn one(prec: usize) -> Self {
        BigFloat(ONE.with_precision(prec).value())
    }

    pub fn from_int(n: &BigInt, prec: usize) -> Self {
        let i = IBig::from_le_bytes(&n.to_signed_bytes_le());
        BigFloat(FBig::from(i).with_precision(prec).value())
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        BigFloat(FBig::from(n).with_precision(prec).value())
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        Self::from_int(r.numer(), prec + 8).div(&Self::from_int(r.denom(), prec + 8)).with_precision(prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        let f = FBig::try_from(x).unwrap_or(ZERO);
        BigFloat(f.with_precision(prec).value())
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        BigFloat(self.0.clone().with_precision(prec).value())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigFloat(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigFloat(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigFloat(&self.0 * &o.0)
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Self) -> Self {
        BigFloat(&self.0 / &o.0)
    }

    pub fn neg(&self) -> Self {
        BigFloat(-self.0.clone())
    }

    pub fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigFloat(self.0.sqrt())
    }

    /// Natural logarithm; panics on nonpositive input.
    pub fn ln(&self) -> Self {
        BigFloat(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        BigFloat(self.0.exp())
    }

    pub fn is_zero(&self) -> bool {
        self.0 == ZERO
    }

    pub fn is_negative(&self) -> bool {
        self.0 < ZERO
    }

    pub fn max(&self, o: &Self) -> Self {
        if self.0 >= o.0 {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        let half = FBig::try_from(0.5).unwrap();
        let shifted = if self.0 >= ZERO { &self.0 + &half } else { &self.0 - &half };
        let i = shifted.trunc().to_int().value();
        BigInt::from_signed_bytes_le(&i.to_le_bytes())
    }

    pub fn cmp_f64(&self, x: f64) -> Ordering {
        self.0.cmp(&FBig::try_from(x).unwrap())
    }

    /// ln(2) to the given precision.
    pub fn ln2(prec: usize) -> Self {
        BigFloat::from_i64(2, prec).ln()
    }

    /// Rough base-2 exponent: |x| lies in [2^(e-1), 2^e).
    pub fn log2_est(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let r = self.0.repr();
        let bits = r.significand().bit_len() as f64;
        bits + r.exponent() as f64
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(15);
        write!(f, "{:.*}", p, self.to_f64())
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// A complex number with `BigFloat` parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn real(re: BigFloat) -> Self {
        let p = re.precision();
        BigComplex { re, im: BigFloat::zero(p) }
    }

    pub fn from_c64(z: num_complex::Complex64, prec: usize) -> Self {
        BigComplex { re: BigFloat::from_f64(z.re, prec), im: BigFloat::from_f64(z.im, prec) }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, r: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        BigComplex { re: num.re.div(&n), im: num.im.div(&n) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.precision();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        let two = BigFloat::from_i64(2, p);
        let a = r.add(&self.re).div(&two);
        let b = r.sub(&self.re).div(&two);
        let a = if a.is_negative() { BigFloat::zero(p) } else { a.sqrt() };
        let mut b = if b.is_negative() { BigFloat::zero(p) } else { b.sqrt() };
        if self.im.is_negative() {
            b = b.neg();
        }
        BigComplex { re: a, im: b }
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} {:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

/// A real value together with a bound on its absolute error.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: BigFloat,
    pub error: f64,
}

impl Estimate {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Certified comparison: `Some(true)` if the value is surely above `t`,
    /// `Some(false)` if surely below, `None` if the error straddles `t`.
    pub fn certainly_above(&self, t: f64) -> Option<bool> {
        let v = self.to_f64();
        if v - self.error > t {
            Some(true)
        } else if v + self.error < t {
            Some(false)
        } else {
            None
        }
    }
}
