//! The minimal exact-field interface shared by polynomials and function
//! field elements.

use std::fmt::Debug;

use super::quad::Scalar;
use super::rational::Rational;

pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Panics on zero.
    fn inv_ref(&self) -> Self;
    fn from_rational(r: Rational) -> Self;

    fn div_ref(&self, o: &Self) -> Self {
        self.mul_ref(&o.inv_ref())
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        self.recip()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }
    fn one() -> Self {
        Scalar::Rat(Rational::one())
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv_ref(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
    fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}
