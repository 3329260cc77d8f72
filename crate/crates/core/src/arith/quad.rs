//! Elements u + v*sqrt(d) of a quadratic field, and the `Scalar` type that
//! mixes them with plain rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::square_class::{is_squarefree, squarefree_kernel};
use crate::error::{Error, Result};

/// u + v*sqrt(d) with d squarefree and d != 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadExt {
    #[serde(with = "super::json_int")]
    pub d: BigInt,
    pub u: Rational,
    pub v: Rational,
}

impl QuadExt {
    pub fn new(d: BigInt, u: Rational, v: Rational) -> Result<Self> {
        if d.is_one() || d.is_zero() || !is_squarefree(&d) {
            return Err(Error::NotSquarefree(d.to_string()));
        }
        Ok(QuadExt { d, u, v })
    }

    /// Skips the squarefree check; `d` must already be known squarefree.
    pub fn new_unchecked(d: BigInt, u: Rational, v: Rational) -> Self {
        QuadExt { d, u, v }
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    fn check(&self, o: &Self) {
        assert!(self.d == o.d, "quadratic field mismatch: {} vs {}", self.d, o.d);
    }

    fn with(&self, u: Rational, v: Rational) -> Self {
        QuadExt { d: self.d.clone(), u, v }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        self.with(&self.u + &o.u, &self.v + &o.v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        self.with(&self.u - &o.u, &self.v - &o.v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = Rational::from_int(self.d.clone());
        self.with(&self.u * &o.u + &self.v * &o.v * &d, &self.u * &o.v + &self.v * &o.u)
    }

    pub fn neg(&self) -> Self {
        self.with(-&self.u, -&self.v)
    }

    pub fn conj(&self) -> Self {
        self.with(self.u.clone(), -&self.v)
    }

    /// u^2 - d v^2.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.v * &self.v * Rational::from_int(self.d.clone())
    }

    pub fn trace(&self) -> Rational {
        &self.u + &self.u
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn checked_inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(self.with(&c.u / &n, &c.v / &n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.with(&self.u * r, &self.v * r)
    }

    pub fn embed(d: &BigInt, r: Rational) -> Self {
        QuadExt { d: d.clone(), u: r, v: Rational::zero() }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.u.to_f64(), self.v.to_f64())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.u, self.v, self.d)
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A coordinate value: a rational, or an element of one quadratic field.
///
/// Arithmetic between elements of two different quadratic fields panics
/// unless one side is rational; callers that accept user data check
/// compatibility with [`Scalar::common_field`] first.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Rat(Rational),
    Quad(QuadExt),
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        match (self.as_rational(), o.as_rational()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => match (self, o) {
                (Scalar::Quad(x), Scalar::Quad(y)) => x == y,
                _ => unreachable!(),
            },
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        match self.as_rational() {
            Some(r) => r.hash(h),
            None => {
                if let Scalar::Quad(q) = self {
                    q.hash(h)
                }
            }
        }
    }
}

impl Scalar {
    pub fn rat(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(Rational::from_int(n))
    }

    /// A square root of r: rational when r is a square, otherwise v sqrt(d)
    /// with d the squarefree kernel of r and v > 0.
    pub fn sqrt_of(r: &Rational) -> Result<Self> {
        if let Some(s) = r.sqrt_exact() {
            return Ok(Scalar::Rat(s));
        }
        if r.is_zero() {
            return Ok(Scalar::Rat(Rational::zero()));
        }
        let d = squarefree_kernel(&(r.numer() * r.denom()))?;
        let v = (r / &Rational::from_int(d.clone()))
            .sqrt_exact()
            .ok_or_else(|| Error::Internal("square cofactor".into()))?;
        Ok(Scalar::Quad(QuadExt::new_unchecked(d, Rational::zero(), v)))
    }

    /// The rational value, when the irrational part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(q) if q.v.is_zero() => Some(&q.u),
            _ => None,
        }
    }

    /// The quadratic field this value genuinely needs, if any.
    pub fn field(&self) -> Option<&BigInt> {
        match self {
            Scalar::Quad(q) if !q.v.is_zero() => Some(&q.d),
            _ => None,
        }
    }

    /// The field tag carried by the representation, even if v = 0.
    pub fn tag(&self) -> Option<&BigInt> {
        match self {
            Scalar::Quad(q) => Some(&q.d),
            Scalar::Rat(_) => None,
        }
    }

    /// The smallest field containing all arguments, or an error if two
    /// different quadratic fields are involved.
    pub fn common_field<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<Option<BigInt>> {
        let mut d: Option<BigInt> = None;
        for x in xs {
            if let Some(e) = x.field() {
                match &d {
                    None => d = Some(e.clone()),
                    Some(cur) if cur != e => return Err(Error::FieldMismatch(cur.to_string(), e.to_string())),
                    _ => {}
                }
            }
        }
        Ok(d)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
        }
    }

    fn binop(
        &self,
        o: &Self,
        rr: impl Fn(&Rational, &Rational) -> Rational,
        qq: impl Fn(&QuadExt, &QuadExt) -> QuadExt,
    ) -> Self {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rr(a, b)),
            (Scalar::Quad(a), Scalar::Quad(b)) if a.d == b.d => Scalar::Quad(qq(a, b)),
            (Scalar::Quad(a), Scalar::Quad(b)) => {
                if b.v.is_zero() {
                    Scalar::Quad(qq(a, &QuadExt::embed(&a.d, b.u.clone())))
                } else if a.v.is_zero() {
                    Scalar::Quad(qq(&QuadExt::embed(&b.d, a.u.clone()), b))
                } else {
                    panic!("quadratic field mismatch: {} vs {}", a.d, b.d)
                }
            }
            (Scalar::Quad(a), Scalar::Rat(b)) => Scalar::Quad(qq(a, &QuadExt::embed(&a.d, b.clone()))),
            (Scalar::Rat(a), Scalar::Quad(b)) => Scalar::Quad(qq(&QuadExt::embed(&b.d, a.clone()), b)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        match self {
            Scalar::Rat(r) => r.checked_recip().map(Scalar::Rat),
            Scalar::Quad(q) => q.checked_inv().map(Scalar::Quad),
        }
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.checked_inv()?))
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.conj()),
        }
    }

    /// Drop a vanishing irrational part.
    pub fn simplify(self) -> Self {
        match self {
            Scalar::Quad(q) if q.v.is_zero() => Scalar::Rat(q.u),
            s => s,
        }
    }

    /// Real embedding value if d > 0, or the pair (re, im) for d < 0.
    pub fn to_complex_f64(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        match self {
            Scalar::Rat(r) => num_complex::Complex64::new(r.to_f64(), 0.0),
            Scalar::Quad(q) => {
                let d = q.d.to_f64().unwrap_or(f64::NAN);
                if d > 0.0 {
                    num_complex::Complex64::new(q.u.to_f64() + q.v.to_f64() * d.sqrt(), 0.0)
                } else {
                    num_complex::Complex64::new(q.u.to_f64(), q.v.to_f64() * (-d).sqrt())
                }
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::Quad(q)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Quad(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
