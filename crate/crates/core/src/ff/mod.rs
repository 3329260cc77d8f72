//! The function field of an elliptic curve: elements u(x) + v(x) y with the
//! relation y^2 = x^3 + a x + b, the invariant derivation, Riemann-Roch
//! bases of L(n O), divisors and the symmetrization map.

pub mod critical;
pub mod divisor;
pub mod sym;

pub use critical::{critical_fibres, critical_value_poly, CriticalFibre};
pub use divisor::{divisor_of, fiber_roots, function_with_divisor, Divisor, Place};
pub use sym::{symmetrize, SymPoint};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Poly, QPoly, Rational, Scalar};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// u(x) + v(x) y on a fixed curve.
#[derive(Clone, PartialEq)]
pub struct FFElement<F: Field = Rational> {
    pub u: Poly<F>,
    pub v: Poly<F>,
    curve: WeierstrassCurve,
}

fn lift_poly<F: Field>(p: &QPoly) -> Poly<F> {
    p.map(|c| F::from_rational(c.clone()))
}

impl<F: Field> FFElement<F> {
    pub fn new(curve: &WeierstrassCurve, u: Poly<F>, v: Poly<F>) -> Self {
        FFElement { u, v, curve: curve.clone() }
    }

    pub fn zero(curve: &WeierstrassCurve) -> Self {
        Self::new(curve, Poly::zero(), Poly::zero())
    }

    pub fn constant(curve: &WeierstrassCurve, c: F) -> Self {
        Self::new(curve, Poly::constant(c), Poly::zero())
    }

    pub fn x(curve: &WeierstrassCurve) -> Self {
        Self::new(curve, Poly::x(), Poly::zero())
    }

    pub fn y(curve: &WeierstrassCurve) -> Self {
        Self::new(curve, Poly::zero(), Poly::one())
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// x^3 + a x + b over F.
    pub fn w(&self) -> Poly<F> {
        lift_poly(&self.curve.w_poly())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.v.is_zero() && self.u.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.curve, self.u.add(&o.u), self.v.add(&o.v))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.curve, self.u.sub(&o.u), self.v.sub(&o.v))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.curve, self.u.neg(), self.v.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let u = self.u.mul(&o.u).add(&self.v.mul(&o.v).mul(&self.w()));
        let v = self.u.mul(&o.v).add(&o.u.mul(&self.v));
        Self::new(&self.curve, u, v)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(&self.curve, self.u.scale(c), self.v.scale(c))
    }

    pub fn add_constant(&self, c: &F) -> Self {
        Self::new(&self.curve, self.u.add(&Poly::constant(c.clone())), self.v.clone())
    }

    /// The image under y -> -y.
    pub fn conj(&self) -> Self {
        Self::new(&self.curve, self.u.clone(), self.v.neg())
    }

    /// f * conj(f) = u^2 - v^2 w, a polynomial in x.
    pub fn norm(&self) -> Poly<F> {
        self.u.mul(&self.u).sub(&self.v.mul(&self.v).mul(&self.w()))
    }

    /// Order of the pole at O; `None` for the zero element.
    pub fn pole_order(&self) -> Option<usize> {
        let pu = self.u.degree().map(|d| 2 * d);
        let pv = self.v.degree().map(|d| 2 * d + 3);
        match (pu, pv) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    /// The derivation D = 2y d/dx + (3x^2 + a) d/dy, so D(x) = 2y.
    pub fn derivative(&self) -> Self {
        let w = self.w();
        let two = F::from_int(2);
        let dw = w.derivative();
        let u = self.v.derivative().mul(&w).scale(&two).add(&self.v.mul(&dw));
        let v = self.u.derivative().scale(&two);
        Self::new(&self.curve, u, v)
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        self.u.eval(x).add_ref(&self.v.eval(x).mul_ref(y))
    }

    /// Exact division of both parts by a polynomial in x.
    pub fn div_poly(&self, d: &Poly<F>) -> Option<Self> {
        Some(Self::new(&self.curve, self.u.exact_div(d)?, self.v.exact_div(d)?))
    }
}

impl FFElement<Rational> {
    pub fn from_parts(curve: &WeierstrassCurve, u: Vec<Rational>, v: Vec<Rational>) -> Self {
        Self::new(curve, Poly::new(u), Poly::new(v))
    }

    pub fn to_scalar(&self) -> FFElement<Scalar> {
        FFElement::new(&self.curve, self.u.map(|c| Scalar::Rat(c.clone())), self.v.map(|c| Scalar::Rat(c.clone())))
    }

    /// Value at an affine point (coordinates possibly quadratic).
    pub fn eval_point(&self, p: &CurvePoint) -> Option<Scalar> {
        let (x, y) = p.coords_pair()?;
        Some(self.to_scalar().eval(x, y).simplify())
    }

    /// Coordinates in the basis returned by [`rr_basis`] of size n.
    pub fn rr_coordinates(&self, n: usize) -> Result<Vec<Rational>> {
        if self.pole_order().unwrap_or(0) > n {
            return Err(Error::InvalidInput(format!("pole order exceeds {n}")));
        }
        Ok(rr_pole_orders(n)
            .into_iter()
            .map(|j| if j % 2 == 0 { self.u.coeff(j / 2) } else { self.v.coeff((j - 3) / 2) })
            .collect())
    }

    pub fn from_rr_coordinates(curve: &WeierstrassCurve, coords: &[Rational]) -> Self {
        let mut f = FFElement::zero(curve);
        for (c, b) in coords.iter().zip(rr_basis_unchecked(curve, coords.len())) {
            f = f.add(&b.scale(c));
        }
        f
    }
}

impl FFElement<Scalar> {
    /// The same element with rational coefficients, if it has them.
    pub fn to_rational(&self) -> Option<FFElement<Rational>> {
        let conv = |p: &Poly<Scalar>| -> Option<QPoly> {
            Some(Poly::new(p.coeffs().iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<_>>>()?))
        };
        Some(FFElement::new(&self.curve, conv(&self.u)?, conv(&self.v)?))
    }
}

impl<F: Field + fmt::Display> fmt::Display for FFElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.u),
            (true, false) => write!(f, "({})*y", self.v),
            (false, false) => write!(f, "{} + ({})*y", self.u, self.v),
        }
    }
}

impl<F: Field + fmt::Display> fmt::Debug for FFElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON form of an element with rational coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FFElementJson {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl From<&FFElement<Rational>> for FFElementJson {
    fn from(f: &FFElement<Rational>) -> Self {
        FFElementJson { u: f.u.coeffs().to_vec(), v: f.v.coeffs().to_vec() }
    }
}

impl FFElementJson {
    pub fn on(&self, curve: &WeierstrassCurve) -> FFElement<Rational> {
        FFElement::from_parts(curve, self.u.clone(), self.v.clone())
    }
}

impl Serialize for FFElement<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FFElementJson::from(self).serialize(s)
    }
}

/// Pole orders 0, 2, 3, ..., n of the basis of L(n O).
pub fn rr_pole_orders(n: usize) -> Vec<usize> {
    std::iter::once(0).chain(2..=n).collect()
}

fn rr_basis_unchecked(curve: &WeierstrassCurve, n: usize) -> Vec<FFElement<Rational>> {
    rr_pole_orders(n)
        .into_iter()
        .map(|j| {
            let one = Rational::one();
            if j % 2 == 0 {
                FFElement::new(curve, Poly::monomial(one, j / 2), Poly::zero())
            } else {
                FFElement::new(curve, Poly::zero(), Poly::monomial(one, (j - 3) / 2))
            }
        })
        .collect()
}

/// Monomial basis 1, x, y, x^2, x y, ... of L(n O), by increasing pole order.
pub fn rr_basis(curve: &WeierstrassCurve, n: usize) -> Result<Vec<FFElement<Rational>>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("L(n O) basis needs n >= 2, got {n}")));
    }
    Ok(rr_basis_unchecked(curve, n))
}
