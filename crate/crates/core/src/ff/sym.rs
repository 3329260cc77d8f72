//! The symmetrization map: a multiset of n points summing to O goes to the
//! coefficient vector of the function vanishing exactly there, as a point
//! of projective (n-1)-space.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{function_with_divisor, FFElement};
use crate::arith::Rational;
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// Projective coordinates, normalised so the first nonzero entry is 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct SymPoint {
    coords: Vec<Rational>,
}

impl SymPoint {
    pub fn new(mut coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput("projective point needs at least two coordinates".into()));
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidInput("all coordinates are zero".into()))?;
        for c in coords.iter_mut() {
            *c = &*c / &lead;
        }
        Ok(SymPoint { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// The function in L(n O) with these coordinates.
    pub fn function(&self, curve: &WeierstrassCurve) -> FFElement<Rational> {
        FFElement::from_rr_coordinates(curve, &self.coords)
    }
}

impl TryFrom<Vec<Rational>> for SymPoint {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        SymPoint::new(v)
    }
}

impl From<SymPoint> for Vec<Rational> {
    fn from(p: SymPoint) -> Self {
        p.coords
    }
}

impl fmt::Display for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl fmt::Debug for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Image of a multiset of n >= 2 points summing to O, in the basis of
/// [`super::rr_basis`].
pub fn symmetrize(curve: &WeierstrassCurve, points: &[CurvePoint]) -> Result<SymPoint> {
    let f = function_with_divisor(curve, points)?
        .to_rational()
        .ok_or_else(|| Error::InvalidInput("the multiset is not stable under conjugation".into()))?;
    SymPoint::new(f.rr_coordinates(points.len())?)
}
