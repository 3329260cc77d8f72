//! Short Weierstrass curves y^2 = x^3 + a x + b over Q, their points over Q
//! and quadratic fields, and canonical heights.

pub mod height;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::poly::QPoly;
use crate::arith::{Rational, Scalar};
use crate::error::{Error, Result};

pub use height::{canonical_height, height_pairing, regulator, HeightConfig, HeightPairingMatrix};

pub const TORSION_BOUND_Q: u32 = 12;
pub const TORSION_BOUND_QUADRATIC: u32 = 18;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    a: Rational,
    b: Rational,
}

impl WeierstrassCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let c = WeierstrassCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve { a: c.a.to_string(), b: c.b.to_string() });
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(Rational::from_int(a), Rational::from_int(b))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// -16 (4a^3 + 27b^2).
    pub fn discriminant(&self) -> Rational {
        let four_a3 = Rational::from_int(4) * &self.a * &self.a * &self.a;
        let t = Rational::from_int(27) * &self.b * &self.b;
        Rational::from_int(-16) * (four_a3 + t)
    }

    /// x^3 + a x + b as a polynomial.
    pub fn w_poly(&self) -> QPoly {
        QPoly::new(vec![self.b.clone(), self.a.clone(), Rational::zero(), Rational::one()])
    }

    pub fn w_rat(&self, x: &Rational) -> Rational {
        x * x * x + &self.a * x + &self.b
    }

    pub fn w(&self, x: &Scalar) -> Scalar {
        let a = Scalar::Rat(self.a.clone());
        let b = Scalar::Rat(self.b.clone());
        x.mul(x).mul(x).add(&a.mul(x)).add(&b)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if Scalar::common_field([x, y]).is_err() {
                    return false;
                }
                y.mul(y) == self.w(x)
            }
        }
    }

    fn check(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.to_string()))
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: y.neg() },
        }
    }

    /// P + Q, validating that both points lie on the curve over a common field.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(q)?;
        let coords: Vec<&Scalar> = [p, q].iter().flat_map(|pt| pt.coords()).collect();
        Scalar::common_field(coords)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Chord-and-tangent addition without validation. Panics if the points
    /// live over two different quadratic fields.
    pub fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return CurvePoint::Infinity;
            }
            let three = Scalar::int(3);
            let num = three.mul(x1).mul(x1).add(&Scalar::Rat(self.a.clone()));
            num.checked_div(&y1.add(y1)).expect("y nonzero")
        } else {
            y2.sub(y1).checked_div(&x2.sub(x1)).expect("x differ")
        };
        let x3 = lambda.mul(&lambda).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        CurvePoint::Affine { x: x3.simplify(), y: y3.simplify() }
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add_unchecked(p, p)
    }

    /// n P by double-and-add; negative n uses -P.
    pub fn mul(&self, p: &CurvePoint, n: i64) -> CurvePoint {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut pw = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &pw);
            }
            k >>= 1;
            if k > 0 {
                pw = self.double(&pw);
            }
        }
        acc
    }

    /// Largest possible torsion order for a point with these coordinates:
    /// 12 over Q, 18 over a quadratic field.
    pub fn torsion_bound(p: &CurvePoint) -> u32 {
        if p.is_rational() {
            TORSION_BOUND_Q
        } else {
            TORSION_BOUND_QUADRATIC
        }
    }

    /// The order of P if it is at most `bound`, otherwise `None`.
    pub fn torsion_order(&self, p: &CurvePoint, bound: u32) -> Result<Option<u32>> {
        self.check(p)?;
        let mut q = p.clone();
        for k in 1..=bound {
            if q.is_infinity() {
                return Ok(Some(k));
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={},b={}", self.a, self.b)
    }
}

/// Parses `a=0,b=2` (whitespace and either order allowed).
impl FromStr for WeierstrassCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "curve (expected a=..,b=..)", input: s.to_string() };
        let mut a = None;
        let mut b = None;
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: Rational = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "a" if a.is_none() => a = Some(v),
                "b" if b.is_none() => b = Some(v),
                _ => return Err(bad()),
            }
        }
        WeierstrassCurve::new(a.ok_or_else(bad)?, b.ok_or_else(bad)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    a: Rational,
    b: Rational,
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveRepr { a: self.a.clone(), b: self.b.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassCurve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CurveRepr::deserialize(d)?;
        WeierstrassCurve::new(r.a, r.b).map_err(serde::de::Error::custom)
    }
}

/// A point in projective closure: the origin `O` or affine coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Scalar, y: Scalar },
}

impl CurvePoint {
    pub fn affine(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        CurvePoint::Affine { x: x.into(), y: y.into() }
    }

    pub fn rational(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x: Scalar::Rat(x), y: Scalar::Rat(y) }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::rational(Rational::from_int(x), Rational::from_int(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Scalar> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Scalar> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    pub fn coords_pair(&self) -> Option<(&Scalar, &Scalar)> {
        match self {
            CurvePoint::Affine { x, y } => Some((x, y)),
            CurvePoint::Infinity => None,
        }
    }

    pub fn coords(&self) -> Vec<&Scalar> {
        match self {
            CurvePoint::Affine { x, y } => vec![x, y],
            CurvePoint::Infinity => vec![],
        }
    }

    /// The quadratic field of definition, if the point is not rational.
    pub fn field(&self) -> Result<Option<BigInt>> {
        Scalar::common_field(self.coords())
    }

    pub fn is_rational(&self) -> bool {
        self.coords().iter().all(|c| c.as_rational().is_some())
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Tag(String),
    Affine { x: Scalar, y: Scalar },
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => PointRepr::Tag("O".into()).serialize(s),
            CurvePoint::Affine { x, y } => PointRepr::Affine { x: x.clone(), y: y.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::Tag(t) if t == "O" => Ok(CurvePoint::Infinity),
            PointRepr::Tag(t) => Err(serde::de::Error::custom(format!("unknown point tag {t:?}"))),
            PointRepr::Affine { x, y } => Ok(CurvePoint::Affine { x, y }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use crate::arith::QuadExt;
    use proptest::prelude::*;

    fn e17() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(0, 17).unwrap()
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(WeierstrassCurve::from_ints(0, 0), Err(Error::SingularCurve { .. })));
        assert!(WeierstrassCurve::from_ints(-3, 2).is_err());
        assert!("a=0,b=2".parse::<WeierstrassCurve>().is_ok());
        assert!("b=1/2, a=-1".parse::<WeierstrassCurve>().is_ok());
        assert!("a=0".parse::<WeierstrassCurve>().is_err());
    }

    #[test]
    fn addition_worked_example() {
        let e = e17();
        let p = CurvePoint::from_ints(-2, 3);
        let r = CurvePoint::from_ints(2, 5);
        // slope 1/2, x3 = 1/4 - 0 = 1/4, y3 = (1/2)(-2 - 1/4) - 3 = -33/8
        assert_eq!(e.add(&p, &r).unwrap(), CurvePoint::rational(q(1, 4), q(-33, 8)));
        assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), CurvePoint::Infinity);
        let two_r = e.double(&r);
        assert_eq!(two_r, CurvePoint::rational(q(-64, 25), q(59, 125)));
        assert!(e.contains(&two_r));
    }

    #[test]
    fn rejects_off_curve_and_mixed_fields() {
        let e = e17();
        assert!(matches!(e.add(&CurvePoint::from_ints(1, 1), &CurvePoint::Infinity), Err(Error::NotOnCurve(_))));
        // x = 1: w = 18 -> y = 3 sqrt 2 ; x = 0: w = 17 -> y = sqrt 17
        let p = CurvePoint::affine(q(1, 1), QuadExt::new(BigInt::from(2), q(0, 1), q(3, 1)).unwrap());
        let r = CurvePoint::affine(q(0, 1), QuadExt::new(BigInt::from(17), q(0, 1), q(1, 1)).unwrap());
        assert!(e.contains(&p) && e.contains(&r));
        assert!(matches!(e.add(&p, &r), Err(Error::FieldMismatch(_, _))));
    }

    #[test]
    fn torsion() {
        // y^2 = x^3 + 1 has (2, 3) of order 6 and (-1, 0) of order 2
        let e = WeierstrassCurve::from_ints(0, 1).unwrap();
        assert_eq!(e.torsion_order(&CurvePoint::from_ints(2, 3), 12).unwrap(), Some(6));
        assert_eq!(e.torsion_order(&CurvePoint::from_ints(-1, 0), 12).unwrap(), Some(2));
        assert_eq!(e.torsion_order(&CurvePoint::Infinity, 12).unwrap(), Some(1));
        assert_eq!(e17().torsion_order(&CurvePoint::from_ints(2, 5), 18).unwrap(), None);
    }

    #[test]
    fn json_forms() {
        let p = CurvePoint::affine(q(9, 4), QuadExt::new(BigInt::from(857), q(0, 1), q(1, 8)).unwrap());
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"x":"9/4","y":{"d":857,"u":"0","v":"1/8"}}"#);
        assert_eq!(serde_json::from_str::<CurvePoint>(&s).unwrap(), p);
        assert_eq!(serde_json::to_string(&CurvePoint::Infinity).unwrap(), "\"O\"");
        assert_eq!(serde_json::from_str::<CurvePoint>("\"O\"").unwrap(), CurvePoint::Infinity);
        let c = e17();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"a":"0","b":"17"}"#);
        assert!(serde_json::from_str::<WeierstrassCurve>(r#"{"a":"0","b":"0"}"#).is_err());
    }

    // points over Q(sqrt d) with rational x: y = s sqrt(d) where w(x) = d s^2
    fn lifted(e: &WeierstrassCurve, x: i64) -> CurvePoint {
        let w = e.w_rat(&q(x, 1));
        let d = crate::arith::square_class::squarefree_kernel(w.numer()).unwrap();
        let s = (w.clone() / Rational::from_int(d.clone())).sqrt_exact().unwrap();
        if d == BigInt::from(1) {
            CurvePoint::rational(q(x, 1), s)
        } else {
            CurvePoint::affine(q(x, 1), QuadExt::new(d, q(0, 1), s).unwrap())
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn group_axioms(x1 in 1i64..30, x2 in 1i64..30, m in 0i64..5, n in 0i64..5) {
            let e = e17();
            let p = lifted(&e, x1);
            let r = e.mul(&p, m);
            let s = e.mul(&p, n);
            prop_assert!(e.contains(&r));
            prop_assert_eq!(e.add(&r, &s).unwrap(), e.mul(&p, m + n));
            prop_assert_eq!(e.add(&r, &s).unwrap(), e.add(&s, &r).unwrap());
            let t = lifted(&e, x2);
            if p.field().unwrap() == t.field().unwrap() {
                let lhs = e.add(&e.add(&p, &t).unwrap(), &r).unwrap();
                let rhs = e.add(&p, &e.add(&t, &r).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
