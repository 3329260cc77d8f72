//! Divisors of functions with poles only at O, and the Miller-style
//! construction of a function with a prescribed divisor.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::FFElement;
use crate::arith::roots::{eval_complex, roots_of_squarefree, split_rational_roots};
use crate::arith::{Poly, QPoly, QuadExt, Rational, Scalar};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// A point of the curve, exact when its coordinates lie in Q or a single
/// quadratic field, otherwise a certified approximation of x (within
/// `radius`) together with the matching y.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Exact(CurvePoint),
    Numeric { x: Complex64, y: Complex64, radius: f64 },
}

impl Place {
    pub fn approx(&self) -> Option<(Complex64, Complex64)> {
        match self {
            Place::Exact(CurvePoint::Infinity) => None,
            Place::Exact(CurvePoint::Affine { x, y }) => Some((x.to_complex_f64(), y.to_complex_f64())),
            Place::Numeric { x, y, .. } => Some((*x, *y)),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Exact(CurvePoint::Infinity))
    }

    /// Distance in the max norm of the affine coordinates.
    pub fn distance(&self, p: &CurvePoint) -> f64 {
        match (self.approx(), p.coords_pair()) {
            (None, None) => 0.0,
            (Some((x, y)), Some((px, py))) => (x - px.to_complex_f64()).norm().max((y - py.to_complex_f64()).norm()),
            _ => f64::INFINITY,
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Approx {
            x: [f64; 2],
            y: [f64; 2],
            radius: f64,
        }
        match self {
            Place::Exact(p) => p.serialize(s),
            Place::Numeric { x, y, radius } => Approx { x: [x.re, x.im], y: [y.re, y.im], radius: *radius }.serialize(s),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Divisor {
    pub support: Vec<(Place, i64)>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.support.iter().map(|(_, m)| m).sum()
    }

    /// Affine zeros with their multiplicities.
    pub fn zeros(&self) -> Vec<(Place, usize)> {
        self.support.iter().filter(|(p, m)| *m > 0 && !p.is_infinity()).map(|(p, m)| (p.clone(), *m as usize)).collect()
    }

    pub fn pole_order_at_infinity(&self) -> i64 {
        -self.support.iter().filter(|(p, _)| p.is_infinity()).map(|(_, m)| m).sum::<i64>()
    }

    /// Multiplicities of the affine zeros, sorted decreasingly.
    pub fn shape(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.zeros().into_iter().map(|(_, m)| m).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// True if the zeros are exactly the given multiset (exact places must
    /// match exactly, numeric ones within `tol`).
    pub fn zeros_match(&self, points: &[CurvePoint], tol: f64) -> bool {
        let mut expanded: Vec<&Place> = Vec::new();
        for (p, m) in self.support.iter().filter(|(p, m)| *m > 0 && !p.is_infinity()) {
            for _ in 0..*m {
                expanded.push(p);
            }
        }
        if expanded.len() != points.len() {
            return false;
        }
        let mut used = vec![false; points.len()];
        for place in expanded {
            let hit = (0..points.len()).find(|&i| {
                !used[i]
                    && match place {
                        Place::Exact(q) => q == &points[i],
                        Place::Numeric { .. } => place.distance(&points[i]) < tol,
                    }
            });
            match hit {
                Some(i) => used[i] = true,
                None => return false,
            }
        }
        true
    }
}

fn scalar_poly(p: &QPoly) -> Poly<Scalar> {
    p.map(|c| Scalar::Rat(c.clone()))
}

/// The two roots of a monic irreducible quadratic, in Q(sqrt D).
fn quadratic_roots(p: &QPoly) -> Result<[Scalar; 2]> {
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &b * &b - Rational::from_int(4) * &c;
    let Scalar::Quad(s) = Scalar::sqrt_of(&disc)? else {
        return Err(Error::Internal("quadratic factor has rational roots".into()));
    };
    let half = Rational::new(1, 2)?;
    let u = -(&b * &half);
    let v = &s.v * &half;
    Ok([
        Scalar::Quad(QuadExt::new_unchecked(s.d.clone(), u.clone(), v.clone())),
        Scalar::Quad(QuadExt::new_unchecked(s.d, u, -v)),
    ])
}

/// Zeros of u1 + v1 y with gcd(u1, v1) = 1: one point above each root of the
/// norm, with y = -u1/v1 and multiplicity equal to that of the root.
fn coprime_zeros(f: &FFElement<Rational>, prec: usize, out: &mut Vec<(Place, i64)>) -> Result<()> {
    let n = f.norm();
    if n.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let us = scalar_poly(&f.u);
    let vs = scalar_poly(&f.v);
    let y_at = |x: &Scalar| -> Result<Scalar> { Ok(us.eval(x).neg().checked_div(&vs.eval(x))?.simplify()) };
    for (i, s) in n.squarefree_decomposition().iter().enumerate() {
        let mult = i as i64 + 1;
        if s.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (rats, rest) = split_rational_roots(s)?;
        for r in rats {
            let x = Scalar::Rat(r);
            let y = y_at(&x)?;
            out.push((Place::Exact(CurvePoint::Affine { x, y }), mult));
        }
        match rest.degree() {
            None | Some(0) => {}
            Some(2) => {
                for x in quadratic_roots(&rest)? {
                    let y = y_at(&x)?;
                    out.push((Place::Exact(CurvePoint::Affine { x, y }), mult));
                }
            }
            Some(_) => {
                for r in roots_of_squarefree(&rest, prec)? {
                    let yv = eval_complex(&f.u, &r.center).neg().div(&eval_complex(&f.v, &r.center));
                    out.push((Place::Numeric { x: r.approx(), y: yv.to_c64(), radius: r.radius }, mult));
                }
            }
        }
    }
    Ok(())
}

/// Zeros of g(x): both points above each root, or one point of twice the
/// multiplicity above a root of w.
fn vertical_zeros(g: &QPoly, w: &QPoly, prec: usize, out: &mut Vec<(Place, i64)>) -> Result<()> {
    for (i, s) in g.squarefree_decomposition().iter().enumerate() {
        let mult = i as i64 + 1;
        if s.degree().unwrap_or(0) == 0 {
            continue;
        }
        let on_w = s.gcd(w);
        let off_w = s.exact_div(&on_w).ok_or_else(|| Error::Internal("gcd division".into()))?;
        // roots shared with w are 2-torsion points, where x - x0 vanishes doubly
        if on_w.degree().unwrap_or(0) > 0 {
            let (rats, rest) = split_rational_roots(&on_w)?;
            for r in rats {
                out.push((Place::Exact(CurvePoint::Affine { x: Scalar::Rat(r), y: Scalar::int(0) }), 2 * mult));
            }
            for r in roots_of_squarefree(&rest, prec)? {
                out.push((Place::Numeric { x: r.approx(), y: Complex64::new(0.0, 0.0), radius: r.radius }, 2 * mult));
            }
        }
        let (rats, rest) = split_rational_roots(&off_w)?;
        for r in rats {
            let y = Scalar::sqrt_of(&w.eval(&r))?;
            let x = Scalar::Rat(r);
            out.push((Place::Exact(CurvePoint::Affine { x: x.clone(), y: y.clone() }), mult));
            out.push((Place::Exact(CurvePoint::Affine { x, y: y.neg() }), mult));
        }
        for r in roots_of_squarefree(&rest, prec)? {
            let y = eval_complex(w, &r.center).sqrt();
            let yc = y.to_c64();
            out.push((Place::Numeric { x: r.approx(), y: yc, radius: r.radius }, mult));
            out.push((Place::Numeric { x: r.approx(), y: -yc, radius: r.radius }, mult));
        }
    }
    Ok(())
}

fn same_place(a: &Place, b: &Place) -> bool {
    if let (Place::Exact(p), Place::Exact(q)) = (a, b) {
        return p == q;
    }
    let radius = |p: &Place| if let Place::Numeric { radius, .. } = p { *radius } else { 0.0 };
    match (a.approx(), b.approx()) {
        (Some((x1, y1)), Some((x2, y2))) => {
            let close = |u: Complex64, v: Complex64| (u - v).norm() <= 1e-9 * (1.0 + u.norm());
            (x1 - x2).norm() <= radius(a) + radius(b) + 1e-9 * (1.0 + x1.norm()) && close(y1, y2)
        }
        (None, None) => true,
        _ => false,
    }
}

/// Adds up the multiplicities of places found twice, as happens when a
/// zero of gcd(u, v) is also a zero of the coprime part.
fn merge_places(support: Vec<(Place, i64)>) -> Vec<(Place, i64)> {
    let mut out: Vec<(Place, i64)> = Vec::with_capacity(support.len());
    for (p, m) in support {
        match out.iter_mut().find(|(q, _)| same_place(q, &p)) {
            Some((q, k)) => {
                *k += m;
                if matches!(p, Place::Exact(_)) {
                    *q = p;
                }
            }
            None => out.push((p, m)),
        }
    }
    out
}

/// The divisor of a nonzero function with poles only at O.
pub fn divisor_of(f: &FFElement<Rational>, precision: usize) -> Result<Divisor> {
    let pole = f.pole_order().ok_or_else(|| Error::InvalidInput("the zero function has no divisor".into()))?;
    let mut support = Vec::new();
    let g = f.u.gcd(&f.v);
    let u1 = f.u.exact_div(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
    let v1 = f.v.exact_div(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
    vertical_zeros(&g, &f.curve().w_poly(), precision, &mut support)?;
    coprime_zeros(&FFElement::new(f.curve(), u1, v1), precision, &mut support)?;
    if pole > 0 {
        support.push((Place::Exact(CurvePoint::Infinity), -(pole as i64)));
    }
    let d = Divisor { support: merge_places(support) };
    if d.degree() != 0 {
        return Err(Error::Internal(format!("divisor of degree {}", d.degree())));
    }
    Ok(d)
}

/// The zeros of f - lambda with multiplicities (summing to the pole order of f).
pub fn fiber_roots(f: &FFElement<Rational>, lambda: &Rational, precision: usize) -> Result<Vec<(Place, usize)>> {
    if f.is_constant() {
        return Err(Error::InvalidInput("constant function has no fibres".into()));
    }
    Ok(divisor_of(&f.add_constant(&-lambda), precision)?.zeros())
}

fn line_through(curve: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> Result<(FFElement<Scalar>, CurvePoint)> {
    let s = curve.add(p, q)?;
    let (Some((x1, y1)), Some((x2, y2))) = (p.coords_pair(), q.coords_pair()) else {
        return Ok((FFElement::constant(curve, Scalar::int(1)), s));
    };
    if s.is_infinity() {
        let l = FFElement::new(curve, Poly::new(vec![x1.neg(), Scalar::int(1)]), Poly::zero());
        return Ok((l, s));
    }
    let m = if x1 == x2 {
        let three_x2 = Scalar::int(3).mul(&x1.mul(x1));
        three_x2.add(&Scalar::Rat(curve.a().clone())).checked_div(&y1.add(y1))?
    } else {
        y2.sub(y1).checked_div(&x2.sub(x1))?
    };
    // y - y1 - m (x - x1)
    let u = Poly::new(vec![m.mul(x1).sub(y1), m.neg()]);
    Ok((FFElement::new(curve, u, Poly::one()), s))
}

/// A function with divisor sum(P_i) - n(O), normalised so that its
/// coefficient of highest pole order is 1.
pub fn function_with_divisor(curve: &WeierstrassCurve, points: &[CurvePoint]) -> Result<FFElement<Scalar>> {
    if points.len() < 2 {
        return Err(Error::InvalidDivisor(format!("need at least two points, got {}", points.len())));
    }
    let all: Vec<&Scalar> = points.iter().flat_map(|p| p.coords()).collect();
    Scalar::common_field(all)?;
    let mut total = CurvePoint::Infinity;
    for p in points {
        total = curve.add(&total, p)?;
    }
    if !total.is_infinity() {
        return Err(Error::InvalidDivisor(format!("points sum to {total}, not O")));
    }
    let mut num = FFElement::constant(curve, Scalar::int(1));
    let mut den: Poly<Scalar> = Poly::one();
    let mut s = CurvePoint::Infinity;
    for p in points {
        let (l, next) = line_through(curve, &s, p)?;
        num = num.mul(&l);
        if let Some(xn) = next.x() {
            if !s.is_infinity() && !p.is_infinity() {
                den = den.mul(&Poly::new(vec![xn.neg(), Scalar::int(1)]));
            }
        }
        s = next;
    }
    let f = num.div_poly(&den).ok_or_else(|| Error::Internal("Miller quotient is not a polynomial".into()))?;
    let top = if 2 * f.u.deg() > 2 * f.v.deg() + 3 { f.u.lc() } else { f.v.lc() };
    let inv = top.checked_inv()?;
    let f = f.scale(&inv);
    Ok(FFElement::new(curve, f.u.map(|c| c.clone().simplify()), f.v.map(|c| c.clone().simplify())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;

    fn e17() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(0, 17).unwrap()
    }

    #[test]
    fn vertical_line() {
        let e = e17();
        let p = CurvePoint::from_ints(-2, 3);
        let f = function_with_divisor(&e, &[p.clone(), e.neg(&p)]).unwrap().to_rational().unwrap();
        assert_eq!(f, FFElement::from_parts(&e, vec![q(2, 1), q(1, 1)], vec![]));
        let d = divisor_of(&f, 128).unwrap();
        assert!(d.zeros_match(&[p.clone(), e.neg(&p)], 0.0));
        assert_eq!(d.pole_order_at_infinity(), 2);
    }

    #[test]
    fn shared_zero_of_both_parts_is_counted_once() {
        // x y on y^2 = x^3 - x: x vanishes doubly at (0, 0) and y once more
        let e = WeierstrassCurve::from_ints(-1, 0).unwrap();
        let f = FFElement::from_parts(&e, vec![], vec![q(0, 1), q(1, 1)]);
        let d = divisor_of(&f, 128).unwrap();
        let origin = d.zeros().into_iter().find(|(p, _)| *p == Place::Exact(CurvePoint::from_ints(0, 0))).unwrap();
        assert_eq!(origin.1, 3);
        assert_eq!(d.shape(), vec![3, 1, 1]);
    }

    #[test]
    fn two_torsion_gives_y() {
        // x^3 - x = x (x - 1)(x + 1)
        let e = WeierstrassCurve::from_ints(-1, 0).unwrap();
        let t: Vec<CurvePoint> = [-1, 0, 1].iter().map(|&x| CurvePoint::from_ints(x, 0)).collect();
        let f = function_with_divisor(&e, &t).unwrap().to_rational().unwrap();
        assert_eq!(f, FFElement::y(&e));
        let d = divisor_of(&f, 128).unwrap();
        assert!(d.zeros_match(&t, 0.0));
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn tangent_line_divisor() {
        let e = e17();
        let p = CurvePoint::from_ints(2, 5);
        let m2 = e.neg(&e.double(&p));
        let pts = [p.clone(), p.clone(), m2.clone()];
        let f = function_with_divisor(&e, &pts).unwrap().to_rational().unwrap();
        // y - 5 - (6/5)(x - 2)
        assert_eq!(f, FFElement::from_parts(&e, vec![q(-13, 5), q(-6, 5)], vec![q(1, 1)]));
        let d = divisor_of(&f, 128).unwrap();
        assert!(d.zeros_match(&pts, 0.0));
        assert_eq!(d.shape(), vec![2, 1]);
    }

    #[test]
    fn divisor_of_x_and_constants() {
        let e = e17();
        let d = divisor_of(&FFElement::x(&e), 128).unwrap();
        let s = Scalar::sqrt_of(&q(17, 1)).unwrap();
        let p0 = CurvePoint::Affine { x: Scalar::int(0), y: s.clone() };
        assert!(d.zeros_match(&[p0.clone(), e.neg(&p0)], 0.0));
        let d = divisor_of(&FFElement::constant(&e, q(3, 1)), 128).unwrap();
        assert!(d.support.is_empty());
        assert!(divisor_of(&FFElement::zero(&e), 128).is_err());
    }

    #[test]
    fn irrational_places() {
        // y = x^3 + 17 has numeric zeros: y itself, three non-rational 2-torsion points
        let e = e17();
        let d = divisor_of(&FFElement::y(&e), 128).unwrap();
        assert_eq!(d.shape(), vec![1, 1, 1]);
        for (p, _) in d.zeros() {
            let (x, y) = p.approx().unwrap();
            assert!(y.norm() < 1e-12);
            assert!((x * x * x + 17.0).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_sums() {
        let e = e17();
        let p = CurvePoint::from_ints(-2, 3);
        let err = function_with_divisor(&e, &[p.clone(), p.clone()]).unwrap_err();
        assert!(matches!(err, Error::InvalidDivisor(_)));
    }

    #[test]
    fn fibres_of_x() {
        let e = WeierstrassCurve::from_ints(-1, 0).unwrap();
        let x = FFElement::x(&e);
        let f = fiber_roots(&x, &q(2, 1), 128).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(_, m)| *m == 1));
        let f = fiber_roots(&x, &q(1, 1), 128).unwrap();
        assert_eq!(f, vec![(Place::Exact(CurvePoint::from_ints(1, 0)), 2)]);
    }

    #[test]
    fn quadratic_places_are_exact() {
        let e = e17();
        // a line through (-2, 3) and (2, 5) meets the curve again at -(1/4, -33/8);
        // the vertical x^2 - 2 gives points over Q(sqrt 2, ...)
        let f = FFElement::from_parts(&e, vec![q(-2, 1), q(0, 1), q(1, 1)], vec![]).add(&FFElement::y(&e));
        let d = divisor_of(&f, 128).unwrap();
        assert_eq!(d.degree(), 0);
        for (p, m) in d.zeros() {
            if let Place::Exact(pt) = &p {
                assert!(e.contains(pt));
            }
            assert_eq!(m, 1);
        }
    }
}
