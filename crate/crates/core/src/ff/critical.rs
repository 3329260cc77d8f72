//! Critical values of a function with poles only at O: the values f(Q) at
//! the zeros Q of D(f), found as roots of a resultant and matched to the
//! critical points to read off ramification.

use num_complex::Complex64;
use serde::Serialize;

use super::{divisor_of, FFElement, Place};
use crate::arith::poly::{interpolate, resultant};
use crate::arith::roots::roots_of_squarefree;
use crate::arith::{Poly, QPoly, Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CriticalFibre {
    /// The value, when some critical point above it is exact.
    pub exact: Option<Scalar>,
    pub center: Complex64,
    /// Certified radius about `center` containing the value.
    pub radius: f64,
    pub is_real: bool,
    /// Ramification indices above 1 in the fibre, decreasing.
    pub indices: Vec<usize>,
}

/// Polynomial in lambda interpolated from its values at 0, 1, ..., degree.
fn interpolate_in_lambda(degree: usize, at: impl Fn(&Rational) -> Rational) -> QPoly {
    let xs: Vec<Rational> = (0..=degree as i64).map(Rational::from_int).collect();
    let ys: Vec<Rational> = xs.iter().map(at).collect();
    interpolate(&xs, &ys)
}

/// A nonzero polynomial whose roots are exactly the critical values of f.
pub fn critical_value_poly(f: &FFElement) -> Result<QPoly> {
    if f.is_constant() {
        return Err(Error::InvalidInput("a constant function has no critical values".into()));
    }
    let d = f.derivative();
    let w = f.w();
    let g = d.u.gcd(&d.v);
    let u1 = d.u.exact_div(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
    let v1 = d.v.exact_div(&g).ok_or_else(|| Error::Internal("gcd division".into()))?;
    let mut c = QPoly::one();
    // above a root x0 of g both points (x0, +-sqrt w) are critical, with
    // values u +- v sqrt(w), the roots of (lambda - u)^2 - v^2 w
    if let Some(k) = g.degree().filter(|&k| k > 0) {
        let vw = f.v.mul(&f.v).mul(&w);
        c = c.mul(&interpolate_in_lambda(2 * k, |l| {
            let shifted = f.u.sub(&Poly::constant(l.clone()));
            resultant(&g, &shifted.mul(&shifted).sub(&vw))
        }));
    }
    // the remaining critical points are (x, -u1/v1) over the roots of the
    // norm, with value (u v1 - v u1) / v1; the norm is made monic so the
    // resultant is the product over its roots whatever the degree in x
    let norm = u1.mul(&u1).sub(&v1.mul(&v1).mul(&w)).monic();
    if let Some(k) = norm.degree().filter(|&k| k > 0) {
        let num = f.u.mul(&v1).sub(&f.v.mul(&u1));
        c = c.mul(&interpolate_in_lambda(k, |l| resultant(&norm, &v1.scale(l).sub(&num))));
    }
    if c.is_zero() {
        return Err(Error::Internal("critical value polynomial vanishes".into()));
    }
    Ok(c)
}

fn eval_c64(f: &FFElement, x: Complex64, y: Complex64) -> Complex64 {
    let horner = |c: &[Rational]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * x + k.to_f64());
    horner(f.u.coeffs()) + horner(f.v.coeffs()) * y
}

/// The critical values of f, certified, with the ramification in each fibre.
pub fn critical_fibres(f: &FFElement, precision: usize) -> Result<Vec<CriticalFibre>> {
    let c = critical_value_poly(f)?;
    let roots = roots_of_squarefree(&c.squarefree_part(), precision)?;
    let centers: Vec<Complex64> = roots.iter().map(|r| r.approx()).collect();
    let mut fibres: Vec<CriticalFibre> = roots
        .iter()
        .zip(&centers)
        .map(|(r, &center)| CriticalFibre { exact: None, center, radius: r.radius, is_real: r.is_real, indices: vec![] })
        .collect();
    let separation = (0..centers.len())
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (centers[i] - centers[j]).norm())
        .fold(f64::INFINITY, f64::min);
    // D is a nowhere-vanishing derivation, so a zero of order e of D(f) at Q
    // is a point where f - f(Q) vanishes to order e + 1
    for (place, e) in divisor_of(&f.derivative(), precision)?.zeros() {
        let (value, exact) = match &place {
            Place::Exact(p) => {
                let v = f.eval_point(p).ok_or_else(|| Error::Internal("critical point at infinity".into()))?;
                (v.to_complex_f64(), Some(v))
            }
            Place::Numeric { x, y, .. } => (eval_c64(f, *x, *y), None),
        };
        let (k, dist) = centers
            .iter()
            .enumerate()
            .map(|(k, c)| (k, (c - value).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Internal("critical point without critical value".into()))?;
        if dist > separation / 3.0 {
            return Err(Error::PrecisionExhausted(format!("critical value near {value} cannot be matched")));
        }
        fibres[k].indices.push(e + 1);
        if fibres[k].exact.is_none() {
            fibres[k].exact = exact;
        }
    }
    if let Some(fb) = fibres.iter().find(|fb| fb.indices.is_empty()) {
        return Err(Error::Internal(format!("no critical point above {}", fb.center)));
    }
    for fb in fibres.iter_mut() {
        fb.indices.sort_unstable_by(|a, b| b.cmp(a));
    }
    fibres.sort_by(|a, b| a.center.re.total_cmp(&b.center.re).then(a.center.im.total_cmp(&b.center.im)));
    Ok(fibres)
}
