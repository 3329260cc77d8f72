//! Certified isolation of the complex roots of a squarefree polynomial.
//!
//! Approximations come from Aberth iteration, first in doubles and then at
//! the requested precision. Each approximation z_i is then given the radius
//! n |p(z_i)| / |a_n prod_{j != i} (z_i - z_j)|; the union of these disks
//! contains every root and a connected component made of k disks contains
//! exactly k roots, so pairwise disjoint disks isolate one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::bigfloat::{BigComplex, BigFloat};
use super::poly::QPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub center: BigComplex,
    /// The disk of this radius about `center` contains exactly one root.
    pub radius: f64,
    /// Set when the root is certified to be real.
    pub is_real: bool,
}

impl IsolatedRoot {
    pub fn approx(&self) -> Complex64 {
        self.center.to_c64()
    }
}

fn aberth_f64(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let bound = 1.0 + coeffs[..n].iter().map(|c| (c / lc).abs()).fold(0.0, f64::max);
    let geo = (coeffs[0] / lc).abs().powf(1.0 / n as f64).max(1e-3).min(bound);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(geo, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let dcoeffs: Vec<f64> = (1..=n).map(|i| coeffs[i] * i as f64).collect();
    let horner = |c: &[f64], x: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    for _ in 0..800 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let pv = horner(coeffs, z[i]);
            let dv = horner(&dcoeffs, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(1.0));
        }
        if worst < 1e-14 {
            return Some(z);
        }
    }
    Some(z)
}

fn horner_big(c: &[BigFloat], x: &BigComplex) -> BigComplex {
    let p = x.precision();
    let mut acc = BigComplex::zero(p);
    for a in c.iter().rev() {
        acc = acc.mul(x);
        acc.re = acc.re.add(a);
    }
    acc
}

/// p(z) for a rational polynomial at a complex point.
pub fn eval_complex(p: &QPoly, z: &BigComplex) -> BigComplex {
    let prec = z.precision();
    let c: Vec<BigFloat> = p.coeffs().iter().map(|a| BigFloat::from_rational(a, prec)).collect();
    horner_big(&c, z)
}

fn aberth_big(c: &[BigFloat], z: &mut [BigComplex], prec: usize) {
    let n = z.len();
    let dc: Vec<BigFloat> = (1..c.len()).map(|i| c[i].mul(&BigFloat::from_i64(i as i64, prec))).collect();
    let one = BigComplex::real(BigFloat::one(prec));
    let tol = -(prec as f64) + 12.0;
    for _ in 0..60 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            let pv = horner_big(c, &z[i]);
            if pv.is_zero() {
                continue;
            }
            let dv = horner_big(&dc, &z[i]);
            if dv.is_zero() {
                continue;
            }
            let ratio = pv.div(&dv);
            let mut s = BigComplex::zero(prec);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        s = s.add(&one.div(&d));
                    }
                }
            }
            let den = one.sub(&ratio.mul(&s));
            if den.is_zero() {
                continue;
            }
            let w = ratio.div(&den);
            z[i] = z[i].sub(&w);
            let rel = w.abs().log2_est() - z[i].abs().log2_est().max(0.0);
            worst = worst.max(rel);
        }
        if worst < tol {
            return;
        }
    }
}

fn to_big_coeffs(p: &[BigInt], prec: usize) -> Vec<BigFloat> {
    p.iter().map(|c| BigFloat::from_int(c, prec)).collect()
}

fn scaled_f64(p: &[BigInt]) -> Vec<f64> {
    let maxbits = p.iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = maxbits.saturating_sub(900);
    p.iter()
        .map(|c| {
            let s: BigInt = if c.is_negative() { -((-c) >> shift) } else { c >> shift };
            let v: f64 = s.to_string().parse().unwrap_or(0.0);
            v
        })
        .collect()
}

/// Isolate all complex roots of a squarefree integer polynomial (ascending
/// coefficients, degree >= 1) at `prec` bits.
pub fn isolate_roots(p: &[BigInt], prec: usize) -> Result<Vec<IsolatedRoot>> {
    let n = p.len().saturating_sub(1);
    if n == 0 || p[n].is_zero() {
        return Err(Error::InvalidPolynomial("degree must be at least one".into()));
    }
    if n == 1 {
        let r = Rational::new(-p[0].clone(), p[1].clone())?;
        let radius = 2f64.powi(-(prec.min(1000) as i32) + 2) * r.to_f64().abs().max(1.0);
        return Ok(vec![IsolatedRoot { center: BigComplex::real(BigFloat::from_rational(&r, prec)), radius, is_real: true }]);
    }
    let start = aberth_f64(&scaled_f64(p)).unwrap_or_else(|| {
        (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect()
    });
    let mut prec_now = prec.max(64);
    let mut z: Vec<BigComplex> = start.iter().map(|s| BigComplex::from_c64(*s, prec_now)).collect();
    for _attempt in 0..4 {
        let c = to_big_coeffs(p, prec_now);
        aberth_big(&c, &mut z, prec_now);
        if let Some(roots) = certify(&c, &z, prec_now) {
            return Ok(roots);
        }
        prec_now *= 2;
        z = z.iter().map(|w| BigComplex::new(w.re.with_precision(prec_now), w.im.with_precision(prec_now))).collect();
    }
    Err(Error::PrecisionExhausted(format!("could not isolate the roots of a degree {n} polynomial")))
}

fn certify(c: &[BigFloat], z: &[BigComplex], prec: usize) -> Option<Vec<IsolatedRoot>> {
    let n = z.len();
    let lc = c[n].abs();
    let u = 2f64.powi(-(prec.min(1000) as i32) + 3);
    let abs_coeffs: Vec<BigFloat> = c.iter().map(|a| a.abs()).collect();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let pv = horner_big(c, &z[i]).abs();
        // rounding in Horner: at most 2n u sum |a_k| |z|^k
        let az = z[i].abs();
        let mut mag = BigFloat::zero(prec);
        for a in abs_coeffs.iter().rev() {
            mag = mag.mul(&az).add(a);
        }
        let slack = mag.mul(&BigFloat::from_f64(2.0 * n as f64 * u, prec));
        let num = pv.add(&slack).mul(&BigFloat::from_i64(n as i64, prec));
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]).abs());
            }
        }
        if den.is_zero() {
            return None;
        }
        let r = num.div(&den);
        let floor = u * az.to_f64().max(1.0);
        let rf = r.to_f64() * (1.0 + 1e-12);
        radii.push(if rf.is_finite() { rf.max(floor).max(f64::MIN_POSITIVE) } else { f64::INFINITY });
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = z[i].sub(&z[j]).abs().to_f64();
            if !(d > radii[i] + radii[j]) {
                return None;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut center = z[i].clone();
        let mut radius = radii[i];
        let im = center.im.abs().to_f64();
        let mut is_real = false;
        if im <= radii[i] {
            // the disk about Re(z_i) of radius r_i + |Im z_i| is closed under
            // conjugation; if it meets no other disk its single root is real
            let wide = radii[i] + im;
            let re = BigComplex::real(center.re.clone());
            let clear = (0..n).filter(|&j| j != i).all(|j| re.sub(&z[j]).abs().to_f64() > wide + radii[j]);
            if clear {
                is_real = true;
                center = re;
                radius = wide;
            }
        }
        out.push(IsolatedRoot { center, radius, is_real });
    }
    Some(out)
}

/// Roots of a squarefree rational polynomial.
pub fn roots_of_squarefree(p: &QPoly, prec: usize) -> Result<Vec<IsolatedRoot>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(Error::InvalidPolynomial("polynomial is not squarefree".into()));
    }
    isolate_roots(&p.primitive_integer(), prec)
}

/// The rational roots of a nonzero polynomial, each listed once, found by
/// exact verification of rounded real root approximations.
pub fn rational_roots(p: &QPoly) -> Result<Vec<Rational>> {
    let sf = p.squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let ints = sf.primitive_integer();
    let lc = Rational::from_int(ints.last().unwrap().clone());
    let mut out = Vec::new();
    for r in isolate_roots(&ints, 128)? {
        let scaled = r.center.re.mul(&BigFloat::from_rational(&lc, 128 + lc.numer().bits() as usize));
        let k = scaled.round();
        let cand = Rational::from_int(k) / &lc;
        if sf.eval(&cand).is_zero() {
            out.push(cand);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Splits a squarefree polynomial into its rational roots and the product of
/// its remaining irreducible factors (monic).
pub fn split_rational_roots(p: &QPoly) -> Result<(Vec<Rational>, QPoly)> {
    let roots = rational_roots(p)?;
    let mut rest = p.monic();
    for r in &roots {
        let lin = QPoly::new(vec![-r, Rational::one()]);
        while let Some(qq) = rest.exact_div(&lin) {
            rest = qq;
        }
    }
    Ok((roots, rest))
}
