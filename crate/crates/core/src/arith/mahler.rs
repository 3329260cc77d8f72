//! Logarithmic Mahler measure and absolute Weil height of algebraic numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::bigfloat::{BigComplex, BigFloat, Estimate};
use super::poly::QPoly;
use super::roots::{isolate_roots, IsolatedRoot};
use crate::error::{Error, Result};

/// log M(p) for a nonzero integer polynomial (ascending coefficients), with
/// an error bound. The polynomial must be squarefree.
pub fn log_mahler_measure(p: &[BigInt], prec: usize) -> Result<Estimate> {
    let n = p.len().saturating_sub(1);
    let lc = p.last().ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
    if lc.is_zero() {
        return Err(Error::InvalidPolynomial("trailing zero coefficient".into()));
    }
    let mut acc = BigFloat::from_int(&lc.abs(), prec).ln();
    let mut err = 2f64.powi(-(prec.min(1000) as i32) + 6);
    if n == 0 {
        return Ok(Estimate { value: acc, error: err });
    }
    for r in isolate_roots(p, prec)? {
        let a = r.center.abs();
        let af = a.to_f64();
        if af > 1.0 {
            acc = acc.add(&a.ln());
        }
        // log max(1, |z|) is 1-Lipschitz in log|z| and |log|z| - log|c|| <= r/(|c|-r)
        if af + r.radius > 1.0 {
            let lo = (af - r.radius).max(1.0);
            err += r.radius / lo + 2f64.powi(-(prec.min(1000) as i32) + 6);
        }
    }
    Ok(Estimate { value: acc, error: err })
}

/// Searches for a proper factor of a squarefree integer polynomial by
/// grouping its isolated roots; each candidate is confirmed by exact
/// division, so a returned factor is genuine.
pub fn find_factor(p: &[BigInt], roots: &[IsolatedRoot], prec: usize) -> Option<QPoly> {
    let n = p.len() - 1;
    let lc = p.last().unwrap().clone();
    let target = QPoly::from_big_ints(p);
    // units: a real root or a conjugate pair
    let mut units: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].is_real {
            units.push(vec![i]);
            continue;
        }
        let ci = roots[i].center.conj();
        let j = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = roots[a].center.sub(&ci).abs().to_f64();
                let db = roots[b].center.sub(&ci).abs().to_f64();
                da.total_cmp(&db)
            });
        match j {
            Some(j) => {
                used[j] = true;
                units.push(vec![i, j]);
            }
            None => units.push(vec![i]),
        }
    }
    let m = units.len();
    if m > 22 {
        return None;
    }
    let lcf = BigComplex::real(BigFloat::from_int(&lc, prec));
    for mask in 1u64..(1u64 << m) - 1 {
        let idx: Vec<usize> = (0..m).filter(|k| mask & (1 << k) != 0).flat_map(|k| units[k].clone()).collect();
        if idx.len() * 2 > n {
            continue;
        }
        // lc * prod (t - z_i) has integer coefficients when the roots form a factor
        let mut coeffs = vec![lcf.clone()];
        for &i in &idx {
            let z = &roots[i].center;
            let mut next = vec![BigComplex::zero(prec); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(z));
            }
            coeffs = next;
        }
        let mut ints = Vec::with_capacity(coeffs.len());
        let mut ok = true;
        for c in &coeffs {
            let k = c.re.round();
            let dev = c.re.sub(&BigFloat::from_int(&k, prec)).abs().to_f64() + c.im.abs().to_f64();
            if dev > 1e-3 {
                ok = false;
                break;
            }
            ints.push(k);
        }
        if !ok {
            continue;
        }
        let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        if g.is_zero() {
            continue;
        }
        let cand = QPoly::from_big_ints(&ints.iter().map(|c| c / &g).collect::<Vec<_>>());
        if cand.degree().unwrap_or(0) > 0 && target.exact_div(&cand).is_some() {
            return Some(cand);
        }
    }
    None
}

/// Absolute logarithmic Weil height of a root of `poly`.
///
/// `poly` must be a primitive irreducible integer polynomial (ascending
/// coefficients) and `degree_of_field` a multiple of its degree: the
/// height is normalised by the degree of the root itself, so the value is
/// the same in every field containing the root.
pub fn mahler_height(poly: &[BigInt], degree_of_field: usize, prec: usize) -> Result<Estimate> {
    let p: Vec<BigInt> = {
        let mut v = poly.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    if p.is_empty() {
        return Err(Error::InvalidPolynomial("zero polynomial".into()));
    }
    let n = p.len() - 1;
    if n == 0 {
        return Err(Error::InvalidPolynomial("constant polynomial has no roots".into()));
    }
    let content = p.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    if content != BigInt::from(1) {
        return Err(Error::InvalidPolynomial(format!("content {content} is not 1")));
    }
    if degree_of_field == 0 || degree_of_field % n != 0 {
        return Err(Error::InvalidInput(format!(
            "a root of a degree {n} polynomial does not lie in a field of degree {degree_of_field}"
        )));
    }
    let q = QPoly::from_big_ints(&p);
    if q.gcd(&q.derivative()).degree() != Some(0) {
        return Err(Error::Reducible("repeated factor".into()));
    }
    let roots = isolate_roots(&p, prec)?;
    if n > 1 {
        if let Some(f) = find_factor(&p, &roots, prec) {
            return Err(Error::Reducible(format!("has the factor {f}")));
        }
    }
    let m = log_mahler_measure(&p, prec)?;
    let scale = BigFloat::from_i64(n as i64, prec);
    Ok(Estimate { value: m.value.div(&scale), error: m.error / n as f64 })
}
