//! Elliptic functions f of even degree n whose derivative is l h^2, where l
//! is the tangent line at a point P. Exactness of l h^2 is two linear
//! conditions, so the free coefficients of h must satisfy two quadratic
//! equations.

use serde::Serialize;

use super::genus::{genus_of_preimage, BranchPoint};
use super::QuadraticForm;
use crate::arith::linalg::{self, QMatrix};
use crate::arith::{Poly, Rational};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::ff::{divisor_of, rr_basis, FFElement, Place};

/// Two functionals on L((n+1) O) cutting out the image of the derivation
/// D: L(n O) -> L((n+1) O), in the coordinates of [`crate::ff::rr_basis`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Functionals {
    pub n: usize,
    pub rows: [Vec<Rational>; 2],
}

impl Functionals {
    pub fn apply(&self, g: &FFElement) -> Result<[Rational; 2]> {
        let c = g.rr_coordinates(self.n + 1)?;
        let dot = |r: &[Rational]| r.iter().zip(&c).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        Ok([dot(&self.rows[0]), dot(&self.rows[1])])
    }

    /// True when g lies in D(L(n O)).
    pub fn is_exact(&self, g: &FFElement) -> Result<bool> {
        Ok(self.apply(g)?.iter().all(|v| v.is_zero()))
    }
}

/// Matrix of D from L(n O) to L((n+1) O) in the monomial bases.
fn derivation_matrix(curve: &WeierstrassCurve, n: usize) -> Result<QMatrix> {
    let cols: Vec<Vec<Rational>> =
        rr_basis(curve, n)?.iter().map(|b| b.derivative().rr_coordinates(n + 1)).collect::<Result<_>>()?;
    Ok(linalg::transpose(&cols))
}

pub fn exactness_functionals(curve: &WeierstrassCurve, n: usize) -> Result<Functionals> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!("degree must be even and at least 4, got {n}")));
    }
    let d = derivation_matrix(curve, n)?;
    let image_rank = linalg::rank(&d);
    if image_rank != n - 1 {
        return Err(Error::Internal(format!("derivation has rank {image_rank}, expected {}", n - 1)));
    }
    let (rows, _) = linalg::rref(&linalg::left_nullspace(&d));
    let [r0, r1]: [Vec<Rational>; 2] =
        rows.try_into().map_err(|_| Error::Internal("cokernel is not two-dimensional".into()))?;
    Ok(Functionals { n, rows: [r0, r1] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// n = 4m
    I,
    /// n = 4m + 2
    II,
}

/// h = s * leading + sum t_i * monomials[i], with the homogenizing variable
/// s last.
#[derive(Clone, Debug, Serialize)]
pub struct HTemplate {
    pub m: usize,
    pub leading: FFElement,
    pub monomials: Vec<FFElement>,
    pub names: Vec<String>,
}

impl HTemplate {
    fn new(curve: &WeierstrassCurve, n: usize) -> (Case, Self) {
        let one = Rational::one();
        let xp = |k: usize| FFElement::new(curve, Poly::monomial(one.clone(), k), Poly::zero());
        let yxp = |k: usize| FFElement::new(curve, Poly::zero(), Poly::monomial(one.clone(), k));
        let (case, m, leading, nb) = if n % 4 == 0 {
            let m = n / 4;
            (Case::I, m, yxp(m - 2), m - 2)
        } else {
            let m = (n - 2) / 4;
            (Case::II, m, xp(m), m - 1)
        };
        let mut monomials: Vec<FFElement> = (0..m).map(xp).collect();
        monomials.extend((0..nb).map(yxp));
        let mut names: Vec<String> = (0..m).map(|i| format!("a{i}")).collect();
        names.extend((0..nb).map(|i| format!("b{i}")));
        names.push("s".into());
        (case, HTemplate { m, leading, monomials, names })
    }

    pub fn len(&self) -> usize {
        self.monomials.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All template functions, the leading one last.
    pub fn functions(&self) -> Vec<FFElement> {
        let mut v = self.monomials.clone();
        v.push(self.leading.clone());
        v
    }

    /// The h given by a homogeneous vector with s != 0.
    pub fn h(&self, v: &[Rational]) -> Result<FFElement> {
        if v.len() != self.len() {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", self.len(), v.len())));
        }
        let s = v.last().unwrap();
        if s.is_zero() {
            return Err(Error::InvalidInput("vector lies on the hyperplane at infinity".into()));
        }
        let mut h = self.leading.clone();
        for (t, e) in v.iter().zip(&self.monomials) {
            h = h.add(&e.scale(&(t / s)));
        }
        Ok(h)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PencilSystem {
    pub curve: WeierstrassCurve,
    pub n: usize,
    pub case: Case,
    pub point: CurvePoint,
    /// -2P, the third zero of l.
    pub third_zero: CurvePoint,
    pub l: FFElement,
    pub template: HTemplate,
    pub functionals: Functionals,
    pub forms: [QuadraticForm; 2],
}

impl PencilSystem {
    /// The hyperplane at infinity s = 0 and the hyperplane h(-2P) = 0.
    pub fn excluded_hyperplanes(&self) -> Result<Vec<Vec<Rational>>> {
        let at_infinity: Vec<Rational> =
            (0..self.template.len()).map(|i| if i + 1 == self.template.len() { Rational::one() } else { Rational::zero() }).collect();
        let at_third: Vec<Rational> = self
            .template
            .functions()
            .iter()
            .map(|e| e.eval_point(&self.third_zero).and_then(|v| v.as_rational().cloned()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Internal("template does not evaluate rationally at -2P".into()))?;
        Ok(vec![at_infinity, at_third])
    }
}

/// The tangent line y - lambda x - nu at an affine point with y != 0.
fn tangent_line(curve: &WeierstrassCurve, x: &Rational, y: &Rational) -> FFElement {
    let slope = (Rational::from_int(3) * x * x + curve.a()) / (Rational::from_int(2) * y);
    let nu = y - &slope * x;
    FFElement::new(curve, Poly::new(vec![-nu, -slope]), Poly::one())
}

fn rational_coords(p: &CurvePoint) -> Result<(Rational, Rational)> {
    match p.coords_pair() {
        Some((x, y)) => match (x.as_rational(), y.as_rational()) {
            (Some(x), Some(y)) => Ok((x.clone(), y.clone())),
            _ => Err(Error::InvalidInput(format!("{p} is not a rational point"))),
        },
        None => Err(Error::TorsionPoint(1)),
    }
}

pub fn build_pencil(curve: &WeierstrassCurve, p: &CurvePoint, n: usize) -> Result<PencilSystem> {
    if !curve.contains(p) {
        return Err(Error::NotOnCurve(p.to_string()));
    }
    let (x, y) = rational_coords(p)?;
    if y.is_zero() {
        return Err(Error::TorsionPoint(2));
    }
    if curve.mul(p, 3).is_infinity() {
        return Err(Error::TorsionPoint(3));
    }
    if n < 8 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!("degree must be even and at least 8, got {n}")));
    }
    let functionals = exactness_functionals(curve, n)?;
    let l = tangent_line(curve, &x, &y);
    let (case, template) = HTemplate::new(curve, n);
    let funcs = template.functions();
    let k = funcs.len();
    let mut mats: [QMatrix; 2] = [vec![vec![Rational::zero(); k]; k], vec![vec![Rational::zero(); k]; k]];
    for i in 0..k {
        for j in i..k {
            let vals = functionals.apply(&l.mul(&funcs[i]).mul(&funcs[j]))?;
            for (mat, v) in mats.iter_mut().zip(vals) {
                mat[i][j] = v.clone();
                mat[j][i] = v;
            }
        }
    }
    let [m0, m1] = mats;
    Ok(PencilSystem {
        curve: curve.clone(),
        n,
        case,
        point: p.clone(),
        third_zero: curve.mul(p, -2),
        l,
        template,
        functionals,
        forms: [QuadraticForm::new(m0)?, QuadraticForm::new(m1)?],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub vector: Vec<Rational>,
    pub f: FFElement,
    pub h: FFElement,
    pub lambda_p: Rational,
    pub divisor_shape: Vec<usize>,
    pub genus: usize,
    pub branch_points: Vec<BranchPoint>,
}

/// Rebuild f from a common isotropic vector and check everything the
/// construction promises.
pub fn verify_construction(
    curve: &WeierstrassCurve,
    p: &CurvePoint,
    n: usize,
    vector: &[Rational],
    precision: usize,
) -> Result<ConstructionReport> {
    let sys = build_pencil(curve, p, n)?;
    let h = sys.template.h(vector)?;
    let h_at = h
        .eval_point(&sys.third_zero)
        .and_then(|v| v.as_rational().cloned())
        .ok_or_else(|| Error::Internal("h does not evaluate rationally at -2P".into()))?;
    if h_at.is_zero() {
        return Err(Error::Construction(format!("h vanishes at -2P = {}", sys.third_zero)));
    }
    let target = sys.l.mul(&h).mul(&h);
    let vals = sys.functionals.apply(&target)?;
    if vals.iter().any(|v| !v.is_zero()) {
        return Err(Error::Construction(format!(
            "l h^2 is not a derivative: functional values {} and {}",
            vals[0], vals[1]
        )));
    }
    let d = derivation_matrix(curve, n)?;
    let coords = linalg::solve(&d, &target.rr_coordinates(n + 1)?)
        .ok_or_else(|| Error::Internal("exact l h^2 has no antiderivative".into()))?;
    let f = FFElement::from_rr_coordinates(curve, &coords);
    let diff = f.derivative().sub(&target);
    if let Some(k) = (0..=diff.u.deg().max(0) as usize).find(|&k| !diff.u.coeff(k).is_zero()) {
        return Err(Error::Construction(format!("D(f) - l h^2 has coefficient {} at x^{k}", diff.u.coeff(k))));
    }
    if let Some(k) = (0..=diff.v.deg().max(0) as usize).find(|&k| !diff.v.coeff(k).is_zero()) {
        return Err(Error::Construction(format!("D(f) - l h^2 has coefficient {} at x^{k} y", diff.v.coeff(k))));
    }
    let lambda_p = f
        .eval_point(&sys.third_zero)
        .and_then(|v| v.as_rational().cloned())
        .ok_or_else(|| Error::Internal("f does not evaluate rationally at -2P".into()))?;
    let div = divisor_of(&f.add_constant(&-&lambda_p), precision)?;
    let shape = div.shape();
    let at_third = div
        .zeros()
        .into_iter()
        .find(|(pl, _)| matches!(pl, Place::Exact(q) if *q == sys.third_zero))
        .map_or(0, |(_, m)| m);
    let twos = shape.iter().filter(|&&m| m == 2).count();
    if at_third != 2 || twos != 1 || shape.iter().any(|&m| m != 2 && m % 2 == 0) {
        return Err(Error::Construction(format!(
            "divisor of f - f(-2P) has shape {shape:?} with multiplicity {at_third} at -2P"
        )));
    }
    let g = genus_of_preimage(&f, precision)?;
    Ok(ConstructionReport {
        vector: vector.to_vec(),
        f,
        h,
        lambda_p,
        divisor_shape: shape,
        genus: g.genus,
        branch_points: g.branch_points,
    })
}
