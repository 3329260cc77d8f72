//! Canonical heights, the height pairing and regulators.
//!
//! The canonical height is the limit of 4^-n h(x(2^n P)), with h the
//! absolute logarithmic height. It is evaluated without forming the huge
//! coordinates of 2^n P: the binary form G_n(s, t) whose roots are the
//! conjugates of x(2^n P) satisfies G_{n+1} = Res_{(s,t)}(G_n, X psi - Z phi)
//! where (phi, psi) are the homogeneous doubling polynomials, so
//!
//!   deg(x) * h^ = log M(G_0)
//!               + sum_sigma sum_j 4^(-j-1) log max(|phi|, |psi|)(a_j, b_j)
//!               - sum_p log p sum_j 4^(-j-1) e_{j,p}
//!
//! where (a_j, b_j) are normalised complex pairs for each embedding and
//! e_{j,p} is the p-adic valuation of the content created at step j, which
//! is only nonzero for p dividing R = Res(phi, psi). Each summand is bounded
//! in terms of R and the coefficient sizes, which gives an explicit bound
//! for the truncated tail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CurvePoint, WeierstrassCurve};
use crate::arith::bigfloat::{BigComplex, BigFloat, Estimate};
use crate::arith::linalg::{det_bareiss, det_bigfloat, solve};
use crate::arith::square_class::{factorize, squarefree_kernel};
use crate::arith::{QuadExt, Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HeightConfig {
    /// Working precision in bits for the archimedean part.
    pub precision: usize,
    /// Target absolute error of each height.
    pub tolerance: f64,
}

impl Default for HeightConfig {
    fn default() -> Self {
        HeightConfig { precision: 128, tolerance: 1e-12 }
    }
}

/// Doubling data of an integral model y^2 = x^3 + A x + B with A = a u^4,
/// B = b u^6.
struct DoublingData {
    u2: Rational,
    phi: [BigInt; 5],
    psi: [BigInt; 5],
    res: BigInt,
    log_c_lo: f64,
    log_c_hi: f64,
}

fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    rows
}

/// Resultant of two binary forms given by descending coefficients.
fn form_resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    det_bareiss(&sylvester(a, b))
}

fn l1(v: &[Rational]) -> f64 {
    v.iter().map(|c| c.abs().to_f64()).sum()
}

impl DoublingData {
    fn new(e: &WeierstrassCurve) -> Result<Self> {
        let u = e.a().denom() * e.b().denom();
        let ur = Rational::from_int(u.clone());
        let u2 = &ur * &ur;
        let a_int = e.a() * &u2 * &u2;
        let b_int = e.b() * &u2 * &u2 * &u2;
        debug_assert!(a_int.is_integer() && b_int.is_integer());
        let a: BigInt = a_int.numer().clone();
        let b: BigInt = b_int.numer().clone();
        let phi = [BigInt::one(), BigInt::zero(), -(&a * BigInt::from(2)), -(&b * BigInt::from(8)), &a * &a];
        let psi = [BigInt::zero(), BigInt::from(4), BigInt::zero(), &a * BigInt::from(4), &b * BigInt::from(4)];
        let res = form_resultant(&phi, &psi);
        if res.is_zero() {
            return Err(Error::Internal("doubling polynomials share a root".into()));
        }
        // f phi + g psi = Z^7 and = X^7 with cubic forms f, g
        let mut mat = vec![vec![Rational::zero(); 8]; 8];
        for m in 0..8 {
            for i in 0..4 {
                let j = m as isize - i as isize;
                if (0..5).contains(&j) {
                    mat[m][i] = Rational::from_int(phi[j as usize].clone());
                    mat[m][4 + i] = Rational::from_int(psi[j as usize].clone());
                }
            }
        }
        let mut worst: f64 = 0.0;
        for target in [7usize, 0] {
            let mut rhs = vec![Rational::zero(); 8];
            rhs[target] = Rational::one();
            let sol = solve(&mat, &rhs).ok_or_else(|| Error::Internal("doubling identity unsolvable".into()))?;
            worst = worst.max(l1(&sol));
        }
        let log_c_lo = -(worst * (1.0 + 1e-12)).ln();
        let l1_phi: f64 = phi.iter().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).sum();
        let l1_psi: f64 = psi.iter().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).sum();
        let log_c_hi = (l1_phi.max(l1_psi) * (1.0 + 1e-12)).ln();
        Ok(DoublingData { u2, phi, psi, res, log_c_lo, log_c_hi })
    }

    fn eval_phi_psi(&self, a: &BigComplex, b: &BigComplex, prec: usize) -> (BigComplex, BigComplex) {
        let horner = |c: &[BigInt; 5]| {
            let mut acc = BigComplex::zero(prec);
            let mut bpow = BigComplex::real(BigFloat::one(prec));
            let mut terms = Vec::with_capacity(5);
            for _ in 0..5 {
                terms.push(bpow.clone());
                bpow = bpow.mul(b);
            }
            // sum c_i a^(4-i) b^i
            let mut apow = BigComplex::real(BigFloat::one(prec));
            for i in (0..5).rev() {
                let coeff = BigFloat::from_int(&c[i], prec);
                acc = acc.add(&terms[i].mul(&apow).scale(&coeff));
                apow = apow.mul(a);
            }
            acc
        };
        (horner(&self.phi), horner(&self.psi))
    }

    /// C with every per-step term lying in [-C, C].
    fn step_bound(&self) -> f64 {
        let log_r = self.res.abs().to_f64().unwrap_or(f64::MAX).ln();
        (self.log_c_lo - log_r).abs().max(self.log_c_hi.abs()).max(1.0)
    }
}

/// x-coordinate data: primitive integer form (descending coefficients in
/// (s, t)) and the conjugates as complex numbers.
fn initial_form(x: &Scalar, prec: usize) -> Result<(Vec<BigInt>, Vec<BigComplex>)> {
    if let Some(r) = x.as_rational() {
        let form = vec![r.denom().clone(), -r.numer().clone()];
        return Ok((form, vec![BigComplex::real(BigFloat::from_rational(r, prec))]));
    }
    let Scalar::Quad(q) = x else { unreachable!() };
    let d = Rational::from_int(q.d.clone());
    let c1 = -(&q.u + &q.u);
    let c2 = &q.u * &q.u - &q.v * &q.v * &d;
    let l = q.u.denom().lcm(q.v.denom());
    let l = &l * &l;
    let lr = Rational::from_int(l.clone());
    let ints = [l.clone(), (&c1 * &lr).numer().clone(), (&c2 * &lr).numer().clone()];
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let form: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
    let u = BigFloat::from_rational(&q.u, prec);
    let v = BigFloat::from_rational(&q.v, prec);
    let sd = BigFloat::from_int(&q.d.abs(), prec).sqrt().mul(&v);
    let conj = if q.d.is_positive() {
        vec![BigComplex::real(u.add(&sd)), BigComplex::real(u.sub(&sd))]
    } else {
        vec![BigComplex::new(u.clone(), sd.clone()), BigComplex::new(u, sd.neg())]
    };
    Ok((form, conj))
}

fn vp(n: &BigInt, p: &BigInt, cap: u32) -> u32 {
    if n.is_zero() {
        return cap;
    }
    let mut k = 0;
    let mut m = n.clone();
    while k < cap && (&m % p).is_zero() {
        m /= p;
        k += 1;
    }
    k
}

/// sum_j 4^(-j-1) e_{j,p} over `steps` doubling steps.
fn padic_weight(dd: &DoublingData, g0: &[BigInt], p: &BigInt, steps: usize) -> Result<Rational> {
    let k = g0.len() - 1;
    let vr = vp(&dd.res, p, u32::MAX) as usize;
    let mut prec = (steps * k * vr + 20) as u32;
    let mut modulus = num_traits::pow(p.clone(), prec as usize);
    let mut g: Vec<BigInt> = g0.iter().map(|c| c.mod_floor(&modulus)).collect();
    let mut total = Rational::zero();
    let mut weight = Rational::new(1, 4)?;
    let four = Rational::from_int(4);
    let evals: Vec<(i64, i64)> = if k == 1 { vec![(1, 0), (0, 1)] } else { vec![(1, 0), (0, 1), (1, 1)] };
    for _ in 0..steps {
        let mut vals = Vec::with_capacity(evals.len());
        for &(xx, zz) in &evals {
            let h: Vec<BigInt> =
                (0..5).map(|i| (&dd.psi[i] * xx - &dd.phi[i] * zz).mod_floor(&modulus)).collect();
            vals.push(form_resultant(&g, &h).mod_floor(&modulus));
        }
        let next: Vec<BigInt> = if k == 1 {
            vec![vals[0].clone(), vals[1].clone()]
        } else {
            let c1 = (&vals[2] - &vals[0] - &vals[1]).mod_floor(&modulus);
            vec![vals[0].clone(), c1, vals[1].clone()]
        };
        let e = next.iter().map(|c| vp(c, p, prec)).min().unwrap();
        if e >= prec {
            return Err(Error::PrecisionExhausted(format!("{p}-adic precision exhausted in height computation")));
        }
        let pe = num_traits::pow(p.clone(), e as usize);
        prec -= e;
        modulus = num_traits::pow(p.clone(), prec as usize);
        g = next.iter().map(|c| (c / &pe).mod_floor(&modulus)).collect();
        total += &(Rational::from_int(e) * &weight);
        weight = &weight / &four;
    }
    Ok(total)
}

/// Canonical height of the point with x-coordinate `x` (absolute
/// normalisation, so the value does not depend on the field of definition).
pub fn height_of_x(e: &WeierstrassCurve, x: &Scalar, cfg: &HeightConfig) -> Result<Estimate> {
    let dd = DoublingData::new(e)?;
    let xs = x.mul(&Scalar::Rat(dd.u2.clone())).simplify();
    let c = dd.step_bound();
    // tail after N steps is at most C 4^-N / 3
    let mut steps = 1usize;
    while c * 4f64.powi(-(steps as i32)) / 3.0 > cfg.tolerance / 2.0 {
        steps += 1;
    }
    let lip = (8.0 * dd.log_c_hi.exp() / dd.log_c_lo.exp()).log2().ceil().max(1.0) as usize;
    let prec = cfg.precision + 32 + steps * (lip + 2);
    let (g0, conj) = initial_form(&xs, prec)?;
    let k = g0.len() - 1;

    let one = BigFloat::one(prec);
    let mut total = BigFloat::from_int(&g0[0].abs(), prec).ln();
    for z in &conj {
        let a = z.abs();
        if a.cmp_f64(1.0) == std::cmp::Ordering::Greater {
            total = total.add(&a.ln());
        }
    }
    let quarter = BigFloat::from_f64(0.25, prec);
    for z in &conj {
        // normalised pair (a, b) with max(|a|, |b|) = 1
        let (mut a, mut b) = if z.abs().cmp_f64(1.0) == std::cmp::Ordering::Greater {
            (BigComplex::real(one.clone()), BigComplex::real(one.clone()).div(z))
        } else {
            (z.clone(), BigComplex::real(one.clone()))
        };
        let mut w = quarter.clone();
        for _ in 0..steps {
            let (fa, fb) = dd.eval_phi_psi(&a, &b, prec);
            let m = BigFloat::max(&fa.abs(), &fb.abs());
            total = total.add(&m.ln().mul(&w));
            a = fa.scale(&one.div(&m));
            b = fb.scale(&one.div(&m));
            w = w.mul(&quarter);
        }
    }
    for (p, _) in factorize(dd.res.magnitude()) {
        let p = BigInt::from(p);
        let wgt = padic_weight(&dd, &g0, &p, steps)?;
        if !wgt.is_zero() {
            let lp = BigFloat::from_int(&p, prec).ln();
            total = total.sub(&lp.mul(&BigFloat::from_rational(&wgt, prec)));
        }
    }
    let value = total.div(&BigFloat::from_i64(k as i64, prec)).with_precision(cfg.precision);
    let error = c * 4f64.powi(-(steps as i32)) / 3.0 + 2f64.powi(-(cfg.precision.min(1000) as i32) + 8);
    Ok(Estimate { value, error })
}

pub fn canonical_height(e: &WeierstrassCurve, p: &CurvePoint, cfg: &HeightConfig) -> Result<Estimate> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve(p.to_string()));
    }
    match p {
        CurvePoint::Infinity => Ok(Estimate { value: BigFloat::zero(cfg.precision), error: 0.0 }),
        CurvePoint::Affine { x, .. } => height_of_x(e, x, cfg),
    }
}

/// x(P + Q), also when P and Q are defined over two different quadratic
/// fields (then both must have rational x); `None` means P + Q = O.
pub fn x_of_sum(e: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> Result<Option<Scalar>> {
    let all: Vec<&Scalar> = p.coords().into_iter().chain(q.coords()).collect();
    if Scalar::common_field(all).is_ok() {
        let s = e.add(p, q)?;
        return Ok(s.x().cloned());
    }
    let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) = (p, q) else {
        unreachable!("points at infinity are rational")
    };
    if !e.contains(p) || !e.contains(q) {
        return Err(Error::NotOnCurve(format!("{p} or {q}")));
    }
    let (Some(x1), Some(x2)) = (x1.as_rational(), x2.as_rational()) else {
        return Err(Error::InvalidInput("sum of points over two different quadratic fields needs rational x".into()));
    };
    let (Scalar::Quad(q1), Scalar::Quad(q2)) = (y1, y2) else { unreachable!() };
    let dx = x2 - x1;
    if dx.is_zero() {
        return Err(Error::Internal("equal x over different fields".into()));
    }
    // y1 y2 = v1 v2 sqrt(d1 d2) = v1 v2 m sqrt(D)
    let prod = &q1.d * &q2.d;
    let big_d = squarefree_kernel(&prod)?;
    let m = Rational::from_int(prod / &big_d).sqrt_exact().ok_or_else(|| Error::Internal("square cofactor".into()))?;
    let w1 = e.w_rat(x1);
    let w2 = e.w_rat(x2);
    let dx2 = &dx * &dx;
    let u = (w1 + w2) / &dx2 - x1 - x2;
    let v = Rational::from_int(-2) * &q1.v * &q2.v * &m / &dx2;
    Ok(Some(Scalar::Quad(QuadExt::new_unchecked(big_d, u, v))))
}

fn sum_height(e: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint, cfg: &HeightConfig) -> Result<Estimate> {
    match x_of_sum(e, p, q)? {
        None => Ok(Estimate { value: BigFloat::zero(cfg.precision), error: 0.0 }),
        Some(x) => height_of_x(e, &x, cfg),
    }
}

/// <P, Q> = (h^(P + Q) - h^(P) - h^(Q)) / 2.
pub fn height_pairing(e: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint, cfg: &HeightConfig) -> Result<Estimate> {
    let hp = canonical_height(e, p, cfg)?;
    let hq = canonical_height(e, q, cfg)?;
    pairing_from(e, p, q, &hp, &hq, cfg)
}

fn pairing_from(
    e: &WeierstrassCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    hp: &Estimate,
    hq: &Estimate,
    cfg: &HeightConfig,
) -> Result<Estimate> {
    let hs = sum_height(e, p, q, cfg)?;
    let two = BigFloat::from_i64(2, cfg.precision);
    Ok(Estimate {
        value: hs.value.sub(&hp.value).sub(&hq.value).div(&two),
        error: (hs.error + hp.error + hq.error) / 2.0,
    })
}

/// Gram matrix of the height pairing with its determinant.
#[derive(Clone, Debug)]
pub struct HeightPairingMatrix {
    pub entries: Vec<Vec<Estimate>>,
    pub determinant: Estimate,
}

impl HeightPairingMatrix {
    pub const DET_THRESHOLD: f64 = 1e-3;
    pub const HEIGHT_THRESHOLD: f64 = 1e-4;

    pub fn diagonal(&self) -> Vec<&Estimate> {
        (0..self.entries.len()).map(|i| &self.entries[i][i]).collect()
    }

    /// The determinant clears 1e-3 and every height clears 1e-4, both
    /// after subtracting the error bounds.
    pub fn independent(&self) -> bool {
        self.determinant.to_f64() - self.determinant.error > Self::DET_THRESHOLD
            && self.diagonal().iter().all(|h| h.to_f64() - h.error > Self::HEIGHT_THRESHOLD)
    }
}

pub fn regulator(e: &WeierstrassCurve, points: &[CurvePoint], cfg: &HeightConfig) -> Result<HeightPairingMatrix> {
    let n = points.len();
    let heights: Vec<Estimate> = points.iter().map(|p| canonical_height(e, p, cfg)).collect::<Result<_>>()?;
    let mut entries = vec![vec![heights[0].clone(); n]; n];
    for i in 0..n {
        entries[i][i] = heights[i].clone();
        for j in i + 1..n {
            let v = pairing_from(e, &points[i], &points[j], &heights[i], &heights[j], cfg)?;
            entries[i][j] = v.clone();
            entries[j][i] = v;
        }
    }
    let vals: Vec<Vec<BigFloat>> = entries.iter().map(|r| r.iter().map(|x| x.value.clone()).collect()).collect();
    let det = det_bigfloat(&vals, cfg.precision);
    // Hadamard: |det(A+E) - det A| <= prod(|a_i| + |e_i|) - prod |a_i|
    let mut with_err = 1.0f64;
    let mut without = 1.0f64;
    for row in &entries {
        let a: f64 = row.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
        let er: f64 = row.iter().map(|x| x.error.powi(2)).sum::<f64>().sqrt();
        with_err *= a + er;
        without *= a;
    }
    let error = (with_err - without).abs() * (1.0 + 1e-9) + 2f64.powi(-(cfg.precision.min(1000) as i32) + 16);
    Ok(HeightPairingMatrix { entries, determinant: Estimate { value: det, error } })
}
