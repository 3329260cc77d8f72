//! Continuation of the fibre {u + v y = lambda} on y^2 = w(x) along a path
//! in the lambda-line. Points are tracked in C^2 so that functions with
//! v = 0 (whose fibres come in pairs (x, +-y)) need no special treatment;
//! the Jacobian of the system is -D(f), which vanishes only at critical
//! points.

use num_complex::Complex64;

use crate::arith::bigfloat::{BigComplex, BigFloat};
use crate::arith::{QPoly, Rational};
use crate::error::{Error, Result};

/// The complex arithmetic the tracker runs in.
pub(crate) trait Cx: Clone + Send + Sync {
    fn lift(z: Complex64, prec: usize) -> Self;
    fn from_q(r: &Rational, prec: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn norm(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Cx for Complex64 {
    fn lift(z: Complex64, _: usize) -> Self {
        z
    }
    fn from_q(r: &Rational, _: usize) -> Self {
        Complex64::new(r.to_f64(), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Cx for BigComplex {
    fn lift(z: Complex64, prec: usize) -> Self {
        BigComplex::from_c64(z, prec)
    }
    fn from_q(r: &Rational, prec: usize) -> Self {
        BigComplex::real(BigFloat::from_rational(r, prec))
    }
    fn add(&self, o: &Self) -> Self {
        BigComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigComplex::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        BigComplex::div(self, o)
    }
    fn to_c64(&self) -> Complex64 {
        BigComplex::to_c64(self)
    }
}

pub(crate) type Pt<C> = (C, C);

fn dist<C: Cx>(a: &Pt<C>, b: &Pt<C>) -> f64 {
    let (dx, dy) = (a.0.sub(&b.0).to_c64(), a.1.sub(&b.1).to_c64());
    (dx.norm_sqr() + dy.norm_sqr()).sqrt()
}

pub(crate) fn min_separation<C: Cx>(pts: &[Pt<C>]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in 0..i {
            m = m.min(dist(&pts[i], &pts[j]));
        }
    }
    m
}

/// A piece of path in the lambda-line, parametrized by [0, 1].
#[derive(Clone, Copy, Debug)]
pub(crate) enum Segment {
    Line { a: Complex64, b: Complex64 },
    Arc { center: Complex64, radius: f64, theta0: f64, sweep: f64 },
}

impl Segment {
    pub fn at(&self, t: f64) -> Complex64 {
        match *self {
            // the endpoints are reproduced exactly
            Segment::Line { b, .. } if t == 1.0 => b,
            Segment::Line { a, b } => a + (b - a) * t,
            Segment::Arc { center, radius, theta0, sweep } => center + Complex64::from_polar(radius, theta0 + t * sweep),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { a, b } => (b - a).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { a, b } => Segment::Line { a: b, b: a },
            Segment::Arc { center, radius, theta0, sweep } => {
                Segment::Arc { center, radius, theta0: theta0 + sweep, sweep: -sweep }
            }
        }
    }

    /// A lower bound for the distance from the segment to z.
    pub fn clearance(&self, z: Complex64) -> f64 {
        match *self {
            Segment::Line { a, b } => {
                let d = b - a;
                let s = if d.norm_sqr() == 0.0 { 0.0 } else { ((z - a) * d.conj()).re / d.norm_sqr() };
                (a + d * s.clamp(0.0, 1.0) - z).norm()
            }
            Segment::Arc { center, radius, .. } => ((z - center).norm() - radius).abs(),
        }
    }
}

/// The fibre system y^2 - w(x) = 0, u(x) + v(x) y - lambda = 0 with
/// coefficients in the working arithmetic.
pub(crate) struct FibreSystem<C> {
    u: Vec<C>,
    v: Vec<C>,
    w: Vec<C>,
    du: Vec<C>,
    dv: Vec<C>,
    dw: Vec<C>,
    prec: usize,
    tol: f64,
}

fn horner<C: Cx>(c: &[C], x: &C, zero: &C) -> C {
    c.iter().rev().fold(zero.clone(), |acc, a| acc.mul(x).add(a))
}

impl<C: Cx> FibreSystem<C> {
    pub fn new(u: &QPoly, v: &QPoly, w: &QPoly, prec: usize) -> Self {
        let lift = |p: &QPoly| p.coeffs().iter().map(|c| C::from_q(c, prec)).collect::<Vec<C>>();
        FibreSystem {
            u: lift(u),
            v: lift(v),
            w: lift(w),
            du: lift(&u.derivative()),
            dv: lift(&v.derivative()),
            dw: lift(&w.derivative()),
            prec,
            tol: 2f64.powf(-(prec as f64) * 0.75).max(1e-60),
        }
    }

    fn zero(&self) -> C {
        C::lift(Complex64::new(0.0, 0.0), self.prec)
    }

    pub fn u_at(&self, x: &C) -> C {
        horner(&self.u, x, &self.zero())
    }

    pub fn v_at(&self, x: &C) -> C {
        horner(&self.v, x, &self.zero())
    }

    pub fn w_at(&self, x: &C) -> C {
        horner(&self.w, x, &self.zero())
    }

    /// Residuals and the Jacobian [[a, b], [c, d]] at p.
    fn jet(&self, p: &Pt<C>, lambda: &C) -> ([C; 2], [C; 4]) {
        let z = self.zero();
        let (x, y) = p;
        let r1 = y.mul(y).sub(&horner(&self.w, x, &z));
        let r2 = horner(&self.u, x, &z).add(&horner(&self.v, x, &z).mul(y)).sub(lambda);
        let a = z.sub(&horner(&self.dw, x, &z));
        let b = y.add(y);
        let c = horner(&self.du, x, &z).add(&horner(&self.dv, x, &z).mul(y));
        let d = horner(&self.v, x, &z);
        ([r1, r2], [a, b, c, d])
    }

    /// Newton iteration at fixed lambda; None if it does not settle.
    pub fn newton(&self, p: &Pt<C>, lambda: &C) -> Option<Pt<C>> {
        let mut p = p.clone();
        for _ in 0..12 {
            let ([r1, r2], [a, b, c, d]) = self.jet(&p, lambda);
            let det = a.mul(&d).sub(&b.mul(&c));
            if det.norm() == 0.0 {
                return None;
            }
            let dx = d.mul(&r1).sub(&b.mul(&r2)).div(&det);
            let dy = a.mul(&r2).sub(&c.mul(&r1)).div(&det);
            p = (p.0.sub(&dx), p.1.sub(&dy));
            let step = (dx.to_c64().norm_sqr() + dy.to_c64().norm_sqr()).sqrt();
            let scale = 1.0 + (p.0.to_c64().norm_sqr() + p.1.to_c64().norm_sqr()).sqrt();
            if !step.is_finite() {
                return None;
            }
            if step <= self.tol * scale {
                return Some(p);
            }
        }
        None
    }

    /// Euler predictor along the tangent from lambda0 to lambda1.
    fn predict(&self, p: &Pt<C>, lambda0: &C, lambda1: &C) -> Option<Pt<C>> {
        let (_, [a, b, c, d]) = self.jet(p, lambda0);
        let det = a.mul(&d).sub(&b.mul(&c));
        if det.norm() == 0.0 {
            return None;
        }
        let dl = lambda1.sub(lambda0);
        let z = self.zero();
        Some((p.0.add(&z.sub(&b.mul(&dl)).div(&det)), p.1.add(&a.mul(&dl).div(&det))))
    }

    fn step(&self, pts: &[Pt<C>], l0: Complex64, l1: Complex64) -> Option<Vec<Pt<C>>> {
        let (l0, l1) = (C::lift(l0, self.prec), C::lift(l1, self.prec));
        let guard = min_separation(pts) / 3.0;
        let mut out = Vec::with_capacity(pts.len());
        for p in pts {
            let q = self.newton(&self.predict(p, &l0, &l1)?, &l1)?;
            if !(dist(p, &q) < guard) {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    /// Carries every point along the path. `clearance` is a lower bound for
    /// the distance from each segment to the critical values.
    pub fn track(&self, start: &[Pt<C>], path: &[(Segment, f64)]) -> Result<Vec<Pt<C>>> {
        let mut pts = start.to_vec();
        for (seg, clearance) in path {
            let len = seg.length();
            if len == 0.0 {
                continue;
            }
            // chords shorter than a quarter of the clearance stay homotopic
            // to the segment
            let h_max = (0.25 * clearance / len).min(1.0);
            let mut h = h_max;
            let mut t = 0.0;
            while t < 1.0 {
                let t1 = if t + h >= 1.0 { 1.0 } else { t + h };
                match self.step(&pts, seg.at(t), seg.at(t1)) {
                    Some(next) => {
                        pts = next;
                        t = t1;
                        h = (2.0 * h).min(h_max);
                    }
                    None => {
                        h /= 2.0;
                        if h < 1e-12 {
                            return Err(Error::TrackingFailure(format!(
                                "step underflow near lambda = {} at {} bits",
                                seg.at(t),
                                self.prec
                            )));
                        }
                    }
                }
            }
        }
        Ok(pts)
    }
}

/// The permutation carrying start point i to the start point nearest the
/// end of its track; fails if some end is not unambiguously close to a
/// start point.
pub(crate) fn match_fibres<C: Cx>(start: &[Pt<C>], end: &[Pt<C>]) -> Result<Vec<usize>> {
    let guard = min_separation(start) / 3.0;
    let mut images = Vec::with_capacity(end.len());
    for (i, q) in end.iter().enumerate() {
        let close: Vec<usize> = (0..start.len()).filter(|&j| dist(&start[j], q) < guard).collect();
        match close[..] {
            [j] => images.push(j),
            _ => {
                return Err(Error::TrackingFailure(format!(
                    "sheet {i} returns to {} candidate base points",
                    close.len()
                )))
            }
        }
    }
    let mut seen = vec![false; images.len()];
    for &j in &images {
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::TrackingFailure(format!("two sheets return to base point {j}")));
        }
    }
    Ok(images)
}
