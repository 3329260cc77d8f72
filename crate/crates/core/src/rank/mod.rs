//! Independent points over quadratic fields: x-values with w(x) = x^3 + ax + b
//! positive and of new square class, lifted to (x, v sqrt d) with v^2 d = w.
//! Such a point is sent to its negative by the nontrivial automorphism of its
//! field, and points over F_2-independent fields are independent.

pub mod certificate;

pub use certificate::{certify_independence, verify_certificate, CertifyConfig, IndependenceCertificate};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::roots::roots_of_squarefree;
use crate::arith::{QuadExt, Rational, SquareClass, SquareClassBasis};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// Candidates classified per parallel batch.
const BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Nonpositive,
    Square,
    ClassDependent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum CandidateStatus {
    Accepted,
    Rejected(RejectReason),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub x: Rational,
    pub w: Rational,
    /// Square class of w; absent when w = 0.
    pub class: Option<SquareClass>,
    pub status: CandidateStatus,
}

impl CandidateRecord {
    pub fn is_accepted(&self) -> bool {
        self.status == CandidateStatus::Accepted
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub start: Rational,
    pub stride: Rational,
    pub count: usize,
    /// Give up after this many candidates.
    pub max_steps: u64,
}

impl ScanConfig {
    pub fn new(start: Rational, count: usize) -> Self {
        ScanConfig { start, stride: Rational::one(), count, max_steps: 1_000_000 }
    }
}

/// Largest real root of x^3 + a x + b, approximately.
pub fn largest_real_root(e: &WeierstrassCurve) -> Result<f64> {
    let roots = roots_of_squarefree(&e.w_poly(), 128)?;
    Ok(roots.iter().filter(|r| r.is_real).map(|r| r.approx().re).fold(f64::NEG_INFINITY, f64::max))
}

fn class_of(w: &Rational) -> Result<Option<SquareClass>> {
    if w.is_zero() {
        return Ok(None);
    }
    SquareClass::of_rational(w).map(Some)
}

fn decide(x: Rational, w: Rational, class: Option<SquareClass>, basis: &mut SquareClassBasis) -> CandidateRecord {
    let status = match &class {
        _ if !w.is_positive() => CandidateStatus::Rejected(RejectReason::Nonpositive),
        Some(c) if c.is_trivial() => CandidateStatus::Rejected(RejectReason::Square),
        Some(c) if basis.try_insert(c.clone()) => CandidateStatus::Accepted,
        _ => CandidateStatus::Rejected(RejectReason::ClassDependent),
    };
    CandidateRecord { x, w, class, status }
}

/// Classifies one x against the classes accepted so far, adding its class
/// to `basis` when accepted.
pub fn classify(e: &WeierstrassCurve, x: &Rational, basis: &mut SquareClassBasis) -> Result<CandidateRecord> {
    let w = e.w_rat(x);
    let class = class_of(&w)?;
    Ok(decide(x.clone(), w, class, basis))
}

/// Scans x = start, start + stride, ... until `count` candidates are
/// accepted, recording every rejection on the way.
pub fn candidate_scan_with(e: &WeierstrassCurve, cfg: &ScanConfig) -> Result<Vec<CandidateRecord>> {
    if !cfg.stride.is_positive() {
        return Err(Error::InvalidInput(format!("stride must be positive, got {}", cfg.stride)));
    }
    let w = e.w_poly();
    if w.count_real_roots_above(&cfg.start) > 0 || !w.eval(&cfg.start).is_positive() {
        return Err(Error::StartBelowRealRoot { start: cfg.start.to_string(), root_bound: largest_real_root(e)? });
    }
    let mut basis = SquareClassBasis::new();
    let mut out = Vec::new();
    let mut accepted = 0;
    let mut k: u64 = 0;
    while accepted < cfg.count {
        if k >= cfg.max_steps {
            return Err(Error::ScanExhausted(k));
        }
        let xs: Vec<Rational> =
            (k..k + BATCH as u64).map(|i| &cfg.start + &(&cfg.stride * &Rational::from_int(i))).collect();
        // factoring is the expensive part and is independent per candidate
        let classes: Vec<(Rational, Option<SquareClass>)> = xs
            .par_iter()
            .map(|x| {
                let w = e.w_rat(x);
                class_of(&w).map(|c| (w, c))
            })
            .collect::<Result<_>>()?;
        for (x, (w, class)) in xs.into_iter().zip(classes) {
            if accepted == cfg.count || k >= cfg.max_steps {
                break;
            }
            let rec = decide(x, w, class, &mut basis);
            accepted += rec.is_accepted() as usize;
            out.push(rec);
            k += 1;
        }
    }
    Ok(out)
}

/// Integer-stride scan from `start`.
pub fn candidate_scan(e: &WeierstrassCurve, start: &Rational, count: usize) -> Result<Vec<CandidateRecord>> {
    candidate_scan_with(e, &ScanConfig::new(start.clone(), count))
}

/// (x, v sqrt d) for an accepted record, with d the squarefree kernel of w.
pub fn lift_point(e: &WeierstrassCurve, record: &CandidateRecord) -> Result<CurvePoint> {
    let class = match (&record.status, &record.class) {
        (CandidateStatus::Accepted, Some(c)) => c,
        _ => return Err(Error::InvalidInput(format!("x = {} was not accepted", record.x))),
    };
    if e.w_rat(&record.x) != record.w {
        return Err(Error::InvalidInput(format!("record for x = {} carries the wrong w", record.x)));
    }
    let d = Rational::from_int(class.kernel().clone());
    let v = (&record.w / &d)
        .sqrt_exact()
        .ok_or_else(|| Error::Internal(format!("w = {} is not {} times a square", record.w, d)))?;
    let p = CurvePoint::affine(record.x.clone(), QuadExt::new(class.kernel().clone(), Rational::zero(), v)?);
    if !e.contains(&p) {
        return Err(Error::Internal(format!("lift {p} is not on the curve")));
    }
    Ok(p)
}

/// The Galois conjugate (x, u - v sqrt d) of a point with coordinates in
/// one quadratic field.
pub fn conjugate(p: &CurvePoint) -> CurvePoint {
    let conj = |s: &crate::arith::Scalar| match s {
        crate::arith::Scalar::Quad(q) => crate::arith::Scalar::Quad(q.conj()),
        other => other.clone(),
    };
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::Affine { x: conj(x), y: conj(y) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use num_bigint::BigInt;

    fn e2() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(0, 2).unwrap()
    }

    #[test]
    fn first_three_on_x3_plus_2() {
        let recs = candidate_scan(&e2(), &q(1, 1), 3).unwrap();
        let kernels: Vec<BigInt> = recs.iter().map(|r| r.class.as_ref().unwrap().kernel().clone()).collect();
        assert_eq!(kernels, [3, 10, 29].map(BigInt::from));
        assert!(recs.iter().all(|r| r.is_accepted()));
    }

    #[test]
    fn rejections() {
        let e = e2();
        let mut basis = SquareClassBasis::new();
        assert_eq!(classify(&e, &q(-1, 1), &mut basis).unwrap().status, CandidateStatus::Rejected(RejectReason::Square));
        assert_eq!(
            classify(&e, &q(-2, 1), &mut basis).unwrap().status,
            CandidateStatus::Rejected(RejectReason::Nonpositive)
        );
        assert!(classify(&e, &q(1, 1), &mut basis).unwrap().is_accepted());
        // the same class a second time
        assert_eq!(
            classify(&e, &q(1, 1), &mut basis).unwrap().status,
            CandidateStatus::Rejected(RejectReason::ClassDependent)
        );
    }

    #[test]
    fn start_inside_the_negative_region() {
        let err = candidate_scan(&e2(), &q(-2, 1), 1).unwrap_err();
        let Error::StartBelowRealRoot { root_bound, .. } = err else { panic!("{err:?}") };
        assert!((root_bound + 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(candidate_scan(&e2(), &q(-1, 1), 1).is_ok());
    }

    #[test]
    fn rational_stride_and_prefix_stability() {
        let e = e2();
        let mut cfg = ScanConfig::new(q(1, 1), 4);
        cfg.stride = q(1, 4);
        let four = candidate_scan_with(&e, &cfg).unwrap();
        cfg.count = 5;
        let five = candidate_scan_with(&e, &cfg).unwrap();
        assert_eq!(four[..], five[..four.len()]);
        assert!(five.iter().any(|r| r.is_accepted() && !r.x.is_integer()));
    }

    #[test]
    fn lifts() {
        let e = e2();
        let mut basis = SquareClassBasis::new();
        let r = classify(&e, &q(9, 4), &mut basis).unwrap();
        let p = lift_point(&e, &r).unwrap();
        let want = CurvePoint::affine(q(9, 4), QuadExt::new(BigInt::from(857), q(0, 1), q(1, 8)).unwrap());
        assert_eq!(p, want);
        assert_eq!(conjugate(&p), e.neg(&p));
        assert!(!p.is_rational());
        let r1 = classify(&e, &q(1, 1), &mut basis).unwrap();
        let p1 = lift_point(&e, &r1).unwrap();
        assert_eq!(p1, CurvePoint::affine(q(1, 1), QuadExt::new(BigInt::from(3), q(0, 1), q(1, 1)).unwrap()));
        let bad = classify(&e, &q(-1, 1), &mut basis).unwrap();
        assert!(lift_point(&e, &bad).is_err());
    }
}
