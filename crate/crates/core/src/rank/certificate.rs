//! Independence certificates and their standalone verifier.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::square_class::classes_independent;
use crate::arith::{Scalar, SquareClass, SquareClassBasis};
use crate::curve::height::{canonical_height, regulator, HeightConfig, HeightPairingMatrix};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "ecrank/independence-certificate/1";

pub const LEMMA_BASIS: [&str; 3] = ["square-class independence", "non-torsion", "not in E(Q)"];

pub const CONCLUSION: &str = "linearly independent non-torsion points";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionEvidence {
    /// No multiple k P with k up to this bound is O.
    pub order_bound: u32,
    /// Canonical height, decimal.
    pub height: String,
    pub height_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegulatorEvidence {
    /// The regulator is of the first this many points.
    pub points: usize,
    pub value: String,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependenceCertificate {
    pub schema: String,
    pub curve: WeierstrassCurve,
    pub points: Vec<CurvePoint>,
    pub classes: Vec<SquareClass>,
    pub torsion_screen: Vec<TorsionEvidence>,
    pub regulator: Option<RegulatorEvidence>,
    pub lemma_basis: Vec<String>,
    pub conclusion: String,
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    /// Regulator of the first this many points; 0 skips it.
    pub regulator_points: usize,
    /// Overrides the order bound implied by the field of definition.
    pub torsion_bound: Option<u32>,
    pub heights: HeightConfig,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { regulator_points: 5, torsion_bound: None, heights: HeightConfig::default() }
    }
}

fn fail(layer: &str, detail: String) -> Error {
    Error::Certificate { layer: layer.into(), detail }
}

/// The class d of a point (x, v sqrt d) with x rational and v nonzero.
fn point_class(p: &CurvePoint) -> Option<SquareClass> {
    match p {
        CurvePoint::Affine { x, y: Scalar::Quad(q) } if x.as_rational().is_some() && q.u.is_zero() && !q.v.is_zero() => {
            SquareClass::from_kernel(&q.d).ok()
        }
        _ => None,
    }
}

fn check_points(e: &WeierstrassCurve, points: &[CurvePoint]) -> Result<Vec<SquareClass>> {
    let mut classes = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !e.contains(p) {
            return Err(fail("on-curve", format!("point {i} = {p} does not satisfy the curve equation")));
        }
        let c = point_class(p)
            .ok_or_else(|| fail("on-curve", format!("point {i} = {p} is not of the form (x, v sqrt d), x rational")))?;
        classes.push(c);
    }
    Ok(classes)
}

fn check_classes(classes: &[SquareClass]) -> Result<()> {
    let mut basis = SquareClassBasis::new();
    for (i, c) in classes.iter().enumerate() {
        if !basis.try_insert(c.clone()) {
            return Err(fail("class-dependence", format!("class {c} of point {i} lies in the span of the earlier ones")));
        }
    }
    Ok(())
}

fn order_bound(p: &CurvePoint, over: Option<u32>) -> u32 {
    over.unwrap_or_else(|| WeierstrassCurve::torsion_bound(p))
}

fn screen(e: &WeierstrassCurve, i: usize, p: &CurvePoint, bound: u32, heights: &HeightConfig) -> Result<TorsionEvidence> {
    if let Some(k) = e.torsion_order(p, bound)? {
        return Err(fail("torsion", format!("point {i} = {p} has order {k}")));
    }
    let h = canonical_height(e, p, heights)?;
    if h.certainly_above(HeightPairingMatrix::HEIGHT_THRESHOLD) != Some(true) {
        return Err(fail("torsion", format!("point {i}: height {} +- {:e} does not clear 1e-4", h.to_f64(), h.error)));
    }
    Ok(TorsionEvidence { order_bound: bound, height: format!("{:e}", h.to_f64()), height_error: h.error })
}

fn regulator_of(e: &WeierstrassCurve, points: &[CurvePoint], heights: &HeightConfig) -> Result<RegulatorEvidence> {
    let m = regulator(e, points, heights)?;
    if m.determinant.certainly_above(HeightPairingMatrix::DET_THRESHOLD) != Some(true) {
        return Err(fail(
            "regulator",
            format!("regulator {} +- {:e} of the first {} points does not clear 1e-3", m.determinant.to_f64(), m.determinant.error, points.len()),
        ));
    }
    Ok(RegulatorEvidence { points: points.len(), value: format!("{:e}", m.determinant.to_f64()), error: m.determinant.error })
}

/// Checks every evidence layer for the points and packages the result.
pub fn certify_independence(e: &WeierstrassCurve, points: &[CurvePoint], cfg: &CertifyConfig) -> Result<IndependenceCertificate> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points to certify".into()));
    }
    let classes = check_points(e, points)?;
    check_classes(&classes)?;
    let torsion_screen: Vec<TorsionEvidence> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| screen(e, i, p, order_bound(p, cfg.torsion_bound), &cfg.heights))
        .collect::<Result<_>>()?;
    let r = cfg.regulator_points.min(points.len());
    let regulator = if r > 0 { Some(regulator_of(e, &points[..r], &cfg.heights)?) } else { None };
    Ok(IndependenceCertificate {
        schema: SCHEMA.into(),
        curve: e.clone(),
        points: points.to_vec(),
        classes,
        torsion_screen,
        regulator,
        lemma_basis: LEMMA_BASIS.iter().map(|s| s.to_string()).collect(),
        conclusion: CONCLUSION.into(),
    })
}

fn parse_decimal(layer: &str, s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| fail(layer, format!("{s:?} is not a number")))
}

/// Re-derives every layer of a certificate from its own contents. Fails
/// with the first violated layer: parse, on-curve, class-dependence,
/// torsion, regulator.
pub fn verify_certificate(cert: &IndependenceCertificate, heights: &HeightConfig) -> Result<()> {
    if cert.schema != SCHEMA {
        return Err(fail("parse", format!("unknown schema {:?}", cert.schema)));
    }
    let n = cert.points.len();
    if n == 0 || cert.classes.len() != n || cert.torsion_screen.len() != n {
        return Err(fail(
            "parse",
            format!("{n} points, {} classes and {} torsion entries", cert.classes.len(), cert.torsion_screen.len()),
        ));
    }
    if cert.lemma_basis != LEMMA_BASIS || cert.conclusion != CONCLUSION {
        return Err(fail("parse", "lemma basis or conclusion differs from the certified statement".into()));
    }
    let e = &cert.curve;
    let derived = check_points(e, &cert.points)?;
    check_classes(&cert.classes)?;
    if let Some(i) = (0..n).find(|&i| derived[i] != cert.classes[i]) {
        return Err(fail("class-dependence", format!("point {i} is defined over Q(sqrt {}), listed as {}", derived[i], cert.classes[i])));
    }
    if !classes_independent(&derived) {
        return Err(fail("class-dependence", "the classes of the points are dependent".into()));
    }
    let screened: Vec<Result<()>> = cert
        .points
        .par_iter()
        .zip(&cert.torsion_screen)
        .enumerate()
        .map(|(i, (p, ev))| {
            if ev.order_bound < WeierstrassCurve::torsion_bound(p) {
                return Err(fail("torsion", format!("point {i}: order bound {} is below {}", ev.order_bound, WeierstrassCurve::torsion_bound(p))));
            }
            let fresh = screen(e, i, p, ev.order_bound, heights)?;
            let listed = parse_decimal("torsion", &ev.height)?;
            let fresh_h = parse_decimal("torsion", &fresh.height)?;
            if (listed - fresh_h).abs() > ev.height_error + fresh.height_error + 1e-9 * fresh_h.abs().max(1.0) {
                return Err(fail("torsion", format!("point {i}: listed height {listed} but recomputed {fresh_h}")));
            }
            Ok(())
        })
        .collect();
    screened.into_iter().collect::<Result<()>>()?;
    if let Some(reg) = &cert.regulator {
        if reg.points == 0 || reg.points > n {
            return Err(fail("regulator", format!("regulator over {} of {n} points", reg.points)));
        }
        let fresh = regulator_of(e, &cert.points[..reg.points], heights)?;
        let (listed, value) = (parse_decimal("regulator", &reg.value)?, parse_decimal("regulator", &fresh.value)?);
        if (listed - value).abs() > reg.error + fresh.error + 1e-9 * value.abs().max(1.0) {
            return Err(fail("regulator", format!("listed regulator {listed} but recomputed {value}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;
    use crate::rank::{candidate_scan, lift_point};

    fn e2() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(0, 2).unwrap()
    }

    fn scan_points(count: usize) -> Vec<CurvePoint> {
        let e = e2();
        candidate_scan(&e, &q(1, 1), count)
            .unwrap()
            .iter()
            .filter(|r| r.is_accepted())
            .map(|r| lift_point(&e, r).unwrap())
            .collect()
    }

    #[test]
    fn three_points_certified_and_verified() {
        let cert = certify_independence(&e2(), &scan_points(3), &CertifyConfig::default()).unwrap();
        assert_eq!(cert.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["3", "10", "29"]);
        assert_eq!(cert.regulator.as_ref().unwrap().points, 3);
        verify_certificate(&cert, &HeightConfig::default()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: IndependenceCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn torsion_point_aborts() {
        // (-1, 0) on y^2 = x^3 + 1 is rational 2-torsion; (2, 3) has order 6
        let e = WeierstrassCurve::from_ints(0, 1).unwrap();
        let err = certify_independence(&e, &[CurvePoint::from_ints(2, 3)], &CertifyConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Certificate { ref layer, .. } if layer == "on-curve"));
        // over Q(sqrt 3): x = 2/... use a genuine quadratic torsion point, the
        // 3-torsion of y^2 = x^3 + 16 at x = 0 twisted: y^2 = x^3 - 432 ... so
        // instead a point with y = sqrt(d): (0, sqrt 2) on y^2 = x^3 + 2 is
        // of order 3 (x = 0 is a flex)
        let e = e2();
        let p = CurvePoint::affine(q(0, 1), crate::arith::QuadExt::new(2.into(), q(0, 1), q(1, 1)).unwrap());
        let err = certify_independence(&e, &[p], &CertifyConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Certificate { ref layer, ref detail } if layer == "torsion" && detail.contains("order 3")), "{err:?}");
    }

    #[test]
    fn duplicate_class_aborts() {
        let e = e2();
        let mut pts = scan_points(2);
        pts.push(pts[0].clone());
        let err = certify_independence(&e, &pts, &CertifyConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Certificate { ref layer, .. } if layer == "class-dependence"));
    }

    #[test]
    fn tampering() {
        let cert = certify_independence(&e2(), &scan_points(3), &CertifyConfig::default()).unwrap();
        let hc = HeightConfig::default();
        // negating y keeps a valid point
        let mut t = cert.clone();
        t.points[1] = e2().neg(&t.points[1]);
        verify_certificate(&t, &hc).unwrap();
        let layer = |c: &IndependenceCertificate| match verify_certificate(c, &hc) {
            Err(Error::Certificate { layer, .. }) => layer,
            other => panic!("{other:?}"),
        };
        let mut t = cert.clone();
        t.classes[2] = t.classes[0].clone();
        assert_eq!(layer(&t), "class-dependence");
        let mut t = cert.clone();
        if let CurvePoint::Affine { x, .. } = &mut t.points[0] {
            *x = Scalar::Rat(q(5, 1));
        }
        assert_eq!(layer(&t), "on-curve");
        let mut t = cert.clone();
        t.torsion_screen[1].height = "5.0".into();
        assert_eq!(layer(&t), "torsion");
        let mut t = cert.clone();
        t.torsion_screen[1].order_bound = 3;
        assert_eq!(layer(&t), "torsion");
        let mut t = cert.clone();
        t.regulator.as_mut().unwrap().value = "1e6".into();
        assert_eq!(layer(&t), "regulator");
        let mut t = cert;
        t.schema = "other".into();
        assert_eq!(layer(&t), "parse");
    }
}
