use ecrank_core::arith::Rational;
use ecrank_core::curve::{CurvePoint, WeierstrassCurve};
use ecrank_core::pencil::{
    build_pencil, isotropic_search, pencil_min_rank, verify_construction, BranchValue, QuadraticForm, SearchOutcome,
};
use num_integer::Integer;

fn r(c: i64) -> Rational {
    Rational::from_int(c)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| r(c)).collect()
}

fn dot(l: &[Rational], v: &[Rational]) -> Rational {
    l.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// All primitive solutions in [-b, b]^3 of a pair of ternary forms with the
/// last coordinate s nonzero, found by solving the first form for s over
/// each (t0, t1).
fn ternary_oracle(f1: &QuadraticForm, f2: &QuadraticForm, b: i64, excl: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    let m = f1.matrix();
    let mut out = Vec::new();
    for t0 in -b..=b {
        for t1 in -b..=b {
            // f1(t0, t1, s) = A s^2 + B s + C
            let a = m[2][2].clone();
            let bb = r(2) * (&m[0][2] * r(t0) + &m[1][2] * r(t1));
            let c = f1.eval(&ints(&[t0, t1, 0]));
            let mut cands: Vec<Rational> = Vec::new();
            if a.is_zero() {
                if bb.is_zero() {
                    if c.is_zero() {
                        cands.extend((-b..=b).map(r));
                    }
                } else {
                    cands.push(-c / bb);
                }
            } else {
                let disc = &bb * &bb - r(4) * &a * &c;
                if let Some(sq) = disc.sqrt_exact() {
                    cands.push((-&bb + &sq) / (r(2) * &a));
                    cands.push((-&bb - &sq) / (r(2) * &a));
                }
            }
            for s in cands {
                if !s.is_integer() || s.is_zero() {
                    continue;
                }
                let Ok(s) = i64::try_from(s.numer()) else { continue };
                if s.abs() > b {
                    continue;
                }
                let v = [t0, t1, s];
                let first = *v.iter().find(|&&x| x != 0).unwrap();
                if first < 0 || v.iter().fold(0i64, |g, &x| g.gcd(&x)) != 1 {
                    continue;
                }
                let q = ints(&v);
                if f2.eval(&q).is_zero() && excl.iter().all(|l| !dot(l, &q).is_zero()) && !out.contains(&v.to_vec()) {
                    out.push(v.to_vec());
                }
            }
        }
    }
    out
}

#[test]
fn degree_eight_on_x3_plus_17_has_no_small_solution() {
    let e = WeierstrassCurve::from_ints(0, 17).unwrap();
    let sys = build_pencil(&e, &CurvePoint::from_ints(2, 5), 8).unwrap();
    let excl = sys.excluded_hyperplanes().unwrap();
    let got = isotropic_search(&sys.forms[0], &sys.forms[1], 50, &excl).unwrap();
    assert_eq!(got, SearchOutcome::NotFound { height_bound: 50 });
    assert!(ternary_oracle(&sys.forms[0], &sys.forms[1], 50, &excl).is_empty());
    assert_eq!(pencil_min_rank(&sys.forms[0], &sys.forms[1]).unwrap(), 2);
}

#[test]
fn ternary_oracle_agrees_on_a_solvable_pair() {
    let f1 = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap();
    let f2 = QuadraticForm::from_ints(&[&[4, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap();
    // 4x^2 + y^2 - z^2 = 0 and x^2 + y^2 = z^2 force x = 0
    let excl = vec![];
    let got = isotropic_search(&f1, &f2, 10, &excl).unwrap();
    let all = ternary_oracle(&f1, &f2, 10, &excl);
    assert_eq!(got.vector(), Some(&[0, 1, 1][..]));
    assert_eq!(all, vec![vec![0, 1, -1], vec![0, 1, 1]]);
}

#[test]
fn degree_twelve_construction() {
    let e = WeierstrassCurve::from_ints(-1, 1).unwrap();
    let p = CurvePoint::from_ints(1, 1);
    let sys = build_pencil(&e, &p, 12).unwrap();
    let excl = sys.excluded_hyperplanes().unwrap();
    let got = isotropic_search(&sys.forms[0], &sys.forms[1], 10, &excl).unwrap();
    assert_eq!(got, SearchOutcome::Found { vector: vec![10, -9, -1, -5, 9] });

    let v = ints(got.vector().unwrap());
    let report = verify_construction(&e, &p, 12, &v, 128).unwrap();
    // D(f) = l h^2, checked again outside the library's own verification
    assert_eq!(report.f.derivative(), sys.l.mul(&report.h).mul(&report.h));
    assert_eq!(report.f.pole_order(), Some(12));
    assert_eq!(report.lambda_p, Rational::new(-10489, 4860).unwrap());
    assert_eq!(report.divisor_shape, [vec![2], vec![1; 10]].concat());
    assert_eq!(report.genus, 0);
    // -2P is the only odd affine branch value, besides the pole
    let odd: Vec<&BranchValue> = report.branch_points.iter().filter(|b| b.odd).map(|b| &b.value).collect();
    assert_eq!(odd.len(), 2);
    assert!(odd.contains(&&BranchValue::Infinity));
}

#[test]
fn degree_fourteen_construction() {
    let e = WeierstrassCurve::from_ints(-1, 1).unwrap();
    let p = CurvePoint::from_ints(1, 1);
    let v = ints(&[3, 0, 5, -5, 3, 6]);
    let sys = build_pencil(&e, &p, 14).unwrap();
    assert!(sys.forms.iter().all(|f| f.eval(&v).is_zero()));
    let report = verify_construction(&e, &p, 14, &v, 128).unwrap();
    assert_eq!(report.genus, 0);
    assert_eq!(report.divisor_shape.iter().filter(|&&m| m == 2).count(), 1);
    assert_eq!(report.divisor_shape.iter().sum::<usize>(), 14);
}

#[test]
fn verification_rejects_bad_vectors() {
    let e = WeierstrassCurve::from_ints(-1, 1).unwrap();
    let p = CurvePoint::from_ints(1, 1);
    // not isotropic: l h^2 has no antiderivative
    assert!(verify_construction(&e, &p, 12, &ints(&[1, 0, 0, 0, 1]), 128).is_err());
    // on the hyperplane at infinity
    assert!(verify_construction(&e, &p, 12, &ints(&[10, -9, -1, -5, 0]), 128).is_err());
}

#[test]
fn report_json_has_the_branch_table() {
    let e = WeierstrassCurve::from_ints(-1, 1).unwrap();
    let report = verify_construction(&e, &CurvePoint::from_ints(1, 1), 12, &ints(&[10, -9, -1, -5, 9]), 128).unwrap();
    let j = serde_json::to_value(&report).unwrap();
    assert_eq!(j["genus"], 0);
    assert_eq!(j["lambda_p"], "-10489/4860");
    assert!(j["f"]["u"].is_array() && j["h"]["v"].is_array());
    assert_eq!(j["branch_points"].as_array().unwrap().last().unwrap()["value"]["kind"], "infinity");
}
