//! Re-checks a report from its own contents. Each check belongs to a named
//! layer, and the first failing layer is reported.

use std::collections::BTreeSet;
use std::path::Path;

use ecrank_core::arith::{Rational, SquareClass, SquareClassBasis};
use ecrank_core::curve::{CurvePoint, HeightConfig};
use ecrank_core::ff::{symmetrize, FFElement, SymPoint};
use ecrank_core::monodromy::{critical_values, odd_lcm_power};
use ecrank_core::pencil::verify_construction;
use ecrank_core::perm::blocks::block_decomposition;
use ecrank_core::perm::{PermGroup, Permutation};
use ecrank_core::rank::{classify, lift_point, verify_certificate, IndependenceCertificate};
use ecrank_core::Error;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::config::{parse_function, Resolved};
use crate::report::{Report, SCHEMA};
use crate::run::{group_result, pencil_attempt};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("fail({layer}): {detail}")]
pub struct Failure {
    pub layer: String,
    pub detail: String,
}

type Result<T> = std::result::Result<T, Failure>;

fn fail(layer: &str, detail: impl Into<String>) -> Failure {
    Failure { layer: layer.into(), detail: detail.into() }
}

/// Library errors keep their own layer when they name one.
fn lift(layer: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::Certificate { layer, detail } => Failure { layer, detail },
        other => fail(layer, other.to_string()),
    }
}

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    let x = v.get(key).ok_or_else(|| fail("parse", format!("missing {key:?}")))?;
    serde_json::from_value(x.clone()).map_err(|e| fail("parse", format!("{key}: {e}")))
}

fn same(layer: &str, what: &str, listed: &Value, fresh: impl serde::Serialize) -> Result<()> {
    let fresh = serde_json::to_value(fresh).expect("serializes");
    if *listed != fresh {
        return Err(fail(layer, format!("{what} does not re-derive")));
    }
    Ok(())
}

pub fn verify_file(path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|e| fail("parse", format!("cannot read {}: {e}", path.display())))?;
    let report: Report = serde_json::from_str(&text).map_err(|e| fail("parse", e.to_string()))?;
    verify_report(&report)
}

pub fn verify_report(report: &Report) -> Result<()> {
    if report.schema != SCHEMA {
        return Err(fail("parse", format!("unknown schema {:?}", report.schema)));
    }
    if report.config.command != Some(report.command) {
        return Err(fail("parse", "command and config disagree"));
    }
    let cfg = report.config.resolve().map_err(|e| fail("parse", format!("config: {e}")))?;
    let r = &report.result;
    match &cfg {
        Resolved::Points(c) => {
            let cert: IndependenceCertificate = field(r, "certificate")?;
            if cert.curve != c.curve {
                return Err(fail("parse", "certificate is for another curve"));
            }
            let heights = HeightConfig { precision: c.precision, ..HeightConfig::default() };
            verify_certificate(&cert, &heights).map_err(lift("certificate"))?;
            verify_records(&cert, r)
        }
        Resolved::Group(c) => {
            let groups: Vec<Value> = field(r, "groups")?;
            for (i, g) in groups.iter().enumerate() {
                let group: PermGroup = field(g, "group")?;
                let d = block_decomposition(&group).map_err(lift("blocks"))?;
                same("blocks", &format!("block decomposition of group {i}"), &g["decomposition"], &d)?;
                if g["passed"] != Value::Bool(d.checks.all_passed()) {
                    return Err(fail("blocks", format!("group {i} is marked wrongly")));
                }
            }
            let fresh = group_result(c.n, c.exhaustive).map_err(lift("enumeration"))?;
            same("enumeration", "the group list", r, &fresh)
        }
        Resolved::Pencil(c) => {
            let attempts: Vec<Value> = field(r, "attempts")?;
            let ns: Vec<usize> = attempts.iter().map(|a| field(a, "n")).collect::<Result<_>>()?;
            if ns.is_empty() || ns.iter().zip((c.n..).step_by(2)).any(|(a, b)| *a != b) || *ns.last().unwrap() > c.escalate_n {
                return Err(fail("parse", format!("attempted degrees {ns:?} do not follow the config")));
            }
            for (a, &n) in attempts.iter().zip(&ns) {
                let fresh = pencil_attempt(c, n).map_err(lift("pencil"))?;
                same("pencil", &format!("the pencil for n = {n}"), a, &fresh)?;
            }
            match r.get("construction") {
                Some(Value::Null) | None => {
                    if attempts.iter().any(|a| a["search"]["status"] == "found") {
                        return Err(fail("construction", "a vector was found but no construction is listed"));
                    }
                    Ok(())
                }
                Some(con) => {
                    let vector: Vec<Rational> = field(con, "vector")?;
                    let n = *ns.last().unwrap();
                    let fresh = verify_construction(&c.curve, &c.point, n, &vector, c.precision).map_err(lift("construction"))?;
                    same("construction", "the construction", con, &fresh)
                }
            }
        }
        Resolved::Monodromy(c) => verify_monodromy(&c.func, c.precision, r, &c.f, &c.curve),
        Resolved::Symmetrize(c) => {
            let coords: SymPoint = field(r, "coordinates")?;
            let fresh = symmetrize(&c.curve, &c.points).map_err(lift("coordinates"))?;
            if coords != fresh {
                return Err(fail("coordinates", format!("listed {coords}, recomputed {fresh}")));
            }
            let f = coords.function(&c.curve);
            same("function", "the function", &r["function"], &f)?;
            for p in c.points.iter().filter(|p| !p.is_infinity()) {
                if !f.eval_point(p).is_some_and(|v| v.is_zero()) {
                    return Err(fail("zeros", format!("the function does not vanish at {p}")));
                }
            }
            Ok(())
        }
    }
}

#[derive(Deserialize)]
struct RecordJson {
    x: Rational,
}

/// Replays the scan decisions from the listed x-values alone.
fn verify_records(cert: &IndependenceCertificate, r: &Value) -> Result<()> {
    let records: Vec<Value> = field(r, "records")?;
    let e = &cert.curve;
    let mut basis = SquareClassBasis::new();
    let mut accepted: Vec<(SquareClass, CurvePoint)> = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let x = serde_json::from_value::<RecordJson>(rec.clone()).map_err(|e| fail("parse", format!("record {i}: {e}")))?.x;
        let fresh = classify(e, &x, &mut basis).map_err(lift("records"))?;
        same("records", &format!("record {i} (x = {x})"), rec, &fresh)?;
        if fresh.is_accepted() {
            let p = lift_point(e, &fresh).map_err(lift("records"))?;
            accepted.push((fresh.class.clone().expect("accepted records have a class"), p));
        }
    }
    if accepted.len() != cert.points.len() {
        return Err(fail("records", format!("{} accepted records but {} certified points", accepted.len(), cert.points.len())));
    }
    for (i, ((class, p), (listed_class, listed_p))) in accepted.iter().zip(cert.classes.iter().zip(&cert.points)).enumerate() {
        if class != listed_class {
            return Err(fail("class-dependence", format!("point {i}: record has class {class}, certificate lists {listed_class}")));
        }
        if p.x() != listed_p.x() {
            return Err(fail("records", format!("point {i} is not the lift of its record")));
        }
    }
    Ok(())
}

fn verify_monodromy(f: &FFElement, precision: usize, r: &Value, f_text: &str, curve: &ecrank_core::curve::WeierstrassCurve) -> Result<()> {
    let listed_f = parse_function(curve, f_text).map_err(|e| fail("parse", e.to_string()))?;
    same("parse", "the function", &r["f"], &listed_f)?;
    let generators: Vec<Permutation> = field(r, "generators")?;
    let infinity: Permutation = field(r, "infinity")?;
    let branch: Vec<Value> = field(r, "branch_points")?;
    let n = f.pole_order().unwrap_or(0);
    if generators.len() != branch.len() || generators.iter().chain([&infinity]).any(|g| g.degree() != n) {
        return Err(fail("parse", "generator list does not fit the branch table"));
    }
    // relations among the permutations
    let product = generators.iter().fold(Permutation::identity(n), |acc, g| g.compose(&acc));
    if !infinity.compose(&product).is_identity() {
        return Err(fail("relations", "infinity times the product of the generators is not the identity"));
    }
    if infinity.cycle_type() != [n] {
        return Err(fail("relations", format!("the loop round infinity has type {:?}", infinity.cycle_type())));
    }
    let mut mults = Vec::new();
    for (k, (g, b)) in generators.iter().zip(&branch).enumerate() {
        let m: Vec<usize> = field(b, "multiplicities")?;
        if g.cycle_type() != m {
            return Err(fail("relations", format!("generator {k} has type {:?}, branch point lists {m:?}", g.cycle_type())));
        }
        mults.push(m);
    }
    let hurwitz: usize = generators.iter().chain([&infinity]).map(|g| n - g.num_cycles()).sum();
    if field::<usize>(r, "hurwitz_sum")? != hurwitz || hurwitz != 2 * n {
        return Err(fail("relations", format!("Hurwitz sum {hurwitz}, expected {}", 2 * n)));
    }
    // group-level claims
    let group = PermGroup::new(n, generators.clone()).map_err(lift("group"))?;
    if field::<bool>(r, "transitive")? != group.is_transitive() {
        return Err(fail("group", "transitivity flag is wrong"));
    }
    let extracted: Vec<Option<Permutation>> = field(r, "extracted")?;
    if extracted != generators.iter().map(odd_lcm_power).collect::<Vec<_>>() {
        return Err(fail("group", "extracted transpositions do not re-derive"));
    }
    let tau: Option<Permutation> = field(r, "transposition")?;
    if let Some(t) = &tau {
        if !extracted.contains(&Some(t.clone())) {
            return Err(fail("group", "the transposition witness is not an odd-lcm power of a generator"));
        }
    }
    if let Some(order) = field::<Option<String>>(r, "group_order")? {
        let full: String = (1..=n as u64).fold(num_bigint::BigUint::from(1u32), |a, k| a * k).to_string();
        let derived = match &tau {
            Some(t) if order == full && conjugates_connect(&group, t, n) => true,
            _ if n <= 8 => group.order().map(|o| o.to_string() == order).unwrap_or(false),
            _ => false,
        };
        if !derived {
            return Err(fail("group", format!("group order {order} does not re-derive")));
        }
    }
    // the branch table against freshly computed critical values
    let fresh = critical_values(f, precision).map_err(lift("critical-values"))?;
    if fresh.len() != branch.len() {
        return Err(fail("critical-values", format!("{} listed, {} computed", branch.len(), fresh.len())));
    }
    for (k, b) in branch.iter().enumerate() {
        let v: [f64; 2] = field(b, "value")?;
        let radius: f64 = field(b, "radius")?;
        let z = num_complex::Complex64::new(v[0], v[1]);
        let hit = fresh.iter().find(|c| (c.value - z).norm() <= radius + c.radius && c.multiplicities == mults[k]);
        if hit.is_none() {
            return Err(fail("critical-values", format!("branch point {k} at {z} is not a critical value with that profile")));
        }
    }
    Ok(())
}

/// The transposition (i j) and its conjugates (g(i) g(j)) span a connected
/// graph on all points, so the group is the full symmetric group.
fn conjugates_connect(group: &PermGroup, t: &Permutation, n: usize) -> bool {
    let pair = t.cycles().into_iter().find(|c| c.len() == 2).expect("a transposition");
    let start = (pair[0].min(pair[1]), pair[0].max(pair[1]));
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((i, j)) = stack.pop() {
        for g in group.generators() {
            let (a, b) = (g.apply(i), g.apply(j));
            let e = (a.min(b), a.max(b));
            if seen.insert(e) {
                stack.push(e);
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(i, j) in &seen {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == root)
}
