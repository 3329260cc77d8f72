//! One function per command: compute, then package a JSON payload and a
//! short human summary.

use std::fmt::Write as _;

use ecrank_core::curve::{CurvePoint, HeightConfig};
use ecrank_core::ff::{fiber_roots, symmetrize, FFElement, Place, SymPoint};
use ecrank_core::monodromy::{extract_transposition, monodromy_group, MonodromyResult};
use ecrank_core::pencil::{build_pencil, isotropic_search, pencil_min_rank, verify_construction, ConstructionReport, SearchOutcome};
use ecrank_core::perm::blocks::{block_decomposition, BlockDecomposition};
use ecrank_core::perm::enumerate::transitive_with_transposition;
use ecrank_core::perm::lemmas::{all_odd_sign_homs, alternating_min_cycles, sign_hom_kernel_witness, ALTERNATING_BOUND};
use ecrank_core::perm::{PermGroup, Permutation};
use ecrank_core::rank::{
    candidate_scan_with, certify_independence, lift_point, CandidateRecord, CertifyConfig, IndependenceCertificate, ScanConfig,
};
use ecrank_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::{GroupConfig, MonodromyConfig, PencilConfig, PointsConfig, Resolved, SymmetrizeConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    NotFound,
}

pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub status: Status,
}

fn json(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

pub fn run(cfg: &Resolved) -> Result<Outcome> {
    match cfg {
        Resolved::Points(c) => points(c),
        Resolved::Group(c) => group(c),
        Resolved::Pencil(c) => pencil(c),
        Resolved::Monodromy(c) => monodromy(c),
        Resolved::Symmetrize(c) => symmetrize_cmd(c),
    }
}

#[derive(Serialize)]
struct PointsResult<'a> {
    records: &'a [CandidateRecord],
    certificate: &'a IndependenceCertificate,
}

pub fn certify_config(c: &PointsConfig) -> CertifyConfig {
    CertifyConfig {
        regulator_points: c.regulator_points,
        torsion_bound: c.torsion_bound,
        heights: HeightConfig { precision: c.precision, ..HeightConfig::default() },
    }
}

fn points(c: &PointsConfig) -> Result<Outcome> {
    let scan = ScanConfig { start: c.start.clone(), stride: c.stride.clone(), count: c.count, max_steps: 1_000_000 };
    let records = candidate_scan_with(&c.curve, &scan)?;
    let pts: Vec<CurvePoint> =
        records.iter().filter(|r| r.is_accepted()).map(|r| lift_point(&c.curve, r)).collect::<Result<_>>()?;
    let cert = certify_independence(&c.curve, &pts, &certify_config(c))?;
    let mut s = format!("{} independent points on {} ({} candidates scanned)\n", pts.len(), c.curve, records.len());
    for ((p, class), ev) in cert.points.iter().zip(&cert.classes).zip(&cert.torsion_screen) {
        let _ = writeln!(s, "  d = {class:<12} P = {p}  h = {}", ev.height);
    }
    if let Some(r) = &cert.regulator {
        let _ = writeln!(s, "  regulator of the first {}: {}", r.points, r.value);
    }
    Ok(Outcome { result: json(PointsResult { records: &records, certificate: &cert }), summary: s, status: Status::Success })
}

#[derive(Serialize)]
pub struct GroupEntry {
    pub group: PermGroup,
    pub decomposition: BlockDecomposition,
    pub passed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case", tag = "parity")]
pub enum AlternatingEvidence {
    /// Fewest cycles of an even permutation, found by exhaustion.
    Even { min_cycles: usize, witness: Permutation },
    /// An n-cycle is even, so one cycle suffices.
    Odd { witness: Permutation },
    Skipped,
}

#[derive(Serialize)]
pub struct SignHomSummary {
    pub r: usize,
    pub homomorphisms: usize,
    pub failures: usize,
}

#[derive(Serialize)]
pub struct GroupResult {
    pub n: usize,
    pub groups: Vec<GroupEntry>,
    pub alternating: AlternatingEvidence,
    pub sign_homomorphisms: Vec<SignHomSummary>,
    pub all_passed: bool,
}

pub fn group_result(n: usize, exhaustive: bool) -> Result<GroupResult> {
    let groups = if exhaustive { transitive_with_transposition(n)? } else { vec![PermGroup::symmetric(n)] };
    let groups: Vec<GroupEntry> = groups
        .into_iter()
        .map(|g| {
            let d = block_decomposition(&g)?;
            let passed = d.checks.all_passed();
            Ok(GroupEntry { group: g, passed, decomposition: d })
        })
        .collect::<Result<_>>()?;
    let alternating = match alternating_min_cycles(n, ALTERNATING_BOUND) {
        Ok((min_cycles, witness)) => AlternatingEvidence::Even { min_cycles, witness },
        Err(Error::OddDegree { .. }) => {
            AlternatingEvidence::Odd { witness: Permutation::from_images((1..n).chain([0]).collect())? }
        }
        Err(Error::DegreeTooLarge(..)) => AlternatingEvidence::Skipped,
        Err(e) => return Err(e),
    };
    let sign_homomorphisms: Vec<SignHomSummary> = (1..=n)
        .map(|r| {
            let homs: Vec<_> = all_odd_sign_homs(r).collect();
            let failures = homs.iter().filter(|h| sign_hom_kernel_witness(h).is_err()).count();
            SignHomSummary { r, homomorphisms: homs.len(), failures }
        })
        .collect();
    let all_passed = groups.iter().all(|g| g.passed)
        && sign_homomorphisms.iter().all(|s| s.failures == 0)
        && match &alternating {
            AlternatingEvidence::Even { min_cycles, .. } => *min_cycles == 2,
            _ => true,
        };
    Ok(GroupResult { n, groups, alternating, sign_homomorphisms, all_passed })
}

fn group(c: &GroupConfig) -> Result<Outcome> {
    let r = group_result(c.n, c.exhaustive)?;
    let mut s = format!("transitive groups of degree {} with a transposition\n", c.n);
    let _ = writeln!(s, "  {:>6} {:>3} {:>3} {:>7} {:>5} {:>5} {:>4}", "|H|", "m", "k", "|M|", "dimH", "dimE", "ok");
    for g in &r.groups {
        let d = &g.decomposition;
        let _ = writeln!(
            s,
            "  {:>6} {:>3} {:>3} {:>7} {:>5} {:>5} {:>4}",
            d.h_order,
            d.m,
            d.k,
            d.m_order,
            d.checks.fixed_dimension_h,
            d.checks.fixed_dimension_even_part,
            if g.passed { "yes" } else { "NO" }
        );
    }
    match &r.alternating {
        AlternatingEvidence::Even { min_cycles, witness } => {
            let _ = writeln!(s, "  fewest cycles in A_{}: {min_cycles}, e.g. {witness}", c.n);
        }
        AlternatingEvidence::Odd { witness } => {
            let _ = writeln!(s, "  odd degree: {witness} is even with one cycle");
        }
        AlternatingEvidence::Skipped => {}
    }
    let total: usize = r.sign_homomorphisms.iter().map(|h| h.homomorphisms).sum();
    let _ = writeln!(s, "  sign homomorphisms checked: {total}, all with a kernel witness: {}", r.sign_homomorphisms.iter().all(|h| h.failures == 0));
    let _ = writeln!(s, "all checks passed: {}", r.all_passed);
    if !r.all_passed {
        return Err(Error::Internal(format!("a group check failed\n{s}")));
    }
    Ok(Outcome { result: json(&r), summary: s, status: Status::Success })
}

#[derive(Serialize)]
pub struct PencilAttempt {
    pub n: usize,
    pub dimension: usize,
    pub min_rank: usize,
    pub forms: Value,
    pub excluded: Value,
    pub search: SearchOutcome,
}

#[derive(Serialize)]
struct PencilResult<'a> {
    attempts: &'a [PencilAttempt],
    construction: Option<&'a ConstructionReport>,
}

pub fn pencil_attempt(c: &PencilConfig, n: usize) -> Result<PencilAttempt> {
    let sys = build_pencil(&c.curve, &c.point, n)?;
    let excluded = sys.excluded_hyperplanes()?;
    let search = isotropic_search(&sys.forms[0], &sys.forms[1], c.height_bound, &excluded)?;
    Ok(PencilAttempt {
        n,
        dimension: sys.forms[0].dim(),
        min_rank: pencil_min_rank(&sys.forms[0], &sys.forms[1])?,
        forms: json(&sys.forms),
        excluded: json(&excluded),
        search,
    })
}

fn pencil(c: &PencilConfig) -> Result<Outcome> {
    let mut attempts = Vec::new();
    let mut construction = None;
    let mut s = String::new();
    for n in (c.n..=c.escalate_n).step_by(2) {
        let a = pencil_attempt(c, n)?;
        let _ = writeln!(s, "n = {n}: {} variables, pencil minimum rank {}", a.dimension, a.min_rank);
        if let Some(v) = a.search.vector() {
            let v: Vec<_> = v.iter().map(|&x| ecrank_core::arith::Rational::from_int(x)).collect();
            let report = verify_construction(&c.curve, &c.point, n, &v, c.precision)?;
            let _ = writeln!(
                s,
                "  isotropic vector {:?}; f(-2P) = {}, ramification over it {:?}, genus {}",
                a.search.vector().unwrap(),
                report.lambda_p,
                report.divisor_shape,
                report.genus
            );
            construction = Some(report);
            attempts.push(a);
            break;
        }
        let _ = writeln!(s, "  no isotropic vector up to height {}", c.height_bound);
        attempts.push(a);
    }
    let status = if construction.is_some() { Status::Success } else { Status::NotFound };
    Ok(Outcome { result: json(PencilResult { attempts: &attempts, construction: construction.as_ref() }), summary: s, status })
}

#[derive(Serialize)]
struct MonodromyReport<'a> {
    f: &'a FFElement,
    #[serde(flatten)]
    monodromy: &'a MonodromyResult,
    /// Per branch point, the odd-lcm power of its generator when that is a
    /// transposition.
    extracted: Vec<Option<Permutation>>,
}

fn monodromy(c: &MonodromyConfig) -> Result<Outcome> {
    let r = monodromy_group(&c.func, c.precision)?;
    let extracted: Vec<Option<Permutation>> = (0..r.branch_points.len()).map(|k| extract_transposition(&r, k)).collect();
    let mut s = format!("monodromy of f = {} on {}: degree {}\n", c.f, c.curve, r.sheets.len());
    for (bp, g) in r.branch_points.iter().zip(&r.generators) {
        let _ = writeln!(s, "  {:>24}  {:?}  {}", format!("{:.6}", bp.value), bp.multiplicities, g);
    }
    let _ = writeln!(
        s,
        "  group order {}, transitive {}, Hurwitz sum {}",
        r.group_order.as_deref().unwrap_or("unknown"),
        r.transitive,
        r.hurwitz_sum
    );
    Ok(Outcome {
        result: json(MonodromyReport { f: &c.func, monodromy: &r, extracted }),
        summary: s,
        status: Status::Success,
    })
}

#[derive(Serialize)]
pub struct FibreEntry {
    pub place: Place,
    pub multiplicity: usize,
}

#[derive(Serialize)]
struct SymmetrizeResult<'a> {
    coordinates: &'a SymPoint,
    function: &'a FFElement,
    fibre: Vec<FibreEntry>,
}

fn symmetrize_cmd(c: &SymmetrizeConfig) -> Result<Outcome> {
    let sym = symmetrize(&c.curve, &c.points)?;
    let f = sym.function(&c.curve);
    let fibre: Vec<FibreEntry> = fiber_roots(&f, &ecrank_core::arith::Rational::zero(), c.precision)?
        .into_iter()
        .map(|(place, multiplicity)| FibreEntry { place, multiplicity })
        .collect();
    let s = format!("{} points on {} map to {sym}\n  zeros of the function: {}\n", c.points.len(), c.curve, fibre.len());
    Ok(Outcome { result: json(SymmetrizeResult { coordinates: &sym, function: &f, fibre }), summary: s, status: Status::Success })
}
