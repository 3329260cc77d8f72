//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always show. Exits nonzero unless every outcome
//! matches expectation: all pass except the known n = 2 case of criterion 2.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use ecrank_core::arith::square_class::classes_independent;
use ecrank_core::arith::{QPoly, Rational, SquareClass};
use ecrank_core::curve::{CurvePoint, HeightConfig, WeierstrassCurve};
use ecrank_core::ff::{critical_value_poly, fiber_roots, rr_basis, symmetrize, FFElement};
use ecrank_core::monodromy::{monodromy_group, odd_lcm_power};
use ecrank_core::pencil::{build_pencil, genus_of_preimage, pencil_min_rank, QuadraticForm};
use ecrank_core::perm::blocks::block_decomposition;
use ecrank_core::perm::enumerate::transitive_with_transposition;
use ecrank_core::perm::lemmas::{all_odd_sign_homs, alternating_min_cycles, sign_hom_kernel_witness, ALTERNATING_BOUND};
use ecrank_core::perm::{fixed_space_dimension, PermGroup, Permutation};
use ecrank_core::rank::{verify_certificate, IndependenceCertificate};
use ecrank_core::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const POINTS_TIME_LIMIT: Duration = Duration::from_secs(60);
const GROUP_TIME_LIMIT: Duration = Duration::from_secs(120);
const HEIGHT_FLOOR: f64 = 1e-4;
const REGULATOR_FLOOR: f64 = 1e-3;
const ROUNDTRIP_TOL: f64 = 1e-8;
const SEARCH_BOUND: &str = "50";

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ecrank(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ecrank")).args(args).output().expect("binary runs")
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn rank_builder() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("points.json");
    let t = Instant::now();
    let o = ecrank(&["points", "--curve", "a=0,b=2", "--count", "20", "--out", out.to_str().unwrap()]);
    let elapsed = t.elapsed();
    ensure(o.status.success(), || format!("points exited with {:?}", o.status.code()))?;
    ensure(elapsed < POINTS_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let cert: IndependenceCertificate = serde_json::from_value(report["result"]["certificate"].clone()).map_err(|e| e.to_string())?;
    ensure(cert.points.len() == 20, || format!("{} points", cert.points.len()))?;
    let classes: Vec<SquareClass> = cert.classes.clone();
    ensure(classes_independent(&classes), || "classes are dependent".into())?;
    for ev in &cert.torsion_screen {
        let h: f64 = ev.height.parse().unwrap();
        ensure(h - ev.height_error > HEIGHT_FLOOR, || format!("height {h}"))?;
    }
    let reg = cert.regulator.as_ref().ok_or("no regulator")?;
    let r: f64 = reg.value.parse().unwrap();
    ensure(reg.points == 5 && r - reg.error > REGULATOR_FLOOR, || format!("regulator {r} over {} points", reg.points))?;
    verify_certificate(&cert, &HeightConfig::default()).map_err(|e| e.to_string())?;
    let v = ecrank(&["verify", out.to_str().unwrap()]);
    ensure(v.status.success(), || String::from_utf8_lossy(&v.stdout).into_owned())?;
    let min_h = cert.torsion_screen.iter().map(|e| e.height.parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
    Ok(format!("20 points in {:.1}s, min height {min_h:.3}, regulator(5) {r:.4}, verify pass", elapsed.as_secs_f64()))
}

/// Prefix of the one failure this suite expects: for n = 2 the even part
/// of S_2 is trivial, so it is not transitive and fixes a plane.
const N2_COUNTEREXAMPLE: &str = "n=2 counterexample";

fn check_group(n: usize, h: &PermGroup) -> Result<(), String> {
    let d = block_decomposition(h).map_err(|e| e.to_string())?;
    let c = &d.checks;
    ensure(d.m * d.k == n && d.m_order == factorial(d.m).pow(d.k as u32), || format!("n={n}: |M| = {}", d.m_order))?;
    ensure(c.k_transitive, || format!("n={n}: K not transitive"))?;
    ensure(c.fixed_dimension_h == 1 && fixed_space_dimension(h).unwrap() == 1, || format!("n={n}: fixed dimension of H"))?;
    let even = h.even_part().unwrap();
    let dim_even = fixed_space_dimension(&even).unwrap();
    ensure(c.even_part_transitive && c.fixed_dimension_even_part == 1 && dim_even == 1, || {
        format!("n={n}: H meet A_n transitive {}, fixed dimension {dim_even}", even.is_transitive())
    })?;
    ensure(c.all_passed(), || format!("n={n}: {c:?}"))
}

fn block_lemmas() -> Outcome {
    let t = Instant::now();
    let mut total = 0;
    let mut n2 = Ok(());
    for n in 2..=6 {
        for h in transitive_with_transposition(n).map_err(|e| e.to_string())? {
            let r = check_group(n, &h);
            if n == 2 {
                n2 = r;
            } else {
                r?;
            }
            total += 1;
        }
    }
    let elapsed = t.elapsed();
    ensure(elapsed < GROUP_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    let rest = format!("n = 3..6: all checks hold on {} classes, {:.1}s", total - 1, elapsed.as_secs_f64());
    match n2 {
        Ok(()) => Ok(format!("{total} conjugacy classes for n = 2..6, all checks hold, {:.1}s", elapsed.as_secs_f64())),
        Err(e) if e == "n=2: H meet A_n transitive false, fixed dimension 2" => {
            Err(format!("{N2_COUNTEREXAMPLE}: H = S_2 has trivial even part (not transitive, fixed dimension 2); {rest}"))
        }
        Err(e) => Err(e),
    }
}

fn cycle_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(&mut rng);
        let sigma = Permutation::from_images(images).unwrap();
        let dim = fixed_space_dimension(&PermGroup::new(n, vec![sigma.clone()]).unwrap()).map_err(|e| e.to_string())?;
        ensure(dim == sigma.num_cycles(), || format!("{sigma}: {dim} vs {}", sigma.num_cycles()))?;
    }
    for n in (2..=10).step_by(2) {
        let (k, w) = alternating_min_cycles(n, ALTERNATING_BOUND).map_err(|e| e.to_string())?;
        ensure(k == 2 && w.is_even() && w.num_cycles() == 2, || format!("A_{n}: {k}"))?;
    }
    match alternating_min_cycles(3, ALTERNATING_BOUND) {
        Err(Error::OddDegree { witness, .. }) if witness == "(1 2 3)" => {}
        other => return Err(format!("n = 3 gave {other:?}")),
    }
    Ok("1000 random permutations, A_n minimum 2 for n = 2..10 even, (1 2 3) flagged".into())
}

/// n affine points built from multiples of (-2, 3), the last closing the sum.
fn tuple(rng: &mut ChaCha8Rng, e: &WeierstrassCurve, n: usize) -> Vec<CurvePoint> {
    let g = CurvePoint::from_ints(-2, 3);
    loop {
        let mut ks: Vec<i64> = (0..n - 1).map(|_| [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]).collect();
        let s: i64 = ks.iter().sum();
        if s != 0 && s.abs() <= 4 {
            ks.push(-s);
            return ks.iter().map(|&k| e.mul(&g, k)).collect();
        }
    }
}

fn symmetrize_roundtrip() -> Outcome {
    let e = WeierstrassCurve::from_ints(0, 17).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let pts = tuple(&mut rng, &e, n);
        let s = symmetrize(&e, &pts).map_err(|e| e.to_string())?;
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rng);
        ensure(symmetrize(&e, &shuffled).unwrap() == s, || "not invariant under permutation".into())?;
        let roots = fiber_roots(&s.function(&e), &Rational::zero(), 128).map_err(|e| e.to_string())?;
        let mut left = pts.clone();
        for (place, mult) in roots {
            for _ in 0..mult {
                let (i, d) = left
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, place.distance(p)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .ok_or("too many roots")?;
                ensure(d < ROUNDTRIP_TOL, || format!("root {place:?} is {d} from the input"))?;
                worst = worst.max(d);
                left.remove(i);
            }
        }
        ensure(left.is_empty(), || format!("{} input points not recovered", left.len()))?;
    }
    Ok(format!("100 tuples recovered, worst distance {worst:.1e}, S_n-invariant"))
}

fn genus_of_x() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 10 {
        let Ok(e) = WeierstrassCurve::from_ints(rng.gen_range(-30..30), rng.gen_range(-30..30)) else { continue };
        let g = genus_of_preimage(&FFElement::x(&e), 128).map_err(|e| e.to_string())?;
        ensure(g.genus == 1, || format!("{e}: genus {}", g.genus))?;
        let disc = critical_value_poly(&FFElement::x(&e)).map_err(|e| e.to_string())?;
        let contact: usize = g.branch_points.iter().filter(|b| !matches!(b.value, ecrank_core::pencil::BranchValue::Infinity)).map(|b| b.contact).sum();
        ensure(disc.degree() == Some(3) && contact == 3, || format!("{e}: degree {:?}, contact {contact}", disc.degree()))?;
        done += 1;
    }
    Ok("genus 1 on 10 curves, discriminant degree 3 = sum of (m - 1)".into())
}

fn monodromy_of_x() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    while done < 5 {
        let Ok(e) = WeierstrassCurve::from_ints(rng.gen_range(-30..30), rng.gen_range(-30..30)) else { continue };
        let r = monodromy_group(&FFElement::x(&e), 128).map_err(|e| e.to_string())?;
        ensure(r.group_order.as_deref() == Some("2") && r.transitive, || format!("{e}: order {:?}", r.group_order))?;
        for (g, b) in r.generators.iter().zip(&r.branch_points) {
            ensure(g.cycle_type() == b.multiplicities, || format!("{e}: {g} vs {:?}", b.multiplicities))?;
        }
        let product = r.generators.iter().fold(Permutation::identity(2), |acc, g| g.compose(&acc));
        ensure(r.infinity.compose(&product).is_identity(), || format!("{e}: product relation"))?;
        let hurwitz: usize = r.generators.iter().chain([&r.infinity]).map(|g| 2 - g.num_cycles()).sum();
        // 2 (n + g - 1) with n = 2, g = 1
        ensure(hurwitz == 4 && r.hurwitz_sum == 4, || format!("{e}: Hurwitz sum {hurwitz}"))?;
        done += 1;
    }
    Ok("f = x on 5 curves: S_2, cycle types, product = identity, Hurwitz sum 4".into())
}

fn transposition_extraction() -> Outcome {
    let p = |n: usize, c: &[&[usize]]| Permutation::from_cycles(n, c).unwrap();
    let a = odd_lcm_power(&p(8, &[&[1, 2], &[3, 4, 5], &[6, 7, 8]]));
    ensure(a == Some(p(8, &[&[1, 2]])), || format!("(2,3,3) gave {a:?}"))?;
    let b = odd_lcm_power(&p(4, &[&[2, 4]]));
    ensure(b == Some(p(4, &[&[2, 4]])), || format!("(2,1,1) gave {b:?}"))?;
    let c = odd_lcm_power(&p(6, &[&[1, 2], &[3, 4, 5, 6]]));
    ensure(c.is_none(), || format!("(2,4) gave {c:?}"))?;
    Ok("(2,3,3) -> (1 2), (2,1,1) -> itself, (2,4) not applicable".into())
}

fn pencil_pipeline() -> Outcome {
    let e = WeierstrassCurve::from_ints(0, 17).unwrap();
    let p = CurvePoint::from_ints(2, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    for (n, vars) in [(8usize, 3usize), (10, 4)] {
        let sys = build_pencil(&e, &p, n).map_err(|e| e.to_string())?;
        ensure(sys.forms[0].dim() == vars, || format!("n={n}: {} variables", sys.forms[0].dim()))?;
        let basis = rr_basis(&e, n).unwrap();
        for _ in 0..1000 {
            let g = basis.iter().fold(FFElement::zero(&e), |acc, b| {
                acc.add(&b.scale(&Rational::new(rng.gen_range(-50..50), rng.gen_range(1..20)).unwrap()))
            });
            ensure(sys.functionals.is_exact(&g.derivative()).unwrap(), || format!("n={n}: D(g) not annihilated"))?;
        }
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("pencil.json");
        let o = ecrank(&[
            "pencil",
            "--curve",
            "a=0,b=17",
            "--point",
            "2,5",
            "--n",
            &n.to_string(),
            "--height-bound",
            SEARCH_BOUND,
            "--out",
            out.to_str().unwrap(),
        ]);
        let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        match o.status.code() {
            Some(0) => {
                let c = &report["result"]["construction"];
                ensure(c["genus"] == 0, || format!("n={n}: genus {}", c["genus"]))?;
                let shape: Vec<usize> = serde_json::from_value(c["divisor_shape"].clone()).unwrap();
                ensure(shape[0] == 2 && shape[1..].iter().all(|m| m % 2 == 1), || format!("n={n}: shape {shape:?}"))?;
                notes.push(format!("n={n} found"));
            }
            Some(2) => {
                let s = &report["result"]["attempts"][0]["search"];
                ensure(s["status"] == "not_found" && s["height_bound"] == 50, || format!("n={n}: certificate {s}"))?;
                notes.push(format!("n={n} not found to {SEARCH_BOUND} (exit 2)"));
            }
            other => return Err(format!("n={n}: exit {other:?}")),
        }
        let v = ecrank(&["verify", out.to_str().unwrap()]);
        ensure(v.status.success(), || format!("n={n}: {}", String::from_utf8_lossy(&v.stdout)))?;
    }
    Ok(format!("3 and 4 variables, 2000 derivatives annihilated; {}", notes.join(", ")))
}

fn minor(a: &QuadraticForm, b: &QuadraticForm, rows: &[usize], cols: &[usize]) -> QPoly {
    let entry = |i: usize, j: usize| QPoly::new(vec![a.matrix()[rows[i]][cols[j]].clone(), b.matrix()[rows[i]][cols[j]].clone()]);
    let m = |i: usize, j: usize, k: usize, l: usize| entry(i, k).mul(&entry(j, l)).sub(&entry(i, l).mul(&entry(j, k)));
    entry(0, 0).mul(&m(1, 2, 1, 2)).sub(&entry(0, 1).mul(&m(1, 2, 0, 2))).add(&entry(0, 2).mul(&m(1, 2, 0, 1)))
}

fn triples(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// A member of rank at most 2 exists iff B has, or all 3x3 minors of
/// A + t B share a root (or all vanish).
fn has_small_member(a: &QuadraticForm, b: &QuadraticForm) -> bool {
    if b.rank() <= 2 {
        return true;
    }
    let ts = triples(a.dim());
    let mut g = QPoly::zero();
    for r in &ts {
        for c in &ts {
            g = g.gcd(&minor(a, b, r, c));
            if g.degree() == Some(0) {
                return false;
            }
        }
    }
    g.is_zero() || g.degree().unwrap_or(0) > 0
}

fn random_form(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> QuadraticForm {
    // sum of rank squares of random linear forms
    let mut m = vec![vec![Rational::zero(); d]; d];
    for _ in 0..rank {
        let l: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
        let c = rng.gen_range(-3..=3);
        for i in 0..d {
            for j in 0..d {
                m[i][j] = &m[i][j] + &Rational::from_int(c * l[i] * l[j]);
            }
        }
    }
    QuadraticForm::new(m).unwrap()
}

fn small_rank_detection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut flagged = 0;
    for k in 0..100 {
        let d = rng.gen_range(3..=8);
        let b = random_form(&mut rng, d, d);
        let a = if k % 2 == 0 {
            // A + t0 B has rank at most 2
            let t0 = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5)).unwrap();
            random_form(&mut rng, d, 2).combine(&Rational::one(), &b, &-t0).unwrap()
        } else {
            random_form(&mut rng, d, d)
        };
        let lib = pencil_min_rank(&a, &b).map_err(|e| e.to_string())? <= 2;
        let oracle = has_small_member(&a, &b);
        ensure(lib == oracle, || format!("pair {k} (d = {d}): library {lib}, oracle {oracle}"))?;
        if k % 2 == 0 {
            ensure(lib, || format!("engineered pair {k} not flagged"))?;
        }
        flagged += lib as usize;
    }
    Ok(format!("100 pairs, {flagged} flagged, all agree with the minor oracle"))
}

fn sign_homomorphisms() -> Outcome {
    let mut total = 0;
    let mut failures = 0;
    for r in 1..=10 {
        for h in all_odd_sign_homs(r) {
            total += 1;
            match sign_hom_kernel_witness(&h) {
                Ok(j) if h.eval(&h.v(j)) == 1 => {}
                _ => failures += 1,
            }
        }
    }
    ensure(total == (1..=10).map(|r| 1usize << (r - 1)).sum::<usize>(), || format!("{total} homomorphisms"))?;
    ensure(failures == 0, || format!("{failures} failures"))?;
    Ok(format!("{total} homomorphisms for r = 1..10, zero failures"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rank-builder end-to-end", rank_builder),
        ("block decomposition, exhaustive", block_lemmas),
        ("cycle counts and alternating groups", cycle_counts),
        ("symmetrize roundtrip", symmetrize_roundtrip),
        ("genus of f = x", genus_of_x),
        ("monodromy of f = x", monodromy_of_x),
        ("transposition extraction", transposition_extraction),
        ("pencil pipeline", pencil_pipeline),
        ("small-rank pencil members", small_rank_detection),
        ("sign homomorphism kernels", sign_homomorphisms),
    ];
    let mut failed = 0;
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let expected_failure = i + 1 == 2;
        match outcome {
            Ok(detail) => {
                println!("PASS {:>2} {name}: {detail}", i + 1);
                unexpected += expected_failure as usize;
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
                unexpected += !(expected_failure && why.starts_with(N2_COUNTEREXAMPLE)) as usize;
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if unexpected > 0 {
        println!("acceptance: {unexpected} outcome(s) differ from the recorded expectation");
        std::process::exit(1);
    }
    if failed > 0 {
        println!("acceptance: criterion 2 fails only on its recorded n = 2 counterexample");
    }
}
