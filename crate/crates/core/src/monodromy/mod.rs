//! Monodromy of the cover of the lambda-line given by a function f on the
//! curve with poles only at O: the n = deg f points of each fibre are
//! followed round a loop about every critical value, and the resulting
//! permutations generate the monodromy group.

mod paths;
mod track;

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::bigfloat::BigComplex;
use crate::arith::roots::roots_of_squarefree;
use crate::arith::{Poly, QPoly, Rational, Scalar};
use crate::error::{Error, Result};
use crate::ff::{critical_fibres, FFElement};
use crate::perm::{PermGroup, Permutation};

use track::{match_fibres, min_separation, Cx, FibreSystem, Pt, Segment};

/// Precision retries after the double-precision pass.
const RETRIES: usize = 3;

/// Groups of degree at most this are enumerated to report their order.
const ENUMERATION_DEGREE: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct BranchPoint {
    pub value: Complex64,
    /// The disk of this radius about `value` contains the critical value
    /// and no other.
    pub radius: f64,
    pub exact: Option<Scalar>,
    /// Ramification indices of all n points of the fibre, decreasing; read
    /// as cycle lengths this is the expected local monodromy.
    pub multiplicities: Vec<usize>,
}

impl BranchPoint {
    pub fn degree(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Sum of (index - 1): the order of the discriminant at this value.
    pub fn contact(&self) -> usize {
        self.multiplicities.iter().map(|m| m - 1).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SheetPoint {
    pub x: Complex64,
    pub y: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyResult {
    pub base: Rational,
    /// The fibre over the base; generator images index this list.
    pub sheets: Vec<SheetPoint>,
    /// In loop order: by argument seen from the base, nearer first.
    pub branch_points: Vec<BranchPoint>,
    pub generators: Vec<Permutation>,
    /// Monodromy round infinity; the inverse of the product of the
    /// generators taken in order.
    pub infinity: Permutation,
    pub group: PermGroup,
    /// Decimal, when known: always for the full symmetric group, otherwise
    /// for small degree.
    pub group_order: Option<String>,
    pub transitive: bool,
    pub transposition: Option<Permutation>,
    /// Sum of n - #cycles over all generators and infinity; 2n for a
    /// connected cover by a genus one curve.
    pub hurwitz_sum: usize,
}

/// The critical values of f with the full ramification profile above each.
pub fn critical_values(f: &FFElement, precision: usize) -> Result<Vec<BranchPoint>> {
    let n = f
        .pole_order()
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::InvalidInput("a nonconstant function is required".into()))?;
    critical_fibres(f, precision)?
        .into_iter()
        .map(|fb| {
            let ramified: usize = fb.indices.iter().sum();
            if ramified > n {
                return Err(Error::Internal(format!("fibre over {} has more than {n} points", fb.center)));
            }
            let mut multiplicities = fb.indices;
            multiplicities.resize(multiplicities.len() + n - ramified, 1);
            let value = if fb.is_real { Complex64::new(fb.center.re, 0.0) } else { fb.center };
            Ok(BranchPoint { value, radius: fb.radius, exact: fb.exact, multiplicities })
        })
        .collect()
}

/// sigma^c for c the lcm of the odd cycle lengths, when the cycle type is
/// one 2-cycle and otherwise odd cycles; that power is the 2-cycle itself.
pub fn odd_lcm_power(sigma: &Permutation) -> Option<Permutation> {
    let t = sigma.cycle_type();
    if t.iter().filter(|&&k| k % 2 == 0).collect::<Vec<_>>() != [&2] {
        return None;
    }
    let c = t.iter().filter(|&&k| k % 2 == 1).fold(1u64, |acc, &k| num_integer::lcm(acc, k as u64));
    let tau = sigma.pow(c as i64);
    tau.is_transposition().then_some(tau)
}

/// The transposition hidden in the loop permutation of branch point k, or
/// None when its profile is not {2, odd, ..., odd}.
pub fn extract_transposition(result: &MonodromyResult, k: usize) -> Option<Permutation> {
    let bp = result.branch_points.get(k)?;
    let sigma = result.generators.get(k)?;
    if sigma.cycle_type() != bp.multiplicities {
        return None;
    }
    odd_lcm_power(sigma)
}

fn quantize(v: f64) -> f64 {
    (v * 1e9).round()
}

fn sheet_order(a: &Pt<Complex64>, b: &Pt<Complex64>) -> Ordering {
    let key = |p: &Pt<Complex64>| [p.0.re, p.0.im, p.1.re, p.1.im].map(quantize);
    let (ka, kb) = (key(a), key(b));
    ka.iter().zip(&kb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// The fibre over a rational base point in double precision, sorted; None
/// when the base is unsuitable.
fn base_fibre(f: &FFElement, base: &Rational, sys: &FibreSystem<Complex64>, precision: usize) -> Result<Option<Vec<Pt<Complex64>>>> {
    let n = f.pole_order().unwrap();
    let shifted = f.u.sub(&Poly::constant(base.clone()));
    let lambda = Complex64::new(base.to_f64(), 0.0);
    let elim: QPoly = if f.v.is_zero() { shifted.clone() } else { shifted.mul(&shifted).sub(&f.v.mul(&f.v).mul(&f.w())) };
    if elim.gcd(&elim.derivative()).degree() != Some(0) {
        return Ok(None);
    }
    let mut pts = Vec::with_capacity(n);
    for root in roots_of_squarefree(&elim, precision)? {
        let x = root.approx();
        if f.v.is_zero() {
            let y = sys.w_at(&x).sqrt();
            pts.push((x, y));
            pts.push((x, -y));
        } else {
            let v = sys.v_at(&x);
            if v.norm() < 1e-8 * (1.0 + x.norm()) {
                return Ok(None);
            }
            pts.push((x, (lambda - sys.u_at(&x)) / v));
        }
    }
    let mut polished = Vec::with_capacity(pts.len());
    for p in &pts {
        match sys.newton(p, &lambda) {
            Some(q) => polished.push(q),
            None => return Ok(None),
        }
    }
    if polished.len() != n || !(min_separation(&polished) > 1e-6) {
        return Ok(None);
    }
    polished.sort_by(sheet_order);
    Ok(Some(polished))
}

/// No two critical values other than real ones may be collinear with the
/// base, so that loop order by argument is unambiguous.
fn base_is_generic(base: f64, values: &[Complex64]) -> bool {
    let args: Vec<f64> = values.iter().map(|c| (c - base).arg()).collect();
    for i in 0..values.len() {
        for j in 0..i {
            let both_real = values[i].im == 0.0 && values[j].im == 0.0;
            if !both_real && (args[i] - args[j]).abs() < 1e-7 {
                return false;
            }
        }
    }
    true
}

fn loop_order(base: f64, values: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    let rel: Vec<Complex64> = values.iter().map(|c| c - base).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (rel[i], rel[j]);
        if a.im == 0.0 && b.im == 0.0 {
            a.re.total_cmp(&b.re)
        } else {
            a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm()))
        }
    });
    order
}

fn with_clearance(path: Vec<Segment>, values: &[Complex64]) -> Vec<(Segment, f64)> {
    path.into_iter()
        .map(|s| {
            let c = values.iter().map(|&z| s.clearance(z)).fold(f64::INFINITY, f64::min);
            (s, c)
        })
        .collect()
}

fn permutation_at<C: Cx>(sys: &FibreSystem<C>, start: &[Pt<C>], path: &[(Segment, f64)]) -> Result<Vec<usize>> {
    let end = sys.track(start, path)?;
    match_fibres(start, &end)
}

/// Tracks in double precision, then at increasing multiprecision.
fn track_loop(f: &FFElement, base: Complex64, start: &[Pt<Complex64>], path: &[(Segment, f64)], precision: usize) -> Result<Permutation> {
    let w = f.w();
    let fast: FibreSystem<Complex64> = FibreSystem::new(&f.u, &f.v, &w, 53);
    let mut last = match permutation_at(&fast, start, path) {
        Ok(images) => return Permutation::from_images(images),
        Err(e) => e,
    };
    let mut prec = precision.max(106);
    for _ in 0..RETRIES {
        let sys: FibreSystem<BigComplex> = FibreSystem::new(&f.u, &f.v, &w, prec);
        let lambda = BigComplex::lift(base, prec);
        let lifted: Option<Vec<Pt<BigComplex>>> = start
            .iter()
            .map(|(x, y)| sys.newton(&(BigComplex::lift(*x, prec), BigComplex::lift(*y, prec)), &lambda))
            .collect();
        let lifted = lifted.ok_or_else(|| Error::TrackingFailure(format!("base fibre does not refine at {prec} bits")))?;
        match permutation_at(&sys, &lifted, path) {
            Ok(images) => return Permutation::from_images(images),
            Err(e) => last = e,
        }
        prec *= 2;
    }
    Err(last)
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// Whether the conjugates of a transposition in the group connect all
/// points; if so the group contains every transposition and is S_n.
fn transpositions_connect(group: &PermGroup, tau: &Permutation) -> bool {
    let n = group.degree();
    let moved: Vec<usize> = (0..n).filter(|&i| tau.apply(i) != i).collect();
    let edge = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut seen = std::collections::HashSet::from([edge(moved[0], moved[1])]);
    let mut queue = vec![edge(moved[0], moved[1])];
    while let Some((a, b)) = queue.pop() {
        for g in group.generators() {
            let e = edge(g.apply(a), g.apply(b));
            if seen.insert(e) {
                queue.push(e);
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for (a, b) in seen {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

/// Numerical monodromy of f, with the local cycle types, the product
/// relation and the Riemann-Hurwitz count all checked.
pub fn monodromy_group(f: &FFElement, precision: usize) -> Result<MonodromyResult> {
    let mut branch_points = critical_values(f, precision)?;
    let n = f.pole_order().unwrap();
    let values: Vec<Complex64> = branch_points.iter().map(|b| b.value).collect();
    let min_re = values.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    let fast: FibreSystem<Complex64> = FibreSystem::new(&f.u, &f.v, &f.w(), 53);

    let mut chosen = None;
    for k in 0..32 {
        let b = min_re.floor() as i64 - 1 - k;
        let base = Rational::from_int(b);
        if !base_is_generic(b as f64, &values) {
            continue;
        }
        if let Some(fibre) = base_fibre(f, &base, &fast, precision)? {
            chosen = Some((base, fibre));
            break;
        }
    }
    let (base, start) = chosen.ok_or_else(|| Error::TrackingFailure("no usable base point found".into()))?;
    let b = Complex64::new(base.to_f64(), 0.0);

    let order = loop_order(b.re, &values);
    branch_points = order.iter().map(|&i| branch_points[i].clone()).collect();
    let values: Vec<Complex64> = branch_points.iter().map(|bp| bp.value).collect();
    let disks: Vec<(Complex64, f64)> = (0..values.len())
        .map(|i| {
            let nearest = (0..values.len())
                .filter(|&j| j != i)
                .map(|j| (values[i] - values[j]).norm())
                .fold((values[i] - b).norm(), f64::min);
            (values[i], 0.5 * nearest)
        })
        .collect();
    if let Some((bp, d)) = branch_points.iter().zip(&disks).find(|(bp, d)| d.1 < 4.0 * bp.radius) {
        return Err(Error::PrecisionExhausted(format!("critical value {} is not isolated well enough (radius {:e} vs {:e})", bp.value, bp.radius, d.1)));
    }

    let generators: Vec<Permutation> = (0..values.len())
        .into_par_iter()
        .map(|k| {
            let path = with_clearance(paths::loop_around(b, &disks, k), &values);
            track_loop(f, b, &start, &path, precision)
        })
        .collect::<Result<_>>()?;
    let reach = values.iter().map(|c| (c - b).norm()).fold(0.0, f64::max);
    let all = with_clearance(paths::loop_around_all(b, 1.5 * reach + 1.0), &values);
    let around_all = track_loop(f, b, &start, &all, precision)?;

    for (bp, g) in branch_points.iter().zip(&generators) {
        if g.cycle_type() != bp.multiplicities {
            return Err(Error::CycleTypeMismatch {
                value: bp.value.to_string(),
                expected: bp.multiplicities.clone(),
                found: g.cycle_type(),
            });
        }
    }
    // the circle about the base meets the small loops in order of argument
    let product = generators.iter().fold(Permutation::identity(n), |acc, g| g.compose(&acc));
    if product != around_all {
        return Err(Error::Internal(format!("product of loop generators {product} differs from the loop round all of them {around_all}")));
    }
    let infinity = around_all.inverse();
    if infinity.cycle_type() != [n] {
        return Err(Error::CycleTypeMismatch { value: "infinity".into(), expected: vec![n], found: infinity.cycle_type() });
    }
    let hurwitz_sum: usize = generators.iter().chain(std::iter::once(&infinity)).map(|g| n - g.num_cycles()).sum();
    if hurwitz_sum != 2 * n {
        return Err(Error::Internal(format!("Riemann-Hurwitz count {hurwitz_sum}, expected {}", 2 * n)));
    }

    let group = PermGroup::new(n, generators.clone())?;
    let transitive = group.is_transitive();
    let sheets = start.iter().map(|&(x, y)| SheetPoint { x, y }).collect();
    let mut result = MonodromyResult {
        base,
        sheets,
        branch_points,
        generators,
        infinity,
        group,
        group_order: None,
        transitive,
        transposition: None,
        hurwitz_sum,
    };
    result.transposition = (0..result.generators.len()).find_map(|k| extract_transposition(&result, k));
    result.group_order = match &result.transposition {
        Some(t) if transitive && transpositions_connect(&result.group, t) => Some(factorial(n).to_string()),
        _ if n <= ENUMERATION_DEGREE => Some(result.group.order()?.to_string()),
        _ => None,
    };
    Ok(result)
}
