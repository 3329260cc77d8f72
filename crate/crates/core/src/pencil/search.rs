//! Bounded search for a common isotropic vector of two quadratic forms.
//!
//! Primitive integer vectors are taken up to sign (first nonzero entry
//! positive) and visited in a fixed order: by max-norm, then by the tuple of
//! absolute values lexicographically, then by sign pattern with + before -.
//! The first hit in this order is returned, so the answer does not depend on
//! how the work is split across threads.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::QuadraticForm;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Refuse searches that would visit more vectors than this.
pub const MAX_SEARCH_VECTORS: f64 = 1e10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { vector: Vec<i64> },
    /// Nothing up to the bound; says nothing about larger vectors.
    NotFound { height_bound: u64 },
}

impl SearchOutcome {
    pub fn vector(&self) -> Option<&[i64]> {
        match self {
            SearchOutcome::Found { vector } => Some(vector),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()))
}

fn integral(xs: &[Rational], scale: &BigInt) -> Vec<BigInt> {
    xs.iter().map(|x| x.numer() * (scale / x.denom())).collect()
}

/// Coefficients cleared of denominators, in i128 when no overflow can occur.
enum IntCoeffs {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl IntCoeffs {
    fn new(c: Vec<BigInt>, terms: usize, bound: u64, degree: u32) -> Self {
        let max = c.iter().map(|x| x.magnitude().bits()).max().unwrap_or(0);
        let growth = (terms as f64).log2() + degree as f64 * (bound as f64).log2();
        if (max as f64) + growth < 120.0 {
            IntCoeffs::Small(c.iter().map(|x| x.to_i128().unwrap()).collect())
        } else {
            IntCoeffs::Big(c)
        }
    }
}

struct IntQuadratic {
    d: usize,
    m: IntCoeffs,
}

impl IntQuadratic {
    fn new(f: &QuadraticForm, bound: u64) -> Self {
        let d = f.dim();
        let flat: Vec<Rational> = f.matrix().iter().flatten().cloned().collect();
        let scale = lcm_of_denominators(&flat);
        IntQuadratic { d, m: IntCoeffs::new(integral(&flat, &scale), d * d, bound, 2) }
    }

    fn vanishes(&self, v: &[i64]) -> bool {
        let d = self.d;
        match &self.m {
            IntCoeffs::Small(m) => {
                let mut s: i128 = 0;
                for i in 0..d {
                    if v[i] == 0 {
                        continue;
                    }
                    let row: i128 = (0..d).map(|j| m[i * d + j] * v[j] as i128).sum();
                    s += row * v[i] as i128;
                }
                s == 0
            }
            IntCoeffs::Big(m) => {
                let mut s = BigInt::zero();
                for i in 0..d {
                    for j in 0..d {
                        s += &m[i * d + j] * v[i] * v[j];
                    }
                }
                s.is_zero()
            }
        }
    }
}

struct IntLinear(IntCoeffs);

impl IntLinear {
    fn new(l: &[Rational], bound: u64) -> Self {
        let scale = lcm_of_denominators(l);
        IntLinear(IntCoeffs::new(integral(l, &scale), l.len(), bound, 1))
    }

    fn vanishes(&self, v: &[i64]) -> bool {
        match &self.0 {
            IntCoeffs::Small(c) => c.iter().zip(v).map(|(a, &b)| a * b as i128).sum::<i128>() == 0,
            IntCoeffs::Big(c) => c.iter().zip(v).map(|(a, &b)| a * b).sum::<BigInt>().is_zero(),
        }
    }
}

struct Searcher {
    d: usize,
    forms: [IntQuadratic; 2],
    excluded: Vec<IntLinear>,
}

impl Searcher {
    fn accepts(&self, v: &[i64]) -> bool {
        self.forms.iter().all(|f| f.vanishes(v)) && self.excluded.iter().all(|l| !l.vanishes(v))
    }

    /// First hit with max-norm r whose leading absolute value is a0.
    fn scan(&self, a0: i64, r: i64) -> Option<Vec<i64>> {
        let d = self.d;
        let mut abs = vec![0i64; d];
        abs[0] = a0;
        if d == 1 {
            return (a0 == r && r == 1).then(|| vec![1]).filter(|v| self.accepts(v));
        }
        // odometer over abs[1..] in lexicographic order
        loop {
            if abs.iter().any(|&a| a == r) && abs.iter().fold(0i64, |g, &a| g.gcd(&a)) == 1 {
                if let Some(v) = self.signs(&abs) {
                    return Some(v);
                }
            }
            let mut k = d - 1;
            loop {
                if abs[k] < r {
                    abs[k] += 1;
                    break;
                }
                abs[k] = 0;
                if k == 1 {
                    return None;
                }
                k -= 1;
            }
        }
    }

    fn signs(&self, abs: &[i64]) -> Option<Vec<i64>> {
        let nz: Vec<usize> = (0..abs.len()).filter(|&i| abs[i] != 0).collect();
        let free = &nz[1..];
        let mut v = abs.to_vec();
        for mask in 0u64..(1u64 << free.len()) {
            for (k, &i) in free.iter().enumerate() {
                let negative = (mask >> (free.len() - 1 - k)) & 1 == 1;
                v[i] = if negative { -abs[i] } else { abs[i] };
            }
            if self.accepts(&v) {
                return Some(v);
            }
        }
        None
    }
}

/// Smallest primitive v (in the order above) with max-norm at most
/// `height_bound`, Phi_1(v) = Phi_2(v) = 0 and L(v) != 0 for every excluded
/// linear form L.
pub fn isotropic_search(
    f1: &QuadraticForm,
    f2: &QuadraticForm,
    height_bound: u64,
    excluded: &[Vec<Rational>],
) -> Result<SearchOutcome> {
    let d = f1.dim();
    if f2.dim() != d {
        return Err(Error::InvalidInput(format!("dimensions {} and {} differ", d, f2.dim())));
    }
    if height_bound == 0 {
        return Err(Error::InvalidInput("height bound must be at least 1".into()));
    }
    if let Some(l) = excluded.iter().find(|l| l.len() != d) {
        return Err(Error::InvalidInput(format!("excluded linear form has {} coefficients, expected {d}", l.len())));
    }
    if (2.0 * height_bound as f64 + 1.0).powi(d as i32) / 2.0 > MAX_SEARCH_VECTORS {
        return Err(Error::InvalidInput(format!("search of dimension {d} to bound {height_bound} is too large")));
    }
    let searcher = Searcher {
        d,
        forms: [IntQuadratic::new(f1, height_bound), IntQuadratic::new(f2, height_bound)],
        excluded: excluded.iter().map(|l| IntLinear::new(l, height_bound)).collect(),
    };
    let bound = height_bound as i64;
    for r in 1..=bound {
        let hit = (0..=r).into_par_iter().find_map_first(|a0| searcher.scan(a0, r));
        if let Some(v) = hit {
            let q: Vec<Rational> = v.iter().map(|&c| Rational::from_int(c)).collect();
            let ok = f1.eval(&q).is_zero()
                && f2.eval(&q).is_zero()
                && excluded.iter().all(|l| !l.iter().zip(&q).fold(Rational::zero(), |acc, (a, b)| acc + a * b).is_zero());
            if !ok {
                return Err(Error::Internal(format!("search hit {v:?} fails exact re-verification")));
            }
            return Ok(SearchOutcome::Found { vector: v });
        }
    }
    Ok(SearchOutcome::NotFound { height_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(v: &[i64]) -> QuadraticForm {
        QuadraticForm::diagonal(&v.iter().map(|&c| Rational::from_int(c)).collect::<Vec<_>>())
    }

    fn lin(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| Rational::from_int(c)).collect()
    }

    #[test]
    fn pythagorean() {
        let f = diag(&[1, 1, -1]);
        assert_eq!(isotropic_search(&f, &f, 5, &[]).unwrap(), SearchOutcome::Found { vector: vec![0, 1, 1] });
        let off_axes = [lin(&[1, 0, 0]), lin(&[0, 1, 0])];
        assert_eq!(isotropic_search(&f, &f, 5, &off_axes).unwrap(), SearchOutcome::Found { vector: vec![3, 4, 5] });
        assert_eq!(isotropic_search(&f, &f, 4, &off_axes).unwrap(), SearchOutcome::NotFound { height_bound: 4 });
    }

    #[test]
    fn definite_form() {
        let f = diag(&[1, 1, 1]);
        assert_eq!(isotropic_search(&f, &f, 30, &[]).unwrap(), SearchOutcome::NotFound { height_bound: 30 });
    }

    #[test]
    fn sign_order() {
        // x^2 - y^2 and 2 z (x - y): off x = 0 and z = 0 the common zeros are (1, 1, t)
        let f1 = diag(&[1, -1, 0]);
        let f2 = QuadraticForm::from_ints(&[&[0, 0, 1], &[0, 0, -1], &[1, -1, 0]]).unwrap();
        let z = [lin(&[0, 0, 1]), lin(&[1, 0, 0])];
        assert_eq!(isotropic_search(&f1, &f2, 3, &z).unwrap(), SearchOutcome::Found { vector: vec![1, 1, 1] });
        let f2 = QuadraticForm::from_ints(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]).unwrap();
        assert_eq!(isotropic_search(&f1, &f2, 3, &z).unwrap(), SearchOutcome::Found { vector: vec![1, -1, 1] });
    }

    #[test]
    fn big_coefficients_take_the_bigint_path() {
        let huge = Rational::from_int(BigInt::from(10).pow(40));
        let f = QuadraticForm::diagonal(&[huge.clone(), huge.clone(), -huge]);
        let off_axes = [lin(&[1, 0, 0]), lin(&[0, 1, 0])];
        assert_eq!(isotropic_search(&f, &f, 5, &off_axes).unwrap(), SearchOutcome::Found { vector: vec![3, 4, 5] });
    }

    /// Exhaustive list of all hits with max-norm at most b, first nonzero
    /// entry positive, sorted by the documented order.
    fn brute(f1: &QuadraticForm, f2: &QuadraticForm, b: i64, excl: &[Vec<Rational>]) -> Vec<Vec<i64>> {
        let d = f1.dim();
        let mut out = Vec::new();
        let total = (2 * b + 1).pow(d as u32);
        for mut k in 0..total {
            let v: Vec<i64> = (0..d)
                .map(|_| {
                    let c = k % (2 * b + 1) - b;
                    k /= 2 * b + 1;
                    c
                })
                .collect();
            let Some(&first) = v.iter().find(|&&c| c != 0) else { continue };
            if first < 0 || v.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1 {
                continue;
            }
            let q: Vec<Rational> = v.iter().map(|&c| Rational::from_int(c)).collect();
            if f1.eval(&q).is_zero()
                && f2.eval(&q).is_zero()
                && excl.iter().all(|l| !l.iter().zip(&q).fold(Rational::zero(), |a, (x, y)| a + x * y).is_zero())
            {
                out.push(v);
            }
        }
        out.sort_by_key(|v| {
            let abs: Vec<i64> = v.iter().map(|c| c.abs()).collect();
            let neg: Vec<bool> = v.iter().map(|&c| c < 0).collect();
            (*abs.iter().max().unwrap(), abs, neg)
        });
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_brute_force(
            e1 in proptest::collection::vec(-3i64..=3, 6),
            e2 in proptest::collection::vec(-3i64..=3, 6),
            l in proptest::collection::vec(-2i64..=2, 3),
        ) {
            let sym = |e: &[i64]| QuadraticForm::from_ints(&[&[e[0], e[1], e[2]], &[e[1], e[3], e[4]], &[e[2], e[4], e[5]]]).unwrap();
            let (f1, f2) = (sym(&e1), sym(&e2));
            let excl = if l.iter().all(|&c| c == 0) { vec![] } else { vec![lin(&l)] };
            let got = isotropic_search(&f1, &f2, 6, &excl).unwrap();
            let all = brute(&f1, &f2, 6, &excl);
            match got.vector() {
                Some(v) => {
                    let q: Vec<Rational> = v.iter().map(|&c| Rational::from_int(c)).collect();
                    prop_assert!(f1.eval(&q).is_zero() && f2.eval(&q).is_zero());
                    prop_assert_eq!(v, all[0].as_slice());
                }
                None => prop_assert!(all.is_empty()),
            }
        }
    }
}
