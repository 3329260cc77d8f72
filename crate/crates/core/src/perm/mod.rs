//! Permutations and finitely generated permutation groups, with the
//! block, fixed-space and cycle computations used for monodromy groups.

pub mod blocks;
pub mod enumerate;
pub mod lemmas;

pub use blocks::{block_decomposition, BlockChecks, BlockDecomposition};
pub use enumerate::{transitive_with_transposition, SymTable};
pub use lemmas::{alternating_min_cycles, all_odd_sign_homs, sign_hom_kernel_witness, SignHom};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::linalg::{nullspace, QMatrix};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Largest group the closure will build.
pub const CLOSURE_CAP: usize = 1_000_000;

/// A bijection of {0, ..., n-1}; serialized as the 1-based image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidInput("images are 1-based".into()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// From disjoint cycles written with 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                if p == 0 || p > n || seen[p - 1] {
                    return Err(Error::InvalidInput(format!("bad cycle {c:?} on {n} points")));
                }
                seen[p - 1] = true;
                images[p - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition of the 0-based points i and j.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// self after other: i -> self(other(i)).
    pub fn compose(&self, other: &Self) -> Self {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// Disjoint cycles including fixed points, each starting at its least
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut j = self.images[s];
            while j != s {
                seen[j] = true;
                c.push(j);
                j = self.images[j];
            }
            out.push(c);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_even(&self) -> bool {
        (self.degree() - self.num_cycles()) % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_transposition(&self) -> bool {
        self.images.iter().enumerate().filter(|(i, j)| i != *j).count() == 2
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// 0/1 indicator vector of each cycle; they span the fixed space.
    pub fn fixed_vectors(&self) -> Vec<Vec<u8>> {
        let n = self.degree();
        self.cycles()
            .into_iter()
            .map(|c| {
                let mut v = vec![0u8; n];
                for i in c {
                    v[i] = 1;
                }
                v
            })
            .collect()
    }
}

/// One indicator vector per cycle of sigma.
pub fn fixed_vectors_of(sigma: &Permutation) -> Vec<Vec<u8>> {
    sigma.fixed_vectors()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.images.iter().map(|i| i + 1).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// A subgroup of S_n given by generators; elements are computed on demand.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    #[serde(skip)]
    elements: std::sync::OnceLock<std::result::Result<Vec<Permutation>, Error>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    degree: usize,
    generators: Vec<Permutation>,
}

impl TryFrom<GroupJson> for PermGroup {
    type Error = Error;
    fn try_from(g: GroupJson) -> Result<Self> {
        PermGroup::new(g.degree, g.generators)
    }
}

impl From<PermGroup> for GroupJson {
    fn from(g: PermGroup) -> Self {
        GroupJson { degree: g.degree, generators: g.generators }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}> on {} points", self.generators, self.degree)
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidInput(format!("generator {g} does not act on {degree} points")));
        }
        Ok(PermGroup { degree, generators, elements: Default::default() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), elements: Default::default() }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::transposition(degree, 0, 1));
            gens.push(Permutation::from_images((1..degree).chain(std::iter::once(0)).collect()).unwrap());
        }
        PermGroup { degree, generators: gens, elements: Default::default() }
    }

    /// The subgroup with exactly these elements (assumed closed), with a
    /// generating set chosen greedily.
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        let mut sorted = elements.clone();
        sorted.sort();
        for e in &sorted {
            if !span.contains(e) {
                gens.push(e.clone());
                span = closure(degree, &gens, CLOSURE_CAP)?.into_iter().collect();
            }
        }
        if span.len() != elements.len() {
            return Err(Error::InvalidInput("element list is not a group".into()));
        }
        let g = PermGroup::new(degree, gens)?;
        let _ = g.elements.set(Ok(sorted));
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Result<&[Permutation]> {
        let r = self.elements.get_or_init(|| {
            let mut v = closure(self.degree, &self.generators, CLOSURE_CAP)?;
            v.sort();
            Ok(v)
        });
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    /// Orbits on the points, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let mut orbit = vec![s];
            label[s] = out.len();
            let mut k = 0;
            while k < orbit.len() {
                let i = orbit[k];
                for g in &self.generators {
                    let j = g.apply(i);
                    if label[j] == usize::MAX {
                        label[j] = out.len();
                        orbit.push(j);
                    }
                }
                k += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn transpositions(&self) -> Result<Vec<Permutation>> {
        Ok(self.elements()?.iter().filter(|p| p.is_transposition()).cloned().collect())
    }

    /// H intersected with A_n.
    pub fn even_part(&self) -> Result<PermGroup> {
        let ev: Vec<Permutation> = self.elements()?.iter().filter(|p| p.is_even()).cloned().collect();
        PermGroup::from_elements(self.degree, ev)
    }
}

/// Breadth-first closure under the generators.
pub fn closure(n: usize, gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(out)
}

/// Dimension of the subspace of Q^n fixed by every element of H, from the
/// orbit count and, independently, from the rank of the stacked
/// (g - I) matrices; the two must agree.
pub fn fixed_space_dimension(h: &PermGroup) -> Result<usize> {
    let n = h.degree();
    let by_orbits = h.orbits().len();
    let mut rows: QMatrix = Vec::new();
    for g in h.generators() {
        for i in 0..n {
            // (g v)_i - v_i with (g v)_{g(j)} = v_j
            let mut row = vec![Rational::zero(); n];
            let src = g.inverse().apply(i);
            row[src] = &row[src] + &Rational::one();
            row[i] = &row[i] - &Rational::one();
            rows.push(row);
        }
    }
    let by_rank = if rows.is_empty() { n } else { nullspace(&rows, n).len() };
    if by_rank != by_orbits {
        return Err(Error::Internal(format!("orbit count {by_orbits} but fixed space of dimension {by_rank}")));
    }
    Ok(by_orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cyc(n: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, c).unwrap()
    }

    #[test]
    fn basics() {
        let p = cyc(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(p.cycle_type(), vec![2, 2]);
        assert!(p.is_even());
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,1,4,3]");
        let q: Permutation = serde_json::from_str("[2,3,1]").unwrap();
        assert_eq!(q, cyc(3, &[&[1, 2, 3]]));
        assert_eq!(q.pow(3), Permutation::identity(3));
        assert_eq!(q.pow(-1), q.inverse());
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn fixed_vectors_examples() {
        assert_eq!(fixed_vectors_of(&cyc(4, &[&[1, 2], &[3, 4]])), vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert_eq!(fixed_vectors_of(&Permutation::identity(3)).len(), 3);
        assert_eq!(fixed_vectors_of(&cyc(5, &[&[1, 2, 3, 4, 5]])), vec![vec![1; 5]]);
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(fixed_space_dimension(&PermGroup::symmetric(5)).unwrap(), 1);
        assert_eq!(fixed_space_dimension(&PermGroup::new(4, vec![cyc(4, &[&[1, 2]])]).unwrap()).unwrap(), 3);
        assert_eq!(fixed_space_dimension(&PermGroup::trivial(6)).unwrap(), 6);
    }

    #[test]
    fn group_orders_and_json() {
        assert_eq!(PermGroup::symmetric(5).order().unwrap(), 120);
        let g = PermGroup::symmetric(4);
        assert_eq!(g.even_part().unwrap().order().unwrap(), 12);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"degree":4,"generators":[[2,1,3,4],[2,3,4,1]]}"#);
        let back: PermGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back.order().unwrap(), 24);
        assert!(matches!(closure(9, PermGroup::symmetric(9).generators(), 1000), Err(Error::GroupTooLarge(1000))));
    }

    #[test]
    fn conjugation_identity_exhaustive() {
        // (x z) = (x y)(y z)(x y) for distinct x, y, z
        for n in 3..=8 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if x == y || y == z || x == z {
                            continue;
                        }
                        let t = |a, b| Permutation::transposition(n, a, b);
                        assert_eq!(t(x, y).compose(&t(y, z)).compose(&t(x, y)), t(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_count_is_fixed_dimension_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12);
            let mut im: Vec<usize> = (0..n).collect();
            im.shuffle(&mut rng);
            let p = Permutation::from_images(im).unwrap();
            let g = PermGroup::new(n, vec![p.clone()]).unwrap();
            assert_eq!(fixed_space_dimension(&g).unwrap(), p.num_cycles());
        }
    }

    proptest! {
        #[test]
        fn compose_inverse(v in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = Permutation::from_images(v).unwrap();
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert_eq!(p.pow(p.order() as i64), Permutation::identity(7));
        }
    }
}
