//! Exhaustive subgroup search in small symmetric groups.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// Largest degree for which the full multiplication table is built.
pub const TABLE_MAX_DEGREE: usize = 6;

/// S_n with its elements indexed and a full multiplication table.
pub struct SymTable {
    n: usize,
    perms: Vec<Permutation>,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl SymTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > TABLE_MAX_DEGREE {
            return Err(Error::DegreeTooLarge(n, TABLE_MAX_DEGREE));
        }
        let mut perms = super::closure(n, PermGroup::symmetric(n).generators(), usize::MAX)?;
        perms.sort();
        let index: HashMap<&Permutation, u16> = perms.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let size = perms.len();
        let mut mul = vec![0u16; size * size];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                mul[i * size + j] = index[&p.compose(q)];
            }
        }
        let inv = perms.iter().map(|p| index[&p.inverse()]).collect();
        Ok(SymTable { n, perms, mul, inv })
    }

    pub fn size(&self) -> usize {
        self.perms.len()
    }

    pub fn perm(&self, i: usize) -> &Permutation {
        &self.perms[i]
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.perms.len() + j] as usize
    }

    /// Closure of a set of elements together with extra generators.
    fn close(&self, base: &FixedBitSet, base_gens: &[usize], extra: usize) -> (FixedBitSet, Vec<usize>) {
        let mut gens = base_gens.to_vec();
        gens.push(extra);
        let mut set = base.clone();
        let mut frontier: Vec<usize> = set.ones().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(g, x);
                if !set.contains(y) {
                    set.insert(y);
                    frontier.push(y);
                }
            }
        }
        (set, gens)
    }

    fn conjugate(&self, set: &FixedBitSet, c: usize) -> FixedBitSet {
        let ci = self.inv[c] as usize;
        let mut out = FixedBitSet::with_capacity(self.size());
        for x in set.ones() {
            out.insert(self.mul(self.mul(c, x), ci));
        }
        out
    }

    /// Least conjugate under the bit order, a canonical key for the class.
    fn canonical(&self, set: &FixedBitSet) -> Vec<usize> {
        (0..self.size())
            .map(|c| {
                let mut v: Vec<usize> = self.conjugate(set, c).ones().collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap()
    }

    fn to_group(&self, set: &FixedBitSet) -> Result<PermGroup> {
        PermGroup::from_elements(self.n, set.ones().map(|i| self.perms[i].clone()).collect())
    }

    fn is_transitive(&self, set: &FixedBitSet) -> bool {
        let mut reached = vec![false; self.n];
        for x in set.ones() {
            reached[self.perms[x].apply(0)] = true;
        }
        reached.iter().all(|&r| r)
    }

    /// Conjugacy-class representatives of the subgroups containing a
    /// transposition. Every such group is reached from a transposition by
    /// adjoining cyclic subgroups one at a time, and conjugating a chain
    /// gives a chain, so it suffices to extend one representative per class.
    fn subgroup_classes_with_transposition(&self) -> Vec<FixedBitSet> {
        let size = self.size();
        // least generator of each cyclic subgroup
        let cyclic_rep: Vec<usize> = (0..size)
            .map(|x| {
                let ord = self.perms[x].order() as usize;
                let mut best = x;
                let mut y = x;
                for k in 1..=ord {
                    if num_integer::gcd(k, ord) == 1 {
                        best = best.min(y);
                    }
                    y = self.mul(x, y);
                }
                best
            })
            .collect();
        let id = self.perms.iter().position(|p| p.is_identity()).unwrap();
        let mut trivial = FixedBitSet::with_capacity(size);
        trivial.insert(id);
        let t = (0..size).find(|&i| self.perms[i].is_transposition()).unwrap();
        let mut raw: HashSet<FixedBitSet> = HashSet::new();
        let mut classes: HashSet<Vec<usize>> = HashSet::new();
        let mut reps: Vec<FixedBitSet> = Vec::new();
        let mut queue: Vec<(FixedBitSet, Vec<usize>)> = vec![self.close(&trivial, &[], t)];
        raw.insert(queue[0].0.clone());
        classes.insert(self.canonical(&queue[0].0));
        reps.push(queue[0].0.clone());
        while let Some((s, gens)) = queue.pop() {
            for x in (0..size).filter(|&x| cyclic_rep[x] == x && !s.contains(x)) {
                let (s2, g2) = self.close(&s, &gens, x);
                if raw.insert(s2.clone()) && classes.insert(self.canonical(&s2)) {
                    reps.push(s2.clone());
                    queue.push((s2, g2));
                }
            }
        }
        reps.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
        reps
    }

    /// Class representatives of all subgroups containing a transposition.
    pub fn subgroups_with_transposition(&self) -> Result<Vec<PermGroup>> {
        self.subgroup_classes_with_transposition().iter().map(|s| self.to_group(s)).collect()
    }
}

/// Conjugacy-class representatives of the transitive subgroups of S_n that
/// contain a transposition, ordered by group order.
pub fn transitive_with_transposition(n: usize) -> Result<Vec<PermGroup>> {
    let table = SymTable::new(n)?;
    table
        .subgroup_classes_with_transposition()
        .iter()
        .filter(|s| table.is_transitive(s))
        .map(|s| table.to_group(s))
        .collect()
}
