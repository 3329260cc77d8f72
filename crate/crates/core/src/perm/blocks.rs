//! Block structure of a transitive group generated with a transposition:
//! x ~ y iff (x y) lies in H.

use serde::Serialize;

use super::{fixed_space_dimension, PermGroup, Permutation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BlockChecks {
    /// Every pair inside a class gives a transposition of H.
    pub classes_are_cliques: bool,
    /// The transpositions generate a group of order (m!)^k.
    pub m_order_is_factorial_power: bool,
    /// That group equals the kernel of the action on classes.
    pub m_is_class_kernel: bool,
    pub k_transitive: bool,
    pub even_part_transitive: bool,
    pub fixed_dimension_h: usize,
    pub fixed_dimension_even_part: usize,
    /// For prime n, H is all of S_n (vacuous otherwise).
    pub prime_degree_full: bool,
}

impl BlockChecks {
    pub fn all_passed(&self) -> bool {
        self.classes_are_cliques
            && self.m_order_is_factorial_power
            && self.m_is_class_kernel
            && self.k_transitive
            && self.even_part_transitive
            && self.fixed_dimension_h == 1
            && self.fixed_dimension_even_part == 1
            && self.prime_degree_full
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockDecomposition {
    /// Classes as 1-based points.
    pub classes: Vec<Vec<usize>>,
    pub m: usize,
    pub k: usize,
    pub m_generators: Vec<Permutation>,
    pub m_order: usize,
    pub h_order: usize,
    pub k_image: PermGroup,
    pub checks: BlockChecks,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn block_decomposition(h: &PermGroup) -> Result<BlockDecomposition> {
    let n = h.degree();
    let orbits = h.orbits();
    if orbits.len() != 1 {
        return Err(Error::NotTransitive(orbits[0].iter().map(|i| i + 1).collect()));
    }
    let trans = h.transpositions()?;
    if trans.is_empty() {
        return Err(Error::NoTransposition);
    }
    // classes from the transposition graph
    let mut class_of: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for t in &trans {
        let moved: Vec<usize> = (0..n).filter(|&i| t.apply(i) != i).collect();
        let (a, b) = (find(&mut class_of, moved[0]), find(&mut class_of, moved[1]));
        if a != b {
            class_of[a.max(b)] = a.min(b);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut class_of, i);
        match classes.iter().position(|c| c[0] == r) {
            Some(p) => {
                classes[p].push(i);
                index[i] = p;
            }
            None => {
                index[i] = classes.len();
                classes.push(vec![i]);
            }
        }
    }
    let k = classes.len();
    let m = n / k;
    if classes.iter().any(|c| c.len() != m) {
        return Err(Error::Internal("classes of unequal size".into()));
    }
    let classes_are_cliques = classes.iter().all(|c| {
        c.iter().all(|&x| c.iter().all(|&y| x == y || trans.contains(&Permutation::transposition(n, x, y))))
    });

    let m_group = PermGroup::new(n, trans.clone())?;
    let m_order = m_group.order()?;
    let m_order_is_factorial_power = m_order == factorial(m).pow(k as u32);
    let kernel: Vec<&Permutation> =
        h.elements()?.iter().filter(|g| (0..n).all(|i| index[g.apply(i)] == index[i])).collect();
    let m_is_class_kernel = kernel.len() == m_order && kernel.iter().all(|g| m_group.contains(g).unwrap_or(false));

    let k_gens: Vec<Permutation> = h
        .generators()
        .iter()
        .map(|g| Permutation::from_images((0..k).map(|c| index[g.apply(classes[c][0])]).collect()))
        .collect::<Result<_>>()?;
    let k_image = PermGroup::new(k, k_gens)?;
    let k_transitive = k_image.is_transitive();
    let even = h.even_part()?;
    let even_part_transitive = even.is_transitive();
    let h_order = h.order()?;
    let prime_degree_full = !is_prime(n) || h_order == factorial(n);

    Ok(BlockDecomposition {
        classes: classes.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
        m,
        k,
        m_generators: trans,
        m_order,
        h_order,
        k_image,
        checks: BlockChecks {
            classes_are_cliques,
            m_order_is_factorial_power,
            m_is_class_kernel,
            k_transitive,
            even_part_transitive,
            fixed_dimension_h: fixed_space_dimension(h)?,
            fixed_dimension_even_part: fixed_space_dimension(&even)?,
            prime_degree_full,
        },
    })
}
