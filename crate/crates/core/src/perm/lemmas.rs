//! Cycle counts in alternating groups and kernels of sign homomorphisms.

use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};

/// Default largest degree for the exhaustive alternating-group search.
pub const ALTERNATING_BOUND: usize = 10;

/// Minimum number of cycles (fixed points included) of an element of A_n,
/// by exhaustion, with the first element attaining it.
pub fn alternating_min_cycles(n: usize, bound: usize) -> Result<(usize, Permutation)> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if n % 2 == 1 {
        let witness = Permutation::from_images((1..n).chain(std::iter::once(0)).collect())?;
        return Err(Error::OddDegree { n, witness: witness.to_string() });
    }
    if n > bound {
        return Err(Error::DegreeTooLarge(n, bound));
    }
    // Heap's algorithm: consecutive permutations differ by one transposition
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut even = true;
    let mut best = (usize::MAX, Permutation::identity(n));
    let mut consider = |a: &[usize], even: bool| {
        if even {
            let p = Permutation::from_images(a.to_vec()).unwrap();
            let k = p.num_cycles();
            if k < best.0 {
                best = (k, p);
            }
        }
    };
    consider(&a, even);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            even = !even;
            consider(&a, even);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// h(v) = product of v_i over i in `subset`, for v in {1, -1}^r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignHom {
    pub r: usize,
    /// 1-based coordinates.
    pub subset: Vec<usize>,
}

impl SignHom {
    pub fn new(r: usize, subset: Vec<usize>) -> Result<Self> {
        if r == 0 || subset.iter().any(|&i| i == 0 || i > r) {
            return Err(Error::InvalidInput(format!("subset {subset:?} of 1..={r}")));
        }
        let mut s = subset;
        s.sort_unstable();
        s.dedup();
        Ok(SignHom { r, subset: s })
    }

    pub fn eval(&self, v: &[i8]) -> i8 {
        self.subset.iter().map(|&i| v[i - 1]).product()
    }

    /// v_j: all -1 except +1 in slot j (1-based).
    pub fn v(&self, j: usize) -> Vec<i8> {
        (1..=self.r).map(|i| if i == j { 1 } else { -1 }).collect()
    }
}

/// An index j with h(v_j) = 1, for h with h(1,...,1) = 1 and
/// h(-1,...,-1) = -1; found by evaluating every v_j.
pub fn sign_hom_kernel_witness(h: &SignHom) -> Result<usize> {
    if h.eval(&vec![1; h.r]) != 1 || h.eval(&vec![-1; h.r]) != -1 {
        return Err(Error::InvalidInput(format!("h does not send (-1, ..., -1) to -1 (|S| = {})", h.subset.len())));
    }
    (1..=h.r)
        .find(|&j| h.eval(&h.v(j)) == 1)
        .ok_or_else(|| Error::Internal("no kernel witness".into()))
}

/// Every homomorphism {1,-1}^r -> {1,-1} with h(-1,...,-1) = -1.
pub fn all_odd_sign_homs(r: usize) -> impl Iterator<Item = SignHom> {
    (0u32..1 << r).filter(|m| m.count_ones() % 2 == 1).map(move |m| SignHom {
        r,
        subset: (0..r).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect(),
    })
}
