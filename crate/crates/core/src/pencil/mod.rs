//! Pairs of quadratic forms: rank over the pencil, bounded search for common
//! isotropic vectors, and the construction of elliptic functions with
//! derivative l h^2.

pub mod genus;
pub mod search;
pub mod system;

use serde::{Deserialize, Serialize};

use crate::arith::linalg::{self, QMatrix};
use crate::arith::{Poly, QPoly, Rational};
use crate::error::{Error, Result};

pub use genus::{genus_of_preimage, BranchPoint, BranchValue, PreimageGenus};
pub use search::{isotropic_search, SearchOutcome};
pub use system::{
    build_pencil, exactness_functionals, verify_construction, Case, ConstructionReport, Functionals, HTemplate,
    PencilSystem,
};

/// A quadratic form v^T M v with M symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuadraticFormJson", into = "QuadraticFormJson")]
pub struct QuadraticForm {
    matrix: QMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticFormJson {
    dim: usize,
    matrix: QMatrix,
}

impl TryFrom<QuadraticFormJson> for QuadraticForm {
    type Error = Error;
    fn try_from(j: QuadraticFormJson) -> Result<Self> {
        if j.matrix.len() != j.dim {
            return Err(Error::InvalidInput(format!("matrix has {} rows, dim is {}", j.matrix.len(), j.dim)));
        }
        QuadraticForm::new(j.matrix)
    }
}

impl From<QuadraticForm> for QuadraticFormJson {
    fn from(q: QuadraticForm) -> Self {
        QuadraticFormJson { dim: q.dim(), matrix: q.matrix }
    }
}

impl QuadraticForm {
    pub fn new(matrix: QMatrix) -> Result<Self> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("quadratic form needs a nonempty square matrix".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInput(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let d = entries.len();
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { entries[i].clone() } else { Rational::zero() }).collect())
            .collect();
        QuadraticForm { matrix }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&c| Rational::from_int(c)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn eval(&self, v: &[Rational]) -> Rational {
        let mv = linalg::mat_vec(&self.matrix, v);
        mv.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }

    /// r A + s B.
    pub fn combine(&self, r: &Rational, other: &Self, s: &Rational) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput(format!("dimensions {} and {} differ", self.dim(), other.dim())));
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| r * a + s * b).collect())
            .collect();
        Ok(QuadraticForm { matrix })
    }
}

/// Minimum rank of r A + s B over all (r : s) in the projective line over
/// the algebraic closure.
///
/// For finite t = s/r the rank of A + t B is the number of invariant factors
/// of A + t B over Q[t] not vanishing at t; by the divisibility chain the
/// minimum over t is the number of constant ones. The point t = infinity is
/// B itself.
pub fn pencil_min_rank(a: &QuadraticForm, b: &QuadraticForm) -> Result<usize> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidInput(format!("dimensions {} and {} differ", a.dim(), b.dim())));
    }
    let m: Vec<Vec<QPoly>> = a
        .matrix
        .iter()
        .zip(&b.matrix)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| Poly::new(vec![x.clone(), y.clone()])).collect())
        .collect();
    let finite = smith_diagonal(m).iter().filter(|d| d.degree() == Some(0)).count();
    Ok(finite.min(b.rank()))
}

/// Diagonal of the Smith normal form over Q[t] (nonzero entries only).
pub fn smith_diagonal(mut a: Vec<Vec<QPoly>>) -> Vec<QPoly> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for p in 0..rows.min(cols) {
        loop {
            let pivot = (p..rows)
                .flat_map(|i| (p..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].degree());
            let Some((pi, pj)) = pivot else {
                return diag;
            };
            a.swap(p, pi);
            for row in a.iter_mut() {
                row.swap(p, pj);
            }
            let mut clean = true;
            for i in p + 1..rows {
                if a[i][p].is_zero() {
                    continue;
                }
                let (q, r) = a[i][p].divrem(&a[p][p]);
                for j in p..cols {
                    a[i][j] = a[i][j].sub(&q.mul(&a[p][j]));
                }
                clean &= r.is_zero();
            }
            for j in p + 1..cols {
                if a[p][j].is_zero() {
                    continue;
                }
                let (q, r) = a[p][j].divrem(&a[p][p]);
                for i in p..rows {
                    a[i][j] = a[i][j].sub(&q.mul(&a[i][p]));
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (p + 1..rows).find(|&i| (p + 1..cols).any(|j| !a[i][j].rem(&a[p][p]).is_zero()));
            match bad {
                Some(i) => {
                    for j in p..cols {
                        a[p][j] = a[p][j].add(&a[i][j]);
                    }
                }
                None => break,
            }
        }
        diag.push(a[p][p].monic());
    }
    diag
}
