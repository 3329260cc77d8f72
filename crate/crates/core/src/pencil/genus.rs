//! Genus of the double cover of the line spanned by f and 1 that is cut out
//! by the alternating quotient. It is branched over the values where the
//! fibre of f has odd total ramification.

use serde::Serialize;

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::ff::{critical_fibres, FFElement};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BranchValue {
    Exact { value: Scalar },
    Numeric { re: f64, im: f64 },
    Infinity,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchPoint {
    pub value: BranchValue,
    /// Ramification indices above 1 in the fibre, decreasing.
    pub profile: Vec<usize>,
    /// Sum of (index - 1) over the fibre.
    pub contact: usize,
    pub odd: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreimageGenus {
    pub genus: usize,
    pub odd_count: usize,
    pub branch_points: Vec<BranchPoint>,
}

/// Critical values of f with their local profiles, the pole included, and
/// the genus B/2 - 1 of the double cover branched at the B odd ones.
pub fn genus_of_preimage(f: &FFElement, precision: usize) -> Result<PreimageGenus> {
    if f.is_constant() {
        return Err(Error::InvalidInput("a constant function has no critical values".into()));
    }
    let n = f.pole_order().unwrap();
    let mut branch_points: Vec<BranchPoint> = critical_fibres(f, precision)?
        .into_iter()
        .map(|fb| {
            let value = match fb.exact {
                Some(value) => BranchValue::Exact { value },
                None => BranchValue::Numeric { re: fb.center.re, im: fb.center.im },
            };
            let contact = fb.indices.iter().map(|m| m - 1).sum::<usize>();
            BranchPoint { value, profile: fb.indices, contact, odd: contact % 2 == 1 }
        })
        .collect();
    branch_points.push(BranchPoint { value: BranchValue::Infinity, profile: vec![n], contact: n - 1, odd: n % 2 == 0 });
    let odd_count = branch_points.iter().filter(|b| b.odd).count();
    if odd_count % 2 == 1 {
        return Err(Error::Internal(format!("odd number {odd_count} of branch points")));
    }
    if odd_count == 0 {
        return Err(Error::InvalidInput("the double cover is unbranched and splits into two lines".into()));
    }
    Ok(PreimageGenus { genus: odd_count / 2 - 1, odd_count, branch_points })
}
