//! Hand-built fixtures shared by unit tests.
//!
//! The two single-clause instances below are written out entry by entry,
//! independently of the construction code, so reduction tests can compare
//! against a table that was produced by hand.

use crate::facility::{DistMatrix, Kind, LocationInstance, PointLabel, Solution};
use crate::rational::{rat, rat_int};
use crate::satcore::Assignment;

pub(crate) fn asn(s: &str) -> Assignment {
    s.parse().unwrap()
}

pub(crate) fn sol(open: &[usize]) -> Solution {
    Solution::new(open.to_vec())
}

fn labels() -> Vec<PointLabel> {
    ["x1", "!x1", "x2", "!x2", "b1"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// Facility-location target of the single clause `(x1 v x2):1` with unit
/// weights (W = 1) and opening cost 2: points x1,!x1,x2,!x2,b1 under the
/// 0 / 1 / 4-3 / 5-3 / 2 distance pattern.
pub(crate) fn single_clause_mufl() -> LocationInstance {
    let dist = DistMatrix::from_fn(5, |i, j| match (i, j) {
        (0, 1) | (2, 3) => rat_int(1),
        (0, 4) | (2, 4) => rat(4, 3),
        (1, 4) | (3, 4) => rat(5, 3),
        _ => rat_int(2),
    });
    LocationInstance::new_mufl(
        vec![1; 5],
        dist,
        vec![0, 1, 2, 3],
        vec![rat_int(2); 4],
        Some(labels()),
    )
    .unwrap()
}

/// K-means target of the same clause with epsilon = 1/10 and c = 3/2:
/// distances 1, 11/10, 23/20 and 6/5, budget K = 2.
pub(crate) fn single_clause_dkm() -> LocationInstance {
    let dist = DistMatrix::from_fn(5, |i, j| match (i, j) {
        (0, 1) | (2, 3) => rat_int(1),
        (0, 4) | (2, 4) => rat(11, 10),
        (1, 4) | (3, 4) => rat(23, 20),
        _ => rat(6, 5),
    });
    LocationInstance::new_discrete(Kind::Dkm, vec![1; 5], dist, 2, Some(labels())).unwrap()
}
