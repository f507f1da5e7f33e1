//! Seeded random instances for randomized audits and benchmarks.
//!
//! Everything here draws from a caller-supplied ChaCha generator, so a fixed
//! seed reproduces the exact same instances on every platform.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::facility::{DistMatrix, Kind, LocationInstance, Solution};
use crate::rational::{rat, rat_int, Rat};
use crate::satcore::{Assignment, Literal, Mode, SatInstance};

/// Random standard Max-2-SAT instance: clauses over two distinct variables
/// with random polarities, weights uniform in `1..=max_weight`.
pub fn random_std_instance(
    rng: &mut ChaCha8Rng,
    num_vars: usize,
    num_clauses: usize,
    max_weight: u64,
) -> SatInstance {
    assert!(num_vars >= 2, "clauses need two distinct variables");
    let mut clauses = Vec::with_capacity(num_clauses);
    let mut weights = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let a = rng.random_range(0..num_vars);
        let mut b = rng.random_range(0..num_vars - 1);
        if b >= a {
            b += 1;
        }
        let la = if rng.random_bool(0.5) {
            Literal::positive(a)
        } else {
            Literal::negative(a)
        };
        let lb = if rng.random_bool(0.5) {
            Literal::positive(b)
        } else {
            Literal::negative(b)
        };
        clauses.push([la, lb]);
        weights.push(rng.random_range(1..=max_weight));
    }
    SatInstance::new(num_vars, clauses, weights, Mode::Std).expect("generated instance is valid")
}

/// Random positive NAE-Max-2-SAT instance over distinct variable pairs.
pub fn random_nae_instance(
    rng: &mut ChaCha8Rng,
    num_vars: usize,
    num_clauses: usize,
    max_weight: u64,
) -> SatInstance {
    assert!(num_vars >= 2, "clauses need two distinct variables");
    let mut clauses = Vec::with_capacity(num_clauses);
    let mut weights = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let a = rng.random_range(0..num_vars);
        let mut b = rng.random_range(0..num_vars - 1);
        if b >= a {
            b += 1;
        }
        clauses.push([Literal::positive(a), Literal::positive(b)]);
        weights.push(rng.random_range(1..=max_weight));
    }
    SatInstance::new(num_vars, clauses, weights, Mode::Nae).expect("generated instance is valid")
}

/// Random metric MUFL instance: all interpoint distances uniform rationals
/// in [1, 2] (sixteenths), which satisfies every triangle inequality, with
/// opening costs in [1/4, 2] and weights in `1..=max_weight`. The first
/// `num_facilities` points are the facilities; every point is a client.
pub fn random_metric_mufl(
    rng: &mut ChaCha8Rng,
    num_facilities: usize,
    num_extra_clients: usize,
    max_weight: u64,
) -> LocationInstance {
    let n = num_facilities + num_extra_clients;
    let dist = DistMatrix::from_fn(n, |_, _| rat(rng.random_range(16..=32), 16));
    let weights = (0..n).map(|_| rng.random_range(1..=max_weight)).collect();
    let opening = (0..num_facilities)
        .map(|_| rat(rng.random_range(1..=8), 4))
        .collect();
    LocationInstance::new_mufl(weights, dist, (0..num_facilities).collect(), opening, None)
        .expect("generated instance is valid")
}

/// Random DKM instance from distinct integer grid points in 2D with exact
/// squared Euclidean distances.
pub fn random_dkm_points(
    rng: &mut ChaCha8Rng,
    num_points: usize,
    k: usize,
    max_weight: u64,
    grid: i64,
) -> LocationInstance {
    assert!(
        (num_points as i64) <= (grid + 1) * (grid + 1),
        "grid too small for distinct points"
    );
    let mut points: Vec<(i64, i64)> = Vec::with_capacity(num_points);
    while points.len() < num_points {
        let p = (rng.random_range(0..=grid), rng.random_range(0..=grid));
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let dist = DistMatrix::from_fn(num_points, |i, j| {
        let dx = points[i].0 - points[j].0;
        let dy = points[i].1 - points[j].1;
        rat_int(dx * dx + dy * dy)
    });
    let weights = (0..num_points)
        .map(|_| rng.random_range(1..=max_weight))
        .collect();
    LocationInstance::new_discrete(Kind::Dkm, weights, dist, k, None)
        .expect("generated instance is valid")
}

/// Uniform random assignment over `n` variables.
pub fn random_assignment(rng: &mut ChaCha8Rng, num_vars: usize) -> Assignment {
    Assignment::new((0..num_vars).map(|_| rng.random_bool(0.5)).collect())
}

/// Random feasible solution: a nonempty facility subset for MUFL, a
/// K-subset of the points otherwise.
pub fn random_solution(rng: &mut ChaCha8Rng, inst: &LocationInstance) -> Solution {
    match inst.kind() {
        Kind::Mufl => {
            let facilities = inst.facilities().unwrap();
            loop {
                let open: Vec<usize> = facilities
                    .iter()
                    .copied()
                    .filter(|_| rng.random_bool(0.5))
                    .collect();
                if !open.is_empty() {
                    return Solution::new(open);
                }
            }
        }
        Kind::Dkm | Kind::Dfkm => {
            let k = inst.k().unwrap();
            let mut pool: Vec<usize> = (0..inst.n_points()).collect();
            let mut open = Vec::with_capacity(k);
            for _ in 0..k {
                let idx = rng.random_range(0..pool.len());
                open.push(pool.swap_remove(idx));
            }
            Solution::new(open)
        }
    }
}

/// Uniform random rational in the open interval (lo, hi), in 2^20-ths.
pub fn random_rat_open(rng: &mut ChaCha8Rng, lo: &Rat, hi: &Rat) -> Rat {
    const STEPS: i64 = 1 << 20;
    let t = rat(rng.random_range(1..STEPS), STEPS);
    lo + (hi - lo) * t
}
