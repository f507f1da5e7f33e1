//! Property tests for the structural invariants: membership optimality,
//! neighbourhood cardinalities, transition-graph acyclicity, embedding
//! round trips and format round trips.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swaplab_core::embed::{classical_mds, schoenberg_check, DistanceMatrix};
use swaplab_core::facility::Solution;
use swaplab_core::generate::{
    random_dkm_points, random_metric_mufl, random_nae_instance, random_solution,
    random_std_instance,
};
use swaplab_core::rational::{rat, rat_to_f64};
use swaplab_core::reduce::{reduce_pnaesat_to_dfkm, reduce_sat_to_dkm, ReductionArtifact};
use swaplab_core::satcore::SatInstance;
use swaplab_core::search::{
    build_transition_graph, local_search, FacilitySwap, Pivot, SatFlip, SearchProblem,
};

/// Fuzzy objective under an arbitrary membership matrix, in floats.
fn fuzzy_cost_with_memberships(
    inst: &swaplab_core::LocationInstance,
    sol: &Solution,
    rows: &[Vec<f64>],
) -> f64 {
    let mut total = 0.0;
    for (c, row) in rows.iter().enumerate() {
        for (j, &o) in sol.open().iter().enumerate() {
            let d = rat_to_f64(inst.dist().get(c, o));
            total += inst.weight(c) as f64 * row[j] * row[j] * d;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The closed-form memberships minimize the fuzzy objective: random
    /// row-stochastic perturbations never do better.
    #[test]
    fn optimal_memberships_minimize_fuzzy_cost(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nae = random_nae_instance(&mut rng, 2 + (seed % 2) as usize, 2, 3);
        let art = reduce_pnaesat_to_dfkm(&nae, &rat(3, 2)).unwrap();
        let inst = &art.target;
        let sol = random_solution(&mut rng, inst);
        let optimal = rat_to_f64(&inst.dfkm_cost(&sol).unwrap());
        let star = inst.optimal_memberships(&sol).unwrap();
        // substituted formula agrees with the quadratic form at the optimum
        let at_star = fuzzy_cost_with_memberships(inst, &sol, star.rows());
        prop_assert!((optimal - at_star).abs() <= 1e-9 * optimal.max(1.0));
        for _ in 0..10 {
            let rows: Vec<Vec<f64>> = (0..inst.n_points())
                .map(|c| {
                    let mut row: Vec<f64> = star.rows()[c]
                        .iter()
                        .map(|v| (v + rng.random_range(0.0..1.0)).max(0.0))
                        .collect();
                    let sum: f64 = row.iter().sum();
                    row.iter_mut().for_each(|v| *v /= sum);
                    row
                })
                .collect();
            let perturbed = fuzzy_cost_with_memberships(inst, &sol, &rows);
            prop_assert!(optimal <= perturbed + 1e-9);
        }
    }

    /// Adding an open point never increases the weighted service cost.
    #[test]
    fn service_cost_monotone_under_opening(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_metric_mufl(&mut rng, 6, 2, 4);
        let sol = random_solution(&mut rng, &inst);
        let base = inst.service_cost(&sol).unwrap();
        for p in inst.facilities().unwrap() {
            if !sol.contains(*p) {
                prop_assert!(inst.service_cost(&sol.with(*p)).unwrap() <= base);
            }
        }
    }

    /// Neighbourhood sizes match the counting formulas and the DKM swap
    /// relation is symmetric.
    #[test]
    fn neighborhood_cardinalities(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mufl = random_metric_mufl(&mut rng, 5, 2, 3);
        let o = random_solution(&mut rng, &mufl);
        let f = 5usize;
        let k = o.len();
        let drops = if k > 1 { k } else { 0 };
        prop_assert_eq!(
            mufl.swap_neighbors(&o).unwrap().len(),
            (f - k) + drops + k * (f - k)
        );

        let dkm = random_dkm_points(&mut rng, 6, 3, 3, 12);
        let s = random_solution(&mut rng, &dkm);
        let neighbors = dkm.swap_neighbors(&s).unwrap();
        prop_assert_eq!(neighbors.len(), 3 * 3);
        for n in &neighbors {
            prop_assert!(dkm.swap_neighbors(n).unwrap().contains(&s));
        }
    }

    /// Transition graphs are acyclic and local search lands on a sink under
    /// both pivot rules.
    #[test]
    fn transition_graph_sinks_absorb_search(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_dkm_points(&mut rng, 6, 2, 3, 12);
        let problem = FacilitySwap::new(&inst);
        let tg = build_transition_graph(&problem, 1 << 20).unwrap();
        prop_assert!(tg.is_acyclic());
        let init = random_solution(&mut rng, &inst);
        for pivot in [Pivot::Best, Pivot::First] {
            let (end, trace) = local_search(&problem, init.clone(), pivot).unwrap();
            let idx = tg.node_index(&end).unwrap();
            prop_assert!(tg.is_sink(idx));
            prop_assert!(trace.len() as u128 <= problem.solution_count());
        }
    }

    /// SAT local search is absorbed by flip local optima as well.
    #[test]
    fn sat_flip_search_reaches_optima(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_std_instance(&mut rng, 3, 4, 3);
        let problem = SatFlip::new(&inst);
        let tg = build_transition_graph(&problem, 1 << 20).unwrap();
        prop_assert!(tg.is_acyclic());
        let init = swaplab_core::generate::random_assignment(&mut rng, 3);
        let (end, _) = local_search(&problem, init, Pivot::First).unwrap();
        prop_assert!(tg.is_sink(tg.node_index(&end).unwrap()));
    }

    /// Reduced DKM/DFKM matrices embed: their construction keeps the
    /// Cauchy-Schwarz margin `2e(2N+M) <= 1`.
    #[test]
    fn reduced_matrices_pass_schoenberg(seed in 0..500u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=5usize);
        let m = rng.random_range(1..=6usize);
        let inst = random_std_instance(&mut rng, n, m, 3);
        let art = reduce_sat_to_dkm(&inst, &rat(3, 2)).unwrap();
        let matrix = DistanceMatrix::from_instance(&art.target);
        prop_assert!(schoenberg_check(&matrix, 1e-9).is_embeddable());

        let nae = random_nae_instance(&mut rng, n, m, 3);
        let dfkm = reduce_pnaesat_to_dfkm(&nae, &rat(3, 2)).unwrap();
        let matrix = DistanceMatrix::from_instance(&dfkm.target);
        prop_assert!(schoenberg_check(&matrix, 1e-9).is_embeddable());
    }

    /// The centered coordinate Gram matrix reproduces the double-centered
    /// Gram matrix, Frobenius-relative 1e-9, and the dimension stays below
    /// the point count.
    #[test]
    fn mds_reproduces_gram(seed in 0..500u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=4usize);
        let m = rng.random_range(1..=4usize);
        let inst = random_std_instance(&mut rng, n, m, 3);
        let art = reduce_sat_to_dkm(&inst, &rat(3, 2)).unwrap();
        let matrix = DistanceMatrix::from_instance(&art.target);
        let emb = classical_mds(&matrix, 1e-9).unwrap();
        let points = &emb.points;
        let total = matrix.n();
        prop_assert!(emb.dim < total);
        let gram = matrix.gram();
        // center the embedding, then compare P P^T with G
        let dim = emb.dim;
        let mean: Vec<f64> = (0..dim)
            .map(|d| points.iter().map(|p| p[d]).sum::<f64>() / total as f64)
            .collect();
        let mut err2 = 0.0;
        let mut norm2 = 0.0;
        for i in 0..total {
            for j in 0..total {
                let dot: f64 = (0..dim)
                    .map(|d| (points[i][d] - mean[d]) * (points[j][d] - mean[d]))
                    .sum();
                let g = gram[i * total + j];
                err2 += (dot - g) * (dot - g);
                norm2 += g * g;
            }
        }
        prop_assert!(err2.sqrt() <= 1e-9 * norm2.sqrt().max(1.0));
    }

    /// Text formats round trip losslessly.
    #[test]
    fn formats_round_trip(seed in 0..2000u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_std_instance(&mut rng, 4, 5, 6);
        prop_assert_eq!(&SatInstance::parse_wsat2(&inst.to_wsat2()).unwrap(), &inst);

        let art = reduce_sat_to_dkm(&inst, &rat(7, 5)).unwrap();
        let back = ReductionArtifact::from_json(&art.to_json()).unwrap();
        prop_assert_eq!(&back, &art);
        prop_assert!(back.constants_consistent());

        let mufl = random_metric_mufl(&mut rng, 4, 3, 4);
        let parsed = swaplab_core::LocationInstance::from_json(&mufl.to_json()).unwrap();
        prop_assert_eq!(&parsed, &mufl);
    }
}
