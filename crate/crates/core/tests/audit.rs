//! Randomized structural audits over seeded instance batches.
//!
//! These are smaller cousins of the acceptance suite: every check must pass
//! on every reduction of every generated instance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use swaplab_core::generate::{random_nae_instance, random_std_instance};
use swaplab_core::rational::rat;
use swaplab_core::reduce::{reduce_pnaesat_to_dfkm, reduce_sat_to_dkm, reduce_sat_to_mufl};
use swaplab_core::verify::{run_all_checks, VerifyOptions};

fn opts() -> VerifyOptions {
    VerifyOptions {
        membership_samples: 3000,
        gamma_samples: 300,
        ..VerifyOptions::default()
    }
}

#[test]
fn std_batch_passes_all_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0D1);
    let c = rat(3, 2);
    for round in 0..12 {
        let n = 2 + round % 2;
        let m = 2 + (round / 2) % 2;
        let inst = random_std_instance(&mut rng, n, m, 3);
        for art in [
            reduce_sat_to_mufl(&inst).unwrap(),
            reduce_sat_to_dkm(&inst, &c).unwrap(),
        ] {
            let report = run_all_checks(&art, &opts());
            assert!(
                report.passed && !report.any_skipped(),
                "round {round} {} on {}:\n{}",
                art.target.kind(),
                inst.to_wsat2(),
                report.to_json()
            );
        }
    }
}

#[test]
fn nae_batch_passes_all_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0D2);
    let c = rat(3, 2);
    for round in 0..6 {
        let n = 2 + round % 2;
        let m = 2 + round % 2;
        let inst = random_nae_instance(&mut rng, n, m, 3);
        let art = reduce_pnaesat_to_dfkm(&inst, &c).unwrap();
        let report = run_all_checks(&art, &opts());
        assert!(
            report.passed && !report.any_skipped(),
            "round {round} on {}:\n{}",
            inst.to_wsat2(),
            report.to_json()
        );
    }
}

/// Targeted corruptions of a serialized artifact must each trip at least
/// one check; the oracle layer is not vacuous.
#[test]
fn targeted_corruptions_are_caught() {
    use swaplab_core::facility::InstanceFile;
    use swaplab_core::reduce::ReductionArtifact;
    use swaplab_core::satcore::{Mode, SatInstance};

    let inst = SatInstance::from_signed(3, &[(1, -2, 2), (2, 3, 1)], Mode::Std).unwrap();
    let art = reduce_sat_to_dkm(&inst, &rat(3, 2)).unwrap();
    assert!(run_all_checks(&art, &opts()).passed);
    let base = art.to_file();
    let n = base.n_points;
    let b1 = 6; // first clause point of the 3-variable layout

    let mut mutations: Vec<(&str, InstanceFile)> = Vec::new();

    let mut swapped = base.clone();
    // clause b1 = (x1 v !x2): swap its near/far distances on the x1 side
    let (near, far) = (swapped.dist[b1 * n].clone(), swapped.dist[b1 * n + 1].clone());
    swapped.dist[b1 * n] = far.clone();
    swapped.dist[b1] = far;
    swapped.dist[b1 * n + 1] = near.clone();
    swapped.dist[n + b1] = near;
    mutations.push(("near/far swapped", swapped));

    let mut stretched = base.clone();
    stretched.dist[1] = "2".to_string(); // x1 to !x1
    stretched.dist[n] = "2".to_string();
    mutations.push(("literal pair stretched", stretched));

    let mut reweighted = base.clone();
    reweighted.weights[b1] += 1; // target clause weight off by one
    mutations.push(("clause weight changed", reweighted));

    let mut heavy = base.clone();
    heavy.reduction.as_mut().unwrap().w += 1;
    mutations.push(("constant W changed", heavy));

    let mut eps = base.clone();
    eps.reduction.as_mut().unwrap().epsilon = Some("1/19".to_string());
    mutations.push(("constant epsilon changed", eps));

    let mut budget = base.clone();
    budget.k = Some(2); // K no longer equals the variable count
    mutations.push(("budget changed", budget));

    for (what, file) in mutations {
        let corrupted = ReductionArtifact::from_file(&file)
            .unwrap_or_else(|e| panic!("{what}: artifact must still load: {e}"));
        let report = run_all_checks(&corrupted, &opts());
        assert!(!report.passed, "{what}: corruption slipped through");
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        assert!(!failing.is_empty(), "{what}: no failing check recorded");
        for check in &report.checks {
            if !check.passed() {
                assert!(
                    check.counterexample.is_some(),
                    "{what}: {} fails without a counterexample",
                    check.name
                );
            }
        }
    }
}

#[test]
fn non_midpoint_c_values_also_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA0D3);
    let inst = random_std_instance(&mut rng, 3, 3, 2);
    let nae = random_nae_instance(&mut rng, 2, 2, 2);
    for c in [rat(11, 10), rat(19, 10)] {
        let dkm = reduce_sat_to_dkm(&inst, &c).unwrap();
        assert!(run_all_checks(&dkm, &opts()).passed);
        let dfkm = reduce_pnaesat_to_dfkm(&nae, &c).unwrap();
        assert!(run_all_checks(&dfkm, &opts()).passed);
    }
}
