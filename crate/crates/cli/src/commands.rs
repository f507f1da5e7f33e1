//! The six subcommand implementations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use swaplab_core::embed::{classical_mds, schoenberg_check, DistanceMatrix, SchoenbergResult};
use swaplab_core::facility::{Kind, PointLabel, Solution};
use swaplab_core::generate::{
    random_assignment, random_dkm_points, random_metric_mufl, random_nae_instance, random_solution,
    random_std_instance,
};
use swaplab_core::rational::{parse_rat, rat_str, rat_to_f64, Rat};
use swaplab_core::reduce::{
    lift_assignment, map_solution_back, reduce_pnaesat_to_dfkm, reduce_sat_to_dkm,
    reduce_sat_to_mufl, ReductionArtifact,
};
use swaplab_core::satcore::{Assignment, Mode, SatInstance};
use swaplab_core::search::{
    build_transition_graph, local_search, FacilitySwap, Pivot, SatFlip, SearchError, SearchProblem,
};
use swaplab_core::verify::{run_all_checks, VerificationReport, VerifyOptions};
use swaplab_core::LocationInstance;

use crate::io_util::{atomic_write, load_input, read_file, CliError, LoadedInput};
use crate::{BenchArgs, EmbedArgs, ReduceArgs, SearchArgs, TgArgs, VerifyArgs};

fn parse_c(s: &str) -> Result<Rat, CliError> {
    parse_rat(s).map_err(|e| CliError::Usage(format!("invalid --c value: {e}")))
}

fn parse_pivot(s: &str) -> Result<Pivot, CliError> {
    s.parse().map_err(CliError::usage)
}

fn reduce_to(target: &str, inst: &SatInstance, c: &Rat) -> Result<ReductionArtifact, CliError> {
    match target {
        "mufl" => reduce_sat_to_mufl(inst).map_err(CliError::usage),
        "dkm" => reduce_sat_to_dkm(inst, c).map_err(CliError::usage),
        "dfkm" => reduce_pnaesat_to_dfkm(inst, c).map_err(CliError::usage),
        other => Err(CliError::Usage(format!(
            "unknown target `{other}` (expected mufl, dkm or dfkm)"
        ))),
    }
}

pub fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    let text = read_file(&args.input)?;
    let inst = SatInstance::parse_wsat2(&text).map_err(CliError::usage)?;
    let c = parse_c(&args.c)?;
    let art = reduce_to(&args.target, &inst, &c)?;
    atomic_write(&args.out, &art.to_json())?;
    println!("kind: {}", art.target.kind());
    println!(
        "N: {} M: {} w_max: {}",
        inst.num_vars(),
        inst.num_clauses(),
        inst.max_weight()
    );
    println!("W: {}", art.constants.w);
    if let Some(f) = &art.constants.opening_cost {
        println!("f: {}", rat_str(f));
    }
    if let Some(k) = art.constants.k {
        println!("K: {k}");
    }
    if let Some(eps) = &art.constants.epsilon {
        println!("epsilon: {}", rat_str(eps));
    }
    if let Some(cv) = &art.constants.c {
        println!("c: {}", rat_str(cv));
    }
    println!("wrote {}", args.out);
    Ok(())
}

/// Resolves an `indices:` token list: raw indices, literal labels (`x2`,
/// `!x2`) or clause labels (`b1`, `b1.2`).
fn parse_indices(inst: &LocationInstance, list: &str) -> Result<Solution, CliError> {
    let mut open = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(idx) = token.parse::<usize>() {
            open.push(idx);
            continue;
        }
        let label: PointLabel = token.parse().map_err(CliError::usage)?;
        let point = inst
            .point_labeled(&label)
            .ok_or_else(|| CliError::Usage(format!("instance has no point labeled `{token}`")))?;
        open.push(point);
    }
    Ok(Solution::new(open))
}

fn facility_init(
    inst: &LocationInstance,
    artifact: Option<&ReductionArtifact>,
    init_spec: &str,
    seed: Option<u64>,
) -> Result<Solution, CliError> {
    if let Some(bits) = init_spec.strip_prefix("lift:") {
        let art = artifact.ok_or_else(|| {
            CliError::Usage("`lift:` initialization requires a reduced instance".to_string())
        })?;
        let t: Assignment = bits.parse().map_err(CliError::usage)?;
        return lift_assignment(art, &t).map_err(CliError::usage);
    }
    if let Some(list) = init_spec.strip_prefix("indices:") {
        return parse_indices(inst, list);
    }
    if init_spec == "random" {
        let seed =
            seed.ok_or_else(|| CliError::Usage("`--init random` requires --seed".to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(random_solution(&mut rng, inst));
    }
    Err(CliError::Usage(format!(
        "invalid --init `{init_spec}` (expected lift:<bits>, indices:<list> or random)"
    )))
}

pub fn cmd_search(args: SearchArgs) -> Result<(), CliError> {
    let pivot = parse_pivot(&args.pivot)?;
    match load_input(&args.input)? {
        LoadedInput::Sat(inst) => {
            let init = if let Some(bits) = args.init.strip_prefix("bits:") {
                bits.parse::<Assignment>().map_err(CliError::usage)?
            } else if args.init == "random" {
                let seed = args.seed.ok_or_else(|| {
                    CliError::Usage("`--init random` requires --seed".to_string())
                })?;
                random_assignment(&mut ChaCha8Rng::seed_from_u64(seed), inst.num_vars())
            } else {
                return Err(CliError::Usage(
                    "SAT inputs take `--init bits:<bits>` or `--init random`".to_string(),
                ));
            };
            let problem = SatFlip::new(&inst);
            let (end, trace) = local_search(&problem, init, pivot).map_err(CliError::usage)?;
            if let Some(path) = &args.trace {
                atomic_write(path, &trace.to_csv())?;
            }
            println!("final cost: {}", trace.final_cost());
            println!("final solution: {end}");
            println!("steps: {}", trace.len());
        }
        LoadedInput::Facility(inst, artifact) => {
            let init = facility_init(&inst, artifact.as_deref(), &args.init, args.seed)?;
            let problem = FacilitySwap::new(&inst);
            let (end, trace) = local_search(&problem, init, pivot).map_err(CliError::usage)?;
            if let Some(path) = &args.trace {
                atomic_write(path, &trace.to_csv())?;
            }
            println!("final cost: {}", rat_str(trace.final_cost()));
            println!("final solution: {}", end.label());
            println!("steps: {}", trace.len());
            if let Some(art) = &artifact {
                println!("psi: {}", map_solution_back(art, &end));
            }
        }
        LoadedInput::Matrix(_) => {
            return Err(CliError::Usage(
                "search expects a wsat2 or instance JSON input".to_string(),
            ));
        }
    }
    Ok(())
}

fn guard_error(err: SearchError) -> CliError {
    match err {
        SearchError::GuardExceeded { .. } => CliError::Guard(err.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn cmd_tg(args: TgArgs) -> Result<(), CliError> {
    let (csv, nodes, arcs, sinks) = match load_input(&args.input)? {
        LoadedInput::Sat(inst) => {
            let problem = SatFlip::new(&inst);
            let tg = build_transition_graph(&problem, args.guard).map_err(guard_error)?;
            (
                tg.edge_csv(|s| s.to_string()),
                tg.nodes.len(),
                tg.arcs.len(),
                tg.sinks.len(),
            )
        }
        LoadedInput::Facility(inst, _) => {
            let problem = FacilitySwap::new(&inst);
            let tg = build_transition_graph(&problem, args.guard).map_err(guard_error)?;
            (
                tg.edge_csv(Solution::label),
                tg.nodes.len(),
                tg.arcs.len(),
                tg.sinks.len(),
            )
        }
        LoadedInput::Matrix(_) => {
            return Err(CliError::Usage(
                "tg expects a wsat2 or instance JSON input".to_string(),
            ));
        }
    };
    atomic_write(&args.out, &csv)?;
    println!("nodes: {nodes}");
    println!("arcs: {arcs}");
    println!("local optima: {sinks}");
    println!("wrote {}", args.out);
    Ok(())
}

/// One audited (instance, target) pair of a verify run.
struct VerifyRun {
    id: String,
    target: Kind,
    report: VerificationReport,
}

fn audit_sat(
    id: &str,
    inst: &SatInstance,
    targets: &[&str],
    c: &Rat,
    opts: &VerifyOptions,
) -> Result<Vec<VerifyRun>, CliError> {
    let mut runs = Vec::new();
    for target in targets {
        let art = reduce_to(target, inst, c)?;
        runs.push(VerifyRun {
            id: id.to_string(),
            target: art.target.kind(),
            report: run_all_checks(&art, opts),
        });
    }
    Ok(runs)
}

fn targets_for_mode(target: &str, mode: Mode) -> Result<Vec<&'static str>, CliError> {
    let all: Vec<&str> = match mode {
        Mode::Std => vec!["mufl", "dkm"],
        Mode::Nae => vec!["dfkm"],
    };
    if target == "all" {
        return Ok(all);
    }
    if all.contains(&target) {
        return Ok(match target {
            "mufl" => vec!["mufl"],
            "dkm" => vec!["dkm"],
            _ => vec!["dfkm"],
        });
    }
    Err(CliError::Usage(format!(
        "target `{target}` does not apply to a {mode} instance"
    )))
}

pub fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let c = parse_c(&args.c)?;
    let opts = VerifyOptions {
        guard: args.guard,
        membership_samples: args.membership_samples,
        gamma_samples: args.gamma_samples,
        gamma_n_range: (2, args.nmax.max(2)),
        seed: args.seed.unwrap_or(0),
    };
    let mut runs: Vec<VerifyRun> = Vec::new();
    match (&args.input, args.samples) {
        (Some(path), None) => match load_input(path)? {
            LoadedInput::Sat(inst) => {
                let targets = targets_for_mode(&args.target, inst.mode())?;
                runs.extend(audit_sat(path, &inst, &targets, &c, &opts)?);
            }
            LoadedInput::Facility(_, Some(artifact)) => {
                let kind = artifact.target.kind();
                if args.target != "all" && args.target != kind.to_string() {
                    return Err(CliError::Usage(format!(
                        "file targets {kind}, requested {}",
                        args.target
                    )));
                }
                runs.push(VerifyRun {
                    id: path.clone(),
                    target: kind,
                    report: run_all_checks(&artifact, &opts),
                });
            }
            LoadedInput::Facility(_, None) => {
                return Err(CliError::Usage(
                    "instance JSON carries no reduction block to audit".to_string(),
                ));
            }
            LoadedInput::Matrix(_) => {
                return Err(CliError::Usage(
                    "verify expects a wsat2 or instance JSON input".to_string(),
                ));
            }
        },
        (None, Some(samples)) => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::Usage("randomized verify requires --seed".to_string()))?;
            if args.nmax < 2 || args.mmax < 1 {
                return Err(CliError::Usage(
                    "sampled instances need --nmax >= 2 and --mmax >= 1".to_string(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..samples {
                use rand::Rng;
                let n = rng.random_range(2..=args.nmax);
                let m = rng.random_range(1..=args.mmax);
                let std_targets = targets_for_mode(&args.target, Mode::Std).ok();
                let nae_targets = targets_for_mode(&args.target, Mode::Nae).ok();
                if let Some(targets) = &std_targets {
                    let inst = random_std_instance(&mut rng, n, m, args.max_weight);
                    let id = format!("seed{seed}-{i}-std-n{n}m{m}");
                    runs.extend(audit_sat(&id, &inst, targets, &c, &opts)?);
                }
                if let Some(targets) = &nae_targets {
                    let inst = random_nae_instance(&mut rng, n, m, args.max_weight);
                    let id = format!("seed{seed}-{i}-nae-n{n}m{m}");
                    runs.extend(audit_sat(&id, &inst, targets, &c, &opts)?);
                }
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--in and --samples are mutually exclusive".to_string(),
            ));
        }
        (None, None) => {
            return Err(CliError::Usage(
                "verify needs either --in <file> or --samples <count>".to_string(),
            ));
        }
    }

    let mut failed = 0usize;
    let mut skipped = 0usize;
    for run in &runs {
        let status = if run.report.passed { "pass" } else { "FAIL" };
        println!("{} target={} {}", run.id, run.target, status);
        if !run.report.passed {
            failed += 1;
        }
        if run.report.any_skipped() {
            skipped += 1;
        }
    }
    println!(
        "verify: {} runs, {} failed, {} with skipped checks",
        runs.len(),
        failed,
        skipped
    );
    if let Some(path) = &args.report {
        let report = json!({
            "passed": failed == 0,
            "runs": runs
                .iter()
                .map(|r| {
                    json!({
                        "instance": r.id,
                        "target": r.target.to_string(),
                        "report": serde_json::from_str::<serde_json::Value>(&r.report.to_json())
                            .expect("report serializes"),
                    })
                })
                .collect::<Vec<_>>(),
        });
        let mut text = serde_json::to_string_pretty(&report).expect("aggregate report serializes");
        text.push('\n');
        atomic_write(path, &text)?;
        println!("wrote {path}");
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(format!(
            "{failed} of {} runs failed",
            runs.len()
        )));
    }
    if args.exhaustive && skipped > 0 {
        return Err(CliError::Guard(format!(
            "{skipped} runs had checks skipped by the enumeration guard"
        )));
    }
    Ok(())
}

pub fn cmd_embed(args: EmbedArgs) -> Result<(), CliError> {
    let matrix = match load_input(&args.input)? {
        LoadedInput::Matrix(m) => m,
        LoadedInput::Facility(inst, _) => {
            if inst.kind() == Kind::Mufl {
                return Err(CliError::Usage(
                    "embedding applies to dkm/dfkm instances (squared distances)".to_string(),
                ));
            }
            DistanceMatrix::from_instance(&inst)
        }
        LoadedInput::Sat(_) => {
            return Err(CliError::Usage(
                "embed expects an instance JSON or matrix CSV input".to_string(),
            ));
        }
    };
    match schoenberg_check(&matrix, args.tol) {
        SchoenbergResult::Embeddable { min_eigenvalue } => {
            println!("schoenberg: embeddable (min gram eigenvalue {min_eigenvalue:e})");
            let emb = classical_mds(&matrix, args.tol).map_err(CliError::usage)?;
            println!("points: {} dim: {}", matrix.n(), emb.dim);
            println!("max_abs_error: {:e}", emb.max_abs_error);
            if let Some(path) = &args.points {
                atomic_write(path, &emb.to_csv())?;
                println!("wrote {path}");
            }
            Ok(())
        }
        SchoenbergResult::NotEmbeddable {
            min_eigenvalue,
            witness,
            quadratic_form,
        } => {
            println!("schoenberg: not embeddable (min gram eigenvalue {min_eigenvalue:e})");
            let rendered: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
            println!("witness: {}", rendered.join(","));
            println!("quadratic form: {quadratic_form}");
            Err(CliError::VerifyFailed(
                "matrix is not embeddable".to_string(),
            ))
        }
    }
}

pub fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let pivot = parse_pivot(&args.pivot)?;
    let c = parse_rat("3/2").expect("constant");
    if args.target != "mufl" && args.target != "dkm" {
        return Err(CliError::Usage("bench targets mufl or dkm".to_string()));
    }
    if args.mode != "metric" && args.mode != "reduced" {
        return Err(CliError::Usage(
            "bench modes are metric or reduced".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut csv = String::from("instance,steps,final_cost,optimum,ratio\n");
    let mut worst_ratio = 0.0f64;
    let mut findings = Vec::new();
    for i in 0..args.count {
        use rand::Rng;
        let (id, inst): (String, LocationInstance) =
            match (args.target.as_str(), args.mode.as_str()) {
                ("mufl", "metric") => (
                    format!("mufl-metric-seed{}-{i}", args.seed),
                    random_metric_mufl(
                        &mut rng,
                        args.facilities,
                        args.extra_clients,
                        args.max_weight,
                    ),
                ),
                ("dkm", "metric") => (
                    format!("dkm-points-seed{}-{i}", args.seed),
                    random_dkm_points(&mut rng, args.points, args.k, args.max_weight, 16),
                ),
                (target, _) => {
                    let n = rng.random_range(2..=args.nmax.max(2));
                    let m = rng.random_range(1..=args.mmax.max(1));
                    let sat = random_std_instance(&mut rng, n, m, args.max_weight);
                    let art = reduce_to(target, &sat, &c)?;
                    (
                        format!("{target}-reduced-seed{}-{i}-n{n}m{m}", args.seed),
                        art.target,
                    )
                }
            };
        let problem = FacilitySwap::new(&inst);
        if problem.solution_count() > args.guard {
            return Err(CliError::Guard(
                SearchError::GuardExceeded {
                    size: problem.solution_count(),
                    guard: args.guard,
                }
                .to_string(),
            ));
        }
        let init = random_solution(&mut rng, &inst);
        let (_, trace) = local_search(&problem, init, pivot).map_err(CliError::usage)?;
        let final_cost = trace.final_cost().clone();
        let optimum = problem
            .enumerate_solutions()
            .into_iter()
            .map(|s| problem.evaluate(&s))
            .min()
            .expect("nonempty solution space");
        assert!(
            final_cost >= optimum,
            "local optimum beats the brute-force optimum"
        );
        let ratio = rat_to_f64(&(&final_cost / &optimum));
        worst_ratio = worst_ratio.max(ratio);
        if args.target == "mufl" && ratio > 3.0 {
            findings.push(format!("{id} ratio {ratio}"));
        }
        csv.push_str(&format!(
            "{id},{},{},{},{}\n",
            trace.len(),
            rat_str(&final_cost),
            rat_str(&optimum),
            ratio
        ));
    }
    atomic_write(&args.out, &csv)?;
    println!("instances: {}", args.count);
    println!("worst ratio: {worst_ratio}");
    for finding in &findings {
        println!("FINDING: local/optimum ratio above 3 on {finding}");
    }
    println!("wrote {}", args.out);
    Ok(())
}
