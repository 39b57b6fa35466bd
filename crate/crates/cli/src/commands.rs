//! Implementations of the four subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use mpmdl::analytics::summarize;
use mpmdl::baselines::{run_algorithm, BaselineConfig, Scale};
use mpmdl::codec::VisitLedger;
use mpmdl::dynamics::{
    assign_line_models, stage1_replan, takt_time, within_fluctuation_band, DynamicsError,
    LineAssignment, RecyclingVolumes, ReplanOutcome, Stage,
};
use mpmdl::evolve::{EvoConfig, Insga3};
use mpmdl::generate::{generate, GeneratorSpec};
use mpmdl::io::{instance_hash, read_instance, write_instance};
use mpmdl::model::Instance;

use crate::artifacts;
use crate::{AdjustArgs, CliError, CompareArgs, GenArgs, SolveArgs, SolverOpts};

fn validation(err: impl std::fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

fn write_artifact(
    dir: &Path,
    name: &str,
    body: &str,
    files: &mut Vec<String>,
) -> Result<(), CliError> {
    fs::write(dir.join(name), body).map_err(runtime)?;
    files.push(name.to_string());
    Ok(())
}

impl SolverOpts {
    /// Start from the per-scale preset and apply every explicit flag.
    fn resolve(&self, inst: &Instance) -> (Scale, BaselineConfig) {
        let scale = self.scale.unwrap_or_else(|| Scale::for_instance(inst));
        let mut cfg = BaselineConfig::for_scale(scale);
        if let Some(v) = self.pop {
            cfg.population = v;
        }
        if let Some(v) = self.gens {
            cfg.iterations = v;
        }
        if let Some(v) = self.pc {
            cfg.crossover_prob = v;
        }
        if let Some(v) = self.pm {
            cfg.mutation_prob = v;
        }
        if let Some(v) = self.divisions {
            cfg.divisions = v;
        }
        if let Some(v) = self.c1 {
            cfg.cognitive = v;
        }
        if let Some(v) = self.c2 {
            cfg.social = v;
        }
        if let Some(v) = self.inertia {
            cfg.inertia = v;
        }
        (scale, cfg)
    }
}

fn config_json(scale: Scale, cfg: &BaselineConfig) -> serde_json::Value {
    serde_json::json!({
        "scale": scale.name(),
        "population": cfg.population,
        "iterations": cfg.iterations,
        "crossover_prob": cfg.crossover_prob,
        "mutation_prob": cfg.mutation_prob,
        "cognitive": cfg.cognitive,
        "social": cfg.social,
        "inertia": cfg.inertia,
        "divisions": cfg.divisions,
    })
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut spec = match args.size {
        Scale::Small => GeneratorSpec::small(),
        Scale::Medium => GeneratorSpec::medium(),
        Scale::Large => GeneratorSpec::large(),
    };
    spec.takt_s = args.takt;
    spec.edge_density = args.density;
    spec.time_range_s = (args.time_min, args.time_max);
    spec.hazardous_frac = args.hazard_frac;
    spec.high_value_frac = args.value_frac;
    spec.twin_frac = args.twin_frac;
    let inst = generate(&spec, args.seed).map_err(validation)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(runtime)?;
    }
    write_instance(&inst, &args.out)
        .map_err(|err| runtime(format!("writing {}: {err}", args.out.display())))?;
    let hash = instance_hash(&inst);
    let config = serde_json::json!({
        "size": args.size.name(),
        "seed": args.seed,
        "takt_s": args.takt,
        "edge_density": args.density,
        "time_range_s": [args.time_min, args.time_max],
        "hazardous_frac": args.hazard_frac,
        "high_value_frac": args.value_frac,
        "twin_frac": args.twin_frac,
        "out": args.out.display().to_string(),
    });
    artifacts::write_manifest(
        &artifacts::manifest_path_for(&args.out),
        "gen",
        &hash,
        config,
        &[args.out.display().to_string()],
        start.elapsed().as_millis(),
    )
    .map_err(runtime)?;
    println!("{}", inst.stats());
    println!("wrote {} (instance {hash})", args.out.display());
    Ok(())
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let inst = read_instance(&args.instance).map_err(validation)?;
    let hash = instance_hash(&inst);
    let (scale, cfg) = args.solver.resolve(&inst);
    cfg.validate().map_err(validation)?;
    let archive = run_algorithm(args.algo, &inst, &cfg, args.seed).map_err(validation)?;
    fs::create_dir_all(&args.out_dir).map_err(runtime)?;

    let mut files = Vec::new();
    write_artifact(
        &args.out_dir,
        "front.csv",
        &artifacts::front_csv(&archive),
        &mut files,
    )?;
    for (objective, name) in ["gantt_f1.csv", "gantt_f2.csv", "gantt_f3.csv"]
        .iter()
        .enumerate()
    {
        let entry = archive
            .min_by_objective(objective)
            .ok_or_else(|| runtime("solver returned an empty archive"))?;
        let solved = entry
            .solution
            .as_ref()
            .ok_or_else(|| runtime("archive point carries no schedule"))?;
        write_artifact(
            &args.out_dir,
            name,
            &artifacts::gantt_csv(&solved.schedule, &inst),
            &mut files,
        )?;
    }

    let mut config = config_json(scale, &cfg);
    config["algorithm"] = args.algo.name().into();
    config["seed"] = args.seed.into();
    config["instance"] = args.instance.display().to_string().into();
    artifacts::write_manifest(
        &args.out_dir.join("manifest.json"),
        "solve",
        &hash,
        config,
        &files,
        start.elapsed().as_millis(),
    )
    .map_err(runtime)?;

    println!(
        "{} seed {} on instance {hash}: {} non-dominated points",
        args.algo.name(),
        args.seed,
        archive.len()
    );
    for (label, objective) in [("f1", 0), ("f2", 1), ("f3", 2)] {
        let v = archive
            .min_by_objective(objective)
            .expect("archive checked non-empty")
            .objectives;
        println!(
            "best {label}: f1={} f2={} f3={}",
            v.stations, v.worker_energy, v.electrical_energy
        );
    }
    println!("artifacts in {}", args.out_dir.display());
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if args.algos.is_empty() {
        return Err(CliError::Validation("no algorithms given".into()));
    }
    if args.seeds.is_empty() {
        return Err(CliError::Validation("no seeds given".into()));
    }
    let inst = read_instance(&args.instance).map_err(validation)?;
    let hash = instance_hash(&inst);
    let (scale, cfg) = args.solver.resolve(&inst);
    cfg.validate().map_err(validation)?;
    fs::create_dir_all(&args.out_dir).map_err(runtime)?;

    let mut files = Vec::new();
    let mut archives = Vec::new();
    let mut failure: Option<String> = None;
    'runs: for &algo in &args.algos {
        for &seed in &args.seeds {
            match run_algorithm(algo, &inst, &cfg, seed) {
                Ok(archive) => {
                    let name = format!("front_{}_{}.csv", algo.name(), seed);
                    write_artifact(
                        &args.out_dir,
                        &name,
                        &artifacts::front_csv(&archive),
                        &mut files,
                    )?;
                    println!("{} seed {}: {} points", algo.name(), seed, archive.len());
                    archives.push(archive);
                }
                Err(err) => {
                    failure = Some(format!("{} seed {seed}: {err}", algo.name()));
                    break 'runs;
                }
            }
        }
    }

    if !archives.is_empty() {
        let report = summarize(&archives).map_err(runtime)?;
        write_artifact(
            &args.out_dir,
            "indicators.csv",
            &artifacts::indicators_csv(&report),
            &mut files,
        )?;
        write_artifact(
            &args.out_dir,
            "summary.csv",
            &artifacts::summary_csv(&report),
            &mut files,
        )?;
        write_artifact(
            &args.out_dir,
            "reference_front.csv",
            &artifacts::vectors_csv(&report.reference_front),
            &mut files,
        )?;
        print!("{}", artifacts::summary_csv(&report));

        let mut config = config_json(scale, &cfg);
        config["algorithms"] = args
            .algos
            .iter()
            .map(|a| a.name())
            .collect::<Vec<_>>()
            .into();
        config["seeds"] = args.seeds.clone().into();
        config["instance"] = args.instance.display().to_string().into();
        config["normalization_min"] = report.normalization_min.to_vec().into();
        config["normalization_max"] = report.normalization_max.to_vec().into();
        config["reference_point_raw"] = report.reference_point_raw.to_vec().into();
        config["reference_point_normalized"] = report.reference_point_normalized.to_vec().into();
        artifacts::write_manifest(
            &args.out_dir.join("manifest.json"),
            "compare",
            &hash,
            config,
            &files,
            start.elapsed().as_millis(),
        )
        .map_err(runtime)?;
    }

    match failure {
        None => Ok(()),
        Some(msg) => Err(CliError::Runtime(format!(
            "aborted after {} completed runs: {msg}",
            archives.len()
        ))),
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Scenario {
    da_sl: u64,
    months: Vec<MonthDemand>,
}

#[derive(Clone, Copy, serde::Serialize, serde::Deserialize)]
struct MonthDemand {
    month: u32,
    da_fv: u64,
    da_pev: u64,
}

/// Reassign the sides from scratch: derive the takt from the forecast
/// and solve on a fresh visit ledger.
fn cold_replan(
    inst: &Instance,
    volumes: &RecyclingVolumes,
    available_s: u64,
    cfg: &EvoConfig,
) -> Result<ReplanOutcome, DynamicsError> {
    let units_per_line = volumes.total() / 3;
    let takt_s = takt_time(available_s, units_per_line)?;
    let scaled = inst.with_takt(takt_s as f64)?;
    let mut solver = Insga3::new(&scaled, cfg)?;
    solver.run();
    Ok(ReplanOutcome {
        takt_s,
        archive: solver.archive().clone(),
        ledger: solver.into_ledger(),
    })
}

pub fn adjust(args: &AdjustArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let inst = read_instance(&args.instance).map_err(validation)?;
    let hash = instance_hash(&inst);
    let text = fs::read_to_string(&args.scenario).map_err(validation)?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|err| CliError::Validation(format!("invalid scenario JSON: {err}")))?;
    if scenario.months.is_empty() {
        return Err(CliError::Validation("scenario lists no months".into()));
    }
    let (scale, cfg) = args.solver.resolve(&inst);
    cfg.validate().map_err(validation)?;
    fs::create_dir_all(&args.out_dir).map_err(runtime)?;

    let mut timeline = String::from("month,stage,side1,side3,takt_s,front_size\n");
    let mut files = Vec::new();
    let mut current: Option<LineAssignment> = None;
    let mut prev: Option<RecyclingVolumes> = None;
    let mut ledger: Option<VisitLedger> = None;
    let mut skipped: Vec<u32> = Vec::new();

    for (idx, month) in scenario.months.iter().enumerate() {
        let volumes = RecyclingVolumes::new(month.da_fv, month.da_pev, scenario.da_sl);
        let evo = cfg.evo(args.seed.wrapping_add(idx as u64));
        let assignment = match assign_line_models(&volumes, current.as_ref()) {
            Ok(a) => a,
            Err(err) => {
                println!("month {}: {err}; skipped", month.month);
                let _ = writeln!(timeline, "{},overload,,,,0", month.month);
                skipped.push(month.month);
                continue;
            }
        };
        // Incremental only when the sides stay put and the drift from the
        // last planned month is within the band; otherwise solve cold.
        let incremental = assignment.stage == Stage::Replan
            && prev.is_some_and(|p| within_fluctuation_band(&p, &volumes));
        let outcome = if incremental {
            stage1_replan(
                &inst,
                &prev.expect("incremental implies a previous month"),
                &volumes,
                args.available_s,
                &evo,
                ledger.take(),
            )
        } else {
            cold_replan(&inst, &volumes, args.available_s, &evo)
        };
        match outcome {
            Ok(out) => {
                let stage = if incremental { 1 } else { 2 };
                let name = format!("front_month_{}.csv", month.month);
                write_artifact(
                    &args.out_dir,
                    &name,
                    &artifacts::front_csv(&out.archive),
                    &mut files,
                )?;
                let _ = writeln!(
                    timeline,
                    "{},{},{},{},{},{}",
                    month.month,
                    stage,
                    assignment.side1,
                    assignment.side3,
                    out.takt_s,
                    out.archive.len()
                );
                println!(
                    "month {}: stage {stage}, sides {}/{}, takt {}s, {} points",
                    month.month,
                    assignment.side1,
                    assignment.side3,
                    out.takt_s,
                    out.archive.len()
                );
                ledger = Some(out.ledger);
                current = Some(assignment);
                prev = Some(volumes);
            }
            Err(err) => {
                println!("month {}: {err}; skipped", month.month);
                let _ = writeln!(timeline, "{},error,,,,0", month.month);
                skipped.push(month.month);
            }
        }
    }

    write_artifact(&args.out_dir, "timeline.csv", &timeline, &mut files)?;
    let mut config = config_json(scale, &cfg);
    config["seed"] = args.seed.into();
    config["available_s"] = args.available_s.into();
    config["instance"] = args.instance.display().to_string().into();
    config["scenario"] = serde_json::to_value(&scenario).expect("scenario reserializes");
    artifacts::write_manifest(
        &args.out_dir.join("manifest.json"),
        "adjust",
        &hash,
        config,
        &files,
        start.elapsed().as_millis(),
    )
    .map_err(runtime)?;

    if skipped.is_empty() {
        Ok(())
    } else {
        let list = skipped
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        Err(CliError::Runtime(format!("months skipped: {list}")))
    }
}
