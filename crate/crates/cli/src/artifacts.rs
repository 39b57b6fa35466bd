//! Renderers for the output artifacts: CSV fronts, Gantt schedules,
//! indicator tables and JSON run manifests.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use mpmdl::analytics::{IndicatorReport, ParetoArchive};
use mpmdl::codec::Schedule;
use mpmdl::eval::ObjectiveVector;
use mpmdl::model::Instance;

/// One row per archive point, identifiers starting at 1, points in the
/// archive's lexicographic order.
pub fn front_csv(archive: &ParetoArchive) -> String {
    vectors_csv(&archive.vectors())
}

pub fn vectors_csv(vectors: &[ObjectiveVector]) -> String {
    let mut out = String::from("id,f1,f2,f3\n");
    for (i, v) in vectors.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            v.stations,
            v.worker_energy,
            v.electrical_energy
        );
    }
    out
}

/// One row per scheduled task. Start times inside a station are the
/// prefix sums of its task order. All indices are 1-based.
pub fn gantt_csv(schedule: &Schedule, inst: &Instance) -> String {
    let mut out = String::from("row,station,line,task,start_s,end_s\n");
    for (row, idx, station) in schedule.iter_stations() {
        let mut clock = 0.0;
        for placed in &station.tasks {
            let time_s = inst.task(placed.line, placed.task).time_s;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row + 1,
                idx + 1,
                placed.line + 1,
                placed.task,
                clock,
                clock + time_s
            );
            clock += time_s;
        }
    }
    out
}

/// Per-run HV/IGD rows: the source data for box plots.
pub fn indicators_csv(report: &IndicatorReport) -> String {
    let mut out = String::from("algorithm,seed,front_size,hypervolume,igd,excluded_points\n");
    for r in &report.runs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.algorithm, r.seed, r.front_size, r.hypervolume, r.igd, r.excluded_points
        );
    }
    out
}

/// Per-algorithm Max/Min/Ave of each objective over all archived points.
pub fn summary_csv(report: &IndicatorReport) -> String {
    let mut out = String::from("algorithm,metric,max,min,ave\n");
    for a in &report.algorithms {
        for (name, s) in ["f1", "f2", "f3"].iter().zip(a.per_objective.iter()) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                a.algorithm, name, s.max, s.min, s.mean
            );
        }
    }
    out
}

/// Where a command's manifest lives relative to a single output file.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut path = out.to_path_buf();
    path.set_extension("manifest.json");
    path
}

/// Everything needed to rerun a command and reproduce its artifacts:
/// the resolved configuration, the instance fingerprint and the files
/// written. The wall clock is informational and varies between runs.
pub fn write_manifest(
    path: &Path,
    command: &str,
    instance_hash: &str,
    config: serde_json::Value,
    artifacts: &[String],
    wall_clock_ms: u128,
) -> io::Result<()> {
    let manifest = serde_json::json!({
        "command": command,
        "instance_hash": instance_hash,
        "config": config,
        "artifacts": artifacts,
        "wall_clock_ms": wall_clock_ms,
    });
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    fs::write(path, body)
}
