//! JSON wire format for instances. Unknown fields are rejected so typos in
//! hand-written files surface as parse errors instead of silent defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{
    EnergyRates, Instance, LineSpec, ModelError, PrecedenceGraph, Task, TaskId, VehicleModel,
    N_LINES,
};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceWire {
    takt_s: f64,
    rates: EnergyRates,
    lines: Vec<LineWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineWire {
    line_index: usize,
    vehicle_model: VehicleModel,
    tasks: Vec<TaskWire>,
    edges: Vec<(TaskId, TaskId)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskWire {
    id: TaskId,
    time_s: f64,
    energy_rate: f64,
    #[serde(default)]
    hazardous: bool,
    #[serde(default)]
    high_value: bool,
}

pub fn from_json_str(json: &str) -> Result<Instance, ModelError> {
    let wire: InstanceWire =
        serde_json::from_str(json).map_err(|e| ModelError::Parse(e.to_string()))?;
    if wire.lines.len() != N_LINES {
        return Err(ModelError::LineCount {
            found: wire.lines.len(),
        });
    }
    let mut lines = Vec::with_capacity(N_LINES);
    for (i, lw) in wire.lines.into_iter().enumerate() {
        if lw.line_index != i + 1 {
            return Err(ModelError::Parse(format!(
                "line at position {} has line_index {}, expected {}",
                i,
                lw.line_index,
                i + 1
            )));
        }
        let tasks: Vec<Task> = lw
            .tasks
            .into_iter()
            .map(|t| Task {
                id: t.id,
                time_s: t.time_s,
                energy_rate: t.energy_rate,
                hazardous: t.hazardous,
                high_value: t.high_value,
            })
            .collect();
        let precedence = PrecedenceGraph::new(tasks.len(), &lw.edges)?;
        lines.push(LineSpec {
            vehicle_model: lw.vehicle_model,
            tasks,
            precedence,
        });
    }
    let lines: [LineSpec; N_LINES] = lines.try_into().expect("length checked above");
    Instance::new(lines, wire.takt_s, wire.rates)
}

/// Canonical pretty-printed JSON; stable bytes for a given instance.
pub fn to_json_string(inst: &Instance) -> String {
    let wire = InstanceWire {
        takt_s: inst.takt_s(),
        rates: inst.rates(),
        lines: inst
            .lines()
            .iter()
            .enumerate()
            .map(|(i, line)| LineWire {
                line_index: i + 1,
                vehicle_model: line.vehicle_model,
                tasks: line
                    .tasks
                    .iter()
                    .map(|t| TaskWire {
                        id: t.id,
                        time_s: t.time_s,
                        energy_rate: t.energy_rate,
                        hazardous: t.hazardous,
                        high_value: t.high_value,
                    })
                    .collect(),
                edges: line.precedence.edges().collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&wire).expect("instance serializes");
    s.push('\n');
    s
}

pub fn read_instance(path: &Path) -> Result<Instance, ModelError> {
    let json = std::fs::read_to_string(path)?;
    from_json_str(&json)
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<(), ModelError> {
    std::fs::write(path, to_json_string(inst))?;
    Ok(())
}

/// FNV-1a fingerprint of the canonical JSON, as 16 hex digits. Used to tie
/// solver outputs back to the exact instance they were produced from.
pub fn instance_hash(inst: &Instance) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in to_json_string(inst).as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
