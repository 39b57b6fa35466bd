//! Seeded random instance generator. The initial edge draw only points from
//! lower to higher task ids, so the graph starts acyclic; the twin pass then
//! rewires some tasks to copy an existing task's neighborhood, which keeps
//! the graph acyclic, and every generated instance passes validation.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{
    EnergyRates, Instance, LineSpec, ModelError, PrecedenceGraph, Task, TaskId, VehicleModel,
    N_LINES,
};

#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub tasks_per_line: [usize; N_LINES],
    pub takt_s: f64,
    /// Probability of an edge between each ordered task pair.
    pub edge_density: f64,
    /// Task times are drawn uniformly from this range, in whole seconds.
    pub time_range_s: (u32, u32),
    /// Worker energy rates are drawn uniformly from this range.
    pub energy_rate_range: (f64, f64),
    pub hazardous_frac: f64,
    pub high_value_frac: f64,
    /// Fraction of tasks rewired as structural twins of an earlier task:
    /// same immediate predecessors and successors, own processing time.
    /// Vehicles carry several interchangeable parts (wheels, seats, lamps),
    /// so realistic task graphs repeat neighborhoods at every size.
    pub twin_frac: f64,
    pub rates: EnergyRates,
}

pub const DEFAULT_RATES: EnergyRates = EnergyRates {
    e1: 20.0,
    e2: 40.0,
    e3: 90.0,
    e4: 55.0,
};

impl GeneratorSpec {
    pub fn with_size(tasks_per_line: usize) -> Self {
        Self {
            tasks_per_line: [tasks_per_line; N_LINES],
            takt_s: 650.0,
            edge_density: 0.1,
            time_range_s: (100, 600),
            energy_rate_range: (0.5, 2.0),
            hazardous_frac: 0.1,
            high_value_frac: 0.1,
            twin_frac: 0.2,
            rates: DEFAULT_RATES,
        }
    }

    pub fn small() -> Self {
        Self::with_size(20)
    }

    pub fn medium() -> Self {
        Self::with_size(40)
    }

    pub fn large() -> Self {
        Self::with_size(80)
    }

    fn check(&self) -> Result<(), ModelError> {
        let (lo, hi) = self.time_range_s;
        if lo == 0 || lo > hi {
            return Err(ModelError::InfeasibleSpec(format!(
                "bad time range [{lo}, {hi}]"
            )));
        }
        if hi as f64 > self.takt_s {
            return Err(ModelError::InfeasibleSpec(format!(
                "max task time {hi} exceeds takt {}",
                self.takt_s
            )));
        }
        let (elo, ehi) = self.energy_rate_range;
        if !(elo.is_finite() && ehi.is_finite()) || elo < 0.0 || elo > ehi {
            return Err(ModelError::InfeasibleSpec(format!(
                "bad energy rate range [{elo}, {ehi}]"
            )));
        }
        for (name, frac) in [
            ("edge_density", self.edge_density),
            ("hazardous_frac", self.hazardous_frac),
            ("high_value_frac", self.high_value_frac),
            ("twin_frac", self.twin_frac),
        ] {
            if !(0.0..=1.0).contains(&frac) {
                return Err(ModelError::InfeasibleSpec(format!(
                    "{name} {frac} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Instance, ModelError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let models = [
        VehicleModel::Fuel,
        VehicleModel::Mixed,
        VehicleModel::PureElectric,
    ];
    let mut lines = Vec::with_capacity(N_LINES);
    for (&model, &n) in models.iter().zip(&spec.tasks_per_line) {
        let tasks: Vec<Task> = (1..=n as TaskId)
            .map(|id| {
                let time_s = rng.random_range(spec.time_range_s.0..=spec.time_range_s.1) as f64;
                let raw: f64 =
                    rng.random_range(spec.energy_rate_range.0..=spec.energy_rate_range.1);
                Task {
                    id,
                    time_s,
                    energy_rate: (raw * 100.0).round() / 100.0,
                    hazardous: rng.random_bool(spec.hazardous_frac),
                    high_value: rng.random_bool(spec.high_value_frac),
                }
            })
            .collect();
        let mut preds: Vec<BTreeSet<TaskId>> = vec![BTreeSet::new(); n];
        let mut succs: Vec<BTreeSet<TaskId>> = vec![BTreeSet::new(); n];
        for from in 1..=n as TaskId {
            for to in (from + 1)..=n as TaskId {
                if rng.random_bool(spec.edge_density) {
                    succs[from as usize - 1].insert(to);
                    preds[to as usize - 1].insert(from);
                }
            }
        }
        // Twin pass: rewire a task to share an earlier task's immediate
        // neighborhood, making the pair interchangeable in any sequence.
        // Copying a neighborhood cannot close a cycle — that would need a
        // path from one of the template's successors back to one of its
        // predecessors, which the template itself already rules out.
        for t in 2..=n as TaskId {
            if !rng.random_bool(spec.twin_frac) {
                continue;
            }
            let template = rng.random_range(1..t);
            let ti = t as usize - 1;
            for p in std::mem::take(&mut preds[ti]) {
                succs[p as usize - 1].remove(&t);
            }
            for q in std::mem::take(&mut succs[ti]) {
                preds[q as usize - 1].remove(&t);
            }
            preds[ti] = preds[template as usize - 1].clone();
            succs[ti] = succs[template as usize - 1].clone();
            for &p in &preds[ti] {
                succs[p as usize - 1].insert(t);
            }
            for &q in &succs[ti] {
                preds[q as usize - 1].insert(t);
            }
        }
        let edges: Vec<(TaskId, TaskId)> = succs
            .iter()
            .enumerate()
            .flat_map(|(i, out)| out.iter().map(move |&to| (i as TaskId + 1, to)))
            .collect();
        lines.push(LineSpec {
            vehicle_model: model,
            tasks,
            precedence: PrecedenceGraph::new(n, &edges)?,
        });
    }
    let lines: [LineSpec; N_LINES] = lines.try_into().expect("three lines built");
    Instance::new(lines, spec.takt_s, spec.rates)
}
