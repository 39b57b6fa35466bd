//! Objectives and constraint checks for a schedule. The three minimized
//! objectives are the number of open stations, the mean worker energy per
//! station, and the total electrical energy of running the shop for one
//! takt.

use rand::Rng;

use crate::codec::{decode, schedule_to_assignment, Chromosome, Schedule};
use crate::model::{Instance, TaskId, N_LINES};

/// Relative tolerance for comparing the two fractional objectives.
pub const REL_EPS: f64 = 1e-9;

pub fn rel_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_EPS * 1f64.max(a.abs()).max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveVector {
    /// f1: open stations across both rows.
    pub stations: u32,
    /// f2: worker energy per station, kcal per takt.
    pub worker_energy: f64,
    /// f3: electrical energy of the whole shop over one takt.
    pub electrical_energy: f64,
}

impl ObjectiveVector {
    pub fn as_array(&self) -> [f64; 3] {
        [
            self.stations as f64,
            self.worker_energy,
            self.electrical_energy,
        ]
    }

    /// Equality with exact station count and relative tolerance on the rest.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.stations == other.stations
            && rel_eq(self.worker_energy, other.worker_energy)
            && rel_eq(self.electrical_energy, other.electrical_energy)
    }

    /// Pareto dominance: no worse in every objective, strictly better in at
    /// least one. Fractional objectives treat near-equal values as equal.
    pub fn dominates(&self, other: &Self) -> bool {
        let no_worse = self.stations <= other.stations
            && (self.worker_energy < other.worker_energy
                || rel_eq(self.worker_energy, other.worker_energy))
            && (self.electrical_energy < other.electrical_energy
                || rel_eq(self.electrical_energy, other.electrical_energy));
        let better = self.stations < other.stations
            || (self.worker_energy < other.worker_energy
                && !rel_eq(self.worker_energy, other.worker_energy))
            || (self.electrical_energy < other.electrical_energy
                && !rel_eq(self.electrical_energy, other.electrical_energy));
        no_worse && better
    }

    /// Lexicographic order for deterministic listings.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.stations
            .cmp(&other.stations)
            .then(self.worker_energy.total_cmp(&other.worker_energy))
            .then(self.electrical_energy.total_cmp(&other.electrical_energy))
    }
}

pub fn eval_f1(s: &Schedule) -> u32 {
    s.station_count()
}

/// Mean worker energy per station; `None` when the schedule has no
/// stations.
pub fn eval_f2(s: &Schedule, inst: &Instance) -> Option<f64> {
    let k = s.station_count();
    if k == 0 {
        return None;
    }
    let total: f64 = s
        .iter_stations()
        .flat_map(|(_, _, st)| st.tasks.iter())
        .map(|t| {
            let task = inst.task(t.line, t.task);
            task.time_s * task.energy_rate
        })
        .sum();
    Some(total / k as f64)
}

/// Parts of the electrical-energy objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElectricalBreakdown {
    /// Fixed row cost: every station pays e1 + e2 for the full takt.
    pub fixed: f64,
    /// Active disassembly at e3 over the stations' busy time.
    pub disassembly: f64,
    /// Idle cost at e4 over the stations' slack time.
    pub standby: f64,
}

impl ElectricalBreakdown {
    pub fn total(&self) -> f64 {
        self.fixed + self.disassembly + self.standby
    }
}

pub fn eval_f3_parts(s: &Schedule, inst: &Instance) -> ElectricalBreakdown {
    let r = inst.rates();
    let k = s.station_count() as f64;
    let takt = inst.takt_s();
    let busy: f64 = s
        .iter_stations()
        .flat_map(|(_, _, st)| st.tasks.iter())
        .map(|t| inst.task(t.line, t.task).time_s)
        .sum();
    ElectricalBreakdown {
        fixed: k * takt * (r.e1 + r.e2),
        disassembly: busy * r.e3,
        standby: (k * takt - busy) * r.e4,
    }
}

pub fn eval_f3(s: &Schedule, inst: &Instance) -> f64 {
    eval_f3_parts(s, inst).total()
}

pub fn objectives(s: &Schedule, inst: &Instance) -> ObjectiveVector {
    ObjectiveVector {
        stations: eval_f1(s),
        worker_energy: eval_f2(s, inst).unwrap_or(0.0),
        electrical_energy: eval_f3(s, inst),
    }
}

/// Decode a chromosome and score it.
pub fn evaluate(
    c: &Chromosome,
    inst: &Instance,
    rng: &mut impl Rng,
) -> (Schedule, ObjectiveVector) {
    let s = decode(c, inst, rng);
    let obj = objectives(&s, inst);
    (s, obj)
}

/// A station referenced by row and position within the row, both 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StationRef {
    pub row: usize,
    pub station: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintViolation {
    /// An instance task missing from the schedule.
    TaskUnassigned { line: usize, task: TaskId },
    /// An instance task placed more than once.
    TaskMultiplyAssigned {
        line: usize,
        task: TaskId,
        stations: Vec<StationRef>,
    },
    /// A scheduled task that does not exist in the instance.
    UnknownTask {
        line: usize,
        task: TaskId,
        station: StationRef,
    },
    /// Station busy time above the takt.
    TaktExceeded {
        station: StationRef,
        load_s: f64,
        takt_s: f64,
    },
    /// An open station with no tasks.
    EmptyStation { station: StationRef },
    /// A task scheduled in a row its line cannot reach.
    RowIncompatible {
        line: usize,
        task: TaskId,
        station: StationRef,
    },
    /// Stored station load disagreeing with the sum of its task times.
    LoadMismatch {
        station: StationRef,
        stored_s: f64,
        recomputed_s: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstraintReport {
    pub violations: Vec<ConstraintViolation>,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    fn has(&self, pred: impl Fn(&ConstraintViolation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }

    pub fn unique_assignment_ok(&self) -> bool {
        !self.has(|v| {
            matches!(
                v,
                ConstraintViolation::TaskUnassigned { .. }
                    | ConstraintViolation::TaskMultiplyAssigned { .. }
                    | ConstraintViolation::UnknownTask { .. }
            )
        })
    }

    pub fn takt_ok(&self) -> bool {
        !self.has(|v| matches!(v, ConstraintViolation::TaktExceeded { .. }))
    }

    pub fn no_empty_stations_ok(&self) -> bool {
        !self.has(|v| matches!(v, ConstraintViolation::EmptyStation { .. }))
    }

    pub fn row_compatibility_ok(&self) -> bool {
        !self.has(|v| matches!(v, ConstraintViolation::RowIncompatible { .. }))
    }

    pub fn load_identity_ok(&self) -> bool {
        !self.has(|v| matches!(v, ConstraintViolation::LoadMismatch { .. }))
    }
}

/// Checks every schedule-level constraint and reports each violation with a
/// witness. Tolerates malformed schedules (duplicate, missing, or unknown
/// tasks) so tests can corrupt schedules and see the right report.
pub fn check_constraints(s: &Schedule, inst: &Instance) -> ConstraintReport {
    let mut violations = Vec::new();
    let assignment = schedule_to_assignment(s);

    for line in 0..N_LINES {
        for task in 1..=inst.line(line).n_tasks() as TaskId {
            match assignment.placements(line, task) {
                [] => violations.push(ConstraintViolation::TaskUnassigned { line, task }),
                [_] => {}
                many => violations.push(ConstraintViolation::TaskMultiplyAssigned {
                    line,
                    task,
                    stations: many
                        .iter()
                        .map(|&(row, station)| StationRef { row, station })
                        .collect(),
                }),
            }
        }
    }

    let takt = inst.takt_s();
    let tol = 1e-9 * 1f64.max(takt);
    for (row, idx, station) in s.iter_stations() {
        let sref = StationRef { row, station: idx };
        if station.tasks.is_empty() {
            violations.push(ConstraintViolation::EmptyStation { station: sref });
        }
        let mut recomputed = 0.0;
        for t in &station.tasks {
            let known =
                t.line < N_LINES && t.task >= 1 && t.task as usize <= inst.line(t.line).n_tasks();
            if !known {
                violations.push(ConstraintViolation::UnknownTask {
                    line: t.line,
                    task: t.task,
                    station: sref,
                });
                continue;
            }
            recomputed += inst.task(t.line, t.task).time_s;
            if !crate::codec::rows_for_line(t.line).contains(&row) {
                violations.push(ConstraintViolation::RowIncompatible {
                    line: t.line,
                    task: t.task,
                    station: sref,
                });
            }
        }
        if recomputed - takt > tol {
            violations.push(ConstraintViolation::TaktExceeded {
                station: sref,
                load_s: recomputed,
                takt_s: takt,
            });
        }
        if (station.load_s - recomputed).abs() > 1e-9 * 1f64.max(recomputed.abs()) {
            violations.push(ConstraintViolation::LoadMismatch {
                station: sref,
                stored_s: station.load_s,
                recomputed_s: recomputed,
            });
        }
    }

    ConstraintReport { violations }
}
