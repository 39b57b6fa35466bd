//! Problem data for a disassembly shop with three parallel lines that share
//! two rows of workstations: row 1 serves lines 1 and 2, row 2 serves lines
//! 2 and 3. Line 2 sits in the middle and may carry a mix of vehicle models;
//! the side lines each carry a single model.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Task identifier, 1-based within its line.
pub type TaskId = u32;

/// Number of parallel disassembly lines.
pub const N_LINES: usize = 3;

/// Number of workstation rows shared by the lines.
pub const N_ROWS: usize = 2;

/// Largest graph size accepted by the exact topological-order routines.
pub const TOPO_ORDER_CAP: usize = 12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("expected exactly {N_LINES} lines, found {found}")]
    LineCount { found: usize },
    #[error("takt must be positive and finite, got {takt_s}")]
    BadTakt { takt_s: f64 },
    #[error("energy rate {name} must be non-negative and finite, got {value}")]
    BadRate { name: &'static str, value: f64 },
    #[error("line {line}: task at position {position} has id {found}, expected {expected}")]
    TaskIdNotDense {
        line: usize,
        position: usize,
        found: TaskId,
        expected: TaskId,
    },
    #[error("line {line}, task {task}: time must be positive and finite, got {time_s}")]
    BadTaskTime {
        line: usize,
        task: TaskId,
        time_s: f64,
    },
    #[error("line {line}, task {task}: energy rate must be non-negative and finite, got {rate}")]
    BadTaskRate {
        line: usize,
        task: TaskId,
        rate: f64,
    },
    #[error("line {line}, task {task}: time {time_s} exceeds takt {takt_s}")]
    TaskExceedsTakt {
        line: usize,
        task: TaskId,
        time_s: f64,
        takt_s: f64,
    },
    #[error("edge ({from}, {to}) references a task outside 1..={n_tasks}")]
    EdgeOutOfRange {
        from: TaskId,
        to: TaskId,
        n_tasks: usize,
    },
    #[error("edge ({task}, {task}) is a self-loop")]
    SelfLoop { task: TaskId },
    #[error("line {line}: precedence cycle {cycle:?}")]
    Cycle { line: usize, cycle: Vec<TaskId> },
    #[error("line {line} is a side line and cannot carry the mixed model")]
    SideLineMixed { line: usize },
    #[error("{what} has {size} tasks, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid instance JSON: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("generator spec infeasible: {0}")]
    InfeasibleSpec(String),
}

/// Vehicle model handled by a line.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum VehicleModel {
    #[serde(rename = "fuel")]
    Fuel,
    #[serde(rename = "pev")]
    PureElectric,
    #[serde(rename = "mixed")]
    Mixed,
}

impl fmt::Display for VehicleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VehicleModel::Fuel => "fuel",
            VehicleModel::PureElectric => "pev",
            VehicleModel::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// One disassembly task.
#[derive(Clone, Debug, PartialEq)]
pub struct Task {
    pub id: TaskId,
    pub time_s: f64,
    /// Worker energy expenditure per second while performing this task.
    pub energy_rate: f64,
    pub hazardous: bool,
    pub high_value: bool,
}

/// Energy prices used by the electrical-energy objective: `e1` and `e2` are
/// the fixed per-second rates of the two station rows (paid for every open
/// station over the full takt), `e3` is the rate while a station is actively
/// disassembling, and `e4` the rate while it idles.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyRates {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
}

/// Immediate-precedence DAG over the tasks of one line.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecedenceGraph {
    n_tasks: usize,
    edges: BTreeSet<(TaskId, TaskId)>,
    preds: Vec<BTreeSet<TaskId>>,
    succs: Vec<BTreeSet<TaskId>>,
}

impl PrecedenceGraph {
    pub fn new(n_tasks: usize, edges: &[(TaskId, TaskId)]) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        let mut preds = vec![BTreeSet::new(); n_tasks];
        let mut succs = vec![BTreeSet::new(); n_tasks];
        for &(from, to) in edges {
            let ok = |t: TaskId| t >= 1 && (t as usize) <= n_tasks;
            if !ok(from) || !ok(to) {
                return Err(ModelError::EdgeOutOfRange { from, to, n_tasks });
            }
            if from == to {
                return Err(ModelError::SelfLoop { task: from });
            }
            if set.insert((from, to)) {
                preds[to as usize - 1].insert(from);
                succs[from as usize - 1].insert(to);
            }
        }
        Ok(Self {
            n_tasks,
            edges: set,
            preds,
            succs,
        })
    }

    pub fn n_tasks(&self) -> usize {
        self.n_tasks
    }

    pub fn edges(&self) -> impl Iterator<Item = (TaskId, TaskId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn preds(&self, task: TaskId) -> &BTreeSet<TaskId> {
        &self.preds[task as usize - 1]
    }

    pub fn succs(&self, task: TaskId) -> &BTreeSet<TaskId> {
        &self.succs[task as usize - 1]
    }

    /// Some cycle as a task path `[t0, t1, .., t0]`, or `None` if the graph
    /// is acyclic.
    pub fn find_cycle(&self) -> Option<Vec<TaskId>> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.n_tasks];
        let mut parent = vec![0 as TaskId; self.n_tasks];
        // Iterative DFS; (task, resume marker).
        for start in 1..=self.n_tasks as TaskId {
            if color[start as usize - 1] != WHITE {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((t, done)) = stack.pop() {
                let i = t as usize - 1;
                if done {
                    color[i] = BLACK;
                    continue;
                }
                if color[i] == GRAY || color[i] == BLACK {
                    continue;
                }
                color[i] = GRAY;
                stack.push((t, true));
                for &s in self.succs(t) {
                    let j = s as usize - 1;
                    if color[j] == GRAY {
                        let mut path = vec![s, t];
                        let mut cur = t;
                        while cur != s {
                            cur = parent[cur as usize - 1];
                            path.push(cur);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    if color[j] == WHITE {
                        parent[j] = t;
                        stack.push((s, false));
                    }
                }
            }
        }
        None
    }

    /// True when `seq` is a permutation of `1..=n_tasks` that lists every
    /// predecessor before its successor.
    pub fn is_topological_order(&self, seq: &[TaskId]) -> bool {
        if seq.len() != self.n_tasks {
            return false;
        }
        let mut pos = vec![usize::MAX; self.n_tasks];
        for (i, &t) in seq.iter().enumerate() {
            if t < 1 || t as usize > self.n_tasks || pos[t as usize - 1] != usize::MAX {
                return false;
            }
            pos[t as usize - 1] = i;
        }
        self.edges
            .iter()
            .all(|&(from, to)| pos[from as usize - 1] < pos[to as usize - 1])
    }

    /// Exact number of topological orders, by dynamic programming over task
    /// subsets. Rejects graphs larger than `cap` tasks; a cyclic graph has
    /// zero orders.
    pub fn count_topological_orders(&self, cap: usize) -> Result<u64, ModelError> {
        if self.n_tasks > cap {
            return Err(ModelError::TooLarge {
                what: "precedence graph",
                size: self.n_tasks,
                cap,
            });
        }
        let n = self.n_tasks;
        let pred_masks: Vec<u32> = (1..=n as TaskId)
            .map(|t| self.preds(t).iter().map(|&p| 1u32 << (p - 1)).sum())
            .collect();
        let mut count = vec![0u64; 1 << n];
        count[0] = 1;
        for mask in 0u32..(1 << n) as u32 {
            if count[mask as usize] == 0 {
                continue;
            }
            for (t, &pm) in pred_masks.iter().enumerate() {
                let bit = 1u32 << t;
                if mask & bit == 0 && pm & !mask == 0 {
                    count[(mask | bit) as usize] += count[mask as usize];
                }
            }
        }
        Ok(count[(1usize << n) - 1])
    }

    /// Every topological order, in lexicographic order. Rejects graphs larger
    /// than `cap` tasks.
    pub fn enumerate_topological_orders(&self, cap: usize) -> Result<Vec<Vec<TaskId>>, ModelError> {
        if self.n_tasks > cap {
            return Err(ModelError::TooLarge {
                what: "precedence graph",
                size: self.n_tasks,
                cap,
            });
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.n_tasks);
        let mut used = vec![false; self.n_tasks];
        self.enumerate_rec(&mut prefix, &mut used, &mut out);
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        prefix: &mut Vec<TaskId>,
        used: &mut [bool],
        out: &mut Vec<Vec<TaskId>>,
    ) {
        if prefix.len() == self.n_tasks {
            out.push(prefix.clone());
            return;
        }
        for t in 1..=self.n_tasks as TaskId {
            if used[t as usize - 1] {
                continue;
            }
            if self.preds(t).iter().all(|&p| used[p as usize - 1]) {
                used[t as usize - 1] = true;
                prefix.push(t);
                self.enumerate_rec(prefix, used, out);
                prefix.pop();
                used[t as usize - 1] = false;
            }
        }
    }
}

/// One line of the shop: its vehicle model, task list, and precedence DAG.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSpec {
    pub vehicle_model: VehicleModel,
    pub tasks: Vec<Task>,
    pub precedence: PrecedenceGraph,
}

impl LineSpec {
    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn task(&self, id: TaskId) -> &Task {
        &self.tasks[id as usize - 1]
    }

    pub fn total_work_s(&self) -> f64 {
        self.tasks.iter().map(|t| t.time_s).sum()
    }
}

/// A validated problem instance. Construction via [`Instance::new`] is the
/// only way to obtain one, so downstream code can rely on dense task ids,
/// positive times within takt, acyclic precedence, and plain-model side
/// lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    lines: [LineSpec; N_LINES],
    takt_s: f64,
    rates: EnergyRates,
}

impl Instance {
    pub fn new(
        lines: [LineSpec; N_LINES],
        takt_s: f64,
        rates: EnergyRates,
    ) -> Result<Self, ModelError> {
        if !(takt_s.is_finite() && takt_s > 0.0) {
            return Err(ModelError::BadTakt { takt_s });
        }
        for (name, value) in [
            ("e1", rates.e1),
            ("e2", rates.e2),
            ("e3", rates.e3),
            ("e4", rates.e4),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::BadRate { name, value });
            }
        }
        for (idx, line) in lines.iter().enumerate() {
            let line_no = idx + 1;
            if line_no != 2 && line.vehicle_model == VehicleModel::Mixed {
                return Err(ModelError::SideLineMixed { line: line_no });
            }
            for (position, task) in line.tasks.iter().enumerate() {
                let expected = position as TaskId + 1;
                if task.id != expected {
                    return Err(ModelError::TaskIdNotDense {
                        line: line_no,
                        position,
                        found: task.id,
                        expected,
                    });
                }
                if !(task.time_s.is_finite() && task.time_s > 0.0) {
                    return Err(ModelError::BadTaskTime {
                        line: line_no,
                        task: task.id,
                        time_s: task.time_s,
                    });
                }
                if !(task.energy_rate.is_finite() && task.energy_rate >= 0.0) {
                    return Err(ModelError::BadTaskRate {
                        line: line_no,
                        task: task.id,
                        rate: task.energy_rate,
                    });
                }
                if task.time_s > takt_s {
                    return Err(ModelError::TaskExceedsTakt {
                        line: line_no,
                        task: task.id,
                        time_s: task.time_s,
                        takt_s,
                    });
                }
            }
            if line.precedence.n_tasks() != line.tasks.len() {
                return Err(ModelError::EdgeOutOfRange {
                    from: 0,
                    to: 0,
                    n_tasks: line.tasks.len(),
                });
            }
            if let Some(cycle) = line.precedence.find_cycle() {
                return Err(ModelError::Cycle {
                    line: line_no,
                    cycle,
                });
            }
        }
        Ok(Self {
            lines,
            takt_s,
            rates,
        })
    }

    pub fn lines(&self) -> &[LineSpec; N_LINES] {
        &self.lines
    }

    /// Line by 0-based index.
    pub fn line(&self, idx: usize) -> &LineSpec {
        &self.lines[idx]
    }

    pub fn takt_s(&self) -> f64 {
        self.takt_s
    }

    pub fn rates(&self) -> EnergyRates {
        self.rates
    }

    pub fn task(&self, line: usize, id: TaskId) -> &Task {
        self.lines[line].task(id)
    }

    pub fn n_tasks_total(&self) -> usize {
        self.lines.iter().map(|l| l.n_tasks()).sum()
    }

    pub fn total_work_s(&self) -> f64 {
        self.lines.iter().map(|l| l.total_work_s()).sum()
    }

    /// Same instance with a different takt; revalidates task fit.
    pub fn with_takt(&self, takt_s: f64) -> Result<Self, ModelError> {
        Self::new(self.lines.clone(), takt_s, self.rates)
    }

    pub fn stats(&self) -> InstanceStats {
        let line_task_counts = [0, 1, 2].map(|o| self.lines[o].n_tasks());
        let line_work_s = [0, 1, 2].map(|o| self.lines[o].total_work_s());
        let min_stations = |work: f64| (work / self.takt_s).ceil() as u32;
        InstanceStats {
            line_task_counts,
            line_work_s,
            total_work_s: line_work_s.iter().sum(),
            // Line 2 work can go to either row, so only the side lines give
            // per-row lower bounds.
            min_stations_per_row: [min_stations(line_work_s[0]), min_stations(line_work_s[2])],
            min_stations_total: min_stations(line_work_s.iter().sum()),
        }
    }
}

/// Size and load summary of an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceStats {
    pub line_task_counts: [usize; N_LINES],
    pub line_work_s: [f64; N_LINES],
    pub total_work_s: f64,
    pub min_stations_per_row: [u32; N_ROWS],
    pub min_stations_total: u32,
}

impl fmt::Display for InstanceStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "tasks per line: {} / {} / {}",
            self.line_task_counts[0], self.line_task_counts[1], self.line_task_counts[2]
        )?;
        writeln!(
            f,
            "work per line: {:.0}s / {:.0}s / {:.0}s (total {:.0}s)",
            self.line_work_s[0], self.line_work_s[1], self.line_work_s[2], self.total_work_s
        )?;
        write!(
            f,
            "station lower bounds: row1 >= {}, row2 >= {}, total >= {}",
            self.min_stations_per_row[0], self.min_stations_per_row[1], self.min_stations_total
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(id: TaskId, time_s: f64) -> Task {
        Task {
            id,
            time_s,
            energy_rate: 1.0,
            hazardous: false,
            high_value: false,
        }
    }

    fn plain_line(times: &[f64], edges: &[(TaskId, TaskId)], model: VehicleModel) -> LineSpec {
        let tasks: Vec<Task> = times
            .iter()
            .enumerate()
            .map(|(i, &t)| task(i as TaskId + 1, t))
            .collect();
        LineSpec {
            vehicle_model: model,
            tasks,
            precedence: PrecedenceGraph::new(times.len(), edges).unwrap(),
        }
    }

    fn rates() -> EnergyRates {
        EnergyRates {
            e1: 20.0,
            e2: 40.0,
            e3: 90.0,
            e4: 55.0,
        }
    }

    fn tiny_instance() -> Instance {
        Instance::new(
            [
                plain_line(&[100.0, 200.0], &[(1, 2)], VehicleModel::Fuel),
                plain_line(&[150.0], &[], VehicleModel::Mixed),
                plain_line(&[120.0], &[], VehicleModel::PureElectric),
            ],
            650.0,
            rates(),
        )
        .unwrap()
    }

    #[test]
    fn valid_instance_passes() {
        let inst = tiny_instance();
        assert_eq!(inst.n_tasks_total(), 4);
        assert_eq!(inst.total_work_s(), 570.0);
    }

    #[test]
    fn rejects_mixed_side_line() {
        let err = Instance::new(
            [
                plain_line(&[100.0], &[], VehicleModel::Mixed),
                plain_line(&[100.0], &[], VehicleModel::Mixed),
                plain_line(&[100.0], &[], VehicleModel::PureElectric),
            ],
            650.0,
            rates(),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::SideLineMixed { line: 1 }));
    }

    #[test]
    fn rejects_task_longer_than_takt() {
        let err = Instance::new(
            [
                plain_line(&[700.0], &[], VehicleModel::Fuel),
                plain_line(&[], &[], VehicleModel::Mixed),
                plain_line(&[], &[], VehicleModel::PureElectric),
            ],
            650.0,
            rates(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ModelError::TaskExceedsTakt {
                line: 1,
                task: 1,
                ..
            }
        ));
    }

    #[test]
    fn rejects_nonpositive_time_and_bad_rate() {
        let err = Instance::new(
            [
                plain_line(&[0.0], &[], VehicleModel::Fuel),
                plain_line(&[], &[], VehicleModel::Mixed),
                plain_line(&[], &[], VehicleModel::PureElectric),
            ],
            650.0,
            rates(),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::BadTaskTime { .. }));

        let err = Instance::new(
            [
                plain_line(&[100.0], &[], VehicleModel::Fuel),
                plain_line(&[], &[], VehicleModel::Mixed),
                plain_line(&[], &[], VehicleModel::PureElectric),
            ],
            650.0,
            EnergyRates {
                e3: -1.0,
                ..rates()
            },
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::BadRate { name: "e3", .. }));
    }

    #[test]
    fn rejects_sparse_task_ids() {
        let line = LineSpec {
            vehicle_model: VehicleModel::Fuel,
            tasks: vec![task(1, 100.0), task(3, 100.0)],
            precedence: PrecedenceGraph::new(2, &[]).unwrap(),
        };
        let err = Instance::new(
            [
                line,
                plain_line(&[], &[], VehicleModel::Mixed),
                plain_line(&[], &[], VehicleModel::PureElectric),
            ],
            650.0,
            rates(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ModelError::TaskIdNotDense {
                line: 1,
                position: 1,
                found: 3,
                expected: 2,
            }
        ));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(matches!(
            PrecedenceGraph::new(3, &[(1, 4)]),
            Err(ModelError::EdgeOutOfRange { .. })
        ));
        assert!(matches!(
            PrecedenceGraph::new(3, &[(0, 1)]),
            Err(ModelError::EdgeOutOfRange { .. })
        ));
        assert!(matches!(
            PrecedenceGraph::new(3, &[(2, 2)]),
            Err(ModelError::SelfLoop { task: 2 })
        ));
    }

    #[test]
    fn cycle_is_detected_with_witness() {
        let g = PrecedenceGraph::new(4, &[(1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        let cycle = g.find_cycle().unwrap();
        assert!(cycle.len() >= 3);
        assert_eq!(cycle.first(), cycle.last());
        for w in cycle.windows(2) {
            assert!(g.succs(w[0]).contains(&w[1]));
        }

        let err = Instance::new(
            [
                LineSpec {
                    vehicle_model: VehicleModel::Fuel,
                    tasks: (1..=4).map(|i| task(i, 100.0)).collect(),
                    precedence: g,
                },
                PrecedenceGraph::new(0, &[])
                    .map(|p| LineSpec {
                        vehicle_model: VehicleModel::Mixed,
                        tasks: vec![],
                        precedence: p,
                    })
                    .unwrap(),
                PrecedenceGraph::new(0, &[])
                    .map(|p| LineSpec {
                        vehicle_model: VehicleModel::PureElectric,
                        tasks: vec![],
                        precedence: p,
                    })
                    .unwrap(),
            ],
            650.0,
            rates(),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::Cycle { line: 1, .. }));
    }

    #[test]
    fn acyclic_graph_has_no_cycle() {
        let g = PrecedenceGraph::new(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(g.find_cycle(), None);
    }

    #[test]
    fn topological_order_check() {
        let g = PrecedenceGraph::new(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        assert!(g.is_topological_order(&[1, 2, 3, 4]));
        assert!(g.is_topological_order(&[1, 3, 2, 4]));
        assert!(!g.is_topological_order(&[2, 1, 3, 4]));
        assert!(!g.is_topological_order(&[1, 2, 3]));
        assert!(!g.is_topological_order(&[1, 2, 2, 4]));
    }

    /// Oracle for the counting DP: filter all permutations.
    fn count_by_permutation_filter(g: &PrecedenceGraph) -> u64 {
        fn rec(g: &PrecedenceGraph, prefix: &mut Vec<TaskId>, used: &mut [bool]) -> u64 {
            if prefix.len() == g.n_tasks() {
                return if g.is_topological_order(prefix) { 1 } else { 0 };
            }
            let mut total = 0;
            for t in 1..=g.n_tasks() as TaskId {
                if !used[t as usize - 1] {
                    used[t as usize - 1] = true;
                    prefix.push(t);
                    total += rec(g, prefix, used);
                    prefix.pop();
                    used[t as usize - 1] = false;
                }
            }
            total
        }
        rec(g, &mut Vec::new(), &mut vec![false; g.n_tasks()])
    }

    #[test]
    fn order_count_matches_permutation_filter() {
        let cases: Vec<(usize, Vec<(TaskId, TaskId)>)> = vec![
            (0, vec![]),
            (1, vec![]),
            (3, vec![]),
            (4, vec![(1, 2), (1, 3), (2, 4), (3, 4)]),
            (5, vec![(1, 2), (2, 3), (3, 4), (4, 5)]),
            (
                6,
                vec![(1, 2), (1, 3), (3, 4), (3, 5), (2, 5), (4, 6), (5, 6)],
            ),
            (6, vec![(1, 4), (2, 5), (3, 6)]),
        ];
        for (n, edges) in cases {
            let g = PrecedenceGraph::new(n, &edges).unwrap();
            let expected = count_by_permutation_filter(&g);
            assert_eq!(
                g.count_topological_orders(TOPO_ORDER_CAP).unwrap(),
                expected,
                "n={n} edges={edges:?}"
            );
            let all = g.enumerate_topological_orders(TOPO_ORDER_CAP).unwrap();
            assert_eq!(all.len() as u64, expected);
            assert!(all.iter().all(|o| g.is_topological_order(o)));
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }

    #[test]
    fn order_count_respects_cap() {
        let g = PrecedenceGraph::new(13, &[]).unwrap();
        assert!(matches!(
            g.count_topological_orders(TOPO_ORDER_CAP),
            Err(ModelError::TooLarge {
                size: 13,
                cap: 12,
                ..
            })
        ));
    }

    #[test]
    fn cyclic_graph_has_zero_orders() {
        let g = PrecedenceGraph::new(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(g.count_topological_orders(TOPO_ORDER_CAP).unwrap(), 0);
    }

    #[test]
    fn stats_report_lower_bounds() {
        let inst = tiny_instance();
        let stats = inst.stats();
        assert_eq!(stats.line_task_counts, [2, 1, 1]);
        assert_eq!(stats.total_work_s, 570.0);
        assert_eq!(stats.min_stations_per_row, [1, 1]);
        assert_eq!(stats.min_stations_total, 1);
    }

    #[test]
    fn with_takt_revalidates() {
        let inst = tiny_instance();
        assert_eq!(inst.with_takt(500.0).unwrap().takt_s(), 500.0);
        assert!(matches!(
            inst.with_takt(150.0),
            Err(ModelError::TaskExceedsTakt { .. })
        ));
    }
}
