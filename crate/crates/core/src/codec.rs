//! Sequence representation of solutions and the two halves of the codec:
//! an encoder that grows one feasible task order per line under priority
//! rules, and a decoder that turns the three orders into a station schedule
//! on the two shared rows.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::model::{Instance, LineSpec, PrecedenceGraph, TaskId, N_LINES, N_ROWS};

/// One task order per line; feasible when each is a topological order of
/// its line's precedence graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chromosome {
    pub sequences: [Vec<TaskId>; N_LINES],
}

impl Chromosome {
    pub fn is_feasible(&self, inst: &Instance) -> bool {
        (0..N_LINES).all(|o| {
            inst.line(o)
                .precedence
                .is_topological_order(&self.sequences[o])
        })
    }
}

/// How often each task has been picked by the encoder across a run. Ties in
/// the priority rules go to rarely visited tasks, which spreads successive
/// encodes over different feasible orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisitLedger {
    counts: [Vec<u64>; N_LINES],
}

impl VisitLedger {
    pub fn new(inst: &Instance) -> Self {
        Self {
            counts: [0, 1, 2].map(|o| vec![0; inst.line(o).n_tasks()]),
        }
    }

    pub fn count(&self, line: usize, task: TaskId) -> u64 {
        self.counts[line][task as usize - 1]
    }

    pub fn record(&mut self, line: usize, task: TaskId) {
        self.counts[line][task as usize - 1] += 1;
    }

    pub fn fits(&self, inst: &Instance) -> bool {
        (0..N_LINES).all(|o| self.counts[o].len() == inst.line(o).n_tasks())
    }
}

/// Which encoder priority rules are active. All on by default; individual
/// rules can be switched off to observe their effect.
#[derive(Clone, Copy, Debug)]
pub struct EncodePolicy {
    pub hazard_first: bool,
    pub high_value_next: bool,
    pub balance_visits: bool,
}

impl Default for EncodePolicy {
    fn default() -> Self {
        Self {
            hazard_first: true,
            high_value_next: true,
            balance_visits: true,
        }
    }
}

fn pick_next(
    line: &LineSpec,
    line_idx: usize,
    candidates: &[TaskId],
    visits: &VisitLedger,
    policy: &EncodePolicy,
    rng: &mut impl Rng,
) -> TaskId {
    let mut pool: Vec<TaskId> = candidates.to_vec();
    if policy.hazard_first {
        let hazardous: Vec<TaskId> = pool
            .iter()
            .copied()
            .filter(|&t| line.task(t).hazardous)
            .collect();
        if !hazardous.is_empty() {
            pool = hazardous;
        }
    }
    if policy.high_value_next {
        let valuable: Vec<TaskId> = pool
            .iter()
            .copied()
            .filter(|&t| line.task(t).high_value)
            .collect();
        if !valuable.is_empty() {
            pool = valuable;
        }
    }
    if policy.balance_visits {
        let min = pool
            .iter()
            .map(|&t| visits.count(line_idx, t))
            .min()
            .expect("pool is non-empty");
        pool.retain(|&t| visits.count(line_idx, t) == min);
    }
    *pool.choose(rng).expect("pool is non-empty")
}

/// Extends `prefix` (which must be precedence-feasible) to a full order for
/// the line, picking each next task by the priority rules and recording it
/// in the ledger.
pub fn complete_prefix(
    line: &LineSpec,
    line_idx: usize,
    prefix: &[TaskId],
    visits: &mut VisitLedger,
    policy: &EncodePolicy,
    rng: &mut impl Rng,
) -> Vec<TaskId> {
    let n = line.n_tasks();
    let mut placed = vec![false; n];
    for &t in prefix {
        assert!(
            line.precedence
                .preds(t)
                .iter()
                .all(|&p| placed[p as usize - 1]),
            "prefix violates precedence at task {t}"
        );
        placed[t as usize - 1] = true;
    }
    let mut seq = prefix.to_vec();
    while seq.len() < n {
        let candidates: Vec<TaskId> = (1..=n as TaskId)
            .filter(|&t| {
                !placed[t as usize - 1]
                    && line
                        .precedence
                        .preds(t)
                        .iter()
                        .all(|&p| placed[p as usize - 1])
            })
            .collect();
        let next = pick_next(line, line_idx, &candidates, visits, policy, rng);
        visits.record(line_idx, next);
        placed[next as usize - 1] = true;
        seq.push(next);
    }
    seq
}

pub fn encode_line(
    line: &LineSpec,
    line_idx: usize,
    visits: &mut VisitLedger,
    policy: &EncodePolicy,
    rng: &mut impl Rng,
) -> Vec<TaskId> {
    complete_prefix(line, line_idx, &[], visits, policy, rng)
}

pub fn encode(
    inst: &Instance,
    visits: &mut VisitLedger,
    policy: &EncodePolicy,
    rng: &mut impl Rng,
) -> Chromosome {
    Chromosome {
        sequences: [0, 1, 2].map(|o| encode_line(inst.line(o), o, visits, policy, rng)),
    }
}

/// A random topological order with no priority rules: at every step one of
/// the ready tasks is drawn uniformly.
pub fn random_topological_order(g: &PrecedenceGraph, rng: &mut impl Rng) -> Vec<TaskId> {
    let n = g.n_tasks();
    let mut placed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    while seq.len() < n {
        let candidates: Vec<TaskId> = (1..=n as TaskId)
            .filter(|&t| {
                !placed[t as usize - 1] && g.preds(t).iter().all(|&p| placed[p as usize - 1])
            })
            .collect();
        let next = *candidates
            .choose(rng)
            .expect("an acyclic graph always has a ready task");
        placed[next as usize - 1] = true;
        seq.push(next);
    }
    seq
}

/// How the decoder opens new stations for the middle line, which may use
/// either row. The default draws the row at random; the deterministic
/// variant picks the row whose current station is least loaded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NewRowRule {
    #[default]
    Random,
    LeastLoaded,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DecodePolicy {
    pub new_row: NewRowRule,
}

/// A task placed on a station, tagged with its line (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScheduledTask {
    pub line: usize,
    pub task: TaskId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Station {
    pub tasks: Vec<ScheduledTask>,
    pub load_s: f64,
}

/// Stations per row, in the order they were opened. Stations are shared:
/// a row-1 station may hold tasks from lines 1 and 2, a row-2 station from
/// lines 2 and 3.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub rows: [Vec<Station>; N_ROWS],
}

impl Schedule {
    pub fn station_count(&self) -> u32 {
        self.rows.iter().map(|r| r.len() as u32).sum()
    }

    pub fn row_station_counts(&self) -> [u32; N_ROWS] {
        [self.rows[0].len() as u32, self.rows[1].len() as u32]
    }

    pub fn total_load_s(&self) -> f64 {
        self.iter_stations().map(|(_, _, s)| s.load_s).sum()
    }

    /// All stations as (row, station index within row, station), both 0-based.
    pub fn iter_stations(&self) -> impl Iterator<Item = (usize, usize, &Station)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, stations)| stations.iter().enumerate().map(move |(i, s)| (r, i, s)))
    }
}

/// Rows a line's tasks may go to: line 1 only row 1, line 3 only row 2, the
/// middle line both.
pub fn rows_for_line(line: usize) -> &'static [usize] {
    match line {
        0 => &[0],
        1 => &[0, 1],
        2 => &[1],
        _ => panic!("line index {line} out of range"),
    }
}

pub fn decode_with(
    c: &Chromosome,
    inst: &Instance,
    policy: &DecodePolicy,
    rng: &mut impl Rng,
) -> Schedule {
    let takt = inst.takt_s();
    let mut rows: [Vec<Station>; N_ROWS] = [Vec::new(), Vec::new()];
    let mut next = [0usize; N_LINES];
    loop {
        let open: Vec<usize> = (0..N_LINES)
            .filter(|&o| next[o] < c.sequences[o].len())
            .collect();
        let Some(&line) = open.choose(rng) else {
            break;
        };
        let task = c.sequences[line][next[line]];
        next[line] += 1;
        let time = inst.task(line, task).time_s;

        // Prefer the open station that would be left with the least slack;
        // only the newest station of each eligible row is still open.
        let mut best: Option<(f64, Vec<usize>)> = None;
        for &r in rows_for_line(line) {
            let Some(station) = rows[r].last() else {
                continue;
            };
            let after = station.load_s + time;
            if after > takt {
                continue;
            }
            let slack = takt - after;
            match &mut best {
                Some((s, rs)) if (slack - *s).abs() < 1e-9 => rs.push(r),
                Some((s, rs)) if slack < *s => {
                    *s = slack;
                    *rs = vec![r];
                }
                None => best = Some((slack, vec![r])),
                _ => {}
            }
        }
        let target_row = match best {
            Some((_, rs)) => *rs.choose(rng).expect("non-empty tie set"),
            None => {
                let eligible = rows_for_line(line);
                let r = if eligible.len() == 1 {
                    eligible[0]
                } else {
                    match policy.new_row {
                        NewRowRule::Random => *eligible.choose(rng).expect("two rows"),
                        NewRowRule::LeastLoaded => {
                            let load = |r: usize| rows[r].last().map_or(0.0, |s| s.load_s);
                            if load(eligible[1]) < load(eligible[0]) {
                                eligible[1]
                            } else {
                                eligible[0]
                            }
                        }
                    }
                };
                rows[r].push(Station {
                    tasks: Vec::new(),
                    load_s: 0.0,
                });
                r
            }
        };
        let station = rows[target_row].last_mut().expect("station just ensured");
        station.tasks.push(ScheduledTask { line, task });
        station.load_s += time;
    }
    Schedule { rows }
}

pub fn decode(c: &Chromosome, inst: &Instance, rng: &mut impl Rng) -> Schedule {
    decode_with(c, inst, &DecodePolicy::default(), rng)
}

/// Where each (line, task) pair sits in a schedule. Tolerates duplicate and
/// missing placements so constraint checks can report them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssignmentMatrix {
    map: BTreeMap<(usize, TaskId), Vec<(usize, usize)>>,
}

impl AssignmentMatrix {
    /// Stations holding this task, as (row, station index), both 0-based.
    pub fn placements(&self, line: usize, task: TaskId) -> &[(usize, usize)] {
        self.map.get(&(line, task)).map_or(&[], |v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, TaskId), &Vec<(usize, usize)>)> {
        self.map.iter()
    }
}

pub fn schedule_to_assignment(s: &Schedule) -> AssignmentMatrix {
    let mut map: BTreeMap<(usize, TaskId), Vec<(usize, usize)>> = BTreeMap::new();
    for (row, idx, station) in s.iter_stations() {
        for t in &station.tasks {
            map.entry((t.line, t.task)).or_default().push((row, idx));
        }
    }
    AssignmentMatrix { map }
}

/// Groups a graph's tasks into cells with identical immediate predecessor
/// and successor sets. Swapping two tasks of one cell anywhere in a
/// topological order yields another topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCells {
    cells: Vec<Vec<TaskId>>,
    cell_index: Vec<usize>,
}

pub fn equivalence_cells(g: &PrecedenceGraph) -> EquivalenceCells {
    let mut groups: BTreeMap<(Vec<TaskId>, Vec<TaskId>), Vec<TaskId>> = BTreeMap::new();
    for t in 1..=g.n_tasks() as TaskId {
        let key = (
            g.preds(t).iter().copied().collect(),
            g.succs(t).iter().copied().collect(),
        );
        groups.entry(key).or_default().push(t);
    }
    let mut cells: Vec<Vec<TaskId>> = groups.into_values().collect();
    cells.sort();
    let mut cell_index = vec![0; g.n_tasks()];
    for (i, cell) in cells.iter().enumerate() {
        for &t in cell {
            cell_index[t as usize - 1] = i;
        }
    }
    EquivalenceCells { cells, cell_index }
}

impl EquivalenceCells {
    pub fn cells(&self) -> &[Vec<TaskId>] {
        &self.cells
    }

    pub fn non_singleton(&self) -> Vec<&[TaskId]> {
        self.cells
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.as_slice())
            .collect()
    }

    pub fn same_cell(&self, a: TaskId, b: TaskId) -> bool {
        self.cell_index[a as usize - 1] == self.cell_index[b as usize - 1]
    }
}
