//! Pareto archives, front quality indicators, and a brute-force oracle.
//!
//! Indicator protocol for comparing runs: objectives are min-max normalized
//! over the union of all compared fronts, the reference point is the
//! componentwise maximum of the union front scaled by 1.1, and the IGD
//! reference front is the non-dominated subset of the union. Both choices
//! are recorded in the report.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codec::{decode, Chromosome, Schedule};
use crate::eval::{objectives, ObjectiveVector};
use crate::io::instance_hash;
use crate::model::{Instance, ModelError, TaskId, N_LINES, TOPO_ORDER_CAP};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("no runs to summarize")]
    EmptyRuns,
    #[error("front is empty")]
    EmptyFront,
    #[error("line {line} has {count} topological orders, above the cap of {cap}")]
    TooManyOrders { line: usize, count: u64, cap: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Where an archive came from: enough to rerun it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Provenance {
    pub algorithm: String,
    pub seed: u64,
    pub instance_hash: String,
}

/// A decoded solution kept alongside its objective vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedPoint {
    pub chromosome: Chromosome,
    pub schedule: Schedule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArchiveEntry {
    pub objectives: ObjectiveVector,
    pub solution: Option<SolvedPoint>,
}

/// Mutually non-dominated objective vectors with no duplicates, kept in
/// lexicographic order. Inserting keeps the first solution seen per vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoArchive {
    provenance: Provenance,
    entries: Vec<ArchiveEntry>,
}

impl ParetoArchive {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            provenance,
            entries: Vec::new(),
        }
    }

    /// Add a point unless it is dominated by or duplicates an existing one;
    /// drops the points it dominates. Returns whether it was kept.
    pub fn insert(&mut self, entry: ArchiveEntry) -> bool {
        if self.entries.iter().any(|e| {
            e.objectives.dominates(&entry.objectives) || e.objectives.approx_eq(&entry.objectives)
        }) {
            return false;
        }
        self.entries
            .retain(|e| !entry.objectives.dominates(&e.objectives));
        let pos = self
            .entries
            .partition_point(|e| e.objectives.cmp_lex(&entry.objectives).is_lt());
        self.entries.insert(pos, entry);
        true
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn vectors(&self) -> Vec<ObjectiveVector> {
        self.entries.iter().map(|e| e.objectives).collect()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry minimizing the given objective (0, 1, or 2); lexicographic
    /// order breaks ties.
    pub fn min_by_objective(&self, objective: usize) -> Option<&ArchiveEntry> {
        self.entries.iter().min_by(|a, b| {
            a.objectives.as_array()[objective]
                .total_cmp(&b.objectives.as_array()[objective])
                .then(a.objectives.cmp_lex(&b.objectives))
        })
    }

    /// True when both archives hold the same objective-vector set.
    pub fn same_vectors(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| a.objectives.approx_eq(&b.objectives))
    }
}

/// The maximal non-dominated subset of `points`, duplicates removed.
pub fn pareto_filter(points: &[ObjectiveVector]) -> ParetoArchive {
    let mut archive = ParetoArchive::new(Provenance {
        algorithm: "pareto_filter".into(),
        seed: 0,
        instance_hash: String::new(),
    });
    for &p in points {
        archive.insert(ArchiveEntry {
            objectives: p,
            solution: None,
        });
    }
    archive
}

/// Hypervolume result; points beyond the reference are excluded from the
/// measure and listed by input index.
#[derive(Clone, Debug, PartialEq)]
pub struct HvOutcome {
    pub volume: f64,
    pub excluded: Vec<usize>,
}

/// Exact dominated hypervolume of a 3-objective front against a reference
/// point, by slicing on the first objective and sweeping a 2-D staircase in
/// each slab.
pub fn hypervolume(front: &[[f64; 3]], ref_point: [f64; 3]) -> HvOutcome {
    let mut excluded = Vec::new();
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for (i, p) in front.iter().enumerate() {
        if (0..3).any(|d| p[d] > ref_point[d]) {
            excluded.push(i);
        } else {
            pts.push(*p);
        }
    }
    let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut volume = 0.0;
    for (i, &lo) in xs.iter().enumerate() {
        let hi = if i + 1 < xs.len() {
            xs[i + 1]
        } else {
            ref_point[0]
        };
        if hi <= lo {
            continue;
        }
        let active: Vec<(f64, f64)> = pts
            .iter()
            .filter(|p| p[0] <= lo)
            .map(|p| (p[1], p[2]))
            .collect();
        volume += (hi - lo) * staircase_area(active, (ref_point[1], ref_point[2]));
    }
    HvOutcome { volume, excluded }
}

/// Area dominated by 2-D points (minimization) up to the reference corner.
fn staircase_area(mut points: Vec<(f64, f64)>, ref_point: (f64, f64)) -> f64 {
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut stair: Vec<(f64, f64)> = Vec::new();
    for p in points {
        if stair.last().is_none_or(|l| p.1 < l.1) {
            stair.push(p);
        }
    }
    let mut area = 0.0;
    for (i, &(y, z)) in stair.iter().enumerate() {
        let next_y = if i + 1 < stair.len() {
            stair[i + 1].0
        } else {
            ref_point.0
        };
        area += (next_y - y) * (ref_point.1 - z);
    }
    area
}

/// Mean Euclidean distance from each reference-front point to its nearest
/// front point.
pub fn igd(front: &[[f64; 3]], reference_front: &[[f64; 3]]) -> Result<f64, AnalyticsError> {
    if front.is_empty() || reference_front.is_empty() {
        return Err(AnalyticsError::EmptyFront);
    }
    let total: f64 = reference_front
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|p| {
                    (0..3)
                        .map(|d| (r[d] - p[d]) * (r[d] - p[d]))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference_front.len() as f64)
}

/// Min-max scaling bounds shared by every front of a comparison group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupNormalization {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl GroupNormalization {
    pub fn from_points(points: &[[f64; 3]]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for p in points {
            for d in 0..3 {
                min[d] = min[d].min(p[d]);
                max[d] = max[d].max(p[d]);
            }
        }
        Some(Self { min, max })
    }

    pub fn is_degenerate(&self, d: usize) -> bool {
        self.max[d] - self.min[d] <= 0.0
    }

    /// Scale into [0, 1] per dimension; a degenerate dimension maps to 0.
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for d in 0..3 {
            if !self.is_degenerate(d) {
                out[d] = (p[d] - self.min[d]) / (self.max[d] - self.min[d]);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RunIndicators {
    pub algorithm: String,
    pub seed: u64,
    pub front_size: usize,
    pub hypervolume: f64,
    pub igd: f64,
    /// Points that fell beyond the reference point and were excluded.
    pub excluded_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ObjectiveSummary {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    /// Per objective (station count, worker energy, electrical energy).
    pub per_objective: [ObjectiveSummary; 3],
}

/// Quality indicators for a group of runs, plus everything needed to audit
/// them: the union reference front and the normalization and reference
/// point in raw objective units.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorReport {
    pub runs: Vec<RunIndicators>,
    pub algorithms: Vec<AlgorithmSummary>,
    pub reference_front: Vec<ObjectiveVector>,
    pub normalization_min: [f64; 3],
    pub normalization_max: [f64; 3],
    pub reference_point_raw: [f64; 3],
    pub reference_point_normalized: [f64; 3],
}

pub fn summarize(runs: &[ParetoArchive]) -> Result<IndicatorReport, AnalyticsError> {
    if runs.is_empty() {
        return Err(AnalyticsError::EmptyRuns);
    }
    let all_vectors: Vec<ObjectiveVector> = runs.iter().flat_map(|r| r.vectors()).collect();
    if all_vectors.is_empty() {
        return Err(AnalyticsError::EmptyFront);
    }
    let all_points: Vec<[f64; 3]> = all_vectors.iter().map(|v| v.as_array()).collect();
    let norm = GroupNormalization::from_points(&all_points).expect("points checked non-empty");

    let reference_front = pareto_filter(&all_vectors).vectors();
    let mut ref_raw = [f64::NEG_INFINITY; 3];
    for v in &reference_front {
        let a = v.as_array();
        for d in 0..3 {
            ref_raw[d] = ref_raw[d].max(a[d]);
        }
    }
    let ref_raw = ref_raw.map(|x| x * 1.1);
    let mut ref_norm = norm.apply(ref_raw);
    for (d, r) in ref_norm.iter_mut().enumerate() {
        if norm.is_degenerate(d) {
            *r = 1.0;
        }
    }
    let reference_front_norm: Vec<[f64; 3]> = reference_front
        .iter()
        .map(|v| norm.apply(v.as_array()))
        .collect();

    let mut run_rows = Vec::with_capacity(runs.len());
    for run in runs {
        let pts: Vec<[f64; 3]> = run
            .vectors()
            .iter()
            .map(|v| norm.apply(v.as_array()))
            .collect();
        let hv = hypervolume(&pts, ref_norm);
        let igd_value = igd(&pts, &reference_front_norm)?;
        run_rows.push(RunIndicators {
            algorithm: run.provenance().algorithm.clone(),
            seed: run.provenance().seed,
            front_size: run.len(),
            hypervolume: hv.volume,
            igd: igd_value,
            excluded_points: hv.excluded.len(),
        });
    }

    let mut algorithms: Vec<AlgorithmSummary> = Vec::new();
    for run in runs {
        let name = &run.provenance().algorithm;
        if algorithms.iter().any(|a| &a.algorithm == name) {
            continue;
        }
        let group_points: Vec<[f64; 3]> = runs
            .iter()
            .filter(|r| &r.provenance().algorithm == name)
            .flat_map(|r| r.vectors())
            .map(|v| v.as_array())
            .collect();
        let per_objective = [0, 1, 2].map(|d| {
            let values: Vec<f64> = group_points.iter().map(|p| p[d]).collect();
            ObjectiveSummary {
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                mean: values.iter().sum::<f64>() / values.len() as f64,
            }
        });
        algorithms.push(AlgorithmSummary {
            algorithm: name.clone(),
            per_objective,
        });
    }

    Ok(IndicatorReport {
        runs: run_rows,
        algorithms,
        reference_front,
        normalization_min: norm.min,
        normalization_max: norm.max,
        reference_point_raw: ref_raw,
        reference_point_normalized: ref_norm,
    })
}

/// Exhaustive oracle: enumerate every feasible order combination across the
/// three lines, decode each `decode_samples` times, and keep the
/// non-dominated union. Guarded to instances with at most `MAX_ORDERS`
/// topological orders per line.
pub const MAX_ORDERS: u64 = 200;

pub fn brute_force_front(
    inst: &Instance,
    decode_samples: usize,
    rng: &mut impl Rng,
) -> Result<ParetoArchive, AnalyticsError> {
    let mut per_line: Vec<Vec<Vec<TaskId>>> = Vec::with_capacity(N_LINES);
    for (o, line) in inst.lines().iter().enumerate() {
        let count = line.precedence.count_topological_orders(TOPO_ORDER_CAP)?;
        if count > MAX_ORDERS {
            return Err(AnalyticsError::TooManyOrders {
                line: o + 1,
                count,
                cap: MAX_ORDERS,
            });
        }
        per_line.push(
            line.precedence
                .enumerate_topological_orders(TOPO_ORDER_CAP)?,
        );
    }

    let mut archive = ParetoArchive::new(Provenance {
        algorithm: "brute_force".into(),
        seed: 0,
        instance_hash: instance_hash(inst),
    });
    for s0 in &per_line[0] {
        for s1 in &per_line[1] {
            for s2 in &per_line[2] {
                let c = Chromosome {
                    sequences: [s0.clone(), s1.clone(), s2.clone()],
                };
                for _ in 0..decode_samples.max(1) {
                    let mut decode_rng = ChaCha8Rng::seed_from_u64(rng.random());
                    let s = decode(&c, inst, &mut decode_rng);
                    archive.insert(ArchiveEntry {
                        objectives: objectives(&s, inst),
                        solution: Some(SolvedPoint {
                            chromosome: c.clone(),
                            schedule: s,
                        }),
                    });
                }
            }
        }
    }
    Ok(archive)
}
