//! The INSGA-III solver: an NSGA-III generational loop (reference points,
//! non-dominated sorting, niche selection) whose variation operators work on
//! interchangeable-task cells and whose initialization and mutation are
//! steered by the shared visit ledger.
//!
//! The generational `Engine` is operator-agnostic and is reused by the
//! comparison algorithms; only the `Variation` implementation differs.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analytics::{ArchiveEntry, ParetoArchive, Provenance, SolvedPoint};
use crate::codec::{
    complete_prefix, encode, equivalence_cells, Chromosome, EncodePolicy, EquivalenceCells,
    Schedule, VisitLedger,
};
use crate::eval::{evaluate, ObjectiveVector};
use crate::io::instance_hash;
use crate::model::{Instance, TaskId, N_LINES};
use crate::niching;
use crate::rank::nondominated_sort;
use crate::refpoints::{reference_points, ReferencePointSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvoConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Reference-point divisions per objective axis.
    pub divisions: usize,
    pub seed: u64,
}

impl Default for EvoConfig {
    fn default() -> Self {
        Self {
            population: 200,
            generations: 20,
            crossover_prob: 0.8,
            mutation_prob: 0.1,
            divisions: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("population size must be at least 1")]
    ZeroPopulation,
    #[error("generation count must be at least 1")]
    ZeroGenerations,
    #[error("{name} must lie in [0, 1], got {value}")]
    BadProbability { name: &'static str, value: f64 },
    #[error("reference-point divisions must be at least 1")]
    ZeroDivisions,
    #[error("{name} must be a finite non-negative number, got {value}")]
    BadFactor { name: &'static str, value: f64 },
    #[error("visit ledger does not match the instance task counts")]
    LedgerMismatch,
}

impl EvoConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population == 0 {
            return Err(ConfigError::ZeroPopulation);
        }
        if self.generations == 0 {
            return Err(ConfigError::ZeroGenerations);
        }
        for (name, value) in [
            ("crossover probability", self.crossover_prob),
            ("mutation probability", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::BadProbability { name, value });
            }
        }
        if self.divisions == 0 {
            return Err(ConfigError::ZeroDivisions);
        }
        Ok(())
    }
}

/// A population member with its decoded schedule and objectives cached.
#[derive(Clone, Debug)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub schedule: Schedule,
    pub objectives: ObjectiveVector,
}

// Each random decision in a run draws from its own stream so that results
// do not depend on evaluation order: streams are derived from the run seed,
// a lane, the generation, and the index within the generation.
const LANE_INIT: u64 = 1;
const LANE_PAIR: u64 = 2;
const LANE_CHILD: u64 = 3;
const LANE_TOURNAMENT: u64 = 4;
const LANE_SELECT: u64 = 5;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn stream(seed: u64, lane: u64, generation: u64, index: u64) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for v in [lane, generation, index] {
        h = splitmix64(h ^ v.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// FNV-1a over the run seed and a word stream; used where a decode must be
/// a pure function of a position's content rather than of its index.
pub(crate) fn content_seed(run_seed: u64, parts: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
    };
    eat(run_seed);
    for p in parts {
        eat(p);
    }
    h
}

/// Exchange two interchangeable tasks in a sequence. Tasks between them
/// keep their positions (the intervening block stays attached to the
/// earlier slot), so the net effect is swapping the chosen pair.
pub(crate) fn swap_same_cell(seq: &mut [TaskId], a: TaskId, b: TaskId) {
    let i = seq.iter().position(|&x| x == a).expect("task present");
    let j = seq.iter().position(|&x| x == b).expect("task present");
    seq.swap(i, j);
}

/// Operator set plugged into the generational engine. `pair_rng` drives
/// choices shared by both children (crossover); each child's own stream
/// drives its mutation and, afterwards, its decode.
pub(crate) trait Variation {
    fn initial(&mut self, rng: &mut ChaCha8Rng) -> Chromosome;
    fn pair(
        &mut self,
        a: &Chromosome,
        b: &Chromosome,
        pair_rng: &mut ChaCha8Rng,
        child_rngs: [&mut ChaCha8Rng; 2],
    ) -> (Chromosome, Chromosome);
}

/// Generational loop shared by all population-based solvers here: binary
/// tournament on (rank, niche count), variation, evaluation, environmental
/// selection over parents plus offspring, and a cumulative elite archive of
/// every vector ever evaluated.
pub(crate) struct Engine<'a, V: Variation> {
    inst: &'a Instance,
    cfg: EvoConfig,
    refs: ReferencePointSet,
    pub(crate) variation: V,
    population: Vec<Individual>,
    /// Per population slot: (rank, niche count) from the last selection.
    meta: Vec<(usize, usize)>,
    archive: ParetoArchive,
    generation: usize,
}

impl<'a, V: Variation> Engine<'a, V> {
    pub(crate) fn new(
        inst: &'a Instance,
        cfg: EvoConfig,
        variation: V,
        algorithm: &str,
    ) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let mut engine = Self {
            inst,
            cfg,
            refs: reference_points(3, cfg.divisions),
            variation,
            population: Vec::with_capacity(cfg.population),
            meta: Vec::new(),
            archive: ParetoArchive::new(Provenance {
                algorithm: algorithm.into(),
                seed: cfg.seed,
                instance_hash: instance_hash(inst),
            }),
            generation: 0,
        };
        for idx in 0..cfg.population {
            let mut rng = stream(cfg.seed, LANE_INIT, 0, idx as u64);
            let chromosome = engine.variation.initial(&mut rng);
            let ind = make_individual(chromosome, inst, &mut rng);
            engine.record(&ind);
            engine.population.push(ind);
        }
        engine.reselect(engine.population.len(), 0);
        Ok(engine)
    }

    fn record(&mut self, ind: &Individual) {
        self.archive.insert(ArchiveEntry {
            objectives: ind.objectives,
            solution: Some(SolvedPoint {
                chromosome: ind.chromosome.clone(),
                schedule: ind.schedule.clone(),
            }),
        });
    }

    /// Environmental selection of `n` survivors from the current
    /// population, refreshing the (rank, niche count) metadata.
    fn reselect(&mut self, n: usize, generation: u64) {
        let vectors: Vec<ObjectiveVector> = self.population.iter().map(|i| i.objectives).collect();
        let points: Vec<[f64; 3]> = vectors.iter().map(|v| v.as_array()).collect();
        let fronts = nondominated_sort(&vectors);
        let mut rng = stream(self.cfg.seed, LANE_SELECT, generation, 0);
        let sel = niching::select(&points, &fronts, &self.refs, n, &mut rng);
        self.population = sel
            .indices
            .iter()
            .map(|&i| self.population[i].clone())
            .collect();
        self.meta = sel.meta;
    }

    fn tournament(&self, rng: &mut ChaCha8Rng) -> usize {
        let n = self.population.len();
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        match self.meta[a].cmp(&self.meta[b]) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => {
                if rng.random_bool(0.5) {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub(crate) fn step(&mut self) {
        let gen = (self.generation + 1) as u64;
        let n = self.population.len();
        let mut trng = stream(self.cfg.seed, LANE_TOURNAMENT, gen, 0);
        let mut offspring: Vec<Individual> = Vec::with_capacity(n + 1);
        for pair_idx in 0..n.div_ceil(2) {
            let ia = self.tournament(&mut trng);
            let ib = self.tournament(&mut trng);
            let mut pair_rng = stream(self.cfg.seed, LANE_PAIR, gen, pair_idx as u64);
            let mut ra = stream(self.cfg.seed, LANE_CHILD, gen, 2 * pair_idx as u64);
            let mut rb = stream(self.cfg.seed, LANE_CHILD, gen, 2 * pair_idx as u64 + 1);
            let (ca, cb) = self.variation.pair(
                &self.population[ia].chromosome,
                &self.population[ib].chromosome,
                &mut pair_rng,
                [&mut ra, &mut rb],
            );
            for (child, parent, mut crng) in [(ca, ia, ra), (cb, ib, rb)] {
                if offspring.len() == n {
                    break;
                }
                // An untouched child is the parent: keep its cached decode
                // so no-op variation cannot drift the objective vector.
                let ind = if child == self.population[parent].chromosome {
                    self.population[parent].clone()
                } else {
                    make_individual(child, self.inst, &mut crng)
                };
                self.record(&ind);
                offspring.push(ind);
            }
        }
        self.population.append(&mut offspring);
        self.reselect(n, gen);
        self.generation += 1;
    }

    pub(crate) fn run(&mut self) {
        for _ in 0..self.cfg.generations {
            self.step();
        }
    }

    pub(crate) fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    pub(crate) fn population(&self) -> &[Individual] {
        &self.population
    }

    pub(crate) fn generation(&self) -> usize {
        self.generation
    }
}

fn make_individual(chromosome: Chromosome, inst: &Instance, rng: &mut ChaCha8Rng) -> Individual {
    let (schedule, objectives) = evaluate(&chromosome, inst, rng);
    Individual {
        chromosome,
        schedule,
        objectives,
    }
}

/// Ledger-guided operators: priority-rule initialization, same-cell pair
/// exchange for crossover, and keep-prefix/re-encode-suffix mutation.
pub(crate) struct LedgerVariation<'a> {
    inst: &'a Instance,
    policy: EncodePolicy,
    ledger: VisitLedger,
    cells: Vec<EquivalenceCells>,
    pc: f64,
    pm: f64,
    /// Crossover attempts dropped because no line cell holds two tasks.
    no_eligible_cell: u64,
}

impl<'a> LedgerVariation<'a> {
    pub(crate) fn new(inst: &'a Instance, pc: f64, pm: f64, ledger: VisitLedger) -> Self {
        Self {
            inst,
            policy: EncodePolicy::default(),
            ledger,
            cells: inst
                .lines()
                .iter()
                .map(|l| equivalence_cells(&l.precedence))
                .collect(),
            pc,
            pm,
            no_eligible_cell: 0,
        }
    }

    fn crossover(&mut self, a: &mut Chromosome, b: &mut Chromosome, rng: &mut ChaCha8Rng) {
        for line in 0..N_LINES {
            if self.inst.line(line).n_tasks() == 0 || !rng.random_bool(self.pc) {
                continue;
            }
            let eligible = self.cells[line].non_singleton();
            let Some(cell) = eligible.choose(rng) else {
                self.no_eligible_cell += 1;
                continue;
            };
            // Both children exchange the same pair, keeping them symmetric.
            let i = rng.random_range(0..cell.len());
            let j = (i + rng.random_range(1..cell.len())) % cell.len();
            swap_same_cell(&mut a.sequences[line], cell[i], cell[j]);
            swap_same_cell(&mut b.sequences[line], cell[i], cell[j]);
        }
    }

    fn mutate(&mut self, c: &mut Chromosome, rng: &mut ChaCha8Rng) {
        for line in 0..N_LINES {
            if self.inst.line(line).n_tasks() == 0 || !rng.random_bool(self.pm) {
                continue;
            }
            let cell = self.cells[line]
                .cells()
                .choose(rng)
                .expect("non-empty line has cells");
            let task = *cell.choose(rng).expect("cells are non-empty");
            let pos = c.sequences[line]
                .iter()
                .position(|&t| t == task)
                .expect("chromosome holds every task");
            let prefix = c.sequences[line][..=pos].to_vec();
            c.sequences[line] = complete_prefix(
                self.inst.line(line),
                line,
                &prefix,
                &mut self.ledger,
                &self.policy,
                rng,
            );
        }
    }
}

impl Variation for LedgerVariation<'_> {
    fn initial(&mut self, rng: &mut ChaCha8Rng) -> Chromosome {
        encode(self.inst, &mut self.ledger, &self.policy, rng)
    }

    fn pair(
        &mut self,
        a: &Chromosome,
        b: &Chromosome,
        pair_rng: &mut ChaCha8Rng,
        child_rngs: [&mut ChaCha8Rng; 2],
    ) -> (Chromosome, Chromosome) {
        let mut ca = a.clone();
        let mut cb = b.clone();
        self.crossover(&mut ca, &mut cb, pair_rng);
        let [ra, rb] = child_rngs;
        self.mutate(&mut ca, ra);
        self.mutate(&mut cb, rb);
        (ca, cb)
    }
}

/// The full solver with ledger-guided operators.
pub struct Insga3<'a> {
    engine: Engine<'a, LedgerVariation<'a>>,
}

impl<'a> Insga3<'a> {
    pub fn new(inst: &'a Instance, cfg: &EvoConfig) -> Result<Self, ConfigError> {
        Self::with_ledger(inst, cfg, VisitLedger::new(inst))
    }

    /// Start from an inherited visit ledger so a replan keeps steering
    /// initialization away from task orders already explored.
    pub fn with_ledger(
        inst: &'a Instance,
        cfg: &EvoConfig,
        ledger: VisitLedger,
    ) -> Result<Self, ConfigError> {
        if !ledger.fits(inst) {
            return Err(ConfigError::LedgerMismatch);
        }
        let variation = LedgerVariation::new(inst, cfg.crossover_prob, cfg.mutation_prob, ledger);
        Ok(Self {
            engine: Engine::new(inst, *cfg, variation, "insga3")?,
        })
    }

    pub fn step(&mut self) {
        self.engine.step();
    }

    pub fn run(&mut self) {
        self.engine.run();
    }

    pub fn archive(&self) -> &ParetoArchive {
        self.engine.archive()
    }

    pub fn population(&self) -> &[Individual] {
        self.engine.population()
    }

    pub fn generation(&self) -> usize {
        self.engine.generation()
    }

    pub fn ledger(&self) -> &VisitLedger {
        &self.engine.variation.ledger
    }

    pub fn into_ledger(self) -> VisitLedger {
        self.engine.variation.ledger
    }

    pub fn no_eligible_cell_count(&self) -> u64 {
        self.engine.variation.no_eligible_cell
    }
}

pub fn run_insga3(inst: &Instance, cfg: &EvoConfig) -> Result<ParetoArchive, ConfigError> {
    let mut solver = Insga3::new(inst, cfg)?;
    solver.run();
    Ok(solver.archive().clone())
}
