//! Comparison optimizers sharing the evaluator: a plain NSGA-III without
//! ledger guidance, multi-objective particle swarm, and multi-objective
//! whale optimization. The two continuous metaheuristics act on random-key
//! vectors so every position decodes to a feasible task order. All four
//! solvers expose the same `(instance, config, seed) -> ParetoArchive`
//! surface through [`run_algorithm`].

use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytics::{ArchiveEntry, ParetoArchive, Provenance, SolvedPoint};
use crate::codec::{random_topological_order, Chromosome};
use crate::eval::{evaluate, ObjectiveVector};
use crate::evolve::{
    content_seed, run_insga3, stream, ConfigError, Engine, EvoConfig, Individual, Variation,
};
use crate::io::instance_hash;
use crate::model::{Instance, PrecedenceGraph, TaskId, N_LINES};
use crate::rank::nondominated_sort;

/// Problem-scale buckets keyed by total task count, matching the generator
/// presets (20, 40, 80 tasks per line).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Medium,
    Large,
}

impl Scale {
    pub fn for_instance(inst: &Instance) -> Self {
        match inst.n_tasks_total() {
            0..=60 => Self::Small,
            61..=120 => Self::Medium,
            _ => Self::Large,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Small => "small",
            Self::Medium => "medium",
            Self::Large => "large",
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(Self::Small),
            "medium" => Ok(Self::Medium),
            "large" => Ok(Self::Large),
            other => Err(format!("unknown scale '{other}'")),
        }
    }
}

/// Shared parameter set for all four algorithms; each solver reads the
/// fields relevant to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaselineConfig {
    pub population: usize,
    pub iterations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    /// Particle swarm individual learning factor (c1).
    pub cognitive: f64,
    /// Particle swarm group learning factor (c2).
    pub social: f64,
    /// Particle swarm inertia factor (w).
    pub inertia: f64,
    pub divisions: usize,
}

impl BaselineConfig {
    pub fn for_scale(scale: Scale) -> Self {
        let (population, pc, pm, learn, inertia) = match scale {
            Scale::Small => (20, 0.5, 0.05, 0.8, 0.5),
            Scale::Medium => (40, 0.7, 0.1, 1.5, 0.8),
            Scale::Large => (80, 0.9, 0.15, 3.0, 1.2),
        };
        Self {
            population,
            iterations: 100,
            crossover_prob: pc,
            mutation_prob: pm,
            cognitive: learn,
            social: learn,
            inertia,
            divisions: 5,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.evo(0).validate()?;
        for (name, value) in [
            ("cognitive factor", self.cognitive),
            ("social factor", self.social),
            ("inertia factor", self.inertia),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(ConfigError::BadFactor { name, value });
            }
        }
        Ok(())
    }

    pub fn evo(&self, seed: u64) -> EvoConfig {
        EvoConfig {
            population: self.population,
            generations: self.iterations,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            divisions: self.divisions,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Insga3,
    Nsga3,
    Mopso,
    Nswoa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Insga3,
        Algorithm::Nsga3,
        Algorithm::Mopso,
        Algorithm::Nswoa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Insga3 => "insga3",
            Self::Nsga3 => "nsga3",
            Self::Mopso => "mopso",
            Self::Nswoa => "nswoa",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "insga3" => Ok(Self::Insga3),
            "nsga3" => Ok(Self::Nsga3),
            "mopso" => Ok(Self::Mopso),
            "nswoa" => Ok(Self::Nswoa),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

/// One entry point for every solver, so comparison harnesses stay
/// algorithm-agnostic.
pub fn run_algorithm(
    algo: Algorithm,
    inst: &Instance,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<ParetoArchive, ConfigError> {
    match algo {
        Algorithm::Insga3 => run_insga3(inst, &cfg.evo(seed)),
        Algorithm::Nsga3 => run_nsga3_vanilla(inst, cfg, seed),
        Algorithm::Mopso => run_mopso(inst, cfg, seed),
        Algorithm::Nswoa => run_nswoa(inst, cfg, seed),
    }
}

/// Head of `a` up to `cut`, then every remaining task in `b`'s relative
/// order. Keeps topological feasibility: a prefix of a feasible order is
/// feasible, and the tail respects precedence because `b` does.
fn one_point(a: &[TaskId], b: &[TaskId], cut: usize) -> Vec<TaskId> {
    let mut in_head = vec![false; a.len() + 1];
    for &t in &a[..cut] {
        in_head[t as usize] = true;
    }
    let mut child = a[..cut].to_vec();
    child.extend(b.iter().copied().filter(|&t| !in_head[t as usize]));
    child
}

/// Remove one random task and reinsert it uniformly within its feasible
/// window (after its last predecessor, before its first successor).
fn reinsert_random_task(seq: &mut Vec<TaskId>, g: &PrecedenceGraph, rng: &mut impl Rng) {
    if seq.len() < 2 {
        return;
    }
    let from = rng.random_range(0..seq.len());
    let task = seq.remove(from);
    let mut lo = 0;
    let mut hi = seq.len();
    for (idx, &other) in seq.iter().enumerate() {
        if g.preds(task).contains(&other) {
            lo = lo.max(idx + 1);
        }
        if g.succs(task).contains(&other) {
            hi = hi.min(idx);
        }
    }
    let to = rng.random_range(lo..=hi);
    seq.insert(to, task);
}

/// Operators for the plain NSGA-III arm: random topological initialization,
/// one-point order crossover, single-task reinsertion mutation.
struct PlainVariation<'a> {
    inst: &'a Instance,
    pc: f64,
    pm: f64,
}

impl Variation for PlainVariation<'_> {
    fn initial(&mut self, rng: &mut ChaCha8Rng) -> Chromosome {
        Chromosome {
            sequences: [0, 1, 2]
                .map(|o| random_topological_order(&self.inst.line(o).precedence, rng)),
        }
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
        for line in 0..N_LINES {
            let n = self.inst.line(line).n_tasks();
            if n == 0 || !pair_rng.random_bool(self.pc) {
                continue;
            }
            let cut = pair_rng.random_range(0..=n);
            let head_a = one_point(&a.sequences[line], &b.sequences[line], cut);
            let head_b = one_point(&b.sequences[line], &a.sequences[line], cut);
            ca.sequences[line] = head_a;
            cb.sequences[line] = head_b;
        }
        let [ra, rb] = child_rngs;
        for (child, rng) in [(&mut ca, ra), (&mut cb, rb)] {
            for line in 0..N_LINES {
                if self.inst.line(line).n_tasks() == 0 || !rng.random_bool(self.pm) {
                    continue;
                }
                reinsert_random_task(
                    &mut child.sequences[line],
                    &self.inst.line(line).precedence,
                    rng,
                );
            }
        }
        (ca, cb)
    }
}

pub fn run_nsga3_vanilla(
    inst: &Instance,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<ParetoArchive, ConfigError> {
    cfg.validate()?;
    let variation = PlainVariation {
        inst,
        pc: cfg.crossover_prob,
        pm: cfg.mutation_prob,
    };
    let mut engine = Engine::new(inst, cfg.evo(seed), variation, "nsga3")?;
    engine.run();
    Ok(engine.archive().clone())
}

/// One real key in [0, 1] per (line, task); orders are recovered by
/// repeatedly emitting the ready task with the smallest key.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomKeyVector {
    pub keys: [Vec<f64>; 3],
}

impl RandomKeyVector {
    pub fn uniform(inst: &Instance, rng: &mut impl Rng) -> Self {
        Self {
            keys: [0, 1, 2].map(|o| (0..inst.line(o).n_tasks()).map(|_| rng.random()).collect()),
        }
    }

    pub fn to_chromosome(&self, inst: &Instance) -> Chromosome {
        Chromosome {
            sequences: [0, 1, 2].map(|o| {
                let line = inst.line(o);
                let keys = &self.keys[o];
                let n = line.n_tasks();
                let mut placed = vec![false; n];
                let mut seq = Vec::with_capacity(n);
                while seq.len() < n {
                    let next = (1..=n as TaskId)
                        .filter(|&t| {
                            !placed[t as usize - 1]
                                && line
                                    .precedence
                                    .preds(t)
                                    .iter()
                                    .all(|&p| placed[p as usize - 1])
                        })
                        .min_by(|&x, &y| {
                            keys[x as usize - 1]
                                .total_cmp(&keys[y as usize - 1])
                                .then(x.cmp(&y))
                        })
                        .expect("an acyclic graph always has a ready task");
                    placed[next as usize - 1] = true;
                    seq.push(next);
                }
                seq
            }),
        }
    }
}

/// Decode and evaluate with randomness tied to the decoded order's content,
/// so equal positions always yield the same schedule within a run.
fn evaluate_position(inst: &Instance, run_seed: u64, keys: &RandomKeyVector) -> Individual {
    let chromosome = keys.to_chromosome(inst);
    let words = chromosome
        .sequences
        .iter()
        .flat_map(|s| std::iter::once(s.len() as u64).chain(s.iter().map(|&t| u64::from(t))));
    let mut rng = ChaCha8Rng::seed_from_u64(content_seed(run_seed, words));
    let (schedule, objectives) = evaluate(&chromosome, inst, &mut rng);
    Individual {
        chromosome,
        schedule,
        objectives,
    }
}

fn record(archive: &mut ParetoArchive, ind: &Individual) {
    archive.insert(ArchiveEntry {
        objectives: ind.objectives,
        solution: Some(SolvedPoint {
            chromosome: ind.chromosome.clone(),
            schedule: ind.schedule.clone(),
        }),
    });
}

/// Crowding distance per point (larger = more isolated); boundary points
/// are infinite, and any set of one or two points is entirely boundary.
pub fn crowding_distances(points: &[ObjectiveVector]) -> Vec<f64> {
    let n = points.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut dist = vec![0.0; n];
    for d in 0..3 {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| points[a].as_array()[d].total_cmp(&points[b].as_array()[d]));
        dist[idx[0]] = f64::INFINITY;
        dist[idx[n - 1]] = f64::INFINITY;
        let range = points[idx[n - 1]].as_array()[d] - points[idx[0]].as_array()[d];
        if range <= 0.0 {
            continue;
        }
        for k in 1..n - 1 {
            dist[idx[k]] +=
                (points[idx[k + 1]].as_array()[d] - points[idx[k - 1]].as_array()[d]) / range;
        }
    }
    dist
}

/// Non-dominated pool capped by crowding pruning; used for gbest sampling.
struct ElitePool {
    entries: Vec<(RandomKeyVector, ObjectiveVector)>,
    capacity: usize,
}

impl ElitePool {
    fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            capacity: capacity.max(1),
        }
    }

    fn insert(&mut self, keys: RandomKeyVector, obj: ObjectiveVector) {
        if self
            .entries
            .iter()
            .any(|(_, o)| o.dominates(&obj) || o.approx_eq(&obj))
        {
            return;
        }
        self.entries.retain(|(_, o)| !obj.dominates(o));
        self.entries.push((keys, obj));
        while self.entries.len() > self.capacity {
            let vectors: Vec<ObjectiveVector> = self.entries.iter().map(|(_, o)| *o).collect();
            let dists = crowding_distances(&vectors);
            let worst = (0..dists.len())
                .min_by(|&a, &b| dists[a].total_cmp(&dists[b]))
                .expect("pool is non-empty");
            self.entries.remove(worst);
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> &RandomKeyVector {
        &self.entries.choose(rng).expect("pool is never empty").0
    }
}

const LANE_SWARM_INIT: u64 = 101;
const LANE_SWARM_MOVE: u64 = 102;

struct Particle {
    position: RandomKeyVector,
    velocity: [Vec<f64>; 3],
    best: RandomKeyVector,
    best_obj: ObjectiveVector,
}

pub fn run_mopso(
    inst: &Instance,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<ParetoArchive, ConfigError> {
    cfg.validate()?;
    let mut archive = ParetoArchive::new(Provenance {
        algorithm: "mopso".into(),
        seed,
        instance_hash: instance_hash(inst),
    });
    let mut pool = ElitePool::new(cfg.population);
    let mut swarm: Vec<Particle> = Vec::with_capacity(cfg.population);
    for i in 0..cfg.population {
        let mut rng = stream(seed, LANE_SWARM_INIT, 0, i as u64);
        let position = RandomKeyVector::uniform(inst, &mut rng);
        let ind = evaluate_position(inst, seed, &position);
        record(&mut archive, &ind);
        pool.insert(position.clone(), ind.objectives);
        swarm.push(Particle {
            velocity: position.keys.clone().map(|k| vec![0.0; k.len()]),
            best: position.clone(),
            best_obj: ind.objectives,
            position,
        });
    }

    for it in 1..=cfg.iterations {
        // Every particle moves against the same pool snapshot, each on its
        // own rng stream, so evaluation order cannot change the outcome.
        let moved: Vec<(usize, RandomKeyVector, Individual, ChaCha8Rng)> = (0..swarm.len())
            .map(|i| {
                let mut rng = stream(seed, LANE_SWARM_MOVE, it as u64, i as u64);
                let gbest = pool.sample(&mut rng).clone();
                let p = &swarm[i];
                let mut position = p.position.clone();
                let mut velocity = p.velocity.clone();
                #[allow(clippy::needless_range_loop)]
                for o in 0..N_LINES {
                    for d in 0..position.keys[o].len() {
                        let r1: f64 = rng.random();
                        let r2: f64 = rng.random();
                        let v = cfg.inertia * velocity[o][d]
                            + cfg.cognitive * r1 * (p.best.keys[o][d] - position.keys[o][d])
                            + cfg.social * r2 * (gbest.keys[o][d] - position.keys[o][d]);
                        velocity[o][d] = v.clamp(-1.0, 1.0);
                        position.keys[o][d] =
                            (position.keys[o][d] + velocity[o][d]).clamp(0.0, 1.0);
                    }
                }
                swarm[i].velocity = velocity;
                let ind = evaluate_position(inst, seed, &position);
                (i, position, ind, rng)
            })
            .collect();
        for (i, position, ind, mut rng) in moved {
            let p = &mut swarm[i];
            p.position = position;
            // Replace the personal best on domination; on mutual
            // non-domination flip a fair coin.
            let replace = ind.objectives.dominates(&p.best_obj)
                || (!p.best_obj.dominates(&ind.objectives)
                    && !p.best_obj.approx_eq(&ind.objectives)
                    && rng.random_bool(0.5));
            if replace {
                p.best = p.position.clone();
                p.best_obj = ind.objectives;
            }
            pool.insert(p.position.clone(), ind.objectives);
            record(&mut archive, &ind);
        }
    }
    Ok(archive)
}

/// Encircling move toward (or past) the target along one key dimension.
pub fn encircle_step(x: f64, target: f64, a_coef: f64, c_coef: f64) -> f64 {
    target - a_coef * (c_coef * target - x).abs()
}

/// Logarithmic spiral around the leader along one key dimension.
pub fn spiral_step(x: f64, leader: f64, l: f64) -> f64 {
    (leader - x).abs() * l.exp() * (2.0 * std::f64::consts::PI * l).cos() + leader
}

pub fn run_nswoa(
    inst: &Instance,
    cfg: &BaselineConfig,
    seed: u64,
) -> Result<ParetoArchive, ConfigError> {
    cfg.validate()?;
    let mut archive = ParetoArchive::new(Provenance {
        algorithm: "nswoa".into(),
        seed,
        instance_hash: instance_hash(inst),
    });
    let mut whales: Vec<(RandomKeyVector, ObjectiveVector)> = Vec::with_capacity(cfg.population);
    for i in 0..cfg.population {
        let mut rng = stream(seed, LANE_SWARM_INIT, 0, i as u64);
        let position = RandomKeyVector::uniform(inst, &mut rng);
        let ind = evaluate_position(inst, seed, &position);
        record(&mut archive, &ind);
        whales.push((position, ind.objectives));
    }

    for it in 1..=cfg.iterations {
        // Shrinking coefficient: 2 at the start, 0 at the last iteration.
        let a = 2.0 * (1.0 - it as f64 / cfg.iterations as f64);
        let vectors: Vec<ObjectiveVector> = whales.iter().map(|(_, o)| *o).collect();
        let leaders = nondominated_sort(&vectors)
            .into_iter()
            .next()
            .expect("population is non-empty");
        let moved: Vec<(RandomKeyVector, Individual)> = (0..whales.len())
            .map(|i| {
                let mut rng = stream(seed, LANE_SWARM_MOVE, it as u64, i as u64);
                let leader = &whales[*leaders.choose(&mut rng).expect("front 0 non-empty")].0;
                let x = &whales[i].0;
                let p: f64 = rng.random();
                let mut position = x.clone();
                if p < 0.5 {
                    let a_coef = 2.0 * a * rng.random::<f64>() - a;
                    let c_coef = 2.0 * rng.random::<f64>();
                    // Exploit near the leader when |A| < 1, otherwise
                    // explore around a random whale.
                    let target = if a_coef.abs() < 1.0 {
                        leader
                    } else {
                        &whales[rng.random_range(0..whales.len())].0
                    };
                    for o in 0..N_LINES {
                        for d in 0..position.keys[o].len() {
                            position.keys[o][d] =
                                encircle_step(x.keys[o][d], target.keys[o][d], a_coef, c_coef)
                                    .clamp(0.0, 1.0);
                        }
                    }
                } else {
                    let l: f64 = rng.random_range(-1.0..=1.0);
                    for o in 0..N_LINES {
                        for d in 0..position.keys[o].len() {
                            position.keys[o][d] =
                                spiral_step(x.keys[o][d], leader.keys[o][d], l).clamp(0.0, 1.0);
                        }
                    }
                }
                let ind = evaluate_position(inst, seed, &position);
                (position, ind)
            })
            .collect();
        for (i, (position, ind)) in moved.into_iter().enumerate() {
            record(&mut archive, &ind);
            // Positions are replaced unconditionally; selection pressure
            // comes from leader choice alone.
            whales[i] = (position, ind.objectives);
        }
    }
    Ok(archive)
}
