//! Greedy descent with random restarts over serialized sequences.
//!
//! Each restart initializes a random sequence, plans it, then repeatedly
//! generates a neighbor of the inner incumbent and accepts it only on strict
//! improvement. The global best across restarts is returned. The search is
//! anytime: an optional time budget stops it between evaluations, and the
//! recorded trace of (wall time, candidate makespan, best makespan) samples
//! gives the makespan-over-compute-time curve.

use crate::evaluator::{plan_given_sequence, EvalConfig, EvalOutcome, PlanResult, PrefixCache};
use crate::scenario::{RobotId, Scenario, SerializedSequence, Timestep};
use crate::search::{
    generate_neighbor, greedy_baseline_sequence, initialize_sequence, single_robot_sequence,
    SequenceBuildError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Number of random restarts; at least 1.
    pub max_outer_iter: usize,
    /// Neighbor evaluations per restart; 0 plans only the initial sequence.
    pub max_inner_iter: usize,
    pub seed: u64,
    /// Skip planning candidates whose remaining lower bound cannot beat the
    /// incumbent.
    pub prune_with_lower_bound: bool,
    /// Prune against the global best instead of the restart-local incumbent.
    /// Prunes more, but pruned candidates can no longer steer the inner
    /// descent, so results may differ from an unpruned run.
    pub prune_with_global_incumbent: bool,
    /// Stop between evaluations once this much wall time has elapsed.
    pub time_budget: Option<Duration>,
    /// Restarts run concurrently on this many threads, each with its own
    /// prefix cache. Results are independent of the worker count.
    pub workers: usize,
    pub shortcut_attempts: usize,
    pub use_cache: bool,
    pub cache_capacity: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let eval = EvalConfig::default();
        OptimizerConfig {
            max_outer_iter: 10,
            max_inner_iter: 20,
            seed: 0,
            prune_with_lower_bound: true,
            prune_with_global_incumbent: false,
            time_budget: None,
            workers: 1,
            shortcut_attempts: eval.shortcut_attempts,
            use_cache: eval.use_cache,
            cache_capacity: eval.cache_capacity,
        }
    }
}

impl OptimizerConfig {
    fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            seed: self.seed,
            shortcut_attempts: self.shortcut_attempts,
            use_cache: self.use_cache,
            cache_capacity: self.cache_capacity,
        }
    }
}

/// One successful evaluation: when it happened and what it scored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub wall_s: f64,
    pub candidate_makespan: Timestep,
    /// Best makespan over all samples up to and including this one.
    pub best_makespan: Timestep,
    pub outer: usize,
    /// 0 for the restart's initial sequence, i + 1 for inner iteration i.
    pub inner: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub samples: Vec<TraceSample>,
}

impl SearchTrace {
    pub fn best_is_non_increasing(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].best_makespan <= w[0].best_makespan)
    }
}

/// Result of an optimization or baseline run.
#[derive(Clone, Debug)]
pub struct Optimized {
    pub plan: PlanResult,
    pub sequence: SerializedSequence,
    pub trace: SearchTrace,
}

#[derive(Debug)]
pub enum OptimizeError {
    InvalidConfig(String),
    Build(SequenceBuildError),
    /// Every evaluated sequence was infeasible, in every restart.
    NoFeasible {
        failures: Vec<String>,
    },
}

impl fmt::Display for OptimizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizeError::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            OptimizeError::Build(e) => write!(f, "{e}"),
            OptimizeError::NoFeasible { failures } => {
                write!(f, "no feasible sequence found: {}", failures.join("; "))
            }
        }
    }
}

impl std::error::Error for OptimizeError {}

impl From<SequenceBuildError> for OptimizeError {
    fn from(e: SequenceBuildError) -> Self {
        OptimizeError::Build(e)
    }
}

/// Seed for one restart, derived so restarts are independent of each other
/// and of the evaluation seed.
pub fn restart_seed(seed: u64, outer: usize) -> u64 {
    const PRIME: u64 = 0x100000001b3;
    seed.wrapping_mul(PRIME)
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add((outer as u64).wrapping_mul(PRIME))
}

/// Outcome of a single restart, exposed for property tests: per-restart
/// results depend only on `(scenario, restart seed, config)`.
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub best: Option<(Timestep, SerializedSequence, PlanResult)>,
    /// Makespans of all successful evaluations, in evaluation order.
    pub evaluated: Vec<Timestep>,
    pub failures: Vec<String>,
}

struct RawSample {
    wall_s: f64,
    candidate: Timestep,
    outer: usize,
    inner: usize,
}

const NO_INCUMBENT: u32 = u32::MAX;

/// Everything shared by all restarts of one optimization run.
struct SearchContext<'a> {
    scenario: &'a Scenario,
    config: &'a OptimizerConfig,
    eval_config: EvalConfig,
    global_best: AtomicU32,
    deadline: Option<Instant>,
    clock_zero: Instant,
}

impl<'a> SearchContext<'a> {
    fn new(scenario: &'a Scenario, config: &'a OptimizerConfig) -> Self {
        let clock_zero = Instant::now();
        SearchContext {
            scenario,
            config,
            eval_config: config.eval_config(),
            global_best: AtomicU32::new(NO_INCUMBENT),
            deadline: config.time_budget.map(|b| clock_zero + b),
            clock_zero,
        }
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

fn restart_impl(
    ctx: &SearchContext<'_>,
    seed: u64,
    outer: usize,
    cache: &mut PrefixCache,
    samples: &mut Vec<RawSample>,
) -> RestartOutcome {
    let (scenario, config) = (ctx.scenario, ctx.config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = RestartOutcome {
        best: None,
        evaluated: Vec::new(),
        failures: Vec::new(),
    };
    let record_failure = |failures: &mut Vec<String>, reason: String| {
        if failures.len() < 4 {
            failures.push(reason);
        }
    };

    let mut current = match initialize_sequence(scenario, &mut rng) {
        Ok(seq) => seq,
        Err(e) => {
            record_failure(&mut outcome.failures, e.to_string());
            return outcome;
        }
    };
    let mut inner_best: Option<Timestep> = None;

    let incumbent_for = |inner_best: Option<Timestep>| {
        if !config.prune_with_lower_bound {
            return None;
        }
        if config.prune_with_global_incumbent {
            match ctx.global_best.load(Ordering::Relaxed) {
                NO_INCUMBENT => None,
                t => Some(t),
            }
        } else {
            inner_best
        }
    };

    // Evaluation of the restart's initial sequence, then the descent loop.
    for inner in 0..=config.max_inner_iter {
        if ctx.out_of_time() {
            break;
        }
        let candidate = if inner == 0 {
            current.clone()
        } else {
            generate_neighbor(&current, scenario, &mut rng)
        };
        let incumbent = incumbent_for(inner_best);
        match plan_given_sequence(&candidate, scenario, incumbent, cache, &ctx.eval_config) {
            EvalOutcome::Feasible(plan) => {
                let t = plan.makespan;
                samples.push(RawSample {
                    wall_s: ctx.clock_zero.elapsed().as_secs_f64(),
                    candidate: t,
                    outer,
                    inner,
                });
                outcome.evaluated.push(t);
                ctx.global_best.fetch_min(t, Ordering::Relaxed);
                if inner_best.is_none_or(|b| t < b) {
                    inner_best = Some(t);
                    current = candidate;
                    outcome.best = Some((t, current.clone(), plan));
                }
            }
            EvalOutcome::Pruned { .. } => {}
            EvalOutcome::Infeasible {
                entry_index,
                reason,
            } => {
                record_failure(
                    &mut outcome.failures,
                    format!("entry {entry_index}: {reason}"),
                );
            }
        }
    }
    outcome
}

/// Runs one restart in isolation. Useful for verifying that permuting
/// restart seeds permutes per-restart results without changing them.
pub fn run_restart(scenario: &Scenario, seed: u64, config: &OptimizerConfig) -> RestartOutcome {
    let ctx = SearchContext::new(scenario, config);
    let mut cache = PrefixCache::new(config.cache_capacity);
    let mut samples = Vec::new();
    restart_impl(&ctx, seed, 0, &mut cache, &mut samples)
}

/// Greedy descent with random restarts. Returns the best plan found, the
/// sequence that produced it, and the full search trace. Deterministic for a
/// fixed `(scenario, config)` when the time budget does not bite.
pub fn optimize(scenario: &Scenario, config: &OptimizerConfig) -> Result<Optimized, OptimizeError> {
    if config.max_outer_iter == 0 {
        return Err(OptimizeError::InvalidConfig(
            "max_outer_iter must be at least 1".to_string(),
        ));
    }
    if config.workers == 0 {
        return Err(OptimizeError::InvalidConfig(
            "workers must be at least 1".to_string(),
        ));
    }

    let ctx = SearchContext::new(scenario, config);
    let mut restarts: Vec<(usize, RestartOutcome)> = Vec::with_capacity(config.max_outer_iter);
    let mut samples: Vec<RawSample> = Vec::new();

    if config.workers == 1 {
        let mut cache = PrefixCache::new(config.cache_capacity);
        for outer in 0..config.max_outer_iter {
            if ctx.out_of_time() {
                break;
            }
            let outcome = restart_impl(
                &ctx,
                restart_seed(config.seed, outer),
                outer,
                &mut cache,
                &mut samples,
            );
            restarts.push((outer, outcome));
        }
    } else {
        type Collected = (Vec<(usize, RestartOutcome)>, Vec<RawSample>);
        let next = AtomicUsize::new(0);
        let collected: Mutex<Collected> = Mutex::new((Vec::new(), Vec::new()));
        std::thread::scope(|scope| {
            for _ in 0..config.workers.min(config.max_outer_iter) {
                scope.spawn(|| {
                    let mut cache = PrefixCache::new(config.cache_capacity);
                    loop {
                        let outer = next.fetch_add(1, Ordering::Relaxed);
                        if outer >= config.max_outer_iter || ctx.out_of_time() {
                            break;
                        }
                        let mut local_samples = Vec::new();
                        let outcome = restart_impl(
                            &ctx,
                            restart_seed(config.seed, outer),
                            outer,
                            &mut cache,
                            &mut local_samples,
                        );
                        let mut guard = collected.lock().expect("collector lock");
                        guard.0.push((outer, outcome));
                        guard.1.append(&mut local_samples);
                    }
                });
            }
        });
        let (mut r, s) = collected.into_inner().expect("collector lock");
        r.sort_by_key(|(outer, _)| *outer);
        restarts = r;
        samples = s;
    }

    // Merge restart results deterministically: smallest makespan wins, ties
    // broken by restart index.
    let best = restarts
        .iter()
        .filter_map(|(outer, o)| o.best.as_ref().map(|b| (b.0, *outer, b)))
        .min_by_key(|&(t, outer, _)| (t, outer));

    samples.sort_by(|a, b| {
        a.wall_s
            .total_cmp(&b.wall_s)
            .then(a.outer.cmp(&b.outer))
            .then(a.inner.cmp(&b.inner))
    });
    let mut trace = SearchTrace::default();
    let mut running_best = Timestep::MAX;
    for s in &samples {
        running_best = running_best.min(s.candidate);
        trace.samples.push(TraceSample {
            wall_s: s.wall_s,
            candidate_makespan: s.candidate,
            best_makespan: running_best,
            outer: s.outer,
            inner: s.inner,
        });
    }

    match best {
        Some((_, _, (_, seq, plan))) => Ok(Optimized {
            plan: plan.clone(),
            sequence: seq.clone(),
            trace,
        }),
        None => Err(OptimizeError::NoFeasible {
            failures: restarts
                .into_iter()
                .flat_map(|(_, o)| o.failures)
                .take(8)
                .collect(),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineKind {
    Greedy,
    Single(RobotId),
}

/// Plans a baseline sequence once, with no pruning, producing a one-sample
/// trace. Baselines are not anytime.
pub fn run_baseline(
    scenario: &Scenario,
    kind: BaselineKind,
    config: &OptimizerConfig,
) -> Result<Optimized, OptimizeError> {
    let clock_zero = Instant::now();
    let sequence = match kind {
        BaselineKind::Greedy => greedy_baseline_sequence(scenario)?,
        BaselineKind::Single(robot) => single_robot_sequence(scenario, robot)?,
    };
    let mut cache = PrefixCache::new(config.cache_capacity);
    match plan_given_sequence(&sequence, scenario, None, &mut cache, &config.eval_config()) {
        EvalOutcome::Feasible(plan) => {
            let trace = SearchTrace {
                samples: vec![TraceSample {
                    wall_s: clock_zero.elapsed().as_secs_f64(),
                    candidate_makespan: plan.makespan,
                    best_makespan: plan.makespan,
                    outer: 0,
                    inner: 0,
                }],
            };
            Ok(Optimized {
                plan,
                sequence,
                trace,
            })
        }
        EvalOutcome::Infeasible {
            entry_index,
            reason,
        } => Err(OptimizeError::NoFeasible {
            failures: vec![format!("baseline entry {entry_index}: {reason}")],
        }),
        EvalOutcome::Pruned { .. } => unreachable!("baseline runs without an incumbent"),
    }
}
