//! Sequential evaluation of a serialized sequence: plans each (task, robot)
//! entry in order against all previously committed trajectories, enforcing
//! the strict finish-time order between consecutive entries, planning a
//! tentative escape to the resting cell after every task, caching committed
//! prefixes for reuse, and optionally pruning candidates whose optimistic
//! remaining lower bound cannot beat an incumbent makespan.

use crate::planner::{
    plan_escape, plan_path, shortcut, straight_line_lower_bound, DynamicObstacleField, PlanError,
    PlanQuery, Trajectory,
};
use crate::scenario::{
    Cell, RobotId, Scenario, SequenceEntry, SerializedSequence, TaskId, TaskKind, Timestep,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Evaluation knobs. The seed feeds per-entry shortcutting rngs, derived from
/// the sequence prefix content rather than call order, so warm-cache and
/// cold-cache evaluations produce identical plans.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub seed: u64,
    pub shortcut_attempts: usize,
    pub use_cache: bool,
    pub cache_capacity: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            seed: 0,
            shortcut_attempts: 100,
            use_cache: true,
            cache_capacity: 10_000,
        }
    }
}

/// One task leg of a robot's plan; pick-place tasks contribute two legs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskLeg {
    pub task: TaskId,
    pub trajectory: Trajectory,
}

/// Everything one robot does: committed task legs in execution order, then
/// the final retreat to its resting cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotPlan {
    pub robot: RobotId,
    pub task_legs: Vec<TaskLeg>,
    pub final_escape: Option<Trajectory>,
}

/// A complete joint plan for a sequence. The makespan is the maximum task
/// finish time; escape motion after a robot's last task is excluded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanResult {
    pub robot_plans: Vec<RobotPlan>,
    /// Finish time per sequence entry; strictly increasing.
    pub finish_times: Vec<Timestep>,
    pub makespan: Timestep,
}

impl PlanResult {
    pub fn plan_of(&self, robot: RobotId) -> &RobotPlan {
        &self.robot_plans[robot.index()]
    }
}

/// Committed planning state after some sequence prefix.
#[derive(Clone, Debug)]
pub struct CommittedState {
    field: DynamicObstacleField,
    finish_times: Vec<Timestep>,
    /// Task id per committed leg, per robot, aligned with the field's
    /// committed trajectories.
    leg_tasks: Vec<Vec<TaskId>>,
}

impl CommittedState {
    pub fn initial(scenario: &Scenario) -> Self {
        CommittedState {
            field: DynamicObstacleField::new(scenario),
            finish_times: Vec::new(),
            leg_tasks: vec![Vec::new(); scenario.robot_count()],
        }
    }

    pub fn field(&self) -> &DynamicObstacleField {
        &self.field
    }

    pub fn finish_times(&self) -> &[Timestep] {
        &self.finish_times
    }

    pub fn entries_done(&self) -> usize {
        self.finish_times.len()
    }

    /// Maximum committed task finish time; 0 before any task.
    pub fn committed_makespan(&self) -> Timestep {
        self.finish_times.last().copied().unwrap_or(0)
    }

    fn into_plan_result(self, scenario: &Scenario) -> PlanResult {
        let makespan = self.committed_makespan();
        let robot_plans = scenario
            .robot_ids()
            .map(|robot| {
                let legs = self.field.committed_of(robot);
                let tasks = &self.leg_tasks[robot.index()];
                debug_assert_eq!(legs.len(), tasks.len());
                RobotPlan {
                    robot,
                    task_legs: legs
                        .iter()
                        .zip(tasks)
                        .map(|(trajectory, &task)| TaskLeg {
                            task,
                            trajectory: trajectory.clone(),
                        })
                        .collect(),
                    final_escape: self.field.escape_of(robot).cloned(),
                }
            })
            .collect();
        PlanResult {
            robot_plans,
            finish_times: self.finish_times,
            makespan,
        }
    }
}

/// Outcome of evaluating one sequence.
#[derive(Clone, Debug)]
pub enum EvalOutcome {
    Feasible(PlanResult),
    /// The optimistic bound on any completion met or exceeded the incumbent.
    Pruned {
        lower_bound: Timestep,
    },
    /// Some entry admitted no collision-free plan within the horizon.
    Infeasible {
        entry_index: usize,
        reason: String,
    },
}

impl EvalOutcome {
    pub fn makespan(&self) -> Option<Timestep> {
        match self {
            EvalOutcome::Feasible(plan) => Some(plan.makespan),
            _ => None,
        }
    }
}

/// LRU-bounded map from sequence prefixes to the committed state after them.
/// A cached state is identical to replanning the prefix from scratch with the
/// same evaluation seed.
///
/// Not internally synchronized: concurrent evaluators either own separate
/// caches (results are identical either way) or must wrap a shared one so
/// that readers never observe a partially inserted prefix.
#[derive(Debug, Default)]
pub struct PrefixCache {
    capacity: usize,
    entries: HashMap<Vec<SequenceEntry>, CacheSlot>,
    order: BTreeMap<u64, Vec<SequenceEntry>>,
    clock: u64,
}

#[derive(Debug)]
struct CacheSlot {
    state: Arc<CommittedState>,
    stamp: u64,
}

impl PrefixCache {
    pub fn new(capacity: usize) -> Self {
        PrefixCache {
            capacity,
            entries: HashMap::new(),
            order: BTreeMap::new(),
            clock: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.order.clear();
    }

    fn touch(&mut self, key: &[SequenceEntry]) {
        self.clock += 1;
        if let Some(slot) = self.entries.get_mut(key) {
            self.order.remove(&slot.stamp);
            slot.stamp = self.clock;
            self.order.insert(slot.stamp, key.to_vec());
        }
    }

    /// Returns the state for the longest cached prefix of `entries`, so
    /// planning can resume at the returned entry index.
    pub fn lookup_longest(
        &mut self,
        entries: &[SequenceEntry],
    ) -> Option<(usize, Arc<CommittedState>)> {
        for m in (1..=entries.len()).rev() {
            if let Some(slot) = self.entries.get(&entries[..m]) {
                let state = Arc::clone(&slot.state);
                self.touch(&entries[..m]);
                return Some((m, state));
            }
        }
        None
    }

    pub fn insert(&mut self, key: Vec<SequenceEntry>, state: CommittedState) {
        if self.capacity == 0 {
            return;
        }
        self.clock += 1;
        let stamp = self.clock;
        if let Some(slot) = self.entries.get_mut(&key) {
            self.order.remove(&slot.stamp);
            slot.stamp = stamp;
            slot.state = Arc::new(state);
            self.order.insert(stamp, key);
            return;
        }
        self.entries.insert(
            key.clone(),
            CacheSlot {
                state: Arc::new(state),
                stamp,
            },
        );
        self.order.insert(stamp, key);
        while self.entries.len() > self.capacity {
            let (_, oldest) = self.order.pop_first().expect("order tracks entries");
            self.entries.remove(&oldest);
        }
    }
}

// FNV-1a over the evaluation seed and the prefix content; stable across runs
// so cached and fresh evaluations shortcut identically.
fn prefix_seed(seed: u64, entries: &[SequenceEntry], leg: u64) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    let mut feed = |v: u64| {
        for byte in v.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(seed);
    for e in entries {
        feed(e.task.value() as u64);
        feed(e.robot.value() as u64);
    }
    feed(leg);
    h
}

/// Admissible lower bound on the makespan of any completion of the sequence
/// from `from_index`, given the committed state for the prefix before it.
///
/// Each remaining entry must finish strictly after the entry before it in
/// the serialized order, and no earlier than its robot's own availability
/// plus optimistic straight-line travel over the task's action legs. A robot
/// may move toward its goal while earlier entries are still unfinished, so
/// the serialized order contributes only the strict `previous + 1` floor.
pub fn remaining_lower_bound(
    seq: &SerializedSequence,
    from_index: usize,
    state: &CommittedState,
    scenario: &Scenario,
) -> Timestep {
    debug_assert_eq!(state.entries_done(), from_index);
    let mut robot_ready: Vec<(Cell, Timestep)> = scenario
        .robot_ids()
        .map(|r| state.field.last_committed(r))
        .collect();
    let mut prev: Option<Timestep> = if from_index == 0 {
        None
    } else {
        Some(state.committed_makespan())
    };
    let mut bound = state.committed_makespan();
    for entry in &seq.entries()[from_index..] {
        let spec = scenario.robot(entry.robot);
        let task = scenario.task(entry.task);
        let (pos, ready) = robot_ready[entry.robot.index()];
        let travel = match task.kind {
            TaskKind::GoToPose { goal } => {
                straight_line_lower_bound(pos, goal, spec.max_speed) + task.dwell
            }
            TaskKind::PickPlace { pick, place } => {
                straight_line_lower_bound(pos, pick, spec.max_speed)
                    + task.dwell
                    + straight_line_lower_bound(pick, place, spec.max_speed)
                    + task.dwell
            }
        };
        let order_floor = prev.map_or(0, |p| p + 1);
        let finish = order_floor.max(ready + travel);
        robot_ready[entry.robot.index()] = (task.kind.final_cell(), finish);
        prev = Some(finish);
        bound = bound.max(finish);
    }
    bound
}

fn plan_entry(
    state: &mut CommittedState,
    seq: &SerializedSequence,
    index: usize,
    scenario: &Scenario,
    config: &EvalConfig,
) -> Result<(), PlanError> {
    let entry = seq.get(index);
    let task = scenario.task(entry.task);
    let prefix = &seq.entries()[..=index];
    let min_finish = if index == 0 {
        0
    } else {
        state.finish_times[index - 1] + 1
    };

    // The robot resumes from the end of its own committed timeline; its
    // previous tentative escape is discarded.
    state.field.clear_escape(entry.robot);
    let (start_cell, start_time) = state.field.last_committed(entry.robot);

    let commit_leg = |state: &mut CommittedState, query: PlanQuery, leg: u64| {
        let planned = plan_path(&query, scenario, &state.field)?;
        let smoothed = shortcut(
            &planned.trajectory,
            scenario,
            &state.field,
            prefix_seed(config.seed, prefix, leg),
            config.shortcut_attempts,
        );
        state.field.commit(smoothed);
        state.leg_tasks[entry.robot.index()].push(entry.task);
        Ok::<Timestep, PlanError>(planned.finish_time)
    };

    let finish = match task.kind {
        TaskKind::GoToPose { goal } => commit_leg(
            state,
            PlanQuery {
                robot: entry.robot,
                start_cell,
                earliest_start: start_time,
                goal_cell: goal,
                min_finish,
                dwell: task.dwell,
            },
            0,
        )?,
        TaskKind::PickPlace { pick, place } => {
            // Only the place action carries the sequence-order bound; the
            // pick is free to happen any time before it.
            let pick_finish = commit_leg(
                state,
                PlanQuery {
                    robot: entry.robot,
                    start_cell,
                    earliest_start: start_time,
                    goal_cell: pick,
                    min_finish: start_time,
                    dwell: task.dwell,
                },
                0,
            )?;
            commit_leg(
                state,
                PlanQuery {
                    robot: entry.robot,
                    start_cell: pick,
                    earliest_start: pick_finish,
                    goal_cell: place,
                    min_finish: min_finish.max(pick_finish),
                    dwell: task.dwell,
                },
                1,
            )?
        }
    };
    state.finish_times.push(finish);

    let (end_cell, end_time) = state.field.last_committed(entry.robot);
    let escape = plan_escape(entry.robot, end_cell, end_time, scenario, &state.field)?;
    let escape = shortcut(
        &escape,
        scenario,
        &state.field,
        prefix_seed(config.seed, prefix, 2),
        config.shortcut_attempts,
    );
    state.field.set_escape(escape);
    Ok(())
}

/// Plans a sequence entry by entry against committed trajectories. Resumes
/// from the longest cached prefix, stores every newly committed prefix back
/// into the cache, and — when an incumbent makespan is given — returns
/// `Pruned` as soon as the remaining lower bound can no longer beat it.
pub fn plan_given_sequence(
    seq: &SerializedSequence,
    scenario: &Scenario,
    incumbent_makespan: Option<Timestep>,
    cache: &mut PrefixCache,
    config: &EvalConfig,
) -> EvalOutcome {
    let (mut state, start_index) = if config.use_cache {
        match cache.lookup_longest(seq.entries()) {
            Some((m, cached)) => ((*cached).clone(), m),
            None => (CommittedState::initial(scenario), 0),
        }
    } else {
        (CommittedState::initial(scenario), 0)
    };

    for index in start_index..seq.len() {
        if let Some(incumbent) = incumbent_makespan {
            let lower_bound = remaining_lower_bound(seq, index, &state, scenario);
            if lower_bound >= incumbent {
                return EvalOutcome::Pruned { lower_bound };
            }
        }
        if let Err(err) = plan_entry(&mut state, seq, index, scenario, config) {
            return EvalOutcome::Infeasible {
                entry_index: index,
                reason: err.to_string(),
            };
        }
        if config.use_cache {
            cache.insert(seq.entries()[..=index].to_vec(), state.clone());
        }
    }

    debug_assert!(
        remaining_lower_bound(seq, 0, &CommittedState::initial(scenario), scenario)
            <= state.committed_makespan(),
        "remaining lower bound must be admissible"
    );
    debug_assert!(state.finish_times.windows(2).all(|w| w[0] < w[1]));
    EvalOutcome::Feasible(state.into_plan_result(scenario))
}

/// Plans only the first `len` entries, without pruning. Used to obtain the
/// committed state at a prefix.
pub fn plan_sequence_prefix(
    seq: &SerializedSequence,
    len: usize,
    scenario: &Scenario,
    config: &EvalConfig,
) -> Result<CommittedState, (usize, PlanError)> {
    let mut state = CommittedState::initial(scenario);
    for index in 0..len {
        plan_entry(&mut state, seq, index, scenario, config).map_err(|e| (index, e))?;
    }
    Ok(state)
}
