//! Sequence generation: random round-robin initialization, the three
//! neighborhood mutations (robot swap, element swap, subtour reversal), and
//! the greedy-alternating and single-robot baseline sequences.
//!
//! All generators are pure functions of `(sequence, rng)`; identical seeds
//! yield identical outcomes. Every output is valid for the scenario:
//! mutations that would break a capability or precedence constraint are
//! rejection-sampled up to [`NEIGHBOR_RETRY_CAP`] attempts, after which the
//! input sequence is returned unchanged.

use crate::planner::straight_line_lower_bound;
use crate::scenario::{Cell, RobotId, Scenario, SequenceEntry, SerializedSequence, TaskId};
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;

/// Rejection-sampling attempt budget for one mutation.
pub const NEIGHBOR_RETRY_CAP: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceBuildError {
    /// Tasks remain, but no robot has a capable, precedence-ready task.
    NoFeasibleTask { remaining: Vec<TaskId> },
    /// The requested robot cannot execute this task.
    RobotNotCapable { task: TaskId, robot: RobotId },
}

impl fmt::Display for SequenceBuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceBuildError::NoFeasibleTask { remaining } => {
                write!(f, "no valid sequence: no robot can take any of ")?;
                let names: Vec<String> = remaining.iter().map(|t| t.to_string()).collect();
                write!(f, "[{}]", names.join(", "))
            }
            SequenceBuildError::RobotNotCapable { task, robot } => {
                write!(f, "{robot} is not capable of {task}")
            }
        }
    }
}

impl std::error::Error for SequenceBuildError {}

/// A task is ready once all of its precedence predecessors are already
/// placed earlier in the sequence.
fn is_ready(task: TaskId, scenario: &Scenario, placed: &BTreeSet<TaskId>) -> bool {
    scenario
        .precedence()
        .predecessors(task)
        .all(|p| placed.contains(&p))
}

fn order_respects_precedence(entries: &[SequenceEntry], scenario: &Scenario) -> bool {
    let mut position = vec![0usize; scenario.task_count()];
    for (pos, e) in entries.iter().enumerate() {
        position[e.task.index()] = pos;
    }
    scenario
        .precedence()
        .edges()
        .all(|(before, after)| position[before.index()] < position[after.index()])
}

/// Round-robin random initialization: robots take turns in id order; each
/// picks uniformly among its remaining capable, precedence-ready tasks, and a
/// robot with no feasible task is skipped.
pub fn initialize_sequence<R: Rng>(
    scenario: &Scenario,
    rng: &mut R,
) -> Result<SerializedSequence, SequenceBuildError> {
    let mut remaining: BTreeSet<TaskId> = scenario.task_ids().collect();
    let mut placed: BTreeSet<TaskId> = BTreeSet::new();
    let mut entries = Vec::with_capacity(remaining.len());
    let mut cursor = 0usize;
    let mut idle_turns = 0usize;
    while !remaining.is_empty() {
        let robot = scenario.robots()[cursor % scenario.robot_count()].id;
        cursor += 1;
        let feasible: Vec<TaskId> = remaining
            .iter()
            .copied()
            .filter(|&t| scenario.task(t).capable_robots.contains(&robot))
            .filter(|&t| is_ready(t, scenario, &placed))
            .collect();
        if feasible.is_empty() {
            idle_turns += 1;
            if idle_turns >= scenario.robot_count() {
                return Err(SequenceBuildError::NoFeasibleTask {
                    remaining: remaining.into_iter().collect(),
                });
            }
            continue;
        }
        idle_turns = 0;
        let task = feasible[rng.random_range(0..feasible.len())];
        entries.push(SequenceEntry::new(task, robot));
        remaining.remove(&task);
        placed.insert(task);
    }
    Ok(SerializedSequence::new(entries))
}

fn with_robot_at(seq: &SerializedSequence, index: usize, robot: RobotId) -> SerializedSequence {
    let mut entries = seq.entries().to_vec();
    entries[index].robot = robot;
    SerializedSequence::new(entries)
}

fn with_swapped(seq: &SerializedSequence, i: usize, j: usize) -> SerializedSequence {
    let mut entries = seq.entries().to_vec();
    entries.swap(i, j);
    SerializedSequence::new(entries)
}

fn with_reversed(seq: &SerializedSequence, i: usize, j: usize) -> SerializedSequence {
    let mut entries = seq.entries().to_vec();
    entries[i..=j].reverse();
    SerializedSequence::new(entries)
}

/// Reassigns one uniformly chosen entry to a different uniformly chosen
/// capable robot; the entry's position is unchanged.
pub fn swap_robot<R: Rng>(
    seq: &SerializedSequence,
    scenario: &Scenario,
    rng: &mut R,
) -> SerializedSequence {
    for _ in 0..NEIGHBOR_RETRY_CAP {
        let index = rng.random_range(0..seq.len());
        let entry = seq.get(index);
        let alternatives: Vec<RobotId> = scenario
            .task(entry.task)
            .capable_robots
            .iter()
            .copied()
            .filter(|&r| r != entry.robot)
            .collect();
        if alternatives.is_empty() {
            continue;
        }
        let robot = alternatives[rng.random_range(0..alternatives.len())];
        return with_robot_at(seq, index, robot);
    }
    seq.clone()
}

/// Exchanges two distinct uniformly chosen entries; draws violating a
/// precedence constraint are rejected and resampled.
pub fn swap_random_elements<R: Rng>(
    seq: &SerializedSequence,
    scenario: &Scenario,
    rng: &mut R,
) -> SerializedSequence {
    for _ in 0..NEIGHBOR_RETRY_CAP {
        let i = rng.random_range(0..seq.len());
        let j = rng.random_range(0..seq.len());
        if i == j {
            continue;
        }
        let candidate = with_swapped(seq, i, j);
        if order_respects_precedence(candidate.entries(), scenario) {
            return candidate;
        }
    }
    seq.clone()
}

/// Reverses the entries between two uniformly chosen indices `i < j`
/// inclusive; rejection-sampled against precedence.
pub fn reverse_subtour<R: Rng>(
    seq: &SerializedSequence,
    scenario: &Scenario,
    rng: &mut R,
) -> SerializedSequence {
    for _ in 0..NEIGHBOR_RETRY_CAP {
        let a = rng.random_range(0..seq.len());
        let b = rng.random_range(0..seq.len());
        if a == b {
            continue;
        }
        let (i, j) = (a.min(b), a.max(b));
        let candidate = with_reversed(seq, i, j);
        if order_respects_precedence(candidate.entries(), scenario) {
            return candidate;
        }
    }
    seq.clone()
}

/// Relative probabilities of the three mutations.
#[derive(Clone, Copy, Debug)]
pub struct NeighborWeights {
    pub swap_robot: f64,
    pub swap_elements: f64,
    pub reverse_subtour: f64,
}

impl Default for NeighborWeights {
    fn default() -> Self {
        NeighborWeights {
            swap_robot: 1.0,
            swap_elements: 1.0,
            reverse_subtour: 1.0,
        }
    }
}

/// Draws one of the three mutations (equal probability by default) and
/// applies it. The result is always valid; if the sampled mutation cannot
/// produce a valid sequence within its retry budget, the input is returned
/// unchanged.
pub fn generate_neighbor<R: Rng>(
    seq: &SerializedSequence,
    scenario: &Scenario,
    rng: &mut R,
) -> SerializedSequence {
    generate_neighbor_weighted(seq, scenario, rng, NeighborWeights::default())
}

pub fn generate_neighbor_weighted<R: Rng>(
    seq: &SerializedSequence,
    scenario: &Scenario,
    rng: &mut R,
    weights: NeighborWeights,
) -> SerializedSequence {
    let total = weights.swap_robot + weights.swap_elements + weights.reverse_subtour;
    let r: f64 = rng.random::<f64>() * total;
    if r < weights.swap_robot {
        swap_robot(seq, scenario, rng)
    } else if r < weights.swap_robot + weights.swap_elements {
        swap_random_elements(seq, scenario, rng)
    } else {
        reverse_subtour(seq, scenario, rng)
    }
}

/// Deterministic greedy-alternating baseline: robots take turns in
/// round-robin; each picks the unassigned, precedence-ready, capable task
/// with the smallest straight-line lower bound from its current simulated
/// cell (ties broken by task id), then moves to that task's final action
/// cell.
pub fn greedy_baseline_sequence(
    scenario: &Scenario,
) -> Result<SerializedSequence, SequenceBuildError> {
    let mut positions: Vec<Cell> = scenario.robots().iter().map(|r| r.start).collect();
    let mut remaining: BTreeSet<TaskId> = scenario.task_ids().collect();
    let mut placed: BTreeSet<TaskId> = BTreeSet::new();
    let mut entries = Vec::with_capacity(remaining.len());
    let mut cursor = 0usize;
    let mut idle_turns = 0usize;
    while !remaining.is_empty() {
        let spec = &scenario.robots()[cursor % scenario.robot_count()];
        cursor += 1;
        let choice = remaining
            .iter()
            .copied()
            .filter(|&t| scenario.task(t).capable_robots.contains(&spec.id))
            .filter(|&t| is_ready(t, scenario, &placed))
            .min_by_key(|&t| {
                let target = scenario.task(t).kind.primary_cell();
                (
                    straight_line_lower_bound(positions[spec.id.index()], target, spec.max_speed),
                    t,
                )
            });
        match choice {
            None => {
                idle_turns += 1;
                if idle_turns >= scenario.robot_count() {
                    return Err(SequenceBuildError::NoFeasibleTask {
                        remaining: remaining.into_iter().collect(),
                    });
                }
            }
            Some(task) => {
                idle_turns = 0;
                entries.push(SequenceEntry::new(task, spec.id));
                positions[spec.id.index()] = scenario.task(task).kind.final_cell();
                remaining.remove(&task);
                placed.insert(task);
            }
        }
    }
    Ok(SerializedSequence::new(entries))
}

/// All tasks assigned to one robot in greedy nearest-first order. Fails if
/// any task does not list the robot as capable.
pub fn single_robot_sequence(
    scenario: &Scenario,
    robot: RobotId,
) -> Result<SerializedSequence, SequenceBuildError> {
    for task in scenario.tasks() {
        if !task.capable_robots.contains(&robot) {
            return Err(SequenceBuildError::RobotNotCapable {
                task: task.id,
                robot,
            });
        }
    }
    let spec = scenario.robot(robot);
    let mut position = spec.start;
    let mut remaining: BTreeSet<TaskId> = scenario.task_ids().collect();
    let mut placed: BTreeSet<TaskId> = BTreeSet::new();
    let mut entries = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let task = remaining
            .iter()
            .copied()
            .filter(|&t| is_ready(t, scenario, &placed))
            .min_by_key(|&t| {
                let target = scenario.task(t).kind.primary_cell();
                (
                    straight_line_lower_bound(position, target, spec.max_speed),
                    t,
                )
            })
            .expect("acyclic precedence always leaves a ready task");
        entries.push(SequenceEntry::new(task, robot));
        position = scenario.task(task).kind.final_cell();
        remaining.remove(&task);
        placed.insert(task);
    }
    Ok(SerializedSequence::new(entries))
}
