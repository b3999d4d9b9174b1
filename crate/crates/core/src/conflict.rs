//! Independent whole-plan validation. Reconstructs every robot's full
//! timeline from a [`PlanResult`] — start cell, committed task legs, final
//! escape, then stationary forever — and re-derives all collision and
//! ordering checks from scratch, without reusing the planner's search or
//! collision code.

use crate::evaluator::PlanResult;
use crate::scenario::{Cell, RobotId, Scenario, SerializedSequence, TaskKind, Timestep};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conflict {
    OutOfBounds {
        robot: RobotId,
        time: Timestep,
        cell: Cell,
    },
    StaticCollision {
        robot: RobotId,
        time: Timestep,
        cell: Cell,
    },
    SpeedExceeded {
        robot: RobotId,
        time: Timestep,
        from: Cell,
        to: Cell,
    },
    Discontinuity {
        robot: RobotId,
        time: Timestep,
    },
    VertexConflict {
        a: RobotId,
        b: RobotId,
        time: Timestep,
        at: Cell,
        bt: Cell,
    },
    SwapConflict {
        a: RobotId,
        b: RobotId,
        time: Timestep,
    },
    FinishOrderViolation {
        index: usize,
        previous: Timestep,
        current: Timestep,
    },
    TaskNotCompleted {
        index: usize,
        detail: String,
    },
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::OutOfBounds { robot, time, cell } => {
                write!(f, "{robot} leaves the workspace at t={time} ({cell})")
            }
            Conflict::StaticCollision { robot, time, cell } => {
                write!(f, "{robot} hits a static obstacle at t={time} ({cell})")
            }
            Conflict::SpeedExceeded {
                robot,
                time,
                from,
                to,
            } => {
                write!(
                    f,
                    "{robot} moves {from} -> {to} at t={time}, above its max speed"
                )
            }
            Conflict::Discontinuity { robot, time } => {
                write!(f, "{robot} timeline has a gap at t={time}")
            }
            Conflict::VertexConflict { a, b, time, at, bt } => {
                write!(f, "{a} at {at} and {b} at {bt} overlap at t={time}")
            }
            Conflict::SwapConflict { a, b, time } => {
                write!(f, "{a} and {b} exchange cells across t={time}")
            }
            Conflict::FinishOrderViolation {
                index,
                previous,
                current,
            } => {
                write!(
                    f,
                    "finish time {current} of entry {index} is not after {previous}"
                )
            }
            Conflict::TaskNotCompleted { index, detail } => {
                write!(f, "entry {index} not completed: {detail}")
            }
        }
    }
}

/// A robot's position at every timestep `0..=horizon`, rebuilt directly from
/// the plan. Gaps and leg mismatches are reported instead of panicking.
fn rebuild_timeline(
    scenario: &Scenario,
    plan: &PlanResult,
    robot: RobotId,
    horizon: Timestep,
    conflicts: &mut Vec<Conflict>,
) -> Vec<Cell> {
    let spec = scenario.robot(robot);
    let robot_plan = plan.plan_of(robot);
    let mut positions = vec![spec.start; (horizon + 1) as usize];
    let mut cursor_cell = spec.start;
    let mut cursor_time: Timestep = 0;

    let legs = robot_plan
        .task_legs
        .iter()
        .map(|l| &l.trajectory)
        .chain(robot_plan.final_escape.iter());
    for traj in legs {
        if traj.start_time != cursor_time {
            conflicts.push(Conflict::Discontinuity {
                robot,
                time: cursor_time,
            });
        }
        if traj.start_cell() != cursor_cell {
            conflicts.push(Conflict::Discontinuity {
                robot,
                time: traj.start_time,
            });
        }
        for (k, &cell) in traj.cells.iter().enumerate() {
            let t = traj.start_time + k as Timestep;
            if t <= horizon {
                positions[t as usize] = cell;
            }
        }
        cursor_cell = traj.end_cell();
        cursor_time = traj.end_time();
    }
    // Parked at the last cell from then on.
    for t in cursor_time..=horizon {
        positions[t as usize] = cursor_cell;
    }
    positions
}

fn footprint_cells(center: Cell, radius: u32) -> Vec<Cell> {
    let r = radius as i32;
    let mut cells = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
    for dx in -r..=r {
        for dy in -r..=r {
            cells.push(Cell::new(center.x + dx, center.y + dy));
        }
    }
    cells
}

fn squares_intersect(a: Cell, ra: u32, b: Cell, rb: u32) -> bool {
    // Interval overlap on both axes.
    let (ra, rb) = (ra as i32, rb as i32);
    a.x - ra <= b.x + rb && b.x - rb <= a.x + ra && a.y - ra <= b.y + rb && b.y - rb <= a.y + ra
}

/// Checks workspace bounds, static obstacles, per-robot speed and timeline
/// continuity, pairwise footprint overlaps, swap conflicts, and strictly
/// increasing finish times. Returns every conflict found; an empty vector
/// means the plan is valid.
pub fn check_plan(scenario: &Scenario, plan: &PlanResult) -> Vec<Conflict> {
    let mut conflicts = Vec::new();
    let ws = scenario.workspace();

    let horizon = plan
        .robot_plans
        .iter()
        .flat_map(|rp| {
            rp.task_legs
                .iter()
                .map(|l| l.trajectory.end_time())
                .chain(rp.final_escape.iter().map(|e| e.end_time()))
        })
        .max()
        .unwrap_or(0)
        + 2;

    let timelines: Vec<Vec<Cell>> = scenario
        .robot_ids()
        .map(|r| rebuild_timeline(scenario, plan, r, horizon, &mut conflicts))
        .collect();

    for spec in scenario.robots() {
        let line = &timelines[spec.id.index()];
        for t in 0..=horizon {
            let cell = line[t as usize];
            for fp in footprint_cells(cell, spec.radius) {
                if !ws.in_bounds(fp) {
                    conflicts.push(Conflict::OutOfBounds {
                        robot: spec.id,
                        time: t,
                        cell: fp,
                    });
                } else if ws.is_obstacle(fp) {
                    conflicts.push(Conflict::StaticCollision {
                        robot: spec.id,
                        time: t,
                        cell: fp,
                    });
                }
            }
            if t > 0 {
                let prev = line[(t - 1) as usize];
                let step = (prev.x - cell.x)
                    .unsigned_abs()
                    .max((prev.y - cell.y).unsigned_abs());
                if step > spec.max_speed {
                    conflicts.push(Conflict::SpeedExceeded {
                        robot: spec.id,
                        time: t,
                        from: prev,
                        to: cell,
                    });
                }
            }
        }
    }

    let robots = scenario.robots();
    for i in 0..robots.len() {
        for j in i + 1..robots.len() {
            let (a, b) = (&robots[i], &robots[j]);
            let (la, lb) = (&timelines[i], &timelines[j]);
            for t in 0..=horizon {
                let (pa, pb) = (la[t as usize], lb[t as usize]);
                if squares_intersect(pa, a.radius, pb, b.radius) {
                    conflicts.push(Conflict::VertexConflict {
                        a: a.id,
                        b: b.id,
                        time: t,
                        at: pa,
                        bt: pb,
                    });
                }
                if t > 0 {
                    let (qa, qb) = (la[(t - 1) as usize], lb[(t - 1) as usize]);
                    if pa == qb && pb == qa && pa != qa {
                        conflicts.push(Conflict::SwapConflict {
                            a: a.id,
                            b: b.id,
                            time: t,
                        });
                    }
                }
            }
        }
    }

    for (index, w) in plan.finish_times.windows(2).enumerate() {
        if w[1] <= w[0] {
            conflicts.push(Conflict::FinishOrderViolation {
                index: index + 1,
                previous: w[0],
                current: w[1],
            });
        }
    }

    conflicts
}

/// [`check_plan`] plus task completion: at each entry's finish time the
/// assigned robot must have held the task's final action cell for the dwell
/// duration, and pick-place robots must have held the pick cell beforehand.
pub fn check_plan_with_sequence(
    scenario: &Scenario,
    plan: &PlanResult,
    seq: &SerializedSequence,
) -> Vec<Conflict> {
    let mut conflicts = check_plan(scenario, plan);
    if plan.finish_times.len() != seq.len() {
        conflicts.push(Conflict::TaskNotCompleted {
            index: 0,
            detail: format!(
                "plan has {} finish times for {} entries",
                plan.finish_times.len(),
                seq.len()
            ),
        });
        return conflicts;
    }

    let horizon = plan.finish_times.iter().copied().max().unwrap_or(0) + 1;
    let mut scratch = Vec::new();
    let timelines: Vec<Vec<Cell>> = scenario
        .robot_ids()
        .map(|r| rebuild_timeline(scenario, plan, r, horizon, &mut scratch))
        .collect();

    let held_through = |line: &[Cell], cell: Cell, end: Timestep, dwell: Timestep| -> bool {
        if end < dwell {
            return false;
        }
        (end - dwell..=end).all(|t| line[t as usize] == cell)
    };

    for (index, entry) in seq.iter().enumerate() {
        let task = scenario.task(entry.task);
        let finish = plan.finish_times[index];
        let line = &timelines[entry.robot.index()];
        let final_cell = task.kind.final_cell();
        if !held_through(line, final_cell, finish, task.dwell) {
            conflicts.push(Conflict::TaskNotCompleted {
                index,
                detail: format!(
                    "{} does not hold {final_cell} through t={finish}",
                    entry.robot
                ),
            });
        }
        if let TaskKind::PickPlace { pick, .. } = task.kind {
            let picked = (0..=finish).any(|t| held_through(line, pick, t, task.dwell));
            if !picked {
                conflicts.push(Conflict::TaskNotCompleted {
                    index,
                    detail: format!("{} never holds the pick cell {pick}", entry.robot),
                });
            }
        }
    }
    conflicts
}
