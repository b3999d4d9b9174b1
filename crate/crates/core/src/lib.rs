//! Makespan minimization for multi-robot task plans.
//!
//! The problem: several disc robots on a shared 2D grid must complete a set
//! of tasks (go-to-pose or pick-and-place), each executable by one robot,
//! possibly under precedence constraints, while never colliding. The
//! objective is the makespan: the finish time of the last task.
//!
//! The approach searches over *serialized sequences* — one total order over
//! all (task, robot) pairs that both assigns robots and orders task finish
//! times — using greedy descent with random restarts. Each candidate
//! sequence is scored by planning its entries one by one with an exact
//! space-time A* that treats previously committed trajectories as moving
//! obstacles. After each task a tentative escape path to the robot's resting
//! cell keeps later queries feasible; it is discarded when that robot plans
//! its next task. Prefix caching reuses committed plans across neighboring
//! candidates, and an admissible lower bound can prune candidates that
//! cannot beat the incumbent.

pub mod conflict;
pub mod evaluator;
pub mod optimizer;
pub mod planner;
pub mod scenario;
pub mod search;

pub use evaluator::{EvalConfig, EvalOutcome, PlanResult, PrefixCache};
pub use optimizer::{optimize, run_baseline, BaselineKind, OptimizerConfig, SearchTrace};
pub use scenario::{
    load_scenario, save_scenario, validate_sequence, Cell, RobotId, Scenario, SerializedSequence,
    TaskId, Timestep,
};
