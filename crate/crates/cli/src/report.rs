//! Run reports and trace tables. Reports are JSON (the same dialect as
//! scenario files) and round-trip exactly; traces are CSV with the header
//! `wall_s,candidate_makespan,best_makespan,outer,inner`.

use seqplan::evaluator::{PlanResult, RobotPlan, TaskLeg};
use seqplan::optimizer::{Optimized, SearchTrace, TraceSample};
use seqplan::planner::Trajectory;
use seqplan::scenario::{RobotId, SerializedSequence, TaskId, Timestep};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfigEcho {
    pub seed: u64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub time_budget_s: Option<f64>,
    pub prune: bool,
    pub use_cache: bool,
    pub workers: usize,
    pub robot: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskFinish {
    pub task: u32,
    pub robot: u32,
    pub finish: Timestep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegDump {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub task: Option<u32>,
    pub start_time: Timestep,
    pub cells: Vec<[i32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotDump {
    pub robot: u32,
    pub legs: Vec<LegDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub wall_s: f64,
    pub candidate_makespan: Timestep,
    pub best_makespan: Timestep,
    pub outer: usize,
    pub inner: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub method: String,
    pub config: RunConfigEcho,
    pub makespan: Timestep,
    pub wall_time_s: f64,
    pub sequence: Vec<[u32; 2]>,
    pub finish_times: Vec<TaskFinish>,
    pub trajectories: Vec<RobotDump>,
    pub trace: Vec<TraceRow>,
}

impl RunReport {
    pub fn new(
        scenario_name: &str,
        method: &str,
        config: RunConfigEcho,
        out: &Optimized,
        wall_time_s: f64,
    ) -> Self {
        RunReport {
            scenario: scenario_name.to_string(),
            method: method.to_string(),
            config,
            makespan: out.plan.makespan,
            wall_time_s,
            sequence: out
                .sequence
                .iter()
                .map(|e| [e.task.value(), e.robot.value()])
                .collect(),
            finish_times: out
                .sequence
                .iter()
                .zip(&out.plan.finish_times)
                .map(|(e, &finish)| TaskFinish {
                    task: e.task.value(),
                    robot: e.robot.value(),
                    finish,
                })
                .collect(),
            trajectories: out
                .plan
                .robot_plans
                .iter()
                .map(|rp| RobotDump {
                    robot: rp.robot.value(),
                    legs: rp
                        .task_legs
                        .iter()
                        .map(|leg| LegDump {
                            kind: "task".to_string(),
                            task: Some(leg.task.value()),
                            start_time: leg.trajectory.start_time,
                            cells: leg.trajectory.cells.iter().map(|&c| c.into()).collect(),
                        })
                        .chain(rp.final_escape.iter().map(|esc| LegDump {
                            kind: "escape".to_string(),
                            task: None,
                            start_time: esc.start_time,
                            cells: esc.cells.iter().map(|&c| c.into()).collect(),
                        }))
                        .collect(),
                })
                .collect(),
            trace: out
                .trace
                .samples
                .iter()
                .map(|s| TraceRow {
                    wall_s: s.wall_s,
                    candidate_makespan: s.candidate_makespan,
                    best_makespan: s.best_makespan,
                    outer: s.outer,
                    inner: s.inner,
                })
                .collect(),
        }
    }

    pub fn sequence_value(&self) -> SerializedSequence {
        SerializedSequence::from_pairs(
            &self
                .sequence
                .iter()
                .map(|&[t, r]| (t, r))
                .collect::<Vec<_>>(),
        )
    }

    /// Rebuilds the joint plan for the independent conflict checker.
    pub fn to_plan_result(&self) -> Result<PlanResult, String> {
        let robot_plans = self
            .trajectories
            .iter()
            .map(|dump| {
                let robot = RobotId::new(dump.robot);
                let mut task_legs = Vec::new();
                let mut final_escape = None;
                for leg in &dump.legs {
                    let trajectory = Trajectory {
                        robot,
                        start_time: leg.start_time,
                        cells: leg.cells.iter().map(|&c| c.into()).collect(),
                    };
                    match leg.kind.as_str() {
                        "task" => {
                            let task = leg
                                .task
                                .ok_or_else(|| "task leg without task id".to_string())?;
                            task_legs.push(TaskLeg {
                                task: TaskId::new(task),
                                trajectory,
                            });
                        }
                        "escape" => final_escape = Some(trajectory),
                        other => return Err(format!("unknown leg kind \"{other}\"")),
                    }
                }
                Ok(RobotPlan {
                    robot,
                    task_legs,
                    final_escape,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(PlanResult {
            robot_plans,
            finish_times: self.finish_times.iter().map(|f| f.finish).collect(),
            makespan: self.makespan,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

pub fn trace_to_csv(trace: &SearchTrace) -> String {
    let mut csv = String::from("wall_s,candidate_makespan,best_makespan,outer,inner\n");
    for TraceSample {
        wall_s,
        candidate_makespan,
        best_makespan,
        outer,
        inner,
    } in &trace.samples
    {
        csv.push_str(&format!(
            "{wall_s:.6},{candidate_makespan},{best_makespan},{outer},{inner}\n"
        ));
    }
    csv
}
