//! World model: workspace grid, robots, tasks, precedence constraints, and the
//! serialized robot-task sequence representation, plus scenario file I/O.
//!
//! A scenario lives on a 2D grid of unit cells. Robots are squares of side
//! `2 * radius + 1` centered on a cell and move at most `max_speed` cells per
//! timestep (Chebyshev metric). Tasks are either a single goal cell to visit
//! (`GoToPose`) or a pick cell followed by a place cell (`PickPlace`).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

/// Discrete time, in unit timesteps from the start of the plan.
pub type Timestep = u32;

/// A grid cell, 0-based coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i32; 2]", from = "[i32; 2]")]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    /// Chebyshev (chessboard) distance: the number of unit-speed timesteps
    /// needed to move between the two cells on an empty grid.
    pub fn chebyshev(self, other: Cell) -> u32 {
        let dx = (self.x - other.x).unsigned_abs();
        let dy = (self.y - other.y).unsigned_abs();
        dx.max(dy)
    }

    /// Euclidean distance between cell centers.
    pub fn euclidean(self, other: Cell) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        (dx * dx + dy * dy).sqrt()
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

impl From<[i32; 2]> for Cell {
    fn from(v: [i32; 2]) -> Self {
        Cell { x: v[0], y: v[1] }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// 1-based robot identifier. Robot ids in a scenario are contiguous `1..=R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RobotId(u32);

impl RobotId {
    pub const fn new(id: u32) -> Self {
        RobotId(id)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    /// Position in the scenario's robot list.
    pub const fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "robot {}", self.0)
    }
}

/// 1-based task identifier. Task ids in a scenario are contiguous `1..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskId(u32);

impl TaskId {
    pub const fn new(id: u32) -> Self {
        TaskId(id)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "task {}", self.0)
    }
}

/// Bounded grid with static obstacle cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    width: u32,
    height: u32,
    obstacles: BTreeSet<Cell>,
}

impl Workspace {
    pub fn new(width: u32, height: u32, obstacles: Vec<Cell>) -> Result<Self, ScenarioError> {
        if width == 0 || height == 0 {
            return Err(ScenarioError::Invalid(format!(
                "workspace must be at least 1x1, got {width}x{height}"
            )));
        }
        let ws = Workspace {
            width,
            height,
            obstacles: obstacles.into_iter().collect(),
        };
        for &c in &ws.obstacles {
            if !ws.in_bounds(c) {
                return Err(ScenarioError::Invalid(format!(
                    "obstacle {c} lies outside the {width}x{height} workspace"
                )));
            }
        }
        Ok(ws)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn obstacles(&self) -> impl Iterator<Item = Cell> + '_ {
        self.obstacles.iter().copied()
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as u32) < self.width && (c.y as u32) < self.height
    }

    pub fn is_obstacle(&self, c: Cell) -> bool {
        self.obstacles.contains(&c)
    }

    /// True iff a robot footprint of the given radius centered at `c` lies
    /// fully inside the grid and touches no static obstacle.
    pub fn footprint_free(&self, c: Cell, radius: u32) -> bool {
        let r = radius as i32;
        for dx in -r..=r {
            for dy in -r..=r {
                let cell = Cell::new(c.x + dx, c.y + dy);
                if !self.in_bounds(cell) || self.is_obstacle(cell) {
                    return false;
                }
            }
        }
        true
    }
}

/// True iff two square footprints centered at `a` and `b` intersect.
pub fn footprints_overlap(a: Cell, ra: u32, b: Cell, rb: u32) -> bool {
    let reach = (ra + rb) as i32;
    (a.x - b.x).abs() <= reach && (a.y - b.y).abs() <= reach
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobotSpec {
    pub id: RobotId,
    pub start: Cell,
    pub resting: Cell,
    /// Half-width of the square footprint; 0 means a single cell.
    pub radius: u32,
    /// Maximum Chebyshev displacement per timestep, at least 1.
    pub max_speed: u32,
}

/// What a task requires of its robot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskKind {
    GoToPose { goal: Cell },
    PickPlace { pick: Cell, place: Cell },
}

impl TaskKind {
    /// First action cell: the goal, or the pick cell.
    pub fn primary_cell(&self) -> Cell {
        match *self {
            TaskKind::GoToPose { goal } => goal,
            TaskKind::PickPlace { pick, .. } => pick,
        }
    }

    /// Where the robot ends up once the task is done.
    pub fn final_cell(&self) -> Cell {
        match *self {
            TaskKind::GoToPose { goal } => goal,
            TaskKind::PickPlace { place, .. } => place,
        }
    }

    pub fn action_cells(&self) -> Vec<Cell> {
        match *self {
            TaskKind::GoToPose { goal } => vec![goal],
            TaskKind::PickPlace { pick, place } => vec![pick, place],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSpec {
    pub id: TaskId,
    pub kind: TaskKind,
    /// Robots allowed to execute this task; never empty.
    pub capable_robots: BTreeSet<RobotId>,
    /// Timesteps the robot must hold each action cell after arriving.
    pub dwell: Timestep,
}

/// Acyclic set of `(before, after)` constraints on task finish order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrecedenceDag {
    edges: BTreeSet<(TaskId, TaskId)>,
}

impl PrecedenceDag {
    pub fn new(edges: Vec<(TaskId, TaskId)>) -> Self {
        PrecedenceDag {
            edges: edges.into_iter().collect(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (TaskId, TaskId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn predecessors(&self, task: TaskId) -> impl Iterator<Item = TaskId> + '_ {
        self.edges
            .iter()
            .filter(move |&&(_, after)| after == task)
            .map(|&(before, _)| before)
    }

    /// Kahn's algorithm; returns false if the edge set contains a cycle.
    fn is_acyclic(&self, task_count: u32) -> bool {
        let n = task_count as usize;
        let mut indegree = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            succ[a.index()].push(b.index());
            indegree[b.index()] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push(j);
                }
            }
        }
        seen == n
    }
}

/// A full problem instance. Immutable after construction; shared freely
/// across concurrent evaluations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    workspace: Workspace,
    robots: Vec<RobotSpec>,
    tasks: Vec<TaskSpec>,
    precedence: PrecedenceDag,
}

impl Scenario {
    pub fn new(
        workspace: Workspace,
        mut robots: Vec<RobotSpec>,
        mut tasks: Vec<TaskSpec>,
        precedence: PrecedenceDag,
    ) -> Result<Self, ScenarioError> {
        robots.sort_by_key(|r| r.id);
        tasks.sort_by_key(|t| t.id);
        let scenario = Scenario {
            workspace,
            robots,
            tasks,
            precedence,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));

        for (i, r) in self.robots.iter().enumerate() {
            if r.id.value() != i as u32 + 1 {
                return invalid(format!(
                    "robot ids must be contiguous 1..={}, found id {} at position {}",
                    self.robots.len(),
                    r.id.value(),
                    i + 1
                ));
            }
            if r.max_speed == 0 {
                return invalid(format!("{} has max_speed 0; must be positive", r.id));
            }
            for (name, cell) in [("start", r.start), ("resting", r.resting)] {
                if !self.workspace.footprint_free(cell, r.radius) {
                    return invalid(format!(
                        "{} {name} cell {cell} is out of bounds or collides with a static obstacle",
                        r.id
                    ));
                }
            }
        }
        for i in 0..self.robots.len() {
            for j in i + 1..self.robots.len() {
                let (a, b) = (&self.robots[i], &self.robots[j]);
                if footprints_overlap(a.resting, a.radius, b.resting, b.radius) {
                    return invalid(format!(
                        "resting footprints of {} and {} overlap",
                        a.id, b.id
                    ));
                }
                if footprints_overlap(a.start, a.radius, b.start, b.radius) {
                    return invalid(format!("start footprints of {} and {} overlap", a.id, b.id));
                }
            }
        }

        for (i, t) in self.tasks.iter().enumerate() {
            if t.id.value() != i as u32 + 1 {
                return invalid(format!(
                    "task ids must be contiguous 1..={}, found id {} at position {}",
                    self.tasks.len(),
                    t.id.value(),
                    i + 1
                ));
            }
            if t.capable_robots.is_empty() {
                return invalid(format!("{} has an empty capable robot set", t.id));
            }
            for &r in &t.capable_robots {
                if r.value() == 0 || r.value() > self.robots.len() as u32 {
                    return invalid(format!("{} names unknown {r} as capable", t.id));
                }
            }
            for cell in t.kind.action_cells() {
                if !self.workspace.in_bounds(cell) {
                    return invalid(format!("{} action cell {cell} is out of bounds", t.id));
                }
                if self.workspace.is_obstacle(cell) {
                    return invalid(format!("{} action cell {cell} is an obstacle", t.id));
                }
            }
        }

        for (a, b) in self.precedence.edges() {
            for id in [a, b] {
                if id.value() == 0 || id.value() > self.tasks.len() as u32 {
                    return invalid(format!("precedence edge references unknown {id}"));
                }
            }
            if a == b {
                return invalid(format!("precedence edge ({a}, {a}) is a self-loop"));
            }
        }
        if !self.precedence.is_acyclic(self.tasks.len() as u32) {
            return invalid("precedence constraints contain a cycle".to_string());
        }
        Ok(())
    }

    pub fn workspace(&self) -> &Workspace {
        &self.workspace
    }

    pub fn robots(&self) -> &[RobotSpec] {
        &self.robots
    }

    pub fn tasks(&self) -> &[TaskSpec] {
        &self.tasks
    }

    pub fn precedence(&self) -> &PrecedenceDag {
        &self.precedence
    }

    pub fn robot_count(&self) -> usize {
        self.robots.len()
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    /// Panics if the id is not part of this scenario.
    pub fn robot(&self, id: RobotId) -> &RobotSpec {
        &self.robots[id.index()]
    }

    /// Panics if the id is not part of this scenario.
    pub fn task(&self, id: TaskId) -> &TaskSpec {
        &self.tasks[id.index()]
    }

    pub fn robot_ids(&self) -> impl Iterator<Item = RobotId> + '_ {
        self.robots.iter().map(|r| r.id)
    }

    pub fn task_ids(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.tasks.iter().map(|t| t.id)
    }
}

/// One slot of a serialized sequence: this task, executed by this robot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub task: TaskId,
    pub robot: RobotId,
}

impl SequenceEntry {
    pub const fn new(task: TaskId, robot: RobotId) -> Self {
        SequenceEntry { task, robot }
    }
}

/// Total order over all (task, robot) pairs of a scenario. The position in
/// the sequence both assigns each task to a robot and imposes a strict order
/// on task finish times across robots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SerializedSequence {
    entries: Vec<SequenceEntry>,
}

impl SerializedSequence {
    pub fn new(entries: Vec<SequenceEntry>) -> Self {
        SerializedSequence { entries }
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        SerializedSequence {
            entries: pairs
                .iter()
                .map(|&(t, r)| SequenceEntry::new(TaskId::new(t), RobotId::new(r)))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[SequenceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> SequenceEntry {
        self.entries[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &SequenceEntry> {
        self.entries.iter()
    }
}

/// Why a sequence is not valid for a scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceViolation {
    WrongLength { expected: usize, actual: usize },
    UnknownTask(TaskId),
    UnknownRobot(RobotId),
    TaskRepeated(TaskId),
    RobotNotCapable { task: TaskId, robot: RobotId },
    PrecedenceViolated { before: TaskId, after: TaskId },
}

impl fmt::Display for SequenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceViolation::WrongLength { expected, actual } => {
                write!(
                    f,
                    "sequence has {actual} entries, scenario has {expected} tasks"
                )
            }
            SequenceViolation::UnknownTask(t) => write!(f, "unknown {t}"),
            SequenceViolation::UnknownRobot(r) => write!(f, "unknown {r}"),
            SequenceViolation::TaskRepeated(t) => write!(f, "{t} repeated"),
            SequenceViolation::RobotNotCapable { task, robot } => {
                write!(f, "{robot} is not capable of {task}")
            }
            SequenceViolation::PrecedenceViolated { before, after } => {
                write!(
                    f,
                    "precedence violated: {before} must finish before {after}"
                )
            }
        }
    }
}

impl std::error::Error for SequenceViolation {}

/// Checks every sequence invariant against the scenario: each task exactly
/// once, capability of the assigned robot, and topological consistency with
/// the precedence constraints. Violations are the return value, not errors.
pub fn validate_sequence(
    seq: &SerializedSequence,
    scenario: &Scenario,
) -> Result<(), SequenceViolation> {
    let n = scenario.task_count();
    if seq.len() != n {
        return Err(SequenceViolation::WrongLength {
            expected: n,
            actual: seq.len(),
        });
    }
    let mut seen: HashSet<TaskId> = HashSet::with_capacity(n);
    let mut position: BTreeMap<TaskId, usize> = BTreeMap::new();
    for (pos, entry) in seq.iter().enumerate() {
        if entry.task.value() == 0 || entry.task.value() > n as u32 {
            return Err(SequenceViolation::UnknownTask(entry.task));
        }
        if entry.robot.value() == 0 || entry.robot.value() > scenario.robot_count() as u32 {
            return Err(SequenceViolation::UnknownRobot(entry.robot));
        }
        if !seen.insert(entry.task) {
            return Err(SequenceViolation::TaskRepeated(entry.task));
        }
        if !scenario
            .task(entry.task)
            .capable_robots
            .contains(&entry.robot)
        {
            return Err(SequenceViolation::RobotNotCapable {
                task: entry.task,
                robot: entry.robot,
            });
        }
        position.insert(entry.task, pos);
    }
    for (before, after) in scenario.precedence().edges() {
        if position[&before] > position[&after] {
            return Err(SequenceViolation::PrecedenceViolated { before, after });
        }
    }
    Ok(())
}

/// Errors from loading or constructing scenarios.
#[derive(Debug)]
pub enum ScenarioError {
    Io(std::io::Error),
    /// Malformed file; the message carries serde's line/column context.
    Parse(String),
    /// A structural invariant is violated; the message names it.
    Invalid(String),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Io(e) => write!(f, "io error: {e}"),
            ScenarioError::Parse(msg) => write!(f, "parse error: {msg}"),
            ScenarioError::Invalid(msg) => write!(f, "invalid scenario: {msg}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<std::io::Error> for ScenarioError {
    fn from(e: std::io::Error) -> Self {
        ScenarioError::Io(e)
    }
}

// File-format DTOs. The on-disk dialect is JSON with these exact keys:
// workspace {width, height, obstacles}, robots [{id, start, resting, radius,
// max_speed}], tasks [{id, kind, goal | pick + place, capable, dwell}],
// precedence [[before, after], ...].

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    workspace: WorkspaceFile,
    robots: Vec<RobotFile>,
    tasks: Vec<TaskFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    precedence: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceFile {
    width: u32,
    height: u32,
    #[serde(default)]
    obstacles: Vec<[i32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobotFile {
    id: u32,
    start: [i32; 2],
    resting: [i32; 2],
    radius: u32,
    max_speed: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskFile {
    id: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pick: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    place: Option<[i32; 2]>,
    capable: Vec<u32>,
    #[serde(default)]
    dwell: u32,
}

fn scenario_from_file(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
    let workspace = Workspace::new(
        file.workspace.width,
        file.workspace.height,
        file.workspace
            .obstacles
            .into_iter()
            .map(Cell::from)
            .collect(),
    )?;
    let robots = file
        .robots
        .into_iter()
        .map(|r| RobotSpec {
            id: RobotId::new(r.id),
            start: Cell::from(r.start),
            resting: Cell::from(r.resting),
            radius: r.radius,
            max_speed: r.max_speed,
        })
        .collect();
    let tasks = file
        .tasks
        .into_iter()
        .map(|t| {
            let kind = match t.kind.as_str() {
                "goto" => match t.goal {
                    Some(goal) => TaskKind::GoToPose {
                        goal: Cell::from(goal),
                    },
                    None => {
                        return Err(ScenarioError::Parse(format!(
                            "task {}: kind \"goto\" requires a goal field",
                            t.id
                        )))
                    }
                },
                "pickplace" => match (t.pick, t.place) {
                    (Some(pick), Some(place)) => TaskKind::PickPlace {
                        pick: Cell::from(pick),
                        place: Cell::from(place),
                    },
                    _ => {
                        return Err(ScenarioError::Parse(format!(
                            "task {}: kind \"pickplace\" requires pick and place fields",
                            t.id
                        )))
                    }
                },
                other => {
                    return Err(ScenarioError::Parse(format!(
                        "task {}: unknown kind \"{other}\" (expected \"goto\" or \"pickplace\")",
                        t.id
                    )))
                }
            };
            Ok(TaskSpec {
                id: TaskId::new(t.id),
                kind,
                capable_robots: t.capable.into_iter().map(RobotId::new).collect(),
                dwell: t.dwell,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let precedence = PrecedenceDag::new(
        file.precedence
            .into_iter()
            .map(|[a, b]| (TaskId::new(a), TaskId::new(b)))
            .collect(),
    );
    Scenario::new(workspace, robots, tasks, precedence)
}

fn scenario_to_file(scenario: &Scenario) -> ScenarioFile {
    ScenarioFile {
        workspace: WorkspaceFile {
            width: scenario.workspace.width,
            height: scenario.workspace.height,
            obstacles: scenario
                .workspace
                .obstacles()
                .map(<[i32; 2]>::from)
                .collect(),
        },
        robots: scenario
            .robots
            .iter()
            .map(|r| RobotFile {
                id: r.id.value(),
                start: r.start.into(),
                resting: r.resting.into(),
                radius: r.radius,
                max_speed: r.max_speed,
            })
            .collect(),
        tasks: scenario
            .tasks
            .iter()
            .map(|t| {
                let (kind, goal, pick, place) = match t.kind {
                    TaskKind::GoToPose { goal } => ("goto", Some(goal.into()), None, None),
                    TaskKind::PickPlace { pick, place } => {
                        ("pickplace", None, Some(pick.into()), Some(place.into()))
                    }
                };
                TaskFile {
                    id: t.id.value(),
                    kind: kind.to_string(),
                    goal,
                    pick,
                    place,
                    capable: t.capable_robots.iter().map(|r| r.value()).collect(),
                    dwell: t.dwell,
                }
            })
            .collect(),
        precedence: scenario
            .precedence
            .edges()
            .map(|(a, b)| [a.value(), b.value()])
            .collect(),
    }
}

pub fn scenario_from_str(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scenario_from_file(file)
}

pub fn scenario_to_string(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario_to_file(scenario)).expect("scenario serializes")
}

/// Loads and fully validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    scenario_from_str(&text)
}

/// Writes a scenario such that `load_scenario` reads back an equal value.
pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    std::fs::write(path, scenario_to_string(scenario))?;
    Ok(())
}
