//! Benchmark front end: run the sequence optimizer or the greedy/single
//! baselines on scenario files, write machine-readable reports and traces,
//! compare methods across seeds, and validate scenarios, sequences, and
//! saved reports.

mod report;

use report::{trace_to_csv, RunConfigEcho, RunReport};
use seqplan::conflict::{check_plan, check_plan_with_sequence};
use seqplan::optimizer::{optimize, run_baseline, BaselineKind, OptimizeError, OptimizerConfig};
use seqplan::scenario::{load_scenario, validate_sequence, RobotId, Scenario, SerializedSequence};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const USAGE: &str = "\
seqplan <command> [flags]

Commands:
  run       Plan one scenario with one method and write a report + trace.
  compare   Run all methods on a scenario list across seeds; print a summary.
  validate  Check a scenario file, and optionally a sequence or a report.

Flags (run):
  --scenario PATH        scenario file (required)
  --method M             optimize | greedy | single (required)
  --robot ID             robot for --method single
  --seed U64             optimizer seed (default 0)
  --max-outer N          random restarts (default 10)
  --max-inner N          neighbor evaluations per restart (default 20)
  --time-budget SECONDS  anytime stop between evaluations
  --no-prune             disable lower-bound pruning
  --no-cache             disable the prefix cache
  --workers N            parallel restarts (default 1)
  --out DIR              output directory (required)

Flags (compare):
  --scenario PATH        may be given multiple times (required)
  --seeds N              seeds per scenario (default 5)
  --seed U64             first seed (default 0)
  --max-outer / --max-inner / --time-budget / --workers as in run
  --out DIR              also write compare.csv here

Flags (validate):
  --scenario PATH        scenario file (required)
  --sequence PATH        JSON [[task, robot], ...] to validate
  --report PATH          saved report to re-check for conflicts

Exit codes: 0 success, 1 usage, 2 validation, 3 infeasible.";

enum CliError {
    Usage(String),
    Validation(String),
    Infeasible(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Infeasible(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Infeasible(m) => m,
        }
    }
}

impl From<OptimizeError> for CliError {
    fn from(e: OptimizeError) -> Self {
        match e {
            OptimizeError::InvalidConfig(m) => CliError::Usage(m),
            other => CliError::Infeasible(other.to_string()),
        }
    }
}

#[derive(Default)]
struct Args {
    scenarios: Vec<PathBuf>,
    method: Option<String>,
    robot: Option<u32>,
    seed: u64,
    seeds: usize,
    max_outer: usize,
    max_inner: usize,
    time_budget: Option<f64>,
    no_prune: bool,
    no_cache: bool,
    workers: usize,
    out: Option<PathBuf>,
    sequence: Option<PathBuf>,
    report: Option<PathBuf>,
}

fn parse_args(argv: &[String]) -> Result<Args, CliError> {
    let defaults = OptimizerConfig::default();
    let mut args = Args {
        seeds: 5,
        max_outer: defaults.max_outer_iter,
        max_inner: defaults.max_inner_iter,
        workers: defaults.workers,
        ..Args::default()
    };
    let mut it = argv.iter();
    while let Some(flag) = it.next() {
        let mut value = |name: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("flag {name} needs a value")))
        };
        match flag.as_str() {
            "--scenario" => args.scenarios.push(PathBuf::from(value("--scenario")?)),
            "--method" => args.method = Some(value("--method")?),
            "--robot" => {
                args.robot = Some(parse_num(&value("--robot")?, "--robot")?);
            }
            "--seed" => args.seed = parse_num(&value("--seed")?, "--seed")?,
            "--seeds" => args.seeds = parse_num(&value("--seeds")?, "--seeds")?,
            "--max-outer" => args.max_outer = parse_num(&value("--max-outer")?, "--max-outer")?,
            "--max-inner" => args.max_inner = parse_num(&value("--max-inner")?, "--max-inner")?,
            "--time-budget" => {
                let raw = value("--time-budget")?;
                let secs: f64 = raw.parse().map_err(|_| {
                    CliError::Usage(format!("--time-budget expects seconds, got \"{raw}\""))
                })?;
                args.time_budget = Some(secs);
            }
            "--no-prune" => args.no_prune = true,
            "--no-cache" => args.no_cache = true,
            "--workers" => args.workers = parse_num(&value("--workers")?, "--workers")?,
            "--out" => args.out = Some(PathBuf::from(value("--out")?)),
            "--sequence" => args.sequence = Some(PathBuf::from(value("--sequence")?)),
            "--report" => args.report = Some(PathBuf::from(value("--report")?)),
            other => return Err(CliError::Usage(format!("unknown flag \"{other}\""))),
        }
    }
    Ok(args)
}

fn parse_num<T: std::str::FromStr>(raw: &str, flag: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("{flag} expects a number, got \"{raw}\"")))
}

fn optimizer_config(args: &Args, seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        max_outer_iter: args.max_outer,
        max_inner_iter: args.max_inner,
        seed,
        prune_with_lower_bound: !args.no_prune,
        time_budget: args.time_budget.map(Duration::from_secs_f64),
        workers: args.workers,
        use_cache: !args.no_cache,
        ..OptimizerConfig::default()
    }
}

fn scenario_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string())
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    load_scenario(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn cmd_run(args: &Args) -> Result<(), CliError> {
    let path = args
        .scenarios
        .first()
        .ok_or_else(|| CliError::Usage("run needs --scenario".to_string()))?;
    let method = args
        .method
        .clone()
        .ok_or_else(|| CliError::Usage("run needs --method".to_string()))?;
    let out_dir = args
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("run needs --out".to_string()))?;
    let scenario = load(path)?;
    let config = optimizer_config(args, args.seed);

    let started = Instant::now();
    let optimized = match method.as_str() {
        "optimize" => optimize(&scenario, &config)?,
        "greedy" => run_baseline(&scenario, BaselineKind::Greedy, &config)?,
        "single" => {
            let robot = args
                .robot
                .ok_or_else(|| CliError::Usage("--method single needs --robot".to_string()))?;
            if robot == 0 || robot as usize > scenario.robot_count() {
                return Err(CliError::Validation(format!(
                    "robot {robot} does not exist; scenario has {} robots",
                    scenario.robot_count()
                )));
            }
            run_baseline(
                &scenario,
                BaselineKind::Single(RobotId::new(robot)),
                &config,
            )?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown method \"{other}\" (expected optimize, greedy, or single)"
            )))
        }
    };
    let wall_time_s = started.elapsed().as_secs_f64();

    let conflicts = check_plan_with_sequence(&scenario, &optimized.plan, &optimized.sequence);
    if !conflicts.is_empty() {
        let listing: Vec<String> = conflicts.iter().map(|c| c.to_string()).collect();
        return Err(CliError::Validation(format!(
            "internal error: produced plan fails the conflict check: {}",
            listing.join("; ")
        )));
    }

    let stem = scenario_stem(path);
    let echo = RunConfigEcho {
        seed: args.seed,
        max_outer: args.max_outer,
        max_inner: args.max_inner,
        time_budget_s: args.time_budget,
        prune: !args.no_prune,
        use_cache: !args.no_cache,
        workers: args.workers,
        robot: args.robot,
    };
    let report = RunReport::new(&stem, &method, echo, &optimized, wall_time_s);

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Validation(format!("cannot create {}: {e}", out_dir.display())))?;
    let robot_suffix = args
        .robot
        .filter(|_| method == "single")
        .map(|r| format!("_r{r}"))
        .unwrap_or_default();
    let base = format!("{stem}_{method}{robot_suffix}_s{}", args.seed);
    let report_path = out_dir.join(format!("{base}.report.json"));
    let trace_path = out_dir.join(format!("{base}.trace.csv"));
    std::fs::write(&report_path, report.to_json())
        .map_err(|e| CliError::Validation(format!("cannot write report: {e}")))?;
    std::fs::write(&trace_path, trace_to_csv(&optimized.trace))
        .map_err(|e| CliError::Validation(format!("cannot write trace: {e}")))?;

    println!(
        "scenario={stem} method={method} makespan={} evaluations={} wall_s={wall_time_s:.3}",
        optimized.plan.makespan,
        optimized.trace.samples.len(),
    );
    println!("report={}", report_path.display());
    println!("trace={}", trace_path.display());
    Ok(())
}

fn median_u32(values: &[u32]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

fn cmd_compare(args: &Args) -> Result<(), CliError> {
    if args.scenarios.is_empty() {
        return Err(CliError::Usage(
            "compare needs at least one --scenario".to_string(),
        ));
    }
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".to_string()));
    }
    let mut rows = Vec::new();
    println!(
        "{:<12} {:>8} {:>8} {:>12} {:>11} {:>11}",
        "scenario", "greedy", "single", "optimize_med", "opt/greedy", "opt/single"
    );
    for path in &args.scenarios {
        let scenario = load(path)?;
        let stem = scenario_stem(path);
        let config = optimizer_config(args, args.seed);

        let greedy = run_baseline(&scenario, BaselineKind::Greedy, &config)
            .map(|o| o.plan.makespan)
            .ok();
        let single = scenario
            .robot_ids()
            .filter_map(|r| {
                run_baseline(&scenario, BaselineKind::Single(r), &config)
                    .map(|o| o.plan.makespan)
                    .ok()
            })
            .min();
        let mut optimized = Vec::with_capacity(args.seeds);
        for i in 0..args.seeds {
            let config = optimizer_config(args, args.seed + i as u64);
            optimized.push(optimize(&scenario, &config)?.plan.makespan);
        }
        let med = median_u32(&optimized);

        let fmt_opt = |v: Option<u32>| v.map_or("-".to_string(), |m| m.to_string());
        let ratio =
            |v: Option<u32>| v.map_or("-".to_string(), |m| format!("{:.3}", med / m as f64));
        println!(
            "{:<12} {:>8} {:>8} {:>12.1} {:>11} {:>11}",
            stem,
            fmt_opt(greedy),
            fmt_opt(single),
            med,
            ratio(greedy),
            ratio(single)
        );
        rows.push(format!(
            "{stem},{},{},{med},{},{}",
            fmt_opt(greedy),
            fmt_opt(single),
            ratio(greedy),
            ratio(single)
        ));
    }
    if let Some(out_dir) = &args.out {
        std::fs::create_dir_all(out_dir).map_err(|e| {
            CliError::Validation(format!("cannot create {}: {e}", out_dir.display()))
        })?;
        let csv = format!(
            "scenario,greedy,single,optimize_median,opt_over_greedy,opt_over_single\n{}\n",
            rows.join("\n")
        );
        std::fs::write(out_dir.join("compare.csv"), csv)
            .map_err(|e| CliError::Validation(format!("cannot write compare.csv: {e}")))?;
    }
    Ok(())
}

fn cmd_validate(args: &Args) -> Result<(), CliError> {
    let path = args
        .scenarios
        .first()
        .ok_or_else(|| CliError::Usage("validate needs --scenario".to_string()))?;
    let scenario = load(path)?;
    println!(
        "scenario ok: {} robots, {} tasks, {} precedence edges",
        scenario.robot_count(),
        scenario.task_count(),
        scenario.precedence().edges().count()
    );

    if let Some(seq_path) = &args.sequence {
        let text = std::fs::read_to_string(seq_path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", seq_path.display())))?;
        let pairs: Vec<[u32; 2]> = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", seq_path.display())))?;
        let seq =
            SerializedSequence::from_pairs(&pairs.iter().map(|&[t, r]| (t, r)).collect::<Vec<_>>());
        validate_sequence(&seq, &scenario)
            .map_err(|v| CliError::Validation(format!("sequence invalid: {v}")))?;
        println!("sequence ok: {} entries", seq.len());
    }

    if let Some(report_path) = &args.report {
        let text = std::fs::read_to_string(report_path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", report_path.display())))?;
        let report = RunReport::from_json(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", report_path.display())))?;
        let plan = report
            .to_plan_result()
            .map_err(|e| CliError::Validation(format!("report invalid: {e}")))?;
        let seq = report.sequence_value();
        let conflicts = if seq.len() == plan.finish_times.len() {
            check_plan_with_sequence(&scenario, &plan, &seq)
        } else {
            check_plan(&scenario, &plan)
        };
        if !conflicts.is_empty() {
            for c in &conflicts {
                eprintln!("conflict: {c}");
            }
            return Err(CliError::Validation(format!(
                "report plan has {} conflicts",
                conflicts.len()
            )));
        }
        println!("report ok: makespan {}, no conflicts", report.makespan);
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = argv.first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(1);
    };
    if command == "--help" || command == "-h" || command == "help" {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let result = match parse_args(&argv[1..]) {
        Ok(args) => match command.as_str() {
            "run" => cmd_run(&args),
            "compare" => cmd_compare(&args),
            "validate" => cmd_validate(&args),
            other => Err(CliError::Usage(format!("unknown command \"{other}\""))),
        },
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\n{USAGE}");
            }
            e.exit_code()
        }
    }
}
