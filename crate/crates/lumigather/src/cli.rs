//! Command-line surface: run single simulations, parameter sweeps, adversary
//! searches, trace replays, the invariant suite, and SVG plots.
//!
//! Exit codes: `run` returns 0 on Gathered, 2 on RoundLimit, 3 on a monitor
//! violation, 1 on usage errors. `adversary` returns 0 with a certificate,
//! 2 when inconclusive, 4 when a gathering witness turned up. `replay`
//! returns 2 on a byte mismatch. `sweep` returns 3 if any cell violated a
//! monitor. `check` returns 1 if any check failed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lumigather_core::adversary::{
    build_adversarial_schedule, enumerate_two_color_tables, validate_certificate,
    AdversaryOutcome, RuleTable, TwoRobotState,
};
use lumigather_core::engine::{self, RunConfig, TerminalStatus};
use lumigather_core::model::{Color, LightModel};

use crate::{check, plot, sweep, trace};

#[derive(Parser)]
#[command(
    name = "lumigather",
    about = "Deterministic Look-Compute-Move robot simulator with lights",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a JSON config and write a JSONL trace.
    Run(RunArgs),
    /// Run a grid of simulations and write traces plus a CSV summary.
    Sweep(SweepArgs),
    /// Search for a non-gathering schedule against a two-robot rule table.
    Adversary(AdversaryArgs),
    /// Re-run the config embedded in a trace and compare byte for byte.
    Replay(ReplayArgs),
    /// Run the built-in invariant suite.
    Check(CheckArgs),
    /// Render robot trajectories from a trace as SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Trace output path (JSONL).
    #[arg(long)]
    out: PathBuf,
    /// Replace every seed in the config with this one.
    #[arg(long)]
    seed_override: Option<u64>,
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Allow a prohibited initial pattern (failure demonstration runs).
    #[arg(long)]
    negative_test: bool,
    /// Toggle the runtime monitors.
    #[arg(long, value_parser = ["on", "off"])]
    monitors: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid spec JSON.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for traces and summary.csv.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Rule table JSON; omit with --exhaustive to sweep the 2-color tables.
    #[arg(long, required_unless_present = "exhaustive")]
    table: Option<PathBuf>,
    /// Certificate output path (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Sweep every 2-color single-class table with moves {0, 1/2, 1} for
    /// both models instead of reading one table.
    #[arg(long)]
    exhaustive: bool,
    /// Search budget in rounds.
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
    /// Starting distance of the symmetric all-A state.
    #[arg(long, default_value_t = 2.0)]
    init_distance: f64,
}

#[derive(Args)]
struct ReplayArgs {
    /// Trace to replay (JSONL with embedded config).
    #[arg(long)]
    trace: PathBuf,
    /// Optional path for the re-simulated trace.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 12345)]
    seed: u64,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    trace: PathBuf,
    /// SVG output path.
    #[arg(long)]
    out: PathBuf,
    /// Round range "a..b" to overlay longest segments and enclosing circles.
    #[arg(long)]
    rounds: Option<String>,
}

fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    1
}

fn override_seeds(config: &mut RunConfig, seed: u64) {
    config.seed = seed;
    use lumigather_core::scheduling::{MovementPolicy, SchedulePolicy};
    match &mut config.schedule {
        SchedulePolicy::SsynchRandomFair { seed: s, .. }
        | SchedulePolicy::Cent { seed: s, .. }
        | SchedulePolicy::KBounded { seed: s, .. } => *s = seed,
        _ => {}
    }
    if let MovementPolicy::NonRigidRandom { seed: s, .. } = &mut config.movement {
        *s = seed;
    }
}

fn cmd_run(args: RunArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("reading {}: {e}", args.config.display())),
    };
    let mut config: RunConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return usage_error(format!("parsing config: {e}")),
    };
    if let Some(seed) = args.seed_override {
        override_seeds(&mut config, seed);
    }
    if let Some(max_rounds) = args.max_rounds {
        config.max_rounds = max_rounds;
    }
    if args.negative_test {
        config.negative_test = true;
    }
    if let Some(m) = &args.monitors {
        config.monitors = m == "on";
    }
    let result = match engine::run(&config) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = trace::write_jsonl(&args.out, &config, &result) {
        return usage_error(e);
    }
    match result.status {
        TerminalStatus::Gathered { round } => {
            log::info!("gathered after {round} rounds");
            println!("Gathered after {round} rounds -> {}", args.out.display());
            0
        }
        TerminalStatus::RoundLimit => {
            println!("RoundLimit after {} rounds -> {}", result.rounds.len(), args.out.display());
            2
        }
        TerminalStatus::MonitorViolation { detail } => {
            eprintln!("MonitorViolation: {detail}");
            3
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("reading {}: {e}", args.config.display())),
    };
    let spec: sweep::GridSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => return usage_error(format!("parsing grid spec: {e}")),
    };
    let summary = match sweep::run_sweep(&spec, &args.out, args.jobs) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let gathered = summary
        .results
        .iter()
        .filter(|r| r.status == "Gathered")
        .count();
    println!(
        "{} cells: {} gathered, {} monitor violations -> {}",
        summary.results.len(),
        gathered,
        summary.monitor_violations,
        args.out.join("summary.csv").display()
    );
    if summary.monitor_violations > 0 {
        3
    } else {
        0
    }
}

fn cmd_adversary(args: AdversaryArgs) -> i32 {
    let init = |_table: &RuleTable| {
        TwoRobotState::symmetric(Color::A, args.init_distance)
    };
    if args.exhaustive {
        let mut outcomes: Vec<serde_json::Value> = Vec::new();
        let mut certified = 0usize;
        let mut total = 0usize;
        for model in [LightModel::Fstate, LightModel::Fcomm] {
            for table in enumerate_two_color_tables(model) {
                total += 1;
                let start = init(&table);
                match build_adversarial_schedule(&table, &start, args.max_rounds) {
                    Ok(AdversaryOutcome::Certificate(cert)) => {
                        if let Err(e) = validate_certificate(&table, &start, &cert, 10) {
                            eprintln!("certificate failed validation: {e}");
                        } else {
                            certified += 1;
                        }
                        outcomes.push(serde_json::json!({
                            "table": table,
                            "outcome": AdversaryOutcome::Certificate(cert),
                        }));
                    }
                    Ok(other) => outcomes.push(serde_json::json!({
                        "table": table,
                        "outcome": other,
                    })),
                    Err(e) => return usage_error(e),
                }
            }
        }
        let report = serde_json::json!({"tables": total, "certified": certified, "results": outcomes});
        if let Err(e) = std::fs::write(&args.out, serde_json::to_string_pretty(&report).unwrap()) {
            return usage_error(e);
        }
        println!("{certified}/{total} tables certified -> {}", args.out.display());
        return if certified == total { 0 } else { 2 };
    }

    let table_path = args.table.as_ref().expect("clap enforces table without --exhaustive");
    let text = match std::fs::read_to_string(table_path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("reading {}: {e}", table_path.display())),
    };
    let table: RuleTable = match serde_json::from_str(&text) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("parsing rule table: {e}")),
    };
    if let Err(e) = table.validate() {
        return usage_error(e);
    }
    let start = init(&table);
    let outcome = match build_adversarial_schedule(&table, &start, args.max_rounds) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    let code = match &outcome {
        AdversaryOutcome::Certificate(cert) => {
            if let Err(e) = validate_certificate(&table, &start, cert, 10) {
                eprintln!("certificate failed validation: {e}");
                2
            } else {
                println!("certificate: {:?}, period {}", cert.kind, cert.period());
                0
            }
        }
        AdversaryOutcome::Inconclusive { .. } => {
            println!("inconclusive within the round budget");
            2
        }
        AdversaryOutcome::GatheringWitness { gathered_round, .. } => {
            println!("gathering witness at round {gathered_round}");
            4
        }
    };
    if let Err(e) = std::fs::write(&args.out, serde_json::to_string_pretty(&outcome).unwrap()) {
        return usage_error(e);
    }
    code
}

fn cmd_replay(args: ReplayArgs) -> i32 {
    let original = match std::fs::read_to_string(&args.trace) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("reading {}: {e}", args.trace.display())),
    };
    let (config, _) = match trace::from_jsonl(&original) {
        Ok(x) => x,
        Err(e) => return usage_error(e),
    };
    let rerun = match engine::run(&config) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let rerun_text = trace::to_jsonl(&config, &rerun);
    if let Some(out) = &args.out {
        if let Err(e) = std::fs::write(out, &rerun_text) {
            return usage_error(e);
        }
    }
    if rerun_text == original {
        println!("replay matches byte for byte ({} rounds)", rerun.rounds.len());
        0
    } else {
        eprintln!("replay DIVERGED from the stored trace");
        2
    }
}

fn cmd_check(args: CheckArgs) -> i32 {
    let report = check::run_checks(args.seed);
    println!("{} passed, {} failed", report.passed, report.failed);
    if report.failed == 0 {
        0
    } else {
        1
    }
}

fn parse_rounds(text: &str) -> Option<(u64, u64)> {
    let (a, b) = text.split_once("..")?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn cmd_plot(args: PlotArgs) -> i32 {
    let overlay = match &args.rounds {
        None => None,
        Some(text) => match parse_rounds(text) {
            Some(r) => Some(r),
            None => return usage_error("rounds must look like 0..20"),
        },
    };
    let (config, trace_data) = match trace::read_jsonl(&args.trace) {
        Ok(x) => x,
        Err(e) => return usage_error(e),
    };
    let svg = match plot::render_svg(&config, &trace_data, overlay) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = std::fs::write(&args.out, svg) {
        return usage_error(e);
    }
    println!("wrote {}", args.out.display());
    0
}

/// Parses argv and dispatches; returns the process exit code.
pub fn main_entry() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LUMIGATHER_LOG")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Adversary(args) => cmd_adversary(args),
        Command::Replay(args) => cmd_replay(args),
        Command::Check(args) => cmd_check(args),
        Command::Plot(args) => cmd_plot(args),
    }
}
