//! Parameter sweeps: a grid over robot counts, seeds, schedulers, and
//! movement adversaries; one trace file per cell and a CSV summary.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use lumigather_core::engine::{self, RunConfig, TerminalStatus};
use lumigather_core::model::Params;
use lumigather_core::rng::mix_stream;
use lumigather_core::scheduling::{MovementPolicy, SchedulePolicy};
use serde::{Deserialize, Serialize};

use crate::gen;
use crate::trace;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("grid is empty: every axis needs at least one value")]
    EmptyGrid,
    #[error("unknown schedule kind {0:?}")]
    UnknownSchedule(String),
    #[error("unknown movement kind {0:?}")]
    UnknownMovement(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Counted { count: u64, base: u64 },
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Counted { count, base } => (0..*count).map(|i| base + i).collect(),
        }
    }
}

fn default_range() -> f64 {
    10.0
}

fn default_fairness() -> u64 {
    5
}

fn default_k() -> u64 {
    2
}

fn default_max_rounds() -> u64 {
    20_000
}

fn default_true() -> bool {
    true
}

/// Grid specification, loaded from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub ns: Vec<usize>,
    pub seeds: SeedSpec,
    /// Schedule kinds by name: FSYNCH, SSYNCH_RANDOM_FAIR, CENT, ROUND_ROBIN,
    /// K_BOUNDED.
    pub schedules: Vec<String>,
    /// Movement kinds by name: RIGID, NONRIGID_MIN, NONRIGID_RANDOM.
    pub movements: Vec<String>,
    pub params: Params,
    #[serde(default = "default_range")]
    pub position_range: f64,
    #[serde(default = "default_fairness")]
    pub fairness_bound: u64,
    #[serde(default = "default_k")]
    pub k: u64,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    #[serde(default = "default_true")]
    pub monitors: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellResult {
    pub cell: String,
    pub n: usize,
    pub seed: u64,
    pub schedule: String,
    pub movement: String,
    pub status: String,
    pub rounds_to_gather: Option<u64>,
}

pub struct SweepSummary {
    pub results: Vec<CellResult>,
    pub monitor_violations: usize,
}

fn schedule_policy(spec: &GridSpec, name: &str, seed: u64, n: usize) -> Result<SchedulePolicy, SweepError> {
    let seed = mix_stream(seed, &[0x5c_4e_d, n as u64]);
    Ok(match name {
        "FSYNCH" => SchedulePolicy::Fsynch,
        "ROUND_ROBIN" => SchedulePolicy::RoundRobin,
        "SSYNCH_RANDOM_FAIR" => SchedulePolicy::SsynchRandomFair {
            fairness_bound: spec.fairness_bound,
            seed,
        },
        "CENT" => SchedulePolicy::Cent {
            fairness_bound: spec.fairness_bound.max(n as u64),
            seed,
        },
        "K_BOUNDED" => SchedulePolicy::KBounded {
            k: spec.k,
            fairness_bound: spec.fairness_bound,
            seed,
        },
        other => return Err(SweepError::UnknownSchedule(other.to_string())),
    })
}

fn movement_policy(spec: &GridSpec, name: &str, seed: u64) -> Result<MovementPolicy, SweepError> {
    let seed = mix_stream(seed, &[0x40_0e]);
    Ok(match name {
        "RIGID" => MovementPolicy::Rigid,
        "NONRIGID_MIN" => MovementPolicy::NonRigidMin {
            delta: spec.params.delta,
        },
        "NONRIGID_RANDOM" => MovementPolicy::NonRigidRandom {
            delta: spec.params.delta,
            seed,
        },
        other => return Err(SweepError::UnknownMovement(other.to_string())),
    })
}

struct Cell {
    name: String,
    n: usize,
    seed: u64,
    schedule: String,
    movement: String,
    config: RunConfig,
}

fn build_cells(spec: &GridSpec) -> Result<Vec<Cell>, SweepError> {
    let seeds = spec.seeds.seeds();
    if spec.ns.is_empty() || seeds.is_empty() || spec.schedules.is_empty() || spec.movements.is_empty()
    {
        return Err(SweepError::EmptyGrid);
    }
    let mut cells = Vec::new();
    for &n in &spec.ns {
        for &seed in &seeds {
            for sched_name in &spec.schedules {
                for mov_name in &spec.movements {
                    let schedule = schedule_policy(spec, sched_name, seed, n)?;
                    let movement = movement_policy(spec, mov_name, seed)?;
                    let mut config = gen::random_gathering_run(
                        n,
                        seed,
                        spec.position_range,
                        spec.params,
                        schedule,
                        movement,
                    );
                    config.max_rounds = spec.max_rounds;
                    config.monitors = spec.monitors;
                    cells.push(Cell {
                        name: format!("n{n}_s{seed}_{sched_name}_{mov_name}"),
                        n,
                        seed,
                        schedule: sched_name.clone(),
                        movement: mov_name.clone(),
                        config,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Runs the whole grid over `jobs` worker threads, writes one trace per cell
/// into `out_dir` and a `summary.csv`.
pub fn run_sweep(spec: &GridSpec, out_dir: &Path, jobs: usize) -> Result<SweepSummary, SweepError> {
    let cells = build_cells(spec)?;
    std::fs::create_dir_all(out_dir)?;

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CellResult>>> = Mutex::new(vec![None; cells.len()]);
    let errors: Mutex<Vec<SweepError>> = Mutex::new(Vec::new());
    let jobs = jobs.max(1).min(cells.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let cell = &cells[i];
                match engine::run(&cell.config) {
                    Ok(trace_data) => {
                        let path: PathBuf = out_dir.join(format!("{}.jsonl", cell.name));
                        if let Err(e) = trace::write_jsonl(&path, &cell.config, &trace_data) {
                            errors.lock().unwrap().push(SweepError::Io(match e {
                                trace::TraceIoError::Io(io) => io,
                                other => std::io::Error::other(other.to_string()),
                            }));
                            continue;
                        }
                        let (status, rounds) = match trace_data.status {
                            TerminalStatus::Gathered { round } => {
                                ("Gathered".to_string(), Some(round))
                            }
                            TerminalStatus::RoundLimit => ("RoundLimit".to_string(), None),
                            TerminalStatus::MonitorViolation { ref detail } => {
                                (format!("MonitorViolation: {detail}"), None)
                            }
                        };
                        results.lock().unwrap()[i] = Some(CellResult {
                            cell: cell.name.clone(),
                            n: cell.n,
                            seed: cell.seed,
                            schedule: cell.schedule.clone(),
                            movement: cell.movement.clone(),
                            status,
                            rounds_to_gather: rounds,
                        });
                    }
                    Err(e) => {
                        results.lock().unwrap()[i] = Some(CellResult {
                            cell: cell.name.clone(),
                            n: cell.n,
                            seed: cell.seed,
                            schedule: cell.schedule.clone(),
                            movement: cell.movement.clone(),
                            status: format!("Error: {e}"),
                            rounds_to_gather: None,
                        });
                    }
                }
            });
        }
    });

    if let Some(e) = errors.into_inner().unwrap().into_iter().next() {
        return Err(e);
    }
    let results: Vec<CellResult> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect();

    let mut writer = csv::Writer::from_path(out_dir.join("summary.csv"))?;
    writer.write_record(["cell", "n", "seed", "schedule", "movement", "status", "rounds_to_gather"])?;
    for r in &results {
        writer.write_record([
            r.cell.as_str(),
            &r.n.to_string(),
            &r.seed.to_string(),
            &r.schedule,
            &r.movement,
            &r.status,
            &r.rounds_to_gather.map(|x| x.to_string()).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;

    let monitor_violations = results
        .iter()
        .filter(|r| r.status.starts_with("MonitorViolation"))
        .count();
    Ok(SweepSummary {
        results,
        monitor_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lumigather_core::engine::setup;

    #[test]
    fn tiny_grid_produces_traces_and_csv() {
        let spec = GridSpec {
            ns: vec![2, 3],
            seeds: SeedSpec::Counted { count: 2, base: 10 },
            schedules: vec!["FSYNCH".into(), "SSYNCH_RANDOM_FAIR".into()],
            movements: vec!["NONRIGID_MIN".into()],
            params: setup::paper_params(),
            position_range: 10.0,
            fairness_bound: 5,
            k: 2,
            max_rounds: 20_000,
            monitors: true,
        };
        let dir = tempfile::tempdir().unwrap();
        let summary = run_sweep(&spec, dir.path(), 2).unwrap();
        assert_eq!(summary.results.len(), 8);
        assert_eq!(summary.monitor_violations, 0);
        assert!(summary.results.iter().all(|r| r.status == "Gathered"));
        assert!(dir.path().join("summary.csv").exists());
        let traces = std::fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| {
                e.as_ref()
                    .unwrap()
                    .path()
                    .extension()
                    .map(|x| x == "jsonl")
                    .unwrap_or(false)
            })
            .count();
        assert_eq!(traces, 8);
    }

    #[test]
    fn empty_grid_rejected() {
        let spec = GridSpec {
            ns: vec![],
            seeds: SeedSpec::List(vec![1]),
            schedules: vec!["FSYNCH".into()],
            movements: vec!["RIGID".into()],
            params: setup::paper_params(),
            position_range: 10.0,
            fairness_bound: 5,
            k: 2,
            max_rounds: 100,
            monitors: true,
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            run_sweep(&spec, dir.path(), 1),
            Err(SweepError::EmptyGrid)
        ));
    }
}
