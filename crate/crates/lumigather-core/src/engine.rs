//! The round loop: activation, simultaneous snapshots and decisions,
//! movement resolution, monitors, and trace recording.
//!
//! A run is a pure function of its [`RunConfig`], seeds included: re-running
//! the same config reproduces the trace bit for bit. Within a round, every
//! activated robot decides against the same pre-step configuration, and all
//! per-move randomness is keyed by (seed, round, move), so the order in which
//! robots are processed can never change the outcome.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::adversary::RuleTable;
use crate::algorithms::{self, Decision, PhaseLabel, ProgramError};
use crate::geometry::{
    classify_onlds, diameter, dist_to_segment, distinct_points, OnLds, Point,
};
use crate::model::{
    self, is_gathered, is_prohibited_initial, take_snapshot, Color, Configuration, Frame,
    LightModel, Params, ProhibitedPattern, RobotState, ViewKind,
};
use crate::rng::mix_stream;
use crate::scheduling::{
    ActivationSet, MovementError, MovementPolicy, MovementResolver, ScheduleError,
    SchedulePolicy, Scheduler,
};

/// Which robot program a run executes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum ProgramKind {
    /// The full two-color gathering dispatcher.
    #[serde(rename = "gathering-fstate")]
    GatheringFstate,
    /// Only the LDS election (expansion plus line formation), lights untouched.
    #[serde(rename = "elect-lds-only")]
    ElectLdsOnly,
    /// A two-robot rule table, used by the adversary search and its replays.
    #[serde(rename = "rule-table")]
    RuleTable { table: RuleTable },
}

/// One robot in the initial configuration; ids are implicit list positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub pos: Point,
    pub light: Color,
    #[serde(default)]
    pub frame: Frame,
}

fn default_max_rounds() -> u64 {
    20_000
}

fn default_cooldown() -> u64 {
    5
}

fn default_true() -> bool {
    true
}

/// Everything a run needs; serializing this into the trace header is what
/// makes every trace replayable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub robots: Vec<RobotSpec>,
    pub params: Params,
    pub program: ProgramKind,
    pub light_model: LightModel,
    pub view: ViewKind,
    #[serde(default = "default_true")]
    pub local_aware: bool,
    pub schedule: SchedulePolicy,
    pub movement: MovementPolicy,
    /// Robot -> group map; when present the schedule runs over groups and
    /// whole groups are activated together.
    #[serde(default)]
    pub groups: Option<Vec<usize>>,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    #[serde(default = "default_true")]
    pub monitors: bool,
    #[serde(default)]
    pub negative_test: bool,
    #[serde(default = "default_cooldown")]
    pub gather_cooldown: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("invalid run config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Movement(#[from] MovementError),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error("activation set is empty")]
    EmptyActivation,
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum TerminalStatus {
    /// All robots co-located after `round` rounds, confirmed static over the
    /// cool-down window.
    Gathered { round: u64 },
    RoundLimit,
    MonitorViolation { detail: String },
}

/// Per-round monitor verdicts, keyed m1..m5; absent key means the monitor
/// was off. Values are "pass", "warn: ...", or "fail: ...".
pub type MonitorReport = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotRecord {
    pub id: usize,
    pub pos: Point,
    pub light: Color,
}

/// State after executing the round, plus what ran in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub activated: Vec<usize>,
    pub robots: Vec<RobotRecord>,
    pub phase: PhaseLabel,
    pub monitors: MonitorReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub rounds: Vec<RoundRecord>,
    pub status: TerminalStatus,
}

impl Trace {
    pub fn gathered_round(&self) -> Option<u64> {
        match self.status {
            TerminalStatus::Gathered { round } => Some(round),
            _ => None,
        }
    }
}

/// One robot's decision in a step, with the destination mapped to the global
/// frame and the movement-resolved landing point.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionRecord {
    pub id: usize,
    pub decision: Decision,
    pub dest_global: Point,
    pub resolved: Point,
}

pub struct StepOutcome {
    pub config: Configuration,
    pub decisions: Vec<DecisionRecord>,
}

fn decide(
    program: &ProgramKind,
    snapshot: &crate::model::Snapshot,
    params: &Params,
) -> Result<Decision, ProgramError> {
    match program {
        ProgramKind::GatheringFstate => {
            let own = snapshot.own_light.ok_or(ProgramError::WrongLightModel {
                program: String::from("gathering-fstate"),
                needed: "FSTATE",
            })?;
            Ok(algorithms::gathering_fstate_program(snapshot, own, params))
        }
        ProgramKind::ElectLdsOnly => Ok(algorithms::elect_lds(snapshot, params)),
        ProgramKind::RuleTable { table } => table.decide(snapshot, params),
    }
}

/// Executes one round: activated robots all observe the same pre-step
/// configuration, then lights update and moves resolve. Inactive robots are
/// untouched.
pub fn step(
    config: &Configuration,
    activated: &ActivationSet,
    run: &RunConfig,
    resolver: &mut MovementResolver,
    round: u64,
) -> Result<StepOutcome, EngineError> {
    if activated.is_empty() {
        return Err(EngineError::EmptyActivation);
    }
    let tol = run.params.tol();
    let mut decisions: Vec<DecisionRecord> = Vec::with_capacity(activated.len());
    for &id in activated {
        let robot = config
            .robots
            .get(id)
            .ok_or_else(|| EngineError::Invalid(format!("activated unknown robot {id}")))?;
        let view_seed = mix_stream(
            run.seed,
            &[round, robot.position.x.to_bits(), robot.position.y.to_bits()],
        );
        let snapshot = take_snapshot(
            config,
            id,
            run.light_model,
            run.view,
            run.local_aware,
            tol,
            view_seed,
        )?;
        let decision = decide(&run.program, &snapshot, &run.params)?;
        if !decision.destination.is_finite() {
            return Err(EngineError::Invalid(format!(
                "robot {id} computed a non-finite destination"
            )));
        }
        let dest_global = robot.frame.to_global(robot.position, decision.destination);
        decisions.push(DecisionRecord {
            id,
            decision,
            dest_global,
            resolved: dest_global, // movement resolution below
        });
    }
    let mut next = config.clone();
    for rec in decisions.iter_mut() {
        let robot = &mut next.robots[rec.id];
        rec.resolved = resolver.resolve(round, robot.position, rec.dest_global)?;
        robot.light = rec.decision.new_light;
        robot.position = rec.resolved;
    }
    next.round = round + 1;
    Ok(StepOutcome {
        config: next,
        decisions,
    })
}

/// Checks every RunConfig invariant that can be checked before stepping.
pub fn validate(run: &RunConfig) -> Result<(), EngineError> {
    run.params
        .validate()
        .map_err(|e| EngineError::Invalid(format!("{e}")))?;
    if run.robots.is_empty() {
        return Err(EngineError::Invalid(String::from("no robots")));
    }
    for (i, r) in run.robots.iter().enumerate() {
        if !r.pos.is_finite() {
            return Err(EngineError::Invalid(format!("robot {i} position not finite")));
        }
        if !(r.frame.scale > 0.0) {
            return Err(EngineError::Invalid(format!("robot {i} frame scale must be positive")));
        }
    }
    if let Some(delta) = run.movement.delta() {
        if (delta - run.params.delta).abs() > run.params.eps_geom {
            return Err(EngineError::Invalid(format!(
                "movement delta {delta} disagrees with params delta {}",
                run.params.delta
            )));
        }
    }
    if let Some(groups) = &run.groups {
        if groups.len() != run.robots.len() {
            return Err(EngineError::Invalid(String::from(
                "groups must map every robot",
            )));
        }
        let n_groups = groups.iter().map(|g| g + 1).max().unwrap_or(0);
        for g in 0..n_groups {
            if !groups.contains(&g) {
                return Err(EngineError::Invalid(format!("group {g} is empty")));
            }
        }
    }
    let n_sched = scheduler_width(run);
    Scheduler::new(run.schedule.clone(), n_sched)?;
    match &run.program {
        ProgramKind::GatheringFstate => {
            if !matches!(run.light_model, LightModel::Fstate | LightModel::Lumi) {
                return Err(EngineError::Invalid(String::from(
                    "gathering-fstate needs the robot's own light: use FSTATE (or LUMI)",
                )));
            }
            if run.robots.iter().any(|r| r.light != Color::A) {
                return Err(EngineError::Invalid(String::from(
                    "gathering-fstate starts with all lights A",
                )));
            }
            let reflected = run.robots[0].frame.reflected;
            for (i, r) in run.robots.iter().enumerate() {
                if (r.frame.scale - 1.0).abs() > run.params.eps_geom {
                    return Err(EngineError::Invalid(format!(
                        "gathering-fstate assumes a shared unit: robot {i} has scale {}",
                        r.frame.scale
                    )));
                }
                if r.frame.reflected != reflected {
                    return Err(EngineError::Invalid(String::from(
                        "gathering-fstate assumes agreement on chirality",
                    )));
                }
            }
            let initial = initial_configuration(run);
            if !run.negative_test
                && is_prohibited_initial(&initial, &run.params) != ProhibitedPattern::No
            {
                return Err(EngineError::Invalid(String::from(
                    "initial configuration matches a prohibited pattern; pass negative_test to run it anyway",
                )));
            }
        }
        ProgramKind::RuleTable { table } => {
            table
                .validate()
                .map_err(|e| EngineError::Invalid(format!("{e}")))?;
            if run.light_model != table.model {
                return Err(EngineError::Invalid(String::from(
                    "run light model must match the rule table's model",
                )));
            }
        }
        ProgramKind::ElectLdsOnly => {}
    }
    Ok(())
}

fn scheduler_width(run: &RunConfig) -> usize {
    match &run.groups {
        Some(groups) => groups.iter().map(|g| g + 1).max().unwrap_or(0),
        None => run.robots.len(),
    }
}

fn initial_configuration(run: &RunConfig) -> Configuration {
    Configuration::new(
        run.robots
            .iter()
            .enumerate()
            .map(|(id, spec)| RobotState {
                id,
                position: spec.pos,
                light: spec.light,
                frame: spec.frame,
            })
            .collect(),
    )
}

fn expand_groups(run: &RunConfig, set: &ActivationSet) -> ActivationSet {
    match &run.groups {
        None => set.clone(),
        Some(groups) => groups
            .iter()
            .enumerate()
            .filter(|(_, g)| set.contains(g))
            .map(|(i, _)| i)
            .collect(),
    }
}

struct MonitorState {
    epd_entry_diam: Option<f64>,
}

/// Evaluates the per-round monitors for the transition before -> after.
///
/// m1: when the line-formation sub-phase ends, the configuration is gathered
///     or all-on-segment with at least half the entry diameter.
/// m2: a step out of an adjust-phase configuration changes the diameter by
///     0, -eps/2, or -eps.
/// m3: adjust- and gather-phase destinations lie on the longest segment.
/// m4: lights never go B -> A.
/// m5: phases only move forward (adjust never falls back to election, the
///     gather bands only end in Done, Done is absorbing).
fn monitors(
    before: &Configuration,
    after: &Configuration,
    decisions: &[DecisionRecord],
    phase_before: PhaseLabel,
    phase_after: PhaseLabel,
    params: &Params,
    state: &mut MonitorState,
) -> MonitorReport {
    let tol = params.tol();
    let mut report = MonitorReport::new();
    let pass = |report: &mut MonitorReport, key: &str| {
        report.insert(String::from(key), String::from("pass"));
    };
    let fail = |report: &mut MonitorReport, key: &str, msg: String| {
        report.insert(String::from(key), format!("fail: {msg}"));
    };

    // m1: line-formation contract at sub-phase exit.
    if phase_before == PhaseLabel::ElectEpd && phase_after != PhaseLabel::ElectEpd {
        let entry = state.epd_entry_diam.take();
        let after_pts = distinct_points(&after.positions(), tol);
        let exit_ok = match entry {
            None => true,
            Some(entry_diam) => {
                let gathered = after_pts.len() <= 1;
                let on_segment = matches!(classify_onlds(&after_pts, tol), OnLds::On(_));
                let half = diameter(&after_pts) >= entry_diam / 2.0 - tol.eps_geom;
                gathered || (on_segment && half)
            }
        };
        if exit_ok {
            pass(&mut report, "m1");
        } else {
            fail(
                &mut report,
                "m1",
                format!(
                    "line formation ended off-contract: entry diam {:?}, exit diam {}",
                    state.epd_entry_diam,
                    diameter(&after.positions())
                ),
            );
        }
    } else {
        pass(&mut report, "m1");
    }
    if phase_after == PhaseLabel::ElectEpd && state.epd_entry_diam.is_none() {
        state.epd_entry_diam = Some(diameter(&distinct_points(&after.positions(), tol)));
    }

    // m2: adjust-phase diameter decrements.
    if phase_before == PhaseLabel::Adjust {
        let d0 = diameter(&distinct_points(&before.positions(), tol));
        let d1 = diameter(&distinct_points(&after.positions(), tol));
        let delta = d1 - d0;
        let allowed = tol.is_zero(delta)
            || tol.eq(delta, -params.epsilon / 2.0)
            || tol.eq(delta, -params.epsilon);
        if allowed {
            pass(&mut report, "m2");
        } else {
            fail(
                &mut report,
                "m2",
                format!("adjust step changed diameter by {delta}"),
            );
        }
    } else {
        pass(&mut report, "m2");
    }

    // m3: line confinement of destinations in adjust and gather phases.
    if matches!(phase_before, PhaseLabel::Adjust | PhaseLabel::GatherBand) {
        let before_pts = distinct_points(&before.positions(), tol);
        if let OnLds::On(seg) = classify_onlds(&before_pts, tol) {
            let off = decisions
                .iter()
                .find(|d| dist_to_segment(d.dest_global, &seg) > tol.eps_geom);
            match off {
                None => pass(&mut report, "m3"),
                Some(d) => fail(
                    &mut report,
                    "m3",
                    format!("robot {} aimed off the longest segment", d.id),
                ),
            }
        } else {
            pass(&mut report, "m3");
        }
    } else {
        pass(&mut report, "m3");
    }

    // m4: color monotonicity.
    let mut m4_ok = true;
    for (b, a) in before.robots.iter().zip(after.robots.iter()) {
        if b.light == Color::B && a.light == Color::A {
            m4_ok = false;
            fail(&mut report, "m4", format!("robot {} went B -> A", b.id));
            break;
        }
    }
    if m4_ok {
        pass(&mut report, "m4");
    }

    // m5: forward-only phase transitions.
    use PhaseLabel::*;
    let m5_ok = match (phase_before, phase_after) {
        (Done, Done) => true,
        (Done, _) => false,
        (GatherBand, GatherBand) | (GatherBand, Done) => true,
        (GatherBand, _) => false,
        (Adjust, Adjust) | (Adjust, GatherBand) => true,
        (Adjust, _) => false,
        (ElectEpd, ElectEpd) | (ElectEpd, Adjust) => true,
        (ElectEpd, _) => false,
        (ElectExpand, Done) => false,
        (ElectExpand, _) => true,
    };
    if m5_ok {
        pass(&mut report, "m5");
    } else {
        fail(
            &mut report,
            "m5",
            format!("phase went {} -> {}", phase_before.as_str(), phase_after.as_str()),
        );
    }

    report
}

/// Runs a configuration to termination: gathered (confirmed over the
/// cool-down window), the round limit, or a monitor violation.
pub fn run(run_config: &RunConfig) -> Result<Trace, EngineError> {
    validate(run_config)?;
    let params = run_config.params;
    let tol = params.tol();
    let mut state = initial_configuration(run_config);
    let mut scheduler = Scheduler::new(run_config.schedule.clone(), scheduler_width(run_config))?;
    let mut resolver = MovementResolver::new(run_config.movement.clone())?;
    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut phase_prev = algorithms::phase_of(
        &state.positions(),
        &state.robots.iter().map(|r| r.light).collect::<Vec<_>>(),
        &params,
    );
    let mut monitor_state = MonitorState {
        epd_entry_diam: (phase_prev == PhaseLabel::ElectEpd)
            .then(|| diameter(&distinct_points(&state.positions(), tol))),
    };
    let mut gathered_at: Option<u64> = None;
    let mut status: Option<TerminalStatus> = None;

    for round in 0..run_config.max_rounds {
        if is_gathered(&state, tol) {
            if gathered_at.is_none() {
                gathered_at = Some(round);
            }
        } else {
            gathered_at = None;
        }
        if let Some(g) = gathered_at {
            if round - g >= run_config.gather_cooldown {
                status = Some(TerminalStatus::Gathered { round: g });
                break;
            }
        }

        let group_set = scheduler.next()?;
        let activated = expand_groups(run_config, &group_set);
        let outcome = match step(&state, &activated, run_config, &mut resolver, round) {
            Ok(o) => o,
            Err(EngineError::Program(e)) => {
                status = Some(TerminalStatus::MonitorViolation {
                    detail: format!("program dispatch error: {e}"),
                });
                break;
            }
            Err(e) => return Err(e),
        };
        let lights_after: Vec<Color> = outcome.config.robots.iter().map(|r| r.light).collect();
        let phase_next = algorithms::phase_of(&outcome.config.positions(), &lights_after, &params);

        let report = if run_config.monitors {
            monitors(
                &state,
                &outcome.config,
                &outcome.decisions,
                phase_prev,
                phase_next,
                &params,
                &mut monitor_state,
            )
        } else {
            MonitorReport::new()
        };
        let failed: Vec<&String> = report.values().filter(|v| v.starts_with("fail")).collect();
        let violation = (!failed.is_empty()).then(|| {
            failed
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        });

        rounds.push(RoundRecord {
            round,
            activated: activated.iter().copied().collect(),
            robots: outcome
                .config
                .robots
                .iter()
                .map(|r| RobotRecord {
                    id: r.id,
                    pos: r.position,
                    light: r.light,
                })
                .collect(),
            phase: phase_next,
            monitors: report,
        });

        state = outcome.config;
        phase_prev = phase_next;
        if let Some(detail) = violation {
            status = Some(TerminalStatus::MonitorViolation { detail });
            break;
        }
    }

    let status = status.unwrap_or_else(|| {
        if is_gathered(&state, tol) {
            if let Some(g) = gathered_at {
                return TerminalStatus::Gathered { round: g };
            }
            // Gathered on the very last round with no cool-down left.
            return TerminalStatus::Gathered { round: state.round };
        }
        TerminalStatus::RoundLimit
    });

    Ok(Trace { rounds, status })
}

/// Expands a 2-robot config into co-located groups of the given sizes; the
/// schedule then activates whole groups, so the expanded run mirrors the
/// 2-robot run point for point.
pub fn two_group_reduction(
    base: &RunConfig,
    multiplicities: (usize, usize),
) -> Result<RunConfig, EngineError> {
    let (k, m) = multiplicities;
    if k == 0 || m == 0 {
        return Err(EngineError::Invalid(String::from(
            "group multiplicities must be positive",
        )));
    }
    if base.robots.len() != 2 {
        return Err(EngineError::Invalid(String::from(
            "group reduction starts from a 2-robot configuration",
        )));
    }
    let mut robots = Vec::with_capacity(k + m);
    let mut groups = Vec::with_capacity(k + m);
    for _ in 0..k {
        robots.push(base.robots[0].clone());
        groups.push(0);
    }
    for _ in 0..m {
        robots.push(base.robots[1].clone());
        groups.push(1);
    }
    let mut expanded = base.clone();
    expanded.robots = robots;
    expanded.groups = Some(groups);
    Ok(expanded)
}

/// Helpers shared by tests, the acceptance suite, and the sweep runner.
pub mod setup {
    use super::*;

    /// A gathering-fstate run over the given positions, all lights A,
    /// identity frames.
    pub fn gathering_run(
        positions: &[Point],
        params: Params,
        schedule: SchedulePolicy,
        movement: MovementPolicy,
        seed: u64,
    ) -> RunConfig {
        RunConfig {
            robots: positions
                .iter()
                .map(|&pos| RobotSpec {
                    pos,
                    light: Color::A,
                    frame: Frame::default(),
                })
                .collect(),
            params,
            program: ProgramKind::GatheringFstate,
            light_model: LightModel::Fstate,
            view: ViewKind::Set,
            local_aware: true,
            schedule,
            movement,
            groups: None,
            max_rounds: default_max_rounds(),
            monitors: true,
            negative_test: false,
            gather_cooldown: default_cooldown(),
            seed,
        }
    }

    pub fn paper_params() -> Params {
        Params::new(1.0, 0.5, 4.1, 1e-9).expect("canonical parameters are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::configuration_from;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn params() -> Params {
        setup::paper_params()
    }

    fn fsynch_run(positions: &[Point]) -> RunConfig {
        setup::gathering_run(
            positions,
            params(),
            SchedulePolicy::Fsynch,
            MovementPolicy::NonRigidMin { delta: 4.1 },
            7,
        )
    }

    #[test]
    fn band_pair_gathers_in_one_round() {
        let cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.status, TerminalStatus::Gathered { round: 1 });
        let first = &trace.rounds[0];
        assert_eq!(first.phase, PhaseLabel::Done);
        for r in &first.robots {
            assert_abs_diff_eq!(r.pos.x, 0.9, epsilon = 1e-9);
            assert_abs_diff_eq!(r.pos.y, 0.0, epsilon = 1e-9);
            assert_eq!(r.light, Color::B);
        }
    }

    #[test]
    fn partial_activation_reaches_aba() {
        // Two robots share the left endpoint; activating one of them creates
        // the three-point A B A pattern.
        let cfg = setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(1.8, 0.0)],
            params(),
            SchedulePolicy::Scripted {
                script: vec![vec![0]],
            },
            MovementPolicy::NonRigidMin { delta: 4.1 },
            7,
        );
        let mut cfg = cfg;
        cfg.max_rounds = 1;
        let trace = run(&cfg).unwrap();
        let last = trace.rounds.last().unwrap();
        let config = Configuration::new(
            last.robots
                .iter()
                .map(|r| RobotState {
                    id: r.id,
                    position: r.pos,
                    light: r.light,
                    frame: Frame::default(),
                })
                .collect(),
        );
        match crate::model::classify_color_configuration(&config, params().tol()) {
            crate::model::ColorConfigDescriptor::ThreePointMid { a, mid, b, .. } => {
                assert_eq!(a, vec![Color::A]);
                assert_eq!(mid, vec![Color::B]);
                assert_eq!(b, vec![Color::A]);
            }
            other => panic!("expected A B A three-point pattern, got {other:?}"),
        }
    }

    #[test]
    fn empty_activation_is_an_error() {
        let cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        let config = initial_configuration(&cfg);
        let mut resolver = MovementResolver::new(cfg.movement.clone()).unwrap();
        let err = step(&config, &ActivationSet::new(), &cfg, &mut resolver, 0);
        assert!(matches!(err, Err(EngineError::EmptyActivation)));
    }

    #[test]
    fn prohibited_start_rejected_without_flag() {
        let cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(0.8, 0.0)]);
        assert!(matches!(run(&cfg), Err(EngineError::Invalid(_))));
    }

    #[test]
    fn narrow_pair_negative_test_goes_static_all_b() {
        let mut cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(0.8, 0.0)]);
        cfg.negative_test = true;
        cfg.max_rounds = 200;
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.status, TerminalStatus::RoundLimit);
        let last = trace.rounds.last().unwrap();
        assert!(last.robots.iter().all(|r| r.light == Color::B));
        // Positions swapped and froze: still two distinct points.
        let pts = distinct_points(
            &last.robots.iter().map(|r| r.pos).collect::<Vec<_>>(),
            params().tol(),
        );
        assert_eq!(pts.len(), 2);
        // Static from round 1 on.
        let r1: Vec<_> = trace.rounds[1].robots.clone();
        let rn: Vec<_> = last.robots.clone();
        assert_eq!(r1, rn);
    }

    #[test]
    fn identical_seeds_identical_traces() {
        let mk = || {
            let mut cfg = setup::gathering_run(
                &[
                    Point::new(0.0, 0.0),
                    Point::new(3.0, 1.0),
                    Point::new(-2.0, 2.0),
                    Point::new(1.0, -2.5),
                ],
                params(),
                SchedulePolicy::SsynchRandomFair {
                    fairness_bound: 5,
                    seed: 99,
                },
                MovementPolicy::NonRigidRandom {
                    delta: 4.1,
                    seed: 123,
                },
                4242,
            );
            cfg.max_rounds = 5_000;
            cfg
        };
        let a = run(&mk()).unwrap();
        let b = run(&mk()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_fair_min_movement_gathers() {
        let mut cfg = setup::gathering_run(
            &[
                Point::new(-4.0, 3.0),
                Point::new(5.0, -2.0),
                Point::new(0.5, 7.0),
                Point::new(-6.0, -5.0),
                Point::new(2.0, 2.0),
            ],
            params(),
            SchedulePolicy::SsynchRandomFair {
                fairness_bound: 5,
                seed: 17,
            },
            MovementPolicy::NonRigidMin { delta: 4.1 },
            55,
        );
        cfg.max_rounds = 20_000;
        let trace = run(&cfg).unwrap();
        assert!(
            matches!(trace.status, TerminalStatus::Gathered { .. }),
            "expected gathering, got {:?}",
            trace.status
        );
        assert!(trace
            .rounds
            .iter()
            .all(|r| r.monitors.values().all(|v| !v.starts_with("fail"))));
    }

    #[test]
    fn processing_order_cannot_matter() {
        // Same step with robot ids relabeled: the resulting multisets of
        // (position, light) agree, which is what simultaneity means.
        let cfg = fsynch_run(&[
            Point::new(0.0, 0.0),
            Point::new(1.8, 0.0),
            Point::new(0.9, 4.0),
        ]);
        let config = initial_configuration(&cfg);
        let activated: ActivationSet = (0..3).collect();
        let mut resolver = MovementResolver::new(cfg.movement.clone()).unwrap();
        let out1 = step(&config, &activated, &cfg, &mut resolver, 0).unwrap();

        let mut permuted_cfg = cfg.clone();
        permuted_cfg.robots.reverse();
        let pconfig = initial_configuration(&permuted_cfg);
        let mut resolver2 = MovementResolver::new(cfg.movement.clone()).unwrap();
        let out2 = step(&pconfig, &activated, &permuted_cfg, &mut resolver2, 0).unwrap();

        let mut set1: Vec<(u64, u64, Color)> = out1
            .config
            .robots
            .iter()
            .map(|r| (r.position.x.to_bits(), r.position.y.to_bits(), r.light))
            .collect();
        let mut set2: Vec<(u64, u64, Color)> = out2
            .config
            .robots
            .iter()
            .map(|r| (r.position.x.to_bits(), r.position.y.to_bits(), r.light))
            .collect();
        set1.sort();
        set2.sort();
        assert_eq!(set1, set2);
    }

    #[test]
    fn gathered_all_b_is_absorbing() {
        let mut cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        cfg.max_rounds = 50;
        cfg.gather_cooldown = 10;
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.status, TerminalStatus::Gathered { round: 1 });
        // All cool-down rounds identical to the first gathered round.
        let first = &trace.rounds[0];
        for r in &trace.rounds[1..] {
            assert_eq!(r.robots, first.robots);
        }
    }

    #[test]
    fn group_reduction_identity() {
        let base = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        let same = two_group_reduction(&base, (1, 1)).unwrap();
        let t0 = run(&base).unwrap();
        let t1 = run(&same).unwrap();
        assert_eq!(t0.status, t1.status);
        assert_eq!(t0.rounds.len(), t1.rounds.len());
    }

    #[test]
    fn group_reduction_matches_two_robot_run() {
        let mut base = setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(7.0, 3.0)],
            params(),
            SchedulePolicy::SsynchRandomFair {
                fairness_bound: 5,
                seed: 31,
            },
            MovementPolicy::NonRigidMin { delta: 4.1 },
            8,
        );
        base.max_rounds = 10_000;
        let expanded = two_group_reduction(&base, (3, 2)).unwrap();
        let t_base = run(&base).unwrap();
        let t_exp = run(&expanded).unwrap();
        assert_eq!(t_base.rounds.len(), t_exp.rounds.len());
        let tol = params().tol();
        for (rb, re) in t_base.rounds.iter().zip(t_exp.rounds.iter()) {
            let occupied = |robots: &[RobotRecord]| {
                let cfg = Configuration::new(
                    robots
                        .iter()
                        .map(|r| RobotState {
                            id: r.id,
                            position: r.pos,
                            light: r.light,
                            frame: Frame::default(),
                        })
                        .collect(),
                );
                let mut pts: Vec<(u64, u64, Vec<Color>)> = cfg
                    .occupied_points(tol)
                    .into_iter()
                    .map(|p| (p.x.to_bits(), p.y.to_bits(), cfg.colors_at(p, tol)))
                    .collect();
                pts.sort();
                pts
            };
            assert_eq!(occupied(&rb.robots), occupied(&re.robots));
        }
        assert_eq!(t_base.status, t_exp.status);
    }

    #[test]
    fn local_awareness_does_not_change_fstate_traces() {
        let mk = |aware: bool| {
            let mut cfg = setup::gathering_run(
                &[Point::new(0.0, 0.0), Point::new(6.0, 1.0)],
                params(),
                SchedulePolicy::SsynchRandomFair {
                    fairness_bound: 5,
                    seed: 77,
                },
                MovementPolicy::NonRigidMin { delta: 4.1 },
                5,
            );
            cfg.local_aware = aware;
            cfg.max_rounds = 10_000;
            two_group_reduction(&cfg, (2, 2)).unwrap()
        };
        let aware = run(&mk(true)).unwrap();
        let unaware = run(&mk(false)).unwrap();
        assert_eq!(aware.status, unaware.status);
        for (a, b) in aware.rounds.iter().zip(unaware.rounds.iter()) {
            assert_eq!(a.robots, b.robots);
        }
    }

    #[test]
    fn validation_catches_bad_params_and_lights() {
        let mut cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        cfg.params.epsilon = 2.0; // epsilon >= d
        assert!(matches!(run(&cfg), Err(EngineError::Invalid(_))));

        let mut cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        cfg.robots[0].light = Color::B;
        assert!(matches!(run(&cfg), Err(EngineError::Invalid(_))));

        let mut cfg = fsynch_run(&[Point::new(0.0, 0.0), Point::new(1.8, 0.0)]);
        cfg.movement = MovementPolicy::NonRigidMin { delta: 2.0 };
        assert!(matches!(run(&cfg), Err(EngineError::Invalid(_))));
    }

    #[test]
    fn monitor_catches_color_regression() {
        // A hostile rule table that flips B back to A: m4 must fire.
        let table = RuleTable::two_color_fstate((Color::B, 0.0), (Color::A, 0.0));
        let mut cfg = RunConfig {
            robots: vec![
                RobotSpec {
                    pos: Point::new(0.0, 0.0),
                    light: Color::A,
                    frame: Frame::default(),
                },
                RobotSpec {
                    pos: Point::new(2.0, 0.0),
                    light: Color::A,
                    frame: Frame::default(),
                },
            ],
            params: params(),
            program: ProgramKind::RuleTable { table },
            light_model: LightModel::Fstate,
            view: ViewKind::Set,
            local_aware: true,
            schedule: SchedulePolicy::Fsynch,
            movement: MovementPolicy::Rigid,
            groups: None,
            max_rounds: 10,
            monitors: true,
            negative_test: false,
            gather_cooldown: 5,
            seed: 0,
        };
        cfg.monitors = true;
        let trace = run(&cfg).unwrap();
        assert!(
            matches!(trace.status, TerminalStatus::MonitorViolation { ref detail } if detail.contains("B -> A")),
            "expected m4 violation, got {:?}",
            trace.status
        );
    }

    #[test]
    fn classify_helper_builds_config() {
        let c = configuration_from(&[(Color::A, Point::new(0.0, 0.0))]);
        assert_eq!(c.robots.len(), 1);
    }
}
