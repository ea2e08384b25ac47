//! Adaptive schedule construction against two-robot rule-table algorithms:
//! given any deterministic table over a finite palette, build a fair schedule
//! with a loop certificate showing the robots never gather, or report the
//! strongest finding.
//!
//! The search walks exact two-robot states (lights, positions) under rigid
//! movement. Whenever activating both robots would make them meet, it
//! activates exactly one (alternating for fairness) if both would move, or
//! keeps activating the non-mover otherwise. A repeated (lights, distance
//! class) state closes a loop; the loop is then replayed through the real
//! engine, which records the certified states and confirms that no replay
//! round ever gathers.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::algorithms::{Decision, ProgramError};
use crate::engine::{self, ProgramKind, RobotSpec, RunConfig, TerminalStatus};
use crate::geometry::{dist, point_along, Point};
use crate::model::{Color, Frame, LightModel, Params, Snapshot, ViewKind};
use crate::scheduling::{check_fairness, ActivationRecord, MovementPolicy, SchedulePolicy};

/// How far a rule moves its robot, along the axis toward the other robot.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MoveRule {
    /// Fraction of the current distance, in [0, 1]. 0 stays, 1 lands on the
    /// other robot.
    Fraction(f64),
    /// A fixed signed distance; negative moves away.
    Signed { signed: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub see: Color,
    /// Distance class the rule applies to (index into the breakpoint bands).
    #[serde(default)]
    pub class: usize,
    pub set: Color,
    #[serde(rename = "move")]
    pub movement: MoveRule,
}

/// A deterministic two-robot algorithm as a finite table. The observed key is
/// the robot's own light under FSTATE, the other robot's light under FCOMM,
/// plus the perceived distance class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleTable {
    pub model: LightModel,
    pub palette: Vec<Color>,
    /// Sorted distance breakpoints; class = number of breakpoints at or below
    /// the perceived distance. Empty means a single class.
    #[serde(default)]
    pub distance_breakpoints: Vec<f64>,
    pub rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AdversaryError {
    #[error("rule table invalid: {0}")]
    InvalidTable(String),
    #[error("self-stabilizing probe needs an FSTATE table")]
    NeedsFstate,
    #[error("synchronous execution gathers; outside the four-subcase analysis")]
    SynchronousGathering,
    #[error("certificate replay failed: {0}")]
    Replay(String),
}

impl RuleTable {
    pub fn classes(&self) -> usize {
        self.distance_breakpoints.len() + 1
    }

    pub fn class_of(&self, distance: f64) -> usize {
        self.distance_breakpoints
            .iter()
            .filter(|&&b| distance >= b)
            .count()
    }

    pub fn validate(&self) -> Result<(), AdversaryError> {
        if !matches!(self.model, LightModel::Fstate | LightModel::Fcomm) {
            return Err(AdversaryError::InvalidTable(String::from(
                "model must be FSTATE or FCOMM",
            )));
        }
        if self.palette.is_empty() {
            return Err(AdversaryError::InvalidTable(String::from("empty palette")));
        }
        if self
            .distance_breakpoints
            .windows(2)
            .any(|w| !(w[0] < w[1]))
        {
            return Err(AdversaryError::InvalidTable(String::from(
                "breakpoints must be strictly increasing",
            )));
        }
        for rule in &self.rules {
            if !self.palette.contains(&rule.see) {
                return Err(AdversaryError::InvalidTable(format!(
                    "rule sees {} which is not in the palette",
                    rule.see
                )));
            }
            if !self.palette.contains(&rule.set) {
                return Err(AdversaryError::InvalidTable(format!(
                    "rule sets {} which is not in the palette",
                    rule.set
                )));
            }
            if rule.class >= self.classes() {
                return Err(AdversaryError::InvalidTable(format!(
                    "rule class {} out of range",
                    rule.class
                )));
            }
            if let MoveRule::Fraction(f) = rule.movement {
                if !(0.0..=1.0).contains(&f) {
                    return Err(AdversaryError::InvalidTable(format!(
                        "move fraction {f} outside [0, 1]"
                    )));
                }
            }
        }
        // Total and deterministic over palette x classes.
        for &color in &self.palette {
            for class in 0..self.classes() {
                let n = self
                    .rules
                    .iter()
                    .filter(|r| r.see == color && r.class == class)
                    .count();
                if n == 0 {
                    return Err(AdversaryError::InvalidTable(format!(
                        "missing rule for ({color}, class {class})"
                    )));
                }
                if n > 1 {
                    return Err(AdversaryError::InvalidTable(format!(
                        "duplicate rules for ({color}, class {class})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn action(&self, see: Color, class: usize) -> Option<&Rule> {
        self.rules
            .iter()
            .find(|r| r.see == see && r.class == class)
    }

    /// Engine-facing program: derive the key from the snapshot, aim along the
    /// axis to the other occupied point.
    pub fn decide(&self, snapshot: &Snapshot, params: &Params) -> Result<Decision, ProgramError> {
        let tol = params.tol();
        let origin = Point::new(0.0, 0.0);
        let other = snapshot
            .points
            .iter()
            .map(|p| p.pos)
            .max_by(|a, b| {
                dist(origin, *a)
                    .partial_cmp(&dist(origin, *b))
                    .expect("finite")
            })
            .unwrap_or(origin);
        let distance = dist(origin, other);
        let key = match self.model {
            LightModel::Fstate => {
                snapshot.own_light.ok_or(ProgramError::WrongLightModel {
                    program: String::from("rule-table"),
                    needed: "FSTATE",
                })?
            }
            _ => {
                // FCOMM: the first visible color is the other robot's light.
                snapshot
                    .points
                    .iter()
                    .flat_map(|p| p.lights.iter())
                    .next()
                    .copied()
                    .ok_or(ProgramError::WrongLightModel {
                        program: String::from("rule-table"),
                        needed: "FCOMM",
                    })?
            }
        };
        let rule = self
            .action(key, self.class_of(distance))
            .ok_or_else(|| ProgramError::IncompleteRuleTable(format!("{key}")))?;
        let destination = if tol.is_zero(distance) {
            origin
        } else {
            match rule.movement {
                MoveRule::Fraction(f) => Point::new(other.x * f, other.y * f),
                MoveRule::Signed { signed } => {
                    point_along(origin, other, signed).expect("distance is nonzero")
                }
            }
        };
        Ok(Decision {
            new_light: rule.set,
            destination,
        })
    }

    /// The canonical 2-color single-class FSTATE table: what to do on seeing
    /// A and on seeing B, each as (new light, move fraction).
    pub fn two_color_fstate(on_a: (Color, f64), on_b: (Color, f64)) -> RuleTable {
        Self::two_color(LightModel::Fstate, on_a, on_b)
    }

    pub fn two_color(model: LightModel, on_a: (Color, f64), on_b: (Color, f64)) -> RuleTable {
        RuleTable {
            model,
            palette: alloc::vec![Color::A, Color::B],
            distance_breakpoints: Vec::new(),
            rules: alloc::vec![
                Rule {
                    see: Color::A,
                    class: 0,
                    set: on_a.0,
                    movement: MoveRule::Fraction(on_a.1),
                },
                Rule {
                    see: Color::B,
                    class: 0,
                    set: on_b.0,
                    movement: MoveRule::Fraction(on_b.1),
                },
            ],
        }
    }
}

/// All 36 deterministic 2-color single-class tables with move fractions in
/// {0, 1/2, 1} for the given model.
pub fn enumerate_two_color_tables(model: LightModel) -> Vec<RuleTable> {
    let lambdas = [0.0, 0.5, 1.0];
    let colors = [Color::A, Color::B];
    let mut tables = Vec::with_capacity(36);
    for &set_a in &colors {
        for &la in &lambdas {
            for &set_b in &colors {
                for &lb in &lambdas {
                    tables.push(RuleTable::two_color(model, (set_a, la), (set_b, lb)));
                }
            }
        }
    }
    tables
}

/// Exact two-robot state under the proof's symmetric setup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoRobotState {
    pub lights: (Color, Color),
    pub positions: (Point, Point),
}

impl TwoRobotState {
    pub fn new(lights: (Color, Color), positions: (Point, Point)) -> Self {
        Self { lights, positions }
    }

    /// Both lights `light`, robots on the x axis at the given distance.
    pub fn symmetric(light: Color, distance: f64) -> Self {
        Self {
            lights: (light, light),
            positions: (Point::new(0.0, 0.0), Point::new(distance, 0.0)),
        }
    }

    pub fn distance(&self) -> f64 {
        dist(self.positions.0, self.positions.1)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// The loop moves robots (swapping or scaling) without ever meeting.
    SwapLoop,
    /// Nobody moves and lights are constant.
    StayLoop,
    /// Nobody moves while lights cycle.
    ColorCycleLoop,
    /// Both robots independently trapped in non-moving color loops.
    SelfStabilizingTrap,
}

/// Recorded engine state after one scheduled step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertState {
    pub lights: (Color, Color),
    pub positions: (Point, Point),
}

/// A finite schedule prefix plus a pumpable loop whose replay never gathers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Activation sets before the loop starts.
    pub prefix: Vec<Vec<usize>>,
    /// One loop period of activation sets.
    pub loop_schedule: Vec<Vec<usize>>,
    /// Distance scale factor across one loop period (1 when positions repeat).
    pub loop_scale: f64,
    /// Largest idle streak over prefix + pumped loop; None when the loop
    /// alone starves a robot (a one-sided color cycle).
    pub fairness_bound: Option<u64>,
    /// Engine states: initial, then one per prefix step, then one per loop
    /// step. Replaying the same schedule reproduces these exactly.
    pub states: Vec<CertState>,
}

impl Certificate {
    pub fn period(&self) -> usize {
        self.loop_schedule.len()
    }
}

/// Search result for one table and start state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum AdversaryOutcome {
    Certificate(Certificate),
    /// The constructed schedule gathered the robots; records how.
    GatheringWitness {
        schedule: Vec<Vec<usize>>,
        gathered_round: u64,
    },
    /// No certificate within the round budget; the prefix found never
    /// gathered but could not be closed into a loop.
    Inconclusive { prefix: Vec<Vec<usize>> },
}

const GATHER_EPS: f64 = 1e-9;

fn key_color(table: &RuleTable, own: Color, other: Color) -> Color {
    match table.model {
        LightModel::Fstate => own,
        _ => other,
    }
}

fn apply_move(from: Point, toward: Point, movement: MoveRule) -> Point {
    let d = dist(from, toward);
    if d == 0.0 {
        return from;
    }
    match movement {
        MoveRule::Fraction(f) => Point::new(
            from.x + f * (toward.x - from.x),
            from.y + f * (toward.y - from.y),
        ),
        MoveRule::Signed { signed } => point_along(from, toward, signed).expect("d > 0"),
    }
}

fn moves_robot(from: Point, toward: Point, movement: MoveRule) -> bool {
    dist(apply_move(from, toward, movement), from) > GATHER_EPS
}

/// Implements the constructive strategy round by round and closes a loop on
/// the first repeated (lights, distance class, alternation parity) state.
///
/// From symmetric same-light starts the one-sided trap (exactly one robot
/// would move, onto the other) is unreachable for tables over two colors:
/// a {1, 0} move pair needs a table without any 1/2 fraction, and such tables
/// never break light symmetry. One-sided color cycles can still be reported
/// for asymmetric starts; their loops are not fair and say so.
pub fn build_adversarial_schedule(
    table: &RuleTable,
    init: &TwoRobotState,
    max_rounds: usize,
) -> Result<AdversaryOutcome, AdversaryError> {
    table.validate()?;
    let mut lights = init.lights;
    let mut positions = init.positions;
    let mut schedule: Vec<Vec<usize>> = Vec::new();
    // (l0, l1, class, parity) -> index into schedule where the state was seen.
    let mut seen: alloc::collections::BTreeMap<(u8, u8, usize, bool), usize> =
        alloc::collections::BTreeMap::new();
    let mut parity = false;
    let mut distances: Vec<f64> = alloc::vec![dist(positions.0, positions.1)];

    for _ in 0..=max_rounds {
        let d = dist(positions.0, positions.1);
        if d <= GATHER_EPS {
            return Ok(AdversaryOutcome::GatheringWitness {
                schedule: schedule.clone(),
                gathered_round: schedule.len() as u64,
            });
        }
        let class = table.class_of(d);
        let key = (lights.0 .0, lights.1 .0, class, parity);
        if let Some(&start) = seen.get(&key) {
            let scale = d / distances[start];
            if table.classes() > 1 && (scale - 1.0).abs() > 1e-12 {
                // A scaled loop can drift across class boundaries; the pump
                // argument only holds single-class or scale-1.
                return Ok(AdversaryOutcome::Inconclusive {
                    prefix: schedule.clone(),
                });
            }
            let _ = scale;
            let prefix = schedule[..start].to_vec();
            let loop_schedule = schedule[start..].to_vec();
            let certificate = finish_certificate(table, init, prefix, loop_schedule, None)?;
            return Ok(AdversaryOutcome::Certificate(certificate));
        }
        seen.insert(key, schedule.len());

        let rule0 = table
            .action(key_color(table, lights.0, lights.1), class)
            .expect("validated table is total");
        let rule1 = table
            .action(key_color(table, lights.1, lights.0), class)
            .expect("validated table is total");
        let both0 = apply_move(positions.0, positions.1, rule0.movement);
        let both1 = apply_move(positions.1, positions.0, rule1.movement);
        let both_gathers = dist(both0, both1) <= GATHER_EPS;

        let activated: Vec<usize> = if !both_gathers {
            positions = (both0, both1);
            lights = (rule0.set, rule1.set);
            alloc::vec![0, 1]
        } else {
            let mover0 = moves_robot(positions.0, positions.1, rule0.movement);
            let mover1 = moves_robot(positions.1, positions.0, rule1.movement);
            match (mover0, mover1) {
                (true, true) => {
                    // Either single activation avoids the meeting; alternate.
                    let pick = if parity { 1 } else { 0 };
                    parity = !parity;
                    if pick == 0 {
                        positions = (both0, positions.1);
                        lights = (rule0.set, lights.1);
                    } else {
                        positions = (positions.0, both1);
                        lights = (lights.0, rule1.set);
                    }
                    alloc::vec![pick]
                }
                (true, false) => {
                    // Keep activating the non-mover (robot 1).
                    lights = (lights.0, rule1.set);
                    alloc::vec![1]
                }
                (false, true) => {
                    lights = (rule0.set, lights.1);
                    alloc::vec![0]
                }
                (false, false) => {
                    // Nobody moves yet both-activation gathers: impossible at
                    // positive distance.
                    unreachable!("gathering without movement at distance > 0")
                }
            }
        };
        schedule.push(activated);
        distances.push(dist(positions.0, positions.1));
    }
    Ok(AdversaryOutcome::Inconclusive { prefix: schedule })
}

/// Synchronous (activate-both-forever) evolution from a symmetric same-light
/// start, classified into the non-gathering loop it settles into. Errors out
/// if the synchronous run would gather (that table needs the adaptive
/// strategy instead).
pub fn four_subcase_analysis(
    table: &RuleTable,
    start_light: Color,
    distance: f64,
) -> Result<Certificate, AdversaryError> {
    table.validate()?;
    let init = TwoRobotState::symmetric(start_light, distance);
    let mut light = start_light;
    let mut d = distance;
    let mut seen: Vec<(Color, usize)> = alloc::vec![(light, table.class_of(d))];
    let mut steps = 0usize;
    loop {
        let class = table.class_of(d);
        let rule = table
            .action(light, class)
            .expect("validated table is total");
        // Symmetric both-activation: meeting happens iff the move fractions
        // sum to one, i.e. the shared fraction is 1/2 (or signed sum = d).
        let p0 = apply_move(Point::new(0.0, 0.0), Point::new(d, 0.0), rule.movement);
        let p1 = apply_move(Point::new(d, 0.0), Point::new(0.0, 0.0), rule.movement);
        if dist(p0, p1) <= GATHER_EPS {
            return Err(AdversaryError::SynchronousGathering);
        }
        d = dist(p0, p1);
        light = rule.set;
        steps += 1;
        let state = (light, table.class_of(d));
        if let Some(pos) = seen.iter().position(|&s| s == state) {
            let prefix: Vec<Vec<usize>> = (0..pos).map(|_| alloc::vec![0, 1]).collect();
            let loop_schedule: Vec<Vec<usize>> = (pos..steps).map(|_| alloc::vec![0, 1]).collect();
            return finish_certificate(table, &init, prefix, loop_schedule, None);
        }
        seen.push(state);
        if steps > 8 * (table.palette.len() * table.classes() + 1) {
            return Err(AdversaryError::Replay(String::from(
                "no light cycle found in the synchronous evolution",
            )));
        }
    }
}

/// Probes an FSTATE table for the self-stabilizing trap: starting both robots
/// on `probe_color`, does each robot individually cycle through colors
/// without ever moving? If so the two non-moving loops interleave into a fair
/// certificate.
pub fn self_stabilizing_trap(
    table: &RuleTable,
    probe_color: Color,
) -> Result<Option<Certificate>, AdversaryError> {
    table.validate()?;
    if table.model != LightModel::Fstate {
        return Err(AdversaryError::NeedsFstate);
    }
    let distance = 2.0;
    let class = table.class_of(distance);
    let mut chain: Vec<Color> = alloc::vec![probe_color];
    loop {
        let current = *chain.last().expect("chain is never empty");
        let rule = table
            .action(current, class)
            .expect("validated table is total");
        if moves_robot(
            Point::new(0.0, 0.0),
            Point::new(distance, 0.0),
            rule.movement,
        ) {
            return Ok(None);
        }
        let next = rule.set;
        if let Some(pos) = chain.iter().position(|&c| c == next) {
            // chain[pos..] is the non-moving color cycle.
            let pre_steps = pos;
            let cycle_len = chain.len() - pos;
            let interleave = |steps: usize| -> Vec<Vec<usize>> {
                let mut sched = Vec::with_capacity(2 * steps);
                for _ in 0..steps {
                    sched.push(alloc::vec![0]);
                    sched.push(alloc::vec![1]);
                }
                sched
            };
            let init = TwoRobotState::symmetric(probe_color, distance);
            let cert = finish_certificate(
                table,
                &init,
                interleave(pre_steps),
                interleave(cycle_len),
                Some(CertificateKind::SelfStabilizingTrap),
            )?;
            return Ok(Some(cert));
        }
        chain.push(next);
    }
}

/// Schedule records for prefix + `pumps` loop periods.
fn pumped_records(
    prefix: &[Vec<usize>],
    loop_schedule: &[Vec<usize>],
    pumps: usize,
) -> Vec<ActivationRecord> {
    prefix
        .iter()
        .chain(core::iter::repeat(loop_schedule.iter()).take(pumps).flatten())
        .enumerate()
        .map(|(round, set)| ActivationRecord {
            round: round as u64,
            activated: set.iter().copied().collect(),
        })
        .collect()
}

/// Replays prefix + one loop period through the engine: records the certified
/// states, verifies no round gathers, classifies the loop, and measures the
/// fairness bound over ten pumped periods.
fn finish_certificate(
    table: &RuleTable,
    init: &TwoRobotState,
    prefix: Vec<Vec<usize>>,
    loop_schedule: Vec<Vec<usize>>,
    kind_override: Option<CertificateKind>,
) -> Result<Certificate, AdversaryError> {
    if loop_schedule.is_empty() {
        return Err(AdversaryError::Replay(String::from("empty loop")));
    }
    let states = replay_states(table, init, &prefix, &loop_schedule, 1)?;

    let loop_start = prefix.len();
    let loop_states = &states[loop_start..=loop_start + loop_schedule.len()];
    let moved = loop_states
        .windows(2)
        .any(|w| w[0].positions != w[1].positions);
    let lights_cycle = loop_states.windows(2).any(|w| w[0].lights != w[1].lights);
    let kind = kind_override.unwrap_or(if moved {
        CertificateKind::SwapLoop
    } else if lights_cycle {
        CertificateKind::ColorCycleLoop
    } else {
        CertificateKind::StayLoop
    });

    let d_start = dist(loop_states[0].positions.0, loop_states[0].positions.1);
    let d_end = dist(
        loop_states[loop_schedule.len()].positions.0,
        loop_states[loop_schedule.len()].positions.1,
    );
    let loop_scale = if d_start > 0.0 { d_end / d_start } else { 1.0 };

    let records = pumped_records(&prefix, &loop_schedule, 10);
    let loop_covers_both =
        (0..2).all(|r| loop_schedule.iter().any(|set| set.contains(&r)));
    let fairness_bound = if loop_covers_both {
        (1..=records.len() as u64).find(|&b| check_fairness(&records, 2, b))
    } else {
        None
    };

    Ok(Certificate {
        kind,
        prefix,
        loop_schedule,
        loop_scale,
        fairness_bound,
        states,
    })
}

/// Largest pump count whose replay keeps the robot distance comfortably
/// above the co-location tolerance. Shrinking loops (scale < 1) converge
/// geometrically without ever meeting; replaying too many periods would read
/// as a false gather.
fn safe_pumps(cert: &Certificate, requested: usize) -> usize {
    let last = cert.states.last().expect("certificate has states");
    let mut d = dist(last.positions.0, last.positions.1);
    if cert.loop_scale >= 1.0 - 1e-12 {
        return requested.max(1);
    }
    let mut pumps = 1usize;
    while pumps < requested && d * cert.loop_scale > 1e-6 {
        d *= cert.loop_scale;
        pumps += 1;
    }
    pumps
}

/// Builds the two-robot engine world for a table: identity frame and a
/// half-turn frame (the symmetric-snapshot setup), rigid movement, scripted
/// schedule.
pub fn replay_run_config(
    table: &RuleTable,
    init: &TwoRobotState,
    script: Vec<Vec<usize>>,
) -> RunConfig {
    let rounds = script.len() as u64;
    RunConfig {
        robots: alloc::vec![
            RobotSpec {
                pos: init.positions.0,
                light: init.lights.0,
                frame: Frame::default(),
            },
            RobotSpec {
                pos: init.positions.1,
                light: init.lights.1,
                frame: Frame::new(core::f64::consts::PI, 1.0, false),
            },
        ],
        params: Params::new(1.0, 0.5, 4.1, 1e-9).expect("canonical parameters"),
        program: ProgramKind::RuleTable {
            table: table.clone(),
        },
        light_model: table.model,
        view: ViewKind::Set,
        local_aware: true,
        schedule: SchedulePolicy::Scripted { script },
        movement: MovementPolicy::Rigid,
        groups: None,
        max_rounds: rounds,
        monitors: false,
        negative_test: false,
        gather_cooldown: 0,
        seed: 0,
    }
}

fn replay_states(
    table: &RuleTable,
    init: &TwoRobotState,
    prefix: &[Vec<usize>],
    loop_schedule: &[Vec<usize>],
    pumps: usize,
) -> Result<Vec<CertState>, AdversaryError> {
    let mut script: Vec<Vec<usize>> = prefix.to_vec();
    for _ in 0..pumps {
        script.extend(loop_schedule.iter().cloned());
    }
    let cfg = replay_run_config(table, init, script);
    let trace = engine::run(&cfg).map_err(|e| AdversaryError::Replay(format!("{e}")))?;
    if let TerminalStatus::Gathered { round } = trace.status {
        return Err(AdversaryError::Replay(format!(
            "schedule gathered at round {round}, not a certificate"
        )));
    }
    let mut states = alloc::vec![CertState {
        lights: init.lights,
        positions: init.positions,
    }];
    for record in &trace.rounds {
        states.push(CertState {
            lights: (record.robots[0].light, record.robots[1].light),
            positions: (record.robots[0].pos, record.robots[1].pos),
        });
    }
    Ok(states)
}

/// Re-replays a certificate: the recorded states (prefix + one period) must
/// reproduce exactly and no replay round may gather. The engine replay pumps
/// as many of the requested periods as the loop scale safely allows; the
/// stated fairness bound is checked over all `pumps` periods of the schedule
/// itself.
pub fn validate_certificate(
    table: &RuleTable,
    init: &TwoRobotState,
    cert: &Certificate,
    pumps: usize,
) -> Result<(), AdversaryError> {
    let replay_pumps = safe_pumps(cert, pumps.max(1));
    let states = replay_states(table, init, &cert.prefix, &cert.loop_schedule, replay_pumps)?;
    for (i, expect) in cert.states.iter().enumerate() {
        let got = states
            .get(i)
            .ok_or_else(|| AdversaryError::Replay(String::from("replay shorter than certificate")))?;
        if got != expect {
            return Err(AdversaryError::Replay(format!(
                "state {i} diverged from the certificate"
            )));
        }
    }
    for (i, s) in states.iter().enumerate() {
        if dist(s.positions.0, s.positions.1) <= GATHER_EPS {
            return Err(AdversaryError::Replay(format!("replay gathered at step {i}")));
        }
    }
    if let Some(bound) = cert.fairness_bound {
        let records = pumped_records(&cert.prefix, &cert.loop_schedule, pumps.max(1));
        if !check_fairness(&records, 2, bound) {
            return Err(AdversaryError::Replay(format!(
                "stated fairness bound {bound} violated"
            )));
        }
    }
    Ok(())
}
