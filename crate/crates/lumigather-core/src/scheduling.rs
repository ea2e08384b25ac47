//! Activation adversaries (who runs each round) and movement adversaries
//! (where non-rigid moves stop), with checkable fairness and replayable
//! randomness.
//!
//! Every policy is a pure function of (policy, seed, history): the per-round
//! randomness is derived from the seed and the round index, never from shared
//! RNG state, so identical inputs always produce identical activation sets
//! and stop points.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::geometry::{dist, point_along, Point};
use crate::rng::{mix_stream, SimRng};

pub type ActivationSet = BTreeSet<usize>;

/// Who gets activated each round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SchedulePolicy {
    /// Every robot in every round.
    #[serde(rename = "FSYNCH")]
    Fsynch,
    /// Uniformly random nonempty subsets, with any robot idle for
    /// `fairness_bound` rounds force-included.
    #[serde(rename = "SSYNCH_RANDOM_FAIR")]
    SsynchRandomFair { fairness_bound: u64, seed: u64 },
    /// Exactly one robot per round, seeded choice with deadline forcing.
    /// Needs `fairness_bound >= n`.
    #[serde(rename = "CENT")]
    Cent { fairness_bound: u64, seed: u64 },
    /// Singletons in the fixed cyclic id order.
    #[serde(rename = "ROUND_ROBIN")]
    RoundRobin,
    /// Random fair subsets constrained so that between two consecutive
    /// activations of any robot, any other robot is activated at most `k`
    /// times.
    #[serde(rename = "K_BOUNDED")]
    KBounded {
        k: u64,
        fairness_bound: u64,
        seed: u64,
    },
    /// Replays an explicit list of activation sets and errors past its end.
    #[serde(rename = "SCRIPTED")]
    Scripted { script: Vec<Vec<usize>> },
}

impl SchedulePolicy {
    /// The inactivity bound this policy guarantees, used by self-checks.
    pub fn fairness_bound(&self, n: usize) -> u64 {
        match self {
            SchedulePolicy::Fsynch => 0,
            SchedulePolicy::SsynchRandomFair { fairness_bound, .. } => *fairness_bound,
            SchedulePolicy::Cent { fairness_bound, .. } => *fairness_bound,
            SchedulePolicy::RoundRobin => n.saturating_sub(1) as u64,
            SchedulePolicy::KBounded { fairness_bound, .. } => *fairness_bound,
            SchedulePolicy::Scripted { script } => script.len() as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScheduleError {
    #[error("scripted schedule exhausted at round {0}")]
    ScriptExhausted(u64),
    #[error("scripted activation set at round {0} is empty")]
    EmptyScriptSet(u64),
    #[error("scripted activation set names robot {id} but only {n} robots exist")]
    ScriptIdOutOfRange { id: usize, n: usize },
    #[error("policy needs at least one robot")]
    NoRobots,
    #[error("random-subset policies support at most 64 robots, got {0}")]
    TooManyRobots(usize),
    #[error("{0}")]
    BadPolicy(String),
}

/// Bookkeeping record: which ids ran in a round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivationRecord {
    pub round: u64,
    pub activated: ActivationSet,
}

/// Incremental scheduler state for one run.
///
/// [`next_activation`] offers the same decision as a pure function of the
/// history; this struct is the O(1)-per-round form the engine drives.
#[derive(Clone, Debug)]
pub struct Scheduler {
    policy: SchedulePolicy,
    n: usize,
    round: u64,
    /// Consecutive rounds each robot has been inactive.
    idle: Vec<u64>,
    /// `counts[r][s]`: rounds containing `s` since `r`'s last activation.
    counts: Vec<Vec<u64>>,
}

impl Scheduler {
    pub fn new(policy: SchedulePolicy, n: usize) -> Result<Self, ScheduleError> {
        if n == 0 {
            return Err(ScheduleError::NoRobots);
        }
        match &policy {
            SchedulePolicy::SsynchRandomFair { fairness_bound, .. }
            | SchedulePolicy::KBounded { fairness_bound, .. } => {
                if n > 64 {
                    return Err(ScheduleError::TooManyRobots(n));
                }
                if *fairness_bound == 0 {
                    return Err(ScheduleError::BadPolicy(String::from(
                        "fairness_bound must be positive",
                    )));
                }
            }
            SchedulePolicy::Cent { fairness_bound, .. } => {
                if (*fairness_bound as usize) < n {
                    return Err(ScheduleError::BadPolicy(String::from(
                        "CENT needs fairness_bound >= n to stay fair with singleton rounds",
                    )));
                }
            }
            SchedulePolicy::Scripted { script } => {
                for (i, set) in script.iter().enumerate() {
                    if set.is_empty() {
                        return Err(ScheduleError::EmptyScriptSet(i as u64));
                    }
                    if let Some(&id) = set.iter().find(|&&id| id >= n) {
                        return Err(ScheduleError::ScriptIdOutOfRange { id, n });
                    }
                }
            }
            _ => {}
        }
        if let SchedulePolicy::KBounded { k, .. } = &policy {
            if *k == 0 {
                return Err(ScheduleError::BadPolicy(String::from("k must be positive")));
            }
        }
        Ok(Self {
            policy,
            n,
            round: 0,
            idle: alloc::vec![0; n],
            counts: alloc::vec![alloc::vec![0; n]; n],
        })
    }

    /// Replays an existing history into scheduler state.
    pub fn from_history(
        policy: SchedulePolicy,
        history: &[ActivationRecord],
        n: usize,
    ) -> Result<Self, ScheduleError> {
        let mut s = Self::new(policy, n)?;
        for rec in history {
            s.observe(&rec.activated);
        }
        Ok(s)
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    /// Produces the next activation set and advances the internal state.
    pub fn next(&mut self) -> Result<ActivationSet, ScheduleError> {
        let set = self.peek()?;
        self.observe(&set);
        Ok(set)
    }

    /// The activation set for the current round without advancing.
    pub fn peek(&self) -> Result<ActivationSet, ScheduleError> {
        let n = self.n;
        match &self.policy {
            SchedulePolicy::Fsynch => Ok((0..n).collect()),
            SchedulePolicy::RoundRobin => {
                let mut set = ActivationSet::new();
                set.insert((self.round % n as u64) as usize);
                Ok(set)
            }
            SchedulePolicy::SsynchRandomFair {
                fairness_bound,
                seed,
            } => {
                let mut rng = SimRng::new(mix_stream(*seed, &[self.round]));
                let mask = rng.nonempty_subset_mask(n);
                let mut set: ActivationSet =
                    (0..n).filter(|&i| mask & (1u64 << i) != 0).collect();
                for i in 0..n {
                    if self.idle[i] >= *fairness_bound {
                        set.insert(i);
                    }
                }
                Ok(set)
            }
            SchedulePolicy::Cent {
                fairness_bound,
                seed,
            } => {
                // Longest-idle-first forcing once a robot is within n rounds
                // of its deadline; unserved idle streaks grow in lockstep, so
                // queue order is stable and no streak ever reaches the bound.
                let force_at = fairness_bound - n as u64;
                let urgent = (0..n)
                    .filter(|&i| self.idle[i] >= force_at)
                    .max_by_key(|&i| (self.idle[i], core::cmp::Reverse(i)));
                let pick = urgent.unwrap_or_else(|| {
                    SimRng::new(mix_stream(*seed, &[self.round])).usize_below(n)
                });
                let mut set = ActivationSet::new();
                set.insert(pick);
                Ok(set)
            }
            SchedulePolicy::KBounded {
                k,
                fairness_bound,
                seed,
            } => {
                let mut rng = SimRng::new(mix_stream(*seed, &[self.round]));
                let mask = rng.nonempty_subset_mask(n);
                let mut set: ActivationSet =
                    (0..n).filter(|&i| mask & (1u64 << i) != 0).collect();
                for i in 0..n {
                    if self.idle[i] >= *fairness_bound {
                        set.insert(i);
                    }
                }
                // Close under the window constraint: a sleeping robot whose
                // budget for some activated robot is exhausted must wake too.
                loop {
                    let mut grew = false;
                    for r in 0..n {
                        if set.contains(&r) {
                            continue;
                        }
                        if set.iter().any(|&s| self.counts[r][s] >= *k) {
                            set.insert(r);
                            grew = true;
                        }
                    }
                    if !grew {
                        break;
                    }
                }
                Ok(set)
            }
            SchedulePolicy::Scripted { script } => {
                let idx = self.round as usize;
                if idx >= script.len() {
                    return Err(ScheduleError::ScriptExhausted(self.round));
                }
                if script[idx].is_empty() {
                    return Err(ScheduleError::EmptyScriptSet(self.round));
                }
                Ok(script[idx].iter().copied().collect())
            }
        }
    }

    /// Advances bookkeeping with the activation set that actually ran.
    pub fn observe(&mut self, set: &ActivationSet) {
        for i in 0..self.n {
            if set.contains(&i) {
                self.idle[i] = 0;
                for c in self.counts[i].iter_mut() {
                    *c = 0;
                }
            } else {
                self.idle[i] += 1;
                for &s in set {
                    self.counts[i][s] += 1;
                }
            }
        }
        self.round += 1;
    }
}

/// Pure form: the activation set that follows `history` under `policy`.
pub fn next_activation(
    policy: &SchedulePolicy,
    history: &[ActivationRecord],
    n: usize,
) -> Result<ActivationSet, ScheduleError> {
    Scheduler::from_history(policy.clone(), history, n)?.peek()
}

/// True iff no robot has an inactivity gap exceeding `bound` anywhere in the
/// history, counting the leading and trailing gaps.
pub fn check_fairness(history: &[ActivationRecord], n: usize, bound: u64) -> bool {
    let mut idle = alloc::vec![0u64; n];
    for rec in history {
        for (i, streak) in idle.iter_mut().enumerate() {
            if rec.activated.contains(&i) {
                *streak = 0;
            } else {
                *streak += 1;
                if *streak > bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Where non-rigid moves stop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MovementPolicy {
    /// Every move reaches its destination.
    #[serde(rename = "RIGID")]
    Rigid,
    /// Adversary stops every long move at exactly delta: the strongest
    /// adversary consistent with the model.
    #[serde(rename = "NONRIGID_MIN")]
    NonRigidMin { delta: f64 },
    /// Stops long moves uniformly in [delta, distance].
    #[serde(rename = "NONRIGID_RANDOM")]
    NonRigidRandom { delta: f64, seed: u64 },
    /// Stops long moves at delta + f * (distance - delta) for scripted
    /// fractions f in [0, 1], consumed one per interrupted move.
    #[serde(rename = "NONRIGID_SCRIPTED")]
    NonRigidScripted { delta: f64, script: Vec<f64> },
}

impl MovementPolicy {
    pub fn delta(&self) -> Option<f64> {
        match self {
            MovementPolicy::Rigid => None,
            MovementPolicy::NonRigidMin { delta }
            | MovementPolicy::NonRigidRandom { delta, .. }
            | MovementPolicy::NonRigidScripted { delta, .. } => Some(*delta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MovementError {
    #[error("movement script exhausted")]
    ScriptExhausted,
    #[error("movement script fraction {0} outside [0, 1]")]
    BadFraction(f64),
}

/// Per-run movement resolution. Randomness is keyed by (seed, round, from,
/// dest) rather than by draw order, so processing order never matters and
/// co-located robots with the same destination stop at the same point.
#[derive(Clone, Debug)]
pub struct MovementResolver {
    policy: MovementPolicy,
    script_cursor: usize,
}

impl MovementResolver {
    pub fn new(policy: MovementPolicy) -> Result<Self, MovementError> {
        if let MovementPolicy::NonRigidScripted { script, .. } = &policy {
            if let Some(&f) = script.iter().find(|f| !(0.0..=1.0).contains(*f)) {
                return Err(MovementError::BadFraction(f));
            }
        }
        Ok(Self {
            policy,
            script_cursor: 0,
        })
    }

    pub fn policy(&self) -> &MovementPolicy {
        &self.policy
    }

    /// Resolves one move. The result lies on the segment from -> dest; a
    /// stopped move still covers at least delta, and destinations within
    /// delta are always reached.
    pub fn resolve(&mut self, round: u64, from: Point, dest: Point) -> Result<Point, MovementError> {
        let d = dist(from, dest);
        match &self.policy {
            MovementPolicy::Rigid => Ok(dest),
            MovementPolicy::NonRigidMin { delta } => {
                if d <= *delta {
                    Ok(dest)
                } else {
                    Ok(point_along(from, dest, *delta).expect("d > delta > 0"))
                }
            }
            MovementPolicy::NonRigidRandom { delta, seed } => {
                if d <= *delta {
                    Ok(dest)
                } else {
                    let key = mix_stream(
                        *seed,
                        &[
                            round,
                            from.x.to_bits(),
                            from.y.to_bits(),
                            dest.x.to_bits(),
                            dest.y.to_bits(),
                        ],
                    );
                    let stop = SimRng::new(key).f64_range(*delta, d);
                    Ok(point_along(from, dest, stop).expect("d > delta > 0"))
                }
            }
            MovementPolicy::NonRigidScripted { delta, script } => {
                if d <= *delta {
                    Ok(dest)
                } else {
                    let f = *script
                        .get(self.script_cursor)
                        .ok_or(MovementError::ScriptExhausted)?;
                    self.script_cursor += 1;
                    let stop = delta + f * (d - delta);
                    Ok(point_along(from, dest, stop).expect("d > delta > 0"))
                }
            }
        }
    }
}

/// One-shot form of [`MovementResolver::resolve`] for non-scripted policies.
pub fn resolve_move(
    policy: &MovementPolicy,
    round: u64,
    from: Point,
    dest: Point,
) -> Result<Point, MovementError> {
    MovementResolver::new(policy.clone())?.resolve(round, from, dest)
}
