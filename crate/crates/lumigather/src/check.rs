//! The built-in invariant suite behind `lumigather check`: geometry against
//! independently written brute-force oracles, scheduler fairness and window
//! properties, movement contracts, snapshot information hiding, and replay
//! determinism. Prints one line per check.

use lumigather_core::engine::{run, setup};
use lumigather_core::geometry::{dist, smallest_enclosing_circle, Point, Tolerance};
use lumigather_core::model::{
    configuration_from, take_snapshot, Color, LightModel, ViewKind,
};
use lumigather_core::rng::SimRng;
use lumigather_core::scheduling::{
    check_fairness, resolve_move, ActivationRecord, MovementPolicy, SchedulePolicy, Scheduler,
};

use crate::gen;
use crate::trace;

pub struct CheckReport {
    pub passed: usize,
    pub failed: usize,
}

fn random_points(rng: &mut SimRng, n: usize, span: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.f64_range(-span, span), rng.f64_range(-span, span)))
        .collect()
}

/// Oracle: smallest covering circle among all 2-point diameters and 3-point
/// circumcircles, written independently of the library's incremental pass.
fn oracle_sec_radius(points: &[Point]) -> f64 {
    let covers = |center: Point, radius: f64| {
        points.iter().all(|&p| dist(center, p) <= radius + 1e-9)
    };
    let mut best = f64::MAX;
    if points.len() == 1 {
        return 0.0;
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let c = Point::new(
                (points[i].x + points[j].x) / 2.0,
                (points[i].y + points[j].y) / 2.0,
            );
            let r = dist(c, points[i]);
            if covers(c, r) {
                best = best.min(r);
            }
            for k in (j + 1)..points.len() {
                if let Some((c, r)) = circumcircle(points[i], points[j], points[k]) {
                    if covers(c, r) {
                        best = best.min(r);
                    }
                }
            }
        }
    }
    best
}

fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-12 {
        return None;
    }
    let ux = ((a.x * a.x + a.y * a.y) * (b.y - c.y)
        + (b.x * b.x + b.y * b.y) * (c.y - a.y)
        + (c.x * c.x + c.y * c.y) * (a.y - b.y))
        / d;
    let uy = ((a.x * a.x + a.y * a.y) * (c.x - b.x)
        + (b.x * b.x + b.y * b.y) * (a.x - c.x)
        + (c.x * c.x + c.y * c.y) * (b.x - a.x))
        / d;
    let center = Point::new(ux, uy);
    Some((center, dist(center, a).max(dist(center, b)).max(dist(center, c))))
}

fn oracle_diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.max(dist(points[i], points[j]));
        }
    }
    best
}

pub fn run_checks(seed: u64) -> CheckReport {
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut verdict = |name: &str, ok: bool, detail: String| {
        if ok {
            passed += 1;
            println!("[PASS] {name}");
        } else {
            failed += 1;
            println!("[FAIL] {name}: {detail}");
        }
    };

    // Smallest enclosing circle vs the candidate-circle oracle.
    {
        let mut rng = SimRng::new(seed ^ 0x5ec);
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..200 {
            let pts = random_points(&mut rng, 1 + rng.usize_below(12), 10.0);
            let c = smallest_enclosing_circle(&pts).unwrap();
            let oracle = oracle_sec_radius(&pts);
            worst = worst.max((c.radius - oracle).abs());
            ok &= (c.radius - oracle).abs() <= 1e-9
                && pts.iter().all(|&p| dist(c.center, p) <= c.radius + 1e-9);
        }
        verdict(
            "smallest enclosing circle matches brute-force oracle",
            ok,
            format!("worst radius gap {worst}"),
        );
    }

    // Longest distance segments vs pairwise maximum.
    {
        let mut rng = SimRng::new(seed ^ 0x1d5);
        let mut ok = true;
        for _ in 0..200 {
            let pts = random_points(&mut rng, 2 + rng.usize_below(18), 10.0);
            let lds =
                lumigather_core::geometry::longest_distance_segments(&pts, Tolerance::default());
            let oracle = oracle_diameter(&pts);
            ok &= (lds.diam - oracle).abs() <= 1e-9;
            ok &= lds
                .segments
                .iter()
                .all(|s| (s.length() - oracle).abs() <= 1e-9);
        }
        verdict(
            "longest distance segments match pairwise maximum",
            ok,
            String::new(),
        );
    }

    // Every scheduler kind passes its own fairness bound on a long prefix.
    {
        let n = 6;
        let policies = [
            SchedulePolicy::Fsynch,
            SchedulePolicy::RoundRobin,
            SchedulePolicy::SsynchRandomFair {
                fairness_bound: 5,
                seed,
            },
            SchedulePolicy::Cent {
                fairness_bound: 8,
                seed,
            },
            SchedulePolicy::KBounded {
                k: 2,
                fairness_bound: 5,
                seed,
            },
        ];
        let mut ok = true;
        let mut detail = String::new();
        for policy in policies {
            let bound = policy.fairness_bound(n).max(1);
            let mut sched = Scheduler::new(policy.clone(), n).unwrap();
            let history: Vec<ActivationRecord> = (0..10_000)
                .map(|round| ActivationRecord {
                    round,
                    activated: sched.next().unwrap(),
                })
                .collect();
            if !check_fairness(&history, n, bound) {
                ok = false;
                detail = format!("{policy:?} broke bound {bound}");
            }
        }
        verdict("schedulers satisfy their fairness bounds", ok, detail);
    }

    // K-bounded window property, brute force.
    {
        let n = 5;
        let k = 2u64;
        let mut sched = Scheduler::new(
            SchedulePolicy::KBounded {
                k,
                fairness_bound: 6,
                seed,
            },
            n,
        )
        .unwrap();
        let history: Vec<ActivationRecord> = (0..10_000)
            .map(|round| ActivationRecord {
                round,
                activated: sched.next().unwrap(),
            })
            .collect();
        let mut ok = true;
        'outer: for r in 0..n {
            let mut counts = vec![0u64; n];
            for rec in &history {
                if rec.activated.contains(&r) {
                    counts = vec![0; n];
                } else {
                    for &s in &rec.activated {
                        counts[s] += 1;
                        if counts[s] > k {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        verdict("k-bounded scheduler respects its window", ok, String::new());
    }

    // Movement adversaries stay on-segment and respect the minimum distance.
    {
        let mut rng = SimRng::new(seed ^ 0x40_0e);
        let delta = 4.1;
        let mut ok = true;
        for round in 0..500u64 {
            let from = Point::new(rng.f64_range(-10.0, 10.0), rng.f64_range(-10.0, 10.0));
            let dest = Point::new(rng.f64_range(-10.0, 10.0), rng.f64_range(-10.0, 10.0));
            let total = dist(from, dest);
            for policy in [
                MovementPolicy::Rigid,
                MovementPolicy::NonRigidMin { delta },
                MovementPolicy::NonRigidRandom { delta, seed },
            ] {
                let stop = resolve_move(&policy, round, from, dest).unwrap();
                let travelled = dist(from, stop);
                let on_segment = (travelled + dist(stop, dest) - total).abs() <= 1e-9;
                let covered = total <= delta || travelled >= delta - 1e-12 || matches!(policy, MovementPolicy::Rigid);
                let reached_short = total > delta || stop == dest;
                ok &= on_segment && covered && reached_short;
            }
        }
        verdict("movement adversaries honor the minimum-distance contract", ok, String::new());
    }

    // Own-light-only snapshots are independent of other robots' lights.
    {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(1.0, 2.0)),
            (Color::B, Point::new(-2.0, 1.0)),
        ]);
        let mut recolored = config.clone();
        for r in recolored.robots.iter_mut().skip(1) {
            r.light = Color::B;
        }
        let before = take_snapshot(
            &config,
            0,
            LightModel::Fstate,
            ViewKind::Set,
            true,
            Tolerance::default(),
            0,
        )
        .unwrap();
        let after = take_snapshot(
            &recolored,
            0,
            LightModel::Fstate,
            ViewKind::Set,
            true,
            Tolerance::default(),
            0,
        )
        .unwrap();
        verdict(
            "own-light snapshots hide other robots' lights",
            before == after,
            String::new(),
        );
    }

    // Replay determinism on a random run.
    {
        let config = gen::random_gathering_run(
            5,
            seed,
            10.0,
            setup::paper_params(),
            SchedulePolicy::SsynchRandomFair {
                fairness_bound: 5,
                seed,
            },
            MovementPolicy::NonRigidMin { delta: 4.1 },
        );
        let a = run(&config).map(|t| trace::to_jsonl(&config, &t));
        let b = run(&config).map(|t| trace::to_jsonl(&config, &t));
        verdict(
            "re-running a config reproduces the trace byte for byte",
            matches!((&a, &b), (Ok(x), Ok(y)) if x == y),
            String::new(),
        );
    }

    CheckReport { passed, failed }
}
