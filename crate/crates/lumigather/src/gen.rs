//! Seeded generators for initial configurations: random scatters with the
//! forbidden starting patterns rejected and resampled, random fixed frames,
//! and the run-config assembly the sweep runner and test suites share.

use lumigather_core::engine::{RobotSpec, RunConfig, setup};
use lumigather_core::geometry::Point;
use lumigather_core::model::{
    configuration_from, is_prohibited_initial, Color, Frame, Params, ProhibitedPattern,
};
use lumigather_core::rng::SimRng;
use lumigather_core::scheduling::{MovementPolicy, SchedulePolicy};

pub fn random_positions(rng: &mut SimRng, n: usize, range: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.f64_range(-range, range), rng.f64_range(-range, range)))
        .collect()
}

/// Random positions with prohibited patterns rejected and resampled.
pub fn admissible_positions(
    rng: &mut SimRng,
    n: usize,
    range: f64,
    params: &Params,
) -> Vec<Point> {
    loop {
        let pts = random_positions(rng, n, range);
        let specs: Vec<(Color, Point)> = pts.iter().map(|&p| (Color::A, p)).collect();
        let config = configuration_from(&specs);
        if is_prohibited_initial(&config, params) == ProhibitedPattern::No {
            return pts;
        }
    }
}

/// Arbitrary fixed rotation per robot, shared unit and chirality (what the
/// gathering program assumes).
pub fn random_rotation_frames(rng: &mut SimRng, n: usize) -> Vec<Frame> {
    (0..n)
        .map(|_| Frame::new(rng.f64_range(0.0, std::f64::consts::TAU), 1.0, false))
        .collect()
}

/// A gathering run over admissible random positions with random rotations.
pub fn random_gathering_run(
    n: usize,
    seed: u64,
    range: f64,
    params: Params,
    schedule: SchedulePolicy,
    movement: MovementPolicy,
) -> RunConfig {
    let mut rng = SimRng::new(seed);
    let positions = admissible_positions(&mut rng, n, range, &params);
    let frames = random_rotation_frames(&mut rng, n);
    let mut cfg = setup::gathering_run(&positions, params, schedule, movement, seed);
    for (spec, frame) in cfg.robots.iter_mut().zip(frames) {
        spec.frame = frame;
    }
    cfg
}

/// Positions for an all-on-segment configuration: endpoints at the given
/// length plus interior points, on a randomly rotated line.
pub fn random_onlds_positions(rng: &mut SimRng, n: usize, length: f64) -> Vec<Point> {
    assert!(n >= 2);
    let angle = rng.f64_range(0.0, std::f64::consts::TAU);
    let (s, c) = (angle.sin(), angle.cos());
    let ox = rng.f64_range(-3.0, 3.0);
    let oy = rng.f64_range(-3.0, 3.0);
    let mut ts = vec![0.0, length];
    for _ in 2..n {
        ts.push(rng.f64_range(0.05 * length, 0.95 * length));
    }
    ts.iter()
        .map(|&t| Point::new(ox + t * c, oy + t * s))
        .collect()
}

/// A two-point band configuration: n robots split over two points at the
/// given distance.
pub fn two_point_positions(rng: &mut SimRng, n: usize, distance: f64) -> Vec<Point> {
    assert!(n >= 2);
    let angle = rng.f64_range(0.0, std::f64::consts::TAU);
    let a = Point::new(rng.f64_range(-3.0, 3.0), rng.f64_range(-3.0, 3.0));
    let b = Point::new(a.x + distance * angle.cos(), a.y + distance * angle.sin());
    let left = 1 + rng.usize_below(n - 1);
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        pts.push(if i < left { a } else { b });
    }
    pts
}

/// Robot specs straight from positions, all lights A, identity frames.
pub fn specs_all_a(positions: &[Point]) -> Vec<RobotSpec> {
    positions
        .iter()
        .map(|&pos| RobotSpec {
            pos,
            light: Color::A,
            frame: Frame::default(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_never_prohibited() {
        let params = setup::paper_params();
        let mut rng = SimRng::new(5);
        for n in 2..=4 {
            for _ in 0..50 {
                let pts = admissible_positions(&mut rng, n, 10.0, &params);
                let specs: Vec<(Color, Point)> = pts.iter().map(|&p| (Color::A, p)).collect();
                assert_eq!(
                    is_prohibited_initial(&configuration_from(&specs), &params),
                    ProhibitedPattern::No
                );
            }
        }
    }

    #[test]
    fn onlds_positions_have_requested_length() {
        let mut rng = SimRng::new(9);
        let pts = random_onlds_positions(&mut rng, 5, 7.0);
        let diam = lumigather_core::geometry::diameter(&pts);
        assert!((diam - 7.0).abs() < 1e-9);
    }

    #[test]
    fn two_point_positions_have_two_occupied() {
        let mut rng = SimRng::new(4);
        let pts = two_point_positions(&mut rng, 6, 1.8);
        let distinct = lumigather_core::geometry::distinct_points(
            &pts,
            lumigather_core::geometry::Tolerance::default(),
        );
        assert_eq!(distinct.len(), 2);
    }
}
