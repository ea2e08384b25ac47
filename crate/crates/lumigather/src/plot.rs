//! Static SVG rendering of a trace: one polyline per robot, light states as
//! colored dots, and optional longest-segment / enclosing-circle overlays for
//! a round range.

use std::fmt::Write as _;

use lumigather_core::engine::{RunConfig, Trace};
use lumigather_core::geometry::{
    classify_onlds, distinct_points, smallest_enclosing_circle, OnLds, Point,
};
use lumigather_core::model::Color;

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error("trace has no rounds to plot")]
    EmptyTrace,
}

const ROBOT_HUES: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn light_fill(light: Color) -> &'static str {
    if light == Color::B {
        "#2980b9"
    } else {
        "#e67e22"
    }
}

/// Renders the trajectories. `overlay_rounds` adds the longest distance
/// segment and smallest enclosing circle of each round in the range.
pub fn render_svg(
    config: &RunConfig,
    trace: &Trace,
    overlay_rounds: Option<(u64, u64)>,
) -> Result<String, PlotError> {
    if trace.rounds.is_empty() {
        return Err(PlotError::EmptyTrace);
    }
    let n = config.robots.len();
    // Trajectory per robot: initial position then one point per round.
    let mut paths: Vec<Vec<(Point, Color)>> = (0..n)
        .map(|i| vec![(config.robots[i].pos, config.robots[i].light)])
        .collect();
    for record in &trace.rounds {
        for robot in &record.robots {
            paths[robot.id].push((robot.pos, robot.light));
        }
    }

    let all: Vec<Point> = paths.iter().flatten().map(|&(p, _)| p).collect();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &all {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-6);
    let pad = span * 0.08 + 0.1;
    let (vx, vy) = (min_x - pad, min_y - pad);
    let vw = (max_x - min_x) + 2.0 * pad;
    let vh = (max_y - min_y) + 2.0 * pad;
    let stroke = span / 300.0 + 1e-4;
    let dot = stroke * 2.2;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx} {vy} {vw} {vh}" width="720" height="720">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{vx}" y="{vy}" width="{vw}" height="{vh}" fill="white"/>"#
    );
    // y axis flipped so plots read like plane coordinates.
    let _ = writeln!(svg, r#"<g transform="translate(0 {flip}) scale(1 -1)">"#, flip = vy + vy + vh);

    if let Some((from, to)) = overlay_rounds {
        for record in &trace.rounds {
            if record.round < from || record.round > to {
                continue;
            }
            let pts: Vec<Point> = record.robots.iter().map(|r| r.pos).collect();
            let distinct = distinct_points(&pts, config.params.tol());
            if let Ok(sec) = smallest_enclosing_circle(&distinct) {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#dddddd" stroke-width="{stroke}"/>"#,
                    sec.center.x, sec.center.y, sec.radius
                );
            }
            if let OnLds::On(seg) = classify_onlds(&distinct, config.params.tol()) {
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" stroke-width="{stroke}" stroke-dasharray="{dash}"/>"#,
                    seg.a.x,
                    seg.a.y,
                    seg.b.x,
                    seg.b.y,
                    dash = stroke * 3.0
                );
            }
        }
    }

    // Sample dots when traces are long; polylines always carry every vertex.
    let dot_stride = (paths[0].len() / 400).max(1);
    for (i, path) in paths.iter().enumerate() {
        let hue = ROBOT_HUES[i % ROBOT_HUES.len()];
        let points: Vec<String> = path.iter().map(|(p, _)| format!("{},{}", p.x, p.y)).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{hue}" stroke-width="{stroke}" points="{}"/>"#,
            points.join(" ")
        );
        for (j, &(p, light)) in path.iter().enumerate() {
            if j % dot_stride != 0 && j + 1 != path.len() {
                continue;
            }
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{dot}" fill="{}" stroke="{hue}" stroke-width="{}"/>"#,
                p.x,
                p.y,
                light_fill(light),
                stroke * 0.5
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lumigather_core::engine::{run, setup};
    use lumigather_core::scheduling::{MovementPolicy, SchedulePolicy};

    #[test]
    fn one_round_gather_meets_at_midpoint() {
        let config = setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(1.8, 0.0)],
            setup::paper_params(),
            SchedulePolicy::Fsynch,
            MovementPolicy::NonRigidMin { delta: 4.1 },
            1,
        );
        let trace = run(&config).unwrap();
        let svg = render_svg(&config, &trace, None).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        // Both polylines end at the midpoint.
        assert!(svg.contains("0,0 0.9,0"));
        assert!(svg.contains("1.8,0 0.9,0"));
    }

    #[test]
    fn empty_trace_is_an_error() {
        let config = setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(1.8, 0.0)],
            setup::paper_params(),
            SchedulePolicy::Fsynch,
            MovementPolicy::NonRigidMin { delta: 4.1 },
            1,
        );
        let empty = Trace {
            rounds: vec![],
            status: lumigather_core::engine::TerminalStatus::RoundLimit,
        };
        assert!(matches!(
            render_svg(&config, &empty, None),
            Err(PlotError::EmptyTrace)
        ));
    }

    #[test]
    fn overlays_draw_circles_and_segments() {
        let config = setup::gathering_run(
            &[Point::new(0.0, 0.0), Point::new(3.0, 0.0)],
            setup::paper_params(),
            SchedulePolicy::Fsynch,
            MovementPolicy::NonRigidMin { delta: 4.1 },
            1,
        );
        let trace = run(&config).unwrap();
        let svg = render_svg(&config, &trace, Some((0, 5))).unwrap();
        assert!(svg.contains("<circle"));
        assert!(svg.contains("<line"));
    }
}
