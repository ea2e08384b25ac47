//! Robot programs: the two-color gathering program for own-light-only robots
//! and its three sub-behaviors (LDS election with radial expansion, line
//! formation that preserves the diameter, diameter adjustment, and the final
//! gather step), plus the dispatcher that ties them together.
//!
//! Programs are pure functions (snapshot, own light, params) -> decision and
//! operate entirely in the observer's frame, with the observer at the origin.
//! Dispatch priority is Gather > Adjust > Elect: the two-point and
//! equal-halves bands take precedence over the election guard that would
//! otherwise also capture them and livelock the system. A robot whose light
//! is already B never moves again, so light transitions are monotone A -> B.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    classify_onlds, dist, distinct_points, midpoint, point_along, project_onto_line,
    smallest_enclosing_circle, OnLds, Point, Segment, Tolerance,
};
use crate::model::{Color, Params, Snapshot};

/// What a robot decides during Compute: its next light and a destination in
/// its own frame.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub new_light: Color,
    pub destination: Point,
}

impl Decision {
    fn stay(light: Color) -> Self {
        Self {
            new_light: light,
            destination: Point::new(0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProgramError {
    #[error("program {program} requires the {needed} light model")]
    WrongLightModel {
        program: String,
        needed: &'static str,
    },
    #[error("rule table is missing an entry for key {0}")]
    IncompleteRuleTable(String),
}

/// The observer's view of a unique LDS: nearest endpoint, farthest endpoint,
/// and interior occupied points ordered from the nearest endpoint outward.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointView {
    pub p_n: Point,
    pub p_f: Point,
    pub interior: Vec<Point>,
    pub length: f64,
}

impl EndpointView {
    /// Ties (observer equidistant from both endpoints) resolve
    /// lexicographically in the observer's frame.
    pub fn from_points(points: &[Point], tol: Tolerance) -> Option<Self> {
        let seg = match classify_onlds(points, tol) {
            OnLds::On(seg) => seg,
            OnLds::NotOn => return None,
        };
        let origin = Point::new(0.0, 0.0);
        let (da, db) = (dist(origin, seg.a), dist(origin, seg.b));
        let (p_n, p_f) = if tol.eq(da, db) {
            // canonical_segment already ordered (a, b) lexicographically
            (seg.a, seg.b)
        } else if da < db {
            (seg.a, seg.b)
        } else {
            (seg.b, seg.a)
        };
        let mut interior: Vec<Point> = distinct_points(points, tol)
            .into_iter()
            .filter(|&p| !tol.coincident(p, p_n) && !tol.coincident(p, p_f))
            .collect();
        interior.sort_by(|x, y| {
            dist(p_n, *x)
                .partial_cmp(&dist(p_n, *y))
                .expect("finite distances")
        });
        Some(Self {
            p_n,
            p_f,
            interior,
            length: seg.length(),
        })
    }

    pub fn occupied_count(&self) -> usize {
        self.interior.len() + 2
    }

    pub fn observer_at_endpoint(&self, tol: Tolerance) -> bool {
        tol.coincident(Point::new(0.0, 0.0), self.p_n)
    }
}

/// Three occupied points with the near gap exactly eps/2, unequal gaps, and
/// the far gap at least 2d - eps. Observer-relative: `p_n` is the endpoint
/// nearest the observer.
pub fn a3p(snapshot: &Snapshot, params: &Params) -> bool {
    let tol = params.tol();
    let Some(view) = EndpointView::from_points(&snapshot.positions(), tol) else {
        return false;
    };
    if view.occupied_count() != 3 {
        return false;
    }
    let m1 = view.interior[0];
    let near = dist(view.p_n, m1);
    let far = dist(m1, view.p_f);
    tol.eq(near, params.epsilon / 2.0)
        && !tol.eq(near, far)
        && tol.ge(far, 2.0 * params.d - params.epsilon)
}

/// Four occupied points with both outer gaps exactly eps/2 and the inner gap
/// at least 2d - 2 eps.
pub fn a4p(snapshot: &Snapshot, params: &Params) -> bool {
    let tol = params.tol();
    let Some(view) = EndpointView::from_points(&snapshot.positions(), tol) else {
        return false;
    };
    if view.occupied_count() != 4 {
        return false;
    }
    let (m1, m2) = (view.interior[0], view.interior[1]);
    tol.eq(dist(view.p_n, m1), params.epsilon / 2.0)
        && tol.eq(dist(m2, view.p_f), params.epsilon / 2.0)
        && tol.ge(dist(m1, m2), 2.0 * params.d - 2.0 * params.epsilon)
}

fn own_light_or_a(snapshot: &Snapshot) -> Color {
    snapshot.own_light.unwrap_or(Color::A)
}

/// LDS election: while the diameter is under 4d, move 4d radially outward
/// from the center of the smallest enclosing circle (a robot sitting at the
/// center stays); once the diameter reaches 4d, hand over to the
/// distance-preserving line formation.
pub fn elect_lds(snapshot: &Snapshot, params: &Params) -> Decision {
    let tol = params.tol();
    let light = own_light_or_a(snapshot);
    let points = snapshot.positions();
    let pts = distinct_points(&points, tol);
    let diam = crate::geometry::diameter(&pts);
    if diam < 4.0 * params.d {
        let sec = smallest_enclosing_circle(&pts).expect("snapshot has at least the observer");
        let origin = Point::new(0.0, 0.0);
        if tol.coincident(origin, sec.center) {
            // Outward direction undefined at the center; the expansion
            // argument never needs the center robot to move.
            return Decision::stay(light);
        }
        let dest = point_along(origin, sec.center, -4.0 * params.d)
            .expect("observer is off-center here");
        Decision {
            new_light: light,
            destination: dest,
        }
    } else {
        elect_lds_preserving_distance(snapshot, params)
    }
}

/// Line formation that preserves the diameter, standing in for the cited
/// subroutine whose internals are external to this codebase. All robots agree
/// on a canonical longest segment through rotation-invariant keys and robots
/// off its line move perpendicularly onto it; everyone else holds.
///
/// Contract (checked by the engine's monitor on every run): under any fair
/// schedule with non-rigid moves, the sub-phase ends in a gathered state or
/// an all-on-segment state whose diameter is at least half the entry
/// diameter. Since endpoints hold and projections of points within the
/// diameter-lens land inside the segment, this substitute in fact preserves
/// the diameter exactly. Configurations with several exactly-tied longest
/// segments (perfect symmetries) can stall robots on conflicting targets;
/// the runtime monitor is the arbiter for those.
pub fn elect_lds_preserving_distance(snapshot: &Snapshot, params: &Params) -> Decision {
    let tol = params.tol();
    let light = own_light_or_a(snapshot);
    let pts = distinct_points(&snapshot.positions(), tol);
    let Some(canon) = canonical_lds(&pts, tol) else {
        return Decision::stay(light);
    };
    let origin = Point::new(0.0, 0.0);
    if tol.coincident(origin, canon.a) || tol.coincident(origin, canon.b) {
        return Decision::stay(light);
    }
    let foot = project_onto_line(origin, &canon).expect("canonical LDS has positive length");
    if tol.coincident(origin, foot) {
        return Decision::stay(light);
    }
    Decision {
        new_light: light,
        destination: foot,
    }
}

/// Picks one longest segment by keys every robot computes identically from
/// its own frame: exact length first, then the sorted profile of endpoint
/// distances to all points. Both are rotation- and translation-invariant.
fn canonical_lds(pts: &[Point], tol: Tolerance) -> Option<Segment> {
    let lds = crate::geometry::longest_distance_segments(pts, tol);
    let mut best: Option<(Segment, f64, Vec<(f64, f64)>)> = None;
    for seg in lds.segments {
        let len = seg.length();
        let mut profile: Vec<(f64, f64)> = pts
            .iter()
            .map(|&x| {
                let da = dist(x, seg.a);
                let db = dist(x, seg.b);
                (da.min(db), da.max(db))
            })
            .collect();
        profile.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
        let better = match &best {
            None => true,
            Some((_, best_len, best_profile)) =>

                len > *best_len
                    || (len == *best_len
                        && profile
                            .iter()
                            .zip(best_profile.iter())
                            .find_map(|(p, q)| p.partial_cmp(q))
                            .map(|o| o == core::cmp::Ordering::Less)
                            .unwrap_or(false)),
        };
        if better {
            best = Some((seg, len, profile));
        }
    }
    best.map(|(seg, _, _)| seg)
}

/// Diameter adjustment on an all-on-segment configuration: interior robots
/// walk to their nearest endpoint; once only endpoints (or the eps/2
/// transition patterns) remain, endpoint robots step eps/2 inward. Interior
/// robots hold during the transition patterns so each collapse shrinks the
/// segment by exactly eps/2 or eps. Lights never change here.
pub fn adjustment_lds(snapshot: &Snapshot, params: &Params) -> Decision {
    let tol = params.tol();
    let light = own_light_or_a(snapshot);
    let Some(view) = EndpointView::from_points(&snapshot.positions(), tol) else {
        return Decision::stay(light);
    };
    let at_endpoint = view.observer_at_endpoint(tol);
    let two_point_wide = view.occupied_count() == 2 && tol.ge(view.length, 2.0 * params.d);
    let in_a3p = a3p(snapshot, params);
    let in_a4p = a4p(snapshot, params);
    if at_endpoint && (two_point_wide || in_a3p || in_a4p) {
        let dest = point_along(view.p_n, view.p_f, params.epsilon / 2.0)
            .expect("LDS has positive length");
        return Decision {
            new_light: light,
            destination: dest,
        };
    }
    if view.occupied_count() >= 3 && !in_a3p && !in_a4p {
        return Decision {
            new_light: light,
            destination: view.p_n,
        };
    }
    Decision::stay(light)
}

/// The final step: in the [2d-eps, 2d) band (two points, or three points
/// with equal halves) an A robot turns B and heads for the midpoint; in the
/// [d-eps/2, d) two-point band an A robot turns B and joins the far point;
/// a B robot never moves again.
pub fn gather(snapshot: &Snapshot, own_light: Color, params: &Params) -> Decision {
    let tol = params.tol();
    if own_light == Color::B {
        return Decision::stay(Color::B);
    }
    let Some(view) = EndpointView::from_points(&snapshot.positions(), tol) else {
        return Decision::stay(own_light);
    };
    let l = view.length;
    let band_wide = tol.in_band_half_open(l, 2.0 * params.d - params.epsilon, 2.0 * params.d);
    let band_narrow =
        tol.in_band_half_open(l, params.d - params.epsilon / 2.0, params.d);
    let count = view.occupied_count();
    let equal_halves = count == 3 && {
        let m = view.interior[0];
        tol.eq(dist(view.p_n, m), dist(m, view.p_f))
    };
    if band_wide && (count == 2 || equal_halves) {
        let dest = if count == 2 {
            midpoint(view.p_n, view.p_f)
        } else {
            view.interior[0]
        };
        return Decision {
            new_light: Color::B,
            destination: dest,
        };
    }
    if band_narrow && count == 2 {
        return Decision {
            new_light: Color::B,
            destination: view.p_f,
        };
    }
    Decision::stay(own_light)
}

/// Full dispatch for the two-color gathering program.
///
/// Order matters: gathered and B-lit robots stay; the gather bands go first
/// (by guard text alone the election branch would also capture them); the
/// equal-halves three-point band sends endpoint robots to gather and interior
/// robots to the adjustment walk, which is what makes the two forbidden
/// starting patterns actually fail instead of collapsing by accident; then
/// wide all-on-segment configurations adjust, and everything else elects.
pub fn gathering_fstate_program(
    snapshot: &Snapshot,
    own_light: Color,
    params: &Params,
) -> Decision {
    let tol = params.tol();
    let pts = distinct_points(&snapshot.positions(), tol);
    if pts.len() == 1 {
        return Decision::stay(own_light);
    }
    if own_light == Color::B {
        return Decision::stay(Color::B);
    }
    if let Some(view) = EndpointView::from_points(&pts, tol) {
        let l = view.length;
        let band_wide =
            tol.in_band_half_open(l, 2.0 * params.d - params.epsilon, 2.0 * params.d);
        let band_narrow =
            tol.in_band_half_open(l, params.d - params.epsilon / 2.0, params.d);
        let count = view.occupied_count();
        if count == 2 && (band_wide || band_narrow) {
            return gather(snapshot, own_light, params);
        }
        if count == 3 && band_wide {
            let m = view.interior[0];
            if tol.eq(dist(view.p_n, m), dist(m, view.p_f)) {
                if view.observer_at_endpoint(tol) {
                    return gather(snapshot, own_light, params);
                }
                // Interior robot in the equal-halves band: walk to the
                // nearest endpoint, light unchanged.
                return adjustment_lds(snapshot, params);
            }
        }
        if tol.ge(l, 2.0 * params.d) || a3p(snapshot, params) || a4p(snapshot, params) {
            return adjustment_lds(snapshot, params);
        }
    }
    elect_lds(snapshot, params)
}

/// Trace annotation: which part of the program a configuration is in.
/// Derived from the configuration, never stored by robots.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseLabel {
    /// Radial expansion toward diameter >= 4d.
    ElectExpand,
    /// Line formation with diameter preserved.
    #[serde(rename = "ElectEPD")]
    ElectEpd,
    /// Diameter adjustment on the segment.
    Adjust,
    /// The two-point / equal-halves bands and everything after the first B.
    GatherBand,
    /// Gathered.
    Done,
}

/// Config-level transition-pattern tests used for phase labels and monitors
/// (any labeling of the sorted on-segment gaps, not observer-relative).
pub fn config_is_a3p(points: &[Point], params: &Params) -> bool {
    let tol = params.tol();
    let pts = distinct_points(points, tol);
    if pts.len() != 3 {
        return false;
    }
    let OnLds::On(seg) = classify_onlds(&pts, tol) else {
        return false;
    };
    let mut ts: Vec<f64> = pts.iter().map(|&p| dist(seg.a, p)).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let g1 = ts[1] - ts[0];
    let g2 = ts[2] - ts[1];
    let eps2 = params.epsilon / 2.0;
    let wide = 2.0 * params.d - params.epsilon;
    (tol.eq(g1, eps2) && !tol.eq(g1, g2) && tol.ge(g2, wide))
        || (tol.eq(g2, eps2) && !tol.eq(g1, g2) && tol.ge(g1, wide))
}

pub fn config_is_a4p(points: &[Point], params: &Params) -> bool {
    let tol = params.tol();
    let pts = distinct_points(points, tol);
    if pts.len() != 4 {
        return false;
    }
    let OnLds::On(seg) = classify_onlds(&pts, tol) else {
        return false;
    };
    let mut ts: Vec<f64> = pts.iter().map(|&p| dist(seg.a, p)).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let eps2 = params.epsilon / 2.0;
    tol.eq(ts[1] - ts[0], eps2)
        && tol.eq(ts[3] - ts[2], eps2)
        && tol.ge(ts[2] - ts[1], 2.0 * params.d - 2.0 * params.epsilon)
}

/// Labels a configuration's phase from positions and lights.
pub fn phase_of(points: &[Point], lights: &[Color], params: &Params) -> PhaseLabel {
    let tol = params.tol();
    let pts = distinct_points(points, tol);
    if pts.len() <= 1 {
        return PhaseLabel::Done;
    }
    let any_b = lights.iter().any(|&l| l == Color::B);
    let onlds = classify_onlds(&pts, tol);
    if let OnLds::On(seg) = &onlds {
        let l = seg.length();
        let band_wide =
            tol.in_band_half_open(l, 2.0 * params.d - params.epsilon, 2.0 * params.d);
        let band_narrow =
            tol.in_band_half_open(l, params.d - params.epsilon / 2.0, params.d);
        let equal_halves_band = pts.len() == 3 && band_wide && {
            let mut ts: Vec<f64> = pts.iter().map(|&p| dist(seg.a, p)).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            tol.eq(ts[1] - ts[0], ts[2] - ts[1])
        };
        if any_b || (pts.len() == 2 && (band_wide || band_narrow)) || equal_halves_band {
            return PhaseLabel::GatherBand;
        }
        if tol.ge(l, 2.0 * params.d)
            || config_is_a3p(&pts, params)
            || config_is_a4p(&pts, params)
        {
            return PhaseLabel::Adjust;
        }
        return PhaseLabel::ElectExpand;
    }
    if any_b {
        // Off-segment configurations with B lights only arise outside the
        // program's reachable set; label them by the lights.
        return PhaseLabel::GatherBand;
    }
    if crate::geometry::diameter(&pts) >= 4.0 * params.d {
        PhaseLabel::ElectEpd
    } else {
        PhaseLabel::ElectExpand
    }
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::ElectExpand => "ElectExpand",
            PhaseLabel::ElectEpd => "ElectEPD",
            PhaseLabel::Adjust => "Adjust",
            PhaseLabel::GatherBand => "GatherBand",
            PhaseLabel::Done => "Done",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Snapshot, SnapshotPoint};
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params() -> Params {
        Params::new(1.0, 0.5, 4.1, 1e-9).unwrap()
    }

    /// Snapshot of bare points with the observer at the origin (the origin
    /// must be among the points), FSTATE-style: no visible lights.
    fn snap(points: &[Point], own: Color) -> Snapshot {
        assert!(
            points
                .iter()
                .any(|p| dist(*p, Point::new(0.0, 0.0)) <= 1e-12),
            "observer must sit on one of the points"
        );
        Snapshot {
            points: points
                .iter()
                .map(|&pos| SnapshotPoint {
                    pos,
                    lights: vec![],
                })
                .collect(),
            own_light: Some(own),
            own_point_occupied_by_others: Some(false),
        }
    }

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn a3p_examples() {
        let p = params();
        assert!(a3p(&snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (2.0, 0.0)]), Color::A), &p));
        assert!(!a3p(&snap(&pts(&[(0.0, 0.0), (0.3, 0.0), (2.0, 0.0)]), Color::A), &p));
        // Far gap 1.35 < 2d - eps = 1.5.
        assert!(!a3p(&snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (1.6, 0.0)]), Color::A), &p));
    }

    #[test]
    fn a4p_examples() {
        let p = params();
        assert!(a4p(
            &snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (1.9, 0.0), (2.15, 0.0)]), Color::A),
            &p
        ));
        // Inner gap 0.75 < 2d - 2eps = 1.0.
        assert!(!a4p(
            &snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (1.0, 0.0), (1.25, 0.0)]), Color::A),
            &p
        ));
        assert!(!a4p(&snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (2.0, 0.0)]), Color::A), &p));
    }

    #[test]
    fn elect_moves_4d_outward_from_center() {
        let p = params();
        // Observer at origin; center of the enclosing circle at (-1, 0),
        // diameter 2 < 4d. Off-segment third point keeps it out of the
        // adjustment guard.
        let s = snap(&pts(&[(0.0, 0.0), (-2.0, 0.0), (-1.0, 0.5)]), Color::A);
        let d = elect_lds(&s, &p);
        assert_abs_diff_eq!(d.destination.x, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.destination.y, 0.0, epsilon = 1e-9);
        assert_eq!(d.new_light, Color::A);
    }

    #[test]
    fn elect_center_robot_stays() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (-1.0, 0.0), (1.0, 0.0)]), Color::A);
        // Observer is exactly the SEC center of {(-1,0),(1,0),(0,0)}.
        let d = elect_lds(&s, &p);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn elect_delegates_to_line_formation_at_4d() {
        let p = params();
        // Diameter 4.2 >= 4d; observer off the longest segment projects onto
        // its line.
        let s = snap(&pts(&[(0.0, 0.0), (-1.0, -1.0), (3.2, -1.0)]), Color::A);
        let d = elect_lds(&s, &p);
        assert_abs_diff_eq!(d.destination.y, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.destination.x, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn line_formation_is_noop_when_already_on_segment() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (-2.0, 0.0), (2.5, 0.0)]), Color::A);
        let d = elect_lds_preserving_distance(&s, &p);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn adjustment_endpoint_steps_inward() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (3.0, 0.0)]), Color::A);
        let d = adjustment_lds(&s, &p);
        assert_abs_diff_eq!(d.destination.x, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(d.destination.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn adjustment_interior_walks_to_nearest_endpoint() {
        let p = params();
        // Observer at (1.2, 0) inside a 3-point segment: translate so the
        // observer is the origin.
        let s = snap(&pts(&[(-1.2, 0.0), (0.0, 0.0), (1.8, 0.0)]), Color::A);
        let d = adjustment_lds(&s, &p);
        assert_eq!(d.destination, Point::new(-1.2, 0.0));
    }

    #[test]
    fn adjustment_interior_holds_in_a3p() {
        let p = params();
        // Observer is the interior robot of an A3P pattern.
        let s = snap(&pts(&[(-0.25, 0.0), (0.0, 0.0), (1.75, 0.0)]), Color::A);
        assert!(a3p(&s, &p));
        let d = adjustment_lds(&s, &p);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn adjustment_far_endpoint_holds_in_a3p() {
        let p = params();
        // Observer at the far endpoint: its nearest-gap is not eps/2, so the
        // observer-relative pattern test is false and it walks to itself.
        let s = snap(&pts(&[(0.0, 0.0), (-1.75, 0.0), (-2.0, 0.0)]), Color::A);
        assert!(!a3p(&s, &p));
        let d = adjustment_lds(&s, &p);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn a4p_both_endpoints_move_inward() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (0.25, 0.0), (1.9, 0.0), (2.15, 0.0)]), Color::A);
        let d = adjustment_lds(&s, &p);
        assert_abs_diff_eq!(d.destination.x, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn gather_wide_band_meets_at_midpoint() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (1.8, 0.0)]), Color::A);
        let d = gather(&s, Color::A, &p);
        assert_eq!(d.new_light, Color::B);
        assert_abs_diff_eq!(d.destination.x, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn gather_narrow_band_joins_far_point() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (0.8, 0.0)]), Color::A);
        let d = gather(&s, Color::A, &p);
        assert_eq!(d.new_light, Color::B);
        assert_eq!(d.destination, Point::new(0.8, 0.0));
    }

    #[test]
    fn gather_b_robot_stays() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (1.8, 0.0)]), Color::B);
        let d = gather(&s, Color::B, &p);
        assert_eq!(d.new_light, Color::B);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn dispatch_band_beats_election() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (1.8, 0.0)]), Color::A);
        let d = gathering_fstate_program(&s, Color::A, &p);
        // Gather branch, not the 4d outward move.
        assert_eq!(d.new_light, Color::B);
        assert_abs_diff_eq!(d.destination.x, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn dispatch_scattered_elects_outward() {
        let p = params();
        let s = snap(
            &pts(&[(0.0, 0.0), (1.0, 0.4), (0.3, 1.0), (-0.9, 0.2), (0.2, -1.1)]),
            Color::A,
        );
        let d = gathering_fstate_program(&s, Color::A, &p);
        // An expansion move: strictly farther from the center than 4d - diam.
        assert!(dist(d.destination, Point::new(0.0, 0.0)) > 3.0);
        assert_eq!(d.new_light, Color::A);
    }

    #[test]
    fn dispatch_wide_segment_adjusts() {
        let p = params();
        // Interior observer of a collinear 4-point set with length 3 >= 2d:
        // adjustment sends it to the nearest endpoint; endpoint robots hold
        // until only two points remain.
        let s = snap(&pts(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), Color::A);
        let d = gathering_fstate_program(&s, Color::A, &p);
        assert_eq!(d.destination, Point::new(-1.0, 0.0));
        assert_eq!(d.new_light, Color::A);

        let endpoint = snap(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]), Color::A);
        let d = gathering_fstate_program(&endpoint, Color::A, &p);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn dispatch_equal_halves_band_interior_walks_out() {
        let p = params();
        // Observer is the middle robot of an equal-halves band pattern with
        // light A (only reachable from a forbidden start): it must walk to an
        // endpoint, not turn B in place, or the pattern would gather.
        let s = snap(&pts(&[(-0.875, 0.0), (0.0, 0.0), (0.875, 0.0)]), Color::A);
        let d = gathering_fstate_program(&s, Color::A, &p);
        assert_eq!(d.new_light, Color::A);
        assert!(
            dist(d.destination, Point::new(-0.875, 0.0)) <= 1e-9
                || dist(d.destination, Point::new(0.875, 0.0)) <= 1e-9,
            "interior robot must head for an endpoint, got {:?}",
            d.destination
        );
    }

    #[test]
    fn dispatch_equal_halves_band_endpoint_gathers() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0), (0.875, 0.0), (1.75, 0.0)]), Color::A);
        let d = gathering_fstate_program(&s, Color::A, &p);
        assert_eq!(d.new_light, Color::B);
        assert_abs_diff_eq!(d.destination.x, 0.875, epsilon = 1e-9);
    }

    #[test]
    fn gathered_point_is_absorbing() {
        let p = params();
        let s = snap(&pts(&[(0.0, 0.0)]), Color::B);
        let d = gathering_fstate_program(&s, Color::B, &p);
        assert_eq!(d.new_light, Color::B);
        assert_eq!(d.destination, Point::new(0.0, 0.0));
    }

    #[test]
    fn phase_labels() {
        let p = params();
        let a = [Color::A];
        assert_eq!(
            phase_of(&pts(&[(0.0, 0.0), (0.5, 0.5)]), &[Color::A, Color::A], &p),
            PhaseLabel::ElectExpand
        );
        assert_eq!(
            phase_of(
                &pts(&[(0.0, 0.0), (5.0, 0.0), (2.0, 1.0)]),
                &[Color::A; 3],
                &p
            ),
            PhaseLabel::ElectEpd
        );
        assert_eq!(
            phase_of(&pts(&[(0.0, 0.0), (3.0, 0.0)]), &[Color::A; 2], &p),
            PhaseLabel::Adjust
        );
        assert_eq!(
            phase_of(&pts(&[(0.0, 0.0), (1.8, 0.0)]), &[Color::A; 2], &p),
            PhaseLabel::GatherBand
        );
        assert_eq!(phase_of(&pts(&[(1.0, 1.0)]), &a, &p), PhaseLabel::Done);
    }

    fn rotate(p: Point, angle: f64) -> Point {
        let (s, c) = crate::math::sin_cos(angle);
        Point::new(p.x * c - p.y * s, p.x * s + p.y * c)
    }

    proptest! {
        /// Decisions are equivariant under rotating the whole snapshot.
        #[test]
        fn prop_rotation_equivariance(
            coords in proptest::collection::vec((-8.0..8.0f64, -8.0..8.0f64), 1..7),
            angle in 0.0..core::f64::consts::TAU,
        ) {
            let p = params();
            let mut points = pts(
                &coords
                    .iter()
                    .map(|&(x, y)| (x, y))
                    .collect::<Vec<_>>(),
            );
            points.insert(0, Point::new(0.0, 0.0));
            let s0 = snap(&points, Color::A);
            let rotated: Vec<Point> = points.iter().map(|&q| rotate(q, angle)).collect();
            let s1 = snap(&rotated, Color::A);
            let d0 = gathering_fstate_program(&s0, Color::A, &p);
            let d1 = gathering_fstate_program(&s1, Color::A, &p);
            prop_assert_eq!(d0.new_light, d1.new_light);
            let d0_rotated = rotate(d0.destination, angle);
            prop_assert!(
                dist(d0_rotated, d1.destination) <= 1e-6,
                "rotated decision {:?} vs {:?}",
                d0_rotated,
                d1.destination
            );
        }

        /// Lights only ever go A -> A, A -> B, or B -> B.
        #[test]
        fn prop_color_monotone(
            coords in proptest::collection::vec((-8.0..8.0f64, -8.0..8.0f64), 1..7),
            own_is_b in proptest::bool::ANY,
        ) {
            let p = params();
            let mut points = pts(&coords);
            points.insert(0, Point::new(0.0, 0.0));
            let own = if own_is_b { Color::B } else { Color::A };
            let s = snap(&points, own);
            let d = gathering_fstate_program(&s, own, &p);
            if own == Color::B {
                prop_assert_eq!(d.new_light, Color::B);
            }
        }
    }
}
