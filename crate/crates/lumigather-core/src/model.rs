//! Robots, lights, local frames, configurations, and snapshot construction
//! under the four light-visibility models and the three view semantics.
//!
//! Robot ids exist for scheduling, traces, and fairness bookkeeping only;
//! robot programs never see them. A snapshot is everything a program may use:
//! perceived points in the observer's frame (observer at the origin), color
//! views filtered by the light model, optionally the robot's own light, and
//! the local-awareness bit.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    dist, dist_to_segment, distinct_points, longest_distance_segments, midpoint, Point, Segment,
    Tolerance,
};
use crate::math;
use crate::rng::{mix_stream, SimRng};

/// A light color from a finite palette. `A` and `B` are the canonical palette
/// of the gathering program; the adversary module uses larger palettes, shown
/// as `C2`, `C3`, ...
#[derive(
    Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(try_from = "String", into = "String")]
pub struct Color(pub u8);

impl Color {
    pub const A: Color = Color(0);
    pub const B: Color = Color(1);

    pub fn name(&self) -> String {
        match self.0 {
            0 => String::from("A"),
            1 => String::from("B"),
            n => {
                let mut s = String::from("C");
                s.push_str(itoa(n).as_str());
                s
            }
        }
    }
}

fn itoa(n: u8) -> String {
    let mut s = String::new();
    let mut n = n as u16;
    if n == 0 {
        s.push('0');
        return s;
    }
    let mut digits = [0u8; 3];
    let mut i = 0;
    while n > 0 {
        digits[i] = (n % 10) as u8;
        n /= 10;
        i += 1;
    }
    while i > 0 {
        i -= 1;
        s.push((b'0' + digits[i]) as char);
    }
    s
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl From<Color> for String {
    fn from(c: Color) -> String {
        c.name()
    }
}

impl TryFrom<String> for Color {
    type Error = ModelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "A" => Ok(Color::A),
            "B" => Ok(Color::B),
            other => {
                if let Some(rest) = other.strip_prefix('C') {
                    if let Ok(n) = rest.parse::<u8>() {
                        if n >= 2 {
                            return Ok(Color(n));
                        }
                    }
                }
                Err(ModelError::BadColor(String::from(other)))
            }
        }
    }
}

/// Which lights a robot can see during Look.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LightModel {
    /// No lights at all.
    #[serde(rename = "OBLOT")]
    Oblot,
    /// Own light only (persistent internal state).
    #[serde(rename = "FSTATE")]
    Fstate,
    /// Other robots' lights only (communication).
    #[serde(rename = "FCOMM")]
    Fcomm,
    /// Both.
    #[serde(rename = "LUMI")]
    Lumi,
}

/// How co-located robots' colors are aggregated per perceived point.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewKind {
    Set,
    Multiset,
    /// One color per point, chosen by a seeded draw so runs stay replayable.
    Arbitrary,
}

/// A robot's fixed local coordinate system ("fixed disorientation"): the
/// rotation, unit scale, and handedness never change across rounds, and the
/// robot always sits at its own origin.
///
/// Local coordinates are `scale * R(rotation) * M * (p - origin)` where `M`
/// mirrors the y axis when `reflected` is set.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub rotation: f64,
    pub scale: f64,
    pub reflected: bool,
}

impl Default for Frame {
    fn default() -> Self {
        Self {
            rotation: 0.0,
            scale: 1.0,
            reflected: false,
        }
    }
}

impl Frame {
    pub fn new(rotation: f64, scale: f64, reflected: bool) -> Self {
        Self {
            rotation,
            scale,
            reflected,
        }
    }

    pub fn to_local(&self, origin: Point, p: Point) -> Point {
        let mut vx = p.x - origin.x;
        let mut vy = p.y - origin.y;
        if self.reflected {
            vy = -vy;
        }
        let (s, c) = math::sin_cos(self.rotation);
        let rx = vx * c - vy * s;
        let ry = vx * s + vy * c;
        vx = rx * self.scale;
        vy = ry * self.scale;
        Point::new(vx, vy)
    }

    pub fn to_global(&self, origin: Point, local: Point) -> Point {
        let vx = local.x / self.scale;
        let vy = local.y / self.scale;
        let (s, c) = math::sin_cos(-self.rotation);
        let rx = vx * c - vy * s;
        let mut ry = vx * s + vy * c;
        if self.reflected {
            ry = -ry;
        }
        Point::new(rx + origin.x, ry + origin.y)
    }
}

/// One robot as the simulator tracks it. The id is simulator-internal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub id: usize,
    pub position: Point,
    pub light: Color,
    pub frame: Frame,
}

/// The global state at a round: a multiset of (light, position) pairs, kept
/// here as the full robot list for scheduling and traces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub robots: Vec<RobotState>,
    pub round: u64,
}

impl Configuration {
    pub fn new(robots: Vec<RobotState>) -> Self {
        Self { robots, round: 0 }
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.robots.iter().map(|r| r.position).collect()
    }

    /// Distinct occupied points (first occurrence wins).
    pub fn occupied_points(&self, tol: Tolerance) -> Vec<Point> {
        distinct_points(&self.positions(), tol)
    }

    /// Sorted, deduplicated colors present at `p` (within tolerance).
    pub fn colors_at(&self, p: Point, tol: Tolerance) -> Vec<Color> {
        let mut set: BTreeSet<Color> = BTreeSet::new();
        for r in &self.robots {
            if tol.coincident(r.position, p) {
                set.insert(r.light);
            }
        }
        set.into_iter().collect()
    }
}

/// The agreed algorithm parameters: d < delta/4 and epsilon < d, with the
/// geometric tolerance kept well below epsilon.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub d: f64,
    pub epsilon: f64,
    pub delta: f64,
    #[serde(default = "default_eps_geom")]
    pub eps_geom: f64,
}

fn default_eps_geom() -> f64 {
    1e-9
}

impl Params {
    pub fn new(d: f64, epsilon: f64, delta: f64, eps_geom: f64) -> Result<Self, ModelError> {
        if !(d.is_finite() && epsilon.is_finite() && delta.is_finite() && eps_geom.is_finite()) {
            return Err(ModelError::BadParams(String::from("non-finite parameter")));
        }
        if d <= 0.0 || epsilon <= 0.0 || delta <= 0.0 {
            return Err(ModelError::BadParams(String::from(
                "d, epsilon, delta must be positive",
            )));
        }
        if !(d < delta / 4.0) {
            return Err(ModelError::BadParams(String::from("requires d < delta/4")));
        }
        if !(epsilon < d) {
            return Err(ModelError::BadParams(String::from("requires epsilon < d")));
        }
        if !(eps_geom > 0.0 && eps_geom < epsilon) {
            return Err(ModelError::BadParams(String::from(
                "requires 0 < eps_geom < epsilon",
            )));
        }
        Ok(Self {
            d,
            epsilon,
            delta,
            eps_geom,
        })
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        Params::new(self.d, self.epsilon, self.delta, self.eps_geom).map(|_| ())
    }

    pub fn tol(&self) -> Tolerance {
        Tolerance::new(self.eps_geom)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown color {0:?}")]
    BadColor(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("observer id {0} is not part of the configuration")]
    ObserverNotInConfiguration(usize),
}

/// One perceived point in a snapshot with its (possibly empty) color view.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotPoint {
    pub pos: Point,
    pub lights: Vec<Color>,
}

/// What one robot perceives during Look, already transformed into its own
/// frame. The observer's own point is always present at the exact origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub points: Vec<SnapshotPoint>,
    pub own_light: Option<Color>,
    /// Present iff the system is local-aware.
    pub own_point_occupied_by_others: Option<bool>,
}

impl Snapshot {
    pub fn positions(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.pos).collect()
    }
}

/// Builds the snapshot of `observer_id` against `config`.
///
/// Positions are translated so the observer is at the origin, then rotated,
/// scaled, and reflected per its frame. Colors are filtered by the light
/// model (FSTATE exposes only the own light, FCOMM only the others', LUMI
/// both, OBLOT neither) and collapsed per the view semantics. Robots
/// co-located with a local-unaware observer are invisible to it.
///
/// `view_seed` feeds the arbitrary-view choice; it is ignored for set and
/// multiset views. Keying it by round and observer position keeps replays and
/// co-located groups deterministic.
pub fn take_snapshot(
    config: &Configuration,
    observer_id: usize,
    light_model: LightModel,
    view: ViewKind,
    local_aware: bool,
    tol: Tolerance,
    view_seed: u64,
) -> Result<Snapshot, ModelError> {
    let observer = config
        .robots
        .iter()
        .find(|r| r.id == observer_id)
        .ok_or(ModelError::ObserverNotInConfiguration(observer_id))?;

    let others_see_lights = matches!(light_model, LightModel::Fcomm | LightModel::Lumi);
    let own_light = match light_model {
        LightModel::Fstate | LightModel::Lumi => Some(observer.light),
        LightModel::Fcomm | LightModel::Oblot => None,
    };

    // Group robots by occupied point in the global frame.
    let occupied = config.occupied_points(tol);
    let mut points: Vec<SnapshotPoint> = Vec::with_capacity(occupied.len());
    let mut own_occupied_by_others = false;
    for gp in occupied {
        let at_own_point = tol.coincident(gp, observer.position);
        let mut colors: Vec<Color> = Vec::new();
        for r in &config.robots {
            if r.id == observer.id || !tol.coincident(r.position, gp) {
                continue;
            }
            if at_own_point {
                own_occupied_by_others = true;
                if !local_aware {
                    continue; // co-located robots are invisible without local awareness
                }
            }
            if others_see_lights {
                colors.push(r.light);
            }
        }
        colors.sort_unstable();
        let view_colors = match view {
            ViewKind::Multiset => colors,
            ViewKind::Set => {
                colors.dedup();
                colors
            }
            ViewKind::Arbitrary => {
                if colors.is_empty() {
                    colors
                } else {
                    let key = mix_stream(
                        view_seed,
                        &[gp.x.to_bits(), gp.y.to_bits(), colors.len() as u64],
                    );
                    let mut rng = SimRng::new(key);
                    let pick = colors[rng.usize_below(colors.len())];
                    let mut v = Vec::with_capacity(1);
                    v.push(pick);
                    v
                }
            }
        };
        let local = if at_own_point {
            Point::new(0.0, 0.0)
        } else {
            observer.frame.to_local(observer.position, gp)
        };
        points.push(SnapshotPoint {
            pos: local,
            lights: view_colors,
        });
    }
    // Deterministic per-observer ordering.
    points.sort_by(|a, b| {
        (a.pos.x, a.pos.y)
            .partial_cmp(&(b.pos.x, b.pos.y))
            .expect("snapshot coordinates are finite")
    });

    Ok(Snapshot {
        points,
        own_light,
        own_point_occupied_by_others: local_aware.then_some(own_occupied_by_others),
    })
}

/// True iff all robots are pairwise within the tolerance.
pub fn is_gathered(config: &Configuration, tol: Tolerance) -> bool {
    let pos = config.positions();
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            if dist(pos[i], pos[j]) > tol.eps_geom {
                return false;
            }
        }
    }
    true
}

/// Shape of a color configuration along the unique LDS.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ColorConfigDescriptor {
    /// All robots sit on the two LDS endpoints; carries the color set at each
    /// endpoint in lexicographic endpoint order.
    TwoPoint {
        endpoints: Segment,
        a: Vec<Color>,
        b: Vec<Color>,
    },
    /// Endpoints plus exactly the LDS midpoint occupied; `mid` holds one
    /// color, or the mixed pair.
    ThreePointMid {
        endpoints: Segment,
        a: Vec<Color>,
        mid: Vec<Color>,
        b: Vec<Color>,
    },
    /// Anything else (non-unique LDS, robots at other interior points, or a
    /// single occupied point).
    Other,
}

/// Classifies a configuration against the two-point / three-point-midpoint
/// color patterns. Endpoint order is canonicalized lexicographically by
/// (x, y); the midpoint test uses the geometric tolerance.
pub fn classify_color_configuration(
    config: &Configuration,
    tol: Tolerance,
) -> ColorConfigDescriptor {
    let occupied = config.occupied_points(tol);
    if occupied.len() < 2 {
        return ColorConfigDescriptor::Other;
    }
    let lds = longest_distance_segments(&occupied, tol);
    if lds.segments.len() != 1 {
        return ColorConfigDescriptor::Other;
    }
    let seg = lds.segments[0];
    let mut interior: Vec<Point> = Vec::new();
    for &p in &occupied {
        if tol.coincident(p, seg.a) || tol.coincident(p, seg.b) {
            continue;
        }
        interior.push(p);
    }
    let a = config.colors_at(seg.a, tol);
    let b = config.colors_at(seg.b, tol);
    match interior.len() {
        0 => ColorConfigDescriptor::TwoPoint {
            endpoints: seg,
            a,
            b,
        },
        1 => {
            let m = interior[0];
            if tol.coincident(m, midpoint(seg.a, seg.b)) {
                ColorConfigDescriptor::ThreePointMid {
                    endpoints: seg,
                    a,
                    mid: config.colors_at(m, tol),
                    b,
                }
            } else {
                ColorConfigDescriptor::Other
            }
        }
        _ => ColorConfigDescriptor::Other,
    }
}

/// The two initial patterns the gathering program cannot start from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProhibitedPattern {
    No,
    /// Two occupied points a, b with d - eps/2 <= |ab| < d.
    Pattern1,
    /// Three collinear occupied points a, b, c with 2d - eps <= |ac| < 2d and
    /// |ab| = |bc|.
    Pattern2,
}

pub fn is_prohibited_initial(config: &Configuration, params: &Params) -> ProhibitedPattern {
    let tol = params.tol();
    let occupied = config.occupied_points(tol);
    match occupied.len() {
        2 => {
            let l = dist(occupied[0], occupied[1]);
            if tol.in_band_half_open(l, params.d - params.epsilon / 2.0, params.d) {
                ProhibitedPattern::Pattern1
            } else {
                ProhibitedPattern::No
            }
        }
        3 => {
            // Label so that (a, c) is the farthest pair and b the third point.
            let mut best = (0usize, 1usize);
            let mut best_d = 0.0f64;
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let d = dist(occupied[i], occupied[j]);
                    if d > best_d {
                        best_d = d;
                        best = (i, j);
                    }
                }
            }
            let (ai, ci) = best;
            let bi = 3 - ai - ci;
            let (a, b, c) = (occupied[ai], occupied[bi], occupied[ci]);
            let seg = Segment::new(a, c);
            let collinear = dist_to_segment(b, &seg) <= tol.eps_geom;
            let equal_halves = tol.eq(dist(a, b), dist(b, c));
            let in_band = tol.in_band_half_open(
                best_d,
                2.0 * params.d - params.epsilon,
                2.0 * params.d,
            );
            if collinear && equal_halves && in_band {
                ProhibitedPattern::Pattern2
            } else {
                ProhibitedPattern::No
            }
        }
        _ => ProhibitedPattern::No,
    }
}

/// Convenience for building configurations in tests and generators.
pub fn configuration_from(specs: &[(Color, Point)]) -> Configuration {
    Configuration::new(
        specs
            .iter()
            .enumerate()
            .map(|(id, &(light, position))| RobotState {
                id,
                position,
                light,
                frame: Frame::default(),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn params() -> Params {
        Params::new(1.0, 0.5, 4.1, 1e-9).unwrap()
    }

    #[test]
    fn params_invariants_enforced() {
        assert!(Params::new(1.0, 0.5, 4.1, 1e-9).is_ok());
        // epsilon >= d
        assert!(Params::new(1.0, 1.0, 4.1, 1e-9).is_err());
        // d >= delta/4
        assert!(Params::new(1.0, 0.5, 4.0, 1e-9).is_err());
        assert!(Params::new(1.0, 0.5, 4.1, 0.0).is_err());
    }

    #[test]
    fn color_names_round_trip() {
        for c in [Color::A, Color::B, Color(2), Color(17)] {
            let name = c.name();
            let back = Color::try_from(name).unwrap();
            assert_eq!(back, c);
        }
        assert!(Color::try_from(String::from("Z")).is_err());
    }

    #[test]
    fn fstate_snapshot_hides_all_other_lights() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(1.0, 0.0)),
            (Color::B, Point::new(0.0, 2.0)),
        ]);
        let snap = take_snapshot(
            &config,
            0,
            LightModel::Fstate,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        assert!(snap.points.iter().all(|p| p.lights.is_empty()));
        assert_eq!(snap.own_light, Some(Color::A));
        assert_eq!(snap.own_point_occupied_by_others, Some(false));

        // Bitwise independence from other robots' lights.
        let mut recolored = config.clone();
        for r in recolored.robots.iter_mut().skip(1) {
            r.light = Color::A;
        }
        let snap2 = take_snapshot(
            &recolored,
            0,
            LightModel::Fstate,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        assert_eq!(snap, snap2);
    }

    #[test]
    fn lumi_snapshot_example() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(1.0, 0.0)),
        ]);
        let snap = take_snapshot(
            &config,
            0,
            LightModel::Lumi,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        assert_eq!(snap.points.len(), 2);
        assert_eq!(snap.points[0].pos, Point::new(0.0, 0.0));
        assert!(snap.points[0].lights.is_empty());
        assert_eq!(snap.points[1].pos, Point::new(1.0, 0.0));
        assert_eq!(snap.points[1].lights, vec![Color::B]);
        assert_eq!(snap.own_light, Some(Color::A));
    }

    #[test]
    fn rotated_frame_flips_perceived_position() {
        let mut config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
        ]);
        config.robots[0].frame = Frame::new(core::f64::consts::PI, 1.0, false);
        let snap = take_snapshot(
            &config,
            0,
            LightModel::Fstate,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        let other = snap
            .points
            .iter()
            .find(|p| !tol().coincident(p.pos, Point::new(0.0, 0.0)))
            .unwrap();
        assert_abs_diff_eq!(other.pos.x, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(other.pos.y, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn fcomm_snapshot_is_independent_of_own_light() {
        let mut config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(1.0, 0.0)),
        ]);
        let snap_a = take_snapshot(
            &config,
            0,
            LightModel::Fcomm,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        config.robots[0].light = Color::B;
        let snap_b = take_snapshot(
            &config,
            0,
            LightModel::Fcomm,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        assert_eq!(snap_a, snap_b);
        assert_eq!(snap_a.own_light, None);
    }

    #[test]
    fn local_awareness_controls_colocated_visibility() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(0.0, 0.0)),
            (Color::B, Point::new(2.0, 0.0)),
        ]);
        let aware = take_snapshot(
            &config,
            0,
            LightModel::Fcomm,
            ViewKind::Set,
            true,
            tol(),
            0,
        )
        .unwrap();
        assert_eq!(aware.own_point_occupied_by_others, Some(true));
        let origin = aware
            .points
            .iter()
            .find(|p| tol().coincident(p.pos, Point::new(0.0, 0.0)))
            .unwrap();
        assert_eq!(origin.lights, vec![Color::B]);

        let unaware = take_snapshot(
            &config,
            0,
            LightModel::Fcomm,
            ViewKind::Set,
            false,
            tol(),
            0,
        )
        .unwrap();
        assert_eq!(unaware.own_point_occupied_by_others, None);
        let origin = unaware
            .points
            .iter()
            .find(|p| tol().coincident(p.pos, Point::new(0.0, 0.0)))
            .unwrap();
        assert!(origin.lights.is_empty());
    }

    #[test]
    fn arbitrary_view_is_seed_stable() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
            (Color::B, Point::new(1.0, 0.0)),
        ]);
        let one = take_snapshot(
            &config,
            0,
            LightModel::Lumi,
            ViewKind::Arbitrary,
            true,
            tol(),
            77,
        )
        .unwrap();
        let two = take_snapshot(
            &config,
            0,
            LightModel::Lumi,
            ViewKind::Arbitrary,
            true,
            tol(),
            77,
        )
        .unwrap();
        assert_eq!(one, two);
        let other = one
            .points
            .iter()
            .find(|p| !tol().coincident(p.pos, Point::new(0.0, 0.0)))
            .unwrap();
        assert_eq!(other.lights.len(), 1);
    }

    #[test]
    fn observer_must_be_in_configuration() {
        let config = configuration_from(&[(Color::A, Point::new(0.0, 0.0))]);
        assert_eq!(
            take_snapshot(&config, 9, LightModel::Fstate, ViewKind::Set, true, tol(), 0),
            Err(ModelError::ObserverNotInConfiguration(9))
        );
    }

    #[test]
    fn classify_two_point() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(1.0, 0.0)),
        ]);
        match classify_color_configuration(&config, tol()) {
            ColorConfigDescriptor::TwoPoint { a, b, .. } => {
                assert_eq!(a, vec![Color::A]);
                assert_eq!(b, vec![Color::B]);
            }
            other => panic!("expected TwoPoint, got {other:?}"),
        }
    }

    #[test]
    fn classify_three_point_mid() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(0.5, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
        ]);
        match classify_color_configuration(&config, tol()) {
            ColorConfigDescriptor::ThreePointMid { a, mid, b, .. } => {
                assert_eq!(a, vec![Color::A]);
                assert_eq!(mid, vec![Color::B]);
                assert_eq!(b, vec![Color::A]);
            }
            other => panic!("expected ThreePointMid, got {other:?}"),
        }
    }

    #[test]
    fn classify_mixed_midpoint() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(0.5, 0.0)),
            (Color::B, Point::new(0.5, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
        ]);
        match classify_color_configuration(&config, tol()) {
            ColorConfigDescriptor::ThreePointMid { mid, .. } => {
                assert_eq!(mid, vec![Color::A, Color::B]);
            }
            other => panic!("expected mixed ThreePointMid, got {other:?}"),
        }
    }

    #[test]
    fn classify_off_middle_is_other() {
        let config = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::B, Point::new(0.7, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
        ]);
        assert_eq!(
            classify_color_configuration(&config, tol()),
            ColorConfigDescriptor::Other
        );
    }

    #[test]
    fn gathered_checks() {
        let there = Point::new(2.0, 3.0);
        let config = configuration_from(&[(Color::A, there), (Color::B, there), (Color::B, there)]);
        assert!(is_gathered(&config, tol()));
        let apart = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(1.0, 0.0)),
        ]);
        assert!(!is_gathered(&apart, tol()));
        let nearly = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(tol().eps_geom / 2.0, 0.0)),
        ]);
        assert!(is_gathered(&nearly, tol()));
    }

    #[test]
    fn prohibited_patterns() {
        let p = params();
        let p1 = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(0.8, 0.0)),
        ]);
        assert_eq!(is_prohibited_initial(&p1, &p), ProhibitedPattern::Pattern1);

        let p2 = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(0.9, 0.0)),
            (Color::A, Point::new(1.8, 0.0)),
        ]);
        assert_eq!(is_prohibited_initial(&p2, &p), ProhibitedPattern::Pattern2);

        let fine = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(0.5, 0.0)),
        ]);
        assert_eq!(is_prohibited_initial(&fine, &p), ProhibitedPattern::No);

        // Unequal halves in the band are not pattern 2.
        let uneven = configuration_from(&[
            (Color::A, Point::new(0.0, 0.0)),
            (Color::A, Point::new(0.6, 0.0)),
            (Color::A, Point::new(1.8, 0.0)),
        ]);
        assert_eq!(is_prohibited_initial(&uneven, &p), ProhibitedPattern::No);
    }

    proptest! {
        #[test]
        fn prop_frame_round_trip(
            ox in -10.0..10.0f64, oy in -10.0..10.0f64,
            px in -10.0..10.0f64, py in -10.0..10.0f64,
            rotation in 0.0..core::f64::consts::TAU,
            scale in 0.1..10.0f64,
            reflected in proptest::bool::ANY,
        ) {
            let frame = Frame::new(rotation, scale, reflected);
            let origin = Point::new(ox, oy);
            let p = Point::new(px, py);
            let back = frame.to_global(origin, frame.to_local(origin, p));
            prop_assert!(dist(back, p) <= 1e-9);
        }

        #[test]
        fn prop_set_view_idempotent_under_duplication(
            positions in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 2..6),
            dup_index in 1usize..6,
        ) {
            prop_assume!(dup_index < positions.len());
            let mut specs: Vec<(Color, Point)> = positions
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| {
                    (if i % 2 == 0 { Color::A } else { Color::B }, Point::new(x, y))
                })
                .collect();
            let base = configuration_from(&specs);
            let snap = take_snapshot(&base, 0, LightModel::Lumi, ViewKind::Set, true, tol(), 0).unwrap();
            // Duplicate a non-observer robot in place.
            specs.push(specs[dup_index]);
            let duped = configuration_from(&specs);
            let snap2 = take_snapshot(&duped, 0, LightModel::Lumi, ViewKind::Set, true, tol(), 0).unwrap();
            if !tol().coincident(specs[dup_index].1, specs[0].1) {
                prop_assert_eq!(snap, snap2);
            } else {
                prop_assert_eq!(snap.points, snap2.points);
            }
        }

        #[test]
        fn prop_classification_rigid_motion_invariant(
            shift_x in -5.0..5.0f64, shift_y in -5.0..5.0f64,
            angle in 0.0..core::f64::consts::TAU,
        ) {
            let config = configuration_from(&[
                (Color::A, Point::new(0.0, 0.0)),
                (Color::B, Point::new(0.5, 0.0)),
                (Color::A, Point::new(1.0, 0.0)),
            ]);
            let (s, c) = crate::math::sin_cos(angle);
            let moved = Configuration::new(
                config
                    .robots
                    .iter()
                    .map(|r| {
                        let p = r.position;
                        RobotState {
                            position: Point::new(
                                p.x * c - p.y * s + shift_x,
                                p.x * s + p.y * c + shift_y,
                            ),
                            ..r.clone()
                        }
                    })
                    .collect(),
            );
            let before = classify_color_configuration(&config, tol());
            let after = classify_color_configuration(&moved, tol());
            let shape = |d: &ColorConfigDescriptor| match d {
                ColorConfigDescriptor::TwoPoint { a, b, .. } => (0, a.clone(), b.clone()),
                ColorConfigDescriptor::ThreePointMid { a, b, .. } => (1, a.clone(), b.clone()),
                ColorConfigDescriptor::Other => (2, vec![], vec![]),
            };
            // Endpoint canonical order may swap under rotation; compare as sets.
            let (s0, mut a0, mut b0) = shape(&before);
            let (s1, mut a1, mut b1) = shape(&after);
            prop_assert_eq!(s0, s1);
            if a0 > b0 { core::mem::swap(&mut a0, &mut b0); }
            if a1 > b1 { core::mem::swap(&mut a1, &mut b1); }
            prop_assert_eq!((a0, b0), (a1, b1));
        }
    }
}
