//! Planar primitives: distances, smallest enclosing circle, longest distance
//! segments, on-segment classification, and offset points along a direction.
//!
//! All equality-like predicates go through an explicit [`Tolerance`]; the
//! simulator runs on floats, so "equal distance", "collinear", and "unique
//! longest segment" are all eps comparisons. The smallest enclosing circle is
//! computed by a deterministic incremental pass (no shuffle) so that a fixed
//! input order always yields the same circle, which trace replay relies on.

use alloc::vec::Vec;
use core::fmt;
use serde::{Deserialize, Serialize};

use crate::math;

/// A position in the plane. Coordinates are finite by construction everywhere
/// the simulator produces them; serialized as a `[x, y]` pair.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", try_from = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> [f64; 2] {
        [p.x, p.y]
    }
}

impl TryFrom<[f64; 2]> for Point {
    type Error = alloc::string::String;

    fn try_from(v: [f64; 2]) -> Result<Self, Self::Error> {
        let p = Point::new(v[0], v[1]);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(alloc::string::String::from("point coordinates must be finite"))
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A line segment; `a == b` (length zero) is allowed.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        dist(self.a, self.b)
    }

    /// Same unordered endpoint set within `tol`.
    pub fn same_endpoints(&self, other: &Segment, tol: Tolerance) -> bool {
        (tol.coincident(self.a, other.a) && tol.coincident(self.b, other.b))
            || (tol.coincident(self.a, other.b) && tol.coincident(self.b, other.a))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point, slack: f64) -> bool {
        dist(self.center, p) <= self.radius + slack
    }
}

/// Geometric comparison tolerance. Must be positive and far below the
/// algorithm parameter epsilon.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_geom: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps_geom: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps_geom: f64) -> Self {
        Self { eps_geom }
    }

    #[inline]
    pub fn eq(&self, a: f64, b: f64) -> bool {
        math::abs(a - b) <= self.eps_geom
    }

    #[inline]
    pub fn is_zero(&self, a: f64) -> bool {
        math::abs(a) <= self.eps_geom
    }

    /// `a >= b` with slack on the closed side.
    #[inline]
    pub fn ge(&self, a: f64, b: f64) -> bool {
        a >= b - self.eps_geom
    }

    /// `a <= b` with slack on the closed side.
    #[inline]
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.eps_geom
    }

    /// Half-open band `lo <= x < hi`: slack on the closed side only, so the
    /// band stays half-open.
    #[inline]
    pub fn in_band_half_open(&self, x: f64, lo: f64, hi: f64) -> bool {
        x >= lo - self.eps_geom && x < hi
    }

    #[inline]
    pub fn coincident(&self, p: Point, q: Point) -> bool {
        dist(p, q) <= self.eps_geom
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("operation requires a nonempty point set")]
    EmptyPointSet,
    #[error("direction undefined: the two points coincide")]
    DegenerateDirection,
}

/// Euclidean distance. Zero iff the points are exactly equal.
pub fn dist(p: Point, q: Point) -> f64 {
    math::hypot(p.x - q.x, p.y - q.y)
}

/// Componentwise average.
pub fn midpoint(p: Point, q: Point) -> Point {
    Point::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
}

/// The point at signed distance `offset` from `p` along the unit vector
/// toward `q`. Negative offsets move away from `q`.
pub fn point_along(p: Point, q: Point, offset: f64) -> Result<Point, GeometryError> {
    let d = dist(p, q);
    if d == 0.0 {
        return Err(GeometryError::DegenerateDirection);
    }
    let ux = (q.x - p.x) / d;
    let uy = (q.y - p.y) / d;
    Ok(Point::new(p.x + offset * ux, p.y + offset * uy))
}

/// Distance from `p` to the segment `s` (not the infinite line).
pub fn dist_to_segment(p: Point, s: &Segment) -> f64 {
    let vx = s.b.x - s.a.x;
    let vy = s.b.y - s.a.y;
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return dist(p, s.a);
    }
    let t = ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2;
    let t = t.clamp(0.0, 1.0);
    dist(p, Point::new(s.a.x + t * vx, s.a.y + t * vy))
}

/// Orthogonal projection of `p` onto the infinite line through `s`.
pub fn project_onto_line(p: Point, s: &Segment) -> Result<Point, GeometryError> {
    let vx = s.b.x - s.a.x;
    let vy = s.b.y - s.a.y;
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return Err(GeometryError::DegenerateDirection);
    }
    let t = ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2;
    Ok(Point::new(s.a.x + t * vx, s.a.y + t * vy))
}

/// Deduplicates a point list into cluster representatives (first occurrence
/// wins), treating points within `tol` as the same location.
pub fn distinct_points(points: &[Point], tol: Tolerance) -> Vec<Point> {
    let mut reps: Vec<Point> = Vec::new();
    for &p in points {
        if !reps.iter().any(|&r| tol.coincident(r, p)) {
            reps.push(p);
        }
    }
    reps
}

/// Smallest enclosing circle of a nonempty point set.
///
/// Deterministic incremental construction over the given input order: with
/// the same slice, the same circle comes back bit for bit. Expected cost is
/// quadratic without the usual shuffle, which is irrelevant at simulation
/// sizes and buys replayability.
pub fn smallest_enclosing_circle(points: &[Point]) -> Result<Circle, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    // Containment slack keeps the incremental pass stable when several points
    // sit exactly on the boundary.
    const SLACK: f64 = 1e-12;
    let mut c = Circle {
        center: points[0],
        radius: 0.0,
    };
    for (i, &p) in points.iter().enumerate() {
        if c.contains(p, SLACK * (1.0 + c.radius)) {
            continue;
        }
        // p is on the boundary of the circle for points[..=i].
        c = Circle {
            center: p,
            radius: 0.0,
        };
        for (j, &q) in points[..i].iter().enumerate() {
            if c.contains(q, SLACK * (1.0 + c.radius)) {
                continue;
            }
            // p and q are both on the boundary.
            c = circle_from_diameter(p, q);
            for &r in &points[..j] {
                if c.contains(r, SLACK * (1.0 + c.radius)) {
                    continue;
                }
                c = circle_from_three(p, q, r);
            }
        }
    }
    Ok(c)
}

fn circle_from_diameter(a: Point, b: Point) -> Circle {
    let center = midpoint(a, b);
    Circle {
        center,
        radius: dist(center, a).max(dist(center, b)),
    }
}

/// Circumcircle through three points with two fixed boundary points `a`, `b`;
/// degenerate (collinear) input falls back to the widest diameter circle.
fn circle_from_three(a: Point, b: Point, c: Point) -> Circle {
    // Translate toward the midpoint for numerical stability.
    let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
    let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
    let (ax, ay) = (a.x - ox, a.y - oy);
    let (bx, by) = (b.x - ox, b.y - oy);
    let (cx, cy) = (c.x - ox, c.y - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        let ab = circle_from_diameter(a, b);
        let ac = circle_from_diameter(a, c);
        let bc = circle_from_diameter(b, c);
        let mut best = ab;
        if ac.radius > best.radius {
            best = ac;
        }
        if bc.radius > best.radius {
            best = bc;
        }
        return best;
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Point::new(ox + x, oy + y);
    let radius = dist(center, a).max(dist(center, b)).max(dist(center, c));
    Circle { center, radius }
}

/// All longest distance segments of a point set, plus the diameter (maximum
/// pairwise distance). Pairs whose length is within `tol` of the maximum all
/// count; two segments are the same LDS when their endpoint sets coincide
/// within `tol`. Fewer than two distinct points yields an empty set and
/// diameter zero.
pub struct LdsResult {
    pub segments: Vec<Segment>,
    pub diam: f64,
}

pub fn longest_distance_segments(points: &[Point], tol: Tolerance) -> LdsResult {
    let pts = distinct_points(points, tol);
    if pts.len() < 2 {
        return LdsResult {
            segments: Vec::new(),
            diam: 0.0,
        };
    }
    let mut diam = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = dist(pts[i], pts[j]);
            if d > diam {
                diam = d;
            }
        }
    }
    let mut segments: Vec<Segment> = Vec::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if tol.eq(dist(pts[i], pts[j]), diam) {
                let seg = canonical_segment(pts[i], pts[j]);
                if !segments.iter().any(|s| s.same_endpoints(&seg, tol)) {
                    segments.push(seg);
                }
            }
        }
    }
    LdsResult { segments, diam }
}

/// Endpoints ordered lexicographically by (x, y).
pub fn canonical_segment(p: Point, q: Point) -> Segment {
    if (p.x, p.y) <= (q.x, q.y) {
        Segment::new(p, q)
    } else {
        Segment::new(q, p)
    }
}

/// Maximum pairwise distance (the configuration diameter).
pub fn diameter(points: &[Point]) -> f64 {
    let mut diam = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = dist(points[i], points[j]);
            if d > diam {
                diam = d;
            }
        }
    }
    diam
}

/// Result of [`classify_onlds`].
#[derive(Clone, Debug, PartialEq)]
pub enum OnLds {
    /// Unique LDS and every point lies on it (within tolerance); carries the
    /// witness segment.
    On(Segment),
    NotOn,
}

/// A point set is OnLDS when its longest distance segment is unique and no
/// point lies off that segment.
pub fn classify_onlds(points: &[Point], tol: Tolerance) -> OnLds {
    let pts = distinct_points(points, tol);
    if pts.len() < 2 {
        return OnLds::NotOn;
    }
    let lds = longest_distance_segments(&pts, tol);
    if lds.segments.len() != 1 {
        return OnLds::NotOn;
    }
    let seg = lds.segments[0];
    for &p in &pts {
        if dist_to_segment(p, &seg) > tol.eps_geom {
            return OnLds::NotOn;
        }
    }
    OnLds::On(seg)
}
