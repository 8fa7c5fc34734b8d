//! Planar primitives shared by every other module: points, segments,
//! circular arcs, simple polygons and the tolerance policy that all
//! incidence decisions route through.

mod distance;
mod intersect;
mod polygon;

pub use distance::{
    distance_arc_segment, distance_piece_segment, distance_point_segment,
    distance_segment_segment, max_distance_piece_point, min_distance_piece_point,
};
pub use intersect::{
    intersect_circle_circle, intersect_circle_segment, intersect_pieces,
    intersect_segment_segment, ray_hits_piece,
};
pub use polygon::{point_in_polygon, Location, Polygon};

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Global incidence tolerance in workspace units.
pub const EPS_GEOM: f64 = 1e-9;

/// Sweeps within this of a full turn are treated as complete circles.
const FULL_TURN_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("circles are coincident")]
    CoincidentCircles,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
}

/// Three-way comparison with the global tolerance band.
pub fn fuzzy_cmp(a: f64, b: f64, eps: f64) -> Ordering {
    if (a - b).abs() <= eps {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    fuzzy_cmp(a, b, EPS_GEOM) == Ordering::Equal
}

/// Normalizes an angle into `[0, 2π)`.
#[inline]
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn from_polar(center: Point, radius: f64, theta: f64) -> Point {
        Point::new(center.x + radius * theta.cos(), center.y + radius * theta.sin())
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, o: Point, eps: f64) -> bool {
        self.dist(o) <= eps
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    /// Builds a segment without checking for coincident endpoints.
    #[inline]
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn try_new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a.dist(b) <= EPS_GEOM {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    #[inline]
    pub fn dir(&self) -> Point {
        self.b - self.a
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.a.lerp(self.b, t)
    }

    /// Parameter of the orthogonal projection of `p`, unclamped.
    pub fn project(&self, p: Point) -> f64 {
        let d = self.dir();
        let l2 = d.norm_sq();
        if l2 == 0.0 {
            0.0
        } else {
            (p - self.a).dot(d) / l2
        }
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
}

/// A circular arc parameterized by angle. `theta_end - theta_start` is the
/// signed sweep: positive for counter-clockwise arcs, negative otherwise,
/// with magnitude in `(0, 2π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub theta_start: f64,
    pub theta_end: f64,
}

impl Arc {
    pub fn new(center: Point, radius: f64, theta_start: f64, sweep: f64) -> Self {
        Arc {
            center,
            radius,
            theta_start,
            theta_end: theta_start + sweep,
        }
    }

    /// Full counter-clockwise circle starting at angle zero.
    pub fn circle(center: Point, radius: f64) -> Self {
        Arc::new(center, radius, 0.0, TAU)
    }

    /// Builds an arc from stored angles and an explicit orientation,
    /// normalizing the end angle so the sweep sign matches the orientation.
    pub fn from_parts(
        center: Point,
        radius: f64,
        theta_start: f64,
        theta_end: f64,
        orientation: Orientation,
    ) -> Result<Self, GeomError> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(GeomError::InvalidArc(format!("radius {radius}")));
        }
        if !theta_start.is_finite() || !theta_end.is_finite() {
            return Err(GeomError::InvalidArc("non-finite angle".into()));
        }
        let raw = theta_end - theta_start;
        let in_range = match orientation {
            Orientation::Ccw => raw > 0.0 && raw <= TAU + FULL_TURN_SLACK,
            Orientation::Cw => raw < 0.0 && raw >= -TAU - FULL_TURN_SLACK,
        };
        if in_range {
            // Keep the stored end angle bit for bit.
            return Ok(Arc {
                center,
                radius,
                theta_start,
                theta_end,
            });
        }
        let sweep = match orientation {
            Orientation::Ccw => {
                let s = raw.rem_euclid(TAU);
                if s == 0.0 {
                    TAU
                } else {
                    s
                }
            }
            Orientation::Cw => {
                let s = (-raw).rem_euclid(TAU);
                -(if s == 0.0 { TAU } else { s })
            }
        };
        Ok(Arc::new(center, radius, theta_start, sweep))
    }

    #[inline]
    pub fn sweep(&self) -> f64 {
        self.theta_end - self.theta_start
    }

    pub fn orientation(&self) -> Orientation {
        if self.sweep() >= 0.0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        }
    }

    pub fn is_full_circle(&self) -> bool {
        self.sweep().abs() >= TAU - FULL_TURN_SLACK
    }

    #[inline]
    pub fn point_at_angle(&self, theta: f64) -> Point {
        Point::from_polar(self.center, self.radius, theta)
    }

    #[inline]
    pub fn angle_at(&self, t: f64) -> f64 {
        self.theta_start + t * self.sweep()
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.point_at_angle(self.angle_at(t))
    }

    pub fn start_point(&self) -> Point {
        self.point_at_angle(self.theta_start)
    }

    pub fn end_point(&self) -> Point {
        self.point_at_angle(self.theta_end)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep().abs()
    }

    /// Travel direction at parameter `t` (unit vector).
    pub fn tangent_at(&self, t: f64) -> Point {
        let th = self.angle_at(t);
        let radial = Point::new(th.cos(), th.sin());
        match self.orientation() {
            Orientation::Ccw => radial.perp(),
            Orientation::Cw => -radial.perp(),
        }
    }

    /// Parameter in `[0, 1]` of the point on the arc's circle at polar angle
    /// `phi`, or `None` if the angle falls outside the arc. `tol` is an
    /// angular slack applied at both ends.
    pub fn param_of_angle(&self, phi: f64, tol: f64) -> Option<f64> {
        let sweep = self.sweep().abs();
        let off = match self.orientation() {
            Orientation::Ccw => (phi - self.theta_start).rem_euclid(TAU),
            Orientation::Cw => (self.theta_start - phi).rem_euclid(TAU),
        };
        if off <= sweep + tol {
            Some((off / sweep).min(1.0))
        } else if off >= TAU - tol {
            Some(0.0)
        } else {
            None
        }
    }

    /// Parameter of a point assumed to lie (approximately) on the circle.
    pub fn param_of_point(&self, p: Point, tol: f64) -> Option<f64> {
        let ang_tol = tol / self.radius;
        self.param_of_angle((p - self.center).angle(), ang_tol)
    }

    pub fn reversed(&self) -> Arc {
        Arc {
            center: self.center,
            radius: self.radius,
            theta_start: self.theta_end,
            theta_end: self.theta_start,
        }
    }

    pub fn sub(&self, t0: f64, t1: f64) -> Arc {
        Arc {
            center: self.center,
            radius: self.radius,
            theta_start: self.angle_at(t0),
            theta_end: self.angle_at(t1),
        }
    }

    /// Axis-aligned bounds as `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.start_point();
        let mut hi = lo;
        let mut grow = |p: Point| {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        grow(self.end_point());
        for k in 0..4 {
            let phi = k as f64 * PI / 2.0;
            if self.param_of_angle(phi, 0.0).is_some() {
                grow(self.point_at_angle(phi));
            }
        }
        (lo, hi)
    }
}

/// One piece of a path or boundary chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPiece {
    Seg(Segment),
    Arc(Arc),
}

impl PathPiece {
    pub fn seg(a: Point, b: Point) -> Self {
        PathPiece::Seg(Segment::new(a, b))
    }

    pub fn start(&self) -> Point {
        match self {
            PathPiece::Seg(s) => s.a,
            PathPiece::Arc(a) => a.start_point(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            PathPiece::Seg(s) => s.b,
            PathPiece::Arc(a) => a.end_point(),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            PathPiece::Seg(s) => s.length(),
            PathPiece::Arc(a) => a.length(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            PathPiece::Seg(s) => s.point_at(t),
            PathPiece::Arc(a) => a.point_at(t),
        }
    }

    /// Unit travel direction at parameter `t`.
    pub fn tangent_at(&self, t: f64) -> Point {
        match self {
            PathPiece::Seg(s) => s.dir().normalized(),
            PathPiece::Arc(a) => a.tangent_at(t),
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match self {
            PathPiece::Seg(s) => PathPiece::Seg(s.reversed()),
            PathPiece::Arc(a) => PathPiece::Arc(a.reversed()),
        }
    }

    /// The sub-piece between parameters `t0` and `t1`.
    pub fn sub(&self, t0: f64, t1: f64) -> PathPiece {
        match self {
            PathPiece::Seg(s) => PathPiece::seg(s.point_at(t0), s.point_at(t1)),
            PathPiece::Arc(a) => PathPiece::Arc(a.sub(t0, t1)),
        }
    }

    /// Parameter of a point lying on the piece (within `tol`), if any.
    pub fn param_of(&self, p: Point, tol: f64) -> Option<f64> {
        match self {
            PathPiece::Seg(s) => {
                if distance_point_segment(p, s) > tol {
                    return None;
                }
                Some(s.project(p).clamp(0.0, 1.0))
            }
            PathPiece::Arc(a) => {
                if ((p - a.center).norm() - a.radius).abs() > tol {
                    return None;
                }
                a.param_of_point(p, tol)
            }
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match self {
            PathPiece::Seg(s) => (
                Point::new(s.a.x.min(s.b.x), s.a.y.min(s.b.y)),
                Point::new(s.a.x.max(s.b.x), s.a.y.max(s.b.y)),
            ),
            PathPiece::Arc(a) => a.bbox(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            PathPiece::Seg(s) => s.a.is_finite() && s.b.is_finite(),
            PathPiece::Arc(a) => {
                a.center.is_finite()
                    && a.radius.is_finite()
                    && a.theta_start.is_finite()
                    && a.theta_end.is_finite()
            }
        }
    }
}

/// Total length of a chain of pieces.
pub fn chain_length(pieces: &[PathPiece]) -> f64 {
    pieces.iter().map(PathPiece::length).sum()
}

/// Reverses a chain so it is traversed end to start.
pub fn reverse_chain(pieces: &[PathPiece]) -> Vec<PathPiece> {
    pieces.iter().rev().map(PathPiece::reversed).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_from_parts_normalizes_sweep() {
        let a = Arc::from_parts(Point::default(), 1.0, 0.0, -PI / 2.0, Orientation::Ccw).unwrap();
        assert!((a.sweep() - 1.5 * PI).abs() < 1e-12);
        let b = Arc::from_parts(Point::default(), 1.0, 0.0, PI / 2.0, Orientation::Cw).unwrap();
        assert!((b.sweep() + 1.5 * PI).abs() < 1e-12);
        let c = Arc::from_parts(Point::default(), 1.0, 1.0, 1.0, Orientation::Ccw).unwrap();
        assert!(c.is_full_circle());
        assert!(Arc::from_parts(Point::default(), 0.0, 0.0, 1.0, Orientation::Ccw).is_err());
    }

    #[test]
    fn arc_param_of_angle_wraps() {
        let a = Arc::new(Point::default(), 2.0, 3.0 * PI / 2.0, PI);
        assert_eq!(a.param_of_angle(0.0, 0.0).map(|t| (t * 1e9).round()), Some(0.5e9));
        assert!(a.param_of_angle(PI, 1e-9).is_none());
        let cw = a.reversed();
        assert!((cw.param_of_angle(0.0, 0.0).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn arc_bbox_includes_extreme_points() {
        let a = Arc::new(Point::default(), 1.0, -0.1, 0.2);
        let (lo, hi) = a.bbox();
        assert!((hi.x - 1.0).abs() < 1e-15);
        assert!(lo.y < 0.0 && hi.y > 0.0);
    }

    #[test]
    fn piece_reverse_swaps_endpoints() {
        let a = PathPiece::Arc(Arc::new(Point::new(1.0, 1.0), 2.0, 0.3, -1.2));
        let r = a.reversed();
        assert!(a.start().approx_eq(r.end(), 1e-12));
        assert!(a.end().approx_eq(r.start(), 1e-12));
        assert!((a.length() - r.length()).abs() < 1e-12);
    }
}
