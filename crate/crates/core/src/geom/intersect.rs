use super::{Arc, GeomError, PathPiece, Point, Segment, EPS_GEOM};

/// Intersection of two closed segments. Collinear overlaps report the two
/// extreme points of the shared interval.
pub fn intersect_segment_segment(s1: &Segment, s2: &Segment) -> Vec<Point> {
    let d1 = s1.dir();
    let d2 = s2.dir();
    let l1 = d1.norm();
    let l2 = d2.norm();
    if l1 == 0.0 || l2 == 0.0 {
        return Vec::new();
    }
    let denom = d1.cross(d2);
    let w = s2.a - s1.a;

    if denom.abs() <= 1e-12 * l1 * l2 {
        // Parallel: only collinear pieces can meet.
        if (w.cross(d1) / l1).abs() > EPS_GEOM {
            return Vec::new();
        }
        let ta = s1.project(s2.a);
        let tb = s1.project(s2.b);
        let lo = ta.min(tb).max(0.0);
        let hi = ta.max(tb).min(1.0);
        let tol = EPS_GEOM / l1;
        if hi < lo - tol {
            return Vec::new();
        }
        if (hi - lo) * l1 <= EPS_GEOM {
            return vec![s1.point_at(0.5 * (lo + hi))];
        }
        return vec![s1.point_at(lo), s1.point_at(hi)];
    }

    let t = w.cross(d2) / denom;
    let u = w.cross(d1) / denom;
    let tol1 = EPS_GEOM / l1;
    let tol2 = EPS_GEOM / l2;
    if t < -tol1 || t > 1.0 + tol1 || u < -tol2 || u > 1.0 + tol2 {
        return Vec::new();
    }
    vec![s1.point_at(t.clamp(0.0, 1.0))]
}

/// Intersection of a circle with a closed segment, ordered along the
/// segment. Near-tangency snaps to a single point.
pub fn intersect_circle_segment(c: Point, r: f64, s: &Segment) -> Vec<Point> {
    let d = s.dir();
    let l2 = d.norm_sq();
    if l2 == 0.0 {
        return Vec::new();
    }
    let l = l2.sqrt();
    let t0 = (c - s.a).dot(d) / l2;
    let foot = s.a + d * t0;
    let h = foot.dist(c);
    let tol = EPS_GEOM / l;
    let in_range = |t: f64| t >= -tol && t <= 1.0 + tol;
    if h > r + EPS_GEOM {
        return Vec::new();
    }
    if (h - r).abs() <= EPS_GEOM {
        return if in_range(t0) {
            vec![s.point_at(t0.clamp(0.0, 1.0))]
        } else {
            Vec::new()
        };
    }
    let half = (r * r - h * h).max(0.0).sqrt() / l;
    [t0 - half, t0 + half]
        .into_iter()
        .filter(|&t| in_range(t))
        .map(|t| s.point_at(t.clamp(0.0, 1.0)))
        .collect()
}

/// Intersection of two circles. Equal circles are an error; concentric
/// distinct circles never meet.
pub fn intersect_circle_circle(
    c1: Point,
    r1: f64,
    c2: Point,
    r2: f64,
) -> Result<Vec<Point>, GeomError> {
    let d = c1.dist(c2);
    if d <= EPS_GEOM {
        if (r1 - r2).abs() <= EPS_GEOM {
            return Err(GeomError::CoincidentCircles);
        }
        return Ok(Vec::new());
    }
    if d > r1 + r2 + EPS_GEOM || d < (r1 - r2).abs() - EPS_GEOM {
        return Ok(Vec::new());
    }
    let u = (c2 - c1) / d;
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let base = c1 + u * a;
    if (d - (r1 + r2)).abs() <= EPS_GEOM || (d - (r1 - r2).abs()).abs() <= EPS_GEOM {
        return Ok(vec![base]);
    }
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let off = u.perp() * h;
    Ok(vec![base + off, base - off])
}

fn arc_contains(a: &Arc, p: Point) -> bool {
    a.param_of_point(p, EPS_GEOM).is_some()
}

/// All intersection points between two path pieces, including the extreme
/// points of overlapping stretches.
pub fn intersect_pieces(p1: &PathPiece, p2: &PathPiece) -> Vec<Point> {
    match (p1, p2) {
        (PathPiece::Seg(s1), PathPiece::Seg(s2)) => intersect_segment_segment(s1, s2),
        (PathPiece::Seg(s), PathPiece::Arc(a)) | (PathPiece::Arc(a), PathPiece::Seg(s)) => {
            intersect_circle_segment(a.center, a.radius, s)
                .into_iter()
                .filter(|p| arc_contains(a, *p))
                .collect()
        }
        (PathPiece::Arc(a1), PathPiece::Arc(a2)) => {
            match intersect_circle_circle(a1.center, a1.radius, a2.center, a2.radius) {
                Ok(pts) => pts
                    .into_iter()
                    .filter(|p| arc_contains(a1, *p) && arc_contains(a2, *p))
                    .collect(),
                Err(_) => {
                    // Co-circular arcs share the endpoints that lie on the
                    // other arc.
                    let mut out: Vec<Point> = Vec::new();
                    for (p, other) in [
                        (a1.start_point(), a2),
                        (a1.end_point(), a2),
                        (a2.start_point(), a1),
                        (a2.end_point(), a1),
                    ] {
                        if arc_contains(other, p) && !out.iter().any(|q| q.approx_eq(p, EPS_GEOM)) {
                            out.push(p);
                        }
                    }
                    out
                }
            }
        }
    }
}

/// Hits of the ray `origin + s·dir` (`s > 0`, `dir` unit) with a piece, as
/// `(s, piece parameter)` pairs.
pub fn ray_hits_piece(origin: Point, dir: Point, piece: &PathPiece) -> Vec<(f64, f64)> {
    match piece {
        PathPiece::Seg(seg) => {
            let d = seg.dir();
            let denom = dir.cross(d);
            let w = seg.a - origin;
            if denom.abs() <= 1e-15 * d.norm() {
                // Parallel ray: count the nearer collinear endpoint, if any.
                if (w.cross(dir)).abs() > EPS_GEOM {
                    return Vec::new();
                }
                let sa = w.dot(dir);
                let sb = (seg.b - origin).dot(dir);
                let mut out = Vec::new();
                if sa > 0.0 || sb > 0.0 {
                    if sa <= sb {
                        out.push((sa.max(0.0), if sa > 0.0 { 0.0 } else { seg.project(origin) }));
                    } else {
                        out.push((sb.max(0.0), if sb > 0.0 { 1.0 } else { seg.project(origin) }));
                    }
                }
                return out;
            }
            let s = w.cross(d) / denom;
            let t = w.cross(dir) / denom;
            let tol = EPS_GEOM / d.norm();
            if s > 0.0 && t >= -tol && t <= 1.0 + tol {
                vec![(s, t.clamp(0.0, 1.0))]
            } else {
                Vec::new()
            }
        }
        PathPiece::Arc(arc) => {
            let f = origin - arc.center;
            let b = f.dot(dir);
            let c = f.norm_sq() - arc.radius * arc.radius;
            let disc = b * b - c;
            if disc < 0.0 {
                return Vec::new();
            }
            let sq = disc.sqrt();
            let mut out = Vec::new();
            for s in [-b - sq, -b + sq] {
                if s > 0.0 {
                    let p = origin + dir * s;
                    if let Some(t) = arc.param_of_point(p, EPS_GEOM) {
                        out.push((s, t));
                    }
                }
            }
            out
        }
    }
}
