use super::{intersect_pieces, intersect_segment_segment, Arc, PathPiece, Point, Segment};

pub fn distance_point_segment(p: Point, s: &Segment) -> f64 {
    let t = s.project(p).clamp(0.0, 1.0);
    p.dist(s.point_at(t))
}

fn arc_min_distance(a: &Arc, p: Point) -> f64 {
    let v = p - a.center;
    let d = v.norm();
    if d <= 1e-15 {
        return a.radius;
    }
    if a.param_of_angle(v.angle(), 0.0).is_some() {
        return (d - a.radius).abs();
    }
    p.dist(a.start_point()).min(p.dist(a.end_point()))
}

fn arc_max_distance(a: &Arc, p: Point) -> f64 {
    let v = p - a.center;
    let d = v.norm();
    if d <= 1e-15 {
        return a.radius;
    }
    if a.param_of_angle((-v).angle(), 0.0).is_some() {
        return d + a.radius;
    }
    p.dist(a.start_point()).max(p.dist(a.end_point()))
}

/// Minimum distance from `p` to any point of the piece. Arcs are handled
/// analytically: the radial projection if it falls inside the angular
/// range, else the nearer endpoint.
pub fn min_distance_piece_point(piece: &PathPiece, p: Point) -> f64 {
    match piece {
        PathPiece::Seg(s) => distance_point_segment(p, s),
        PathPiece::Arc(a) => arc_min_distance(a, p),
    }
}

/// Maximum distance from `p` to any point of the piece.
pub fn max_distance_piece_point(piece: &PathPiece, p: Point) -> f64 {
    match piece {
        PathPiece::Seg(s) => p.dist(s.a).max(p.dist(s.b)),
        PathPiece::Arc(a) => arc_max_distance(a, p),
    }
}

pub fn distance_segment_segment(s1: &Segment, s2: &Segment) -> f64 {
    if !intersect_segment_segment(s1, s2).is_empty() {
        return 0.0;
    }
    distance_point_segment(s1.a, s2)
        .min(distance_point_segment(s1.b, s2))
        .min(distance_point_segment(s2.a, s1))
        .min(distance_point_segment(s2.b, s1))
}

/// Minimum distance between an arc and a segment.
///
/// The minimizing pair has an endpoint on one of the two curves, or is an
/// interior pair whose connecting line is normal to both; for a segment
/// that forces the arc point to sit at the angle of the segment normal.
pub fn distance_arc_segment(a: &Arc, s: &Segment) -> f64 {
    if !intersect_pieces(&PathPiece::Arc(*a), &PathPiece::Seg(*s)).is_empty() {
        return 0.0;
    }
    let mut best = distance_point_segment(a.start_point(), s)
        .min(distance_point_segment(a.end_point(), s))
        .min(arc_min_distance(a, s.a))
        .min(arc_min_distance(a, s.b));
    let n = s.dir().perp().normalized();
    for dir in [n, -n] {
        if a.param_of_angle(dir.angle(), 0.0).is_some() {
            let q = a.center + dir * a.radius;
            best = best.min(distance_point_segment(q, s));
        }
    }
    best
}

pub fn distance_piece_segment(piece: &PathPiece, s: &Segment) -> f64 {
    match piece {
        PathPiece::Seg(p) => distance_segment_segment(p, s),
        PathPiece::Arc(a) => distance_arc_segment(a, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn sampled_min(piece: &PathPiece, q: Point, n: usize) -> f64 {
        (0..=n)
            .map(|i| piece.point_at(i as f64 / n as f64).dist(q))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn point_segment_examples() {
        let s = Segment::new(p(-1., 0.), p(1., 0.));
        assert_eq!(distance_point_segment(p(0., 1.), &s), 1.0);
        assert_eq!(distance_point_segment(p(3., 0.), &s), 2.0);
        let s = Segment::new(p(0., 0.), p(1., 0.));
        assert!((distance_point_segment(p(2., 2.), &s) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn piece_point_examples() {
        let s = PathPiece::seg(p(0., 0.), p(4., 0.));
        assert_eq!(min_distance_piece_point(&s, p(2., 5.)), 5.0);
        let c = PathPiece::Arc(Arc::circle(p(0., 0.), 1.0));
        assert!((min_distance_piece_point(&c, p(3., 0.)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_arc_clamps_to_nearer_endpoint() {
        // Dense sampling oracle: the nearest point of the quarter arc to
        // (−3, 0) is its endpoint (0, 2), at distance √13.
        let arc = PathPiece::Arc(Arc::new(p(0., 0.), 2.0, 0.0, PI / 2.0));
        let q = p(-3., 0.);
        let oracle = sampled_min(&arc, q, 100_000);
        assert!((oracle - 13f64.sqrt()).abs() < 1e-9);
        let exact = min_distance_piece_point(&arc, q);
        assert!((exact - 13f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn arc_segment_distance_interior_pair() {
        let arc = Arc::new(p(0., 0.), 1.0, PI / 4.0, PI / 2.0);
        let s = Segment::new(p(-2., 3.), p(2., 3.));
        assert!((distance_arc_segment(&arc, &s) - 2.0).abs() < 1e-12);
    }

    /// Minimum over a sampled curve refined around the best coarse sample.
    fn refined_min(piece: &PathPiece, f: impl Fn(Point) -> f64) -> f64 {
        let n = 1000;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut best = f64::INFINITY;
        for _ in 0..4 {
            let mut best_t = lo;
            for i in 0..=n {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                let v = f(piece.point_at(t));
                if v < best {
                    best = v;
                    best_t = t;
                }
            }
            let h = (hi - lo) / n as f64;
            lo = (best_t - h).max(0.0);
            hi = (best_t + h).min(1.0);
        }
        best
    }

    proptest! {
        #[test]
        fn arc_point_distance_matches_sampling(
            cx in -5.0f64..5.0, cy in -5.0f64..5.0, r in 0.5f64..3.0,
            start in 0.0f64..TAU, sweep in -TAU..TAU,
            qx in -10.0f64..10.0, qy in -10.0f64..10.0,
        ) {
            prop_assume!(sweep.abs() > 1e-3);
            let arc = PathPiece::Arc(Arc::new(p(cx, cy), r, start, sweep));
            let q = p(qx, qy);
            let exact = min_distance_piece_point(&arc, q);
            let coarse = sampled_min(&arc, q, 1000);
            prop_assert!(exact <= coarse + 1e-12);
            let fine = refined_min(&arc, |x| x.dist(q));
            prop_assert!(exact >= fine - 1e-9);
        }

        #[test]
        fn arc_segment_distance_matches_sampling(
            cx in -3.0f64..3.0, cy in -3.0f64..3.0, r in 0.5f64..3.0,
            start in 0.0f64..TAU, sweep in -TAU..TAU,
            ax in -8.0f64..8.0, ay in -8.0f64..8.0, bx in -8.0f64..8.0, by in -8.0f64..8.0,
        ) {
            prop_assume!(sweep.abs() > 1e-3);
            let s = Segment::new(p(ax, ay), p(bx, by));
            prop_assume!(s.length() > 1e-3);
            let arc = Arc::new(p(cx, cy), r, start, sweep);
            let exact = distance_arc_segment(&arc, &s);
            let fine = refined_min(&PathPiece::Arc(arc), |x| distance_point_segment(x, &s));
            prop_assert!(exact <= fine + 1e-9);
            prop_assert!(exact >= fine - 1e-7);
        }
    }
}
