//! Bounded regions cut out of the plane by tagged segments and arcs.
//!
//! [`overlay`] splits every input curve at all pairwise intersections,
//! keeps the pieces that separate points satisfying a membership
//! predicate from points that do not, and traces those pieces into closed
//! loops with the region on the left.

use std::collections::HashMap;
use std::f64::consts::TAU;

use thiserror::Error;

use crate::geom::{intersect_pieces, min_distance_piece_point, PathPiece, Point};

/// Vertices closer than this are identified.
pub const MERGE_TOL: f64 = 1e-8;
/// Loops enclosing less area than this are discarded.
pub const AREA_EPS: f64 = 1e-8;

/// Where a boundary piece came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Part of the eroded workspace boundary.
    Obstacle,
    /// Part of the radius-2 circle around configuration `k`.
    Disc(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaggedPiece {
    pub piece: PathPiece,
    pub tag: Tag,
}

impl TaggedPiece {
    pub fn new(piece: PathPiece, tag: Tag) -> Self {
        TaggedPiece { piece, tag }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("boundary tracing failed: {0}")]
    Tracing(String),
    #[error("hole loop has no enclosing outer loop")]
    OrphanHole,
}

/// A closed loop of pieces. Outer loops run counter-clockwise, holes
/// clockwise; either way the enclosed region lies to the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pieces: Vec<TaggedPiece>,
    offsets: Vec<f64>,
    length: f64,
}

impl Chain {
    pub fn new(pieces: Vec<TaggedPiece>) -> Self {
        let mut offsets = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for p in &pieces {
            offsets.push(acc);
            acc += p.piece.length();
        }
        Chain {
            pieces,
            offsets,
            length: acc,
        }
    }

    pub fn pieces(&self) -> &[TaggedPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn signed_area(&self) -> f64 {
        self.pieces
            .iter()
            .map(|tp| {
                let (a, b) = (tp.piece.start(), tp.piece.end());
                let mut s = 0.5 * a.cross(b);
                if let PathPiece::Arc(arc) = tp.piece {
                    let phi = arc.sweep();
                    s += 0.5 * arc.radius * arc.radius * (phi - phi.sin());
                }
                s
            })
            .sum()
    }

    /// Winding number of the loop around `p`. Undefined for points on the
    /// loop itself.
    pub fn winding(&self, p: Point) -> i32 {
        let mut total = 0.0;
        for tp in &self.pieces {
            let u = tp.piece.start() - p;
            let v = tp.piece.end() - p;
            total += u.cross(v).atan2(u.dot(v));
            if let PathPiece::Arc(arc) = tp.piece {
                if in_circular_segment(&arc, p) {
                    total += TAU * arc.sweep().signum();
                }
            }
        }
        (total / TAU).round() as i32
    }

    pub fn encloses(&self, p: Point) -> bool {
        self.winding(p) != 0
    }

    /// Distance from `p` to the nearest point of the loop.
    pub fn distance(&self, p: Point) -> f64 {
        self.pieces
            .iter()
            .map(|tp| min_distance_piece_point(&tp.piece, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Arc-length position of the loop point nearest to `p`, if that point
    /// is within `tol`.
    pub fn position_of(&self, p: Point, tol: f64) -> Option<f64> {
        let mut best: Option<(f64, usize)> = None;
        for (i, tp) in self.pieces.iter().enumerate() {
            let d = min_distance_piece_point(&tp.piece, p);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        let (d, i) = best?;
        if d > tol {
            return None;
        }
        let t = closest_param(&self.pieces[i].piece, p);
        Some((self.offsets[i] + t * self.pieces[i].piece.length()).min(self.length))
    }

    /// Piece index and length offset within that piece for a position.
    fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.length);
        let i = match self.offsets.partition_point(|&o| o <= s) {
            0 => 0,
            k => k - 1,
        };
        (i, (s - self.offsets[i]).max(0.0))
    }

    pub fn point_at(&self, s: f64) -> Point {
        let (i, local) = self.locate(s);
        let piece = &self.pieces[i].piece;
        let len = piece.length();
        piece.point_at(if len > 0.0 { (local / len).min(1.0) } else { 0.0 })
    }

    /// Forward arc-length distance from position `s0` to `s1`.
    pub fn forward_gap(&self, s0: f64, s1: f64) -> f64 {
        (s1 - s0).rem_euclid(self.length)
    }

    /// The stretch of the loop travelled forward from position `s0` to
    /// `s1`, wrapping past the start if needed.
    pub fn portion(&self, s0: f64, s1: f64) -> Vec<PathPiece> {
        let mut remaining = self.forward_gap(s0, s1);
        let mut out = Vec::new();
        if remaining <= 1e-12 {
            return out;
        }
        let (mut i, mut local) = self.locate(s0);
        let n = self.pieces.len();
        for _ in 0..=n {
            let piece = &self.pieces[i].piece;
            let len = piece.length();
            let avail = len - local;
            if remaining <= avail + 1e-12 {
                let t1 = ((local + remaining) / len).min(1.0);
                out.push(piece.sub(local / len, t1));
                break;
            }
            if avail > 1e-12 {
                out.push(piece.sub(local / len, 1.0));
            }
            remaining -= avail;
            i = (i + 1) % n;
            local = 0.0;
        }
        out.retain(|p| p.length() > 1e-12);
        out
    }

    /// Maximal runs of consecutive pieces carrying `tag`, as
    /// `(start position, run length)`.
    pub fn tag_runs(&self, tag: Tag) -> Vec<(f64, f64)> {
        let n = self.pieces.len();
        let has = |i: usize| self.pieces[i % n].tag == tag;
        if n == 0 {
            return Vec::new();
        }
        if (0..n).all(has) {
            return vec![(0.0, self.length)];
        }
        let mut runs = Vec::new();
        for i in 0..n {
            if has(i) && !has(i + n - 1) {
                let mut len = 0.0;
                let mut j = i;
                while has(j) {
                    len += self.pieces[j % n].piece.length();
                    j += 1;
                }
                runs.push((self.offsets[i], len));
            }
        }
        runs
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for tp in &self.pieces {
            let (a, b) = tp.piece.bbox();
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        (lo, hi)
    }
}

fn in_circular_segment(arc: &crate::geom::Arc, p: Point) -> bool {
    if (p - arc.center).norm() >= arc.radius {
        return false;
    }
    if arc.is_full_circle() {
        return true;
    }
    let a = arc.start_point();
    let chord = arc.end_point() - a;
    let side_mid = chord.cross(arc.point_at(0.5) - a);
    let side_p = chord.cross(p - a);
    side_mid * side_p > 0.0
}

/// Parameter of the point of `piece` closest to `p`.
fn closest_param(piece: &PathPiece, p: Point) -> f64 {
    match piece {
        PathPiece::Seg(s) => s.project(p).clamp(0.0, 1.0),
        PathPiece::Arc(a) => {
            let sweep = a.sweep().abs();
            let phi = (p - a.center).angle();
            let off = if a.sweep() >= 0.0 {
                (phi - a.theta_start).rem_euclid(TAU)
            } else {
                (a.theta_start - phi).rem_euclid(TAU)
            };
            if off <= sweep {
                off / sweep
            } else if p.dist(a.start_point()) <= p.dist(a.end_point()) {
                0.0
            } else {
                1.0
            }
        }
    }
}

/// A connected bounded region: one outer loop and any number of holes.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub outer: Chain,
    pub holes: Vec<Chain>,
    pub area: f64,
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        self.outer.encloses(p) && !self.holes.iter().any(|h| h.encloses(p))
    }

    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn piece_count(&self) -> usize {
        self.chains().map(Chain::len).sum()
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.chains()
            .map(|c| c.distance(p))
            .fold(f64::INFINITY, f64::min)
    }
}

struct VertexIndex {
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl VertexIndex {
    const CELL: f64 = 1e-6;

    fn new() -> Self {
        VertexIndex {
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(p: Point) -> (i64, i64) {
        ((p.x / Self::CELL).floor() as i64, (p.y / Self::CELL).floor() as i64)
    }

    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        if self.points[id].dist(p) <= MERGE_TOL {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.cells.entry((kx, ky)).or_default().push(id);
        id
    }
}

struct Edge {
    piece: PathPiece,
    tag: Tag,
    from: usize,
    to: usize,
}

fn bbox_overlap(a: (Point, Point), b: (Point, Point), pad: f64) -> bool {
    a.0.x <= b.1.x + pad && b.0.x <= a.1.x + pad && a.0.y <= b.1.y + pad && b.0.y <= a.1.y + pad
}

/// Splits the curves into the boundary of `{p : inside(p)}` and returns the
/// bounded connected regions, sorted by descending area.
///
/// `inside` must be an open-set predicate whose boundary is covered by the
/// given curves.
pub fn overlay(
    curves: &[TaggedPiece],
    inside: impl Fn(Point) -> bool,
) -> Result<Vec<Region>, RegionError> {
    let curves: Vec<&TaggedPiece> = curves
        .iter()
        .filter(|c| c.piece.length() > MERGE_TOL)
        .collect();
    let boxes: Vec<(Point, Point)> = curves.iter().map(|c| c.piece.bbox()).collect();

    let mut index = VertexIndex::new();
    let mut splits: Vec<Vec<(f64, usize)>> = curves
        .iter()
        .map(|c| {
            vec![
                (0.0, index.insert(c.piece.start())),
                (1.0, index.insert(c.piece.end())),
            ]
        })
        .collect();

    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if !bbox_overlap(boxes[i], boxes[j], 1e-7) {
                continue;
            }
            for p in intersect_pieces(&curves[i].piece, &curves[j].piece) {
                let v = index.insert(p);
                splits[i].push((closest_param(&curves[i].piece, p), v));
                splits[j].push((closest_param(&curves[j].piece, p), v));
            }
        }
    }

    // Sub-pieces between consecutive split points.
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen: HashMap<(usize, usize), Vec<Point>> = HashMap::new();
    for (ci, c) in curves.iter().enumerate() {
        let sp = &mut splits[ci];
        sp.sort_by(|a, b| a.0.total_cmp(&b.0));
        let len = c.piece.length();
        for w in sp.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if v0 == v1 && (t1 - t0) * len <= 10.0 * MERGE_TOL {
                continue;
            }
            if (t1 - t0) * len <= 1e-12 {
                continue;
            }
            let mut piece = c.piece.sub(t0, t1);
            if let PathPiece::Seg(_) = piece {
                piece = PathPiece::seg(index.points[v0], index.points[v1]);
            }
            let mid = piece.point_at(0.5);
            let key = (v0.min(v1), v0.max(v1));
            let dup = seen
                .get(&key)
                .is_some_and(|mids| mids.iter().any(|m| m.dist(mid) <= 1e-7));
            if dup {
                continue;
            }
            seen.entry(key).or_default().push(mid);
            edges.push(Edge {
                piece,
                tag: c.tag,
                from: v0,
                to: v1,
            });
        }
    }

    // Keep and orient the pieces that separate inside from outside.
    let mut half: Vec<Edge> = Vec::new();
    for e in edges {
        let len = e.piece.length();
        // Slivers between nearly tangent curves are about len² thick.
        let eta = (1e-3 * len * len.min(1.0)).clamp(1e-11, 1e-8);
        let mid = e.piece.point_at(0.5);
        let normal = e.piece.tangent_at(0.5).perp();
        let left = inside(mid + normal * eta);
        let right = inside(mid - normal * eta);
        match (left, right) {
            (true, false) => half.push(e),
            (false, true) => half.push(Edge {
                piece: e.piece.reversed(),
                tag: e.tag,
                from: e.to,
                to: e.from,
            }),
            _ => {}
        }
    }

    let loops = trace_loops(&half)?;

    let mut outers: Vec<(Chain, f64)> = Vec::new();
    let mut holes: Vec<(Chain, f64)> = Vec::new();
    for lp in loops {
        let chain = Chain::new(lp.iter().map(|&k| TaggedPiece::new(half[k].piece, half[k].tag)).collect());
        let area = chain.signed_area();
        if area.abs() < AREA_EPS {
            continue;
        }
        if area > 0.0 {
            outers.push((chain, area));
        } else {
            holes.push((chain, area));
        }
    }

    let mut regions: Vec<Region> = outers
        .into_iter()
        .map(|(outer, area)| Region {
            outer,
            holes: Vec::new(),
            area,
        })
        .collect();
    for (hole, area) in holes {
        let probe = hole.pieces[0].piece.point_at(0.5);
        let owner = regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.outer.encloses(probe))
            .min_by(|a, b| a.1.area.total_cmp(&b.1.area))
            .map(|(k, _)| k)
            .ok_or(RegionError::OrphanHole)?;
        regions[owner].area += area;
        regions[owner].holes.push(hole);
    }
    regions.retain(|r| r.area >= AREA_EPS);
    regions.sort_by(|a, b| b.area.total_cmp(&a.area));
    Ok(regions)
}

/// Direction of travel away from the vertex, measured by the chord to a
/// point at arc length `delta` along the piece.
fn leaving_direction(piece: &PathPiece, from_start: bool, delta: f64) -> Point {
    let len = piece.length();
    let t = (delta / len).min(0.5);
    if from_start {
        piece.point_at(t) - piece.start()
    } else {
        piece.point_at(1.0 - t) - piece.end()
    }
}

fn trace_loops(half: &[Edge]) -> Result<Vec<Vec<usize>>, RegionError> {
    let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, e) in half.iter().enumerate() {
        outgoing.entry(e.from).or_default().push(k);
    }
    let next_of = |k: usize| -> Result<usize, RegionError> {
        let e = &half[k];
        let cands = outgoing
            .get(&e.to)
            .ok_or_else(|| RegionError::Tracing(format!("dead end at vertex {}", e.to)))?;
        if cands.len() == 1 {
            return Ok(cands[0]);
        }
        let delta = cands
            .iter()
            .map(|&c| half[c].piece.length())
            .fold(e.piece.length(), f64::min)
            .min(4e-5)
            * 0.25;
        let back = leaving_direction(&e.piece, false, delta).angle();
        let mut best = None;
        let mut best_cw = f64::INFINITY;
        for &c in cands {
            let dir = leaving_direction(&half[c].piece, true, delta).angle();
            let mut cw = (back - dir).rem_euclid(TAU);
            if cw < 1e-12 {
                cw = TAU;
            }
            if cw < best_cw {
                best_cw = cw;
                best = Some(c);
            }
        }
        Ok(best.expect("non-empty candidate list"))
    };

    let mut used = vec![false; half.len()];
    let mut loops = Vec::new();
    for start in 0..half.len() {
        if used[start] {
            continue;
        }
        let mut lp = vec![start];
        used[start] = true;
        let mut cur = start;
        loop {
            let nxt = next_of(cur)?;
            if nxt == start {
                break;
            }
            if used[nxt] {
                return Err(RegionError::Tracing(format!(
                    "piece {nxt} reached twice while tracing from {start}"
                )));
            }
            used[nxt] = true;
            lp.push(nxt);
            cur = nxt;
        }
        loops.push(lp);
    }
    Ok(loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Arc;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square(lo: f64, hi: f64) -> Vec<TaggedPiece> {
        let c = [p(lo, lo), p(hi, lo), p(hi, hi), p(lo, hi)];
        (0..4)
            .map(|i| TaggedPiece::new(PathPiece::seg(c[i], c[(i + 1) % 4]), Tag::Obstacle))
            .collect()
    }

    #[test]
    fn square_minus_disc_has_one_hole() {
        let mut curves = square(0.0, 10.0);
        curves.push(TaggedPiece::new(
            PathPiece::Arc(Arc::circle(p(5., 5.), 2.0)),
            Tag::Disc(0),
        ));
        let regions = overlay(&curves, |q| {
            q.x > 0.0 && q.x < 10.0 && q.y > 0.0 && q.y < 10.0 && q.dist(p(5., 5.)) > 2.0
        })
        .unwrap();
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].holes.len(), 1);
        assert!((regions[0].area - (100.0 - 4.0 * PI)).abs() < 1e-9);
        assert!(regions[0].contains(p(1., 1.)));
        assert!(!regions[0].contains(p(5., 5.)));
    }

    #[test]
    fn disc_clipped_by_square() {
        let mut curves = square(0.0, 10.0);
        curves.push(TaggedPiece::new(
            PathPiece::Arc(Arc::circle(p(1., 5.), 2.0)),
            Tag::Disc(0),
        ));
        let regions = overlay(&curves, |q| {
            q.x > 0.0 && q.x < 10.0 && q.y > 0.0 && q.y < 10.0 && q.dist(p(1., 5.)) < 2.0
        })
        .unwrap();
        assert_eq!(regions.len(), 1);
        assert!(regions[0].holes.is_empty());
        // Disc minus the circular segment beyond x = 0 (distance 1 from center).
        let seg = 4.0 * (2.0 * PI / 3.0) / 2.0 - 0.5 * 4.0 * (2.0 * PI / 3.0).sin();
        assert!((regions[0].area - (4.0 * PI - seg)).abs() < 1e-9);
        let runs = regions[0].outer.tag_runs(Tag::Disc(0));
        assert_eq!(runs.len(), 1);
    }

    #[test]
    fn disc_splits_strip_into_two() {
        let c = [p(0., 0.), p(10., 0.), p(10., 3.), p(0., 3.)];
        let mut curves: Vec<TaggedPiece> = (0..4)
            .map(|i| TaggedPiece::new(PathPiece::seg(c[i], c[(i + 1) % 4]), Tag::Obstacle))
            .collect();
        curves.push(TaggedPiece::new(
            PathPiece::Arc(Arc::circle(p(5., 1.5), 2.0)),
            Tag::Disc(3),
        ));
        let regions = overlay(&curves, |q| {
            q.x > 0.0 && q.x < 10.0 && q.y > 0.0 && q.y < 3.0 && q.dist(p(5., 1.5)) > 2.0
        })
        .unwrap();
        assert_eq!(regions.len(), 2);
        for r in &regions {
            assert_eq!(r.outer.tag_runs(Tag::Disc(3)).len(), 1);
        }
    }

    #[test]
    fn winding_of_full_circle_and_arc_loop() {
        let circle = Chain::new(vec![TaggedPiece::new(
            PathPiece::Arc(Arc::circle(p(0., 0.), 1.0)),
            Tag::Obstacle,
        )]);
        assert_eq!(circle.winding(p(0.2, 0.3)), 1);
        assert_eq!(circle.winding(p(2., 0.)), 0);
        // Half disc: arc from (1,0) to (−1,0) then the diameter back.
        let half = Chain::new(vec![
            TaggedPiece::new(PathPiece::Arc(Arc::new(p(0., 0.), 1.0, 0.0, PI)), Tag::Obstacle),
            TaggedPiece::new(PathPiece::seg(p(-1., 0.), p(1., 0.)), Tag::Obstacle),
        ]);
        assert_eq!(half.winding(p(0., 0.5)), 1);
        assert_eq!(half.winding(p(0., -0.5)), 0);
        assert!((half.signed_area() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn portion_wraps_around_start() {
        let chain = Chain::new(square(0.0, 1.0));
        let part = chain.portion(3.5, 0.5);
        assert_eq!(part.len(), 2);
        assert!(part[0].start().approx_eq(p(0., 0.5), 1e-12));
        assert!(part[1].end().approx_eq(p(0.5, 0.), 1e-12));
        assert!((chain.position_of(p(1., 0.25), 1e-9).unwrap() - 1.25).abs() < 1e-12);
    }
}
