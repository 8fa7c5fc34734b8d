//! Independent checks of a motion plan against the continuous problem,
//! plus brute-force oracles for tests. Only the geometry kernel is shared
//! with the planner.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::geom::{
    distance_piece_segment, distance_point_segment, min_distance_piece_point, point_in_polygon,
    Location, PathPiece, Point, Polygon, EPS_GEOM,
};
use crate::pebble::PebbleProblem;
use crate::planner::{MotionPlan, Scene};

/// Clearance slack for plan validation.
pub const EPS_VAL: f64 = 1e-6;

const AUDIT_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    ObstacleClearance,
    RobotClearance,
    Discontinuity,
    WrongFinalOccupancy,
    SimultaneousMotion,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    /// `None` for checks on the final state.
    pub move_index: Option<usize>,
    pub kind: ViolationKind,
    pub worst_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub min_obstacle_clearance: f64,
    pub min_robot_clearance: f64,
    /// Largest difference between the sampled and the exact obstacle
    /// clearance of a move. Never negative for a sound exact minimum.
    pub max_sample_gap: f64,
    /// Starts and targets whose clearance is exactly 1.
    pub boundary_configs: Vec<Point>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValidationError {
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
}

/// Clearance of `p` from the workspace boundary, negative outside.
fn signed_clearance(poly: &Polygon, p: Point) -> f64 {
    let d = poly.boundary_distance(p);
    match point_in_polygon(p, poly) {
        Location::Outside => -d,
        _ => d,
    }
}

fn exact_piece_clearance(poly: &Polygon, piece: &PathPiece) -> f64 {
    let d = poly
        .edges()
        .map(|e| distance_piece_segment(piece, &e))
        .fold(f64::INFINITY, f64::min);
    // A piece at positive distance from every edge lies entirely on one
    // side of the boundary.
    if d > 0.0 && point_in_polygon(piece.start(), poly) == Location::Outside {
        -d
    } else {
        d
    }
}

/// Sampled minimum clearance along a path, refined around the best sample.
fn sampled_clearance(poly: &Polygon, path: &[PathPiece]) -> f64 {
    let total: f64 = path.iter().map(|p| p.length()).sum();
    let mut best = f64::INFINITY;
    for piece in path {
        let share = if total > 0.0 { piece.length() / total } else { 1.0 };
        let n = ((AUDIT_SAMPLES as f64 * share).ceil() as usize).max(2);
        let f = |t: f64| signed_clearance(poly, piece.point_at(t));
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut piece_best = f64::INFINITY;
        for _ in 0..6 {
            let step = (hi - lo) / n as f64;
            let mut arg = lo;
            for i in 0..=n {
                let t = lo + step * i as f64;
                let v = f(t);
                if v < piece_best {
                    piece_best = v;
                    arg = t;
                }
            }
            lo = (arg - step).max(0.0);
            hi = (arg + step).min(1.0);
        }
        best = best.min(piece_best);
    }
    best
}

fn check_move_shape(i: usize, path: &[PathPiece]) -> Result<(), ValidationError> {
    if path.is_empty() {
        return Err(ValidationError::MalformedPlan(format!("move {i} has an empty path")));
    }
    if let Some(bad) = path.iter().find(|p| !p.is_finite()) {
        return Err(ValidationError::MalformedPlan(format!(
            "move {i} has a non-finite piece {bad:?}"
        )));
    }
    Ok(())
}

pub fn validate(scene: &Scene, plan: &MotionPlan, eps: f64) -> Result<ValidationReport, ValidationError> {
    let poly = &scene.polygon;
    let mut violations = Vec::new();
    let mut min_obstacle = f64::INFINITY;
    let mut min_robot = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    let mut parked = scene.starts.clone();

    for (i, mv) in plan.moves.iter().enumerate() {
        check_move_shape(i, &mv.path)?;
        if !mv.from.is_finite() || !mv.to.is_finite() {
            return Err(ValidationError::MalformedPlan(format!("move {i} has a non-finite endpoint")));
        }
        let mut flag = |kind, worst_value| {
            violations.push(Violation {
                move_index: Some(i),
                kind,
                worst_value,
            })
        };

        let source = parked
            .iter()
            .enumerate()
            .map(|(k, q)| (k, q.dist(mv.from)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let mover = match source {
            Some((k, d)) if d <= eps => Some(k),
            other => {
                flag(ViolationKind::SimultaneousMotion, other.map_or(f64::INFINITY, |o| o.1));
                None
            }
        };

        let mut gap = mv.path[0].start().dist(mv.from);
        for w in mv.path.windows(2) {
            gap = gap.max(w[0].end().dist(w[1].start()));
        }
        gap = gap.max(mv.path[mv.path.len() - 1].end().dist(mv.to));
        if gap > eps {
            flag(ViolationKind::Discontinuity, gap);
        }

        let exact = mv
            .path
            .iter()
            .map(|p| exact_piece_clearance(poly, p))
            .fold(f64::INFINITY, f64::min);
        let sampled = sampled_clearance(poly, &mv.path);
        max_gap = max_gap.max(sampled - exact);
        min_obstacle = min_obstacle.min(exact);
        if exact < 1.0 - eps {
            flag(ViolationKind::ObstacleClearance, exact);
        }

        let robot = parked
            .iter()
            .enumerate()
            .filter(|&(k, _)| Some(k) != mover)
            .flat_map(|(_, &q)| mv.path.iter().map(move |p| min_distance_piece_point(p, q)))
            .fold(f64::INFINITY, f64::min);
        min_robot = min_robot.min(robot);
        if robot < 2.0 - eps {
            flag(ViolationKind::RobotClearance, robot);
        }

        if let Some(k) = mover {
            parked[k] = mv.to;
        }
    }

    let mut unused: Vec<Point> = parked;
    let mut worst: f64 = 0.0;
    let mut wrong = scene.targets.len() != unused.len();
    for &t in &scene.targets {
        let nearest = unused
            .iter()
            .enumerate()
            .map(|(k, q)| (k, q.dist(t)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((k, d)) => {
                worst = worst.max(d);
                if d <= EPS_GEOM {
                    unused.swap_remove(k);
                } else {
                    wrong = true;
                }
            }
            None => {
                worst = f64::INFINITY;
                wrong = true;
            }
        }
    }
    if wrong {
        violations.push(Violation {
            move_index: None,
            kind: ViolationKind::WrongFinalOccupancy,
            worst_value: worst,
        });
    }

    let boundary_configs = scene
        .starts
        .iter()
        .chain(&scene.targets)
        .copied()
        .filter(|&p| (signed_clearance(poly, p) - 1.0).abs() <= EPS_GEOM)
        .collect();

    Ok(ValidationReport {
        violations,
        min_obstacle_clearance: min_obstacle,
        min_robot_clearance: min_robot,
        max_sample_gap: max_gap,
        boundary_configs,
    })
}

/// Free-space raster: grid point `(i, j)` sits at `origin + res·(i, j)`.
#[derive(Clone, Debug)]
pub struct GridLabels {
    pub origin: Point,
    pub resolution: f64,
    pub nx: usize,
    pub ny: usize,
    /// Component id per grid point, `-1` when not free.
    pub labels: Vec<i32>,
    /// Distance to the boundary, exact below `NEAR_CAP` and capped there.
    near: Vec<f32>,
    pub component_count: usize,
}

const NEAR_CAP: f64 = 1.25;

impl GridLabels {
    pub fn point(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64, j as f64) * self.resolution
    }

    pub fn label(&self, i: usize, j: usize) -> Option<usize> {
        let l = self.labels[j * self.nx + i];
        (l >= 0).then_some(l as usize)
    }

    /// Boundary distance of a grid point, capped a little above 1.
    pub fn capped_clearance(&self, i: usize, j: usize) -> f64 {
        self.near[j * self.nx + i] as f64
    }

    /// Grid index closest to `p`, if `p` lies inside the raster.
    pub fn index_of(&self, p: Point) -> Option<(usize, usize)> {
        let q = (p - self.origin) / self.resolution;
        let (i, j) = (q.x.round(), q.y.round());
        (i >= 0.0 && j >= 0.0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then_some((i as usize, j as usize))
    }

    pub fn free_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l >= 0).count()
    }

    pub fn free_area(&self) -> f64 {
        self.free_count() as f64 * self.resolution * self.resolution
    }

    /// Number of 4-connected pieces formed by grid points with label
    /// `label` that lie within `radius - margin` of `x` and have clearance
    /// at least `1 + margin`.
    pub fn disc_piece_count(&self, label: usize, x: Point, radius: f64, margin: f64) -> usize {
        let r = radius - margin;
        let h = self.resolution;
        let clamp_i = |v: f64, n: usize| (v.max(0.0) as usize).min(n - 1);
        let i0 = clamp_i(((x.x - r - self.origin.x) / h).floor(), self.nx);
        let i1 = clamp_i(((x.x + r - self.origin.x) / h).ceil(), self.nx);
        let j0 = clamp_i(((x.y - r - self.origin.y) / h).floor(), self.ny);
        let j1 = clamp_i(((x.y + r - self.origin.y) / h).ceil(), self.ny);
        let w = i1 - i0 + 1;
        let core = |i: usize, j: usize| {
            self.label(i, j) == Some(label)
                && self.capped_clearance(i, j) >= 1.0 + margin
                && self.point(i, j).dist(x) < r
        };
        let mut seen = vec![false; w * (j1 - j0 + 1)];
        let mut pieces = 0;
        for j in j0..=j1 {
            for i in i0..=i1 {
                if seen[(j - j0) * w + (i - i0)] || !core(i, j) {
                    continue;
                }
                pieces += 1;
                let mut queue = VecDeque::from([(i, j)]);
                seen[(j - j0) * w + (i - i0)] = true;
                while let Some((a, b)) = queue.pop_front() {
                    let mut visit = |c: usize, d: usize| {
                        let slot = &mut seen[(d - j0) * w + (c - i0)];
                        if !*slot && core(c, d) {
                            *slot = true;
                            queue.push_back((c, d));
                        }
                    };
                    if a > i0 {
                        visit(a - 1, b);
                    }
                    if a < i1 {
                        visit(a + 1, b);
                    }
                    if b > j0 {
                        visit(a, b - 1);
                    }
                    if b < j1 {
                        visit(a, b + 1);
                    }
                }
            }
        }
        pieces
    }
}

/// Rasterizes {p inside the polygon with boundary distance ≥ 1} and labels
/// its 4-connected components in scan order.
pub fn grid_free_space_oracle(poly: &Polygon, resolution: f64) -> GridLabels {
    let h = resolution;
    let (lo, hi) = poly.bbox();
    let nx = ((hi.x - lo.x) / h).ceil() as usize + 1;
    let ny = ((hi.y - lo.y) / h).ceil() as usize + 1;
    let mut inside = vec![false; nx * ny];
    let verts = poly.vertices();
    for j in 0..ny {
        let y = lo.y + j as f64 * h;
        let mut xs: Vec<f64> = Vec::new();
        for k in 0..verts.len() {
            let (a, b) = (verts[k], verts[(k + 1) % verts.len()]);
            if (a.y > y) != (b.y > y) {
                xs.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let i0 = ((pair[0] - lo.x) / h).ceil().max(0.0) as usize;
            let i1 = (((pair[1] - lo.x) / h).floor() as usize).min(nx - 1);
            for i in i0..=i1 {
                inside[j * nx + i] = true;
            }
        }
    }

    let mut near = vec![NEAR_CAP as f32; nx * ny];
    for e in poly.edges() {
        let (a, b) = (e.a, e.b);
        let i0 = ((a.x.min(b.x) - NEAR_CAP - lo.x) / h).floor().max(0.0) as usize;
        let i1 = (((a.x.max(b.x) + NEAR_CAP - lo.x) / h).ceil() as usize).min(nx - 1);
        let j0 = ((a.y.min(b.y) - NEAR_CAP - lo.y) / h).floor().max(0.0) as usize;
        let j1 = (((a.y.max(b.y) + NEAR_CAP - lo.y) / h).ceil() as usize).min(ny - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let p = lo + Point::new(i as f64, j as f64) * h;
                let d = distance_point_segment(p, &e);
                let slot = &mut near[j * nx + i];
                if d < *slot as f64 {
                    *slot = d as f32;
                }
            }
        }
    }

    let mut labels = vec![-1i32; nx * ny];
    let free = |k: usize| inside[k] && near[k] as f64 >= 1.0;
    let mut count = 0usize;
    for start in 0..nx * ny {
        if labels[start] >= 0 || !free(start) {
            continue;
        }
        let id = count as i32;
        count += 1;
        labels[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % nx, k / nx);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - 1);
            }
            if i + 1 < nx {
                nb.push(k + 1);
            }
            if j > 0 {
                nb.push(k - nx);
            }
            if j + 1 < ny {
                nb.push(k + nx);
            }
            for q in nb {
                if labels[q] < 0 && free(q) {
                    labels[q] = id;
                    queue.push_back(q);
                }
            }
        }
    }
    GridLabels {
        origin: lo,
        resolution: h,
        nx,
        ny,
        labels,
        near,
        component_count: count,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive search ({vertices} vertices, {pebbles} pebbles)")]
    TooLarge { vertices: usize, pebbles: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsOutcome {
    pub solvable: bool,
    /// Shortest sequence of single-edge moves, empty when unsolvable.
    pub witness: Vec<(usize, usize)>,
}

/// Breadth-first search over occupancy sets.
pub fn pebble_bfs_oracle(problem: &PebbleProblem) -> Result<BfsOutcome, OracleError> {
    let n = problem.vertex_count;
    let m = problem.starts.len();
    if n > 16 || m > 6 {
        return Err(OracleError::TooLarge {
            vertices: n,
            pebbles: m,
        });
    }
    let unsolvable = BfsOutcome {
        solvable: false,
        witness: Vec::new(),
    };
    let mask = |vs: &[usize]| vs.iter().fold(0u32, |acc, &v| acc | (1 << v));
    let (start, goal) = (mask(&problem.starts), mask(&problem.targets));
    if start.count_ones() as usize != m || goal.count_ones() != start.count_ones() {
        return Ok(unsolvable);
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &problem.edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut parent: HashMap<u32, (u32, usize, usize)> = HashMap::new();
    parent.insert(start, (start, usize::MAX, usize::MAX));
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            let mut witness = Vec::new();
            let mut s = state;
            while s != start {
                let (prev, a, b) = parent[&s];
                witness.push((a, b));
                s = prev;
            }
            witness.reverse();
            return Ok(BfsOutcome {
                solvable: true,
                witness,
            });
        }
        for a in 0..n {
            if state & (1 << a) == 0 {
                continue;
            }
            for &b in &adj[a] {
                if state & (1 << b) != 0 {
                    continue;
                }
                let next = state & !(1 << a) | (1 << b);
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert((state, a, b));
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(unsolvable)
}
