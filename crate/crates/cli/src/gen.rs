//! Scene generators: random rectilinear rooms, the two-robot corridor,
//! the dumbbell and the single-corridor worst case for pebble moves.

use std::collections::{HashMap, VecDeque};

use discplan::free_space::FreeSpace;
use discplan::geom::{Point, Polygon};
use discplan::planner::{Scene, SEPARATION};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Below this start separation the two-robot corridor has no solution.
pub const CORRIDOR_THRESHOLD: f64 = 4.0 * std::f64::consts::SQRT_2 - 2.0;

/// Extra distance kept between generated configurations.
pub const SEPARATION_MARGIN: f64 = 0.05;
/// Extra clearance kept from the free-space boundary.
pub const CLEARANCE_MARGIN: f64 = 0.02;
pub const MAX_ATTEMPTS: usize = 10_000;

const NARROW: (f64, f64) = (0.5, 1.9);
const WIDE_MIN: f64 = 2.6;
const WIDE_MAX_START: f64 = 6.0;
const WIDE_GROWTH: f64 = 1.5;
const MAX_RETRIES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Random,
    Corridor,
    Dumbbell,
    PathWorstcase,
    Pinched,
}

impl std::str::FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(GenKind::Random),
            "corridor" => Ok(GenKind::Corridor),
            "dumbbell" => Ok(GenKind::Dumbbell),
            "path-worstcase" => Ok(GenKind::PathWorstcase),
            "pinched" => Ok(GenKind::Pinched),
            _ => Err(format!(
                "unknown kind {s:?} (expected random, corridor, dumbbell, path-worstcase or pinched)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    /// Target polygon vertex count (random).
    pub n: usize,
    /// Number of robots (random, path-worstcase).
    pub m: usize,
    /// Start separation is `2 + rho` (corridor).
    pub rho: f64,
    /// Corridor width (corridor, dumbbell).
    pub width: Option<f64>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            n: 40,
            m: 4,
            rho: CORRIDOR_THRESHOLD - 2.0 + 0.1,
            width: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub scene: Scene,
    pub name: String,
    pub warnings: Vec<String>,
}

pub fn generate(kind: GenKind, params: &GenParams) -> Result<Generated, GenError> {
    let scene = match kind {
        GenKind::Random => random_scene(params)?,
        GenKind::Corridor => corridor(params.rho, params.width.unwrap_or(2.05))?,
        GenKind::Dumbbell => dumbbell(params.width.unwrap_or(1.9))?,
        GenKind::PathWorstcase => path_worstcase(params.m)?,
        GenKind::Pinched => pinched_scene(params)?,
    };
    let name = match kind {
        GenKind::Random => format!("random-n{}-m{}-seed{}", params.n, params.m, params.seed),
        GenKind::Corridor => format!("corridor-rho{}", params.rho),
        GenKind::Dumbbell => format!("dumbbell-w{}", params.width.unwrap_or(1.9)),
        GenKind::PathWorstcase => format!("path-worstcase-m{}", params.m),
        GenKind::Pinched => format!("pinched-n{}-m{}-seed{}", params.n, params.m, params.seed),
    };
    let warnings = separation_warnings(&scene);
    Ok(Generated { scene, name, warnings })
}

/// Smallest distance between two starts or two targets, and between a
/// start and a target at different positions.
pub fn min_separation(scene: &Scene) -> Option<f64> {
    let pts: Vec<Point> = scene.starts.iter().chain(&scene.targets).copied().collect();
    let mut best: Option<f64> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(pts[j]);
            let same_role = (i < scene.starts.len()) == (j < scene.starts.len());
            if d == 0.0 && !same_role {
                continue;
            }
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

pub fn separation_warnings(scene: &Scene) -> Vec<String> {
    let Some(sep) = min_separation(scene) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if sep < SEPARATION {
        out.push(format!(
            "separation {sep:.6} is below 4; the planner will refuse this scene"
        ));
        if sep < CORRIDOR_THRESHOLD {
            out.push(format!(
                "separation {sep:.6} is below 4*sqrt(2) - 2 = {CORRIDOR_THRESHOLD:.6}; \
                 scenes like this can be unsolvable"
            ));
        }
    }
    out
}

fn poly(pts: &[(f64, f64)]) -> Result<Polygon, GenError> {
    Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
        .map_err(|e| GenError::GenerationFailed(e.to_string()))
}

/// Two robots side by side in a room of width `4 + rho` whose floor opens
/// into a corridor. Both must leave through the corridor.
pub fn corridor(rho: f64, width: f64) -> Result<Scene, GenError> {
    if !(rho > 0.0 && rho < 2.0) {
        return Err(GenError::BadParameter(format!("rho = {rho} must lie in (0, 2)")));
    }
    if !(width >= 2.0 && width <= 2.0 + rho / 2.0) {
        return Err(GenError::BadParameter(format!(
            "corridor width {width} must lie in [2, 2 + rho/2]"
        )));
    }
    let room_w = 4.0 + rho;
    let room_h = 3.0;
    let depth = 12.0;
    // The left robot rolls along the floor to the corridor's near corner.
    let b = 1.0 + rho / 2.0;
    let c = b + width;
    let polygon = poly(&[
        (0.0, 0.0),
        (b, 0.0),
        (b, -depth),
        (c, -depth),
        (c, 0.0),
        (room_w, 0.0),
        (room_w, room_h),
        (0.0, room_h),
    ])?;
    let mid = (b + c) / 2.0;
    Ok(Scene {
        polygon,
        starts: vec![Point::new(1.0, 1.0), Point::new(3.0 + rho, 1.0)],
        targets: vec![Point::new(mid, -4.0), Point::new(mid, -9.0)],
    })
}

/// Two 6×6 rooms joined by a horizontal corridor of the given width, one
/// robot moving from the left room to the right one.
pub fn dumbbell(width: f64) -> Result<Scene, GenError> {
    if !(width > 0.0 && width < 6.0) {
        return Err(GenError::BadParameter(format!("width {width} must lie in (0, 6)")));
    }
    let (lo, hi) = (3.0 - width / 2.0, 3.0 + width / 2.0);
    let polygon = poly(&[
        (0., 0.),
        (6., 0.),
        (6., lo),
        (9., lo),
        (9., 0.),
        (15., 0.),
        (15., 6.),
        (9., 6.),
        (9., hi),
        (6., hi),
        (6., 6.),
        (0., 6.),
    ])?;
    Ok(Scene {
        polygon,
        starts: vec![Point::new(3., 3.)],
        targets: vec![Point::new(12., 3.)],
    })
}

/// Spacing of configurations in the worst-case corridor.
pub const PATH_SPACING: f64 = 4.4;

/// A height-4 corridor holding `m` starts followed by `m` targets in one
/// row, so the motion graph is a path.
pub fn path_worstcase(m: usize) -> Result<Scene, GenError> {
    if m == 0 {
        return Err(GenError::BadParameter("m must be positive".into()));
    }
    let len = PATH_SPACING * (2 * m) as f64;
    let polygon = poly(&[(0., 0.), (len, 0.), (len, 4.), (0., 4.)])?;
    let at = |i: usize| Point::new(PATH_SPACING * (i as f64 + 0.5), 2.0);
    Ok(Scene {
        polygon,
        starts: (0..m).map(at).collect(),
        targets: (m..2 * m).map(at).collect(),
    })
}

fn sample_strips(rng: &mut ChaCha8Rng, count: usize, wide_max: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    for i in 0..count {
        let prev_narrow = i > 0 && out[i - 1] < WIDE_MIN;
        if !prev_narrow && rng.gen_bool(0.3) {
            out.push(rng.gen_range(NARROW.0..NARROW.1));
        } else {
            out.push(rng.gen_range(WIDE_MIN..wide_max));
        }
    }
    out
}

/// A simply connected set of grid cells whose boundary is one simple loop.
struct Polyomino {
    cols: usize,
    rows: usize,
    cells: Vec<bool>,
}

impl Polyomino {
    fn get(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.cols && (j as usize) < self.rows && self.cells[j as usize * self.cols + i as usize]
    }

    /// Pattern of the four cells around grid vertex `(i, j)`.
    fn around(&self, i: isize, j: isize) -> [bool; 4] {
        [self.get(i - 1, j - 1), self.get(i, j - 1), self.get(i, j), self.get(i - 1, j)]
    }

    /// Corner count, or `None` when two cells touch only at a vertex.
    fn corners(&self) -> Option<usize> {
        let mut n = 0;
        for j in 0..=self.rows as isize {
            for i in 0..=self.cols as isize {
                let a = self.around(i, j);
                let k = a.iter().filter(|&&b| b).count();
                if k == 2 && a[0] == a[2] {
                    return None;
                }
                if k == 1 || k == 3 {
                    n += 1;
                }
            }
        }
        Some(n)
    }

    fn has_hole(&self) -> bool {
        let (w, h) = (self.cols + 2, self.rows + 2);
        let mut seen = vec![false; w * h];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(k) = queue.pop_front() {
            let (i, j) = ((k % w) as isize, (k / w) as isize);
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= w as isize || b >= h as isize {
                    continue;
                }
                let q = b as usize * w + a as usize;
                if !seen[q] && !self.get(a - 1, b - 1) {
                    seen[q] = true;
                    reached += 1;
                    queue.push_back(q);
                }
            }
        }
        let empty = self.cells.iter().filter(|&&c| !c).count() + 2 * (w + h) - 4;
        reached != empty
    }

    /// Boundary corners counter-clockwise, as grid vertex indices.
    fn outline(&self) -> Vec<(usize, usize)> {
        let mut next: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for j in 0..self.rows {
            for i in 0..self.cols {
                if !self.cells[j * self.cols + i] {
                    continue;
                }
                let (a, b) = (i as isize, j as isize);
                if !self.get(a, b - 1) {
                    next.insert((i, j), (i + 1, j));
                }
                if !self.get(a + 1, b) {
                    next.insert((i + 1, j), (i + 1, j + 1));
                }
                if !self.get(a, b + 1) {
                    next.insert((i + 1, j + 1), (i, j + 1));
                }
                if !self.get(a - 1, b) {
                    next.insert((i, j + 1), (i, j));
                }
            }
        }
        let start = *next.keys().min().expect("non-empty polyomino");
        let mut walk = vec![start];
        let mut cur = next[&start];
        while cur != start {
            walk.push(cur);
            cur = next[&cur];
        }
        let n = walk.len();
        (0..n)
            .filter(|&k| {
                let (p, q, r) = (walk[(k + n - 1) % n], walk[k], walk[(k + 1) % n]);
                let d1 = (q.0 as isize - p.0 as isize, q.1 as isize - p.1 as isize);
                let d2 = (r.0 as isize - q.0 as isize, r.1 as isize - q.1 as isize);
                d1 != d2
            })
            .map(|k| walk[k])
            .collect()
    }
}

/// Grows a random rectilinear polygon with about `n` vertices on a grid of
/// mixed narrow and wide strips.
pub fn random_polygon(rng: &mut ChaCha8Rng, n: usize, wide_max: f64) -> Result<Polygon, GenError> {
    if n < 4 {
        return Err(GenError::BadParameter(format!("n = {n} must be at least 4")));
    }
    let side = n / 2 + 2;
    let widths = sample_strips(rng, side, wide_max);
    let heights = sample_strips(rng, side, wide_max);
    let mut shape = Polyomino {
        cols: side,
        rows: side,
        cells: vec![false; side * side],
    };
    let wide: Vec<usize> = (0..side * side)
        .filter(|&k| widths[k % side] >= WIDE_MIN && heights[k / side] >= WIDE_MIN)
        .collect();
    let seed_cell = wide.get(rng.gen_range(0..wide.len().max(1))).copied().unwrap_or(0);
    shape.cells[seed_cell] = true;
    let mut corners = 4;
    let mut failures = 0;
    while corners + 1 < n && failures < 40 * n {
        let present: Vec<usize> = (0..side * side).filter(|&k| shape.cells[k]).collect();
        let k = present[rng.gen_range(0..present.len())];
        let (i, j) = ((k % side) as isize, (k / side) as isize);
        let (di, dj) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
        let (a, b) = (i + di, j + dj);
        if a < 0 || b < 0 || a >= side as isize || b >= side as isize || shape.get(a, b) {
            failures += 1;
            continue;
        }
        let q = b as usize * side + a as usize;
        shape.cells[q] = true;
        match shape.corners() {
            Some(c) if c <= n && !shape.has_hole() => corners = c,
            _ => {
                shape.cells[q] = false;
                failures += 1;
            }
        }
    }
    let xs: Vec<f64> = std::iter::once(0.0)
        .chain(widths.iter().scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        }))
        .collect();
    let ys: Vec<f64> = std::iter::once(0.0)
        .chain(heights.iter().scan(0.0, |acc, h| {
            *acc += h;
            Some(*acc)
        }))
        .collect();
    let pts = shape
        .outline()
        .into_iter()
        .map(|(i, j)| Point::new(xs[i], ys[j]))
        .collect();
    Polygon::new(pts).map_err(|e| GenError::GenerationFailed(e.to_string()))
}

fn sample_config(
    rng: &mut ChaCha8Rng,
    fs: &FreeSpace,
    component: usize,
    placed: &[Point],
    attempts: &mut usize,
) -> Option<Point> {
    let (lo, hi) = fs.components()[component].boundary.bbox();
    while *attempts < MAX_ATTEMPTS {
        *attempts += 1;
        let p = Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if fs.clearance(p) < 1.0 + CLEARANCE_MARGIN || fs.locate(p) != Some(component) {
            continue;
        }
        if placed.iter().all(|q| q.dist(p) >= SEPARATION + SEPARATION_MARGIN) {
            return Some(p);
        }
    }
    None
}

fn pick_by_area(rng: &mut ChaCha8Rng, areas: &[f64], total: f64) -> usize {
    let mut pick = rng.gen_range(0.0..total);
    areas
        .iter()
        .position(|&a| {
            pick -= a;
            pick < 0.0
        })
        .unwrap_or(areas.len() - 1)
}

/// Places `m` start/target pairs, each pair inside one free-space
/// component chosen with probability proportional to its area.
pub fn place_pairs(rng: &mut ChaCha8Rng, fs: &FreeSpace, m: usize) -> Result<(Vec<Point>, Vec<Point>), GenError> {
    let areas: Vec<f64> = fs.components().iter().map(|c| c.area).collect();
    let total: f64 = areas.iter().sum();
    if total <= 0.0 {
        return Err(GenError::GenerationFailed("empty free space".into()));
    }
    let mut attempts = 0;
    let (mut starts, mut targets) = (Vec::with_capacity(m), Vec::with_capacity(m));
    let mut placed = Vec::with_capacity(2 * m);
    while starts.len() < m {
        if attempts >= MAX_ATTEMPTS {
            return Err(GenError::GenerationFailed(format!(
                "placed {} of {m} pairs in {MAX_ATTEMPTS} attempts",
                starts.len()
            )));
        }
        let comp = pick_by_area(rng, &areas, total);
        let Some(s) = sample_config(rng, fs, comp, &placed, &mut attempts) else {
            continue;
        };
        placed.push(s);
        let Some(t) = sample_config(rng, fs, comp, &placed, &mut attempts) else {
            placed.pop();
            continue;
        };
        placed.push(t);
        starts.push(s);
        targets.push(t);
    }
    Ok((starts, targets))
}

/// Random rectilinear scene with `m` robots. Retries with larger rooms when
/// the robots do not fit.
pub fn random_scene(params: &GenParams) -> Result<Scene, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut wide_max = WIDE_MAX_START;
    let mut last = String::new();
    for _ in 0..MAX_RETRIES {
        let polygon = random_polygon(&mut rng, params.n, wide_max)?;
        let fs = FreeSpace::compute(&polygon).map_err(|e| GenError::GenerationFailed(e.to_string()))?;
        match place_pairs(&mut rng, &fs, params.m) {
            Ok((starts, targets)) => {
                return Ok(Scene {
                    polygon,
                    starts,
                    targets,
                })
            }
            Err(e) => last = e.to_string(),
        }
        wide_max *= WIDE_GROWTH;
    }
    Err(GenError::GenerationFailed(last))
}

const NEAR_TRIES: usize = 200;
const POLYGON_TRIES: usize = 500;
const HOT_SAMPLES: usize = 400;

/// A boundary point of component `home` lying closer than the collision
/// radius to another component, with the distance to spare.
#[derive(Clone, Copy)]
struct HotSpot {
    home: usize,
    at: Point,
    reach: f64,
}

fn hot_spots(fs: &FreeSpace) -> Vec<HotSpot> {
    let comps = fs.components();
    let mut out = Vec::new();
    for c in comps {
        let len = c.boundary.length();
        for k in 0..HOT_SAMPLES {
            let at = c.boundary.point_at(len * k as f64 / HOT_SAMPLES as f64);
            let gap = comps
                .iter()
                .filter(|o| o.id != c.id)
                .map(|o| o.boundary.distance(at))
                .fold(f64::INFINITY, f64::min);
            if gap < SEPARATION / 2.0 {
                out.push(HotSpot {
                    home: c.id,
                    at,
                    reach: SEPARATION / 2.0 - gap,
                });
            }
        }
    }
    out
}

/// Draws a configuration whose collision disc reaches into a component
/// other than its own, optionally restricted to component `want`.
fn sample_near(
    rng: &mut ChaCha8Rng,
    fs: &FreeSpace,
    hot: &[HotSpot],
    want: Option<usize>,
    placed: &[Point],
) -> Option<(usize, Point)> {
    let spots: Vec<&HotSpot> = hot.iter().filter(|h| want.map_or(true, |w| h.home == w)).collect();
    if spots.is_empty() {
        return None;
    }
    for _ in 0..NEAR_TRIES {
        let h = spots[rng.gen_range(0..spots.len())];
        let r = rng.gen_range(0.0..h.reach);
        let p = Point::from_polar(h.at, r, rng.gen_range(0.0..std::f64::consts::TAU));
        if fs.locate(p) != Some(h.home) || fs.clearance(p) < 1.0 + CLEARANCE_MARGIN {
            continue;
        }
        if placed.iter().all(|q| q.dist(p) >= SEPARATION + SEPARATION_MARGIN) {
            return Some((h.home, p));
        }
    }
    None
}

/// Random rectilinear scene with at least two free-space components, some
/// of them within reach of each other, where each configuration is drawn
/// near a foreign component half of the time.
/// Uniform placement almost never puts a robot within reach of another
/// component, so this is the scene family for interference testing.
pub fn pinched_scene(params: &GenParams) -> Result<Scene, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut wide_max = WIDE_MAX_START;
    for _ in 0..POLYGON_TRIES {
        let polygon = random_polygon(&mut rng, params.n, wide_max)?;
        let fs = FreeSpace::compute(&polygon).map_err(|e| GenError::GenerationFailed(e.to_string()))?;
        let hot = hot_spots(&fs);
        if fs.components().len() < 2 || hot.is_empty() {
            continue;
        }
        let areas: Vec<f64> = fs.components().iter().map(|c| c.area).collect();
        let total: f64 = areas.iter().sum();
        let mut attempts = 0;
        let (mut starts, mut targets, mut placed) = (Vec::new(), Vec::new(), Vec::new());
        while starts.len() < params.m && attempts < MAX_ATTEMPTS {
            attempts += 1;
            let near = if rng.gen_bool(0.5) { sample_near(&mut rng, &fs, &hot, None, &placed) } else { None };
            let (comp, s) = match near {
                Some(found) => found,
                None => {
                    let comp = pick_by_area(&mut rng, &areas, total);
                    match sample_config(&mut rng, &fs, comp, &placed, &mut attempts) {
                        Some(s) => (comp, s),
                        None => continue,
                    }
                }
            };
            placed.push(s);
            let near = if rng.gen_bool(0.5) { sample_near(&mut rng, &fs, &hot, Some(comp), &placed) } else { None };
            let t = near
                .map(|(_, t)| t)
                .or_else(|| sample_config(&mut rng, &fs, comp, &placed, &mut attempts));
            match t {
                Some(t) => {
                    placed.push(t);
                    starts.push(s);
                    targets.push(t);
                }
                None => {
                    placed.pop();
                }
            }
        }
        if starts.len() == params.m {
            return Ok(Scene {
                polygon,
                starts,
                targets,
            });
        }
        wide_max = (wide_max * WIDE_GROWTH).min(WIDE_MAX_START * WIDE_GROWTH.powi(MAX_RETRIES as i32));
    }
    Err(GenError::GenerationFailed(format!(
        "no multi-component polygon fitting {} pairs in {POLYGON_TRIES} tries",
        params.m
    )))
}
