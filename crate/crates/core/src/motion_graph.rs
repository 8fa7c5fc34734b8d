//! Motion graph of one free-space component.
//!
//! Vertices are the start and target configurations of the component. Two
//! vertices are joined when a robot can travel between them while every
//! other robot sits on some other vertex. Edges come from the subregions
//! left after removing all collision discs: configurations whose disc
//! touches the component boundary get a representative point on the
//! subregion's outer loop, floating ones shoot a ray upwards, and
//! neighbours along the outer loop are connected.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::free_space::{
    CollisionRegion, FreeSpace, FreeSpaceError, PuncturedComponent, Subregion, COLLISION_RADIUS,
};
use crate::geom::{ray_hits_piece, reverse_chain, PathPiece, Point};
use crate::region::{Chain, Tag};

/// Angular step used to nudge a degenerate vertical ray.
pub const RAY_PERTURBATION: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphVertex {
    pub position: Point,
    pub is_start: bool,
    pub is_target: bool,
}

/// Whether a configuration's collision disc touches the component
/// boundary (`Boundary`) or floats inside it (`Floating`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionClass {
    Boundary,
    Floating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    HH,
    BB,
    HB,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathRecipe {
    pub kind: EdgeKind,
    pub pieces: Vec<PathPiece>,
}

/// An edge with a path from `endpoints.0` to `endpoints.1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    pub endpoints: (usize, usize),
    pub subregion: usize,
    pub recipe: PathRecipe,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubregionDecoration {
    pub subregion: usize,
    pub boundary_positions: Vec<usize>,
    pub floating_positions: Vec<usize>,
    /// Representative point of every vertex that has one in this subregion.
    pub beta: Vec<(usize, Point)>,
    /// Vertices in clockwise order of their representative points.
    pub circular_list: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayHit {
    /// The ray reached the subregion's outer loop on the component boundary.
    Gamma,
    /// The ray reached the collision disc of another vertex.
    Disc(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayShot {
    pub point: Point,
    pub hit: RayHit,
}

#[derive(Clone, Debug)]
pub struct MotionGraph {
    pub component: usize,
    pub vertices: Vec<GraphVertex>,
    pub classes: Vec<PositionClass>,
    pub punctured: PuncturedComponent,
    pub decorations: Vec<SubregionDecoration>,
    pub edges: Vec<GraphEdge>,
}

impl MotionGraph {
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| e.endpoints).collect()
    }

    pub fn is_connected(&self) -> bool {
        connected(self.vertices.len(), &self.edge_pairs())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MotionGraphError {
    #[error(transparent)]
    FreeSpace(#[from] FreeSpaceError),
    #[error("vertex {0} is classified as boundary but its disc does not reach the outer loop")]
    NoBoundaryContact(usize),
    #[error("disc of vertex {vertex} meets the outer loop of subregion {subregion} in {runs} intervals")]
    SplitContact {
        vertex: usize,
        subregion: usize,
        runs: usize,
    },
    #[error("upward ray from vertex {0} hits nothing")]
    NoHit(usize),
    #[error("motion graph is disconnected")]
    DisconnectedGraph,
    #[error("edge path could not be assembled: {0}")]
    PathBlocked(String),
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// B/H split for every configuration of a component.
pub fn classify(boundary: &Chain, configs: &[Point]) -> Vec<PositionClass> {
    configs
        .iter()
        .map(|&x| {
            if boundary.distance(x) < COLLISION_RADIUS {
                PositionClass::Boundary
            } else {
                PositionClass::Floating
            }
        })
        .collect()
}

/// B/H split read off the punctured component: a disc forming part of some
/// subregion's outer loop is a boundary vertex. Agrees with [`classify`]
/// except when a disc just touches the component boundary, where the
/// touching point splits off a pocket and the disc is no longer a hole.
pub fn contact_classes(pc: &PuncturedComponent) -> Vec<PositionClass> {
    let mut classes = vec![PositionClass::Floating; pc.configs.len()];
    for s in &pc.subregions {
        for tp in s.region.outer.pieces() {
            if let Tag::Disc(k) = tp.tag {
                classes[k] = PositionClass::Boundary;
            }
        }
    }
    classes
}

/// Per-subregion B/H split, without representative points.
pub fn classify_positions(pc: &PuncturedComponent, classes: &[PositionClass]) -> Vec<SubregionDecoration> {
    pc.subregions
        .iter()
        .map(|s| {
            let (b, h): (Vec<usize>, Vec<usize>) = s
                .adjacent
                .iter()
                .partition(|&&k| classes[k] == PositionClass::Boundary);
            SubregionDecoration {
                subregion: s.id,
                boundary_positions: b,
                floating_positions: h,
                beta: Vec::new(),
                circular_list: Vec::new(),
            }
        })
        .collect()
}

/// Intervals of the outer loop of `sub` formed by the disc of vertex `k`,
/// as `(start position, length)`.
pub fn contact_intervals(sub: &Subregion, k: usize) -> Vec<(f64, f64)> {
    sub.region.outer.tag_runs(Tag::Disc(k))
}

/// Midpoint of the stretch of the outer loop formed by the disc of vertex
/// `k`, returned with its loop position.
pub fn representative_point(sub: &Subregion, k: usize) -> Result<(f64, Point), MotionGraphError> {
    let runs = contact_intervals(sub, k);
    match runs.as_slice() {
        [] => Err(MotionGraphError::NoBoundaryContact(k)),
        [(start, len)] => {
            let gamma = &sub.region.outer;
            let pos = (start + 0.5 * len).rem_euclid(gamma.length());
            Ok((pos, gamma.point_at(pos)))
        }
        _ => Err(MotionGraphError::SplitContact {
            vertex: k,
            subregion: sub.id,
            runs: runs.len(),
        }),
    }
}

/// First boundary point of `sub` above floating vertex `k` at `x`.
pub fn ray_shoot_up(sub: &Subregion, k: usize, x: Point) -> Result<RayShot, MotionGraphError> {
    for attempt in 0..32 {
        let theta = attempt as f64 * RAY_PERTURBATION;
        let dir = Point::new(-theta.sin(), theta.cos());
        let mut best: Option<(f64, f64, &crate::region::TaggedPiece)> = None;
        for chain in sub.region.chains() {
            for tp in chain.pieces() {
                if tp.tag == Tag::Disc(k) {
                    continue;
                }
                for (s, t) in ray_hits_piece(x, dir, &tp.piece) {
                    if s > 1e-9 && best.map_or(true, |b| s < b.0) {
                        best = Some((s, t, tp));
                    }
                }
            }
        }
        let Some((s, t, tp)) = best else {
            return Err(MotionGraphError::NoHit(k));
        };
        let len = tp.piece.length();
        let near_vertex = t * len < 1e-7 || (1.0 - t) * len < 1e-7;
        let grazing = tp.piece.tangent_at(t).cross(dir).abs() < 1e-6;
        if near_vertex || grazing {
            continue;
        }
        let hit = match tp.tag {
            Tag::Obstacle => RayHit::Gamma,
            Tag::Disc(j) => RayHit::Disc(j),
        };
        return Ok(RayShot {
            point: x + dir * s,
            hit,
        });
    }
    Err(MotionGraphError::NoHit(k))
}

/// A curve from `x` to `beta` inside the collision region of `x`: the
/// straight segment when it stays inside, otherwise the segment up to the
/// first boundary crossing followed by the shorter way round the region
/// boundary.
pub fn delta_curve(x: Point, beta: Point, region: &CollisionRegion) -> Vec<PathPiece> {
    let d = beta - x;
    let len = d.norm();
    if len < 1e-12 {
        return Vec::new();
    }
    let dir = d / len;
    let lp = region.boundary();
    let mut first: Option<f64> = None;
    for tp in lp.pieces() {
        if tp.tag != Tag::Obstacle {
            continue;
        }
        for (s, _) in ray_hits_piece(x, dir, &tp.piece) {
            if s > 1e-12 && s < len - 1e-7 && first.map_or(true, |f| s < f) {
                first = Some(s);
            }
        }
    }
    let Some(s) = first else {
        return vec![PathPiece::seg(x, beta)];
    };
    let h = x + dir * s;
    let (Some(ph), Some(pb)) = (lp.position_of(h, 1e-6), lp.position_of(beta, 1e-6)) else {
        return vec![PathPiece::seg(x, beta)];
    };
    let forward = lp.forward_gap(ph, pb);
    let mut out = vec![PathPiece::seg(x, h)];
    if forward <= lp.length() - forward {
        out.extend(lp.portion(ph, pb));
    } else {
        out.extend(reverse_chain(&lp.portion(pb, ph)));
    }
    out
}

/// Joins the lead-in of `a`, a stretch of the outer loop and the reversed
/// lead-in of `b` into one path from `a` to `b`.
fn realize_edge(lead_a: &[PathPiece], gamma_part: Vec<PathPiece>, lead_b: &[PathPiece]) -> Vec<PathPiece> {
    let mut pieces = lead_a.to_vec();
    pieces.extend(gamma_part);
    pieces.extend(reverse_chain(lead_b));
    pieces
}

fn edge_kind(a: PositionClass, b: PositionClass) -> EdgeKind {
    match (a, b) {
        (PositionClass::Floating, PositionClass::Floating) => EdgeKind::HH,
        (PositionClass::Boundary, PositionClass::Boundary) => EdgeKind::BB,
        _ => EdgeKind::HB,
    }
}

struct Builder<'a> {
    fs: &'a FreeSpace,
    configs: Vec<Point>,
    regions: BTreeMap<usize, CollisionRegion>,
}

impl Builder<'_> {
    fn delta(&mut self, k: usize, beta: Point) -> Result<Vec<PathPiece>, MotionGraphError> {
        if !self.regions.contains_key(&k) {
            let r = self.fs.collision_region(self.configs[k])?;
            self.regions.insert(k, r);
        }
        Ok(delta_curve(self.configs[k], beta, &self.regions[&k]))
    }
}

/// Builds the motion graph of component `component` on the given
/// vertices, all of which must lie in that component.
pub fn build_motion_graph(
    fs: &FreeSpace,
    component: usize,
    vertices: Vec<GraphVertex>,
) -> Result<MotionGraph, MotionGraphError> {
    fs.component(component)?;
    let configs: Vec<Point> = vertices.iter().map(|v| v.position).collect();
    let pc = fs.puncture(component, &configs)?;
    let classes = contact_classes(&pc);
    let mut decorations = classify_positions(&pc, &classes);
    let mut builder = Builder {
        fs,
        configs: configs.clone(),
        regions: BTreeMap::new(),
    };
    let mut edges = Vec::new();

    for (sub, deco) in pc.subregions.iter().zip(decorations.iter_mut()) {
        let gamma = &sub.region.outer;
        // (loop position, vertex, lead-in from the vertex to its point on
        // the loop)
        let mut entries: Vec<(f64, usize, Vec<PathPiece>)> = Vec::new();
        for &k in &sub.adjacent {
            let x = configs[k];
            match classes[k] {
                PositionClass::Boundary => {
                    let (pos, beta) = representative_point(sub, k)?;
                    let lead = builder.delta(k, beta)?;
                    deco.beta.push((k, beta));
                    entries.push((pos, k, lead));
                }
                PositionClass::Floating => {
                    let shot = ray_shoot_up(sub, k, x)?;
                    let c = shot.point;
                    match shot.hit {
                        RayHit::Gamma => {
                            let pos = gamma.position_of(c, 1e-6).ok_or_else(|| {
                                MotionGraphError::PathBlocked(format!(
                                    "ray hit of vertex {k} is not on the outer loop"
                                ))
                            })?;
                            deco.beta.push((k, c));
                            entries.push((pos, k, vec![PathPiece::seg(x, c)]));
                        }
                        RayHit::Disc(j) => {
                            let mut pieces = vec![PathPiece::seg(x, c)];
                            match classes[j] {
                                PositionClass::Floating => pieces.push(PathPiece::seg(c, configs[j])),
                                PositionClass::Boundary => {
                                    pieces.extend(reverse_chain(&builder.delta(j, c)?))
                                }
                            }
                            edges.push(GraphEdge {
                                endpoints: (k, j),
                                subregion: sub.id,
                                recipe: PathRecipe {
                                    kind: edge_kind(classes[k], classes[j]),
                                    pieces,
                                },
                            });
                        }
                    }
                }
            }
        }

        entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        deco.circular_list = entries.iter().rev().map(|e| e.1).collect();
        let n = entries.len();
        let mut link = |i: usize, j: usize| {
            let (pa, a, lead_a) = &entries[i];
            let (pb, b, lead_b) = &entries[j];
            edges.push(GraphEdge {
                endpoints: (*a, *b),
                subregion: sub.id,
                recipe: PathRecipe {
                    kind: edge_kind(classes[*a], classes[*b]),
                    pieces: realize_edge(lead_a, gamma.portion(*pa, *pb), lead_b),
                },
            });
        };
        match n {
            0 | 1 => {}
            2 => {
                if gamma.forward_gap(entries[0].0, entries[1].0)
                    <= gamma.forward_gap(entries[1].0, entries[0].0)
                {
                    link(0, 1);
                } else {
                    link(1, 0);
                }
            }
            _ => {
                for i in 0..n {
                    link(i, (i + 1) % n);
                }
            }
        }
    }

    let graph = MotionGraph {
        component,
        vertices,
        classes,
        punctured: pc,
        decorations,
        edges,
    };
    if !graph.is_connected() {
        return Err(MotionGraphError::DisconnectedGraph);
    }
    Ok(graph)
}
