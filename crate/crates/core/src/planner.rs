//! End-to-end planning: feasibility check, per-component pebble plans,
//! path realization and interference-ordered concatenation.

use std::fmt;

use thiserror::Error;

use crate::free_space::{FreeSpace, FreeSpaceError};
use crate::geom::{chain_length, reverse_chain, PathPiece, Point, Polygon, EPS_GEOM};
use crate::interference::{build_forest, execution_order, find_interferences};
use crate::motion_graph::{build_motion_graph, GraphVertex, MotionGraph};
use crate::pebble::{self, PebbleProblem};

/// Minimum distance between distinct start/target configurations.
pub const SEPARATION: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub polygon: Polygon,
    pub starts: Vec<Point>,
    pub targets: Vec<Point>,
}

/// One robot travelling along `path` while all others stay parked.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscMove {
    pub from: Point,
    pub to: Point,
    pub path: Vec<PathPiece>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MotionPlan {
    pub moves: Vec<DiscMove>,
    pub component_order: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    CountMismatch,
    SeparationViolation,
    OutsideFreeSpace,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Feasible => "Feasible",
            Verdict::CountMismatch => "CountMismatch",
            Verdict::SeparationViolation => "SeparationViolation",
            Verdict::OutsideFreeSpace => "OutsideFreeSpace",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentCount {
    pub id: usize,
    pub starts: usize,
    pub targets: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub components: Vec<ComponentCount>,
    pub separation_ok: bool,
    /// Smallest distance between distinct configurations, if there are two.
    pub min_separation: Option<f64>,
    /// Configurations a unit disc cannot occupy.
    pub outside: Vec<Point>,
    /// Configurations with clearance exactly 1, accepted as free.
    pub on_boundary: Vec<Point>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanStatistics {
    pub move_count: usize,
    pub total_path_length: f64,
    pub piece_count: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    FreeSpace(#[from] FreeSpaceError),
    #[error("scene is not solvable by this method: {}", .0.verdict)]
    Infeasible(FeasibilityReport),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

/// A configuration of the scene: a start, a target, or both when they
/// coincide.
#[derive(Clone, Copy, Debug)]
struct Config {
    position: Point,
    is_start: bool,
    is_target: bool,
}

fn merged_configs(scene: &Scene) -> Vec<Config> {
    let mut configs: Vec<Config> = scene
        .starts
        .iter()
        .map(|&p| Config {
            position: p,
            is_start: true,
            is_target: false,
        })
        .collect();
    for &t in &scene.targets {
        let twin = configs
            .iter_mut()
            .find(|c| c.is_start && !c.is_target && c.position.approx_eq(t, EPS_GEOM));
        match twin {
            Some(c) => c.is_target = true,
            None => configs.push(Config {
                position: t,
                is_start: false,
                is_target: true,
            }),
        }
    }
    configs
}

/// Classifies a scene against an already computed free space.
pub fn check_with(fs: &FreeSpace, scene: &Scene) -> FeasibilityReport {
    let mut counts: Vec<ComponentCount> = fs
        .components()
        .iter()
        .map(|c| ComponentCount {
            id: c.id,
            starts: 0,
            targets: 0,
        })
        .collect();
    let mut outside = Vec::new();
    let mut on_boundary = Vec::new();
    for (list, is_start) in [(&scene.starts, true), (&scene.targets, false)] {
        for &p in list {
            match fs.locate(p) {
                Some(id) => {
                    if is_start {
                        counts[id].starts += 1;
                    } else {
                        counts[id].targets += 1;
                    }
                    if (fs.clearance(p) - 1.0).abs() <= EPS_GEOM {
                        on_boundary.push(p);
                    }
                }
                None => outside.push(p),
            }
        }
    }

    let configs = merged_configs(scene);
    let mut min_sep: Option<f64> = None;
    for i in 0..configs.len() {
        for j in i + 1..configs.len() {
            let d = configs[i].position.dist(configs[j].position);
            min_sep = Some(min_sep.map_or(d, |m: f64| m.min(d)));
        }
    }
    let separation_ok = min_sep.map_or(true, |d| d >= SEPARATION - EPS_GEOM);

    let verdict = if !outside.is_empty() {
        Verdict::OutsideFreeSpace
    } else if scene.starts.len() != scene.targets.len()
        || counts.iter().any(|c| c.starts != c.targets)
    {
        Verdict::CountMismatch
    } else if !separation_ok {
        Verdict::SeparationViolation
    } else {
        Verdict::Feasible
    };
    FeasibilityReport {
        components: counts,
        separation_ok,
        min_separation: min_sep,
        outside,
        on_boundary,
        verdict,
    }
}

pub fn check_feasibility(scene: &Scene) -> Result<FeasibilityReport, FreeSpaceError> {
    let fs = FreeSpace::compute(&scene.polygon)?;
    Ok(check_with(&fs, scene))
}

/// Motion graphs of every component that holds configurations, in
/// component order.
pub fn motion_graphs(fs: &FreeSpace, scene: &Scene) -> Result<Vec<MotionGraph>, PlanError> {
    let configs = merged_configs(scene);
    let mut graphs = Vec::new();
    for comp in fs.components() {
        let vertices: Vec<GraphVertex> = configs
            .iter()
            .filter(|c| fs.locate(c.position) == Some(comp.id))
            .map(|c| GraphVertex {
                position: c.position,
                is_start: c.is_start,
                is_target: c.is_target,
            })
            .collect();
        if vertices.is_empty() {
            continue;
        }
        let g = build_motion_graph(fs, comp.id, vertices)
            .map_err(|e| PlanError::InternalAssertion(format!("component {}: {e}", comp.id)))?;
        graphs.push(g);
    }
    Ok(graphs)
}

/// Plans the whole scene. Robots in one component move one at a time
/// along motion-graph edges; components run in interference order.
pub fn solve(scene: &Scene) -> Result<MotionPlan, PlanError> {
    let fs = FreeSpace::compute(&scene.polygon)?;
    let report = check_with(&fs, scene);
    if report.verdict != Verdict::Feasible {
        return Err(PlanError::Infeasible(report));
    }
    let records = find_interferences(&fs, &scene.starts, &scene.targets)?;
    let forest = build_forest(fs.components().len(), &records)
        .map_err(|e| PlanError::InternalAssertion(e.to_string()))?;
    let order = execution_order(&forest);
    let graphs = motion_graphs(&fs, scene)?;

    let mut moves = Vec::new();
    for &comp in &order {
        let Some(g) = graphs.iter().find(|g| g.component == comp) else {
            continue;
        };
        let problem = PebbleProblem {
            vertex_count: g.vertices.len(),
            edges: g.edge_pairs(),
            starts: (0..g.vertices.len()).filter(|&v| g.vertices[v].is_start).collect(),
            targets: (0..g.vertices.len()).filter(|&v| g.vertices[v].is_target).collect(),
        };
        let plan = pebble::solve(&problem)
            .map_err(|e| PlanError::InternalAssertion(format!("component {comp}: {e}")))?;
        for (u, w) in plan.unit_steps() {
            let edge = g
                .edges
                .iter()
                .find(|e| e.endpoints == (u, w) || e.endpoints == (w, u))
                .ok_or_else(|| PlanError::InternalAssertion(format!("no edge {u}-{w}")))?;
            let path = if edge.endpoints == (u, w) {
                edge.recipe.pieces.clone()
            } else {
                reverse_chain(&edge.recipe.pieces)
            };
            moves.push(DiscMove {
                from: g.vertices[u].position,
                to: g.vertices[w].position,
                path,
            });
        }
    }
    Ok(MotionPlan {
        moves,
        component_order: order,
    })
}

pub fn plan_statistics(plan: &MotionPlan) -> PlanStatistics {
    PlanStatistics {
        move_count: plan.moves.len(),
        total_path_length: plan.moves.iter().map(|m| chain_length(&m.path)).sum(),
        piece_count: plan.moves.iter().map(|m| m.path.len()).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square(side: f64) -> Polygon {
        Polygon::new(vec![p(0., 0.), p(side, 0.), p(side, side), p(0., side)]).unwrap()
    }

    fn dumbbell(w: f64) -> Polygon {
        let (lo, hi) = (3.0 - w / 2.0, 3.0 + w / 2.0);
        Polygon::new(
            [
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
            ]
            .iter()
            .map(|&(x, y)| p(x, y))
            .collect(),
        )
        .unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let scene = Scene {
            polygon: square(10.),
            starts: vec![p(3., 3.)],
            targets: vec![p(7., 7.)],
        };
        assert_eq!(check_feasibility(&scene).unwrap().verdict, Verdict::Feasible);

        let scene = Scene {
            polygon: dumbbell(1.9),
            starts: vec![p(3., 3.)],
            targets: vec![p(12., 3.)],
        };
        assert_eq!(check_feasibility(&scene).unwrap().verdict, Verdict::CountMismatch);

        let scene = Scene {
            polygon: square(20.),
            starts: vec![p(5., 5.), p(8.9, 5.)],
            targets: vec![p(15., 15.), p(15., 5.)],
        };
        let r = check_feasibility(&scene).unwrap();
        assert_eq!(r.verdict, Verdict::SeparationViolation);
        assert!((r.min_separation.unwrap() - 3.9).abs() < 1e-12);

        let scene = Scene {
            polygon: square(10.),
            starts: vec![p(0.5, 5.)],
            targets: vec![p(5., 5.)],
        };
        assert_eq!(check_feasibility(&scene).unwrap().verdict, Verdict::OutsideFreeSpace);
    }

    #[test]
    fn coincident_start_and_target_share_a_vertex() {
        let scene = Scene {
            polygon: square(20.),
            starts: vec![p(5., 5.), p(10., 10.)],
            targets: vec![p(10., 10.), p(15., 15.)],
        };
        let r = check_feasibility(&scene).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);
        let plan = solve(&scene).unwrap();
        assert!(!plan.moves.is_empty());
    }

    #[test]
    fn single_robot_in_convex_room() {
        let scene = Scene {
            polygon: square(10.),
            starts: vec![p(3., 3.)],
            targets: vec![p(7., 7.)],
        };
        let plan = solve(&scene).unwrap();
        assert_eq!(plan.moves.len(), 1);
        let m = &plan.moves[0];
        assert!(m.path[0].start().approx_eq(p(3., 3.), 1e-9));
        assert!(m.path.last().unwrap().end().approx_eq(p(7., 7.), 1e-9));
    }

    #[test]
    fn statistics() {
        assert_eq!(
            plan_statistics(&MotionPlan::default()),
            PlanStatistics {
                move_count: 0,
                total_path_length: 0.0,
                piece_count: 0
            }
        );
        let plan = MotionPlan {
            moves: vec![DiscMove {
                from: p(0., 0.),
                to: p(3., 4.),
                path: vec![PathPiece::seg(p(0., 0.), p(3., 4.))],
            }],
            component_order: vec![0],
        };
        let s = plan_statistics(&plan);
        assert_eq!((s.move_count, s.piece_count), (1, 1));
        assert!((s.total_path_length - 5.0).abs() < 1e-15);
    }

    #[test]
    fn infeasible_scene_is_refused() {
        let scene = Scene {
            polygon: dumbbell(1.9),
            starts: vec![p(3., 3.)],
            targets: vec![p(12., 3.)],
        };
        assert!(matches!(solve(&scene), Err(PlanError::Infeasible(_))));
    }
}
