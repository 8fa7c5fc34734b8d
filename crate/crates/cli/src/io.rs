//! Scene and plan files: flat JSON objects with coordinate pairs.

use std::fs;
use std::path::Path;

use discplan::geom::{Arc, GeomError, Orientation, PathPiece, Point, Polygon, Segment};
use discplan::planner::{plan_statistics, DiscMove, MotionPlan, Scene};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Pair = [f64; 2];

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {reason}")]
    Read {
        path: String,
        reason: std::io::Error,
    },
    #[error("cannot write {path}: {reason}")]
    Write {
        path: String,
        reason: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Syntax {
        path: String,
        reason: serde_json::Error,
    },
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("invalid plan: {0}")]
    Plan(String),
}

impl From<GeomError> for FormatError {
    fn from(e: GeomError) -> Self {
        FormatError::Scene(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub polygon: Vec<Pair>,
    pub starts: Vec<Pair>,
    pub targets: Vec<Pair>,
}

fn pt(p: Pair) -> Point {
    Point::new(p[0], p[1])
}

fn pair(p: Point) -> Pair {
    [p.x, p.y]
}

impl SceneFile {
    pub fn from_scene(scene: &Scene, name: Option<String>, seed: Option<u64>) -> Self {
        SceneFile {
            name,
            seed,
            polygon: scene.polygon.vertices().iter().copied().map(pair).collect(),
            starts: scene.starts.iter().copied().map(pair).collect(),
            targets: scene.targets.iter().copied().map(pair).collect(),
        }
    }

    pub fn to_scene(&self) -> Result<Scene, FormatError> {
        let all = self.polygon.iter().chain(&self.starts).chain(&self.targets);
        if let Some(bad) = all.into_iter().find(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(FormatError::Scene(format!("non-finite coordinate {bad:?}")));
        }
        Ok(Scene {
            polygon: Polygon::new(self.polygon.iter().copied().map(pt).collect())?,
            starts: self.starts.iter().copied().map(pt).collect(),
            targets: self.targets.iter().copied().map(pt).collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationTag {
    Ccw,
    Cw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PieceRecord {
    Seg {
        a: Pair,
        b: Pair,
    },
    Arc {
        center: Pair,
        radius: f64,
        theta_start: f64,
        theta_end: f64,
        orientation: OrientationTag,
    },
}

impl PieceRecord {
    pub fn from_piece(piece: &PathPiece) -> Self {
        match piece {
            PathPiece::Seg(s) => PieceRecord::Seg {
                a: pair(s.a),
                b: pair(s.b),
            },
            PathPiece::Arc(a) => PieceRecord::Arc {
                center: pair(a.center),
                radius: a.radius,
                theta_start: a.theta_start,
                theta_end: a.theta_end,
                orientation: match a.orientation() {
                    Orientation::Ccw => OrientationTag::Ccw,
                    Orientation::Cw => OrientationTag::Cw,
                },
            },
        }
    }

    pub fn to_piece(&self) -> Result<PathPiece, FormatError> {
        let bad = |e: GeomError| FormatError::Plan(e.to_string());
        Ok(match *self {
            PieceRecord::Seg { a, b } => PathPiece::Seg(Segment::try_new(pt(a), pt(b)).map_err(bad)?),
            PieceRecord::Arc {
                center,
                radius,
                theta_start,
                theta_end,
                orientation,
            } => {
                let o = match orientation {
                    OrientationTag::Ccw => Orientation::Ccw,
                    OrientationTag::Cw => Orientation::Cw,
                };
                PathPiece::Arc(Arc::from_parts(pt(center), radius, theta_start, theta_end, o).map_err(bad)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRecord {
    pub from: Pair,
    pub to: Pair,
    pub pieces: Vec<PieceRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatisticsRecord {
    pub move_count: usize,
    pub total_path_length: f64,
    pub piece_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub component_order: Vec<usize>,
    pub statistics: StatisticsRecord,
    pub moves: Vec<MoveRecord>,
}

impl PlanFile {
    pub fn from_plan(plan: &MotionPlan) -> Self {
        let s = plan_statistics(plan);
        PlanFile {
            component_order: plan.component_order.clone(),
            statistics: StatisticsRecord {
                move_count: s.move_count,
                total_path_length: s.total_path_length,
                piece_count: s.piece_count,
            },
            moves: plan
                .moves
                .iter()
                .map(|m| MoveRecord {
                    from: pair(m.from),
                    to: pair(m.to),
                    pieces: m.path.iter().map(PieceRecord::from_piece).collect(),
                })
                .collect(),
        }
    }

    /// The stored statistics are informational and not checked.
    pub fn to_plan(&self) -> Result<MotionPlan, FormatError> {
        let moves = self
            .moves
            .iter()
            .map(|m| {
                Ok(DiscMove {
                    from: pt(m.from),
                    to: pt(m.to),
                    path: m.pieces.iter().map(PieceRecord::to_piece).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, FormatError>>()?;
        Ok(MotionPlan {
            moves,
            component_order: self.component_order.clone(),
        })
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|reason| FormatError::Read {
        path: path.display().to_string(),
        reason,
    })?;
    serde_json::from_str(&text).map_err(|reason| FormatError::Syntax {
        path: path.display().to_string(),
        reason,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data always serializes");
    text.push('\n');
    fs::write(path, text).map_err(|reason| FormatError::Write {
        path: path.display().to_string(),
        reason,
    })
}

pub fn load_scene(path: &Path) -> Result<(SceneFile, Scene), FormatError> {
    let file: SceneFile = read_json(path)?;
    let scene = file.to_scene()?;
    Ok((file, scene))
}

pub fn load_plan(path: &Path) -> Result<MotionPlan, FormatError> {
    read_json::<PlanFile>(path)?.to_plan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scene_round_trip() {
        let text = r#"{"name":"sq","polygon":[[0,0],[10,0],[10,10],[0,10]],"starts":[[3,3]],"targets":[[7,7]]}"#;
        let file: SceneFile = serde_json::from_str(text).unwrap();
        assert_eq!(file.seed, None);
        let scene = file.to_scene().unwrap();
        assert_eq!(scene.polygon.len(), 4);
        let back = SceneFile::from_scene(&scene, file.name.clone(), None);
        assert_eq!(back, file);
        let again: SceneFile = serde_json::from_str(&serde_json::to_string(&back).unwrap()).unwrap();
        assert_eq!(again, back);
    }

    #[test]
    fn rejects_bad_scenes() {
        let unknown = r#"{"polygon":[],"starts":[],"targets":[],"extra":1}"#;
        assert!(serde_json::from_str::<SceneFile>(unknown).is_err());
        let degenerate: SceneFile =
            serde_json::from_str(r#"{"polygon":[[0,0],[1,0]],"starts":[],"targets":[]}"#).unwrap();
        assert!(matches!(degenerate.to_scene(), Err(FormatError::Scene(_))));
    }

    #[test]
    fn plan_round_trip_is_exact() {
        let plan = MotionPlan {
            moves: vec![DiscMove {
                from: Point::new(0.1, 0.2),
                to: Point::new(3.0 + 1e-13, 1.0 / 3.0),
                path: vec![
                    PathPiece::seg(Point::new(0.1, 0.2), Point::new(1.0 / 7.0, 2.0)),
                    PathPiece::Arc(Arc::new(Point::new(1.0, 1.0), 1.0, 0.3, -PI / 3.0)),
                    PathPiece::Arc(Arc::new(Point::new(1.0, 1.0), 2.0_f64.sqrt(), -0.1, 2.0)),
                ],
            }],
            component_order: vec![1, 0],
        };
        let file = PlanFile::from_plan(&plan);
        let text = serde_json::to_string_pretty(&file).unwrap();
        assert!(text.contains(r#""type": "arc""#) && text.contains(r#""orientation": "cw""#));
        let parsed: PlanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, file);
        assert_eq!(parsed.to_plan().unwrap(), plan);
    }

    #[test]
    fn rejects_bad_pieces() {
        let zero_radius = PieceRecord::Arc {
            center: [0., 0.],
            radius: 0.0,
            theta_start: 0.0,
            theta_end: 1.0,
            orientation: OrientationTag::Ccw,
        };
        assert!(zero_radius.to_piece().is_err());
        let point = PieceRecord::Seg { a: [1., 1.], b: [1., 1.] };
        assert!(point.to_piece().is_err());
    }
}
