//! The configuration space of a unit disc: points of the workspace at
//! distance at least 1 from its boundary, split into connected components.

use thiserror::Error;

use crate::geom::{point_in_polygon, Arc, GeomError, Location, PathPiece, Point, Polygon, EPS_GEOM};
use crate::region::{overlay, Chain, Region, RegionError, Tag, TaggedPiece};

/// Radius of a collision disc: two robot radii.
pub const COLLISION_RADIUS: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FreeSpaceError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Overlay(#[from] RegionError),
    #[error("configuration ({}, {}) is outside the free space", .0.x, .0.y)]
    OutsideFreeSpace(Point),
    #[error("no free-space component with id {0}")]
    UnknownComponent(usize),
    #[error("structural invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug)]
pub struct FreeComponent {
    pub id: usize,
    /// The single counter-clockwise boundary loop.
    pub boundary: Chain,
    pub area: f64,
    pub starts: Vec<Point>,
    pub targets: Vec<Point>,
}

impl FreeComponent {
    pub fn contains(&self, p: Point) -> bool {
        self.boundary.encloses(p)
    }
}

#[derive(Clone, Debug)]
pub struct FreeSpace {
    polygon: Polygon,
    components: Vec<FreeComponent>,
}

/// `D_2(x)` restricted to the component of `x`.
#[derive(Clone, Debug)]
pub struct CollisionRegion {
    pub owner: Point,
    pub component_id: usize,
    pub region: Region,
}

impl CollisionRegion {
    pub fn boundary(&self) -> &Chain {
        &self.region.outer
    }
}

/// One connected piece of a component minus all collision discs.
#[derive(Clone, Debug)]
pub struct Subregion {
    pub id: usize,
    pub region: Region,
    /// Indices of the configurations whose collision disc bounds this piece.
    pub adjacent: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PuncturedComponent {
    pub parent: usize,
    pub configs: Vec<Point>,
    pub subregions: Vec<Subregion>,
}

impl PuncturedComponent {
    pub fn piece_count(&self) -> usize {
        self.subregions.iter().map(|s| s.region.piece_count()).sum()
    }
}

fn inward_offsets(poly: &Polygon) -> Vec<TaggedPiece> {
    let mut curves = Vec::with_capacity(2 * poly.len());
    for e in poly.edges() {
        let n = e.dir().perp().normalized();
        curves.push(TaggedPiece::new(PathPiece::seg(e.a + n, e.b + n), Tag::Obstacle));
    }
    for (i, v) in poly.vertices().iter().enumerate() {
        if poly.is_reflex(i) {
            curves.push(TaggedPiece::new(PathPiece::Arc(Arc::circle(*v, 1.0)), Tag::Obstacle));
        }
    }
    curves
}

impl FreeSpace {
    pub fn compute(poly: &Polygon) -> Result<FreeSpace, FreeSpaceError> {
        let curves = inward_offsets(poly);
        let regions = overlay(&curves, |p| {
            point_in_polygon(p, poly) == Location::Inside && poly.boundary_distance(p) > 1.0
        })?;
        let mut regions: Vec<Region> = regions;
        for r in &regions {
            if !r.holes.is_empty() {
                return Err(FreeSpaceError::Invariant(format!(
                    "free-space component has {} holes",
                    r.holes.len()
                )));
            }
        }
        regions.sort_by(|a, b| {
            let (la, lb) = (a.outer.bbox().0, b.outer.bbox().0);
            la.x.total_cmp(&lb.x).then(la.y.total_cmp(&lb.y))
        });
        let components = regions
            .into_iter()
            .enumerate()
            .map(|(id, r)| FreeComponent {
                id,
                boundary: r.outer,
                area: r.area,
                starts: Vec::new(),
                targets: Vec::new(),
            })
            .collect();
        Ok(FreeSpace {
            polygon: poly.clone(),
            components,
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn components(&self) -> &[FreeComponent] {
        &self.components
    }

    pub fn component(&self, id: usize) -> Result<&FreeComponent, FreeSpaceError> {
        self.components
            .get(id)
            .ok_or(FreeSpaceError::UnknownComponent(id))
    }

    /// Distance from `p` to the workspace boundary, negated outside.
    pub fn clearance(&self, p: Point) -> f64 {
        let d = self.polygon.boundary_distance(p);
        if point_in_polygon(p, &self.polygon) == Location::Outside {
            -d
        } else {
            d
        }
    }

    /// Component containing `p`, or `None` if a unit disc at `p` would
    /// overlap the obstacles. Clearance exactly 1 counts as free.
    pub fn locate(&self, p: Point) -> Option<usize> {
        if self.clearance(p) < 1.0 - EPS_GEOM {
            return None;
        }
        if let Some(c) = self.components.iter().find(|c| c.contains(p)) {
            return Some(c.id);
        }
        self.components
            .iter()
            .map(|c| (c.boundary.distance(p), c.id))
            .filter(|(d, _)| *d <= 1e-6)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, id)| id)
    }

    /// Records each start and target in its component.
    pub fn assign(&mut self, starts: &[Point], targets: &[Point]) -> Result<(), FreeSpaceError> {
        for c in &mut self.components {
            c.starts.clear();
            c.targets.clear();
        }
        for (list, is_start) in [(starts, true), (targets, false)] {
            for &p in list {
                let id = self.locate(p).ok_or(FreeSpaceError::OutsideFreeSpace(p))?;
                let c = &mut self.components[id];
                if is_start {
                    c.starts.push(p);
                } else {
                    c.targets.push(p);
                }
            }
        }
        Ok(())
    }

    /// `D_2(x)` intersected with the component of `x`.
    pub fn collision_region(&self, x: Point) -> Result<CollisionRegion, FreeSpaceError> {
        let id = self.locate(x).ok_or(FreeSpaceError::OutsideFreeSpace(x))?;
        let comp = &self.components[id];
        let disc = Arc::circle(x, COLLISION_RADIUS);
        let reach = COLLISION_RADIUS + 1e-6;
        let mut curves: Vec<TaggedPiece> = comp
            .boundary
            .pieces()
            .iter()
            .filter(|tp| {
                let (lo, hi) = tp.piece.bbox();
                lo.x <= x.x + reach && hi.x >= x.x - reach && lo.y <= x.y + reach && hi.y >= x.y - reach
            })
            .copied()
            .collect();
        curves.push(TaggedPiece::new(PathPiece::Arc(disc), Tag::Disc(0)));
        let regions = overlay(&curves, |p| {
            p.dist(x) < COLLISION_RADIUS && comp.contains(p)
        })?;
        if regions.len() != 1 || !regions[0].holes.is_empty() {
            return Err(FreeSpaceError::Invariant(format!(
                "collision region of ({}, {}) has {} parts",
                x.x,
                x.y,
                regions.len()
            )));
        }
        Ok(CollisionRegion {
            owner: x,
            component_id: id,
            region: regions.into_iter().next().unwrap(),
        })
    }

    /// Removes the collision discs of `configs` (all inside component
    /// `id`) and splits what remains into subregions.
    pub fn puncture(&self, id: usize, configs: &[Point]) -> Result<PuncturedComponent, FreeSpaceError> {
        let comp = self.component(id)?;
        let mut curves: Vec<TaggedPiece> = comp.boundary.pieces().to_vec();
        for (k, &c) in configs.iter().enumerate() {
            curves.push(TaggedPiece::new(
                PathPiece::Arc(Arc::circle(c, COLLISION_RADIUS)),
                Tag::Disc(k),
            ));
        }
        let regions = overlay(&curves, |p| {
            configs.iter().all(|c| p.dist(*c) > COLLISION_RADIUS) && comp.contains(p)
        })?;
        let subregions = regions
            .into_iter()
            .enumerate()
            .map(|(sid, region)| {
                let mut adjacent: Vec<usize> = region
                    .chains()
                    .flat_map(|c| c.pieces().iter())
                    .filter_map(|tp| match tp.tag {
                        Tag::Disc(k) => Some(k),
                        Tag::Obstacle => None,
                    })
                    .collect();
                adjacent.sort_unstable();
                adjacent.dedup();
                Subregion {
                    id: sid,
                    region,
                    adjacent,
                }
            })
            .collect();
        Ok(PuncturedComponent {
            parent: id,
            configs: configs.to_vec(),
            subregions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn poly(pts: &[(f64, f64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
    }

    fn dumbbell(w: f64) -> Polygon {
        let (lo, hi) = (3.0 - w / 2.0, 3.0 + w / 2.0);
        poly(&[
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
        ])
    }

    #[test]
    fn eroded_square() {
        let fs = FreeSpace::compute(&poly(&[(0., 0.), (6., 0.), (6., 6.), (0., 6.)])).unwrap();
        assert_eq!(fs.components().len(), 1);
        let c = &fs.components()[0];
        assert_eq!(c.boundary.len(), 4);
        assert!(c.boundary.pieces().iter().all(|tp| matches!(tp.piece, PathPiece::Seg(_))));
        assert!((c.area - 16.0).abs() < 1e-9);
        let (lo, hi) = c.boundary.bbox();
        assert!(lo.approx_eq(p(1., 1.), 1e-9) && hi.approx_eq(p(5., 5.), 1e-9));
    }

    #[test]
    fn dumbbell_splits_below_width_two() {
        assert_eq!(FreeSpace::compute(&dumbbell(1.9)).unwrap().components().len(), 2);
        assert_eq!(FreeSpace::compute(&dumbbell(2.5)).unwrap().components().len(), 1);
    }

    #[test]
    fn l_shape_has_one_reflex_arc() {
        let fs = FreeSpace::compute(&poly(&[
            (0., 0.),
            (6., 0.),
            (6., 3.),
            (3., 3.),
            (3., 6.),
            (0., 6.),
        ]))
        .unwrap();
        assert_eq!(fs.components().len(), 1);
        let arcs: Vec<Arc> = fs.components()[0]
            .boundary
            .pieces()
            .iter()
            .filter_map(|tp| match tp.piece {
                PathPiece::Arc(a) => Some(a),
                _ => None,
            })
            .collect();
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].radius - 1.0).abs() < 1e-12);
        assert!(arcs[0].center.approx_eq(p(3., 3.), 1e-12));
        assert!((arcs[0].sweep().abs() - PI / 2.0).abs() < 1e-6);
        // Curvature check by sampling: every arc sample sits at distance 1
        // from the reflex corner.
        for k in 0..=20 {
            let q = arcs[0].point_at(k as f64 / 20.0);
            assert!((q.dist(p(3., 3.)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn locate_examples() {
        let fs = FreeSpace::compute(&poly(&[(0., 0.), (6., 0.), (6., 6.), (0., 6.)])).unwrap();
        assert_eq!(fs.locate(p(3., 3.)), Some(0));
        assert_eq!(fs.locate(p(0.5, 3.)), None);
        assert_eq!(fs.locate(p(1., 3.)), Some(0));
        assert_eq!(fs.locate(p(9., 3.)), None);
    }

    #[test]
    fn collision_region_examples() {
        let fs = FreeSpace::compute(&poly(&[(0., 0.), (20., 0.), (20., 20.), (0., 20.)])).unwrap();
        let r = fs.collision_region(p(10., 10.)).unwrap();
        assert_eq!(r.boundary().len(), 1);
        match r.boundary().pieces()[0].piece {
            PathPiece::Arc(a) => assert!((a.sweep().abs() - TAU).abs() < 1e-9),
            _ => panic!("expected a full circle"),
        }
        let r = fs.collision_region(p(2., 10.)).unwrap();
        assert!(r.region.area < 4.0 * PI);
        let corridor = FreeSpace::compute(&poly(&[(0., 0.), (20., 0.), (20., 2.5), (0., 2.5)])).unwrap();
        let r = corridor.collision_region(p(10., 1.25)).unwrap();
        assert!((r.region.area - 0.5 * 4.0).abs() < 0.1);
        assert!(matches!(
            fs.collision_region(p(0.5, 0.5)),
            Err(FreeSpaceError::OutsideFreeSpace(_))
        ));
    }

    #[test]
    fn puncture_with_two_far_configurations() {
        let fs = FreeSpace::compute(&poly(&[(0., 0.), (20., 0.), (20., 20.), (0., 20.)])).unwrap();
        let pc = fs.puncture(0, &[p(5., 5.), p(15., 15.)]).unwrap();
        assert_eq!(pc.subregions.len(), 1);
        assert_eq!(pc.subregions[0].adjacent, vec![0, 1]);
        assert_eq!(pc.subregions[0].region.holes.len(), 2);
    }

    #[test]
    fn assign_records_configurations() {
        let mut fs = FreeSpace::compute(&dumbbell(1.9)).unwrap();
        fs.assign(&[p(3., 3.)], &[p(12., 3.)]).unwrap();
        assert_eq!(fs.components()[0].starts.len(), 1);
        assert_eq!(fs.components()[1].targets.len(), 1);
        assert!(fs.assign(&[p(0.2, 0.2)], &[]).is_err());
    }
}
