//! Cross-component interference and the order in which components run.
//!
//! A configuration interferes with another component when its collision
//! disc reaches into it. Such a configuration must be vacant while the
//! other component's robots move, which induces a directed forest over the
//! components; any topological order of it is a safe execution order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use thiserror::Error;

use crate::free_space::{FreeSpace, FreeSpaceError, COLLISION_RADIUS};
use crate::geom::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    Start,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferenceRecord {
    pub config: Point,
    pub home: usize,
    pub affected: usize,
    pub kind: ConfigKind,
}

impl InterferenceRecord {
    /// The forest edge this record induces: a start must leave before the
    /// affected component runs, a target must stay empty until it has.
    pub fn edge(&self) -> (usize, usize) {
        match self.kind {
            ConfigKind::Start => (self.home, self.affected),
            ConfigKind::Target => (self.affected, self.home),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceForest {
    pub node_count: usize,
    /// Distinct directed edges, each with the first record that induced it.
    pub edges: Vec<(usize, usize, InterferenceRecord)>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferenceError {
    #[error("interference graph is not a forest: {0}")]
    NotAForest(String),
    #[error("edge ({0}, {1}) refers to a component outside 0..{2}")]
    UnknownNode(usize, usize, usize),
}

/// Records every (configuration, foreign component) pair whose collision
/// disc and component overlap.
pub fn find_interferences(
    fs: &FreeSpace,
    starts: &[Point],
    targets: &[Point],
) -> Result<Vec<InterferenceRecord>, FreeSpaceError> {
    let mut out = Vec::new();
    let tagged = starts
        .iter()
        .map(|&p| (p, ConfigKind::Start))
        .chain(targets.iter().map(|&p| (p, ConfigKind::Target)));
    for (x, kind) in tagged {
        let home = fs.locate(x).ok_or(FreeSpaceError::OutsideFreeSpace(x))?;
        for comp in fs.components() {
            if comp.id == home {
                continue;
            }
            let (lo, hi) = comp.boundary.bbox();
            let r = COLLISION_RADIUS;
            if x.x + r < lo.x || x.x - r > hi.x || x.y + r < lo.y || x.y - r > hi.y {
                continue;
            }
            // Components are bounded, so the disc meets one exactly when it
            // comes closer than its radius to the boundary loop.
            if comp.boundary.distance(x) < r {
                out.push(InterferenceRecord {
                    config: x,
                    home,
                    affected: comp.id,
                    kind,
                });
            }
        }
    }
    Ok(out)
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

pub fn build_forest(
    node_count: usize,
    records: &[InterferenceRecord],
) -> Result<InterferenceForest, InterferenceError> {
    let mut distinct: BTreeMap<(usize, usize), InterferenceRecord> = BTreeMap::new();
    for r in records {
        let (i, j) = r.edge();
        if i >= node_count || j >= node_count {
            return Err(InterferenceError::UnknownNode(i, j, node_count));
        }
        distinct.entry((i, j)).or_insert(*r);
    }
    let mut sets = DisjointSets((0..node_count).collect());
    for &(i, j) in distinct.keys() {
        if distinct.contains_key(&(j, i)) {
            return Err(InterferenceError::NotAForest(format!(
                "antiparallel edges between {i} and {j}"
            )));
        }
        let (a, b) = (sets.find(i), sets.find(j));
        if a == b {
            return Err(InterferenceError::NotAForest(format!(
                "edge ({i}, {j}) closes a cycle"
            )));
        }
        sets.0[a] = b;
    }
    Ok(InterferenceForest {
        node_count,
        edges: distinct.into_iter().map(|((i, j), r)| (i, j, r)).collect(),
    })
}

/// Topological order of the forest, smallest available id first.
pub fn execution_order(forest: &InterferenceForest) -> Vec<usize> {
    let n = forest.node_count;
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(i, j, _) in &forest.edges {
        indeg[j] += 1;
        succ[i].push(j);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polygon;

    fn rec(home: usize, affected: usize, kind: ConfigKind) -> InterferenceRecord {
        InterferenceRecord {
            config: Point::default(),
            home,
            affected,
            kind,
        }
    }

    fn forest(n: usize, edges: &[(usize, usize)]) -> InterferenceForest {
        let recs: Vec<_> = edges.iter().map(|&(i, j)| rec(i, j, ConfigKind::Start)).collect();
        build_forest(n, &recs).unwrap()
    }

    #[test]
    fn edge_rule() {
        assert!(build_forest(2, &[]).unwrap().edges.is_empty());
        let f = build_forest(2, &[rec(0, 1, ConfigKind::Start)]).unwrap();
        assert_eq!((f.edges[0].0, f.edges[0].1), (0, 1));
        // A target in component 1 reaching into component 0.
        let f = build_forest(2, &[rec(1, 0, ConfigKind::Target)]).unwrap();
        assert_eq!((f.edges[0].0, f.edges[0].1), (0, 1));
    }

    #[test]
    fn rejects_antiparallel_and_cycles() {
        let anti = [rec(0, 1, ConfigKind::Start), rec(1, 0, ConfigKind::Start)];
        assert!(matches!(build_forest(2, &anti), Err(InterferenceError::NotAForest(_))));
        let tri = [
            rec(0, 1, ConfigKind::Start),
            rec(1, 2, ConfigKind::Start),
            rec(0, 2, ConfigKind::Start),
        ];
        assert!(matches!(build_forest(3, &tri), Err(InterferenceError::NotAForest(_))));
    }

    #[test]
    fn parallel_records_collapse() {
        let f = build_forest(
            2,
            &[rec(0, 1, ConfigKind::Start), rec(1, 0, ConfigKind::Target)],
        )
        .unwrap();
        assert_eq!(f.edges.len(), 1);
    }

    #[test]
    fn order_examples() {
        assert_eq!(execution_order(&forest(3, &[])), vec![0, 1, 2]);
        assert_eq!(execution_order(&forest(3, &[(1, 0), (2, 0)])), vec![1, 2, 0]);
        assert_eq!(execution_order(&forest(3, &[(2, 1), (1, 0)])), vec![2, 1, 0]);
    }

    #[test]
    fn far_components_do_not_interfere() {
        // Two rooms joined by a long width-1 slot: the rooms' free spaces
        // are 10 apart.
        let poly = Polygon::new(
            [
                (0., 0.),
                (6., 0.),
                (6., 2.5),
                (16., 2.5),
                (16., 0.),
                (22., 0.),
                (22., 6.),
                (16., 6.),
                (16., 3.5),
                (6., 3.5),
                (6., 6.),
                (0., 6.),
            ]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect(),
        )
        .unwrap();
        let fs = FreeSpace::compute(&poly).unwrap();
        assert_eq!(fs.components().len(), 2);
        let recs = find_interferences(&fs, &[Point::new(3., 3.)], &[Point::new(19., 3.)]).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn slot_wall_interference() {
        // A wall of thickness 0.5 pierced by a slot of width 1.5. The slot is
        // too narrow to pass, but the free space bulges into both mouths, so
        // a start at the left mouth reaches the right room.
        let poly = Polygon::new(
            [
                (0., 0.),
                (6., 0.),
                (6., 2.25),
                (6.5, 2.25),
                (6.5, 0.),
                (12.5, 0.),
                (12.5, 6.),
                (6.5, 6.),
                (6.5, 3.75),
                (6., 3.75),
                (6., 6.),
                (0., 6.),
            ]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect(),
        )
        .unwrap();
        let fs = FreeSpace::compute(&poly).unwrap();
        assert_eq!(fs.components().len(), 2);
        let s = Point::new(5.3, 3.0);
        let recs = find_interferences(&fs, &[s], &[Point::new(10., 3.)]).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].home, recs[0].affected), (0, 1));
        assert_eq!(recs[0].kind, ConfigKind::Start);
    }
}
