//! Unlabeled pebble motion on a connected graph.
//!
//! Works on a spanning tree and peels off one leaf per phase: a target leaf
//! is filled by pulling the nearest pebble to it, a non-target leaf is
//! emptied by shifting the pebbles between it and the nearest hole.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PebbleProblem {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub starts: Vec<usize>,
    pub targets: Vec<usize>,
}

/// One pebble travelling along `via` (first entry `from`, last entry `to`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PebbleMove {
    pub from: usize,
    pub to: usize,
    pub via: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PebblePlan {
    pub moves: Vec<PebbleMove>,
}

impl PebblePlan {
    /// Single-edge steps in execution order.
    pub fn unit_steps(&self) -> Vec<(usize, usize)> {
        self.moves
            .iter()
            .flat_map(|m| m.via.windows(2).map(|w| (w[0], w[1])))
            .collect()
    }

    pub fn step_count(&self) -> usize {
        self.moves.iter().map(|m| m.via.len().saturating_sub(1)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IllegalReason {
    OccupiedDestination,
    OccupiedIntermediate,
    NonEdge,
    NoPebbleAtSource,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IllegalReason::OccupiedDestination => "occupied-destination",
            IllegalReason::OccupiedIntermediate => "occupied-intermediate",
            IllegalReason::NonEdge => "non-edge",
            IllegalReason::NoPebbleAtSource => "no-pebble-at-source",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PebbleError {
    #[error("infeasible pebble problem: {0}")]
    Infeasible(String),
    #[error("move {index} is illegal: {reason}")]
    IllegalMove { index: usize, reason: IllegalReason },
}

fn adjacency(p: &PebbleProblem) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); p.vertex_count];
    for &(a, b) in &p.edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn membership(n: usize, set: &[usize], what: &str) -> Result<Vec<bool>, PebbleError> {
    let mut mark = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(PebbleError::Infeasible(format!("{what} vertex {v} out of range")));
        }
        if mark[v] {
            return Err(PebbleError::Infeasible(format!("{what} vertex {v} listed twice")));
        }
        mark[v] = true;
    }
    Ok(mark)
}

fn validate(p: &PebbleProblem) -> Result<(Vec<Vec<usize>>, Vec<bool>, Vec<bool>), PebbleError> {
    if p.edges.iter().any(|&(a, b)| a >= p.vertex_count || b >= p.vertex_count) {
        return Err(PebbleError::Infeasible("edge endpoint out of range".into()));
    }
    let is_start = membership(p.vertex_count, &p.starts, "start")?;
    let is_target = membership(p.vertex_count, &p.targets, "target")?;
    if p.starts.len() != p.targets.len() {
        return Err(PebbleError::Infeasible(format!(
            "{} starts but {} targets",
            p.starts.len(),
            p.targets.len()
        )));
    }
    Ok((adjacency(p), is_start, is_target))
}

/// BFS within the alive part of the tree from `root`; returns parents and
/// the first vertex (by distance, then id) satisfying `want`.
fn nearest(
    tree: &[Vec<usize>],
    alive: &[bool],
    root: usize,
    want: impl Fn(usize) -> bool,
) -> Option<(usize, Vec<usize>)> {
    let n = tree.len();
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut layer = vec![root];
    while !layer.is_empty() {
        let mut hits: Vec<usize> = layer.iter().copied().filter(|&v| v != root && want(v)).collect();
        if !hits.is_empty() {
            hits.sort_unstable();
            let v = hits[0];
            let mut path = vec![v];
            let mut cur = v;
            while cur != root {
                cur = parent[cur];
                path.push(cur);
            }
            // Path runs from the found vertex back to the root.
            return Some((v, path));
        }
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &tree[v] {
                if alive[w] && parent[w] == usize::MAX {
                    parent[w] = v;
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    None
}

/// Solves the problem with the leaf-peeling strategy. Every vertex is
/// removed in exactly one phase.
pub fn solve(problem: &PebbleProblem) -> Result<PebblePlan, PebbleError> {
    let (adj, is_start, is_target) = validate(problem)?;
    let n = problem.vertex_count;
    if n == 0 {
        return Ok(PebblePlan::default());
    }

    // Spanning tree by BFS from vertex 0.
    let mut tree = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                tree[v].push(w);
                tree[w].push(v);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(PebbleError::Infeasible("graph is disconnected".into()));
    }

    let mut occupied = is_start.clone();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = tree.iter().map(Vec::len).collect();
    let mut moves = Vec::new();

    for _phase in 0..n {
        let leaves: Vec<usize> = (0..n).filter(|&v| alive[v] && degree[v] <= 1).collect();
        let leaf = leaves
            .iter()
            .copied()
            .find(|&v| is_target[v])
            .unwrap_or(leaves[0]);
        if is_target[leaf] {
            if !occupied[leaf] {
                let (src, path) = nearest(&tree, &alive, leaf, |v| occupied[v]).ok_or_else(|| {
                    PebbleError::Infeasible("no pebble left for a target".into())
                })?;
                occupied[src] = false;
                occupied[leaf] = true;
                moves.push(PebbleMove {
                    from: src,
                    to: leaf,
                    via: path,
                });
            }
        } else if occupied[leaf] {
            let (_, path) = nearest(&tree, &alive, leaf, |v| !occupied[v])
                .ok_or_else(|| PebbleError::Infeasible("no free vertex to evacuate into".into()))?;
            // path = [hole, ..., leaf]; shift the pebble nearest the hole first.
            for w in path.windows(2) {
                let (to, from) = (w[0], w[1]);
                occupied[from] = false;
                occupied[to] = true;
                moves.push(PebbleMove {
                    from,
                    to,
                    via: vec![from, to],
                });
            }
        }
        alive[leaf] = false;
        for &w in &tree[leaf] {
            if alive[w] {
                degree[w] -= 1;
            }
        }
    }
    Ok(PebblePlan { moves })
}

/// Applies the plan step by step from the start occupancy and returns the
/// final occupancy, or the first illegal move.
pub fn replay(problem: &PebbleProblem, plan: &PebblePlan) -> Result<Vec<bool>, PebbleError> {
    let (adj, is_start, _) = validate(problem)?;
    let n = problem.vertex_count;
    let mut occupied = is_start;
    for (index, m) in plan.moves.iter().enumerate() {
        let illegal = |reason| PebbleError::IllegalMove { index, reason };
        let in_range = m.via.iter().all(|&v| v < n);
        if m.via.len() < 2
            || !in_range
            || m.via[0] != m.from
            || *m.via.last().unwrap() != m.to
            || m.via.windows(2).any(|w| adj[w[0]].binary_search(&w[1]).is_err())
        {
            return Err(illegal(IllegalReason::NonEdge));
        }
        if !occupied[m.from] {
            return Err(illegal(IllegalReason::NoPebbleAtSource));
        }
        if m.via[1..m.via.len() - 1].iter().any(|&v| occupied[v]) {
            return Err(illegal(IllegalReason::OccupiedIntermediate));
        }
        if occupied[m.to] && m.to != m.from {
            return Err(illegal(IllegalReason::OccupiedDestination));
        }
        occupied[m.from] = false;
        occupied[m.to] = true;
    }
    Ok(occupied)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_problem(k: usize) -> PebbleProblem {
        PebbleProblem {
            vertex_count: 2 * k,
            edges: (0..2 * k - 1).map(|i| (i, i + 1)).collect(),
            starts: (0..k).collect(),
            targets: (k..2 * k).collect(),
        }
    }

    fn occupancy_of(n: usize, set: &[usize]) -> Vec<bool> {
        let mut o = vec![false; n];
        for &v in set {
            o[v] = true;
        }
        o
    }

    #[test]
    fn shared_start_and_target_needs_no_moves() {
        let p = PebbleProblem {
            vertex_count: 1,
            edges: vec![],
            starts: vec![0],
            targets: vec![0],
        };
        assert!(solve(&p).unwrap().moves.is_empty());
    }

    #[test]
    fn single_edge() {
        let p = PebbleProblem {
            vertex_count: 2,
            edges: vec![(0, 1)],
            starts: vec![0],
            targets: vec![1],
        };
        let plan = solve(&p).unwrap();
        assert_eq!(plan.unit_steps(), vec![(0, 1)]);
    }

    #[test]
    fn path_of_four() {
        let p = path_problem(2);
        let plan = solve(&p).unwrap();
        assert_eq!(plan.step_count(), 4);
        assert_eq!(replay(&p, &plan).unwrap(), occupancy_of(4, &[2, 3]));
    }

    #[test]
    fn path_family_is_quadratic() {
        for k in 1..=8 {
            let p = path_problem(k);
            let plan = solve(&p).unwrap();
            assert_eq!(plan.step_count(), k * k);
            assert_eq!(replay(&p, &plan).unwrap(), occupancy_of(2 * k, &p.targets));
        }
    }

    #[test]
    fn replay_reports_illegal_moves() {
        let p = PebbleProblem {
            vertex_count: 3,
            edges: vec![(0, 1), (1, 2)],
            starts: vec![0, 1],
            targets: vec![1, 2],
        };
        let mv = |via: Vec<usize>| PebblePlan {
            moves: vec![PebbleMove {
                from: via[0],
                to: *via.last().unwrap(),
                via,
            }],
        };
        let err = |plan| match replay(&p, &plan) {
            Err(PebbleError::IllegalMove { reason, .. }) => reason,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(err(mv(vec![0, 1])), IllegalReason::OccupiedDestination);
        assert_eq!(err(mv(vec![0, 1, 2])), IllegalReason::OccupiedIntermediate);
        assert_eq!(err(mv(vec![0, 2])), IllegalReason::NonEdge);
        assert_eq!(err(mv(vec![2, 1])), IllegalReason::NoPebbleAtSource);
        assert_eq!(replay(&p, &PebblePlan::default()).unwrap(), occupancy_of(3, &[0, 1]));
    }

    #[test]
    fn rejects_bad_problems() {
        let disconnected = PebbleProblem {
            vertex_count: 2,
            edges: vec![],
            starts: vec![0],
            targets: vec![1],
        };
        assert!(matches!(solve(&disconnected), Err(PebbleError::Infeasible(_))));
        let unbalanced = PebbleProblem {
            vertex_count: 2,
            edges: vec![(0, 1)],
            starts: vec![0, 1],
            targets: vec![1],
        };
        assert!(matches!(solve(&unbalanced), Err(PebbleError::Infeasible(_))));
    }
}
