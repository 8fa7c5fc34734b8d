//! Every motion-graph edge of random scenes, checked by the validator with
//! all other vertices occupied.

use discplan::free_space::FreeSpace;
use discplan::geom::Point;
use discplan::motion_graph::PositionClass;
use discplan::planner::{motion_graphs, DiscMove, MotionPlan, Scene};
use discplan::validator::{validate, EPS_VAL};
use discplan_cli::gen::{random_scene, GenParams};

#[test]
fn random_instance_edges_keep_clear_of_every_other_vertex() {
    let mut checked = 0;
    let mut hb = 0;
    for seed in 0..50u64 {
        let params = GenParams {
            seed: 1000 + seed,
            n: 20 + (seed as usize % 4) * 10,
            m: 2 + seed as usize % 9,
            ..GenParams::default()
        };
        let scene = random_scene(&params).unwrap();
        let fs = FreeSpace::compute(&scene.polygon).unwrap();
        for g in motion_graphs(&fs, &scene).unwrap() {
            assert!(g.is_connected());
            for e in &g.edges {
                let (a, b) = e.endpoints;
                let (from, to) = (g.vertices[a].position, g.vertices[b].position);
                let others: Vec<Point> = (0..g.vertices.len())
                    .filter(|&v| v != a && v != b)
                    .map(|v| g.vertices[v].position)
                    .collect();
                let probe = Scene {
                    polygon: scene.polygon.clone(),
                    starts: std::iter::once(from).chain(others.iter().copied()).collect(),
                    targets: std::iter::once(to).chain(others.iter().copied()).collect(),
                };
                let plan = MotionPlan {
                    moves: vec![DiscMove {
                        from,
                        to,
                        path: e.recipe.pieces.clone(),
                    }],
                    component_order: vec![g.component],
                };
                let r = validate(&probe, &plan, EPS_VAL).unwrap();
                assert!(r.is_valid(), "seed {seed}, edge ({a}, {b}): {:?}", r.violations);
                assert!(r.max_sample_gap >= 0.0 && r.max_sample_gap <= EPS_VAL);
                checked += 1;
                if g.classes[a] != g.classes[b] || g.classes[a] == PositionClass::Floating {
                    hb += 1;
                }
            }
        }
    }
    assert!(checked > 200, "only {checked} edges");
    assert!(hb > 0, "no edge touches a floating vertex");
}
