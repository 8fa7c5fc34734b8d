//! Scenes whose robots reach into neighbouring components: the plan must
//! run components in interference order to stay valid.

use discplan::free_space::FreeSpace;
use discplan::interference::{build_forest, execution_order, find_interferences};
use discplan::planner::solve;
use discplan::validator::{validate, EPS_VAL};
use discplan_cli::gen::{pinched_scene, GenParams};

#[test]
fn pinched_scenes_solve_in_forest_order() {
    let mut ordered = 0;
    for seed in 0..25u64 {
        let params = GenParams {
            seed: 300 + seed,
            n: 30 + (seed as usize % 3) * 10,
            m: 2 + seed as usize % 5,
            ..GenParams::default()
        };
        let scene = pinched_scene(&params).unwrap();
        let fs = FreeSpace::compute(&scene.polygon).unwrap();
        let records = find_interferences(&fs, &scene.starts, &scene.targets).unwrap();
        let forest = build_forest(fs.components().len(), &records).unwrap();
        let plan = solve(&scene).unwrap();
        let order = execution_order(&forest);
        assert_eq!(plan.component_order, order, "seed {seed}");
        for &(i, j, _) in &forest.edges {
            let at = |c| order.iter().position(|&x| x == c).unwrap();
            assert!(at(i) < at(j));
        }
        ordered += usize::from(!forest.edges.is_empty());
        let report = validate(&scene, &plan, EPS_VAL).unwrap();
        assert!(report.is_valid(), "seed {seed}: {:?}", report.violations);
    }
    assert!(ordered >= 10, "only {ordered} scenes constrain the order");
}
