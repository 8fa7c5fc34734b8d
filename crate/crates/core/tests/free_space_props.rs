use std::f64::consts::PI;

use discplan::free_space::FreeSpace;
use discplan::geom::{point_in_polygon, Location, Point, Polygon};
use discplan::validator::grid_free_space_oracle;
use proptest::prelude::*;

fn l_shape(a: f64, b: f64, c: f64, d: f64) -> Polygon {
    Polygon::new(
        [(0., 0.), (a, 0.), (a, d), (c, d), (c, b), (0., b)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect(),
    )
    .unwrap()
}

fn brute_free(poly: &Polygon, p: Point) -> bool {
    point_in_polygon(p, poly) == Location::Inside && poly.boundary_distance(p) >= 1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rectangle_free_space_is_the_shrunk_rectangle(w in 2.2f64..30.0, h in 2.2f64..30.0) {
        let poly = Polygon::new(vec![
            Point::new(0., 0.), Point::new(w, 0.), Point::new(w, h), Point::new(0., h),
        ]).unwrap();
        let fs = FreeSpace::compute(&poly).unwrap();
        prop_assert_eq!(fs.components().len(), 1);
        let expected = (w - 2.0) * (h - 2.0);
        prop_assert!((fs.components()[0].area - expected).abs() < 1e-9 * expected.max(1.0));
    }

    #[test]
    fn l_shape_membership_matches_brute_force(
        a in 6.0f64..20.0, b in 6.0f64..20.0,
        cf in 0.3f64..0.7, df in 0.3f64..0.7,
        pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 200),
    ) {
        let poly = l_shape(a, b, a * cf, b * df);
        let fs = FreeSpace::compute(&poly).unwrap();
        for (u, v) in pts {
            let p = Point::new(u * a, v * b);
            let clearance = if point_in_polygon(p, &poly) == Location::Inside {
                poly.boundary_distance(p)
            } else {
                -1.0
            };
            if (clearance - 1.0).abs() < 1e-6 {
                continue;
            }
            prop_assert_eq!(fs.locate(p).is_some(), brute_free(&poly, p), "at {:?}", p);
        }
    }

    #[test]
    fn collision_regions_lie_in_the_disc(
        a in 8.0f64..16.0, b in 8.0f64..16.0,
        u in 0.0f64..1.0, v in 0.0f64..1.0,
    ) {
        let poly = l_shape(a, b, a / 2.0, b / 2.0);
        let fs = FreeSpace::compute(&poly).unwrap();
        let x = Point::new(u * a, v * b);
        prop_assume!(fs.locate(x).is_some());
        let r = fs.collision_region(x).unwrap();
        prop_assert!(r.region.area <= 4.0 * PI + 1e-9);
        prop_assert!(r.region.area > 0.0);
        for tp in r.boundary().pieces() {
            prop_assert!(tp.piece.start().dist(x) <= 2.0 + 1e-9);
        }
    }
}

#[test]
fn l_shape_area_matches_grid() {
    for &(a, b, c, d) in &[(10., 10., 5., 5.), (14., 8., 4., 3.5), (7., 12., 3.2, 6.)] {
        let poly = l_shape(a, b, c, d);
        let fs = FreeSpace::compute(&poly).unwrap();
        let grid = grid_free_space_oracle(&poly, 0.02);
        assert_eq!(fs.components().len(), grid.component_count);
        let exact: f64 = fs.components().iter().map(|c| c.area).sum();
        assert!((exact - grid.free_area()).abs() < 0.02 * exact, "{exact} vs {}", grid.free_area());
    }
}

/// A reflex-vertex arc tangent to an offset edge, crossed by a third curve
/// 2.4e-4 from the tangent point, leaves a sliver about 3e-8 thick.
#[test]
fn near_tangent_sliver() {
    let pts = [
        (0.0, 203.45510963911522), (11.91198904532653, 203.45510963911522),
        (11.91198904532653, 182.53844588874338), (26.762730193954944, 182.53844588874338),
        (26.762730193954944, 181.96303690810322), (27.668352298876705, 181.96303690810322),
        (27.668352298876705, 156.4888115637608), (26.762730193954944, 156.4888115637608),
        (26.762730193954944, 133.45281086219876), (43.008771481484416, 133.45281086219876),
        (43.008771481484416, 142.63490359403954), (60.95462424867587, 142.63490359403954),
        (60.95462424867587, 156.4888115637608), (76.03913300666572, 156.4888115637608),
        (76.03913300666572, 133.45281086219876), (79.1609376084523, 133.45281086219876),
        (79.1609376084523, 142.63490359403954), (88.18028260251921, 142.63490359403954),
        (88.18028260251921, 156.4888115637608), (102.25672940903671, 156.4888115637608),
        (102.25672940903671, 161.9590877362643), (111.01973439133809, 161.9590877362643),
        (111.01973439133809, 142.63490359403954), (132.46498699089543, 142.63490359403954),
        (132.46498699089543, 156.4888115637608), (148.30086464138483, 156.4888115637608),
        (148.30086464138483, 142.63490359403954), (154.65586342981507, 142.63490359403954),
        (154.65586342981507, 161.9590877362643), (166.48436956222386, 161.9590877362643),
        (166.48436956222386, 156.4888115637608), (179.5721776666351, 156.4888115637608),
        (179.5721776666351, 181.96303690810322), (154.65586342981507, 181.96303690810322),
        (154.65586342981507, 189.15808724418935), (166.48436956222386, 189.15808724418935),
        (166.48436956222386, 226.48377999176967), (165.18513621133818, 226.48377999176967),
        (165.18513621133818, 238.53189450342242), (0.0, 238.53189450342242),
    ];
    let poly = Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    let fs = FreeSpace::compute(&poly).unwrap();
    let grid = grid_free_space_oracle(&poly, 0.1);
    assert_eq!(fs.components().len(), grid.component_count);
    let area: f64 = fs.components().iter().map(|c| c.area).sum();
    assert!((area - grid.free_area()).abs() < 0.02 * area, "{area} vs {}", grid.free_area());
}
