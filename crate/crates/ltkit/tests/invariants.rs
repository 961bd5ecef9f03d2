mod common;

use ltkit::building::{ball, from_ints, BuildingVertex};
use ltkit::cells::{boundary_components, equivariance_check, glue_polygon, Cell};
use ltkit::hecke::{canonical_quotient, reduce_to_domain, DEFAULT_BUDGET};
use ltkit::periods::period_series;
use ltkit::polygon::NewtonPolygon;
use ltkit::valcore::Val;
use ltkit::Error;

#[test]
fn pivot_ledger_integral() {
    for (n, q, depth) in [(2, 2, 4), (2, 3, 4), (3, 2, 3), (3, 3, 2), (4, 2, 2)] {
        let pt = period_series(n, q, depth).unwrap();
        assert!(!pt.ledger.is_empty());
        assert!(pt.ledger.iter().all(|r| r.holds()), "n={n} q={q} {:?}", pt.ledger);
    }
}

#[test]
fn greedy_budget_overrun() {
    let vals = [Val::fin(17, 700), Val::fin(2, 397)];
    let pg = NewtonPolygon::from_vals(3, 2, &vals).unwrap();
    assert!(matches!(reduce_to_domain(&pg, DEFAULT_BUDGET), Err(Error::Budget(_))));
    let r = reduce_to_domain(&pg, 1000).unwrap();
    assert!(r.steps.len() > DEFAULT_BUDGET);
    assert!(r.fin.in_gross_hopkins());
}

#[test]
fn gluing_swaps_boundaries() {
    let mut glued = 0;
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
        let cell = Cell::new(BuildingVertex::standard(n, q), 2);
        for vals in common::grid_points(n - 1, &common::farey_with_inf(8, 2)) {
            let pg = NewtonPolygon::from_vals(n, q, &vals).unwrap();
            if !pg.in_gross_hopkins() {
                continue;
            }
            for i in pg.boundary_indices() {
                let b = &boundary_components(&cell, i).unwrap()[0];
                let img = glue_polygon(b, &pg).unwrap();
                assert_eq!(img, canonical_quotient(&pg, i).unwrap().image);
                assert!(img.boundary_indices().contains(&(n - i)));
                glued += 1;
            }
        }
    }
    assert!(glued > 20);
}

#[test]
fn complex_equivariant() {
    let a: std::collections::BTreeSet<_> = ball(&BuildingVertex::standard(2, 2), 1).unwrap().into_iter().collect();
    let gs = [
        (from_ints(&[vec![1, 0], vec![0, 1]]), 0),
        (from_ints(&[vec![0, 1], vec![1, 0]]), 0),
        (from_ints(&[vec![1, 1], vec![0, 1]]), 0),
        (from_ints(&[vec![1, 0], vec![0, 1]]), 1),
        (from_ints(&[vec![2, 1], vec![1, 1]]), -1),
    ];
    for (g, d) in &gs {
        assert!(equivariance_check(&a, 2, g, *d).unwrap());
    }
}
