use lightning_core::analysis::all_sccs;
use lightning_core::lattice::{edge_map, sample_potentials};
use lightning_core::psi::{
    break_report, central_box_bidirectional, estimate_no_break, layer, outer_edge_break_rate, outward_edge_break_rate,
    psi, psi_hat, EdgeClass, PsiParams,
};
use lightning_core::{BoxRegion, Epsilon, RngSeed, Vertex};

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).unwrap()
}

/// Area of `{t < s + ε, t ≥ (1-η)s + ε(1-η)^{-i}}` in the unit square, by the midpoint rule.
fn break_area(e: f64, eta: f64, depth: i32) -> f64 {
    let steps = 200_000;
    let lift = e / (1.0 - eta).powi(depth);
    (0..steps)
        .map(|k| {
            let s = (k as f64 + 0.5) / steps as f64;
            let hi = (s + e).min(1.0);
            let lo = ((1.0 - eta) * s + lift).max(0.0);
            (hi - lo).max(0.0)
        })
        .sum::<f64>()
        / steps as f64
}

#[test]
fn only_shallow_outwards_edges_break() {
    for (e, n) in [(0.2, 50), (0.5, 20), (0.3, 12)] {
        let p = PsiParams::canonical(eps(e), n).unwrap();
        let region = BoxRegion::new(2 * n + 3);
        let reach = (1.0 / e).floor() as u32;
        for seed in 0..20 {
            let field = sample_potentials(region, RngSeed::new(seed, u64::from(n)));
            assert!(central_box_bidirectional(&field, &p).unwrap());
            for edge in break_report(&field, &p).unwrap().broken_edges {
                let EdgeClass::Outwards { depth } = edge.class else {
                    panic!("eps {e}: unexpected break {edge:?}");
                };
                assert!(f64::from(depth) < 1.0 / e, "{edge:?}");
                for v in [edge.from, edge.to] {
                    assert!(2 * n - v.norm() <= reach, "{edge:?}");
                }
            }
        }
    }
}

#[test]
fn central_values_drop_below_eps() {
    let p = PsiParams::canonical(eps(0.2), 30).unwrap();
    let field = sample_potentials(BoxRegion::new(60), RngSeed::new(2, 2));
    let out = psi(&field, &p).unwrap();
    for v in BoxRegion::new(30).vertices() {
        assert!(out.get(v).unwrap() < 0.2);
    }
    for v in BoxRegion::new(60).vertices().filter(|v| layer(*v, 30) == Some(0)) {
        assert_eq!(out.get(v), field.get(v));
    }
}

#[test]
fn outer_break_rate_matches_area() {
    let trials = 200_000;
    for (e, n) in [(0.3, 40), (0.5, 20), (0.2, 50)] {
        let p = PsiParams::canonical(eps(e), n).unwrap();
        let est = outer_edge_break_rate(eps(e), n, trials, RngSeed::new(3, 0)).unwrap();
        let area = break_area(e, p.eta(), 0);
        assert!(area <= p.eta() / 2.0);
        let sigma = (area * (1.0 - area) / trials as f64).sqrt();
        assert!((est.point_estimate - area).abs() <= 3.0 * sigma + 1e-6, "eps {e}: {} vs {area}", est.point_estimate);
        assert!(est.point_estimate <= p.eta() / 2.0 + 3.0 * est.std_error());
    }
}

#[test]
fn deeper_edges_break_less_often() {
    let trials = 200_000;
    let e = 0.3;
    let p = PsiParams::canonical(eps(e), 40).unwrap();
    let outer = outer_edge_break_rate(eps(e), 40, trials, RngSeed::new(4, 0)).unwrap();
    for depth in 1..=3 {
        let inner = outward_edge_break_rate(&p, depth, trials, RngSeed::new(4, u64::from(depth))).unwrap();
        let sigma = inner.std_error().max(outer.std_error());
        assert!(inner.point_estimate <= outer.point_estimate + 3.0 * sigma, "depth {depth}");
        assert!(break_area(e, p.eta(), depth as i32) < break_area(e, p.eta(), 0));
    }
    // Beyond 1/ε the break region is empty.
    assert_eq!(outward_edge_break_rate(&p, 4, 20_000, RngSeed::new(4, 9)).unwrap().successes, 0);
}

#[test]
fn no_break_frequency_is_positive() {
    let r = estimate_no_break(eps(0.5), 20, 2000, RngSeed::new(5, 0)).unwrap();
    assert!(r.estimate.successes > 0);
    assert!(r.estimate.point_estimate > r.asymptotic_floor);
    assert!((r.asymptotic_floor - 0.5f64.powi(16)).abs() < 1e-18);
}

#[test]
fn psi_hat_leaves_outside_edges_alone() {
    let n = 8;
    let p = PsiParams::canonical(eps(0.4), n).unwrap();
    let region = BoxRegion::new(2 * n);
    for seed in 0..10 {
        let field = sample_potentials(region, RngSeed::new(seed, 6));
        let sccs = all_sccs(&edge_map(&psi(&field, &p).unwrap(), p.eps()), region).unwrap();
        let cluster = sccs.component_of(Vertex::ORIGIN);
        let hat = psi_hat(&field, &p, &cluster).unwrap();
        let (before, after) = (edge_map(&field, p.eps()), edge_map(&hat, p.eps()));
        for a in region.vertices().filter(|v| !cluster.contains(v)) {
            for b in [Vertex::new(a.x + 1, a.y), Vertex::new(a.x, a.y + 1)] {
                if region.contains(b) && !cluster.contains(&b) {
                    assert_eq!(before.is_open(a, b), after.is_open(a, b));
                    assert_eq!(before.is_open(b, a), after.is_open(b, a));
                }
            }
        }
    }
}
