//! Quadrature and spectral results checked against brute-force references.

use eac_core::density::DensityField;
use eac_core::engine::{partition, run_scenario};
use eac_core::geometry::{owner_of, Point2, Site};
use eac_core::graph::CommGraph;
use eac_core::metrics::locational_cost;
use eac_core::scenario::load_scenario;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mass and first moments of every power cell by midpoint rule on a grid
/// over the bounding box `[x0, x1] × [y0, y1]`.
fn grid_moments(
    sites: &[Site],
    bounds: (f64, f64, f64, f64),
    phi: &DensityField,
    n: usize,
) -> Vec<(f64, Point2)> {
    let (x0, y0, x1, y1) = bounds;
    let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let mut acc = vec![(0.0, 0.0, 0.0); sites.len()];
    for a in 0..n {
        for b in 0..n {
            let q = Point2::new(x0 + (a as f64 + 0.5) * hx, y0 + (b as f64 + 0.5) * hy);
            let m = phi.eval(q) * hx * hy;
            let e = &mut acc[owner_of(sites, q)];
            e.0 += m;
            e.1 += m * q.x;
            e.2 += m * q.y;
        }
    }
    acc.into_iter()
        .map(|(m, mx, my)| (m, Point2::new(mx / m, my / m)))
        .collect()
}

fn grid_cost(sites: &[Site], bounds: (f64, f64, f64, f64), phi: &DensityField, n: usize) -> f64 {
    let (x0, y0, x1, y1) = bounds;
    let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            let q = Point2::new(x0 + (a as f64 + 0.5) * hx, y0 + (b as f64 + 0.5) * hy);
            let s = sites[owner_of(sites, q)];
            total += 0.5 * s.power(q) * phi.eval(q) * hx * hy;
        }
    }
    total
}

#[test]
fn bimodal_moments_match_grid() {
    let phi = DensityField::bimodal(0.01);
    let domain = eac_core::geometry::ConvexPolygon::rectangle(0.0, 0.0, 6.0, 6.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let positions: Vec<Point2> = (0..6)
            .map(|_| Point2::new(rng.gen_range(0.3..5.7), rng.gen_range(0.3..5.7)))
            .collect();
        let weights: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        let (sites, cells) = partition(&positions, &weights, &domain, &phi).unwrap();
        let oracle = grid_moments(&sites, (0.0, 0.0, 6.0, 6.0), &phi, 512);
        for (cell, (mass, centroid)) in cells.iter().zip(oracle) {
            if cell.is_empty() {
                assert_eq!(mass, 0.0);
                continue;
            }
            assert!(
                (cell.mass - mass).abs() <= 1e-3 * mass,
                "mass {} vs {mass}",
                cell.mass
            );
            let c = cell.centroid.unwrap();
            assert!(
                c.distance(centroid) <= 1e-3,
                "centroid {c:?} vs {centroid:?}"
            );
        }
    }
}

#[test]
fn locational_cost_matches_grid_on_bundled_scenarios() {
    for name in [
        "scenario0",
        "scenario1",
        "scenario2",
        "scenario3",
        "bimodal",
    ] {
        let cfg = load_scenario(name).unwrap();
        let trace = run_scenario(&cfg).unwrap();
        let last = trace.records.last().unwrap();
        let states = [
            (
                trace.initial.positions.clone(),
                trace.initial.weights.clone(),
            ),
            (
                last.robots.iter().map(|r| r.position).collect(),
                last.weights(),
            ),
        ];
        for (positions, weights) in states {
            let (sites, cells) =
                partition(&positions, &weights, &cfg.domain, &cfg.density).unwrap();
            let got = locational_cost(&cells, &sites, &cfg.density);
            let want = grid_cost(&sites, (0.0, 0.0, 6.0, 6.0), &cfg.density, 512);
            assert!(
                (got - want).abs() <= 1e-3 * want.abs(),
                "{name}: {got} vs {want}"
            );
        }
    }
}

fn oracle_spectrum(g: &CommGraph) -> Vec<f64> {
    let n = g.len();
    let l = g.laplacian();
    let m = DMatrix::from_fn(n, n, |i, j| l[i][j]);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..12).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..(n * n / 2 + 1)),
        )
    })
}

proptest! {
    #[test]
    fn spectrum_matches_eigen_oracle((n, edges) in graph()) {
        let g = CommGraph::from_edges(n, &edges);
        let want = oracle_spectrum(&g);
        let got = g.laplacian_spectrum();
        for (a, b) in got.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9, "{got:?} vs {want:?}");
        }
        prop_assert!((g.algebraic_connectivity() - want[1]).abs() < 1e-9);
        // Laplacians are positive semidefinite.
        prop_assert!(want[0] > -1e-9);
    }

    #[test]
    fn adding_an_edge_never_lowers_lambda2((n, edges) in graph(), extra in (0usize..12, 0usize..12)) {
        let (a, b) = (extra.0 % n, extra.1 % n);
        let before = CommGraph::from_edges(n, &edges);
        let mut more = edges.clone();
        more.push((a, b));
        let after = CommGraph::from_edges(n, &more);
        prop_assert!(oracle_spectrum(&after)[1] >= oracle_spectrum(&before)[1] - 1e-9);
        prop_assert!(after.algebraic_connectivity() >= before.algebraic_connectivity() - 1e-9);
    }

    #[test]
    fn connectivity_agrees_with_lambda2((n, edges) in graph()) {
        let g = CommGraph::from_edges(n, &edges);
        prop_assert_eq!(g.is_connected(), g.algebraic_connectivity() > 1e-9);
        prop_assert_eq!(g.is_connected(), g.component_count() == 1);
    }
}

#[test]
fn complete_graph_lambda2_is_n() {
    for n in 2..10 {
        let ev = oracle_spectrum(&CommGraph::complete(n));
        assert!((ev[1] - n as f64).abs() < 1e-9);
        assert!((CommGraph::complete(n).algebraic_connectivity() - n as f64).abs() < 1e-9);
    }
}
