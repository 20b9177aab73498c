//! Coverage and consensus quality measures.

use crate::density::DensityField;
use crate::geometry::{integrate_polygon, PowerCell, Site};
use crate::graph::CommGraph;

/// Per-robot quantities for one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotMetrics {
    pub area: f64,
    pub mass: f64,
    /// `w_i · Ė_i`.
    pub w_times_edot: f64,
    /// `w_i · Ė_i / E_i^init`.
    pub c_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepMetrics {
    pub locational_cost: f64,
    pub convergence_cost: f64,
    pub robots: Vec<RobotMetrics>,
}

/// `Σ_i ∫_{W_i} ½(‖q − p_i‖² − w_i) φ(q) dq`. Empty cells contribute nothing.
pub fn locational_cost(cells: &[PowerCell], sites: &[Site], density: &DensityField) -> f64 {
    cells
        .iter()
        .filter_map(|cell| cell.polygon.as_ref().map(|poly| (cell.owner, poly)))
        .map(|(i, poly)| {
            let site = sites[i];
            let [v] = integrate_polygon(poly, |q| [0.5 * site.power(q) * density.eval(q)]);
            v
        })
        .sum()
}

/// `Σ_i Σ_{j∈N_i} (c_i − c_j)²`; every edge is counted from both ends.
pub fn convergence_cost(graph: &CommGraph, c: &[f64]) -> f64 {
    (0..graph.len())
        .map(|i| {
            graph
                .neighbors(i)
                .iter()
                .map(|&j| (c[i] - c[j]).powi(2))
                .sum::<f64>()
        })
        .sum()
}

/// `w_i · Ė_i` for each robot.
pub fn weight_energy_products(weights: &[f64], rates: &[f64]) -> Vec<f64> {
    weights.iter().zip(rates).map(|(w, e)| w * e).collect()
}

/// Relative spread `(max − min) / mean` of a set of values (0 for fewer than two).
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean.abs()
}

/// Weight Lyapunov function `Σ ½ (w_i Ė_i)²`.
pub fn weight_lyapunov(weights: &[f64], rates: &[f64]) -> f64 {
    weight_energy_products(weights, rates)
        .iter()
        .map(|x| 0.5 * x * x)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{compute_power_diagram, ConvexPolygon, Point2};
    use approx::assert_relative_eq;

    fn unit_cost(weight: f64, offset: Point2) -> f64 {
        let domain = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0)
            .unwrap()
            .translate(offset);
        let sites = [Site::new(Point2::new(0.5, 0.5) + offset, weight)];
        let cells = compute_power_diagram(&sites, &domain).unwrap();
        locational_cost(&cells, &sites, &DensityField::Uniform)
    }

    #[test]
    fn single_robot_costs() {
        // ½ (1/12 + 1/12)
        assert_relative_eq!(unit_cost(0.0, Point2::ORIGIN), 1.0 / 12.0, epsilon = 1e-14);
        assert_relative_eq!(
            unit_cost(2.0, Point2::ORIGIN),
            1.0 / 12.0 - 1.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            unit_cost(2.0, Point2::new(13.0, -7.5)),
            unit_cost(2.0, Point2::ORIGIN),
            epsilon = 1e-12
        );
    }

    #[test]
    fn convergence_cost_examples() {
        let k2 = CommGraph::complete(2);
        assert_eq!(convergence_cost(&k2, &[1.0, 2.0]), 2.0);
        let p3 = CommGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(convergence_cost(&p3, &[1.0, 2.0, 4.0]), 10.0);
        assert_eq!(convergence_cost(&CommGraph::complete(5), &[0.7; 5]), 0.0);
    }

    #[test]
    fn products_and_spread() {
        let w = [1.5, 1.5, 1.5, 1.5, 0.4, 1.5];
        let e = [1.4, 1.4, 1.4, 1.4, 5.4, 1.4];
        let p = weight_energy_products(&w, &e);
        assert_relative_eq!(p[0], 2.1, epsilon = 1e-12);
        assert_relative_eq!(p[4], 2.16, epsilon = 1e-12);
        assert!(relative_spread(&p) < 0.03);
        assert_eq!(relative_spread(&[3.0]), 0.0);
        assert_eq!(
            relative_spread(&weight_energy_products(&[1.0; 4], &[1.4; 4])),
            0.0
        );
    }
}
