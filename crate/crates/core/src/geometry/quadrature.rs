//! Density-weighted integration over convex polygons.
//!
//! Polygons are fan-triangulated and each triangle is mapped from the unit
//! square with a collapsed (Duffy) transform, then integrated with a
//! tensor-product Gauss–Legendre rule.

use std::sync::OnceLock;

use super::{ConvexPolygon, Point2};
use crate::density::DensityField;

/// Gauss–Legendre points per axis used for cell integrals.
pub const QUAD_ORDER: usize = 16;

/// Mass and density-weighted centroid of a region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellMoments {
    pub mass: f64,
    pub centroid: Option<Point2>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending by node.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights mapped to `[0, 1]`.
fn unit_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(QUAD_ORDER);
        (
            x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
            w.iter().map(|&t| 0.5 * t).collect(),
        )
    })
}

/// Integrates a vector-valued function over `poly`.
pub fn integrate_polygon<const N: usize>(
    poly: &ConvexPolygon,
    f: impl Fn(Point2) -> [f64; N],
) -> [f64; N] {
    let (nodes, weights) = unit_rule();
    let v = poly.vertices();
    let a = v[0];
    let mut acc = [0.0; N];
    for k in 1..v.len() - 1 {
        let (b, c) = (v[k], v[k + 1]);
        let ab = b - a;
        let bc = c - b;
        let jac = ab.cross(bc).abs();
        for (&u, &wu) in nodes.iter().zip(weights) {
            for (&t, &wt) in nodes.iter().zip(weights) {
                let q = a + ab * u + bc * (u * t);
                let scale = wu * wt * u * jac;
                let val = f(q);
                for (s, x) in acc.iter_mut().zip(val) {
                    *s += scale * x;
                }
            }
        }
    }
    acc
}

/// Mass `∫φ` and centroid `∫qφ / ∫φ` of a polygon under `density`.
///
/// Uniform density takes the exact polygon formulas; mixtures use quadrature.
pub fn cell_moments(poly: &ConvexPolygon, density: &DensityField) -> CellMoments {
    if density.is_uniform() {
        let mass = poly.area();
        return CellMoments {
            mass,
            centroid: (mass > 0.0).then(|| poly.centroid()),
        };
    }
    let origin = poly.vertices()[0];
    let [m, mx, my] = integrate_polygon(poly, |q| {
        let phi = density.eval(q);
        let r = q - origin;
        [phi, r.x * phi, r.y * phi]
    });
    CellMoments {
        mass: m,
        centroid: (m > 0.0).then(|| origin + Point2::new(mx / m, my / m)),
    }
}
