//! Power diagrams (weighted Voronoi partitions) clipped to a convex domain.

use super::{clip_raw, ConvexPolygon, GeometryError, Point2, GEOM_EPS};
use crate::density::DensityField;

/// Weight differences below this are treated as ties between coincident sites.
const WEIGHT_TIE_EPS: f64 = 1e-12;

/// A weighted generator. `weight` is in m².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub position: Point2,
    pub weight: f64,
}

impl Site {
    pub fn new(position: Point2, weight: f64) -> Self {
        Self { position, weight }
    }

    /// Power distance `‖q − p‖² − w`.
    pub fn power(&self, q: Point2) -> f64 {
        (q - self.position).norm_sq() - self.weight
    }
}

/// One robot's region of the power diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerCell {
    pub owner: usize,
    /// `None` when the robot's weight is dominated and it owns no area.
    pub polygon: Option<ConvexPolygon>,
    pub area: f64,
    pub mass: f64,
    /// `None` for empty cells or before moments are computed.
    pub centroid: Option<Point2>,
}

impl PowerCell {
    pub fn is_empty(&self) -> bool {
        self.polygon.is_none()
    }

    /// Fills `mass` and `centroid` from the density.
    pub fn fill_moments(&mut self, density: &DensityField) {
        match &self.polygon {
            Some(poly) => {
                let m = super::cell_moments(poly, density);
                self.mass = m.mass;
                self.centroid = m.centroid;
            }
            None => {
                self.mass = 0.0;
                self.centroid = None;
            }
        }
    }
}

/// Builds the power diagram of `sites` restricted to `domain`.
///
/// Each cell is the domain clipped against the radical axis with every other
/// site. Coincident sites with equal weights are resolved in favor of the
/// lower index. Moments are left zeroed; see [`PowerCell::fill_moments`].
pub fn compute_power_diagram(
    sites: &[Site],
    domain: &ConvexPolygon,
) -> Result<Vec<PowerCell>, GeometryError> {
    if sites.is_empty() {
        return Err(GeometryError::InvalidArgument(
            "power diagram needs at least one site".into(),
        ));
    }
    for (i, s) in sites.iter().enumerate() {
        if !s.position.is_finite() || !s.weight.is_finite() {
            return Err(GeometryError::InvalidArgument(format!(
                "site {i} has a non-finite position or weight"
            )));
        }
    }
    Ok((0..sites.len())
        .map(|i| {
            let polygon = power_cell(sites, i, domain);
            let area = polygon.as_ref().map_or(0.0, ConvexPolygon::area);
            PowerCell {
                owner: i,
                polygon,
                area,
                mass: 0.0,
                centroid: None,
            }
        })
        .collect())
}

fn power_cell(sites: &[Site], i: usize, domain: &ConvexPolygon) -> Option<ConvexPolygon> {
    let si = sites[i];
    let mut cell = domain.clone();
    for (j, sj) in sites.iter().enumerate() {
        if j == i {
            continue;
        }
        let normal = sj.position - si.position;
        if normal.norm() <= GEOM_EPS {
            let dw = si.weight - sj.weight;
            let loses = dw < -WEIGHT_TIE_EPS || (dw.abs() <= WEIGHT_TIE_EPS && j < i);
            if loses {
                return None;
            }
            continue;
        }
        // ‖q−pi‖² − wi ≤ ‖q−pj‖² − wj  ⇔  q·n ≤ (‖pj‖² − ‖pi‖² + wi − wj)/2
        // Offsets are taken relative to pi to keep the arithmetic well scaled.
        let offset = 0.5 * (normal.norm_sq() + si.weight - sj.weight);
        let point = si.position + normal * (offset / normal.norm_sq());
        cell = clip_raw(&cell, point, normal)?;
    }
    Some(cell)
}

/// Index of the site with the least power distance to `q`; ties go to the lower index.
pub fn owner_of(sites: &[Site], q: Point2) -> usize {
    let mut best = 0;
    let mut best_p = f64::INFINITY;
    for (i, s) in sites.iter().enumerate() {
        let p = s.power(q);
        if p < best_p {
            best_p = p;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square6() -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, 0.0, 6.0, 6.0).unwrap()
    }

    #[test]
    fn single_site_owns_domain() {
        let cells =
            compute_power_diagram(&[Site::new(Point2::new(4.0, 1.0), 7.5)], &square6()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_relative_eq!(cells[0].area, 36.0, epsilon = 1e-12);
    }

    #[test]
    fn equal_weights_bisect() {
        let sites = [
            Site::new(Point2::new(1.0, 1.0), 1.0),
            Site::new(Point2::new(5.0, 1.0), 1.0),
        ];
        let cells = compute_power_diagram(&sites, &square6()).unwrap();
        assert_relative_eq!(cells[0].area, 18.0, epsilon = 1e-12);
        assert_relative_eq!(cells[1].area, 18.0, epsilon = 1e-12);
        let (lo, hi) = cells[0].polygon.as_ref().unwrap().bounds();
        assert_relative_eq!(lo.x, 0.0);
        assert_relative_eq!(hi.x, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn radical_axis_offset() {
        // (d² + w1 − w2)/(2d) = (4 + 1 − 0)/4
        let domain = ConvexPolygon::rectangle(-1.0, -1.0, 3.0, 1.0).unwrap();
        let sites = [
            Site::new(Point2::new(0.0, 0.0), 1.0),
            Site::new(Point2::new(2.0, 0.0), 0.0),
        ];
        let cells = compute_power_diagram(&sites, &domain).unwrap();
        let (_, hi) = cells[0].polygon.as_ref().unwrap().bounds();
        let (lo, _) = cells[1].polygon.as_ref().unwrap().bounds();
        assert_relative_eq!(hi.x, 1.25, epsilon = 1e-12);
        assert_relative_eq!(lo.x, 1.25, epsilon = 1e-12);
        // grid membership brute force on the same boundary
        for k in 0..400 {
            let x = -1.0 + 4.0 * (k as f64 + 0.5) / 400.0;
            let q = Point2::new(x, 0.3);
            if (x - 1.25).abs() > 1e-7 {
                assert_eq!(owner_of(&sites, q), usize::from(x > 1.25));
            }
        }
    }

    #[test]
    fn dominated_site_gets_empty_cell() {
        let sites = [
            Site::new(Point2::new(1.0, 1.0), 100.0),
            Site::new(Point2::new(1.5, 1.0), 0.0),
        ];
        let cells = compute_power_diagram(&sites, &square6()).unwrap();
        assert!(cells[1].is_empty());
        assert_eq!(cells[1].area, 0.0);
        assert_relative_eq!(cells[0].area, 36.0, epsilon = 1e-12);
    }

    #[test]
    fn coincident_tie_goes_to_lower_id() {
        let p = Point2::new(2.0, 2.0);
        let sites = [
            Site::new(Point2::new(5.0, 5.0), 1.0),
            Site::new(p, 1.0),
            Site::new(p, 1.0),
        ];
        let cells = compute_power_diagram(&sites, &square6()).unwrap();
        assert!(!cells[1].is_empty());
        assert!(cells[2].is_empty());
        let total: f64 = cells.iter().map(|c| c.area).sum();
        assert_relative_eq!(total, 36.0, epsilon = 1e-9);
    }

    #[test]
    fn nan_input_rejected() {
        let sites = [Site::new(Point2::new(f64::NAN, 1.0), 1.0)];
        assert!(matches!(
            compute_power_diagram(&sites, &square6()),
            Err(GeometryError::InvalidArgument(_))
        ));
        let sites = [Site::new(Point2::new(1.0, 1.0), f64::NAN)];
        assert!(compute_power_diagram(&sites, &square6()).is_err());
        assert!(compute_power_diagram(&[], &square6()).is_err());
    }
}
