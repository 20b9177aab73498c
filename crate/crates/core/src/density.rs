//! Importance density φ(q) over the workspace.

use std::cmp::Ordering;

use thiserror::Error;

use crate::geometry::Point2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("covariance {0:?} is not symmetric positive-definite")]
    NotSpd([[f64; 2]; 2]),
    #[error("mixture weight must be positive and finite, got {0}")]
    BadMixtureWeight(f64),
    #[error("density floor must be non-negative and finite, got {0}")]
    BadFloor(f64),
    #[error("component mean must be finite")]
    BadMean,
}

/// Unnormalized Gaussian bump `weight · exp(−½ (q−μ)ᵀ Σ⁻¹ (q−μ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianBump {
    mean: Point2,
    covariance: [[f64; 2]; 2],
    inverse: [[f64; 2]; 2],
    weight: f64,
}

impl GaussianBump {
    pub fn new(mean: Point2, covariance: [[f64; 2]; 2], weight: f64) -> Result<Self, DensityError> {
        if !mean.is_finite() {
            return Err(DensityError::BadMean);
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(DensityError::BadMixtureWeight(weight));
        }
        let [[a, b], [c, d]] = covariance;
        let finite = covariance.iter().flatten().all(|v| v.is_finite());
        let det = a * d - b * c;
        if !finite || b != c || a <= 0.0 || det <= 0.0 {
            return Err(DensityError::NotSpd(covariance));
        }
        let inverse = [[d / det, -b / det], [-c / det, a / det]];
        Ok(Self {
            mean,
            covariance,
            inverse,
            weight,
        })
    }

    /// `Σ = variance · I`.
    pub fn isotropic(mean: Point2, variance: f64, weight: f64) -> Result<Self, DensityError> {
        Self::new(mean, [[variance, 0.0], [0.0, variance]], weight)
    }

    pub fn mean(&self) -> Point2 {
        self.mean
    }

    pub fn covariance(&self) -> [[f64; 2]; 2] {
        self.covariance
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn eval(&self, q: Point2) -> f64 {
        let r = q - self.mean;
        let [[a, b], [c, d]] = self.inverse;
        let quad = r.x * (a * r.x + b * r.y) + r.y * (c * r.x + d * r.y);
        self.weight * (-0.5 * quad).exp()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let key = |g: &Self| {
            [
                g.mean.x,
                g.mean.y,
                g.covariance[0][0],
                g.covariance[0][1],
                g.covariance[1][1],
                g.weight,
            ]
        };
        key(self)
            .iter()
            .zip(key(other).iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum DensityField {
    /// φ ≡ 1.
    #[default]
    Uniform,
    /// `floor + Σ_k bump_k(q)`.
    GaussianMixture {
        components: Vec<GaussianBump>,
        floor: f64,
    },
}

impl DensityField {
    /// Builds a mixture. Components are stored in a canonical order so the
    /// summation, and hence the bit pattern of every value, does not depend
    /// on the order they were supplied in.
    pub fn mixture(mut components: Vec<GaussianBump>, floor: f64) -> Result<Self, DensityError> {
        if !(floor.is_finite() && floor >= 0.0) {
            return Err(DensityError::BadFloor(floor));
        }
        components.sort_by(GaussianBump::canonical_cmp);
        Ok(DensityField::GaussianMixture { components, floor })
    }

    /// The two-bump field with means (2,2) and (4,4), Σ = 0.9·I, unit peaks.
    pub fn bimodal(floor: f64) -> Self {
        let bumps = [Point2::new(2.0, 2.0), Point2::new(4.0, 4.0)]
            .into_iter()
            .map(|m| GaussianBump::isotropic(m, 0.9, 1.0).expect("constant parameters are valid"))
            .collect();
        Self::mixture(bumps, floor).expect("constant floor is valid")
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, DensityField::Uniform)
    }

    pub fn eval(&self, q: Point2) -> f64 {
        match self {
            DensityField::Uniform => 1.0,
            DensityField::GaussianMixture { components, floor } => {
                components.iter().fold(*floor, |acc, g| acc + g.eval(q))
            }
        }
    }
}

/// Free-function form of [`DensityField::eval`].
pub fn eval_density(field: &DensityField, q: Point2) -> f64 {
    field.eval(q)
}
