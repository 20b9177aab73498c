//! Weight-adaptation laws and position controllers.
//!
//! EAC is the energy-aware law; ATC, PBC and WMTC are the comparison
//! baselines. All robots share the move-to-centroid position law except PBC,
//! whose speed is throttled by remaining energy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ConvexPolygon, Point2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("robot {id}: weight must stay positive, got {weight}")]
    NonPositiveWeight { id: usize, weight: f64 },
    #[error("robot {id}: depletion rate must be positive, got {rate}")]
    NonPositiveRate { id: usize, rate: f64 },
    #[error("robot {id}: reference energy must be positive, got {energy}")]
    NonPositiveEnergy { id: usize, energy: f64 },
    #[error("cell mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("unknown controller {0:?} (expected EAC, ATC, WMTC or PBC)")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ControllerKind {
    Eac,
    Atc,
    Wmtc,
    Pbc,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 4] = [
        ControllerKind::Eac,
        ControllerKind::Atc,
        ControllerKind::Wmtc,
        ControllerKind::Pbc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Eac => "EAC",
            ControllerKind::Atc => "ATC",
            ControllerKind::Wmtc => "WMTC",
            ControllerKind::Pbc => "PBC",
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControllerKind {
    type Err = ControlError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EAC" => Ok(ControllerKind::Eac),
            "ATC" => Ok(ControllerKind::Atc),
            "WMTC" => Ok(ControllerKind::Wmtc),
            "PBC" => Ok(ControllerKind::Pbc),
            _ => Err(ControlError::UnknownKind(s.to_string())),
        }
    }
}

/// Controller and run constants. Distances in meters, time in steps,
/// energies in percent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gains {
    /// Move-to-centroid gain.
    pub k_p: f64,
    /// Weight-adaptation gain.
    pub k_w: f64,
    /// ATC rate-scaling constant.
    pub k_e: f64,
    /// ATC gain multiplier.
    pub alpha_atc: f64,
    /// PBC full-battery speed gain.
    pub pbc_gain: f64,
    /// Full battery level used by PBC.
    pub e_max: f64,
    pub v_max: f64,
    pub dt: f64,
    /// Centroid tolerance ε for termination.
    pub eps_position: f64,
    /// Energy threshold δ for termination.
    pub delta_energy: f64,
    /// Lower bound applied after each adaptive weight update.
    pub w_floor: f64,
    /// Stand-in for the mass of an empty cell in weight-law denominators.
    pub mass_floor: f64,
}

impl Gains {
    pub const DEFAULT_K_P: f64 = 1.0;
    pub const DEFAULT_V_MAX: f64 = 0.4;

    /// Defaults for a workspace of `area` m² shared by `n` robots;
    /// `k_w = 0.1·area/n`.
    pub fn defaults_for(area: f64, n: usize) -> Self {
        Self {
            k_p: Self::DEFAULT_K_P,
            k_w: 0.1 * area / n.max(1) as f64,
            k_e: 1.0,
            alpha_atc: 1.0,
            pbc_gain: Self::DEFAULT_V_MAX,
            e_max: 100.0,
            v_max: Self::DEFAULT_V_MAX,
            dt: 1.0,
            eps_position: 0.01,
            delta_energy: 1.0,
            w_floor: 0.05,
            mass_floor: 1e-6,
        }
    }

    /// Name of the first gain that is not strictly positive and finite.
    pub fn first_invalid(&self) -> Option<(&'static str, f64)> {
        [
            ("k_p", self.k_p),
            ("k_w", self.k_w),
            ("k_e", self.k_e),
            ("alpha_atc", self.alpha_atc),
            ("pbc_gain", self.pbc_gain),
            ("e_max", self.e_max),
            ("v_max", self.v_max),
            ("dt", self.dt),
            ("eps_position", self.eps_position),
            ("delta_energy", self.delta_energy),
            ("w_floor", self.w_floor),
            ("mass_floor", self.mass_floor),
        ]
        .into_iter()
        .find(|(_, v)| !(v.is_finite() && *v > 0.0))
    }
}

/// What a robot shares with its neighbors each round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeighborReport {
    pub id: usize,
    pub weight: f64,
    pub e_init_ref: f64,
    pub e_dot: f64,
}

impl NeighborReport {
    fn validate(&self) -> Result<(), ControlError> {
        if !(self.weight.is_finite() && self.weight > 0.0) {
            return Err(ControlError::NonPositiveWeight {
                id: self.id,
                weight: self.weight,
            });
        }
        if !(self.e_dot.is_finite() && self.e_dot > 0.0) {
            return Err(ControlError::NonPositiveRate {
                id: self.id,
                rate: self.e_dot,
            });
        }
        if !(self.e_init_ref.is_finite() && self.e_init_ref > 0.0) {
            return Err(ControlError::NonPositiveEnergy {
                id: self.id,
                energy: self.e_init_ref,
            });
        }
        Ok(())
    }
}

fn check_inputs(
    me: &NeighborReport,
    neighbors: &[NeighborReport],
    mass: f64,
) -> Result<(), ControlError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(ControlError::NonPositiveMass(mass));
    }
    me.validate()?;
    neighbors.iter().try_for_each(NeighborReport::validate)
}

/// Energy-aware weight rate:
/// `−(k_w/M_i) Σ_j [ w_i/w_j − (E_i^init/E_j^init)(Ė_j/Ė_i) ]`.
pub fn eac_weight_delta(
    me: &NeighborReport,
    neighbors: &[NeighborReport],
    mass: f64,
    k_w: f64,
) -> Result<f64, ControlError> {
    check_inputs(me, neighbors, mass)?;
    let sum: f64 = neighbors
        .iter()
        .map(|nb| me.weight / nb.weight - (me.e_init_ref / nb.e_init_ref) * (nb.e_dot / me.e_dot))
        .sum();
    Ok(-(k_w / mass) * sum)
}

/// Trust-style additive law with trust `e_i = (k_e/Ė_i)²`:
/// `(α k_w / 2M_i) Σ_j [ (w_j − w_i) − (e_j − e_i) ]`.
pub fn atc_weight_delta(
    me: &NeighborReport,
    neighbors: &[NeighborReport],
    mass: f64,
    k_w: f64,
    k_e: f64,
    alpha_atc: f64,
) -> Result<f64, ControlError> {
    check_inputs(me, neighbors, mass)?;
    let trust = |rate: f64| (k_e / rate).powi(2);
    let e_i = trust(me.e_dot);
    let sum: f64 = neighbors
        .iter()
        .map(|nb| (nb.weight - me.weight) - (trust(nb.e_dot) - e_i))
        .sum();
    Ok(alpha_atc * k_w / (2.0 * mass) * sum)
}

/// Energy-budget weight `E/E_max − 1`, in `[−1, 0]`.
pub fn pbc_weight(e_current: f64, e_max: f64) -> f64 {
    e_current / e_max - 1.0
}

/// Energy-throttled velocity toward the centroid: gain `k·E/E_max`,
/// displacement saturated at unit length.
pub fn pbc_velocity(p: Point2, centroid: Point2, e_current: f64, e_max: f64, gain: f64) -> Point2 {
    let d = centroid - p;
    let dist = d.norm();
    if dist == 0.0 {
        return Point2::ORIGIN;
    }
    let k = gain * (e_current / e_max).max(0.0);
    let dir = if dist > 1.0 { d * (1.0 / dist) } else { d };
    dir * k
}

/// Constant unit weight.
pub fn wmtc_weight() -> f64 {
    1.0
}

/// Caps the magnitude of `v` at `v_max`.
pub fn clamp_speed(v: Point2, v_max: f64) -> Point2 {
    let s = v.norm();
    if s > v_max {
        v * (v_max / s)
    } else {
        v
    }
}

/// One move-to-centroid step: `v = k_p (C − p)` capped at `v_max`, then
/// `p + v·dt` projected into the domain.
pub fn position_step(
    p: Point2,
    centroid: Point2,
    k_p: f64,
    v_max: f64,
    dt: f64,
    domain: &ConvexPolygon,
) -> Point2 {
    let v = clamp_speed((centroid - p) * k_p, v_max);
    domain.project(p + v * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn report(id: usize, weight: f64, e_init_ref: f64, e_dot: f64) -> NeighborReport {
        NeighborReport {
            id,
            weight,
            e_init_ref,
            e_dot,
        }
    }

    #[test]
    fn eac_identical_robots_is_zero() {
        let me = report(0, 1.3, 80.0, 2.0);
        let nbs: Vec<_> = (1..6).map(|i| report(i, 1.3, 80.0, 2.0)).collect();
        assert_eq!(eac_weight_delta(&me, &nbs, 6.0, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn eac_pair_signs() {
        let a = report(0, 1.0, 100.0, 5.4);
        let b = report(1, 1.0, 100.0, 1.4);
        let da = eac_weight_delta(&a, &[b], 1.0, 1.0).unwrap();
        let db = eac_weight_delta(&b, &[a], 1.0, 1.0).unwrap();
        assert_relative_eq!(da, -(1.0 - 1.4 / 5.4), epsilon = 1e-15);
        assert_relative_eq!(db, -(1.0 - 5.4 / 1.4), epsilon = 1e-15);
        assert!(da < 0.0 && db > 0.0);
    }

    #[test]
    fn eac_fixed_point_ratio() {
        // w_a/w_b = Ė_b/Ė_a zeroes both brackets
        let a = report(0, 1.4, 100.0, 5.4);
        let b = report(1, 5.4, 100.0, 1.4);
        assert_relative_eq!(
            eac_weight_delta(&a, &[b], 1.0, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            eac_weight_delta(&b, &[a], 1.0, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let ratio: f64 = 1.4 / 5.4;
        assert!((ratio - 0.4 / 1.5).abs() / ratio < 0.03);
    }

    #[test]
    fn eac_rejects_bad_state() {
        let me = report(0, 1.0, 100.0, 1.4);
        assert!(matches!(
            eac_weight_delta(&me, &[report(1, 0.0, 100.0, 1.4)], 1.0, 1.0),
            Err(ControlError::NonPositiveWeight { id: 1, .. })
        ));
        assert!(matches!(
            eac_weight_delta(&me, &[report(1, 1.0, 100.0, 0.0)], 1.0, 1.0),
            Err(ControlError::NonPositiveRate { id: 1, .. })
        ));
        assert!(eac_weight_delta(&me, &[], 0.0, 1.0).is_err());
    }

    #[test]
    fn atc_identical_and_equilibrium() {
        let me = report(0, 1.0, 100.0, 1.4);
        let same: Vec<_> = (1..4).map(|i| report(i, 1.0, 100.0, 1.4)).collect();
        assert_eq!(
            atc_weight_delta(&me, &same, 6.0, 0.6, 1.0, 1.0).unwrap(),
            0.0
        );
        // w_i − e_i equal across the pair ⇒ zero rate
        let (ea, eb) = ((1.0f64 / 5.4).powi(2), (1.0f64 / 1.4).powi(2));
        let a = report(0, 0.5 + ea, 100.0, 5.4);
        let b = report(1, 0.5 + eb, 100.0, 1.4);
        assert_relative_eq!(
            atc_weight_delta(&a, &[b], 1.0, 1.0, 1.0, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        // offset equilibrium, not a ratio: e-difference ≈ 0.48 for these rates
        assert_relative_eq!(eb - ea, 0.4759, epsilon = 1e-4);
    }

    #[test]
    fn pbc_weights() {
        assert_eq!(pbc_weight(100.0, 100.0), 0.0);
        assert_relative_eq!(pbc_weight(10.0, 100.0), -0.9, epsilon = 1e-15);
        assert_eq!(pbc_weight(0.0, 100.0), -1.0);
    }

    #[test]
    fn pbc_velocities() {
        let p = Point2::new(1.0, 1.0);
        assert_eq!(pbc_velocity(p, p, 100.0, 100.0, 0.4), Point2::ORIGIN);
        let v = pbc_velocity(Point2::ORIGIN, Point2::new(3.0, 4.0), 100.0, 100.0, 0.4);
        assert_relative_eq!(v.norm(), 0.4, epsilon = 1e-15);
        assert_relative_eq!(v.x / v.y, 0.75, epsilon = 1e-15);
        let v = pbc_velocity(Point2::ORIGIN, Point2::new(3.0, 4.0), 0.0, 100.0, 0.4);
        assert_eq!(v.norm(), 0.0);
        let v = pbc_velocity(Point2::ORIGIN, Point2::new(0.5, 0.0), 50.0, 100.0, 0.4);
        assert_relative_eq!(v.x, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn move_to_centroid() {
        let dom = ConvexPolygon::rectangle(-1.0, -1.0, 6.0, 6.0).unwrap();
        let p = Point2::new(0.0, 0.0);
        assert_eq!(position_step(p, p, 1.0, 0.4, 1.0, &dom), p);
        let q = position_step(p, Point2::new(3.0, 0.0), 1.0, 0.4, 1.0, &dom);
        assert_relative_eq!(q.x, 0.4, epsilon = 1e-15);
        assert_eq!(q.y, 0.0);
        let q = position_step(p, Point2::new(0.1, 0.0), 1.0, 0.4, 1.0, &dom);
        assert_relative_eq!(q.x, 0.1, epsilon = 1e-15);
        // domain projection
        let small = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let q = position_step(
            Point2::new(0.9, 0.5),
            Point2::new(5.0, 0.5),
            1.0,
            0.4,
            1.0,
            &small,
        );
        assert_eq!(q, Point2::new(1.0, 0.5));
    }

    #[test]
    fn wmtc_is_constant() {
        assert_eq!(wmtc_weight(), 1.0);
    }

    #[test]
    fn default_gains() {
        let g = Gains::defaults_for(36.0, 6);
        assert_relative_eq!(g.k_w, 0.6, epsilon = 1e-15);
        assert_eq!(g.first_invalid(), None);
        let bad = Gains { dt: 0.0, ..g };
        assert_eq!(bad.first_invalid(), Some(("dt", 0.0)));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "eac".parse::<ControllerKind>().unwrap(),
            ControllerKind::Eac
        );
        assert_eq!(
            " PBC ".parse::<ControllerKind>().unwrap(),
            ControllerKind::Pbc
        );
        assert!("MPC".parse::<ControllerKind>().is_err());
    }
}
