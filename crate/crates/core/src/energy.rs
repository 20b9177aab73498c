//! Battery model: piecewise-constant temporal/spatial depletion.
//!
//! Energies are in percent of full capacity, rates in percent per step and
//! the spatial coefficient in percent per meter. Depletion rates are carried
//! as positive magnitudes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default threshold on a step-over-step change in depletion rate that
/// triggers re-baselining of the reference energy.
pub const DEFAULT_RATE_RESET_THRESHOLD: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("energy profile: {0}")]
    InvalidProfile(String),
    #[error("energy increased from {prev} to {now}: batteries do not regenerate")]
    Regeneration { prev: f64, now: f64 },
    #[error("non-positive depletion estimate {0}: the temporal coefficient keeps every powered robot draining")]
    NonPositiveRate(f64),
    #[error("time step must be positive, got {0}")]
    BadTimeStep(f64),
}

/// Coefficients in force from `from_step` until the next segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSegment {
    pub from_step: u32,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyProfile {
    e_init: f64,
    schedule: Vec<ScheduleSegment>,
}

impl EnergyProfile {
    pub fn new(e_init: f64, schedule: Vec<ScheduleSegment>) -> Result<Self, EnergyError> {
        if !(e_init.is_finite() && e_init > 0.0 && e_init <= 100.0) {
            return Err(EnergyError::InvalidProfile(format!(
                "initial energy must lie in (0, 100], got {e_init}"
            )));
        }
        let Some(first) = schedule.first() else {
            return Err(EnergyError::InvalidProfile("schedule is empty".into()));
        };
        if first.from_step != 0 {
            return Err(EnergyError::InvalidProfile(format!(
                "schedule must start at step 0, starts at {}",
                first.from_step
            )));
        }
        for (k, seg) in schedule.iter().enumerate() {
            if !(seg.alpha.is_finite() && seg.alpha > 0.0) {
                return Err(EnergyError::InvalidProfile(format!(
                    "segment {k}: alpha must be > 0, got {}",
                    seg.alpha
                )));
            }
            if !(seg.beta.is_finite() && seg.beta >= 0.0) {
                return Err(EnergyError::InvalidProfile(format!(
                    "segment {k}: beta must be >= 0, got {}",
                    seg.beta
                )));
            }
            if k > 0 && seg.from_step <= schedule[k - 1].from_step {
                return Err(EnergyError::InvalidProfile(format!(
                    "segment {k}: from_step {} is not after {}",
                    seg.from_step,
                    schedule[k - 1].from_step
                )));
            }
        }
        Ok(Self { e_init, schedule })
    }

    /// Constant coefficients for the whole run.
    pub fn constant(e_init: f64, alpha: f64, beta: f64) -> Result<Self, EnergyError> {
        Self::new(
            e_init,
            vec![ScheduleSegment {
                from_step: 0,
                alpha,
                beta,
            }],
        )
    }

    pub fn e_init(&self) -> f64 {
        self.e_init
    }

    pub fn schedule(&self) -> &[ScheduleSegment] {
        &self.schedule
    }

    /// Segment covering `step` (a segment applies from its `from_step` inclusive).
    pub fn segment_at(&self, step: u32) -> ScheduleSegment {
        let idx = self.schedule.partition_point(|s| s.from_step <= step);
        self.schedule[idx - 1]
    }

    /// Step at which the last scheduled change takes effect.
    pub fn last_change(&self) -> u32 {
        self.schedule.last().map_or(0, |s| s.from_step)
    }
}

/// Total drain `alpha + beta·|speed|` in percent per step.
pub fn depletion_rate(alpha: f64, beta: f64, speed: f64) -> f64 {
    alpha + beta * speed.abs()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyState {
    pub e_current: f64,
    /// Most recent depletion rate, once the robot has taken a step.
    pub e_dot_last: Option<f64>,
    pub e_dot_prev: Option<f64>,
    /// Reference initial energy; re-baselined when the rate jumps.
    pub e_init_ref: f64,
}

impl EnergyState {
    pub fn new(e_init: f64) -> Self {
        Self {
            e_current: e_init,
            e_dot_last: None,
            e_dot_prev: None,
            e_init_ref: e_init,
        }
    }

    /// Drains `rate·dt`, clamping at empty, and shifts the rate history.
    pub fn step(self, rate: f64, dt: f64) -> Self {
        Self {
            e_current: (self.e_current - rate * dt).max(0.0),
            e_dot_prev: self.e_dot_last,
            e_dot_last: Some(rate),
            e_init_ref: self.e_init_ref,
        }
    }

    /// Records `rate` as the latest measured depletion without draining.
    pub fn with_measured_rate(mut self, rate: f64) -> Self {
        self.e_dot_last = Some(rate);
        self
    }
}

/// Free-function form of [`EnergyState::step`].
pub fn step_energy(state: EnergyState, rate: f64, dt: f64) -> EnergyState {
    state.step(rate, dt)
}

/// Finite-difference depletion rate from two consecutive readings.
pub fn estimate_rate_online(prev: f64, now: f64, dt: f64) -> Result<f64, EnergyError> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(EnergyError::BadTimeStep(dt));
    }
    if now > prev {
        return Err(EnergyError::Regeneration { prev, now });
    }
    let rate = (prev - now) / dt;
    if rate <= 0.0 {
        return Err(EnergyError::NonPositiveRate(rate));
    }
    Ok(rate)
}

/// Which rate changes re-baseline the reference energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateResetMode {
    /// Only increases beyond the threshold.
    OneSided,
    /// Changes of either sign beyond the threshold.
    #[default]
    TwoSided,
}

/// Sets `e_init_ref ← e_current` when the depletion rate jumped by more than `threshold`.
pub fn detect_rate_change_and_reset(
    state: EnergyState,
    threshold: f64,
    mode: RateResetMode,
) -> (bool, EnergyState) {
    let (Some(last), Some(prev)) = (state.e_dot_last, state.e_dot_prev) else {
        return (false, state);
    };
    let diff = last - prev;
    let changed = match mode {
        RateResetMode::OneSided => diff > threshold,
        RateResetMode::TwoSided => diff.abs() > threshold,
    };
    if changed {
        (
            true,
            EnergyState {
                e_init_ref: state.e_current,
                ..state
            },
        )
    } else {
        (false, state)
    }
}
