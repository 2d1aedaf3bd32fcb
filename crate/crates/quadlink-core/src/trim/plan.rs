//! Reference trajectory for the four-phase transition.
//!
//! Hover holds the origin at the reference altitude. The ready phase ramps
//! angle of attack and tilt linearly from (0, 0) to the equilibrium curve's
//! v = 0+ start point, then holds. Acceleration ramps the speed reference
//! linearly to the cruise target while alpha follows the curve's schedule
//! (linear in time as a consequence) and the nominal tilt is re-solved on the
//! curve at every sample, so each v > 0 sample is an exact equilibrium.

use crate::sim::{phase_at, Phase, PhaseSchedule, ScheduleError};
use crate::vehicle::VehicleParams;

use super::equilibrium::{solve_chi, EquilibriumCurve, TrimError};

/// One time sample of the transition references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSample {
    pub t: f64,
    pub phase: Phase,
    /// Forward speed reference (stability frame) [m/s].
    pub v_ref: f64,
    /// Planned angle of attack / pitch reference [rad].
    pub alpha_ref: f64,
    /// Equilibrium tilt angle for the planned point [rad].
    pub chi_nom: f64,
    /// Altitude reference as NED z [m].
    pub z_ref: f64,
}

/// Time-indexed transition references at a fixed sampling period.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionPlan {
    pub samples: Vec<PlanSample>,
    pub sample_dt: f64,
}

impl TransitionPlan {
    /// Nearest-left (zero-order hold) lookup.
    pub fn sample_at(&self, t: f64) -> &PlanSample {
        let idx = (t / self.sample_dt).floor() as isize;
        let idx = idx.clamp(0, self.samples.len() as isize - 1) as usize;
        &self.samples[idx]
    }
}

/// Builds the transition plan from a phase schedule and an equilibrium curve.
pub fn plan_transition(
    schedule: &PhaseSchedule,
    curve: &EquilibriumCurve,
    p: &VehicleParams,
    sample_dt: f64,
) -> Result<TransitionPlan, TrimError> {
    schedule.validate()?;
    if !(sample_dt > 0.0) {
        return Err(ScheduleError::NonPositive {
            field: "plan_dt",
            value: sample_dt,
        }
        .into());
    }
    if schedule.v_cruise > curve.max_speed() + 1e-9 {
        return Err(TrimError::CruiseOffCurve {
            v_cruise: schedule.v_cruise,
            v_max: curve.max_speed(),
        });
    }

    // Ready-phase target: the curve's start point at vanishing speed.
    let alpha0 = curve.alpha.branch_alpha(0.0);
    let chi0 = solve_chi(0.0, alpha0, p)?;
    // Cruise terminal point.
    let alpha_c = curve.alpha.branch_alpha(schedule.v_cruise);
    let chi_c = solve_chi(schedule.v_cruise, alpha_c, p)?;

    let n = (schedule.t_end / sample_dt).round() as usize;
    let mut samples = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = (i as f64 * sample_dt).min(schedule.t_end);
        let phase = phase_at(t, schedule)?;
        let (v_ref, alpha_ref, chi_nom) = match phase {
            Phase::Hovering => (0.0, 0.0, 0.0),
            Phase::Ready => {
                let s = ((t - schedule.t_ready_start)
                    / (schedule.t_ready_converge - schedule.t_ready_start))
                    .clamp(0.0, 1.0);
                (0.0, s * alpha0, s * chi0)
            }
            Phase::Acceleration => {
                let v = schedule.v_cruise * (t - schedule.t_accel_start)
                    / (schedule.t_accel_end - schedule.t_accel_start);
                if v <= 0.0 {
                    (0.0, alpha0, chi0)
                } else {
                    let alpha = curve.alpha.branch_alpha(v);
                    (v, alpha, solve_chi(v, alpha, p)?)
                }
            }
            Phase::Cruise => (schedule.v_cruise, alpha_c, chi_c),
        };
        samples.push(PlanSample {
            t,
            phase,
            v_ref,
            alpha_ref,
            chi_nom,
            z_ref: schedule.z_ref,
        });
    }
    Ok(TransitionPlan { samples, sample_dt })
}
