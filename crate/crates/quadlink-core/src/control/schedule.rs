//! LQR position controllers and the offline gain schedule.
//!
//! The hover controller works on `xi = [x_w, v_b, eta]` and outputs
//! `[f_rot_z_ref, omega_ref]`. The cruise controller works in the tilde
//! coordinates `xi_t = [x_w, v_t, eta_t]` (Y-X-Z angles, pitch-derotated
//! velocity) and outputs `[f_tilde_x, f_tilde_z, eta_t_dot_ref]`, which
//! [`output_transform`] maps back to body force components and a body rate
//! reference. Gains are synthesized offline along the transition plan and
//! looked up with zero-order hold.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::rotation::{rot_y, rotation_zyx, yxz_angles_from_rotation, yxz_rate_matrix, AttitudeError};
use crate::sim::Phase;
use crate::trim::TransitionPlan;
use crate::vehicle::{lift_drag, RigidBodyState, VehicleParams};

use super::care::{max_real_eigenvalue, solve_care};
use super::linearize::linearize;
use super::models::{cruise_model, hover_model, CRUISE_INPUT_DIM, HOVER_INPUT_DIM, STATE_DIM_9};
use super::ControlError;

/// LQR weight pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrWeights {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl LqrWeights {
    pub fn from_diagonals(q: &[f64], r: &[f64]) -> Self {
        Self {
            q: DMatrix::from_diagonal(&DVector::from_row_slice(q)),
            r: DMatrix::from_diagonal(&DVector::from_row_slice(r)),
        }
    }
}

/// One scheduled gain: feedback matrix, reference state, and feedforward.
#[derive(Debug, Clone, PartialEq)]
pub struct GainEntry {
    pub t: f64,
    pub phase: Phase,
    /// m×9 feedback gain (m = 4 hover, 5 cruise).
    pub k: DMatrix<f64>,
    pub x_ref: DVector<f64>,
    pub u_ref: DVector<f64>,
}

/// Time-indexed gains with zero-order-hold lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSchedule {
    pub entries: Vec<GainEntry>,
    pub sample_dt: f64,
}

impl GainSchedule {
    /// Nearest-left entry.
    pub fn entry_at(&self, t: f64) -> &GainEntry {
        let idx = (t / self.sample_dt).floor() as isize;
        let idx = idx.clamp(0, self.entries.len() as isize - 1) as usize;
        &self.entries[idx]
    }
}

/// Hover LQR state `[x_w, v_b, eta]`.
pub fn hover_state(state: &RigidBodyState) -> DVector<f64> {
    let mut xi = DVector::zeros(STATE_DIM_9);
    for i in 0..3 {
        xi[i] = state.x_w[i];
        xi[3 + i] = state.v_b[i];
        xi[6 + i] = state.eta[i];
    }
    xi
}

/// Hover reference and feedforward: origin at the commanded altitude, level
/// attitude, thrust canceling weight.
pub fn hover_reference(z_ref: f64, p: &VehicleParams) -> (DVector<f64>, DVector<f64>) {
    let mut x_ref = DVector::zeros(STATE_DIM_9);
    x_ref[2] = z_ref;
    let mut u_ref = DVector::zeros(HOVER_INPUT_DIM);
    u_ref[0] = -p.weight();
    (x_ref, u_ref)
}

/// Cruise reference and feedforward for a planned `(v_ref, alpha_ref)`
/// sample. The reference tilde-velocity is `[v_ref, 0, 0]`: level flight
/// advances the unpitched frame along x only. Feedforward force cancels drag
/// and the weight not carried by the wing.
pub fn cruise_reference(
    v_ref: f64,
    alpha_ref: f64,
    z_ref: f64,
    p: &VehicleParams,
) -> (DVector<f64>, DVector<f64>) {
    let (lift, drag) = lift_drag(v_ref, alpha_ref, &p.aero);
    let mut x_ref = DVector::zeros(STATE_DIM_9);
    x_ref[2] = z_ref;
    x_ref[3] = v_ref;
    x_ref[7] = alpha_ref;
    let mut u_ref = DVector::zeros(CRUISE_INPUT_DIM);
    u_ref[0] = drag;
    u_ref[1] = lift - p.weight();
    (x_ref, u_ref)
}

/// `u = u_ref − K (xi − xi_ref)`.
pub fn hover_position_control(xi: &DVector<f64>, entry: &GainEntry) -> DVector<f64> {
    entry.u_ref.clone() - &entry.k * (xi - &entry.x_ref)
}

/// Tilde state `[x_w, v_t, eta_t]` with `v_t = R_y(theta_t) v_b` and the
/// Y-X-Z angle triplet extracted from the plant attitude.
pub fn cruise_state_transform(state: &RigidBodyState) -> Result<DVector<f64>, AttitudeError> {
    let r = rotation_zyx(&state.eta);
    let eta_t = yxz_angles_from_rotation(&r)?;
    let v_t = rot_y(eta_t[1]) * state.v_b;
    let mut xi = DVector::zeros(STATE_DIM_9);
    for i in 0..3 {
        xi[i] = state.x_w[i];
        xi[3 + i] = v_t[i];
        xi[6 + i] = eta_t[i];
    }
    Ok(xi)
}

/// `u_t = u_ref − K ε` with the x-position error zeroed: x is uncontrolled
/// in cruise, speed is regulated through the tilde-velocity error instead.
pub fn cruise_position_control(xi_t: &DVector<f64>, entry: &GainEntry) -> DVector<f64> {
    let mut err = xi_t - &entry.x_ref;
    err[0] = 0.0;
    entry.u_ref.clone() - &entry.k * err
}

/// Maps the cruise LQR output back to the hover controller's form: body-frame
/// force components `(f_rot_x_ref, f_rot_z_ref)` by derotating the tilde
/// force through the current pitch, and a body rate reference through the
/// Y-X-Z kinematic map (finite everywhere; only the inverse direction
/// degenerates at |phi_t| = pi/2).
pub fn output_transform(u_t: &DVector<f64>, eta_t: &Vector3<f64>) -> (f64, f64, Vector3<f64>) {
    let f_body = rot_y(eta_t[1]).transpose() * Vector3::new(u_t[0], 0.0, u_t[1]);
    let omega_ref = yxz_rate_matrix(eta_t) * Vector3::new(u_t[2], u_t[3], u_t[4]);
    (f_body[0], f_body[2], omega_ref)
}

/// Synthesizes the gain schedule along a transition plan: per sample, build
/// the phase reference, linearize the phase design model there, and solve the
/// Riccati equation with the phase weights. Consecutive samples with
/// identical references reuse the previous gain, so constant-reference spans
/// (hover, ready hold, cruise) synthesize once.
pub fn build_gain_schedule(
    plan: &TransitionPlan,
    hover_weights: &LqrWeights,
    cruise_weights: &LqrWeights,
    p: &VehicleParams,
) -> Result<GainSchedule, ControlError> {
    for (w, m, name) in [
        (hover_weights, HOVER_INPUT_DIM, "hover"),
        (cruise_weights, CRUISE_INPUT_DIM, "cruise"),
    ] {
        if w.q.nrows() != STATE_DIM_9 || w.q.ncols() != STATE_DIM_9 {
            return Err(ControlError::InvalidWeights(format!(
                "{name} Q must be 9x9, got {}x{}",
                w.q.nrows(),
                w.q.ncols()
            )));
        }
        if w.r.nrows() != m || w.r.ncols() != m {
            return Err(ControlError::InvalidWeights(format!(
                "{name} R must be {m}x{m}, got {}x{}",
                w.r.nrows(),
                w.r.ncols()
            )));
        }
    }

    let mut entries: Vec<GainEntry> = Vec::with_capacity(plan.samples.len());
    for s in &plan.samples {
        let is_hover = s.phase == Phase::Hovering;
        let (x_ref, u_ref) = if is_hover {
            hover_reference(s.z_ref, p)
        } else {
            cruise_reference(s.v_ref, s.alpha_ref, s.z_ref, p)
        };
        let reused = entries.last().and_then(|prev| {
            let same_kind = (prev.phase == Phase::Hovering) == is_hover;
            (same_kind && prev.x_ref == x_ref && prev.u_ref == u_ref).then(|| prev.k.clone())
        });
        let k = match reused {
            Some(k) => k,
            None => {
                let at_t = |e: ControlError| match e {
                    ControlError::NotStabilizable { detail } => ControlError::NotStabilizable {
                        detail: format!("at t = {:.3} s: {detail}", s.t),
                    },
                    other => other,
                };
                let lin = if is_hover {
                    linearize(hover_model(p), &x_ref, &u_ref)
                } else {
                    linearize(cruise_model(p), &x_ref, &u_ref)
                }
                .map_err(at_t)?;
                let w = if is_hover { hover_weights } else { cruise_weights };
                let sol = solve_care(&lin.a, &lin.b, &w.q, &w.r).map_err(at_t)?;
                let abscissa = max_real_eigenvalue(&(&lin.a - &lin.b * &sol.k));
                if abscissa >= -1e-9 {
                    return Err(ControlError::NotStabilizable {
                        detail: format!(
                            "at t = {:.3} s: closed-loop spectral abscissa {abscissa:.3e}",
                            s.t
                        ),
                    });
                }
                sol.k
            }
        };
        entries.push(GainEntry {
            t: s.t,
            phase: s.phase,
            k,
            x_ref,
            u_ref,
        });
    }
    Ok(GainSchedule {
        entries,
        sample_dt: plan.sample_dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::PhaseSchedule;
    use crate::trim::{build_curve, plan_transition, AlphaSchedule};
    use approx::assert_relative_eq;

    fn params() -> VehicleParams {
        VehicleParams::default()
    }

    fn small_schedule() -> GainSchedule {
        let p = params();
        let schedule = PhaseSchedule::default();
        let alpha = AlphaSchedule::Linear {
            alpha_start: 0.15,
            alpha_cruise: 0.05,
            v_cruise: schedule.v_cruise,
        };
        let grid: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let curve = build_curve(&grid, &alpha, &p).unwrap();
        let plan = plan_transition(&schedule, &curve, &p, 2.0).unwrap();
        let hover_w = LqrWeights::from_diagonals(
            &[1.0, 1.0, 10.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            &[100.0, 200.0, 200.0, 100.0],
        );
        let cruise_w = LqrWeights::from_diagonals(
            &[1.0, 1.0, 1e2, 1e4, 1.0, 1e4, 1.0, 1e3, 1.0],
            &[3100.0, 3100.0, 200.0, 200.0, 200.0],
        );
        build_gain_schedule(&plan, &hover_w, &cruise_w, &p).unwrap()
    }

    #[test]
    fn hover_entries_share_one_gain() {
        let sched = small_schedule();
        let hover: Vec<_> = sched
            .entries
            .iter()
            .filter(|e| e.phase == Phase::Hovering)
            .collect();
        assert!(hover.len() > 2);
        for e in &hover[1..] {
            assert_eq!(e.k, hover[0].k);
        }
    }

    #[test]
    fn lookup_is_zero_order_hold() {
        let sched = small_schedule();
        assert_eq!(sched.entry_at(0.0).t, 0.0);
        assert_eq!(sched.entry_at(3.5).t, 2.0);
        assert_eq!(sched.entry_at(1000.0).t, 80.0);
        assert_eq!(sched.entry_at(-5.0).t, 0.0);
    }

    #[test]
    fn zero_error_gives_feedforward() {
        let sched = small_schedule();
        let hover = sched.entry_at(0.0);
        let u = hover_position_control(&hover.x_ref, hover);
        assert_relative_eq!(u[0], -params().weight(), epsilon = 1e-12);
        let cruise = sched.entry_at(79.0);
        let u_t = cruise_position_control(&cruise.x_ref, cruise);
        assert_relative_eq!(&u_t, &cruise.u_ref, epsilon = 1e-12);
    }

    #[test]
    fn x_error_is_ignored_in_cruise() {
        let sched = small_schedule();
        let entry = sched.entry_at(79.0);
        let mut xi = entry.x_ref.clone();
        xi[0] += 100.0;
        let u_offset = cruise_position_control(&xi, entry);
        assert_relative_eq!(&u_offset, &entry.u_ref, epsilon = 1e-9);
        let mut xi_v = entry.x_ref.clone();
        xi_v[3] += 1.0;
        let u_v = cruise_position_control(&xi_v, entry);
        assert!((&u_v - &entry.u_ref).norm() > 1e-3);
        // Proportional to the gain column, as a direct probe.
        let expected = &entry.u_ref - entry.k.column(3);
        assert_relative_eq!(&u_v, &expected, epsilon = 1e-9);
    }

    #[test]
    fn transform_identity_at_zero_attitude() {
        let state = RigidBodyState {
            x_w: Vector3::new(1.0, 2.0, 3.0),
            v_b: Vector3::new(4.0, 5.0, 6.0),
            ..RigidBodyState::default()
        };
        let xi = cruise_state_transform(&state).unwrap();
        for (i, v) in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.0, 0.0, 0.0].iter().enumerate() {
            assert_relative_eq!(xi[i], *v, epsilon = 1e-14);
        }
    }

    #[test]
    fn transform_pure_pitch_gives_world_vertical_rate() {
        // At level yaw/roll and pitch theta, the tilde z-velocity equals the
        // inertial vertical velocity.
        let theta = 0.4;
        let state = RigidBodyState {
            eta: Vector3::new(0.0, theta, 0.0),
            v_b: Vector3::new(9.0, 0.0, 1.0),
            ..RigidBodyState::default()
        };
        let xi = cruise_state_transform(&state).unwrap();
        assert_relative_eq!(xi[7], theta, epsilon = 1e-12);
        let world_rate = rotation_zyx(&state.eta) * state.v_b;
        assert_relative_eq!(xi[5], world_rate[2], epsilon = 1e-12);
        // Round trip back to the body state.
        let eta_t = Vector3::new(xi[6], xi[7], xi[8]);
        let v_b_back = rot_y(eta_t[1]).transpose() * Vector3::new(xi[3], xi[4], xi[5]);
        assert_relative_eq!(v_b_back, state.v_b, epsilon = 1e-12);
    }

    #[test]
    fn output_transform_cases() {
        // Pass-through at zero pitch.
        let u = DVector::from_vec(vec![1.0, -4.0, 0.0, 0.0, 0.0]);
        let (fx, fz, omega) = output_transform(&u, &Vector3::zeros());
        assert_relative_eq!(fx, 1.0, epsilon = 1e-15);
        assert_relative_eq!(fz, -4.0, epsilon = 1e-15);
        assert_eq!(omega, Vector3::zeros());
        // Rotation oracle at theta_t = pi/6.
        let theta = std::f64::consts::FRAC_PI_6;
        let (fx, fz, _) = output_transform(&u, &Vector3::new(0.0, theta, 0.0));
        let expected = rot_y(theta).transpose() * Vector3::new(1.0, 0.0, -4.0);
        assert_relative_eq!(fx, expected[0], epsilon = 1e-15);
        assert_relative_eq!(fz, expected[2], epsilon = 1e-15);
    }

    #[test]
    fn closed_loop_spectra_strictly_stable() {
        let p = params();
        let sched = small_schedule();
        for e in &sched.entries {
            let model_dim_ok = e.k.nrows() == if e.phase == Phase::Hovering { 4 } else { 5 };
            assert!(model_dim_ok);
            let lin = if e.phase == Phase::Hovering {
                linearize(hover_model(&p), &e.x_ref, &e.u_ref).unwrap()
            } else {
                linearize(cruise_model(&p), &e.x_ref, &e.u_ref).unwrap()
            };
            let abscissa = max_real_eigenvalue(&(&lin.a - &lin.b * &e.k));
            assert!(abscissa < -1e-9, "abscissa {abscissa} at t = {}", e.t);
        }
    }
}
