//! Equations of motion and the fixed-step RK4 integrator.
//!
//! Navigation, attitude kinematics, and the Newton–Euler force/moment
//! balance in body coordinates, plus the quadlink joint modeled as a
//! frictionless double integrator `J_link * chi_ddot = tau_chi`.

use nalgebra::{SVector, Vector3};
use thiserror::Error;

use crate::rotation::{euler_rate_matrix, rot_y, rotation_zyx, AttitudeError};

use super::aero::{aero_wrench, angle_of_attack};
use super::params::VehicleParams;
use super::state::{RigidBodyState, STATE_DIM};
use super::thrust::ThrustVector;
use super::wrench::{rotor_wrench, BodyWrench};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Attitude(#[from] AttitudeError),
    #[error("integration step must be > 0 (got {0})")]
    NonPositiveDt(f64),
}

/// Roll/pitch/yaw rates from body angular velocity.
pub fn euler_rate(
    eta: &Vector3<f64>,
    omega_b: &Vector3<f64>,
) -> Result<Vector3<f64>, AttitudeError> {
    Ok(euler_rate_matrix(eta)? * omega_b)
}

/// Total body wrench: rotor wrench plus aerodynamics (rotated from the
/// stability frame by the angle of attack) plus gravity.
pub fn total_wrench(
    state: &RigidBodyState,
    thrusts: &ThrustVector,
    p: &VehicleParams,
) -> BodyWrench {
    let (rot, _) = rotor_wrench(thrusts, state.chi, p);
    let aero = aero_wrench(&state.v_b, &p.aero);
    let r_sb = rot_y(angle_of_attack(&state.v_b)).transpose();
    let gravity_body =
        rotation_zyx(&state.eta).transpose() * Vector3::new(0.0, 0.0, p.m * p.g);
    BodyWrench {
        force: rot.force + r_sb * aero.force + gravity_body,
        torque: rot.torque + r_sb * aero.torque,
    }
}

/// Time derivative of the full 14-dimensional state under constant thrusts.
pub fn dynamics_derivative(
    state: &RigidBodyState,
    thrusts: &ThrustVector,
    p: &VehicleParams,
) -> Result<SVector<f64, STATE_DIM>, DynamicsError> {
    let w = total_wrench(state, thrusts, p);
    let (_, tau_chi) = rotor_wrench(thrusts, state.chi, p);
    let eta_dot = euler_rate(&state.eta, &state.omega_b)?;

    let x_dot = rotation_zyx(&state.eta) * state.v_b;
    let v_dot = -state.omega_b.cross(&state.v_b) + w.force / p.m;
    let omega_dot =
        p.j_inverse() * (-(state.omega_b.cross(&(p.j * state.omega_b))) + w.torque);

    let mut d = SVector::<f64, STATE_DIM>::zeros();
    d.fixed_rows_mut::<3>(0).copy_from(&x_dot);
    d.fixed_rows_mut::<3>(3).copy_from(&eta_dot);
    d.fixed_rows_mut::<3>(6).copy_from(&v_dot);
    d.fixed_rows_mut::<3>(9).copy_from(&omega_dot);
    d[12] = state.chi_dot;
    d[13] = tau_chi / p.j_link;
    Ok(d)
}

/// Classical RK4 step with thrusts held constant over the step.
pub fn integrate_rk4(
    state: &RigidBodyState,
    thrusts: &ThrustVector,
    p: &VehicleParams,
    dt: f64,
) -> Result<RigidBodyState, DynamicsError> {
    if !(dt > 0.0) {
        return Err(DynamicsError::NonPositiveDt(dt));
    }
    let y0 = state.to_vector();
    let f = |y: &SVector<f64, STATE_DIM>| -> Result<SVector<f64, STATE_DIM>, DynamicsError> {
        dynamics_derivative(&RigidBodyState::from_vector(y), thrusts, p)
    };
    let k1 = f(&y0)?;
    let k2 = f(&(y0 + k1 * (dt / 2.0)))?;
    let k3 = f(&(y0 + k2 * (dt / 2.0)))?;
    let k4 = f(&(y0 + k3 * dt))?;
    let y1 = y0 + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
    Ok(RigidBodyState::from_vector(&y1))
}
