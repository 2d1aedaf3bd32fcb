//! Design models for controller synthesis.
//!
//! Both models treat the attitude inner loop as ideal: angular quantities
//! enter as inputs, not states. The hover model omits aerodynamics. The
//! cruise model is written in the tilde coordinates (Y-X-Z angles,
//! pitch-derotated velocity `v_t = R_y(theta_t) v_b`), where the angle rows
//! are pure integrators of the rate inputs — the pitch channel is exactly
//! linear and decoupled from the translational states.

use nalgebra::{DVector, Vector3};

use crate::rotation::{euler_rate_matrix, rot_x, rot_y, rot_z, rotation_zyx};
use crate::vehicle::{aero_wrench, VehicleParams};

/// Both design models have 9 states.
pub const STATE_DIM_9: usize = 9;
/// Hover inputs: `[f_rot_z, omega_ref(3)]`.
pub const HOVER_INPUT_DIM: usize = 4;
/// Cruise inputs: `[f_tilde_x, f_tilde_z, eta_t_dot(3)]`.
pub const CRUISE_INPUT_DIM: usize = 5;

fn stack(x_dot: Vector3<f64>, v_dot: Vector3<f64>, eta_dot: Vector3<f64>) -> DVector<f64> {
    let mut d = DVector::zeros(9);
    for i in 0..3 {
        d[i] = x_dot[i];
        d[3 + i] = v_dot[i];
        d[6 + i] = eta_dot[i];
    }
    d
}

/// Hover design model: state `[x_w, v_b, eta]`, input `[f_rot_z, omega]`.
pub fn hover_model(p: &VehicleParams) -> impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + '_ {
    move |x, u| {
        let v = Vector3::new(x[3], x[4], x[5]);
        let eta = Vector3::new(x[6], x[7], x[8]);
        let omega = Vector3::new(u[1], u[2], u[3]);
        let r = rotation_zyx(&eta);
        let x_dot = r * v;
        let v_dot = -omega.cross(&v)
            + Vector3::new(0.0, 0.0, u[0] / p.m)
            + r.transpose() * Vector3::new(0.0, 0.0, p.g);
        let eta_dot = match euler_rate_matrix(&eta) {
            Ok(w) => w * omega,
            Err(_) => Vector3::repeat(f64::NAN),
        };
        stack(x_dot, v_dot, eta_dot)
    }
}

/// Cruise design model: state `[x_w, v_t, eta_t]`, input
/// `[f_tilde_x, f_tilde_z, eta_t_dot]`. Aerodynamics enter through the state
/// only; the angle rows are `eta_t_dot = u[2..5]` exactly.
pub fn cruise_model(p: &VehicleParams) -> impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + '_ {
    move |x, u| {
        let v_t = Vector3::new(x[3], x[4], x[5]);
        let eta_t = Vector3::new(x[6], x[7], x[8]);
        let x_dot = rot_z(eta_t[2]) * rot_x(eta_t[0]) * v_t;
        let v_b = rot_y(eta_t[1]).transpose() * v_t;
        let aero = aero_wrench(&v_b, &p.aero).force;
        let gravity = rot_x(eta_t[0]).transpose()
            * rot_z(eta_t[2]).transpose()
            * Vector3::new(0.0, 0.0, p.m * p.g);
        let v_t_dot = (aero + gravity + Vector3::new(u[0], 0.0, u[1])) / p.m;
        let eta_t_dot = Vector3::new(u[2], u[3], u[4]);
        stack(x_dot, v_t_dot, eta_t_dot)
    }
}
