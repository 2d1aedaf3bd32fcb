//! Physical model of the vehicle: parameters, state, the rotor-thrust wrench
//! map, the aerodynamic model, and the rigid-body equations of motion.

mod aero;
mod dynamics;
mod params;
mod state;
mod thrust;
mod wrench;

pub use aero::{aero_wrench, angle_of_attack, in_plane_speed, lift_drag, HOVER_SPEED_EPS};
pub use dynamics::{
    dynamics_derivative, euler_rate, integrate_rk4, total_wrench, DynamicsError,
};
pub use params::{AeroParams, VehicleParams};
pub use state::{RigidBodyState, STATE_DIM};
pub use thrust::{
    mix_saturating, mix_thrusts, reduce_thrusts, ReducedThrusts, ThrustError, ThrustVector,
};
pub use wrench::{
    effectiveness_matrix, effectiveness_matrix_dchi, quadlink_torque, reduced_wrench,
    rotor_wrench, BodyWrench,
};
