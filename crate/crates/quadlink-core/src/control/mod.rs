//! Controller synthesis and runtime control laws.
//!
//! Offline: finite-difference linearization of the phase design models along
//! the planned references, a continuous algebraic Riccati solver, and the
//! resulting time-indexed gain schedule. Online: the hover and cruise LQR
//! position controllers, the attitude and tilt-angle PID loops, and the
//! nonlinear control allocation that turns a desired wrench into a tilt
//! reference and reduced thrusts.

mod alloc;
mod care;
mod linearize;
mod models;
mod pid;
mod schedule;

pub use alloc::{allocate, Allocation, AllocationMode};
pub use care::{care_residual, max_real_eigenvalue, solve_care, CareSolution};
pub use linearize::{linearize, LinearModel};
pub use models::{
    cruise_model, hover_model, CRUISE_INPUT_DIM, HOVER_INPUT_DIM, STATE_DIM_9,
};
pub use pid::{AttitudePid, PidGains, TiltPid};
pub use schedule::{
    build_gain_schedule, cruise_position_control, cruise_reference, cruise_state_transform,
    hover_position_control, hover_reference, hover_state, output_transform, GainEntry,
    GainSchedule, LqrWeights,
};

use crate::rotation::AttitudeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("non-finite value while {what}")]
    NonFinite { what: &'static str },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("weights invalid: {0}")]
    InvalidWeights(String),
    #[error("no stabilizing solution: {detail}")]
    NotStabilizable { detail: String },
    #[error("allocation system singular near chi = {chi:.4}")]
    Singular { chi: f64 },
    #[error("allocation did not converge (residual {residual:.3e})")]
    NoConvergence { residual: f64 },
    #[error("allocation produced negative reduced thrust: component {index} = {value:.6}")]
    NegativeThrust { index: usize, value: f64 },
    #[error("hover allocation forbids x-force (got {f_x})")]
    HoverForbidsXForce { f_x: f64 },
    #[error(transparent)]
    Attitude(#[from] AttitudeError),
}
