//! Simulation and control stack for a six-rotor VTOL UAV whose four front
//! rotors sit on a passively tilting link (the "quadlink").
//!
//! The quadlink is connected to the fuselage by a frictionless revolute joint
//! about the body y-axis; its tilt angle is controlled purely by differential
//! rotor thrust, so the vehicle has no servos and no control surfaces. The
//! crate provides:
//!
//! - [`vehicle`]: physical parameters, the rotor-thrust-to-wrench map, the
//!   aerodynamic model, and the rigid-body equations of motion with an RK4
//!   integrator,
//! - [`trim`]: the cruise equilibrium analysis (residual, tilt-angle root
//!   solve, effectiveness-matrix rank check) and the hover-to-cruise
//!   transition plan,
//! - [`control`]: finite-difference linearization, a continuous algebraic
//!   Riccati solver, the hover and cruise LQR position controllers (the cruise
//!   controller exactly linearizes the pitch channel), attitude and tilt PID
//!   loops, and the nonlinear control allocation,
//! - [`sim`]: the four-phase transition simulation loop and its telemetry.
//!
//! Conventions: NED inertial frame (altitude 5 m is z = −5), body frame
//! x-forward/y-right/z-down, Z-Y-X roll/pitch/yaw angles for the plant, all
//! quantities SI.

pub mod control;
pub mod rotation;
pub mod sim;
pub mod trim;
pub mod vehicle;
