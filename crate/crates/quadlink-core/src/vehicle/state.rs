//! Full simulation state of the rigid body plus the quadlink joint.

use nalgebra::{SVector, Vector3};

/// Flattened state dimension: position, attitude, velocities, and the
/// quadlink angle/rate.
pub const STATE_DIM: usize = 14;

/// Rigid-body state in NED coordinates plus the quadlink degree of freedom.
///
/// `chi` is the link tilt relative to the body: 0 with the front rotors
/// pointing up, −pi/2 with them pointing fully forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyState {
    /// Position in the inertial NED frame [m].
    pub x_w: Vector3<f64>,
    /// Roll/pitch/yaw (Z-Y-X) [rad].
    pub eta: Vector3<f64>,
    /// Linear velocity in the body frame [m/s].
    pub v_b: Vector3<f64>,
    /// Angular velocity in the body frame [rad/s].
    pub omega_b: Vector3<f64>,
    /// Quadlink tilt angle [rad].
    pub chi: f64,
    /// Quadlink tilt rate [rad/s].
    pub chi_dot: f64,
}

impl Default for RigidBodyState {
    fn default() -> Self {
        Self {
            x_w: Vector3::zeros(),
            eta: Vector3::zeros(),
            v_b: Vector3::zeros(),
            omega_b: Vector3::zeros(),
            chi: 0.0,
            chi_dot: 0.0,
        }
    }
}

impl RigidBodyState {
    pub fn to_vector(&self) -> SVector<f64, STATE_DIM> {
        let mut v = SVector::<f64, STATE_DIM>::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.x_w);
        v.fixed_rows_mut::<3>(3).copy_from(&self.eta);
        v.fixed_rows_mut::<3>(6).copy_from(&self.v_b);
        v.fixed_rows_mut::<3>(9).copy_from(&self.omega_b);
        v[12] = self.chi;
        v[13] = self.chi_dot;
        v
    }

    pub fn from_vector(v: &SVector<f64, STATE_DIM>) -> Self {
        Self {
            x_w: v.fixed_rows::<3>(0).into_owned(),
            eta: v.fixed_rows::<3>(3).into_owned(),
            v_b: v.fixed_rows::<3>(6).into_owned(),
            omega_b: v.fixed_rows::<3>(9).into_owned(),
            chi: v[12],
            chi_dot: v[13],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let s = RigidBodyState {
            x_w: Vector3::new(1.0, 2.0, 3.0),
            eta: Vector3::new(0.1, 0.2, 0.3),
            v_b: Vector3::new(4.0, 5.0, 6.0),
            omega_b: Vector3::new(0.4, 0.5, 0.6),
            chi: -0.7,
            chi_dot: 0.8,
        };
        assert_eq!(RigidBodyState::from_vector(&s.to_vector()), s);
    }
}
