//! Rotation matrices, Euler-angle conventions, and kinematic rate maps.
//!
//! Two parameterizations are used. The plant attitude is the standard Z-Y-X
//! roll/pitch/yaw triplet `eta = [phi, theta, psi]` with body-to-world matrix
//! `R(eta) = R_z(psi) R_y(theta) R_x(phi)`. The cruise controller re-expresses
//! the same rotation in Y-X-Z order, `R = R_z(psi_t) R_x(phi_t) R_y(theta_t)`
//! with `eta_t = [phi_t, theta_t, psi_t]`, which makes the pitch angle
//! `theta_t` the innermost rotation and lets it be controlled independently.

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

/// Margin kept away from the kinematic singularities at |angle| = pi/2.
pub const GIMBAL_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AttitudeError {
    #[error("gimbal lock: |theta| = {theta:.6} rad within {guard:.1e} of pi/2")]
    GimbalLock { theta: f64, guard: f64 },
    #[error("degenerate Y-X-Z attitude: |phi_t| = {phi_t:.6} rad within {guard:.1e} of pi/2")]
    Degenerate { phi_t: f64, guard: f64 },
}

pub fn rot_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

pub fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

pub fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Body-to-world rotation from Z-Y-X roll/pitch/yaw angles.
pub fn rotation_zyx(eta: &Vector3<f64>) -> Matrix3<f64> {
    rot_z(eta[2]) * rot_y(eta[1]) * rot_x(eta[0])
}

/// Body-to-world rotation from Y-X-Z angles `[phi_t, theta_t, psi_t]`.
pub fn rotation_yxz(eta_t: &Vector3<f64>) -> Matrix3<f64> {
    rot_z(eta_t[2]) * rot_x(eta_t[0]) * rot_y(eta_t[1])
}

/// Recovers `[phi, theta, psi]` from a body-to-world rotation matrix.
pub fn zyx_angles_from_rotation(r: &Matrix3<f64>) -> Result<Vector3<f64>, AttitudeError> {
    let theta = (-r[(2, 0)]).clamp(-1.0, 1.0).asin();
    if theta.abs() >= FRAC_PI_2 - GIMBAL_GUARD {
        return Err(AttitudeError::GimbalLock {
            theta,
            guard: GIMBAL_GUARD,
        });
    }
    let phi = r[(2, 1)].atan2(r[(2, 2)]);
    let psi = r[(1, 0)].atan2(r[(0, 0)]);
    Ok(Vector3::new(phi, theta, psi))
}

/// Recovers `[phi_t, theta_t, psi_t]` from a body-to-world rotation matrix.
/// Inverse of [`rotation_yxz`] away from the |phi_t| = pi/2 degeneracy.
pub fn yxz_angles_from_rotation(r: &Matrix3<f64>) -> Result<Vector3<f64>, AttitudeError> {
    let phi_t = r[(2, 1)].clamp(-1.0, 1.0).asin();
    if phi_t.abs() >= FRAC_PI_2 - GIMBAL_GUARD {
        return Err(AttitudeError::Degenerate {
            phi_t,
            guard: GIMBAL_GUARD,
        });
    }
    let theta_t = (-r[(2, 0)]).atan2(r[(2, 2)]);
    let psi_t = (-r[(0, 1)]).atan2(r[(1, 1)]);
    Ok(Vector3::new(phi_t, theta_t, psi_t))
}

/// Z-Y-X kinematic map `W(eta)` with `eta_dot = W(eta) * omega_b`.
/// Singular at |theta| = pi/2 (tan theta blows up).
pub fn euler_rate_matrix(eta: &Vector3<f64>) -> Result<Matrix3<f64>, AttitudeError> {
    let (phi, theta) = (eta[0], eta[1]);
    if theta.abs() >= FRAC_PI_2 - GIMBAL_GUARD {
        return Err(AttitudeError::GimbalLock {
            theta,
            guard: GIMBAL_GUARD,
        });
    }
    let (sp, cp) = phi.sin_cos();
    let (tt, ct) = (theta.tan(), theta.cos());
    Ok(Matrix3::new(
        1.0,
        sp * tt,
        cp * tt,
        0.0,
        cp,
        -sp,
        0.0,
        sp / ct,
        cp / ct,
    ))
}

/// Y-X-Z rate map: `omega_b = yxz_rate_matrix(eta_t) * eta_t_dot`.
///
/// Columns are the body-frame axes about which each of `[phi_t_dot,
/// theta_t_dot, psi_t_dot]` acts; determinant is `cos(phi_t)`.
pub fn yxz_rate_matrix(eta_t: &Vector3<f64>) -> Matrix3<f64> {
    let (sp, cp) = eta_t[0].sin_cos();
    let (st, ct) = eta_t[1].sin_cos();
    Matrix3::new(
        ct,
        0.0,
        -st * cp,
        0.0,
        1.0,
        sp,
        st,
        0.0,
        ct * cp,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zyx_round_trip_identity() {
        let eta = Vector3::zeros();
        assert_eq!(rotation_zyx(&eta), Matrix3::identity());
        let back = zyx_angles_from_rotation(&Matrix3::identity()).unwrap();
        assert_eq!(back, Vector3::zeros());
    }

    #[test]
    fn yxz_pure_pitch() {
        let r = rot_y(0.3);
        let eta_t = yxz_angles_from_rotation(&r).unwrap();
        assert_relative_eq!(eta_t[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(eta_t[1], 0.3, epsilon = 1e-15);
        assert_relative_eq!(eta_t[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn yxz_degenerate_detected() {
        let r = rotation_yxz(&Vector3::new(FRAC_PI_2, 0.2, 0.1));
        assert!(matches!(
            yxz_angles_from_rotation(&r),
            Err(AttitudeError::Degenerate { .. })
        ));
    }

    #[test]
    fn euler_rate_matrix_reduces_to_identity_at_level() {
        let w = euler_rate_matrix(&Vector3::zeros()).unwrap();
        assert_relative_eq!(w, Matrix3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn euler_rate_matrix_rolled_90deg() {
        // phi = pi/2, theta = 0, omega = e_y: pitch rate maps entirely to yaw.
        let w = euler_rate_matrix(&Vector3::new(FRAC_PI_2, 0.0, 0.0)).unwrap();
        let eta_dot = w * Vector3::new(0.0, 1.0, 0.0);
        assert_relative_eq!(eta_dot, Vector3::new(0.0, 0.0, 1.0), epsilon = 1e-15);
    }

    #[test]
    fn euler_rate_matrix_gimbal_lock() {
        assert!(euler_rate_matrix(&Vector3::new(0.0, FRAC_PI_2, 0.0)).is_err());
    }

    #[test]
    fn yxz_rate_matrix_matches_finite_difference() {
        // Compare W_yxz against (R^T dR/dt)^vee for a generic attitude/rate.
        let eta_t = Vector3::new(0.3, -0.7, 1.1);
        let eta_t_dot = Vector3::new(0.2, -0.4, 0.6);
        let h = 1e-7;
        let r0 = rotation_yxz(&(eta_t - eta_t_dot * h));
        let r1 = rotation_yxz(&(eta_t + eta_t_dot * h));
        let omega_hat = rotation_yxz(&eta_t).transpose() * (r1 - r0) / (2.0 * h);
        let omega_fd = Vector3::new(omega_hat[(2, 1)], omega_hat[(0, 2)], omega_hat[(1, 0)]);
        let omega = yxz_rate_matrix(&eta_t) * eta_t_dot;
        assert_relative_eq!(omega, omega_fd, epsilon = 1e-6);
    }

    proptest! {
        #[test]
        fn rotations_are_orthonormal(
            phi in -1.5f64..1.5, theta in -1.4f64..1.4, psi in -3.0f64..3.0
        ) {
            let r = rotation_zyx(&Vector3::new(phi, theta, psi));
            let err = (r.transpose() * r - Matrix3::identity()).norm();
            prop_assert!(err < 1e-12);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn yxz_round_trip(
            phi_t in -1.4f64..1.4, theta_t in -1.5f64..1.5, psi_t in -3.0f64..3.0
        ) {
            let r = rotation_yxz(&Vector3::new(phi_t, theta_t, psi_t));
            let eta_t = yxz_angles_from_rotation(&r).unwrap();
            let rebuilt = rotation_yxz(&eta_t);
            prop_assert!((rebuilt - r).norm() < 1e-12);
        }
    }
}
