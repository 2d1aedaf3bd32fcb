//! Aerodynamic force model in the stability frame.
//!
//! The stability frame is the body frame rotated about y so the z-velocity
//! vanishes; the rotation angle is the angle of attack. Lift and drag act at
//! the center of mass, so the aerodynamic torque is identically zero.

use nalgebra::Vector3;

use super::params::AeroParams;
use super::wrench::BodyWrench;

/// Airspeed below which the angle of attack is conventionally zero
/// (atan2 is undefined at the origin) [m/s].
pub const HOVER_SPEED_EPS: f64 = 0.1;

/// Speed in the body x-z plane; this is the stability-frame forward speed.
pub fn in_plane_speed(v_b: &Vector3<f64>) -> f64 {
    v_b[0].hypot(v_b[2])
}

/// Angle of attack from the body velocity: `atan2(v_z, v_x)`, zero in hover.
pub fn angle_of_attack(v_b: &Vector3<f64>) -> f64 {
    if in_plane_speed(v_b) < HOVER_SPEED_EPS {
        0.0
    } else {
        v_b[2].atan2(v_b[0])
    }
}

/// Lift and drag magnitudes at forward speed `speed` and angle of attack
/// `alpha`: `0.5 rho v^2 S C(alpha)`.
pub fn lift_drag(speed: f64, alpha: f64, aero: &AeroParams) -> (f64, f64) {
    let q_s = 0.5 * aero.rho * speed * speed * aero.s;
    (q_s * aero.c_l(alpha), q_s * aero.c_d(alpha))
}

/// Stability-frame aerodynamic wrench `[−D, 0, −L]` with zero torque.
pub fn aero_wrench(v_b: &Vector3<f64>, aero: &AeroParams) -> BodyWrench {
    let speed = in_plane_speed(v_b);
    let alpha = angle_of_attack(v_b);
    let (lift, drag) = lift_drag(speed, alpha, aero);
    BodyWrench {
        force: Vector3::new(-drag, 0.0, -lift),
        torque: Vector3::zeros(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn alpha_from_velocity() {
        assert_relative_eq!(
            angle_of_attack(&Vector3::new(1.0, 0.0, 1.0)),
            FRAC_PI_4,
            epsilon = 1e-15
        );
        // Round trip of the cruise-trim velocity form.
        let (v, alpha): (f64, f64) = (20.0, 0.05);
        let v_b = Vector3::new(v * alpha.cos(), 0.0, v * alpha.sin());
        assert_relative_eq!(angle_of_attack(&v_b), alpha, epsilon = 1e-15);
    }

    #[test]
    fn alpha_zero_in_hover() {
        assert_eq!(angle_of_attack(&Vector3::zeros()), 0.0);
        assert_eq!(angle_of_attack(&Vector3::new(0.05, 0.0, 0.05)), 0.0);
    }

    #[test]
    fn drag_formula() {
        // D = 0.5 * 1.225 * 20^2 * 0.2 * 0.05 = 2.45 N with an explicit
        // constant-coefficient airfoil.
        let aero = AeroParams {
            rho: 1.225,
            s: 0.2,
            cl_poly: vec![0.0],
            cd_poly: vec![0.05],
            ..AeroParams::default()
        };
        let (_, drag) = lift_drag(20.0, 0.0, &aero);
        assert_relative_eq!(drag, 2.45, epsilon = 1e-12);
    }

    #[test]
    fn zero_velocity_zero_wrench() {
        let w = aero_wrench(&Vector3::zeros(), &AeroParams::default());
        assert_eq!(w.force, Vector3::zeros());
        assert_eq!(w.torque, Vector3::zeros());
    }

    #[test]
    fn quadratic_speed_law() {
        let aero = AeroParams::default();
        let v1 = Vector3::new(8.0, 0.0, 1.0);
        let v2 = 2.0 * v1;
        let w1 = aero_wrench(&v1, &aero);
        let w2 = aero_wrench(&v2, &aero);
        assert_relative_eq!(w2.force, 4.0 * w1.force, epsilon = 1e-12);
    }
}
