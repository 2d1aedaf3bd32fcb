//! Attitude-rate and tilt-angle PID loops.

use nalgebra::{Matrix3, Vector2, Vector3};

/// Scalar PID gains applied per axis, with an integrator clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub integrator_limit: f64,
}

impl PidGains {
    pub fn validation_errors(&self, prefix: &str) -> Vec<String> {
        let mut errs = Vec::new();
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !(v >= 0.0) {
                errs.push(format!("{prefix}.{name}: must be >= 0 (got {v})"));
            }
        }
        if !(self.integrator_limit > 0.0) {
            errs.push(format!(
                "{prefix}.integrator_limit: must be > 0 (got {})",
                self.integrator_limit
            ));
        }
        errs
    }
}

/// Angular-rate PID producing a reference angular acceleration, returned as a
/// body torque `tau = J * omega_dot_ref`.
///
/// The derivative term acts on the measured rate (first difference of omega,
/// one-pole low-passed with time constant `tau_f`), not on the error, so
/// reference steps do not spike the torque.
#[derive(Debug, Clone)]
pub struct AttitudePid {
    pub gains: PidGains,
    /// Derivative filter time constant [s].
    pub tau_f: f64,
    integral: Vector3<f64>,
    prev_omega: Option<Vector3<f64>>,
    omega_dot_filtered: Vector3<f64>,
}

impl AttitudePid {
    pub fn new(gains: PidGains) -> Self {
        Self {
            gains,
            tau_f: 0.01,
            integral: Vector3::zeros(),
            prev_omega: None,
            omega_dot_filtered: Vector3::zeros(),
        }
    }

    pub fn reset(&mut self) {
        self.integral = Vector3::zeros();
        self.prev_omega = None;
        self.omega_dot_filtered = Vector3::zeros();
    }

    pub fn update(
        &mut self,
        omega: &Vector3<f64>,
        omega_ref: &Vector3<f64>,
        inertia: &Matrix3<f64>,
        dt: f64,
    ) -> Vector3<f64> {
        assert!(dt > 0.0, "PID step must be positive");
        let error = omega_ref - omega;
        let limit = self.gains.integrator_limit;
        self.integral = (self.integral + error * dt).map(|v| v.clamp(-limit, limit));
        let raw_rate = match self.prev_omega {
            Some(prev) => (omega - prev) / dt,
            None => Vector3::zeros(),
        };
        self.prev_omega = Some(*omega);
        let blend = dt / (self.tau_f + dt);
        self.omega_dot_filtered += (raw_rate - self.omega_dot_filtered) * blend;
        let omega_dot_ref = error * self.gains.kp + self.integral * self.gains.ki
            - self.omega_dot_filtered * self.gains.kd;
        inertia * omega_dot_ref
    }
}

/// Tilt-angle PID; derivative acts on the measured tilt rate. The reference
/// joint torque maps to the front thrust differences through the
/// Moore-Penrose inverse of the `[l_fh, l_fh]` row: an equal split
/// `tau / (2 l_fh)` on each pair.
#[derive(Debug, Clone)]
pub struct TiltPid {
    pub gains: PidGains,
    integral: f64,
}

impl TiltPid {
    pub fn new(gains: PidGains) -> Self {
        Self {
            gains,
            integral: 0.0,
        }
    }

    pub fn reset(&mut self) {
        self.integral = 0.0;
    }

    /// Reference joint torque from the tilt error.
    pub fn torque(&mut self, chi: f64, chi_dot: f64, chi_ref: f64, dt: f64) -> f64 {
        assert!(dt > 0.0, "PID step must be positive");
        let error = chi_ref - chi;
        let limit = self.gains.integrator_limit;
        self.integral = (self.integral + error * dt).clamp(-limit, limit);
        self.gains.kp * error + self.gains.ki * self.integral - self.gains.kd * chi_dot
    }

    /// Full update: torque PID plus the pseudoinverse split into `f_minus`.
    pub fn update(&mut self, chi: f64, chi_dot: f64, chi_ref: f64, l_fh: f64, dt: f64) -> Vector2<f64> {
        let tau = self.torque(chi, chi_dot, chi_ref, dt);
        Vector2::repeat(tau / (2.0 * l_fh))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gains(kp: f64, ki: f64, kd: f64) -> PidGains {
        PidGains {
            kp,
            ki,
            kd,
            integrator_limit: 0.1,
        }
    }

    #[test]
    fn zero_error_zero_torque() {
        let mut pid = AttitudePid::new(gains(100.0, 1000.0, 0.3));
        let j = Matrix3::from_diagonal(&Vector3::new(0.03, 0.05, 0.05));
        let tau = pid.update(&Vector3::zeros(), &Vector3::zeros(), &j, 1e-3);
        assert_eq!(tau, Vector3::zeros());
    }

    #[test]
    fn proportional_step_on_pitch() {
        // Unit rate step, K_P = 100, J_yy = 0.05: proportional torque 5 N m.
        let mut pid = AttitudePid::new(gains(100.0, 0.0, 0.0));
        let j = Matrix3::from_diagonal(&Vector3::new(0.03, 0.05, 0.05));
        let tau = pid.update(&Vector3::zeros(), &Vector3::new(0.0, 1.0, 0.0), &j, 1e-3);
        assert_relative_eq!(tau[1], 5.0, epsilon = 1e-12);
        assert_eq!(tau[0], 0.0);
        assert_eq!(tau[2], 0.0);
    }

    #[test]
    fn integrator_clamps() {
        let mut pid = AttitudePid::new(gains(0.0, 1.0, 0.0));
        let j = Matrix3::identity();
        let mut tau = Vector3::zeros();
        for _ in 0..10_000 {
            tau = pid.update(&Vector3::zeros(), &Vector3::new(1.0, 0.0, 0.0), &j, 1e-2);
        }
        // 100 s of unit error would integrate to 100 without the clamp.
        assert_relative_eq!(tau[0], 0.1, epsilon = 1e-12);
    }

    #[test]
    fn deterministic_sequences() {
        let run = || {
            let mut pid = AttitudePid::new(gains(100.0, 1000.0, 0.3));
            let j = Matrix3::from_diagonal(&Vector3::new(0.03, 0.05, 0.05));
            let mut out = Vec::new();
            for i in 0..50 {
                let omega = Vector3::new(0.01 * i as f64, -0.02 * i as f64, 0.0);
                let omega_ref = Vector3::new(0.5, 0.1, -0.2);
                out.push(pid.update(&omega, &omega_ref, &j, 1e-3));
            }
            out
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn tilt_pseudoinverse_split() {
        // kp = 1, error 0.02, no I/D contribution: tau_ref = 0.02,
        // f_minus = [0.1, 0.1] with l_fh = 0.1.
        let mut pid = TiltPid::new(gains(1.0, 0.0, 0.0));
        let f_minus = pid.update(-0.02, 0.0, 0.0, 0.1, 1e-3);
        assert_relative_eq!(f_minus[0], 0.1, epsilon = 1e-12);
        assert_eq!(f_minus[0], f_minus[1]);
        assert_relative_eq!(0.1 * (f_minus[0] + f_minus[1]), 0.02, epsilon = 1e-12);
    }

    #[test]
    fn tilt_row_times_split_recovers_torque() {
        // [l_fh, l_fh] · (tau/(2 l_fh), tau/(2 l_fh)) = tau exactly.
        let l_fh = 0.1;
        let tau_ref = 0.02;
        let f_minus = Vector2::repeat(tau_ref / (2.0 * l_fh));
        assert_relative_eq!(f_minus[0], 0.1, epsilon = 1e-15);
        assert_relative_eq!(l_fh * (f_minus[0] + f_minus[1]), tau_ref, epsilon = 1e-15);
    }

    #[test]
    fn tilt_zero_error_zero_output() {
        let mut pid = TiltPid::new(gains(5.0, 1.0, 4.0));
        let f_minus = pid.update(-0.3, 0.0, -0.3, 0.1, 1e-3);
        assert_eq!(f_minus, Vector2::zeros());
    }
}
