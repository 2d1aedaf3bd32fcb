//! Vehicle and aerodynamic parameters with validation.

use nalgebra::Matrix3;

/// Aerodynamic model: lift/drag quadratic in airspeed with polynomial
/// coefficient curves in the angle of attack.
///
/// The polynomials are fits with a limited validity range; outside
/// `[-alpha_valid, alpha_valid]` the coefficients hold their endpoint values
/// instead of extrapolating (a cubic C_L grows absurd within half a radian).
#[derive(Debug, Clone, PartialEq)]
pub struct AeroParams {
    /// Air density [kg/m^3].
    pub rho: f64,
    /// Wing area [m^2]; zero disables aerodynamics.
    pub s: f64,
    /// C_L(alpha) polynomial coefficients, ascending order.
    pub cl_poly: Vec<f64>,
    /// C_D(alpha) polynomial coefficients, ascending order.
    pub cd_poly: Vec<f64>,
    /// Attack-angle validity bound of the polynomial fits [rad].
    pub alpha_valid: f64,
}

impl Default for AeroParams {
    fn default() -> Self {
        // Stand-in airfoil curves. The wing is sized so it carries most—but
        // not all—of the weight at the default 20 m/s cruise; positive rotor
        // thrust must close the balance.
        Self {
            rho: 1.225,
            s: 0.05,
            cl_poly: vec![0.2, 3.5, 0.0, -4.0],
            cd_poly: vec![0.02, 0.0, 0.9],
            alpha_valid: 0.4,
        }
    }
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

impl AeroParams {
    pub fn c_l(&self, alpha: f64) -> f64 {
        poly_eval(&self.cl_poly, alpha.clamp(-self.alpha_valid, self.alpha_valid))
    }

    pub fn c_d(&self, alpha: f64) -> f64 {
        poly_eval(&self.cd_poly, alpha.clamp(-self.alpha_valid, self.alpha_valid))
    }

    /// Validation messages, prefixed with dotted key names (`aero.*`).
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.rho > 0.0) {
            errs.push(format!("aero.rho: must be > 0 (got {})", self.rho));
        }
        if !(self.s >= 0.0) {
            errs.push(format!("aero.s: must be >= 0 (got {})", self.s));
        }
        if !(self.alpha_valid > 0.0) {
            errs.push(format!(
                "aero.alpha_valid: must be > 0 (got {})",
                self.alpha_valid
            ));
        }
        // C_D must be nonnegative over the whole attack-angle envelope;
        // checked on a grid since the polynomial degree is unconstrained.
        let n = 201;
        for i in 0..n {
            let alpha = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * (i as f64) / ((n - 1) as f64);
            if self.c_d(alpha) < 0.0 {
                errs.push(format!(
                    "aero.cd_poly: C_D({alpha:.4}) = {} < 0",
                    self.c_d(alpha)
                ));
                break;
            }
        }
        errs
    }
}

/// Mass, inertia, and geometry of the six-rotor quadlink vehicle.
///
/// `l_f` is the distance from the center of mass to the quadlink joint,
/// `l_fw` the lateral offset of the front rotor pairs, `l_fh` the fore/aft
/// offset of the rotors within the link (the lever arm of the tilt torque),
/// `l_b`/`l_bw` the rear rotor offsets, and `kappa` the counter-torque
/// constant (sign per rotor applied inside the wrench map).
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleParams {
    /// Mass [kg].
    pub m: f64,
    /// Inertia tensor [kg m^2], symmetric positive definite.
    pub j: Matrix3<f64>,
    /// Quadlink inertia about its y-axis [kg m^2].
    pub j_link: f64,
    pub l_f: f64,
    pub l_fw: f64,
    pub l_fh: f64,
    pub l_b: f64,
    pub l_bw: f64,
    /// Counter-torque constant [m], > 0.
    pub kappa: f64,
    /// Gravitational acceleration [m/s^2].
    pub g: f64,
    /// Per-rotor thrust ceiling [N]; thrusts live in [0, f_max].
    pub f_max: f64,
    pub aero: AeroParams,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            m: 0.5,
            j: Matrix3::from_diagonal(&nalgebra::Vector3::new(0.03, 0.05, 0.05)),
            j_link: 0.01,
            l_f: 0.1,
            l_fw: 0.1,
            l_fh: 0.1,
            l_b: 0.1,
            l_bw: 0.1,
            kappa: 0.02,
            g: 9.81,
            f_max: 5.0,
            aero: AeroParams::default(),
        }
    }
}

impl VehicleParams {
    pub fn weight(&self) -> f64 {
        self.m * self.g
    }

    pub fn j_inverse(&self) -> Matrix3<f64> {
        self.j.try_inverse().expect("inertia tensor is invertible")
    }

    /// Validation messages, prefixed with dotted key names (`vehicle.*`).
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let positive = [
            ("vehicle.m", self.m),
            ("vehicle.j_link", self.j_link),
            ("vehicle.l_f", self.l_f),
            ("vehicle.l_fw", self.l_fw),
            ("vehicle.l_fh", self.l_fh),
            ("vehicle.l_b", self.l_b),
            ("vehicle.l_bw", self.l_bw),
            ("vehicle.kappa", self.kappa),
            ("vehicle.g", self.g),
            ("vehicle.f_max", self.f_max),
        ];
        for (name, value) in positive {
            if !(value > 0.0) {
                errs.push(format!("{name}: must be > 0 (got {value})"));
            }
        }
        if (self.j - self.j.transpose()).norm() > 1e-12 * self.j.norm().max(1.0) {
            errs.push("vehicle.j: must be symmetric".to_string());
        } else if nalgebra::Cholesky::new(self.j).is_none() {
            errs.push("vehicle.j: must be positive definite".to_string());
        }
        errs.extend(self.aero.validation_errors());
        errs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(VehicleParams::default().validation_errors().is_empty());
    }

    #[test]
    fn negative_mass_named() {
        let p = VehicleParams {
            m: -1.0,
            ..VehicleParams::default()
        };
        let errs = p.validation_errors();
        assert!(errs.iter().any(|e| e.starts_with("vehicle.m")));
    }

    #[test]
    fn indefinite_inertia_rejected() {
        let p = VehicleParams {
            j: Matrix3::from_diagonal(&nalgebra::Vector3::new(0.03, -0.05, 0.05)),
            ..VehicleParams::default()
        };
        assert!(p
            .validation_errors()
            .iter()
            .any(|e| e.contains("positive definite")));
    }

    #[test]
    fn negative_drag_curve_rejected() {
        let a = AeroParams {
            cd_poly: vec![-0.01],
            ..AeroParams::default()
        };
        assert!(!a.validation_errors().is_empty());
    }

    #[test]
    fn poly_eval_ascending_order() {
        // 1 + 2x + 3x^2 at x = 2 -> 17
        assert_eq!(poly_eval(&[1.0, 2.0, 3.0], 2.0), 17.0);
    }
}
