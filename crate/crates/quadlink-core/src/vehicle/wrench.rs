//! Rotor-thrust-to-wrench transformation.
//!
//! Each quadlink rotor contributes the same wrench column as its pair partner
//! (up to the sign of the tilt-torque lever and the counter torque), so the
//! six-rotor map collapses onto the reduced coordinates: the body wrench is
//! `M(chi) * f_plus` with the identically-zero y-force row omitted, and the
//! link tilt torque is `[l_fh, l_fh] * f_minus`.

use nalgebra::{SMatrix, SVector, Vector3, Vector4};

use super::params::VehicleParams;
use super::thrust::ThrustVector;

/// Force and torque acting on the fuselage, both in the body frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyWrench {
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
}

/// Per-rotor wrench columns `[f_x, f_y, f_z, tau_x, tau_y, tau_z]` for a
/// given tilt angle. Rotors 1,2 share `lam1`, rotors 3,4 share `lam2`;
/// rotors 5,6 are fixed to the tail.
fn rotor_columns(chi: f64, p: &VehicleParams) -> [SVector<f64, 6>; 4] {
    let (s, c) = chi.sin_cos();
    let k = p.kappa;
    let lam1 = SVector::<f64, 6>::from_column_slice(&[
        -s,
        0.0,
        -c,
        -p.l_fw * c - k * s,
        p.l_f * c,
        p.l_fw * s - k * c,
    ]);
    let lam2 = SVector::<f64, 6>::from_column_slice(&[
        -s,
        0.0,
        -c,
        p.l_fw * c + k * s,
        p.l_f * c,
        -p.l_fw * s + k * c,
    ]);
    let lam3 = SVector::<f64, 6>::from_column_slice(&[0.0, 0.0, -1.0, -p.l_bw, -p.l_b, k]);
    let lam4 = SVector::<f64, 6>::from_column_slice(&[0.0, 0.0, -1.0, p.l_bw, -p.l_b, -k]);
    [lam1, lam2, lam3, lam4]
}

/// Control effectiveness matrix `M(chi)`: rows `[f_x, f_z, tau_x, tau_y,
/// tau_z]`, columns the reduced thrusts `f_plus`. The y-force row of the full
/// map is identically zero and is omitted.
pub fn effectiveness_matrix(chi: f64, p: &VehicleParams) -> SMatrix<f64, 5, 4> {
    let (s, c) = chi.sin_cos();
    let k = p.kappa;
    SMatrix::<f64, 5, 4>::from_row_slice(&[
        -s, -s, 0.0, 0.0, //
        -c, -c, -1.0, -1.0, //
        -p.l_fw * c - k * s, p.l_fw * c + k * s, -p.l_bw, p.l_bw, //
        p.l_f * c, p.l_f * c, -p.l_b, -p.l_b, //
        p.l_fw * s - k * c, -p.l_fw * s + k * c, k, -k,
    ])
}

/// Derivative of [`effectiveness_matrix`] with respect to `chi`; used by the
/// allocation Newton iteration.
pub fn effectiveness_matrix_dchi(chi: f64, p: &VehicleParams) -> SMatrix<f64, 5, 4> {
    let (s, c) = chi.sin_cos();
    let k = p.kappa;
    SMatrix::<f64, 5, 4>::from_row_slice(&[
        -c, -c, 0.0, 0.0, //
        s, s, 0.0, 0.0, //
        p.l_fw * s - k * c, -p.l_fw * s + k * c, 0.0, 0.0, //
        -p.l_f * s, -p.l_f * s, 0.0, 0.0, //
        p.l_fw * c + k * s, -p.l_fw * c - k * s, 0.0, 0.0,
    ])
}

/// Body wrench and quadlink torque produced by six rotor thrusts at tilt
/// angle `chi`, summed column-by-column over the full six-rotor map.
pub fn rotor_wrench(thrusts: &ThrustVector, chi: f64, p: &VehicleParams) -> (BodyWrench, f64) {
    let cols = rotor_columns(chi, p);
    let col_of = [0usize, 0, 1, 1, 2, 3];
    let mut w = SVector::<f64, 6>::zeros();
    for i in 0..6 {
        w += cols[col_of[i]] * thrusts.f[i];
    }
    let wrench = BodyWrench {
        force: Vector3::new(w[0], w[1], w[2]),
        torque: Vector3::new(w[3], w[4], w[5]),
    };
    (wrench, quadlink_torque(thrusts, p))
}

/// Torque about the quadlink joint axis: `l_fh (f1 − f2 + f3 − f4)`,
/// independent of the tilt angle.
pub fn quadlink_torque(thrusts: &ThrustVector, p: &VehicleParams) -> f64 {
    p.l_fh * (thrusts.f[0] - thrusts.f[1] + thrusts.f[2] - thrusts.f[3])
}

/// Applies the reduced-coordinate maps: `M(chi) f_plus` for the body wrench
/// (with the zero y-force reinserted) and the `l_fh` row for the link torque.
pub fn reduced_wrench(
    f_plus: &Vector4<f64>,
    f_minus: &nalgebra::Vector2<f64>,
    chi: f64,
    p: &VehicleParams,
) -> (BodyWrench, f64) {
    let w = effectiveness_matrix(chi, p) * f_plus;
    let wrench = BodyWrench {
        force: Vector3::new(w[0], 0.0, w[1]),
        torque: Vector3::new(w[2], w[3], w[4]),
    };
    let tau_chi = p.l_fh * (f_minus[0] + f_minus[1]);
    (wrench, tau_chi)
}
