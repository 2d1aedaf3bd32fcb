//! Rotor thrust vectors and the reduced (sum/difference) coordinates.
//!
//! The four quadlink rotors enter the body wrench only through the pair sums
//! `f1+f2` and `f3+f4`, and enter the link tilt torque only through the pair
//! differences `f1−f2` and `f3−f4`, so the six thrusts are re-coordinatized as
//! `f_plus = [f1+f2, f3+f4, f5, f6]` and `f_minus = [f1−f2, f3−f4]`. Any
//! (f_plus, f_minus) pair maps back to a unique set of six thrusts; the
//! thrusts are nonnegative iff `|f_minus[i]| <= f_plus[i]` for the two pairs.

use nalgebra::{Vector2, Vector4};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ThrustError {
    #[error("mixing produces negative rotor thrust: f{index} = {value:.6}")]
    NegativeThrust { index: usize, value: f64 },
}

/// Six rotor thrusts `f1..f6` [N]. Rotors 1–4 sit on the quadlink, 5–6 on the
/// tail.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThrustVector {
    pub f: [f64; 6],
}

impl ThrustVector {
    pub fn new(f: [f64; 6]) -> Self {
        Self { f }
    }
}

/// Reduced thrust coordinates: pair sums (controlling the body wrench) and
/// front pair differences (controlling the link tilt torque).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedThrusts {
    /// `[f1+f2, f3+f4, f5, f6]` [N].
    pub f_plus: Vector4<f64>,
    /// `[f1−f2, f3−f4]` [N].
    pub f_minus: Vector2<f64>,
}

/// Recovers the six rotor thrusts from reduced coordinates; the unique
/// combination with equal pair splits.
pub fn mix_thrusts(r: &ReducedThrusts) -> Result<ThrustVector, ThrustError> {
    let f = [
        (r.f_plus[0] + r.f_minus[0]) / 2.0,
        (r.f_plus[0] - r.f_minus[0]) / 2.0,
        (r.f_plus[1] + r.f_minus[1]) / 2.0,
        (r.f_plus[1] - r.f_minus[1]) / 2.0,
        r.f_plus[2],
        r.f_plus[3],
    ];
    for (i, &fi) in f.iter().enumerate() {
        if fi < 0.0 {
            return Err(ThrustError::NegativeThrust {
                index: i + 1,
                value: fi,
            });
        }
    }
    Ok(ThrustVector::new(f))
}

/// Mixes and clamps each rotor to `[0, f_max]`; returns the thrusts and
/// whether any clamp fired. The simulation loop uses this instead of
/// [`mix_thrusts`] so saturation is an observable event, not an abort.
pub fn mix_saturating(r: &ReducedThrusts, f_max: f64) -> (ThrustVector, bool) {
    let raw = [
        (r.f_plus[0] + r.f_minus[0]) / 2.0,
        (r.f_plus[0] - r.f_minus[0]) / 2.0,
        (r.f_plus[1] + r.f_minus[1]) / 2.0,
        (r.f_plus[1] - r.f_minus[1]) / 2.0,
        r.f_plus[2],
        r.f_plus[3],
    ];
    let mut clamped = false;
    let mut f = [0.0; 6];
    for i in 0..6 {
        f[i] = raw[i].clamp(0.0, f_max);
        if f[i] != raw[i] {
            clamped = true;
        }
    }
    (ThrustVector::new(f), clamped)
}

/// Projects six thrusts onto the reduced coordinates. Left inverse of
/// [`mix_thrusts`].
pub fn reduce_thrusts(t: &ThrustVector) -> ReducedThrusts {
    ReducedThrusts {
        f_plus: Vector4::new(t.f[0] + t.f[1], t.f[2] + t.f[3], t.f[4], t.f[5]),
        f_minus: Vector2::new(t.f[0] - t.f[1], t.f[2] - t.f[3]),
    }
}
