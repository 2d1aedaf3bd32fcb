//! Control allocation: desired body wrench to tilt reference and reduced
//! thrusts.
//!
//! In cruise the five equations `[f_x, f_z, tau] = M(chi) f_plus` are solved
//! for the five unknowns `(chi, f_plus)` by a damped Newton iteration with an
//! analytic Jacobian, warm-started from the previous tilt reference. In hover
//! the tilt is pinned to zero and the x-force row (identically zero at
//! chi = 0) is dropped, leaving a 4x4 linear solve.

use nalgebra::{Matrix4, SMatrix, SVector, Vector3, Vector4};

use crate::vehicle::{effectiveness_matrix, effectiveness_matrix_dchi, VehicleParams};

use super::ControlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationMode {
    /// chi pinned to 0, no x-force authority.
    Hover,
    /// Full five-unknown nonlinear solve.
    Cruise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub chi_ref: f64,
    pub f_plus: Vector4<f64>,
}

const NEWTON_TOL: f64 = 1e-9;
const NEWTON_MAX_ITER: usize = 60;

/// Solves for the tilt reference and reduced thrusts realizing the commanded
/// force/torque. `chi_hint` seeds the cruise Newton iteration.
pub fn allocate(
    f_x: f64,
    f_z: f64,
    tau: &Vector3<f64>,
    p: &VehicleParams,
    mode: AllocationMode,
    chi_hint: f64,
) -> Result<Allocation, ControlError> {
    match mode {
        AllocationMode::Hover => allocate_hover(f_x, f_z, tau, p),
        AllocationMode::Cruise => allocate_cruise(f_x, f_z, tau, p, chi_hint),
    }
}

fn check_nonnegative(f_plus: &Vector4<f64>) -> Result<(), ControlError> {
    for i in 0..4 {
        if f_plus[i] < 0.0 {
            return Err(ControlError::NegativeThrust {
                index: i,
                value: f_plus[i],
            });
        }
    }
    Ok(())
}

fn allocate_hover(
    f_x: f64,
    f_z: f64,
    tau: &Vector3<f64>,
    p: &VehicleParams,
) -> Result<Allocation, ControlError> {
    if f_x != 0.0 {
        return Err(ControlError::HoverForbidsXForce { f_x });
    }
    let m = effectiveness_matrix(0.0, p);
    // Rows [f_z, tau_x, tau_y, tau_z]; the dropped x-row is identically zero
    // at chi = 0.
    let m4 = Matrix4::from_fn(|r, c| m[(r + 1, c)]);
    let rhs = Vector4::new(f_z, tau[0], tau[1], tau[2]);
    let f_plus = m4
        .lu()
        .solve(&rhs)
        .ok_or(ControlError::Singular { chi: 0.0 })?;
    check_nonnegative(&f_plus)?;
    Ok(Allocation {
        chi_ref: 0.0,
        f_plus,
    })
}

fn allocate_cruise(
    f_x: f64,
    f_z: f64,
    tau: &Vector3<f64>,
    p: &VehicleParams,
    chi_hint: f64,
) -> Result<Allocation, ControlError> {
    let target = SVector::<f64, 5>::from_column_slice(&[f_x, f_z, tau[0], tau[1], tau[2]]);
    let mut chi = chi_hint;
    // Least-squares seed for the thrusts at the hinted tilt.
    let mut f_plus = effectiveness_matrix(chi, p)
        .svd(true, true)
        .solve(&target, 1e-12)
        .map_err(|_| ControlError::Singular { chi })?;

    let residual_of = |chi: f64, f_plus: &Vector4<f64>| -> SVector<f64, 5> {
        effectiveness_matrix(chi, p) * f_plus - target
    };
    let mut residual = residual_of(chi, &f_plus);
    for _ in 0..NEWTON_MAX_ITER {
        if residual.norm() < NEWTON_TOL {
            check_nonnegative(&f_plus)?;
            return Ok(Allocation { chi_ref: chi, f_plus });
        }
        let mut jac = SMatrix::<f64, 5, 5>::zeros();
        jac.set_column(0, &(effectiveness_matrix_dchi(chi, p) * f_plus));
        jac.fixed_view_mut::<5, 4>(0, 1)
            .copy_from(&effectiveness_matrix(chi, p));
        let step = jac
            .lu()
            .solve(&(-residual))
            .ok_or(ControlError::Singular { chi })?;
        // Backtracking keeps the iteration from overshooting when the seed is
        // far from the solution.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..10 {
            let chi_try = chi + scale * step[0];
            let f_try = f_plus + scale * step.fixed_rows::<4>(1);
            let r_try = residual_of(chi_try, &f_try);
            if chi_try.is_finite() && r_try.norm() < residual.norm() {
                chi = chi_try;
                f_plus = f_try;
                residual = r_try;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if residual.norm() < NEWTON_TOL {
        check_nonnegative(&f_plus)?;
        return Ok(Allocation { chi_ref: chi, f_plus });
    }
    Err(ControlError::NoConvergence {
        residual: residual.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn params() -> VehicleParams {
        VehicleParams::default()
    }

    #[test]
    fn hover_weight_split() {
        let p = params();
        let a = allocate(
            0.0,
            -p.weight(),
            &Vector3::zeros(),
            &p,
            AllocationMode::Hover,
            0.0,
        )
        .unwrap();
        assert_eq!(a.chi_ref, 0.0);
        for i in 0..4 {
            assert_relative_eq!(a.f_plus[i], p.weight() / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hover_rejects_x_force() {
        let p = params();
        assert!(matches!(
            allocate(0.5, -4.9, &Vector3::zeros(), &p, AllocationMode::Hover, 0.0),
            Err(ControlError::HoverForbidsXForce { .. })
        ));
    }

    #[test]
    fn hover_negative_thrust_detected() {
        let p = params();
        // Huge pitch torque demand drives the rear pair negative.
        let r = allocate(
            0.0,
            -1.0,
            &Vector3::new(0.0, 5.0, 0.0),
            &p,
            AllocationMode::Hover,
            0.0,
        );
        assert!(matches!(r, Err(ControlError::NegativeThrust { .. })));
    }

    #[test]
    fn cruise_round_trip_random() {
        let p = params();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let chi_true = rng.random_range(-1.3..-0.05);
            let f_true = Vector4::from_fn(|_, _| rng.random_range(0.3..3.0));
            let w = effectiveness_matrix(chi_true, &p) * f_true;
            let a = allocate(
                w[0],
                w[1],
                &Vector3::new(w[2], w[3], w[4]),
                &p,
                AllocationMode::Cruise,
                chi_true + rng.random_range(-0.05..0.05),
            )
            .unwrap();
            assert!(
                (a.chi_ref - chi_true).abs() < 1e-7,
                "chi {} vs {}",
                a.chi_ref,
                chi_true
            );
            assert!((a.f_plus - f_true).norm() < 1e-7);
        }
    }

    #[test]
    fn cruise_handles_hover_wrench_at_zero_seed() {
        // The ready-phase handoff: hover wrench, seed chi = 0.
        let p = params();
        let a = allocate(
            0.0,
            -p.weight(),
            &Vector3::zeros(),
            &p,
            AllocationMode::Cruise,
            0.0,
        )
        .unwrap();
        assert!(a.chi_ref.abs() < 1e-9);
        for i in 0..4 {
            assert_relative_eq!(a.f_plus[i], p.weight() / 4.0, epsilon = 1e-7);
        }
    }
}
