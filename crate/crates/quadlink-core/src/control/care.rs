//! Continuous algebraic Riccati equation solver.
//!
//! Strategy: obtain a stabilizing initial gain cheaply (zero gain if A is
//! already Hurwitz, otherwise Bass' pole-shifted Lyapunov construction, with
//! a differential-Riccati integration as a last resort), then polish with
//! Kleinman–Newton iterations, each a single Lyapunov solve. Lyapunov
//! equations are solved directly through their Kronecker form — the systems
//! here are at most 9-dimensional, so the n²×n² solve is cheap.

use nalgebra::{Cholesky, DMatrix};

use super::ControlError;

#[derive(Debug, Clone, PartialEq)]
pub struct CareSolution {
    /// Stabilizing symmetric PSD solution of the Riccati equation.
    pub p: DMatrix<f64>,
    /// State feedback gain `K = R^-1 B^T P`.
    pub k: DMatrix<f64>,
    /// Frobenius norm of the Riccati residual at `p`.
    pub residual: f64,
}

/// Largest real part over the spectrum.
pub fn max_real_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `‖AᵀP + PA − P S P + Q‖_F` with `S = B R⁻¹ Bᵀ`.
pub fn care_residual(
    a: &DMatrix<f64>,
    s: &DMatrix<f64>,
    q: &DMatrix<f64>,
    p: &DMatrix<f64>,
) -> f64 {
    (a.transpose() * p + p * a - p * s * p + q).norm()
}

/// Solves `AcᵀP + P Ac + C = 0` for symmetric P; `None` if the Kronecker
/// system is singular (Ac has eigenvalue pairs summing to zero).
fn solve_lyapunov(ac: &DMatrix<f64>, c: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = ac.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let act = ac.transpose();
    let big = eye.kronecker(&act) + act.kronecker(&eye);
    let rhs = nalgebra::DVector::from_column_slice(c.as_slice());
    let sol = big.lu().solve(&(-rhs))?;
    let p = DMatrix::from_column_slice(n, n, sol.as_slice());
    Some((&p + p.transpose()) * 0.5)
}

/// LQR synthesis: returns the stabilizing CARE solution and gain.
///
/// Contract: residual `< 1e-8 · max(1, ‖Q‖_F)` and `A − BK` Hurwitz, or
/// `NotStabilizable`.
pub fn solve_care(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Result<CareSolution, ControlError> {
    let n = a.nrows();
    let m = b.ncols();
    if a.ncols() != n || b.nrows() != n || q.nrows() != n || q.ncols() != n {
        return Err(ControlError::DimensionMismatch(format!(
            "A {}x{}, B {}x{}, Q {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    if r.nrows() != m || r.ncols() != m {
        return Err(ControlError::DimensionMismatch(format!(
            "R {}x{} for {m} inputs",
            r.nrows(),
            r.ncols()
        )));
    }
    let r_chol = Cholesky::new(r.clone()).ok_or_else(|| {
        ControlError::InvalidWeights("R is not positive definite".to_string())
    })?;
    let rinv_bt = r_chol.solve(&b.transpose()); // R^-1 B^T, m×n
    let s = b * &rinv_bt; // B R^-1 B^T
    let q_scale = q.norm().max(1.0);

    let mut k = initial_stabilizing_gain(a, b, &s, q, &rinv_bt)?;

    // Kleinman–Newton: each step solves (A−BK)ᵀP + P(A−BK) = −(Q + KᵀRK).
    let mut p = DMatrix::zeros(n, n);
    let mut residual = f64::INFINITY;
    for _ in 0..80 {
        let ac = a - b * &k;
        let c = q + k.transpose() * r * &k;
        let Some(pn) = solve_lyapunov(&ac, &c) else {
            return Err(ControlError::NotStabilizable {
                detail: "Lyapunov step singular during Newton iteration".to_string(),
            });
        };
        p = pn;
        k = &rinv_bt * &p;
        residual = care_residual(a, &s, q, &p);
        if residual < 1e-10 * q_scale {
            break;
        }
    }
    // Defect correction: Newton steps on the residual itself. Solving for the
    // small update instead of the full solution pushes the residual to the
    // rounding floor even when the Lyapunov operator is poorly conditioned.
    for _ in 0..6 {
        if residual < 1e-12 * q_scale {
            break;
        }
        let ac = a - &s * &p;
        let defect = a.transpose() * &p + &p * a - &p * &s * &p + q;
        let Some(delta) = solve_lyapunov(&ac, &defect) else {
            break;
        };
        let p_new = (&p + &delta + (&p + &delta).transpose()) * 0.5;
        let r_new = care_residual(a, &s, q, &p_new);
        if r_new >= residual {
            break;
        }
        p = p_new;
        residual = r_new;
    }
    k = &rinv_bt * &p;
    let closed = a - b * &k;
    let spectral_abscissa = max_real_eigenvalue(&closed);
    if !(residual < 1e-8 * q_scale) || spectral_abscissa >= 0.0 {
        return Err(ControlError::NotStabilizable {
            detail: format!(
                "residual {residual:.3e} (limit {:.3e}), max Re λ(A−BK) = {spectral_abscissa:.3e}",
                1e-8 * q_scale
            ),
        });
    }
    Ok(CareSolution { p, k, residual })
}

/// A gain with `A − BK` strictly Hurwitz, found without solving the CARE.
fn initial_stabilizing_gain(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    s: &DMatrix<f64>,
    q: &DMatrix<f64>,
    rinv_bt: &DMatrix<f64>,
) -> Result<DMatrix<f64>, ControlError> {
    let n = a.nrows();
    let m = b.ncols();
    if max_real_eigenvalue(a) < -1e-12 {
        return Ok(DMatrix::zeros(m, n));
    }
    // Bass: (−A − βI) is Hurwitz for β > ‖A‖, so the Lyapunov equation
    // (−A − βI)Z + Z(−A − βI)ᵀ + 2BBᵀ = 0 has a PSD solution; Z ≻ 0 exactly
    // when (A, B) is controllable, and then K0 = BᵀZ⁻¹ stabilizes.
    let beta = a.norm() + 0.5;
    let shifted = -(a.clone() + DMatrix::identity(n, n) * beta);
    if let Some(z) = solve_lyapunov(&shifted.transpose(), &(2.0 * b * b.transpose())) {
        if let Some(z_chol) = Cholesky::new(z.clone()) {
            let k0 = z_chol.solve(&b.clone()).transpose(); // (Z⁻¹B)ᵀ = BᵀZ⁻¹
            if max_real_eigenvalue(&(a - b * &k0)) < 0.0 {
                return Ok(k0);
            }
        }
    }
    // Fallback: integrate the differential Riccati equation from P = 0 until
    // the induced gain stabilizes (works for stabilizable but uncontrollable
    // pairs, where Bass' Z is singular).
    let h = 0.2 / (1.0 + a.norm() + s.norm() + q.norm().sqrt());
    let rhs = |p: &DMatrix<f64>| a.transpose() * p + p * a - p * s * p + q;
    let mut p = DMatrix::<f64>::zeros(n, n);
    for _ in 0..40_000 {
        let k1 = rhs(&p);
        let k2 = rhs(&(&p + &k1 * (h / 2.0)));
        let k3 = rhs(&(&p + &k2 * (h / 2.0)));
        let k4 = rhs(&(&p + &k3 * h));
        p = &p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        p = (&p + p.transpose()) * 0.5;
        if !p.iter().all(|v| v.is_finite()) || p.norm() > 1e12 {
            break;
        }
        let k = rinv_bt * &p;
        if max_real_eigenvalue(&(a - b * &k)) < -1e-12 {
            return Ok(k);
        }
    }
    Err(ControlError::NotStabilizable {
        detail: "no stabilizing initial gain found (pair may not be stabilizable)".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn dm(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    #[test]
    fn scalar_care() {
        // 0·P + P·0 − P² + 1 = 0 ⇒ P = 1, K = 1.
        let sol = solve_care(
            &dm(1, 1, &[0.0]),
            &dm(1, 1, &[1.0]),
            &dm(1, 1, &[1.0]),
            &dm(1, 1, &[1.0]),
        )
        .unwrap();
        assert_relative_eq!(sol.p[(0, 0)], 1.0, epsilon = 1e-10);
        assert_relative_eq!(sol.k[(0, 0)], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn double_integrator_gain() {
        let sol = solve_care(
            &dm(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            &dm(2, 1, &[0.0, 1.0]),
            &DMatrix::identity(2, 2),
            &dm(1, 1, &[1.0]),
        )
        .unwrap();
        assert!(sol.residual < 1e-10);
        assert_relative_eq!(sol.k[(0, 0)], 1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.k[(0, 1)], 3f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn random_stabilizable_systems() {
        let mut rng = StdRng::seed_from_u64(11);
        for case in 0..20 {
            let n = rng.random_range(2..=6);
            let m = rng.random_range(1..=3);
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let b = DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
            let q = DMatrix::<f64>::identity(n, n);
            let r = DMatrix::<f64>::identity(m, m);
            let sol = solve_care(&a, &b, &q, &r).unwrap_or_else(|e| {
                panic!("case {case} (n={n}, m={m}) failed: {e}");
            });
            assert!(sol.residual < 1e-8, "case {case}: residual {}", sol.residual);
            let closed = &a - &b * &sol.k;
            assert!(max_real_eigenvalue(&closed) < 0.0, "case {case} not Hurwitz");
        }
    }

    #[test]
    fn zero_q_with_marginal_plant_rejected() {
        // Pure integrator with zero state weight: the only CARE solution is
        // P = 0, which does not stabilize.
        let r = solve_care(
            &dm(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            &dm(2, 1, &[0.0, 1.0]),
            &DMatrix::zeros(2, 2),
            &dm(1, 1, &[1.0]),
        );
        assert!(matches!(r, Err(ControlError::NotStabilizable { .. })));
    }

    #[test]
    fn indefinite_r_rejected() {
        let r = solve_care(
            &dm(1, 1, &[0.0]),
            &dm(1, 1, &[1.0]),
            &dm(1, 1, &[1.0]),
            &dm(1, 1, &[-1.0]),
        );
        assert!(matches!(r, Err(ControlError::InvalidWeights(_))));
    }
}
