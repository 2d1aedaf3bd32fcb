//! Central finite-difference linearization of a state-input map.

use nalgebra::{DMatrix, DVector};

use super::ControlError;

/// First-order model `x_dot ≈ A (x − x0) + B (u − u0) + f(x0, u0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub x0: DVector<f64>,
    pub u0: DVector<f64>,
}

fn fd_step(v: f64) -> f64 {
    (1e-6 * v.abs()).max(1e-6)
}

/// Jacobians of `dynamics` at `(x0, u0)` by central differences with a
/// per-component step of `max(1e-6, 1e-6 |x_i|)`.
pub fn linearize<F>(
    dynamics: F,
    x0: &DVector<f64>,
    u0: &DVector<f64>,
) -> Result<LinearModel, ControlError>
where
    F: Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64>,
{
    let n = x0.len();
    let m = u0.len();
    let probe = |x: &DVector<f64>, u: &DVector<f64>| -> Result<DVector<f64>, ControlError> {
        let d = dynamics(x, u);
        if d.iter().all(|v| v.is_finite()) {
            Ok(d)
        } else {
            Err(ControlError::NonFinite {
                what: "evaluating dynamics for linearization",
            })
        }
    };
    let f0 = probe(x0, u0)?;
    if f0.len() != n {
        return Err(ControlError::DimensionMismatch(format!(
            "dynamics returned {} rows for {n} states",
            f0.len()
        )));
    }

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let h = fd_step(x0[i]);
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[i] += h;
        xm[i] -= h;
        let col = (probe(&xp, u0)? - probe(&xm, u0)?) / (2.0 * h);
        a.set_column(i, &col);
    }
    let mut b = DMatrix::zeros(n, m);
    for j in 0..m {
        let h = fd_step(u0[j]);
        let mut up = u0.clone();
        let mut um = u0.clone();
        up[j] += h;
        um[j] -= h;
        let col = (probe(x0, &up)? - probe(x0, &um)?) / (2.0 * h);
        b.set_column(j, &col);
    }
    Ok(LinearModel {
        a,
        b,
        x0: x0.clone(),
        u0: u0.clone(),
    })
}
