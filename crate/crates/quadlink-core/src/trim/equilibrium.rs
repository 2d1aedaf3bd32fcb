//! Cruise equilibrium: the trim residual, the tilt-angle root solve, trim
//! thrust levels, and the effectiveness-matrix rank (local controllability)
//! check.
//!
//! A triple `(v, alpha, chi)` is a cruise equilibrium when the x/z force and
//! pitch torque balance admits nonnegative front/rear thrust sums. Eliminating
//! the thrusts from the balance leaves a single scalar residual in
//! `(v, alpha, chi)`; for a given speed and angle of attack the tilt angle is
//! the residual's root in `[-pi/2, 0]`.

use nalgebra::Vector3;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

use crate::vehicle::{effectiveness_matrix, lift_drag, VehicleParams};

/// Relative singular-value cutoff for the numerical rank of `M(chi)`.
pub const RANK_SV_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrimError {
    #[error("no tilt-angle root for v = {v}, alpha = {alpha}: residual has no sign change in [-pi/2, 0]")]
    NoRoot { v: f64, alpha: f64 },
    #[error("equilibrium at v = {v}, alpha = {alpha} has rank-deficient effectiveness matrix at chi = {chi}")]
    RankDeficient { v: f64, alpha: f64, chi: f64 },
    #[error("trim thrusts infeasible at v = {v}, alpha = {alpha}, chi = {chi}: f_f = {f_f:.4}, f_b = {f_b:.4}")]
    Infeasible {
        v: f64,
        alpha: f64,
        chi: f64,
        f_f: f64,
        f_b: f64,
    },
    #[error("point (v = {v}, alpha = {alpha}, chi = {chi}) is not an equilibrium: residual = {residual:.3e}")]
    NotEquilibrium {
        v: f64,
        alpha: f64,
        chi: f64,
        residual: f64,
    },
    #[error("bad speed grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Schedule(#[from] crate::sim::ScheduleError),
    #[error("cruise speed {v_cruise} not covered by the equilibrium curve (max v = {v_max})")]
    CruiseOffCurve { v_cruise: f64, v_max: f64 },
}

/// One point of the cruise equilibrium set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub v: f64,
    pub alpha: f64,
    pub chi: f64,
    /// Total front thrust f1+f2+f3+f4 [N].
    pub f_f: f64,
    /// Total rear thrust f5+f6 [N].
    pub f_b: f64,
    /// Residual of the trim condition at the solved point.
    pub residual: f64,
    /// Numerical rank of M(chi); 4 on every accepted point.
    pub rank: usize,
}

/// Angle-of-attack schedule parameterizing the equilibrium curve over speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSchedule {
    /// Linear ramp from `alpha_start` at v = 0+ down to `alpha_cruise` at
    /// `v_cruise`. Exactly at v = 0 the hover convention alpha = 0 applies.
    Linear {
        alpha_start: f64,
        alpha_cruise: f64,
        v_cruise: f64,
    },
    Fixed(f64),
}

impl AlphaSchedule {
    pub fn alpha_at(&self, v: f64) -> f64 {
        match self {
            AlphaSchedule::Linear { .. } => {
                if v == 0.0 {
                    0.0
                } else {
                    self.branch_alpha(v)
                }
            }
            AlphaSchedule::Fixed(a) => *a,
        }
    }

    /// Alpha on the cruisable branch, extended continuously to v = 0 (the
    /// ready-phase target) and clamped beyond `v_cruise`.
    pub fn branch_alpha(&self, v: f64) -> f64 {
        match self {
            AlphaSchedule::Linear {
                alpha_start,
                alpha_cruise,
                v_cruise,
            } => {
                let s = (v / v_cruise).clamp(0.0, 1.0);
                alpha_start + (alpha_cruise - alpha_start) * s
            }
            AlphaSchedule::Fixed(a) => *a,
        }
    }
}

/// Equilibrium curve over a speed grid, with the schedule that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCurve {
    pub points: Vec<EquilibriumPoint>,
    pub alpha: AlphaSchedule,
}

impl EquilibriumCurve {
    pub fn max_speed(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.v)
    }
}

/// Scalar trim residual
/// `(mg − L)(S_{a+x} + (l_f/l_b) C_x S_a) + D(C_{a+x} + (l_f/l_b) C_x C_a)`.
///
/// Zero iff the symmetric-thrust force/torque balance has a consistent
/// solution at `(v, alpha, chi)`.
pub fn equilibrium_residual(v: f64, alpha: f64, chi: f64, p: &VehicleParams) -> f64 {
    let (lift, drag) = lift_drag(v, alpha, &p.aero);
    let r = p.l_f / p.l_b;
    let a_coef = (alpha + chi).sin() + r * chi.cos() * alpha.sin();
    let b_coef = (alpha + chi).cos() + r * chi.cos() * alpha.cos();
    (p.weight() - lift) * a_coef + drag * b_coef
}

fn bisect_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves the trim residual for the tilt angle in `[-pi/2, 0]` by bracketed
/// bisection, then verifies the controllability rank condition.
pub fn solve_chi(v: f64, alpha: f64, p: &VehicleParams) -> Result<f64, TrimError> {
    if v == 0.0 && alpha == 0.0 {
        return Ok(0.0);
    }
    let f = |chi: f64| equilibrium_residual(v, alpha, chi, p);
    let lo = -FRAC_PI_2 + 1e-3;
    let hi = -1e-6;
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return check_rank_at(lo, v, alpha, p);
    }
    if f_hi == 0.0 {
        return check_rank_at(hi, v, alpha, p);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(TrimError::NoRoot { v, alpha });
    }
    let chi = bisect_root(f, lo, hi, f_lo);
    check_rank_at(chi, v, alpha, p)
}

fn check_rank_at(chi: f64, v: f64, alpha: f64, p: &VehicleParams) -> Result<f64, TrimError> {
    if rank_check(chi, p).ok {
        Ok(chi)
    } else {
        Err(TrimError::RankDeficient { v, alpha, chi })
    }
}

/// Front/rear trim thrust sums at an equilibrium point, from the z-force and
/// pitch-torque rows: `f_f = (mg − L)/(C_{a+x} + r C_x C_a)`,
/// `f_b = r C_x f_f` with `r = l_f/l_b`. The per-rotor split is `f_f/4` on
/// each front rotor and `f_b/2` on each rear rotor.
pub fn trim_thrusts(
    v: f64,
    alpha: f64,
    chi: f64,
    p: &VehicleParams,
) -> Result<(f64, f64), TrimError> {
    let (lift, drag) = lift_drag(v, alpha, &p.aero);
    let r = p.l_f / p.l_b;
    let b_coef = (alpha + chi).cos() + r * chi.cos() * alpha.cos();
    let f_f = (p.weight() - lift) / b_coef;
    let f_b = r * chi.cos() * f_f;
    // The x-force row must close on its own; it fails only if the point is
    // not actually on the equilibrium surface.
    let x_residual = -drag - f_f * (alpha + chi).sin() - f_b * alpha.sin();
    if x_residual.abs() > 1e-9 {
        return Err(TrimError::NotEquilibrium {
            v,
            alpha,
            chi,
            residual: x_residual,
        });
    }
    if f_f < 0.0 || f_b < 0.0 {
        return Err(TrimError::Infeasible {
            v,
            alpha,
            chi,
            f_f,
            f_b,
        });
    }
    Ok((f_f, f_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankCheck {
    pub rank: usize,
    pub ok: bool,
}

/// Numerical rank of `M(chi)` from its singular values with the default
/// relative cutoff. Full rank (4) fails only at [`rank_degeneracy_angle`].
pub fn rank_check(chi: f64, p: &VehicleParams) -> RankCheck {
    rank_check_with_tol(chi, p, RANK_SV_REL_TOL)
}

pub fn rank_check_with_tol(chi: f64, p: &VehicleParams, rel_tol: f64) -> RankCheck {
    let m = effectiveness_matrix(chi, p);
    let sv = m.singular_values();
    let sv_max = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > sv_max * rel_tol).count();
    RankCheck { rank, ok: rank == 4 }
}

/// Closed-form tilt angle at which `M(chi)` loses rank:
/// `tan(chi) = kappa (l_fw + l_bw) / (l_fw l_bw − kappa²)`, from eliminating
/// the thrust null vector column by column. For the usual geometry this lies
/// at positive tilt, outside the operational `[-pi/2, 0]` envelope, so every
/// cruisable point is full rank.
pub fn rank_degeneracy_angle(p: &VehicleParams) -> f64 {
    (p.kappa * (p.l_fw + p.l_bw)).atan2(p.l_fw * p.l_bw - p.kappa * p.kappa)
}

/// Builds the equilibrium curve over an increasing speed grid: picks alpha
/// from the schedule, solves chi, attaches trim thrusts, and rejects
/// rank-deficient points. Errors carry the offending speed.
pub fn build_curve(
    v_grid: &[f64],
    schedule: &AlphaSchedule,
    p: &VehicleParams,
) -> Result<EquilibriumCurve, TrimError> {
    if v_grid.is_empty() {
        return Err(TrimError::BadGrid("empty speed grid".into()));
    }
    if v_grid.windows(2).any(|w| w[1] <= w[0]) || v_grid[0] < 0.0 {
        return Err(TrimError::BadGrid(
            "speeds must be nonnegative and strictly increasing".into(),
        ));
    }
    let mut points = Vec::with_capacity(v_grid.len());
    for &v in v_grid {
        let alpha = schedule.alpha_at(v);
        let chi = solve_chi(v, alpha, p)?;
        let (f_f, f_b) = trim_thrusts(v, alpha, chi, p)?;
        points.push(EquilibriumPoint {
            v,
            alpha,
            chi,
            f_f,
            f_b,
            residual: equilibrium_residual(v, alpha, chi, p),
            rank: rank_check(chi, p).rank,
        });
    }
    Ok(EquilibriumCurve {
        points,
        alpha: *schedule,
    })
}

/// Assembles the full cruise trim state and per-rotor thrusts for an
/// equilibrium point: level-yaw attitude pitched by alpha, body velocity
/// `[v C_a, 0, v S_a]`, symmetric thrust split.
pub fn trim_state(
    point: &EquilibriumPoint,
    z_ref: f64,
) -> (crate::vehicle::RigidBodyState, crate::vehicle::ThrustVector) {
    let state = crate::vehicle::RigidBodyState {
        x_w: Vector3::new(0.0, 0.0, z_ref),
        eta: Vector3::new(0.0, point.alpha, 0.0),
        v_b: Vector3::new(
            point.v * point.alpha.cos(),
            0.0,
            point.v * point.alpha.sin(),
        ),
        omega_b: Vector3::zeros(),
        chi: point.chi,
        chi_dot: 0.0,
    };
    let f = crate::vehicle::ThrustVector::new([
        point.f_f / 4.0,
        point.f_f / 4.0,
        point.f_f / 4.0,
        point.f_f / 4.0,
        point.f_b / 2.0,
        point.f_b / 2.0,
    ]);
    (state, f)
}
