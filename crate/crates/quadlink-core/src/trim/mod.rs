//! Cruise-flight equilibrium analysis and transition-reference planning.

mod equilibrium;
mod plan;

pub use equilibrium::{
    build_curve, equilibrium_residual, rank_check, rank_check_with_tol, rank_degeneracy_angle,
    solve_chi, trim_state, trim_thrusts, AlphaSchedule, EquilibriumCurve, EquilibriumPoint,
    RankCheck, TrimError, RANK_SV_REL_TOL,
};
pub use plan::{plan_transition, PlanSample, TransitionPlan};
