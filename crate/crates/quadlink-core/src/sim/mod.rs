//! Four-phase transition simulation: phase timeline, configuration, and the
//! closed-loop integration engine.

mod config;
mod engine;
mod phase;

pub use config::{
    AlphaScheduleConfig, DivergenceGuards, LqrWeightsConfig, OutputConfig, PidConfig, PlanConfig,
    SimConfig, TrimConfig,
};
pub use engine::{
    check_cruise_convergence, prepare, run_simulation, ConvergenceReport, ConvergenceTolerances,
    LogRecord, PreparedSim, RunOptions, SimError, SimOutput,
};
pub use phase::{phase_at, Phase, PhaseSchedule, ScheduleError};
