//! Closed-loop transition simulation.
//!
//! Per step: look up phase and references, run the phase position controller,
//! the attitude PID, the control allocation, and the tilt PID, mix and
//! saturate the thrusts, then integrate one RK4 step. The loop is strictly
//! sequential and free of any randomness or time source, so identical
//! configurations produce identical logs.

use nalgebra::Vector3;
use thiserror::Error;

use crate::control::{
    allocate, build_gain_schedule, cruise_position_control, cruise_state_transform, hover_position_control,
    hover_state, output_transform, AllocationMode, AttitudePid, ControlError, GainSchedule, TiltPid,
};
use crate::trim::{build_curve, plan_transition, EquilibriumCurve, TransitionPlan, TrimError};
use crate::vehicle::{
    in_plane_speed, integrate_rk4, mix_saturating, DynamicsError, ReducedThrusts, RigidBodyState,
    ThrustVector,
};

use super::config::SimConfig;
use super::phase::{phase_at, Phase, ScheduleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("configuration invalid:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error(transparent)]
    Trim(#[from] TrimError),
    #[error("gain synthesis failed: {0}")]
    Synthesis(ControlError),
    #[error("controller failed at t = {t:.3} s: {source}")]
    Control { t: f64, source: ControlError },
    #[error("dynamics failed at t = {t:.3} s: {source}")]
    Dynamics { t: f64, source: DynamicsError },
    #[error("state diverged at t = {t:.3} s: {what}")]
    Diverged { t: f64, what: String },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("log does not cover a {window:.1} s cruise window")]
    EmptyCruiseWindow { window: f64 },
}

/// One telemetry sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRecord {
    pub t: f64,
    pub x_w: Vector3<f64>,
    pub eta: Vector3<f64>,
    pub v_b: Vector3<f64>,
    pub omega_b: Vector3<f64>,
    pub chi: f64,
    pub chi_dot: f64,
    pub f: [f64; 6],
    pub phase: Phase,
    pub v_ref: f64,
    pub alpha_ref: f64,
    /// Tilt commanded by the allocation (deviates from `chi_nom` whenever the
    /// vehicle accelerates).
    pub chi_ref: f64,
    /// Equilibrium tilt of the planned point.
    pub chi_nom: f64,
}

/// Offline products of a configuration: equilibrium curve, transition plan,
/// and gain schedule.
#[derive(Debug, Clone)]
pub struct PreparedSim {
    pub curve: EquilibriumCurve,
    pub plan: TransitionPlan,
    pub gains: GainSchedule,
}

/// Validates the configuration and builds curve, plan, and gains.
pub fn prepare(config: &SimConfig) -> Result<PreparedSim, SimError> {
    config.validate().map_err(SimError::Config)?;
    let curve = build_curve(&config.speed_grid(), &config.alpha_schedule(), &config.vehicle)?;
    let plan = plan_transition(&config.schedule, &curve, &config.vehicle, config.plan.dt)?;
    let gains = build_gain_schedule(
        &plan,
        &config.weights.hover(),
        &config.weights.cruise(),
        &config.vehicle,
    )
    .map_err(SimError::Synthesis)?;
    Ok(PreparedSim { curve, plan, gains })
}

/// Initial state and time window of a run. Defaults reproduce the reference
/// scenario: at rest at the origin, the full schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub initial_state: RigidBodyState,
    pub t_start: f64,
    /// Stop early; `None` runs to the schedule end.
    pub t_stop: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            initial_state: RigidBodyState::default(),
            t_start: 0.0,
            t_stop: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub records: Vec<LogRecord>,
    /// Steps on which any rotor thrust hit the [0, f_max] clamp.
    pub saturation_events: usize,
}

/// Runs the closed-loop simulation over `[t_start, t_stop]`.
pub fn run_simulation(
    config: &SimConfig,
    plan: &TransitionPlan,
    gains: &GainSchedule,
    options: &RunOptions,
) -> Result<SimOutput, SimError> {
    let p = &config.vehicle;
    let dt = config.schedule.dt;
    let t_end = options
        .t_stop
        .unwrap_or(config.schedule.t_end)
        .min(config.schedule.t_end);
    let n_steps = ((t_end - options.t_start) / dt).round() as usize;
    let decimate = config.output.decimate.max(1);

    let mut state = options.initial_state;
    let mut attitude_pid = AttitudePid::new(config.pid.attitude);
    let mut tilt_pid = TiltPid::new(config.pid.tilt);
    let mut chi_ref = plan.sample_at(options.t_start).chi_nom;
    let mut records = Vec::with_capacity(n_steps / decimate + 2);
    let mut saturation_events = 0usize;

    for k in 0..=n_steps {
        let t = options.t_start + k as f64 * dt;
        guard_state(&state, t, config)?;

        let phase = phase_at(t.min(config.schedule.t_end), &config.schedule)?;
        let sample = plan.sample_at(t);
        let entry = gains.entry_at(t);

        let (f_x_ref, f_z_ref, omega_ref) = if phase == Phase::Hovering {
            let u = hover_position_control(&hover_state(&state), entry);
            (0.0, u[0], Vector3::new(u[1], u[2], u[3]))
        } else {
            let xi_t = cruise_state_transform(&state)
                .map_err(|e| SimError::Control { t, source: e.into() })?;
            let u_t = cruise_position_control(&xi_t, entry);
            let eta_t = Vector3::new(xi_t[6], xi_t[7], xi_t[8]);
            output_transform(&u_t, &eta_t)
        };

        let tau_ref = attitude_pid.update(&state.omega_b, &omega_ref, &p.j, dt);
        let mode = if phase == Phase::Hovering {
            AllocationMode::Hover
        } else {
            AllocationMode::Cruise
        };
        let alloc = allocate(f_x_ref, f_z_ref, &tau_ref, p, mode, chi_ref)
            .map_err(|e| SimError::Control { t, source: e })?;
        chi_ref = alloc.chi_ref;

        let f_minus = tilt_pid.update(state.chi, state.chi_dot, chi_ref, p.l_fh, dt);
        let (thrusts, clamped) = mix_saturating(
            &ReducedThrusts {
                f_plus: alloc.f_plus,
                f_minus,
            },
            p.f_max,
        );
        if clamped {
            saturation_events += 1;
            log::warn!("thrust saturation at t = {t:.3} s");
        }

        if k % decimate == 0 || k == n_steps {
            records.push(make_record(t, &state, &thrusts, phase, sample, chi_ref));
        }
        if k < n_steps {
            state = integrate_rk4(&state, &thrusts, p, dt)
                .map_err(|e| SimError::Dynamics { t, source: e })?;
        }
    }
    Ok(SimOutput {
        records,
        saturation_events,
    })
}

fn guard_state(state: &RigidBodyState, t: f64, config: &SimConfig) -> Result<(), SimError> {
    let g = &config.guards;
    if !state.to_vector().iter().all(|v| v.is_finite()) {
        return Err(SimError::Diverged {
            t,
            what: "non-finite state".to_string(),
        });
    }
    if state.x_w.norm() > g.max_position {
        return Err(SimError::Diverged {
            t,
            what: format!("position norm {:.1} m exceeds {:.1} m", state.x_w.norm(), g.max_position),
        });
    }
    if state.omega_b.norm() > g.max_rate || state.chi_dot.abs() > g.max_rate {
        return Err(SimError::Diverged {
            t,
            what: format!(
                "angular rate {:.1} rad/s exceeds {:.1} rad/s",
                state.omega_b.norm().max(state.chi_dot.abs()),
                g.max_rate
            ),
        });
    }
    Ok(())
}

fn make_record(
    t: f64,
    state: &RigidBodyState,
    thrusts: &ThrustVector,
    phase: Phase,
    sample: &crate::trim::PlanSample,
    chi_ref: f64,
) -> LogRecord {
    LogRecord {
        t,
        x_w: state.x_w,
        eta: state.eta,
        v_b: state.v_b,
        omega_b: state.omega_b,
        chi: state.chi,
        chi_dot: state.chi_dot,
        f: thrusts.f,
        phase,
        v_ref: sample.v_ref,
        alpha_ref: sample.alpha_ref,
        chi_ref,
        chi_nom: sample.chi_nom,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceTolerances {
    pub v: f64,
    pub theta: f64,
    pub chi: f64,
    pub z: f64,
}

impl Default for ConvergenceTolerances {
    fn default() -> Self {
        Self {
            v: 0.5,
            theta: 0.05,
            chi: 0.02,
            z: 0.1,
        }
    }
}

/// Worst deviations from the planned cruise point over the checked window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub window: (f64, f64),
    pub max_v_dev: f64,
    pub max_theta_dev: f64,
    pub max_chi_dev: f64,
    pub max_z_dev: f64,
    pub tol: ConvergenceTolerances,
}

impl ConvergenceReport {
    pub fn all_within(&self) -> bool {
        self.max_v_dev <= self.tol.v
            && self.max_theta_dev <= self.tol.theta
            && self.max_chi_dev <= self.tol.chi
            && self.max_z_dev <= self.tol.z
    }
}

impl std::fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "cruise convergence over t in [{:.1}, {:.1}] s:",
            self.window.0, self.window.1
        )?;
        let row = |f: &mut std::fmt::Formatter<'_>, name: &str, dev: f64, tol: f64| {
            writeln!(
                f,
                "  {name:<22} max {dev:>12.6}  (tol {tol})  {}",
                if dev <= tol { "PASS" } else { "FAIL" }
            )
        };
        row(f, "|s_v_x - v_cruise|", self.max_v_dev, self.tol.v)?;
        row(f, "|theta - alpha_ref|", self.max_theta_dev, self.tol.theta)?;
        row(f, "|chi - chi_nom|", self.max_chi_dev, self.tol.chi)?;
        row(f, "|z - z_ref|", self.max_z_dev, self.tol.z)
    }
}

/// Checks the final 10 s of the log against the planned cruise equilibrium.
pub fn check_cruise_convergence(
    records: &[LogRecord],
    schedule: &super::phase::PhaseSchedule,
    tol: &ConvergenceTolerances,
) -> Result<ConvergenceReport, SimError> {
    const WINDOW: f64 = 10.0;
    let Some(last) = records.last() else {
        return Err(SimError::EmptyCruiseWindow { window: WINDOW });
    };
    let t_hi = last.t;
    let t_lo = t_hi - WINDOW;
    let window: Vec<&LogRecord> = records.iter().filter(|r| r.t >= t_lo - 1e-9).collect();
    let covered = window.len() >= 2
        && t_lo >= schedule.t_accel_end - 1e-9
        && window.iter().all(|r| r.phase == Phase::Cruise);
    if !covered {
        return Err(SimError::EmptyCruiseWindow { window: WINDOW });
    }
    let mut report = ConvergenceReport {
        window: (t_lo, t_hi),
        max_v_dev: 0.0,
        max_theta_dev: 0.0,
        max_chi_dev: 0.0,
        max_z_dev: 0.0,
        tol: *tol,
    };
    for r in window {
        report.max_v_dev = report
            .max_v_dev
            .max((in_plane_speed(&r.v_b) - schedule.v_cruise).abs());
        report.max_theta_dev = report.max_theta_dev.max((r.eta[1] - r.alpha_ref).abs());
        report.max_chi_dev = report.max_chi_dev.max((r.chi - r.chi_nom).abs());
        report.max_z_dev = report.max_z_dev.max((r.x_w[2] - schedule.z_ref).abs());
    }
    Ok(report)
}
