//! Aggregate simulation configuration with paper-scenario defaults.

use crate::control::{LqrWeights, PidGains};
use crate::trim::AlphaSchedule;
use crate::vehicle::VehicleParams;

use super::phase::PhaseSchedule;

/// Diagonal LQR weights for the two phase controllers.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrWeightsConfig {
    pub q_hover: [f64; 9],
    pub r_hover: [f64; 4],
    pub q_cruise: [f64; 9],
    pub r_cruise: [f64; 5],
}

impl Default for LqrWeightsConfig {
    fn default() -> Self {
        Self {
            q_hover: [1.0, 1.0, 10.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            r_hover: [100.0, 200.0, 200.0, 100.0],
            q_cruise: [1.0, 1.0, 1e2, 1e4, 1.0, 1e4, 1.0, 1e3, 1.0],
            r_cruise: [3100.0, 3100.0, 200.0, 200.0, 200.0],
        }
    }
}

impl LqrWeightsConfig {
    pub fn hover(&self) -> LqrWeights {
        LqrWeights::from_diagonals(&self.q_hover, &self.r_hover)
    }

    pub fn cruise(&self) -> LqrWeights {
        LqrWeights::from_diagonals(&self.q_cruise, &self.r_cruise)
    }

    fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let check = |errs: &mut Vec<String>, name: &str, vals: &[f64], strict: bool| {
            for (i, &v) in vals.iter().enumerate() {
                let ok = if strict { v > 0.0 } else { v >= 0.0 };
                if !ok {
                    errs.push(format!(
                        "weights.{name}[{i}]: must be {} 0 (got {v})",
                        if strict { ">" } else { ">=" }
                    ));
                }
            }
        };
        check(&mut errs, "q_hover", &self.q_hover, false);
        check(&mut errs, "r_hover", &self.r_hover, true);
        check(&mut errs, "q_cruise", &self.q_cruise, false);
        check(&mut errs, "r_cruise", &self.r_cruise, true);
        errs
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidConfig {
    pub attitude: PidGains,
    pub tilt: PidGains,
}

impl Default for PidConfig {
    fn default() -> Self {
        Self {
            attitude: PidGains {
                kp: 100.0,
                ki: 1000.0,
                kd: 0.3,
                integrator_limit: 0.1,
            },
            tilt: PidGains {
                kp: 5.0,
                ki: 1.0,
                kd: 4.0,
                integrator_limit: 0.5,
            },
        }
    }
}

/// Endpoints of the linear angle-of-attack ramp along the equilibrium curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaScheduleConfig {
    /// Angle of attack at vanishing forward speed (ready-phase target) [rad].
    pub alpha_start: f64,
    /// Angle of attack at the cruise speed [rad].
    pub alpha_cruise: f64,
}

impl Default for AlphaScheduleConfig {
    fn default() -> Self {
        Self {
            alpha_start: 0.15,
            alpha_cruise: 0.05,
        }
    }
}

/// Hard state bounds; exceeding one aborts the run as diverged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceGuards {
    /// Position norm bound [m].
    pub max_position: f64,
    /// Angular rate bound, body rates and tilt rate [rad/s].
    pub max_rate: f64,
}

impl Default for DivergenceGuards {
    fn default() -> Self {
        Self {
            max_position: 1e4,
            max_rate: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputConfig {
    /// Log every n-th step.
    pub decimate: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { decimate: 10 }
    }
}

/// Everything a simulation run needs; defaults reproduce the reference
/// desk-scale scenario.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimConfig {
    pub vehicle: VehicleParams,
    pub schedule: PhaseSchedule,
    pub weights: LqrWeightsConfig,
    pub pid: PidConfig,
    pub alpha: AlphaScheduleConfig,
    pub trim: TrimConfig,
    pub plan: PlanConfig,
    pub guards: DivergenceGuards,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimConfig {
    /// Curve sampling step in speed [m/s].
    pub dv: f64,
}

impl Default for TrimConfig {
    fn default() -> Self {
        Self { dv: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanConfig {
    /// Plan and gain-schedule sampling period [s].
    pub dt: f64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self { dt: 0.1 }
    }
}

impl SimConfig {
    pub fn alpha_schedule(&self) -> AlphaSchedule {
        AlphaSchedule::Linear {
            alpha_start: self.alpha.alpha_start,
            alpha_cruise: self.alpha.alpha_cruise,
            v_cruise: self.schedule.v_cruise,
        }
    }

    /// Speed grid from 0 to the cruise speed at the configured step, with the
    /// endpoint pinned exactly.
    pub fn speed_grid(&self) -> Vec<f64> {
        let v = self.schedule.v_cruise;
        let dv = self.trim.dv;
        let n = (v / dv).ceil() as usize;
        let mut grid: Vec<f64> = (0..n).map(|i| i as f64 * dv).collect();
        grid.push(v);
        grid
    }

    /// All violated invariants, with dotted key names; empty means valid.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errs = self.vehicle.validation_errors();
        if let Err(e) = self.schedule.validate() {
            errs.push(format!("schedule: {e}"));
        }
        errs.extend(self.weights.validation_errors());
        errs.extend(self.pid.attitude.validation_errors("pid.attitude"));
        errs.extend(self.pid.tilt.validation_errors("pid.tilt"));
        for (name, v) in [
            ("plan.alpha_start", self.alpha.alpha_start),
            ("plan.alpha_cruise", self.alpha.alpha_cruise),
        ] {
            if !(v.abs() < 1.0) {
                errs.push(format!("{name}: must lie in (-1, 1) rad (got {v})"));
            }
        }
        if !(self.trim.dv > 0.0) {
            errs.push(format!("trim.dv: must be > 0 (got {})", self.trim.dv));
        }
        if !(self.plan.dt > 0.0) {
            errs.push(format!("plan.dt: must be > 0 (got {})", self.plan.dt));
        }
        if !(self.guards.max_position > 0.0) {
            errs.push(format!(
                "guards.max_position: must be > 0 (got {})",
                self.guards.max_position
            ));
        }
        if !(self.guards.max_rate > 0.0) {
            errs.push(format!(
                "guards.max_rate: must be > 0 (got {})",
                self.guards.max_rate
            ));
        }
        if self.output.decimate == 0 {
            errs.push("output.decimate: must be >= 1".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SimConfig::default().validate().unwrap();
    }

    #[test]
    fn violations_aggregate() {
        let mut cfg = SimConfig::default();
        cfg.vehicle.m = -1.0;
        cfg.weights.r_hover[0] = 0.0;
        cfg.output.decimate = 0;
        let errs = cfg.validate().unwrap_err();
        assert!(errs.iter().any(|e| e.starts_with("vehicle.m")));
        assert!(errs.iter().any(|e| e.starts_with("weights.r_hover[0]")));
        assert!(errs.iter().any(|e| e.starts_with("output.decimate")));
    }

    #[test]
    fn speed_grid_hits_cruise_exactly() {
        let cfg = SimConfig::default();
        let grid = cfg.speed_grid();
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 20.0);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }
}
