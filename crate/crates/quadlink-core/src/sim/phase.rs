//! Four-phase transition timeline: hover, ready, acceleration, cruise.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Hovering,
    Ready,
    Acceleration,
    Cruise,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Hovering => "hovering",
            Phase::Ready => "ready",
            Phase::Acceleration => "acceleration",
            Phase::Cruise => "cruise",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("schedule times must satisfy 0 < ready_start < ready_converge <= accel_start < accel_end < t_end: {0}")]
    BadOrdering(String),
    #[error("schedule.{field}: must be > 0 (got {value})")]
    NonPositive { field: &'static str, value: f64 },
    #[error("time {t} outside the schedule range [0, {t_end}]")]
    OutOfRange { t: f64, t_end: f64 },
}

/// Phase boundary times and the cruise target. Boundary instants belong to
/// the later phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSchedule {
    /// Hover ends / ready ramp begins [s].
    pub t_ready_start: f64,
    /// Ready ramp reaches the curve start; held until acceleration [s].
    pub t_ready_converge: f64,
    pub t_accel_start: f64,
    pub t_accel_end: f64,
    pub t_end: f64,
    /// Cruise target forward speed [m/s].
    pub v_cruise: f64,
    /// Reference altitude as NED z [m].
    pub z_ref: f64,
    /// Simulation step [s].
    pub dt: f64,
}

impl Default for PhaseSchedule {
    fn default() -> Self {
        Self {
            t_ready_start: 20.0,
            t_ready_converge: 25.0,
            t_accel_start: 30.0,
            t_accel_end: 50.0,
            t_end: 80.0,
            v_cruise: 20.0,
            z_ref: -5.0,
            dt: 1e-3,
        }
    }
}

impl PhaseSchedule {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        if !(self.dt > 0.0) {
            return Err(ScheduleError::NonPositive {
                field: "dt",
                value: self.dt,
            });
        }
        if !(self.v_cruise > 0.0) {
            return Err(ScheduleError::NonPositive {
                field: "v_cruise",
                value: self.v_cruise,
            });
        }
        let ordered = 0.0 < self.t_ready_start
            && self.t_ready_start < self.t_ready_converge
            && self.t_ready_converge <= self.t_accel_start
            && self.t_accel_start < self.t_accel_end
            && self.t_accel_end < self.t_end;
        if !ordered {
            return Err(ScheduleError::BadOrdering(format!(
                "ready_start={}, ready_converge={}, accel_start={}, accel_end={}, t_end={}",
                self.t_ready_start,
                self.t_ready_converge,
                self.t_accel_start,
                self.t_accel_end,
                self.t_end
            )));
        }
        Ok(())
    }
}

/// Piecewise-constant phase lookup; boundaries map to the later phase.
pub fn phase_at(t: f64, s: &PhaseSchedule) -> Result<Phase, ScheduleError> {
    if !(0.0..=s.t_end).contains(&t) {
        return Err(ScheduleError::OutOfRange { t, t_end: s.t_end });
    }
    Ok(if t < s.t_ready_start {
        Phase::Hovering
    } else if t < s.t_accel_start {
        Phase::Ready
    } else if t < s.t_accel_end {
        Phase::Acceleration
    } else {
        Phase::Cruise
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_timeline() {
        let s = PhaseSchedule::default();
        s.validate().unwrap();
        assert_eq!(phase_at(10.0, &s).unwrap(), Phase::Hovering);
        assert_eq!(phase_at(20.0, &s).unwrap(), Phase::Ready);
        assert_eq!(phase_at(27.0, &s).unwrap(), Phase::Ready);
        assert_eq!(phase_at(30.0, &s).unwrap(), Phase::Acceleration);
        assert_eq!(phase_at(55.0, &s).unwrap(), Phase::Cruise);
        assert_eq!(phase_at(80.0, &s).unwrap(), Phase::Cruise);
    }

    #[test]
    fn out_of_range_rejected() {
        let s = PhaseSchedule::default();
        assert!(phase_at(-0.1, &s).is_err());
        assert!(phase_at(80.1, &s).is_err());
    }

    #[test]
    fn bad_ordering_rejected() {
        let s = PhaseSchedule {
            t_accel_start: 24.0,
            ..PhaseSchedule::default()
        };
        assert!(matches!(s.validate(), Err(ScheduleError::BadOrdering(_))));
    }
}
