//! Time integration of the steepest-entropy-ascent equation of motion.
//!
//! Two steppers are provided: a fixed-step classical RK4 (the default,
//! `h = τ/100`, bit-reproducible run to run) and an adaptive
//! Dormand–Prince RK45 for stiff low-temperature initial states.
//!
//! The integrator enforces the structural features of the solutions:
//!
//! - out-of-support probabilities are never touched, so initially zero
//!   entries stay bitwise zero for the whole trajectory;
//! - normalization and energy are monitored every step and drift beyond a
//!   hard limit of `1e-6` aborts with a diagnostic;
//! - a step that undershoots zero by no more than `1e-12` is clamped to the
//!   support floor and the support renormalized (the vector field points
//!   inward at the boundary, so such undershoots are truncation noise);
//!   larger negatives abort.
//!
//! Integration backward in time (negative `t_end`) is allowed but not the
//! default: it descends from equilibrium toward the entropy floor and
//! becomes ill-conditioned as probabilities approach zero. Callers opting
//! in should treat it as best effort.

use crate::dynamics::{self, rate_core};
use crate::spectrum::EnergySpectrum;
use crate::state::{energy, entropy, ModelConstants, StateDistribution};
use crate::{Error, Result, SUPPORT_EPS};

/// Hard limit on |Σp − 1| and relative energy drift before aborting.
const DRIFT_ABORT: f64 = 1e-6;

/// Undershoots below −NEG_CLAMP abort; within it they clamp to the floor.
const NEG_CLAMP: f64 = 1e-12;

/// Stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classical fixed-step fourth-order Runge–Kutta.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with absolute L∞ error control.
    Rk45 { tolerance: f64 },
}

/// Integration window and sampling density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    method: Method,
    t_end: f64,
    sample_stride: usize,
}

impl IntegratorConfig {
    pub fn new(method: Method, t_end: f64, sample_stride: usize) -> Result<Self> {
        match method {
            Method::Rk4 { step } => {
                if !(step.is_finite() && step > 0.0) {
                    return Err(Error::Domain(format!("step {step} must be positive")));
                }
            }
            Method::Rk45 { tolerance } => {
                if !(tolerance.is_finite() && tolerance > 0.0 && tolerance <= 1e-2) {
                    return Err(Error::Domain(format!(
                        "tolerance {tolerance} must lie in (0, 1e-2]"
                    )));
                }
            }
        }
        if !(t_end.is_finite() && t_end != 0.0) {
            return Err(Error::Domain(format!("t_end {t_end} must be nonzero and finite")));
        }
        if sample_stride == 0 {
            return Err(Error::Domain("sample_stride must be at least 1".into()));
        }
        Ok(Self { method, t_end, sample_stride })
    }

    pub fn rk4(step: f64, t_end: f64, sample_stride: usize) -> Result<Self> {
        Self::new(Method::Rk4 { step }, t_end, sample_stride)
    }

    pub fn rk45(tolerance: f64, t_end: f64, sample_stride: usize) -> Result<Self> {
        Self::new(Method::Rk45 { tolerance }, t_end, sample_stride)
    }

    /// The reproducible default: RK4 with `h = τ/100` to `t_end = 50τ`,
    /// sampled every 10 steps.
    pub fn default_for(constants: &ModelConstants) -> Self {
        Self {
            method: Method::Rk4 { step: constants.tau() / 100.0 },
            t_end: 50.0 * constants.tau(),
            sample_stride: 10,
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn sample_stride(&self) -> usize {
        self.sample_stride
    }
}

/// One sampled point of a trajectory. Energy, entropy, and entropy rate are
/// the functionals evaluated on `state` and can be recomputed from it.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: StateDistribution,
    pub energy: f64,
    pub entropy: f64,
    pub entropy_rate: f64,
}

/// A time-ordered sequence of sampled states.
#[derive(Debug, Clone)]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
    spectrum: EnergySpectrum,
    constants: ModelConstants,
}

impl Trajectory {
    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    pub fn constants(&self) -> &ModelConstants {
        &self.constants
    }

    pub fn initial(&self) -> &TrajectoryPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectory has at least the initial point")
    }

    /// max |E(t) − E(0)| over all samples.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.points[0].energy;
        self.points.iter().map(|p| (p.energy - e0).abs()).fold(0.0, f64::max)
    }

    /// max |Σp − 1| over all samples.
    pub fn max_normalization_drift(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.state.probs().iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Minimum sampled entropy-production value.
    pub fn min_entropy_rate(&self) -> f64 {
        self.points.iter().map(|p| p.entropy_rate).fold(f64::INFINITY, f64::min)
    }
}

struct Worker<'a> {
    levels: &'a [f64],
    range: f64,
    tau: f64,
    support: Vec<usize>,
}

impl<'a> Worker<'a> {
    /// Rate evaluation at a Runge–Kutta stage. Stages with a non-positive
    /// in-support probability cannot be evaluated (ln p); the caller either
    /// aborts (fixed step) or retries with a smaller step (adaptive).
    fn stage_rate(&self, probs: &[f64]) -> Option<Vec<f64>> {
        if self.support.iter().any(|&i| probs[i] <= 0.0) {
            return None;
        }
        Some(rate_core(probs, &self.support, self.levels, self.range, self.tau))
    }

    fn add_scaled(&self, y: &[f64], k: &[f64], h: f64) -> Vec<f64> {
        let mut out = y.to_vec();
        for &i in &self.support {
            out[i] = y[i] + h * k[i];
        }
        out
    }

    /// Clamp tiny negative undershoots to the support floor; renormalize the
    /// support when a clamp happened. Undershoots beyond −1e-12 are real
    /// positivity violations and abort.
    fn repair(&self, y: &mut [f64], t: f64) -> Result<()> {
        let mut clamped = false;
        for &i in &self.support {
            if y[i] <= 0.0 {
                if y[i] > -NEG_CLAMP {
                    y[i] = SUPPORT_EPS;
                    clamped = true;
                } else {
                    return Err(Error::IntegrationAbort {
                        t,
                        reason: format!("probability {} fell to {}", i, y[i]),
                    });
                }
            }
        }
        if clamped {
            let sum: f64 = self.support.iter().map(|&i| y[i]).sum();
            for &i in &self.support {
                y[i] /= sum;
            }
        }
        Ok(())
    }

    fn check_drift(&self, y: &[f64], e0: f64, t: f64) -> Result<()> {
        let sum: f64 = self.support.iter().map(|&i| y[i]).sum();
        if (sum - 1.0).abs() > DRIFT_ABORT {
            return Err(Error::IntegrationAbort {
                t,
                reason: format!("normalization drifted to Σp = {sum}"),
            });
        }
        let e: f64 = self.support.iter().map(|&i| y[i] * self.levels[i]).sum();
        if (e - e0).abs() > DRIFT_ABORT * e0.abs().max(1.0) {
            return Err(Error::IntegrationAbort {
                t,
                reason: format!("energy drifted from {e0} to {e}"),
            });
        }
        Ok(())
    }

    fn rk4_step(&self, y: &[f64], h: f64, t: f64) -> Result<Vec<f64>> {
        let stage_err = |t: f64| Error::IntegrationAbort {
            t,
            reason: "non-positive probability at a Runge-Kutta stage".into(),
        };
        let k1 = self.stage_rate(y).ok_or_else(|| stage_err(t))?;
        let k2 = self
            .stage_rate(&self.add_scaled(y, &k1, 0.5 * h))
            .ok_or_else(|| stage_err(t))?;
        let k3 = self
            .stage_rate(&self.add_scaled(y, &k2, 0.5 * h))
            .ok_or_else(|| stage_err(t))?;
        let k4 = self.stage_rate(&self.add_scaled(y, &k3, h)).ok_or_else(|| stage_err(t))?;
        let mut out = y.to_vec();
        for &i in &self.support {
            out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(out)
    }

    /// One Dormand–Prince 5(4) attempt: the 5th-order solution and the L∞
    /// norm of the embedded error estimate, or `None` on a stage failure.
    fn rk45_attempt(&self, y: &[f64], h: f64) -> Option<(Vec<f64>, f64)> {
        const A: [[f64; 6]; 6] = [
            [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
            [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
            [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
            [
                9017.0 / 3168.0,
                -355.0 / 33.0,
                46732.0 / 5247.0,
                49.0 / 176.0,
                -5103.0 / 18656.0,
                0.0,
            ],
            [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
        ];
        // b5 − b4: the embedded error weights
        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        k.push(self.stage_rate(y)?);
        for row in &A {
            let mut stage = y.to_vec();
            for &i in &self.support {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    acc += row[j] * kj[i];
                }
                stage[i] = y[i] + h * acc;
            }
            k.push(self.stage_rate(&stage)?);
        }
        // the 6th stage vector is the 5th-order solution itself (FSAL layout)
        let mut y5 = y.to_vec();
        for &i in &self.support {
            let mut acc = 0.0;
            for (j, kj) in k.iter().take(6).enumerate() {
                acc += A[5][j] * kj[i];
            }
            y5[i] = y[i] + h * acc;
        }
        let mut err: f64 = 0.0;
        for &i in &self.support {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += E[j] * kj[i];
            }
            err = err.max((h * acc).abs());
        }
        Some((y5, err))
    }
}

/// Advance a state under the steepest-entropy-ascent equation from `t = 0`
/// to `config.t_end()`, sampling every `sample_stride` accepted steps (the
/// initial and final states are always sampled).
pub fn integrate(
    initial: &StateDistribution,
    spectrum: &EnergySpectrum,
    constants: &ModelConstants,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    if initial.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: initial.len() });
    }
    let worker = Worker {
        levels: spectrum.levels(),
        range: spectrum.range(),
        tau: constants.tau(),
        support: initial.support().to_vec(),
    };
    let mut y = initial.probs().to_vec();
    let e0 = energy(initial, spectrum)?;
    let mut t = 0.0;
    let t_end = config.t_end();
    let direction = t_end.signum();

    let mut points = Vec::new();
    let sample = |points: &mut Vec<TrajectoryPoint>, t: f64, y: &[f64]| {
        let state = StateDistribution::from_parts_unchecked(y.to_vec(), worker.support.clone());
        let point_energy = energy(&state, spectrum).expect("lengths already checked");
        let point_entropy = entropy(&state, constants);
        let entropy_rate = dynamics::entropy_production(&state, spectrum, constants)
            .expect("lengths already checked");
        points.push(TrajectoryPoint {
            t,
            state,
            energy: point_energy,
            entropy: point_entropy,
            entropy_rate,
        });
    };
    sample(&mut points, 0.0, &y);

    match config.method() {
        Method::Rk4 { step } => {
            let h = step * direction;
            let n_steps = (t_end / h).ceil() as u64;
            for step_index in 1..=n_steps {
                // shorten the last step to land exactly on t_end
                let h_eff = if step_index == n_steps { t_end - t } else { h };
                let mut next = worker.rk4_step(&y, h_eff, t)?;
                worker.repair(&mut next, t)?;
                worker.check_drift(&next, e0, t)?;
                y = next;
                t = if step_index == n_steps { t_end } else { t + h };
                if step_index % config.sample_stride() as u64 == 0 || step_index == n_steps {
                    sample(&mut points, t, &y);
                }
            }
        }
        Method::Rk45 { tolerance } => {
            let h_min = 1e-14 * t_end.abs().max(1.0);
            let mut h = (t_end.abs() / 100.0).min(constants.tau() / 10.0) * direction;
            let mut accepted: u64 = 0;
            let mut guard: u64 = 0;
            while (t_end - t) * direction > 0.0 {
                guard += 1;
                if guard > 10_000_000 {
                    return Err(Error::IntegrationAbort { t, reason: "step limit exceeded".into() });
                }
                if (t_end - t).abs() < h.abs() {
                    h = t_end - t;
                }
                match worker.rk45_attempt(&y, h) {
                    Some((y5, err)) if err <= tolerance => {
                        let mut next = y5;
                        worker.repair(&mut next, t)?;
                        worker.check_drift(&next, e0, t)?;
                        y = next;
                        t += h;
                        accepted += 1;
                        let grow = if err == 0.0 {
                            5.0
                        } else {
                            (0.9 * (tolerance / err).powf(0.2)).clamp(0.2, 5.0)
                        };
                        h *= grow;
                        if accepted.is_multiple_of(config.sample_stride() as u64) && t != t_end {
                            sample(&mut points, t, &y);
                        }
                    }
                    Some((_, err)) => {
                        h *= (0.9 * (tolerance / err).powf(0.2)).clamp(0.2, 0.9);
                        if h.abs() < h_min {
                            return Err(Error::IntegrationAbort {
                                t,
                                reason: format!("step size underflow ({h:e})"),
                            });
                        }
                    }
                    None => {
                        h *= 0.5;
                        if h.abs() < h_min {
                            return Err(Error::IntegrationAbort {
                                t,
                                reason: format!("step size underflow ({h:e})"),
                            });
                        }
                    }
                }
            }
            sample(&mut points, t_end, &y);
        }
    }

    Ok(Trajectory { points, spectrum: spectrum.clone(), constants: *constants })
}
