//! Fixed-step RK4 and adaptive Runge-Kutta-Fehlberg 4(5) integration with
//! dense output on a uniform grid.
//!
//! The driver never steps across an output node: adaptive steps are clamped
//! to land exactly on the requested grid, so every recorded state is a
//! genuine Runge-Kutta state and derived identities hold at the nodes to
//! integrator accuracy, without interpolation.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with the given step size.
    Rk4 { step: f64 },
    /// Fehlberg 4(5) with per-step absolute error tolerance.
    Rkf45 { tol: f64 },
}

/// Options shared by the initial-value solvers.
#[derive(Clone, Copy, Debug)]
pub struct IntegratorOptions {
    pub method: Method,
    /// Total parameter span to cover (arclength or z-span per problem).
    pub max_arclength: f64,
    /// Number of dense-output nodes, endpoints included.
    pub output_nodes: usize,
    /// Stop when the monitored derivative magnitude exceeds this.
    pub blow_up: f64,
    /// Adaptive steps below this size terminate the run.
    pub min_step: f64,
    /// Stop when monitored state components leave [-bound, bound].
    pub domain_bound: f64,
}

impl IntegratorOptions {
    pub fn rkf45(tol: f64, max_arclength: f64, output_nodes: usize) -> Self {
        IntegratorOptions {
            method: Method::Rkf45 { tol },
            max_arclength,
            output_nodes,
            blow_up: 1e6,
            min_step: 1e-12,
            domain_bound: 1e3,
        }
    }

    pub fn rk4(step: f64, max_arclength: f64, output_nodes: usize) -> Self {
        IntegratorOptions {
            method: Method::Rk4 { step },
            max_arclength,
            output_nodes,
            blow_up: 1e6,
            min_step: 1e-12,
            domain_bound: 1e3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::Rk4 { step } if !(step > 0.0 && step.is_finite()) => {
                return Err(Error::InvalidOptions("RK4 step must be positive"))
            }
            Method::Rkf45 { tol } if !(tol > 0.0 && tol.is_finite()) => {
                return Err(Error::InvalidOptions("RKF45 tolerance must be positive"))
            }
            _ => {}
        }
        if !(self.max_arclength > 0.0 && self.max_arclength.is_finite()) {
            return Err(Error::InvalidOptions("max span must be positive"));
        }
        if self.output_nodes < 2 {
            return Err(Error::InvalidOptions("need at least two output nodes"));
        }
        if !(self.blow_up > 0.0) || !(self.min_step > 0.0) || !(self.domain_bound > 0.0) {
            return Err(Error::InvalidOptions("thresholds must be positive"));
        }
        Ok(())
    }
}

/// Why an integration stopped. Exactly one reason per run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminationReason {
    ReachedMaxLength,
    BlowUp,
    LeftDomain,
    StepUnderflow,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::ReachedMaxLength => "ReachedMaxLength",
            TerminationReason::BlowUp => "BlowUp",
            TerminationReason::LeftDomain => "LeftDomain",
            TerminationReason::StepUnderflow => "StepUnderflow",
        }
    }
}

/// Dense integration output: parameter values, states, and the stop reason.
#[derive(Clone, Debug)]
pub struct Integration<const N: usize> {
    pub s: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub termination: TerminationReason,
}

/// Per-step stop test; sees the parameter, state, and current derivative.
pub enum Stop {
    BlowUp,
    LeftDomain,
}

pub fn rk4_step<const N: usize>(
    rhs: &impl Fn(f64, [f64; N]) -> [f64; N],
    s: f64,
    y: [f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = rhs(s, y);
    let k2 = rhs(s + h / 2.0, add_scaled(y, k1, h / 2.0));
    let k3 = rhs(s + h / 2.0, add_scaled(y, k2, h / 2.0));
    let k4 = rhs(s + h, add_scaled(y, k3, h));
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn add_scaled<const N: usize>(y: [f64; N], d: [f64; N], h: f64) -> [f64; N] {
    let mut out = y;
    for i in 0..N {
        out[i] += h * d[i];
    }
    out
}

/// One Fehlberg 4(5) step; returns the fifth-order state and the error
/// estimate (max-abs difference of the embedded solutions).
fn rkf45_step<const N: usize>(
    rhs: &impl Fn(f64, [f64; N]) -> [f64; N],
    s: f64,
    y: [f64; N],
    h: f64,
) -> ([f64; N], f64) {
    let k1 = rhs(s, y);
    let k2 = rhs(s + h * 0.25, add_scaled(y, k1, h * 0.25));
    let mut y3 = y;
    for i in 0..N {
        y3[i] += h * (3.0 / 32.0 * k1[i] + 9.0 / 32.0 * k2[i]);
    }
    let k3 = rhs(s + h * 3.0 / 8.0, y3);
    let mut y4 = y;
    for i in 0..N {
        y4[i] += h * (1932.0 / 2197.0 * k1[i] - 7200.0 / 2197.0 * k2[i] + 7296.0 / 2197.0 * k3[i]);
    }
    let k4 = rhs(s + h * 12.0 / 13.0, y4);
    let mut y5 = y;
    for i in 0..N {
        y5[i] += h
            * (439.0 / 216.0 * k1[i] - 8.0 * k2[i] + 3680.0 / 513.0 * k3[i]
                - 845.0 / 4104.0 * k4[i]);
    }
    let k5 = rhs(s + h, y5);
    let mut y6 = y;
    for i in 0..N {
        y6[i] += h
            * (-8.0 / 27.0 * k1[i] + 2.0 * k2[i] - 3544.0 / 2565.0 * k3[i]
                + 1859.0 / 4104.0 * k4[i]
                - 11.0 / 40.0 * k5[i]);
    }
    let k6 = rhs(s + h * 0.5, y6);

    let mut high = y;
    let mut err = 0.0f64;
    for i in 0..N {
        let fifth = 16.0 / 135.0 * k1[i] + 6656.0 / 12825.0 * k3[i] + 28561.0 / 56430.0 * k4[i]
            - 9.0 / 50.0 * k5[i]
            + 2.0 / 55.0 * k6[i];
        let fourth = 25.0 / 216.0 * k1[i] + 1408.0 / 2565.0 * k3[i] + 2197.0 / 4104.0 * k4[i]
            - 1.0 / 5.0 * k5[i];
        high[i] += h * fifth;
        err = err.max((h * (fifth - fourth)).abs());
    }
    (high, err)
}

/// Integrates from `s0` in the given direction (+1 or -1), recording states
/// on the uniform grid `s0 + direction * k * span / (nodes - 1)`.
///
/// `stop` is evaluated at every recorded node and at every internal accepted
/// step with the current derivative; non-finite states terminate as blow-up.
pub fn integrate_to_grid<const N: usize>(
    rhs: &impl Fn(f64, [f64; N]) -> [f64; N],
    s0: f64,
    y0: [f64; N],
    direction: f64,
    opts: &IntegratorOptions,
    stop: &impl Fn(f64, &[f64; N], &[f64; N]) -> Option<Stop>,
) -> Result<Integration<N>> {
    opts.validate()?;
    debug_assert!(direction == 1.0 || direction == -1.0);
    let span = opts.max_arclength;
    let nodes = opts.output_nodes;
    let ds = span / (nodes - 1) as f64;

    let mut s_out = Vec::with_capacity(nodes);
    let mut states = Vec::with_capacity(nodes);
    s_out.push(s0);
    states.push(y0);

    let check = |s: f64, y: &[f64; N], dy: &[f64; N]| -> Option<TerminationReason> {
        if y.iter().any(|v| !v.is_finite()) || dy.iter().any(|v| !v.is_finite()) {
            return Some(TerminationReason::BlowUp);
        }
        match stop(s, y, dy) {
            Some(Stop::BlowUp) => Some(TerminationReason::BlowUp),
            Some(Stop::LeftDomain) => Some(TerminationReason::LeftDomain),
            None => None,
        }
    };

    let d0 = rhs(s0, y0);
    if let Some(reason) = check(s0, &y0, &d0) {
        return Ok(Integration { s: s_out, states, termination: reason });
    }

    let mut y = y0;
    let mut h_adaptive = match opts.method {
        Method::Rk4 { .. } => ds,
        Method::Rkf45 { .. } => ds.min(span / 50.0),
    };

    for k in 1..nodes {
        let s_target = s0 + direction * ds * k as f64;
        let mut s = s0 + direction * ds * (k - 1) as f64;

        match opts.method {
            Method::Rk4 { step } => {
                let nsub = (ds / step).ceil().max(1.0) as usize;
                let h = direction * ds / nsub as f64;
                for j in 0..nsub {
                    y = rk4_step(rhs, s, y, h);
                    s = s0 + direction * (ds * (k - 1) as f64 + ds * (j + 1) as f64 / nsub as f64);
                    let dy = rhs(s, y);
                    if let Some(reason) = check(s, &y, &dy) {
                        // record the state that tripped the stop, then end
                        s_out.push(s);
                        states.push(y);
                        return Ok(Integration { s: s_out, states, termination: reason });
                    }
                }
            }
            Method::Rkf45 { tol } => {
                let mut remaining = ds;
                while remaining > 1e-14 * ds.max(1.0) {
                    let mut h = h_adaptive.min(remaining);
                    loop {
                        if h < opts.min_step {
                            return Ok(Integration {
                                s: s_out,
                                states,
                                termination: TerminationReason::StepUnderflow,
                            });
                        }
                        let (y_new, err) = rkf45_step(rhs, s, y, direction * h);
                        if !err.is_finite() {
                            h *= 0.25;
                            continue;
                        }
                        if err <= tol {
                            y = y_new;
                            remaining -= h;
                            s = s_target - direction * remaining;
                            // grow the step, conservatively
                            let grow = if err > 0.0 {
                                0.9 * (tol / err).powf(0.2)
                            } else {
                                5.0
                            };
                            h_adaptive = (h * grow.clamp(0.2, 5.0)).min(span);
                            break;
                        }
                        h *= (0.9 * (tol / err).powf(0.25)).clamp(0.1, 0.9);
                    }
                    let dy = rhs(s, y);
                    if let Some(reason) = check(s, &y, &dy) {
                        s_out.push(s);
                        states.push(y);
                        return Ok(Integration { s: s_out, states, termination: reason });
                    }
                }
            }
        }

        s_out.push(s_target);
        states.push(y);
    }

    Ok(Integration { s: s_out, states, termination: TerminationReason::ReachedMaxLength })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_rk4_order() {
        // y' = -y, known solution; halving the step cuts the endpoint error
        // by about 2^4.
        let rhs = |_s: f64, y: [f64; 1]| [-y[0]];
        let exact = (-2.0f64).exp();
        let mut errs = Vec::new();
        for step in [0.02, 0.01] {
            let opts = IntegratorOptions::rk4(step, 2.0, 3);
            let run = integrate_to_grid(&rhs, 0.0, [1.0], 1.0, &opts, &|_, _, _| None).unwrap();
            errs.push((run.states.last().unwrap()[0] - exact).abs());
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn rkf45_matches_closed_form() {
        // harmonic oscillator, y(s) = cos s
        let rhs = |_s: f64, y: [f64; 2]| [y[1], -y[0]];
        let opts = IntegratorOptions::rkf45(1e-10, 6.0, 61);
        let run = integrate_to_grid(&rhs, 0.0, [1.0, 0.0], 1.0, &opts, &|_, _, _| None).unwrap();
        assert_eq!(run.termination, TerminationReason::ReachedMaxLength);
        assert_eq!(run.s.len(), 61);
        for (s, st) in run.s.iter().zip(&run.states) {
            assert!((st[0] - s.cos()).abs() < 1e-8, "at s={s}");
        }
    }

    #[test]
    fn blow_up_detected() {
        // y' = 1 + y^2 blows up at pi/2
        let rhs = |_s: f64, y: [f64; 1]| [1.0 + y[0] * y[0]];
        let mut opts = IntegratorOptions::rkf45(1e-10, 3.0, 31);
        opts.blow_up = 1e6;
        let run = integrate_to_grid(&rhs, 0.0, [0.0], 1.0, &opts, &|_, _, dy| {
            (dy[0].abs() >= 1e6).then_some(Stop::BlowUp)
        })
        .unwrap();
        assert_eq!(run.termination, TerminationReason::BlowUp);
        let last = run.s.last().unwrap();
        assert!((last - std::f64::consts::FRAC_PI_2).abs() < 0.01);
    }

    #[test]
    fn step_underflow_when_blowup_unchecked() {
        let rhs = |_s: f64, y: [f64; 1]| [1.0 + y[0] * y[0]];
        let mut opts = IntegratorOptions::rkf45(1e-10, 3.0, 31);
        opts.min_step = 1e-10;
        let run = integrate_to_grid(&rhs, 0.0, [0.0], 1.0, &opts, &|_, _, _| None).unwrap();
        assert_eq!(run.termination, TerminationReason::StepUnderflow);
    }

    #[test]
    fn backward_direction() {
        let rhs = |_s: f64, y: [f64; 1]| [y[0]];
        let opts = IntegratorOptions::rkf45(1e-11, 1.0, 6);
        let run = integrate_to_grid(&rhs, 0.0, [1.0], -1.0, &opts, &|_, _, _| None).unwrap();
        let s_last = *run.s.last().unwrap();
        assert!((s_last + 1.0).abs() < 1e-12);
        assert!((run.states.last().unwrap()[0] - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn options_validation() {
        assert!(IntegratorOptions::rk4(0.0, 1.0, 5).validate().is_err());
        assert!(IntegratorOptions::rkf45(1e-8, -1.0, 5).validate().is_err());
        assert!(IntegratorOptions::rkf45(1e-8, 1.0, 1).validate().is_err());
    }
}
