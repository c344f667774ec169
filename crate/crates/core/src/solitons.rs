//! Translator (soliton) equations.
//!
//! A surface translating along a Killing field `V` satisfies
//! `g(V, nu) = -H` pointwise. For surfaces invariant in the x-direction with
//! `V = beta E~2 + mu E~3` (the `eta E~1` part is tangent and dropped), the
//! profile curve solves
//!
//! ```text
//! y'     = e^{l2 z} cos(theta)
//! z'     = sin(theta)
//! theta' = -sin(theta) beta e^{-l2 z} - sin(theta) mu l2 y e^{-l2 z}
//!          - cos(theta) (-mu + l1 + l2)
//! ```
//!
//! When `l1 + l2 = 0` and `l2 != 0` the whole right-hand side of the angle
//! equation is a total derivative and
//! `Q = theta - e^{-l2 z} (beta / l2 + mu y)` is conserved.
//!
//! Graphs translating along `E~1` satisfy `e^{-l1 z} = sigma H`; its two
//! one-dimensional reductions are `reaper_y_residual` (which admits no
//! solution when `l1 l2 != 0`) and the `f(z)` equation `reaper_z_rhs`.

use crate::error::{Error, Result};
use crate::ode::{integrate_to_grid, Integration, IntegratorOptions, Stop, TerminationReason};
use crate::solvgroup::{inner, killing_eval, KillingSpec, Params, Point};
use crate::surfgeom::{
    graph_shape, invariant_jet, invariant_mean_curvature, unit_normal, GraphPatch, ProfileCurve,
};

/// State of the invariant-translator ODE at arclength `s`. The angle is
/// stored unwrapped so winding stays observable.
#[derive(Clone, Copy, Debug)]
pub struct TranslatorState {
    pub s: f64,
    pub y: f64,
    pub z: f64,
    pub theta: f64,
}

fn check_ansatz(spec: &KillingSpec) -> Result<()> {
    if spec.rotational.is_some() {
        return Err(Error::TranslatorAnsatz(
            "rotational Killing coefficients are outside the invariant-curve ansatz",
        ));
    }
    if spec.eta != 0.0 {
        return Err(Error::TranslatorAnsatz(
            "eta must be zero: E~1 is tangent to the invariant surface",
        ));
    }
    Ok(())
}

/// Right-hand side `(y', z', theta')` of the invariant-translator system.
pub fn translator_rhs(state: &TranslatorState, spec: &KillingSpec, params: Params) -> Result<[f64; 3]> {
    check_ansatz(spec)?;
    Ok(translator_rhs_unchecked(state.y, state.z, state.theta, spec, params))
}

fn translator_rhs_unchecked(y: f64, z: f64, theta: f64, spec: &KillingSpec, params: Params) -> [f64; 3] {
    let (sin_t, cos_t) = theta.sin_cos();
    let e2 = (params.lambda2 * z).exp();
    let em2 = (-params.lambda2 * z).exp();
    let dtheta = -sin_t * spec.beta * em2 - sin_t * spec.mu * params.lambda2 * y * em2
        - cos_t * (-spec.mu + params.lambda1 + params.lambda2);
    [e2 * cos_t, sin_t, dtheta]
}

/// Integrates the translator system from `init`, with dense output at
/// uniform arclength.
pub fn integrate_translator(
    init: TranslatorState,
    spec: &KillingSpec,
    params: Params,
    opts: &IntegratorOptions,
) -> Result<(ProfileCurve, TerminationReason)> {
    check_ansatz(spec)?;
    let spec = *spec;
    let rhs = move |_s: f64, st: [f64; 3]| translator_rhs_unchecked(st[0], st[1], st[2], &spec, params);
    let blow_up = opts.blow_up;
    let bound = opts.domain_bound;
    let stop = move |_s: f64, y: &[f64; 3], dy: &[f64; 3]| -> Option<Stop> {
        if dy[2].abs() >= blow_up {
            Some(Stop::BlowUp)
        } else if y[0].abs() > bound || y[1].abs() > bound {
            Some(Stop::LeftDomain)
        } else {
            None
        }
    };
    let run = integrate_to_grid(&rhs, init.s, [init.y, init.z, init.theta], 1.0, opts, &stop)?;
    Ok((profile_from_run(&run, params), run.termination))
}

fn profile_from_run(run: &Integration<3>, params: Params) -> ProfileCurve {
    ProfileCurve {
        s: run.s.clone(),
        y: run.states.iter().map(|st| st[0]).collect(),
        z: run.states.iter().map(|st| st[1]).collect(),
        theta: run.states.iter().map(|st| st[2]).collect(),
        params,
    }
}

/// `Q = theta - e^{-l2 z} (beta / l2 + mu y)`, constant along translator
/// trajectories. Only defined for `l1 + l2 = 0`, `l2 != 0`; the derivation
/// divides by `l2` and no limit form is invented.
pub fn conserved_quantity(state: &TranslatorState, spec: &KillingSpec, params: Params) -> Result<f64> {
    check_ansatz(spec)?;
    if params.lambda1 + params.lambda2 != 0.0 || params.lambda2 == 0.0 {
        return Err(Error::ConservedUnavailable);
    }
    let em2 = (-params.lambda2 * state.z).exp();
    Ok(state.theta - em2 * (spec.beta / params.lambda2 + spec.mu * state.y))
}

/// Pointwise soliton identity `g(V, nu) + H` for a translator state, with
/// the two sides evaluated through independent routes: `V` and `nu` through
/// the frame/metric machinery, `H` through the closed invariant formula with
/// `theta'` taken from the ODE right-hand side.
pub fn soliton_residual(state: &TranslatorState, spec: &KillingSpec, params: Params) -> Result<f64> {
    let rhs = translator_rhs(state, spec, params)?;
    let theta_prime = rhs[2];
    let jet = invariant_jet(state.theta, theta_prime, state.y, state.z, params);
    let nu = unit_normal(&jet, params)?;
    let v = killing_eval(*spec, Point::new(0.0, state.y, state.z), params)?;
    let gvn = inner(v, nu, params)?;
    Ok(gvn + invariant_mean_curvature(state.theta, theta_prime, params))
}

/// Interior residual field of the graph translator equation
/// `r = e^{-l1 z} - sigma H`, with derivatives by centered differences.
#[derive(Clone, Debug)]
pub struct ResidualField {
    /// Interior grid extents (ny - 2, nz - 2 of the source patch).
    pub ny: usize,
    pub nz: usize,
    pub values: Vec<f64>,
    pub max_abs: f64,
}

pub fn graph_translator_residual(patch: &GraphPatch, params: Params) -> Result<ResidualField> {
    if patch.ny < 3 || patch.nz < 3 {
        return Err(Error::GridTooSmall { ny: patch.ny, nz: patch.nz });
    }
    let (ny, nz) = (patch.ny - 2, patch.nz - 2);
    let mut values = Vec::with_capacity(ny * nz);
    let mut max_abs = 0.0f64;
    for iz in 1..patch.nz - 1 {
        for iy in 1..patch.ny - 1 {
            let jet = patch.fd_jet_at(iy, iz);
            let gs = graph_shape(&jet, params);
            let r = (-params.lambda1 * jet.z).exp() - gs.sigma_mean;
            max_abs = max_abs.max(r.abs());
            values.push(r);
        }
    }
    Ok(ResidualField { ny, nz, values, max_abs })
}

/// Residual of the y-only reduction,
/// `r = 1 - f_yy / (f_y^2 e^{-2 l1 z} + e^{-2 l2 z})`.
///
/// A y-only translator would need `r = 0` for every `z`; when
/// `l1 l2 != 0` the denominator diverges along one end of the z-axis
/// (which end depends on the signs of the lambdas), driving `r -> 1`:
/// the equation degenerates to `1 = 0` and no solution exists.
pub fn reaper_y_residual(f_y: f64, f_yy: f64, z: f64, params: Params) -> f64 {
    let denom = f_y * f_y * (-2.0 * params.lambda1 * z).exp() + (-2.0 * params.lambda2 * z).exp();
    1.0 - f_yy / denom
}

/// The z-only reduction solved for the second derivative:
/// `f_zz = (1 + l2 f_z)(f_z^2 e^{-2 l1 z} + 1) + 2 l1 f_z + l1 f_z^3 e^{-2 l1 z}`.
pub fn reaper_z_rhs(f_z: f64, z: f64, params: Params) -> f64 {
    let s1sq = (-2.0 * params.lambda1 * z).exp();
    (1.0 + params.lambda2 * f_z) * (f_z * f_z * s1sq + 1.0)
        + 2.0 * params.lambda1 * f_z
        + params.lambda1 * f_z.powi(3) * s1sq
}

/// One-dimensional solution profile of the `f(z)` translator equation.
#[derive(Clone, Debug)]
pub struct ReaperProfile {
    pub z: Vec<f64>,
    pub f: Vec<f64>,
    pub f_z: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ReaperRun {
    pub profile: ReaperProfile,
    /// Combined stop reason (worst of the two directions).
    pub termination: TerminationReason,
    pub forward: TerminationReason,
    pub backward: TerminationReason,
}

fn severity(t: TerminationReason) -> u8 {
    match t {
        TerminationReason::ReachedMaxLength => 0,
        TerminationReason::LeftDomain => 1,
        TerminationReason::BlowUp => 2,
        TerminationReason::StepUnderflow => 3,
    }
}

/// Integrates the `f(z)` translator ODE from `(z0, f0, fz0)` across
/// `[z_min, z_max]` (both directions from `z0`), RKF45 or RK4 per options.
/// `opts.max_arclength` and `opts.output_nodes` describe the full span.
pub fn integrate_reaper_z(
    f0: f64,
    fz0: f64,
    z0: f64,
    z_min: f64,
    z_max: f64,
    params: Params,
    opts: &IntegratorOptions,
) -> Result<ReaperRun> {
    if !(z_min <= z0 && z0 <= z_max && z_min < z_max) {
        return Err(Error::InvalidOptions("need z_min <= z0 <= z_max with z_min < z_max"));
    }
    let rhs = move |z: f64, y: [f64; 2]| [y[1], reaper_z_rhs(y[1], z, params)];
    let blow_up = opts.blow_up;
    let bound = opts.domain_bound;
    let stop = move |_z: f64, y: &[f64; 2], dy: &[f64; 2]| -> Option<Stop> {
        if dy[1].abs() >= blow_up {
            Some(Stop::BlowUp)
        } else if y[0].abs() > bound {
            Some(Stop::LeftDomain)
        } else {
            None
        }
    };

    let span = z_max - z_min;
    let ds = span / (opts.output_nodes.max(2) - 1) as f64;
    let side = |length: f64, direction: f64| -> Result<Option<Integration<2>>> {
        if length <= 0.0 {
            return Ok(None);
        }
        let nodes = ((length / ds).round() as usize).max(1) + 1;
        let mut side_opts = *opts;
        side_opts.max_arclength = length;
        side_opts.output_nodes = nodes;
        Ok(Some(integrate_to_grid(&rhs, z0, [f0, fz0], direction, &side_opts, &stop)?))
    };

    let fwd = side(z_max - z0, 1.0)?;
    let bwd = side(z0 - z_min, -1.0)?;

    let mut z = Vec::new();
    let mut f = Vec::new();
    let mut f_z = Vec::new();
    let mut backward = TerminationReason::ReachedMaxLength;
    let mut forward = TerminationReason::ReachedMaxLength;
    if let Some(run) = &bwd {
        backward = run.termination;
        for k in (1..run.s.len()).rev() {
            z.push(run.s[k]);
            f.push(run.states[k][0]);
            f_z.push(run.states[k][1]);
        }
    }
    z.push(z0);
    f.push(f0);
    f_z.push(fz0);
    if let Some(run) = &fwd {
        forward = run.termination;
        for k in 1..run.s.len() {
            z.push(run.s[k]);
            f.push(run.states[k][0]);
            f_z.push(run.states[k][1]);
        }
    }

    let termination = if severity(forward) >= severity(backward) { forward } else { backward };
    Ok(ReaperRun { profile: ReaperProfile { z, f, f_z }, termination, forward, backward })
}
