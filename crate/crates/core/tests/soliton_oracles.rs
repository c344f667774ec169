//! Closed-form oracles for the soliton equations in the Euclidean limit and
//! the nonexistence mechanism of the y-only reduction.

use solvflow_core::ode::IntegratorOptions;
use solvflow_core::solitons::{
    conserved_quantity, integrate_translator, reaper_y_residual, soliton_residual,
    TranslatorState,
};
use solvflow_core::solvgroup::{KillingSpec, Params};
use solvflow_core::surfgeom::GraphPatch;

/// In the flat limit with V the vertical translation field, the angle obeys
/// theta' = cos(theta); from the origin the trajectory is the classical
/// grim reaper: theta = y = atan(sinh s), z = ln cosh s.
#[test]
fn euclidean_translator_matches_gudermannian() {
    let params = Params::euclidean();
    let spec = KillingSpec::translational(0.0, 0.0, 1.0);
    let init = TranslatorState { s: 0.0, y: 0.0, z: 0.0, theta: 0.0 };
    let opts = IntegratorOptions::rkf45(1e-10, 3.0, 121);
    let (curve, _) = integrate_translator(init, &spec, params, &opts).unwrap();
    for k in 0..curve.len() {
        let s = curve.s[k];
        let gd = s.sinh().atan();
        assert!((curve.theta[k] - gd).abs() < 1e-8, "theta at s={s}");
        assert!((curve.y[k] - gd).abs() < 1e-8, "y at s={s}");
        assert!((curve.z[k] - s.cosh().ln()).abs() < 1e-8, "z at s={s}");
    }
    // discrete arc-length residual scales with the output spacing squared
    let ds: f64 = curve.s[1] - curve.s[0];
    assert!(curve.fd_arclength_residual() < 2.0 * ds * ds);
}

/// The grim-reaper trajectory is the graph z = -ln cos y.
#[test]
fn euclidean_translator_lies_on_the_reaper_graph() {
    let params = Params::euclidean();
    let spec = KillingSpec::translational(0.0, 0.0, 1.0);
    let init = TranslatorState { s: 0.0, y: 0.0, z: 0.0, theta: 0.0 };
    let opts = IntegratorOptions::rkf45(1e-10, 2.5, 51);
    let (curve, _) = integrate_translator(init, &spec, params, &opts).unwrap();
    for k in 0..curve.len() {
        assert!((curve.z[k] + curve.y[k].cos().ln()).abs() < 1e-8);
    }
}

/// Soliton identity and conservation along a non-Euclidean trajectory.
#[test]
fn soliton_identity_and_conservation() {
    let params = Params::new(1.0, -1.0);
    let spec = KillingSpec::translational(0.0, 0.8, 0.6);
    let init = TranslatorState { s: 0.0, y: 0.2, z: -0.1, theta: 1.0 };
    let opts = IntegratorOptions::rkf45(1e-10, 3.0, 301);
    let (curve, _) = integrate_translator(init, &spec, params, &opts).unwrap();

    let mut q_lo = f64::INFINITY;
    let mut q_hi = f64::NEG_INFINITY;
    for k in 0..curve.len() {
        let st = TranslatorState { s: curve.s[k], y: curve.y[k], z: curve.z[k], theta: curve.theta[k] };
        assert!(soliton_residual(&st, &spec, params).unwrap().abs() < 1e-8);
        let q = conserved_quantity(&st, &spec, params).unwrap();
        q_lo = q_lo.min(q);
        q_hi = q_hi.max(q);
    }
    let span = curve.s.last().unwrap() - curve.s[0];
    assert!((q_hi - q_lo) / span < 1e-8, "drift {:e} over {span}", q_hi - q_lo);
}

/// The closed-form grim reaper embedded as a z-only patch annihilates the
/// graph translator residual to FD accuracy.
#[test]
fn closed_form_reaper_embeds_with_small_residual() {
    let params = Params::euclidean();
    let nz = 5001;
    let z0 = -1.0;
    let dz = 2.0 / (nz - 1) as f64;
    let patch = GraphPatch::from_fn(0.0, z0, 0.1, dz, 3, nz, |_, z| -(z.cos().ln()));
    let field = solvflow_core::solitons::graph_translator_residual(&patch, params).unwrap();
    assert!(field.max_abs < 1e-6, "residual {:e}", field.max_abs);
}

/// The y-only reduction cannot hold for all z once lambda1 lambda2 != 0:
/// where the denominator diverges the residual is driven to 1 (the equation
/// degenerates to 1 = 0), monotonically in the window size.
#[test]
fn reaper_y_monotone_escape() {
    for params in [Params::new(1.0, 1.0), Params::new(-0.7, -0.7), Params::new(1.0, -1.0)] {
        let sup = |big: f64| -> f64 {
            let mut worst = f64::NEG_INFINITY;
            let n = 4001;
            for k in 0..n {
                let z = -big + 2.0 * big * k as f64 / (n - 1) as f64;
                worst = worst.max(reaper_y_residual(1.0, 1.0, z, params));
            }
            worst
        };
        let s5 = sup(5.0);
        let s10 = sup(10.0);
        let s20 = sup(20.0);
        assert!(s5 < s10 && s10 < s20 && s20 <= 1.0, "{params:?}: {s5} {s10} {s20}");
        assert!(1.0 - s20 < 1e-3, "{params:?}: sup(20) = {s20}");
    }
}

/// Pointwise value at the divergent end of [-10, 10] for unit data. With
/// positive lambdas the denominator grows towards negative z.
#[test]
fn reaper_y_unit_lambdas_residual_near_one() {
    let params = Params::new(1.0, 1.0);
    let r = reaper_y_residual(1.0, 1.0, -10.0, params);
    assert!((r - 1.0).abs() < 1e-8, "r = {r}");
}
