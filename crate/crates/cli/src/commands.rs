//! The four subcommands: translator, reaper, evolve, verify.

use std::path::{Path, PathBuf};

use serde_json::json;

use solvflow_core::flow::{
    run_curve_flow, run_graph_flow, CurveBoundary, CurveFlowState, GraphBoundary, GraphFlowState,
};
use solvflow_core::ode::TerminationReason;
use solvflow_core::solitons::{
    conserved_quantity, integrate_reaper_z, integrate_translator, reaper_z_rhs, soliton_residual,
    translator_rhs, TranslatorState,
};
use solvflow_core::solvgroup::KillingSpec;
use solvflow_core::surfgeom::{
    graph_shape, invariant_mean_curvature, GraphJet, GraphPatch, ProfileCurve,
};
use solvflow_core::verify::{run_verify, CheckResult, VerifyConfig, SUITES};
use solvflow_core::{Error, Params};

use crate::config::{GridBlock, RunConfig, SourceBlock};
use crate::output::{column, ensure_dir, read_csv, write_csv, write_json, write_svg_polyline};
use crate::CliError;

fn params_json(params: Params) -> serde_json::Value {
    json!({ "lambda1": params.lambda1, "lambda2": params.lambda2 })
}

/// Flow- and integration-level failures are numerical (exit 1); anything
/// wrong with the requested setup is a config error (exit 2).
fn numerical(e: Error) -> CliError {
    match e {
        Error::CflViolation { dt, dt_max } => CliError::numerical(format!(
            "CFL violation: dt = {dt:.3e} exceeds the stable bound; suggested dt <= {:.3e}",
            dt_max
        )),
        Error::NonFinite { what, index } => {
            CliError::numerical(format!("non-finite {what} at index {index}"))
        }
        other => CliError::numerical(other.to_string()),
    }
}

fn setup(e: Error) -> CliError {
    CliError::config(e.to_string())
}

// ---------------------------------------------------------------------------
// translator
// ---------------------------------------------------------------------------

pub fn cmd_translator(cfg: &RunConfig) -> Result<i32, CliError> {
    let block = cfg
        .file
        .translator
        .as_ref()
        .ok_or_else(|| CliError::config("config has no [translator] block".to_string()))?;
    let params = cfg.params;
    let speed = cfg.speed.unwrap_or(block.speed);
    let spec = KillingSpec::translational(block.eta, speed * block.beta, speed * block.mu);
    let opts = block.integrator.to_options(block.integrator.max_arclength)?;
    let init = TranslatorState { s: 0.0, y: block.y0, z: block.z0, theta: block.theta0 };

    let (curve, termination) =
        integrate_translator(init, &spec, params, &opts).map_err(setup)?;

    ensure_dir(&cfg.out_dir)?;
    let dir = Path::new(&cfg.out_dir);
    let mut files: Vec<String> = Vec::new();

    if cfg.wants("csv") {
        let path = dir.join("translator.csv");
        let rows = (0..curve.len()).map(|k| {
            let st = TranslatorState {
                s: curve.s[k],
                y: curve.y[k],
                z: curve.z[k],
                theta: curve.theta[k],
            };
            let d = translator_rhs(&st, &spec, params).expect("validated spec");
            let h = invariant_mean_curvature(st.theta, d[2], params);
            let residual = soliton_residual(&st, &spec, params).expect("validated spec");
            vec![st.s, st.y, st.z, st.theta, h, residual]
        });
        write_csv(&path, &["s", "y", "z", "theta", "H", "residual"], rows)?;
        files.push("translator.csv".to_string());
    }

    let conserved = if params.lambda1 + params.lambda2 == 0.0 && params.lambda2 != 0.0 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..curve.len() {
            let st = TranslatorState {
                s: curve.s[k],
                y: curve.y[k],
                z: curve.z[k],
                theta: curve.theta[k],
            };
            let q = conserved_quantity(&st, &spec, params).expect("precondition gated");
            lo = lo.min(q);
            hi = hi.max(q);
        }
        Some(json!({ "min": lo, "max": hi }))
    } else {
        None
    };

    if cfg.wants("svg") {
        let path = dir.join("translator.svg");
        let pts: Vec<(f64, f64)> = curve.y.iter().zip(&curve.z).map(|(&y, &z)| (y, z)).collect();
        write_svg_polyline(&path, &pts)?;
        files.push("translator.svg".to_string());
    }

    if cfg.wants("json") {
        let path = dir.join("translator.json");
        let mut meta = json!({
            "schema": "solvflow-schema v1",
            "command": "translator",
            "params": params_json(params),
            "killing": { "eta": spec.eta, "beta": spec.beta, "mu": spec.mu, "speed": speed },
            "init": { "y": block.y0, "z": block.z0, "theta": block.theta0 },
            "termination": termination.as_str(),
            "nodes": curve.len(),
            "arclength": curve.s.last().unwrap() - curve.s[0],
            "files": files,
        });
        if let Some(c) = conserved {
            meta["conserved"] = c;
        }
        write_json(&path, &meta)?;
    }

    Ok(exit_for(termination))
}

fn exit_for(termination: TerminationReason) -> i32 {
    match termination {
        TerminationReason::StepUnderflow => 1,
        _ => 0,
    }
}

// ---------------------------------------------------------------------------
// reaper
// ---------------------------------------------------------------------------

pub fn cmd_reaper(cfg: &RunConfig) -> Result<i32, CliError> {
    let block = cfg
        .file
        .reaper
        .as_ref()
        .ok_or_else(|| CliError::config("config has no [reaper] block".to_string()))?;
    let params = cfg.params;
    let [z_min, z_max] = block.span;
    let opts = block.integrator.to_options(z_max - z_min)?;

    let run = integrate_reaper_z(block.f0, block.fz0, block.z0, z_min, z_max, params, &opts)
        .map_err(setup)?;
    let prof = &run.profile;

    ensure_dir(&cfg.out_dir)?;
    let dir = Path::new(&cfg.out_dir);
    let mut files: Vec<String> = Vec::new();

    if cfg.wants("csv") {
        let path = dir.join("reaper.csv");
        let rows = (0..prof.z.len()).map(|k| {
            let (z, f, f_z) = (prof.z[k], prof.f[k], prof.f_z[k]);
            let jet = GraphJet {
                y: 0.0,
                z,
                f,
                f_y: 0.0,
                f_z,
                f_yy: 0.0,
                f_yz: 0.0,
                f_zz: reaper_z_rhs(f_z, z, params),
            };
            let gs = graph_shape(&jet, params);
            let residual = (-params.lambda1 * z).exp() - gs.sigma_mean;
            vec![z, f, f_z, residual]
        });
        write_csv(&path, &["z", "f", "f_z", "residual"], rows)?;
        files.push("reaper.csv".to_string());
    }

    if cfg.wants("svg") {
        let path = dir.join("reaper.svg");
        let pts: Vec<(f64, f64)> = prof.z.iter().zip(&prof.f).map(|(&z, &f)| (z, f)).collect();
        write_svg_polyline(&path, &pts)?;
        files.push("reaper.svg".to_string());
    }

    if cfg.wants("json") {
        let path = dir.join("reaper.json");
        let meta = json!({
            "schema": "solvflow-schema v1",
            "command": "reaper",
            "params": params_json(params),
            "init": { "f": block.f0, "f_z": block.fz0, "z": block.z0 },
            "span": { "requested": [z_min, z_max], "covered": [prof.z[0], prof.z.last().unwrap()] },
            "termination": run.termination.as_str(),
            "termination_forward": run.forward.as_str(),
            "termination_backward": run.backward.as_str(),
            "nodes": prof.z.len(),
            "files": files,
        });
        write_json(&path, &meta)?;
    }

    Ok(exit_for(run.termination))
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

enum Initial {
    Curve(ProfileCurve),
    Graph(GraphPatch),
}

fn load_source(kind: &str, source: &SourceBlock, params: Params) -> Result<Initial, CliError> {
    let grid = source.grid.unwrap_or_default();
    match (kind, source.kind.as_str()) {
        ("curve", "csv") | ("curve", "run-dir") => {
            let path = resolve_path(source, "translator.csv")?;
            let (cols, rows) = read_csv(&path)?;
            let curve = ProfileCurve {
                s: column(&cols, &rows, "s", &path)?,
                y: column(&cols, &rows, "y", &path)?,
                z: column(&cols, &rows, "z", &path)?,
                theta: column(&cols, &rows, "theta", &path)?,
                params,
            };
            curve.validate().map_err(setup)?;
            Ok(Initial::Curve(curve))
        }
        ("curve", "shape") => match source.shape.as_deref() {
            Some("vertical-line") => {
                let n = grid.nodes.max(4);
                let z1 = grid.z0 + grid.dz * (n - 1) as f64;
                let s: Vec<f64> = (0..n)
                    .map(|k| (z1 - grid.z0) * k as f64 / (n - 1) as f64)
                    .collect();
                Ok(Initial::Curve(ProfileCurve {
                    s: s.clone(),
                    y: vec![grid.y0; n],
                    z: s.iter().map(|v| grid.z0 + v).collect(),
                    theta: vec![std::f64::consts::FRAC_PI_2; n],
                    params,
                }))
            }
            other => Err(CliError::config(format!("unknown curve shape {other:?}"))),
        },
        ("graph", "csv") | ("graph", "run-dir") => {
            let path = resolve_path(source, "reaper.csv")?;
            let (cols, rows) = read_csv(&path)?;
            let z = column(&cols, &rows, "z", &path)?;
            let f = column(&cols, &rows, "f", &path)?;
            patch_from_profile(&z, &f, grid)
        }
        ("graph", "shape") => {
            let g = grid;
            let patch = match source.shape.as_deref() {
                Some("constant") => {
                    let v = source.value;
                    GraphPatch::from_fn(g.y0, g.z0, g.dy, g.dz, g.ny, g.nz, |_, _| v)
                }
                Some("gaussian") => {
                    let (a, w) = (source.amplitude, source.width);
                    let yc = g.y0 + g.dy * (g.ny - 1) as f64 / 2.0;
                    let zc = g.z0 + g.dz * (g.nz - 1) as f64 / 2.0;
                    GraphPatch::from_fn(g.y0, g.z0, g.dy, g.dz, g.ny, g.nz, |y, z| {
                        a * (-((y - yc).powi(2) + (z - zc).powi(2)) / (w * w)).exp()
                    })
                }
                other => return Err(CliError::config(format!("unknown graph shape {other:?}"))),
            };
            Ok(Initial::Graph(patch))
        }
        (k, s) => Err(CliError::config(format!("unsupported source kind `{s}` for `{k}`"))),
    }
}

fn resolve_path(source: &SourceBlock, default_name: &str) -> Result<PathBuf, CliError> {
    let raw = source
        .path
        .as_ref()
        .ok_or_else(|| CliError::config("source needs a `path`".to_string()))?;
    let mut path = PathBuf::from(raw);
    if source.kind == "run-dir" {
        path = path.join(default_name);
    }
    if !path.exists() {
        return Err(CliError::config(format!("input file `{}` not found", path.display())));
    }
    Ok(path)
}

fn patch_from_profile(z: &[f64], f: &[f64], grid: GridBlock) -> Result<Initial, CliError> {
    if z.len() < 3 {
        return Err(CliError::config("profile too short for a patch".to_string()));
    }
    let dz = z[1] - z[0];
    for k in 1..z.len() {
        if ((z[k] - z[k - 1]) - dz).abs() > 1e-9 * dz.abs().max(1.0) {
            return Err(CliError::config(
                "profile z-grid is not uniform; cannot embed as a patch".to_string(),
            ));
        }
    }
    let ny = grid.ny.max(3);
    let mut values = Vec::with_capacity(ny * z.len());
    for &fv in f {
        for _ in 0..ny {
            values.push(fv);
        }
    }
    Ok(Initial::Graph(GraphPatch {
        y0: grid.y0,
        z0: z[0],
        dy: grid.dy,
        dz,
        ny,
        nz: z.len(),
        f: values,
    }))
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<i32, CliError> {
    let block = cfg
        .file
        .evolve
        .as_ref()
        .ok_or_else(|| CliError::config("config has no [evolve] block".to_string()))?;
    if !(block.time > 0.0 && block.time.is_finite()) {
        return Err(CliError::config("evolve time must be positive".to_string()));
    }
    let params = cfg.params;
    let initial = load_source(&block.kind, &block.source, params)?;

    ensure_dir(&cfg.out_dir)?;
    let dir = Path::new(&cfg.out_dir).to_path_buf();

    let mut snapshots: Vec<serde_json::Value> = Vec::new();
    let mut snap_err: Option<CliError> = None;

    let result: Result<(), Error> = match initial {
        Initial::Curve(curve) => {
            let boundary = match block.boundary.as_str() {
                "frozen" => CurveBoundary::Frozen,
                "free" => CurveBoundary::Free,
                "killing" => CurveBoundary::KillingMotion(KillingSpec::translational(
                    0.0, block.beta, block.mu,
                )),
                other => {
                    return Err(CliError::config(format!("unknown curve boundary `{other}`")))
                }
            };
            let mut state = CurveFlowState::new(curve, boundary);
            let mut index = 0usize;
            run_curve_flow(
                &mut state,
                block.time,
                block.dt,
                block.repar_every,
                block.snapshot_every,
                |st| {
                    if snap_err.is_none() {
                        match write_curve_snapshot(&dir, index, st, cfg) {
                            Ok(v) => snapshots.push(v),
                            Err(e) => snap_err = Some(e),
                        }
                        index += 1;
                    }
                },
            )
        }
        Initial::Graph(patch) => {
            let boundary = match block.boundary.as_str() {
                "frozen" | "dirichlet" => GraphBoundary::Dirichlet,
                "periodic-y" => GraphBoundary::PeriodicInY,
                "translating" => GraphBoundary::Translating { speed: block.boundary_speed },
                other => {
                    return Err(CliError::config(format!("unknown graph boundary `{other}`")))
                }
            };
            let mut state = GraphFlowState::new(patch, boundary);
            let mut index = 0usize;
            run_graph_flow(
                &mut state,
                params,
                block.time,
                block.dt,
                block.snapshot_every,
                |st| {
                    if snap_err.is_none() {
                        match write_graph_snapshot(&dir, index, st, cfg) {
                            Ok(v) => snapshots.push(v),
                            Err(e) => snap_err = Some(e),
                        }
                        index += 1;
                    }
                },
            )
        }
    };

    if let Some(e) = snap_err {
        return Err(e);
    }
    let status = match result {
        Ok(()) => 0,
        Err(e) => return Err(numerical(e)),
    };

    if cfg.wants("json") {
        let manifest = dir.join("manifest.json");
        let meta = json!({
            "schema": "solvflow-schema v1",
            "command": "evolve",
            "kind": block.kind,
            "params": params_json(params),
            "time": block.time,
            "boundary": block.boundary,
            "snapshots": snapshots,
        });
        write_json(&manifest, &meta)?;
    }
    Ok(status)
}

fn write_curve_snapshot(
    dir: &Path,
    index: usize,
    state: &CurveFlowState,
    cfg: &RunConfig,
) -> Result<serde_json::Value, CliError> {
    let mut entry = json!({ "index": index, "time": state.time });
    if cfg.wants("csv") {
        let name = format!("snap_{index:06}.csv");
        let c = &state.curve;
        let rows = (0..c.len()).map(|k| vec![c.s[k], c.y[k], c.z[k], c.theta[k]]);
        write_csv(&dir.join(&name), &["s", "y", "z", "theta"], rows)?;
        entry["csv"] = json!(name);
    }
    if cfg.wants("svg") {
        let name = format!("snap_{index:06}.svg");
        let pts: Vec<(f64, f64)> =
            state.curve.y.iter().zip(&state.curve.z).map(|(&y, &z)| (y, z)).collect();
        write_svg_polyline(&dir.join(&name), &pts)?;
        entry["svg"] = json!(name);
    }
    Ok(entry)
}

fn write_graph_snapshot(
    dir: &Path,
    index: usize,
    state: &GraphFlowState,
    cfg: &RunConfig,
) -> Result<serde_json::Value, CliError> {
    let mut entry = json!({ "index": index, "time": state.time });
    let p = &state.patch;
    if cfg.wants("csv") {
        let name = format!("snap_{index:06}.csv");
        let rows = (0..p.nz).flat_map(|iz| {
            (0..p.ny).map(move |iy| vec![p.y_at(iy), p.z_at(iz), p.at(iy, iz)])
        });
        write_csv(&dir.join(&name), &["y", "z", "f"], rows)?;
        entry["csv"] = json!(name);
    }
    if cfg.wants("svg") {
        // mid-column section f(z) as a polyline
        let name = format!("snap_{index:06}.svg");
        let iy = p.ny / 2;
        let pts: Vec<(f64, f64)> = (0..p.nz).map(|iz| (p.z_at(iz), p.at(iy, iz))).collect();
        write_svg_polyline(&dir.join(&name), &pts)?;
        entry["svg"] = json!(name);
    }
    Ok(entry)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(cfg: &RunConfig) -> Result<i32, CliError> {
    let mut vcfg = VerifyConfig::new(cfg.params);
    vcfg.seed = cfg.seed;
    if let Some(block) = &cfg.file.verify {
        if let Some(s) = block.samples {
            vcfg.samples = s;
        }
        for suite in &block.suites {
            if !SUITES.contains(&suite.as_str()) {
                return Err(CliError::config(format!("unknown verify suite `{suite}`")));
            }
        }
        vcfg.suites = block.suites.clone();
    }

    let results = run_verify(&vcfg);

    ensure_dir(&cfg.out_dir)?;
    let dir = Path::new(&cfg.out_dir);
    let all_pass = results.iter().all(|r| r.pass);

    for r in &results {
        println!("{}", render_check(r));
    }

    if cfg.wants("json") {
        let checks: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                json!({
                    "check": r.name,
                    "tolerance": r.tolerance,
                    "observed": r.observed,
                    "pass": r.pass,
                    "skipped": r.skipped,
                    "reason": r.reason,
                })
            })
            .collect();
        let report = json!({
            "schema": "solvflow-schema v1",
            "command": "verify",
            "params": params_json(cfg.params),
            "seed": vcfg.seed,
            "samples": vcfg.samples,
            "all_pass": all_pass,
            "checks": checks,
        });
        write_json(&dir.join("report.json"), &report)?;
    }
    if cfg.wants("csv") {
        let path = dir.join("report.csv");
        let mut buf = String::from(crate::output::SCHEMA_LINE);
        buf.push('\n');
        buf.push_str("check,tolerance,observed,pass,skipped\n");
        for r in &results {
            buf.push_str(&format!(
                "{},{:.16e},{:.16e},{},{}\n",
                r.name, r.tolerance, r.observed, r.pass as u8, r.skipped as u8
            ));
        }
        std::fs::write(&path, buf)
            .map_err(|e| CliError::config(format!("cannot write `{}`: {e}", path.display())))?;
    }

    Ok(if all_pass { 0 } else { 1 })
}

fn render_check(r: &CheckResult) -> String {
    if r.skipped {
        format!("SKIP {:<40} ({})", r.name, r.reason)
    } else {
        format!(
            "{} {:<40} observed {:.3e} vs {:.3e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.observed,
            r.tolerance
        )
    }
}
