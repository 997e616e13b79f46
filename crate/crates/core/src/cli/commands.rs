use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::config::{ProblemKind, Settings};
use super::experiments::{
    bump_objective, cell_seed, largest_stable_eta, run_with_params, sweep_rates,
    OctopusExperiment, COMPARE_MAX_ITER, COMPARE_RADIUS, SWEEP_MAX_ITER,
};
use super::output::{compare_csv, compare_svg, fmt_f64, sweep_csv, sweep_svg, trace_csv, trace_svg};
use super::CliError;
use crate::analysis::{
    classify_point_with_margin, lambda_bound_diagnostic, proof_units, LambdaBoundOptions,
};
use crate::benchmarks::{
    bump_minimizers, composite_saddle_value, composite_saddles, gluing_balance, GluingForm,
    OctopusParams,
};
use crate::objective::{CompositeObjective, Point};
use crate::optimizers::{make_ppd_params, Method, PpdParams, RunReport, StorePoints};

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

fn emit(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Runtime(format!("stdout: {e}")))
}

/// Objective, start, algorithm parameters and stepsize of a single run.
struct Setup {
    obj: CompositeObjective,
    x0: Point,
    params: PpdParams,
    eta: f64,
    rho: f64,
    label: String,
}

fn check_start(obj: &CompositeObjective, x0: &Point) -> Result<(), CliError> {
    if x0.dim() != obj.dim() {
        return Err(CliError::Usage(format!(
            "--x0 has {} coordinates, problem has {}",
            x0.dim(),
            obj.dim()
        )));
    }
    obj.eval_phi(x0)
        .map(|_| ())
        .map_err(|e| CliError::Usage(format!("--x0: {e}")))
}

fn setup(s: &Settings, dim: usize) -> Result<Setup, CliError> {
    match s.problem {
        ProblemKind::Octopus => {
            let mut exp = OctopusExperiment::canonical(dim, s.lambda)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(x0) = &s.x0 {
                check_start(&exp.obj, x0)?;
                exp = exp.with_start(x0.clone());
            }
            let radius = s.radius.unwrap_or(COMPARE_RADIUS);
            let params = exp.ppd_params(s.eps, s.c, s.delta, Some(radius))?;
            Ok(Setup {
                eta: s.eta.unwrap_or(params.eta),
                rho: exp.rho(),
                obj: exp.obj,
                x0: exp.x0,
                params,
                label: format!("octopus d={dim} lambda={}", s.lambda),
            })
        }
        ProblemKind::Bump => {
            let obj = bump_objective(s.method);
            let x0 = match &s.x0 {
                Some(x) => {
                    check_start(&obj, x)?;
                    x.clone()
                }
                None => Point::from_vec_unchecked(vec![0.3, 0.01]),
            };
            let smooth = obj.smooth();
            let (ell, rho) = (smooth.grad_lipschitz(), smooth.hessian_lipschitz());
            let floor = obj.eval_phi(&bump_minimizers()[0])?;
            let delta_phi = (obj.eval_phi(&x0)? - floor).max(1e-12);
            let mut params = make_ppd_params(ell, rho, s.eps, s.c, s.delta, delta_phi, 2)?;
            if let Some(r) = s.radius {
                params = params.with_radius(r)?;
            }
            Ok(Setup {
                eta: s.eta.unwrap_or(0.1),
                rho,
                obj,
                x0,
                params,
                label: "gaussian bump".to_string(),
            })
        }
    }
}

fn verdict_json(
    obj: &CompositeObjective,
    x: &Point,
    eps: f64,
    rho: f64,
    eta: f64,
    margin: Option<f64>,
) -> serde_json::Value {
    match classify_point_with_margin(obj, x, eps, rho, eta, margin) {
        Ok(v) => json!({
            "verdict": v.verdict.as_str(),
            "gm_norm": v.gm_norm,
            "min_eig": v.min_eig,
            "eps": v.eps,
            "rho": v.rho,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn params_json(p: &PpdParams) -> serde_json::Value {
    json!({
        "chi": p.chi, "eta": p.eta, "r": p.r, "g_thres": p.g_thres,
        "phi_thres": p.phi_thres, "t_thres": p.t_thres, "ell": p.ell, "rho": p.rho,
        "eps": p.eps, "c": p.c, "delta": p.delta, "delta_phi": p.delta_phi,
        "warnings": p.warnings,
    })
}

/// One optimizer run. Writes `trace.csv`, `trace.svg` and `summary.json` to
/// the output directory and prints the summary line.
pub fn cmd_run(s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    if s.method == Method::Ppd && s.eta.is_some() {
        return Err(CliError::Usage(
            "PPD derives its stepsize as c / ell; set --c instead of --eta".to_string(),
        ));
    }
    let st = setup(s, s.dim)?;
    let mut params = st.params.clone();
    params.eta = st.eta;
    let max_iter = s.max_iter.unwrap_or(match s.method {
        Method::Ppd => st.params.default_max_iter(),
        _ => COMPARE_MAX_ITER,
    });
    let store = if s.trace_points {
        StorePoints::Always
    } else {
        StorePoints::Auto
    };
    let started = Instant::now();
    let report = run_with_params(&st.obj, &st.x0, s.method, &params, max_iter, s.seed, store)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let wall = started.elapsed().as_secs_f64();

    ensure_dir(&s.out_dir)?;
    let csv = trace_csv(&report, s.trace_points).map_err(CliError::Runtime)?;
    write_file(&s.out_dir, "trace.csv", &csv)?;
    let title = format!("{} on {}", s.method, st.label);
    write_file(
        &s.out_dir,
        "trace.svg",
        &trace_svg(&csv, &title).map_err(CliError::Runtime)?,
    )?;

    let verdict = if report.final_point.is_finite() {
        verdict_json(&st.obj, &report.final_point, s.eps, st.rho, st.eta, s.margin)
    } else {
        json!({ "error": "non-finite final point" })
    };
    let summary = json!({
        "problem": st.label,
        "method": s.method.as_str(),
        "seed": s.seed,
        "termination": report.termination.as_str(),
        "iterations": report.iterations,
        "final_phi": report.final_phi,
        "final_point": report.final_point.as_slice(),
        "perturbations": report.perturbations.len(),
        "eta": st.eta,
        "max_iter": max_iter,
        "classification": verdict,
        "ppd": params_json(&st.params),
        "abort": report.abort.as_ref().map(|e| e.to_string()),
        "wall_time_s": wall,
    });
    let line = summary.to_string();
    write_file(&s.out_dir, "summary.json", &format!("{line}\n"))?;
    emit(out, &line)?;
    match &report.abort {
        Some(e) => Err(CliError::Runtime(format!("run aborted: {e}"))),
        None => Ok(()),
    }
}

/// Gaussian-bump success rate against stepsize for GD and Prox. Writes
/// `sweep.csv` and `sweep.svg`.
pub fn cmd_sweep(s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    let trials = s.trials.unwrap_or(200);
    let max_iter = s.max_iter.unwrap_or(SWEEP_MAX_ITER);
    let mut rows = Vec::new();
    let mut stable = Vec::new();
    for (method, label) in [(Method::Gd, "GD"), (Method::Pd, "Prox")] {
        let rates = sweep_rates(method, &s.eta_grid, trials, s.seed, max_iter)?;
        for (eta, rate) in s.eta_grid.iter().zip(&rates) {
            rows.push((*eta, label.to_string(), *rate, trials));
        }
        stable.push((label, largest_stable_eta(&s.eta_grid, &rates, 0.9)));
    }
    ensure_dir(&s.out_dir)?;
    let csv = sweep_csv(&rows).map_err(CliError::Runtime)?;
    write_file(&s.out_dir, "sweep.csv", &csv)?;
    let svg = sweep_svg(&csv, "success rate on the Gaussian bump").map_err(CliError::Runtime)?;
    write_file(&s.out_dir, "sweep.svg", &svg)?;
    for (label, eta) in stable {
        emit(
            out,
            &json!({ "method": label, "largest_eta_with_rate_0.9": eta }).to_string(),
        )?;
    }
    Ok(())
}

/// PPD, PD, GD and PGD on the octopus for every `--dims` entry. Writes
/// `compare_d{d}.csv` and `.svg` (first seed) and `compare_summary.csv`.
pub fn cmd_compare(s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    let trials = s.trials.unwrap_or(1);
    let max_iter = s.max_iter.unwrap_or(COMPARE_MAX_ITER);
    let radius = s.radius.unwrap_or(COMPARE_RADIUS);
    let mut exps = Vec::new();
    for &d in &s.dims {
        let exp = OctopusExperiment::canonical(d, s.lambda)?;
        let params = exp.ppd_params(s.eps, s.c, s.delta, Some(radius))?;
        exps.push((d, exp, params));
    }
    let cells: Vec<(usize, usize, Method)> = (0..exps.len())
        .flat_map(|i| (0..trials).flat_map(move |k| Method::ALL.map(|m| (i, k, m))))
        .collect();
    let reports: Vec<RunReport> = cells
        .par_iter()
        .map(|&(i, k, m)| {
            let (d, exp, params) = &exps[i];
            let seed = cell_seed(s.seed, &[*d as u64, k as u64]);
            run_with_params(&exp.obj, &exp.x0, m, params, max_iter, seed, StorePoints::Never)
        })
        .collect::<Result<_, _>>()?;

    ensure_dir(&s.out_dir)?;
    let mut summary = csv::Writer::from_writer(Vec::new());
    let header = [
        "d", "trial", "method", "final_phi", "best_phi", "min_value", "relative_gap",
        "iterations", "termination", "perturbations",
    ];
    summary
        .write_record(header)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    for (i, (d, exp, params)) in exps.iter().enumerate() {
        log::info!(
            "d={d}: perturbation radius {radius} (derived {:.3e}), t_thres {}",
            params.r,
            params.t_thres
        );
        let first: Vec<RunReport> = cells
            .iter()
            .zip(&reports)
            .filter(|((ci, k, _), _)| *ci == i && *k == 0)
            .map(|(_, r)| r.clone())
            .collect();
        let csv = compare_csv(&first).map_err(CliError::Runtime)?;
        write_file(&s.out_dir, &format!("compare_d{d}.csv"), &csv)?;
        let title = format!("octopus d={d}, lambda={}", s.lambda);
        write_file(
            &s.out_dir,
            &format!("compare_d{d}.svg"),
            &compare_svg(&csv, &title).map_err(CliError::Runtime)?,
        )?;
        for ((_, k, m), r) in cells.iter().zip(&reports).filter(|((ci, ..), _)| *ci == i) {
            let best = r.best_phi_within(max_iter);
            summary
                .write_record([
                    d.to_string(),
                    k.to_string(),
                    m.as_str().to_string(),
                    fmt_f64(r.final_phi),
                    fmt_f64(best),
                    fmt_f64(exp.min_value),
                    fmt_f64(exp.relative_gap(r.final_phi)),
                    r.iterations.to_string(),
                    r.termination.as_str().to_string(),
                    r.perturbations.len().to_string(),
                ])
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            emit(
                out,
                &json!({
                    "d": d, "trial": k, "method": m.as_str(), "final_phi": r.final_phi,
                    "min_value": exp.min_value, "relative_gap": exp.relative_gap(r.final_phi),
                    "termination": r.termination.as_str(),
                })
                .to_string(),
            )?;
        }
    }
    let bytes = summary
        .into_inner()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_file(
        &s.out_dir,
        "compare_summary.csv",
        &String::from_utf8_lossy(&bytes),
    )?;
    Ok(())
}

/// Print the stationarity verdict for `--point`.
pub fn cmd_classify(s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    let x = s
        .point
        .clone()
        .ok_or_else(|| CliError::Usage("classify needs --point".to_string()))?;
    let st = setup(s, x.dim().max(2))?;
    if x.dim() != st.obj.dim() {
        return Err(CliError::Usage(format!(
            "--point has {} coordinates, problem has {}",
            x.dim(),
            st.obj.dim()
        )));
    }
    let v = classify_point_with_margin(&st.obj, &x, s.eps, st.rho, st.eta, s.margin)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(
        out,
        &json!({
            "point": x.as_slice(),
            "verdict": v.verdict.as_str(),
            "gm_norm": v.gm_norm,
            "min_eig": v.min_eig,
            "eps": v.eps,
            "rho": v.rho,
            "eta": st.eta,
        })
        .to_string(),
    )
}

/// Octopus constants, catalog, proof units and the l1-weight diagnostic.
pub fn cmd_bench_info(s: &Settings, out: &mut dyn Write) -> Result<(), CliError> {
    if s.problem != ProblemKind::Octopus {
        let [a, b] = bump_minimizers();
        emit(out, "gaussian bump: 0.5 (x^2 - y^2) exp(-(x^2 + y^2) / 5) + H_100 / 100")?;
        emit(out, &format!("local minimizers: {a:?}, {b:?}"))?;
        return Ok(());
    }
    let exp = OctopusExperiment::canonical(s.dim, s.lambda)?;
    let p = *exp.octopus.params();
    let c = exp.octopus.constants();
    let printed = OctopusParams {
        form: GluingForm::Printed,
        ..p
    };
    let mut lines = vec![
        format!(
            "octopus d={} L={} gamma={} tau={} (smooth gluing)",
            p.dim, p.sharpness, p.gamma, p.tau
        ),
        format!("nu = {}", c.nu),
        format!("nu with the printed quartic coefficient = {}", gluing_balance(&printed)),
        format!("declared ell = {}", c.ell),
        format!("declared rho = {}", c.rho),
        format!("minimum of f: -d nu = {}", -(p.dim as f64) * c.nu),
        format!(
            "minimum of f + {} |x|_1: {} at {:?}",
            s.lambda, exp.min_value, exp.min_point
        ),
        "saddles (first-quadrant representatives, composite-shifted):".to_string(),
    ];
    for (i, x) in composite_saddles(&p, s.lambda).iter().enumerate() {
        lines.push(format!(
            "  {i}: phi = {:.6}  {:?}",
            composite_saddle_value(&p, s.lambda, i),
            x
        ));
    }
    let params = exp.ppd_params(s.eps, s.c, s.delta, None)?;
    let eta = s.eta.unwrap_or(params.eta);
    lines.push(format!(
        "algorithm parameters (c={}, eps={}, delta={}): chi={:.4} eta={:.4e} r={:.4e} g_thres={:.4e} phi_thres={:.4e} t_thres={}",
        s.c, s.eps, s.delta, params.chi, params.eta, params.r, params.g_thres, params.phi_thres, params.t_thres
    ));
    match proof_units(eta, c.ell, c.rho, 2.0 * p.gamma, s.delta, p.dim) {
        Ok(u) => {
            lines.push(format!(
                "proof units (eta={eta:.4e}, gamma={}): F={:.4e} G={:.4e} S={:.4e} T={:.4e} kappa={:.4}",
                2.0 * p.gamma,
                u.script_f,
                u.script_g,
                u.script_s,
                u.script_t,
                u.kappa
            ));
            let lb = lambda_bound_diagnostic(&u, s.lambda, LambdaBoundOptions::default());
            lines.push(format!(
                "lambda bounds (heuristic, hat_c={:.4}, mu={:.4e}, theta={}): bound1={:.4e} bound2={:.4e} degenerate={} lambda_ok={}",
                lb.hat_c, lb.mu, lb.theta, lb.bound1, lb.bound2, lb.degenerate, lb.lambda_ok
            ));
        }
        Err(e) => lines.push(format!("proof units unavailable: {e}")),
    }
    for l in lines {
        emit(out, &l)?;
    }
    Ok(())
}
