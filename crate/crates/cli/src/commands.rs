//! One function per subcommand. Each fills a [`Report`].

use dipole_phase::constants::{CGS, E_CHARGE, MU_N};
use dipole_phase::fieldmom::{
    field_momentum, field_momentum_thin_sheet, MomentumOptions, PointCharge, SlabFieldConfig,
};
use dipole_phase::gauge::gauge_compare;
use dipole_phase::interferometer::{evolve_dual, fringe, sigma_x_expectation, DipoleState};
use dipole_phase::phase::{
    geometric_phase_endpoint, geometric_phase_path, hmw_phase, phi_g_dual, volts_to_flux,
    DipoleMoment, PathOptions, SheetScenario,
};
use dipole_phase::quadrature::LineOptions;
use dipole_phase::verify::{run_all, Check, VerifyOptions};
use dipole_phase::{Error, Trajectory, Vec3};

use crate::config::{ConfigError, DipoleChoice, Format, ScenarioConfig};
use crate::output::{CsvRow, Report};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    /// The report holds whatever was computed, with the failure in `errors`.
    Numerical(Box<Report>, String),
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(..) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Sorts a core error into config trouble or numerical trouble, attaching
/// partial results to `report` for the latter.
fn classify(e: Error, mut report: Report) -> CliError {
    let partial = match &e {
        Error::NonConvergence { partial } => Some((partial.value, partial.error_estimate)),
        Error::LineNonConvergence {
            value,
            error_estimate,
            ..
        } => Some((*value, *error_estimate)),
        Error::NonFiniteSample { .. } => None,
        _ => return CliError::Config(ConfigError::new(e.to_string())),
    };
    report.error("non_convergence", e.to_string(), partial);
    CliError::Numerical(Box::new(report), e.to_string())
}

fn momentum_options(cfg: &ScenarioConfig) -> MomentumOptions {
    let mut o = MomentumOptions::new(cfg.a).with_tolerances(cfg.rel_tol, cfg.abs_tol);
    o.quadrature.max_evals = cfg.max_evals;
    o
}

fn sheet(cfg: &ScenarioConfig, n_b: f64) -> Result<SlabFieldConfig, Error> {
    if cfg.thin_sheet {
        SlabFieldConfig::thin_magnetic(n_b)
    } else {
        SlabFieldConfig::magnetic(n_b / cfg.y0, cfg.y0)
    }
}

fn dipole(cfg: &ScenarioConfig) -> Result<DipoleMoment, Error> {
    match cfg.dipole {
        DipoleChoice::Hydrogen { sign } => Ok(DipoleMoment::hydrogen(sign)),
        DipoleChoice::Custom(d) => DipoleMoment::new(d),
    }
}

fn charge() -> PointCharge {
    PointCharge::new(E_CHARGE, Vec3::ZERO).expect("finite charge")
}

fn endpoints(cfg: &ScenarioConfig) -> (Vec3, Vec3) {
    (
        Vec3::new(0.0, cfg.a, cfg.z_i),
        Vec3::new(0.0, cfg.a, cfg.z_f),
    )
}

fn sweep(cfg: &ScenarioConfig, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = (cfg.sweep_min.unwrap_or(lo), cfg.sweep_max.unwrap_or(hi));
    let n = cfg.sweep_points.unwrap_or(n);
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn require_json(cfg: &ScenarioConfig, command: &str) -> Result<(), CliError> {
    if cfg.format == Format::Csv {
        return Err(ConfigError::new(format!(
            "`{command}` has no sweep; csv output needs momentum or interfere"
        ))
        .into());
    }
    Ok(())
}

/// `Pi_q` along `R = (0, a, Z)` for a sweep of `Z`. The CSV `phi_g` column is
/// the phase accumulated from the first sweep point.
pub fn momentum(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    let mut report = Report::new("momentum", cfg.inputs());
    let field = sheet(cfg, cfg.flux_density()).map_err(|e| classify(e, report.clone()))?;
    let d = dipole(cfg).map_err(|e| classify(e, report.clone()))?;
    let opts = momentum_options(cfg);
    let zs = sweep(cfg, cfg.z_i, cfg.z_f, 21);
    let q = charge();
    let mut pis = Vec::with_capacity(zs.len());
    for &z in &zs {
        let pi = field_momentum(&q.at(Vec3::new(0.0, cfg.a, z)), &field, &opts)
            .map_err(|e| classify(e, report.clone()))?;
        report.evaluations += pi.evaluations();
        for (axis, c) in pi.components.iter().enumerate() {
            if !c.converged {
                report.error(
                    "non_convergence",
                    format!("Pi component {axis} at Z = {z} did not converge"),
                    Some((c.value, c.error_estimate)),
                );
            }
        }
        pis.push(pi);
    }
    let comp = |i: usize| -> (Vec<f64>, Vec<f64>) {
        pis.iter()
            .map(|p| (p.components[i].value, p.components[i].error_estimate))
            .unzip()
    };
    report.series("z", &zs, &vec![0.0; zs.len()], "cm", "input");
    for (i, name) in ["pi_x", "pi_y", "pi_z"].iter().enumerate() {
        let (v, e) = comp(i);
        report.series(name, &v, &e, "g cm/s", "quadrature");
    }
    if cfg.thin_sheet {
        let oracle: Vec<f64> = zs
            .iter()
            .map(|&z| field_momentum_thin_sheet(&q, cfg.a, z, cfg.flux_density()))
            .collect();
        report.series(
            "pi_z_thin_sheet",
            &oracle,
            &vec![0.0; zs.len()],
            "g cm/s",
            "closed-form",
        );
    }
    report.scalar("pi_y_cutoff", opts.z_cutoff(), 0.0, "cm", "input");
    let dv = d.vector();
    let first = &pis[0];
    for (z, p) in zs.iter().zip(&pis) {
        let diff = dv.dot(p.pi - first.pi);
        let e = p.error_estimate() + first.error_estimate();
        let err = dv.x.abs() * e.x + dv.y.abs() * e.y + dv.z.abs() * e.z;
        let phi = diff / (CGS.hbar * q.q);
        let pop = fringe(phi);
        report.rows.push(CsvRow {
            sweep_value: *z,
            phi_g: phi,
            p_200: pop.p_200(),
            p_210: pop.p_210(),
            error_estimate: err / (CGS.hbar * q.q.abs()),
        });
    }
    finish_numerical(report)
}

fn finish_numerical(report: Report) -> Result<Report, CliError> {
    if report.errors.is_empty() {
        Ok(report)
    } else {
        let msg = format!("{} quantities did not converge", report.errors.len());
        Err(CliError::Numerical(Box::new(report), msg))
    }
}

pub fn phase(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    require_json(cfg, "phase")?;
    let mut report = Report::new("phase", cfg.inputs());
    let method = cfg.method.as_deref().unwrap_or("both");
    if !matches!(method, "endpoint" | "path" | "both") {
        return Err(ConfigError::new("phase `method` must be endpoint, path or both").into());
    }
    let field = sheet(cfg, cfg.flux_density()).map_err(|e| classify(e, report.clone()))?;
    let d = dipole(cfg).map_err(|e| classify(e, report.clone()))?;
    let (ri, rf) = endpoints(cfg);
    let q = charge();
    let mut phi = None;
    if method != "path" {
        let r = geometric_phase_endpoint(&q, &d, &field, ri, rf, &momentum_options(cfg))
            .map_err(|e| classify(e, report.clone()))?;
        report.evaluations += r.evaluations;
        report.scalar("phi_g", r.phi, r.error_estimate, "rad", r.method.as_str());
        phi = Some(r.phi);
    }
    if method != "endpoint" {
        let mut opts = PathOptions::new(cfg.a);
        opts.momentum.quadrature.max_evals = cfg.max_evals;
        let traj = Trajectory::straight(ri, rf).map_err(|e| classify(e, report.clone()))?;
        let r = geometric_phase_path(&q, &d, &field, &traj, &opts)
            .map_err(|e| classify(e, report.clone()))?;
        report.evaluations += r.evaluations;
        let name = if phi.is_some() { "phi_g_path" } else { "phi_g" };
        report.scalar(name, r.phi, r.error_estimate, "rad", r.method.as_str());
        phi.get_or_insert(r.phi);
    }
    let phi = phi.expect("one method ran");
    let limit = d.z() * cfg.flux_density() / (2.0 * CGS.hbar_c());
    report.scalar("phi_g_sheet_limit", limit, 0.0, "rad", "closed-form");
    report.scalar("relative_phase", 2.0 * phi, 0.0, "rad", "derived");
    let pop = fringe(phi);
    report.scalar("p_200", pop.p_200(), 0.0, "probability", "derived");
    report.scalar("p_210", pop.p_210(), 0.0, "probability", "derived");
    Ok(report)
}

pub fn interfere(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    let mut report = Report::new("interfere", cfg.inputs());
    let method = cfg.method.as_deref().unwrap_or("closed-form");
    if !matches!(method, "closed-form" | "endpoint") {
        return Err(ConfigError::new("interfere `method` must be closed-form or endpoint").into());
    }
    let d = dipole(cfg).map_err(|e| classify(e, report.clone()))?;
    let (ri, rf) = endpoints(cfg);
    let opts = momentum_options(cfg);
    let q = charge();
    let mut phis = Vec::new();
    let mut errs = Vec::new();
    let sweep_values = sweep(cfg, 0.0, 26.0, 101);
    for &n_b in &sweep_values {
        let (phi, err) = if method == "closed-form" || n_b == 0.0 {
            (d.z() * n_b / (2.0 * CGS.hbar_c()), 0.0)
        } else {
            let field = sheet(cfg, n_b).map_err(|e| classify(e, report.clone()))?;
            let r = geometric_phase_endpoint(&q, &d, &field, ri, rf, &opts)
                .map_err(|e| classify(e, report.clone()))?;
            report.evaluations += r.evaluations;
            (r.phi, r.error_estimate)
        };
        let pop = fringe(phi);
        if (pop.p_200() + pop.p_210() - 1.0).abs() > 1e-12 {
            return Err(CliError::Invariant(format!(
                "populations do not sum to 1 at n_B = {n_b}"
            )));
        }
        report.rows.push(CsvRow {
            sweep_value: n_b,
            phi_g: phi,
            p_200: pop.p_200(),
            p_210: pop.p_210(),
            error_estimate: err,
        });
        phis.push(phi);
        errs.push(err);
    }
    let tag = if method == "closed-form" {
        "closed-form"
    } else {
        "endpoint"
    };
    let zeros = vec![0.0; phis.len()];
    report.series("n_b", &sweep_values, &zeros, "G cm", "input");
    report.series("phi_g", &phis, &errs, "rad", tag);
    let p200: Vec<f64> = report.rows.iter().map(|r| r.p_200).collect();
    let p210: Vec<f64> = report.rows.iter().map(|r| r.p_210).collect();
    report.series("p_200", &p200, &errs, "probability", tag);
    report.series("p_210", &p210, &errs, "probability", tag);
    Ok(report)
}

pub fn hmw(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    require_json(cfg, "hmw")?;
    let mut report = Report::new("hmw", cfg.inputs());
    let field = sheet(cfg, cfg.flux_density()).map_err(|e| classify(e, report.clone()))?;
    let d = dipole(cfg).map_err(|e| classify(e, report.clone()))?;
    let y = (
        cfg.loop_y.0.unwrap_or(-cfg.y0 - cfg.a),
        cfg.loop_y.1.unwrap_or(cfg.a),
    );
    let z = (
        cfg.loop_z.0.unwrap_or(cfg.z_i),
        cfg.loop_z.1.unwrap_or(cfg.z_f),
    );
    if !(y.0 < y.1 && z.0 < z.1) {
        return Err(ConfigError::new("loop bounds must satisfy min < max").into());
    }
    let lp = Trajectory::rectangle_yz(0.0, y, z).map_err(|e| classify(e, report.clone()))?;
    let r = hmw_phase(&d, &field, &lp, &LineOptions::default())
        .map_err(|e| classify(e, report.clone()))?;
    report.evaluations += r.evaluations;
    report.scalar(
        "phi_loop",
        r.phi,
        r.error_estimate,
        "rad",
        r.method.as_str(),
    );
    report.scalar(
        "phi_enclosed_sheet",
        d.z() * cfg.flux_density() / CGS.hbar_c(),
        0.0,
        "rad",
        "closed-form",
    );
    Ok(report)
}

pub fn dual(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    require_json(cfg, "dual")?;
    let mut report = Report::new("dual", cfg.inputs());
    report.inputs["n_e_volts"] = cfg.n_e_volts.into();
    report.inputs["mu_z"] = cfg.mu_z.into();
    let n_e = volts_to_flux(cfg.n_e_volts);
    let mu = cfg.mu_z * MU_N;
    let phi = phi_g_dual(n_e, mu);
    report.scalar("phi_g_dual", phi, 0.0, "rad", "closed-form");
    if cfg.n_e_volts != 0.0 {
        report.scalar(
            "phi_g_dual_per_volt",
            phi / cfg.n_e_volts,
            0.0,
            "rad/V",
            "closed-form",
        );
    }
    let mapped = SheetScenario::spin(mu, n_e).maxwell_dual();
    report.scalar(
        "phi_g_dual_mapped",
        mapped.phase(),
        0.0,
        "rad",
        "maxwell-dual",
    );
    let s = evolve_dual(&DipoleState::spin_symmetric(), phi)
        .map_err(|e| classify(e, report.clone()))?;
    report.scalar("sigma_x", sigma_x_expectation(&s), 0.0, "1", "derived");
    Ok(report)
}

pub fn gauge(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    require_json(cfg, "gauge-compare")?;
    let mut report = Report::new("gauge-compare", cfg.inputs());
    let field = sheet(cfg, cfg.flux_density()).map_err(|e| classify(e, report.clone()))?;
    let d = dipole(cfg).map_err(|e| classify(e, report.clone()))?;
    let (ri, rf) = endpoints(cfg);
    let g = gauge_compare(
        &charge(),
        &d,
        &field,
        ri,
        rf,
        cfg.lambda,
        &momentum_options(cfg),
    )
    .map_err(|e| classify(e, report.clone()))?;
    report.evaluations += g.lcfi.evaluations;
    report.scalar("phi_step_gauge", g.step.phi, 0.0, "rad", "potential");
    report.scalar(
        "phi_quadratic_shifted_gauge",
        g.shifted.phi,
        0.0,
        "rad",
        "potential",
    );
    let selected = if cfg.gauge == "step" {
        g.step.phi
    } else {
        g.shifted.phi
    };
    report.scalar("phi_selected_gauge", selected, 0.0, "rad", "potential");
    report.scalar("gauge_difference", g.difference, 0.0, "rad", "potential");
    report.scalar(
        "gauge_difference_predicted",
        g.predicted_difference,
        0.0,
        "rad",
        "closed-form",
    );
    report.scalar("phi_zero_gauge", g.zero_gauge.phi, 0.0, "rad", "potential");
    report.scalar(
        "phi_lcfi",
        g.lcfi.phi,
        g.lcfi.error_estimate,
        "rad",
        g.lcfi.method.as_str(),
    );
    Ok(report)
}

pub fn verify_table(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{} {:<15} {:<55} {:>10.3e} <= {:<10.3e} {:>9.3}s  {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.module,
            c.name,
            c.measured,
            c.tolerance,
            c.elapsed.as_secs_f64(),
            c.detail
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    s.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    s
}

pub fn verify(cfg: &ScenarioConfig) -> (Report, Vec<Check>) {
    let mut opts = VerifyOptions::default();
    opts.quadrature.rel_tol = cfg.rel_tol;
    opts.quadrature.abs_tol = cfg.abs_tol;
    opts.quadrature.max_evals = cfg.max_evals;
    let checks = run_all(&opts);
    let mut report = Report::new("verify", cfg.inputs());
    for c in &checks {
        let name = format!("{}/{}", c.module, c.name);
        report.scalar(&name, c.measured, 0.0, "1", "invariant");
        report.results[&name]["tolerance"] = c.tolerance.into();
        report.results[&name]["passed"] = c.passed.into();
        if !c.passed {
            report.error("invariant", format!("{name}: {}", c.detail), None);
        }
    }
    (report, checks)
}
