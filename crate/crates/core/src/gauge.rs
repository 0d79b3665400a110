//! The potential-based phase `(1/hbar c) [d . A(R_f) - d . A(R_i)]` in two
//! explicit gauges, to show that it depends on the gauge while the
//! field-momentum phase does not.
//!
//! Step gauge: `A = (0, 0, B0 g(y) theta(z))` with `g = 0` below the slab,
//! `y + y0` inside it and `y0` above it, so `curl A = B0 x` inside the slab and
//! zero elsewhere. The quadratic-shifted gauge adds the pure gradient
//! `grad(2 lambda z^3 / 3) = (0, 0, 2 lambda z^2)`, `lambda` in G/cm.

use crate::constants::CGS;
use crate::error::{Error, Result};
use crate::fieldmom::{MomentumOptions, PointCharge, SheetKind, SlabFieldConfig};
use crate::geometry::Vec3;
use crate::phase::{geometric_phase_endpoint, DipoleMoment, PhaseMethod, PhaseResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeChoice {
    Step,
    QuadraticShifted { lambda: f64 },
}

impl GaugeChoice {
    pub fn name(&self) -> &'static str {
        match self {
            GaugeChoice::Step => "step",
            GaugeChoice::QuadraticShifted { .. } => "quadratic-shifted",
        }
    }
}

fn step_profile(y: f64, cfg: &SlabFieldConfig) -> f64 {
    if cfg.is_thin() {
        if y >= 0.0 {
            cfg.flux_density()
        } else {
            0.0
        }
    } else {
        let y0 = cfg.y0();
        cfg.strength() * (y + y0).clamp(0.0, y0)
    }
}

/// Vector potential in G cm. `theta(0) = 1`, matching the closed face of the
/// slab at `z = 0`.
pub fn vector_potential(r: Vec3, cfg: &SlabFieldConfig, gauge: GaugeChoice) -> Result<Vec3> {
    r.checked("potential point")?;
    if cfg.kind() != SheetKind::Magnetic {
        return Err(Error::WrongFieldKind {
            expected: "magnetic",
        });
    }
    let step = if r.z >= 0.0 {
        step_profile(r.y, cfg)
    } else {
        0.0
    };
    let shift = match gauge {
        GaugeChoice::Step => 0.0,
        GaugeChoice::QuadraticShifted { lambda } => {
            if !lambda.is_finite() {
                return Err(Error::NonFinite("gauge parameter"));
            }
            2.0 * lambda * r.z * r.z
        }
    };
    Ok(Vec3::new(0.0, 0.0, step + shift))
}

/// Central-difference curl of the potential with step `h`.
pub fn curl_potential(r: Vec3, cfg: &SlabFieldConfig, gauge: GaugeChoice, h: f64) -> Result<Vec3> {
    let mut jac = [[0.0; 3]; 3];
    for (j, row) in jac.iter_mut().enumerate() {
        let e = Vec3::axis(j) * h;
        let diff = (vector_potential(r + e, cfg, gauge)? - vector_potential(r - e, cfg, gauge)?)
            / (2.0 * h);
        *row = diff.to_array();
    }
    // jac[j][i] = d A_i / d x_j
    Ok(Vec3::new(
        jac[1][2] - jac[2][1],
        jac[2][0] - jac[0][2],
        jac[0][1] - jac[1][0],
    ))
}

fn check_endpoint(r: Vec3, cfg: &SlabFieldConfig, margin: f64) -> Result<()> {
    r.checked("endpoint")?;
    let on_face = r.z.abs() < margin && r.y > -cfg.y0() - margin;
    if cfg.contains(r) || cfg.distance_to(r) < margin || on_face {
        return Err(Error::OverlapViolation {
            point: r.to_array(),
            margin,
        });
    }
    Ok(())
}

/// `(1/hbar c) [d . A(R_f) - d . A(R_i)]`. Endpoints must sit off the slab
/// and at least `margin` away from the plane `z = 0`, where the step gauge
/// jumps.
pub fn gauge_phase(
    d: &DipoleMoment,
    cfg: &SlabFieldConfig,
    gauge: GaugeChoice,
    r_i: Vec3,
    r_f: Vec3,
    margin: f64,
) -> Result<PhaseResult> {
    check_endpoint(r_i, cfg, margin)?;
    check_endpoint(r_f, cfg, margin)?;
    if r_i == r_f {
        return Ok(PhaseResult {
            phi: 0.0,
            method: PhaseMethod::Endpoint,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let dv = d.vector();
    let diff =
        dv.dot(vector_potential(r_f, cfg, gauge)?) - dv.dot(vector_potential(r_i, cfg, gauge)?);
    Ok(PhaseResult {
        phi: diff / CGS.hbar_c(),
        method: PhaseMethod::Endpoint,
        error_estimate: 0.0,
        evaluations: 0,
    })
}

/// `(d_z / hbar c) 2 lambda (z_f^2 - z_i^2)`: the quadratic-shifted minus the
/// step-gauge phase.
pub fn predicted_gauge_difference(d: &DipoleMoment, lambda: f64, z_i: f64, z_f: f64) -> f64 {
    d.z() / CGS.hbar_c() * 2.0 * lambda * (z_f * z_f - z_i * z_i)
}

/// Both gauges side by side with the field-momentum phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeComparison {
    pub step: PhaseResult,
    pub shifted: PhaseResult,
    pub lambda: f64,
    pub difference: f64,
    pub predicted_difference: f64,
    /// Phase in a gauge where `d . A` is the same at both endpoints; adding
    /// `-grad chi` with `chi = n_B z` above the sheet does it, and the
    /// potential-based phase is then zero.
    pub zero_gauge: PhaseResult,
    pub lcfi: PhaseResult,
}

pub fn gauge_compare(
    charge: &PointCharge,
    d: &DipoleMoment,
    cfg: &SlabFieldConfig,
    r_i: Vec3,
    r_f: Vec3,
    lambda: f64,
    opts: &MomentumOptions,
) -> Result<GaugeComparison> {
    let margin = opts.margin();
    let step = gauge_phase(d, cfg, GaugeChoice::Step, r_i, r_f, margin)?;
    let shifted = gauge_phase(
        d,
        cfg,
        GaugeChoice::QuadraticShifted { lambda },
        r_i,
        r_f,
        margin,
    )?;
    let lcfi = geometric_phase_endpoint(charge, d, cfg, r_i, r_f, opts)?;
    // subtract the step gauge's own endpoint difference
    let pure_gauge = d
        .vector()
        .dot(vector_potential(r_f, cfg, GaugeChoice::Step)?)
        - d.vector()
            .dot(vector_potential(r_i, cfg, GaugeChoice::Step)?);
    Ok(GaugeComparison {
        step,
        shifted,
        lambda,
        difference: shifted.phi - step.phi,
        predicted_difference: predicted_gauge_difference(d, lambda, r_i.z, r_f.z),
        zero_gauge: PhaseResult::closed_form(step.phi - pure_gauge / CGS.hbar_c()),
        lcfi,
    })
}
