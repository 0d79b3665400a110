//! Geometric phases of a dipole moving near a field sheet.
//!
//! The field-interaction phase is
//!
//! ```text
//! phi = 1/(hbar q) * integral of grad(d . Pi_q) . dR
//!     = [d . Pi_q(R_f) - d . Pi_q(R_i)] / (hbar q)
//! ```
//!
//! and is computed both ways. The loop phase `(1/hbar c) * loop of (B x d) . dR`
//! needs the dipole to pass through the field; it serves as the contrast case.
//! All phases are unwrapped radians.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::constants::{CGS, HBAR, MU_N, NEUTRON_MOMENT_IN_MU_N, VOLT_TO_STATVOLT};
use crate::error::{Error, Result};
use crate::fieldmom::{
    check_path_clear, directional_d_dot_pi, field_momentum_component, MomentumOptions, PointCharge,
    SlabFieldConfig,
};
use crate::geometry::{Trajectory, Vec3};
use crate::parallel::NeumaierSum;
use crate::quadrature::{
    integrate_3d, integrate_line, Axis, IntegrationRegion, LineOptions, QuadratureOptions,
};

/// Electric dipole moment, esu cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMoment {
    d: Vec3,
}

impl DipoleMoment {
    pub fn new(d: Vec3) -> Result<Self> {
        Ok(Self {
            d: d.checked("dipole moment")?,
        })
    }

    /// `d_z` along z.
    pub fn along_z(d_z: f64) -> Result<Self> {
        Self::new(Vec3::new(0.0, 0.0, d_z))
    }

    /// The hydrogen n=2 eigenstate `|+>` (`sign > 0`) or `|->`: `d_z = +-3 e a0`.
    pub fn hydrogen(sign: f64) -> Self {
        Self {
            d: Vec3::new(0.0, 0.0, sign.signum() * CGS.hydrogen_n2_dipole()),
        }
    }

    pub fn vector(&self) -> Vec3 {
        self.d
    }

    pub fn z(&self) -> f64 {
        self.d.z
    }
}

impl std::ops::Neg for DipoleMoment {
    type Output = Self;
    fn neg(self) -> Self {
        Self { d: -self.d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMethod {
    Endpoint,
    PathIntegral,
    Loop,
    ClosedForm,
}

impl PhaseMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseMethod::Endpoint => "endpoint",
            PhaseMethod::PathIntegral => "path-integral",
            PhaseMethod::Loop => "loop",
            PhaseMethod::ClosedForm => "closed-form",
        }
    }
}

impl std::fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Radians, not wrapped.
    pub phi: f64,
    pub method: PhaseMethod,
    pub error_estimate: f64,
    /// Integrand evaluations spent (0 for closed forms).
    pub evaluations: u64,
}

impl PhaseResult {
    pub fn closed_form(phi: f64) -> Self {
        Self {
            phi,
            method: PhaseMethod::ClosedForm,
            error_estimate: 0.0,
            evaluations: 0,
        }
    }
}

/// `d . Pi_q(R)` with its error, skipping components where `d` vanishes.
fn d_dot_pi_at(
    charge: &PointCharge,
    d: Vec3,
    cfg: &SlabFieldConfig,
    r: Vec3,
    opts: &MomentumOptions,
) -> Result<(f64, f64, u64)> {
    let at = charge.at(r);
    let (mut value, mut error, mut evals) = (0.0, 0.0, 0);
    for axis in 0..3 {
        let di = d.component(axis);
        if di == 0.0 {
            continue;
        }
        let c = field_momentum_component(&at, cfg, axis, opts)?;
        value += di * c.value;
        error += di.abs() * c.error_estimate;
        evals += c.evaluations;
    }
    Ok((value, error, evals))
}

/// Endpoint form: `[d . Pi_q(R_f) - d . Pi_q(R_i)] / (hbar q)`.
///
/// For `d` along z only `Pi_z` is evaluated, so the result does not depend on
/// the `Pi_y` cutoff.
pub fn geometric_phase_endpoint(
    charge: &PointCharge,
    d: &DipoleMoment,
    cfg: &SlabFieldConfig,
    r_i: Vec3,
    r_f: Vec3,
    opts: &MomentumOptions,
) -> Result<PhaseResult> {
    r_i.checked("initial position")?;
    r_f.checked("final position")?;
    let (vi, ei, ni) = d_dot_pi_at(charge, d.d, cfg, r_i, opts)?;
    let (vf, ef, nf) = if r_f == r_i {
        (vi, ei, 0)
    } else {
        d_dot_pi_at(charge, d.d, cfg, r_f, opts)?
    };
    let norm = HBAR * charge.q;
    let error_estimate = if r_f == r_i {
        0.0
    } else {
        (ei + ef) / norm.abs()
    };
    Ok(PhaseResult {
        phi: (vf - vi) / norm,
        method: PhaseMethod::Endpoint,
        error_estimate,
        evaluations: ni + nf,
    })
}

/// Settings for the path form.
///
/// The gradient is a finite difference of quadrature values, so its noise
/// scales like `rel_tol(momentum) / step`; the momentum quadrature is run
/// tighter than for single evaluations to keep that noise below the path
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOptions {
    pub momentum: MomentumOptions,
    /// Adaptive Gauss-Kronrod settings along each segment, in radians.
    pub path: QuadratureOptions,
}

impl PathOptions {
    pub fn new(a: f64) -> Self {
        Self {
            momentum: MomentumOptions::new(a).with_tolerances(1e-8, 1e-15),
            path: QuadratureOptions {
                max_evals: 2_000,
                ..QuadratureOptions::with_tolerances(1e-6, 1e-7)
            },
        }
    }
}

/// Path form: `(1/hbar) * integral of (1/q) grad(d . Pi_q) . dR` along
/// `traj`, with the gradient taken by finite differences at each sample.
///
/// Each segment is integrated over its arc-length parameter by adaptive
/// Gauss-Kronrod; `path.max_evals` caps the gradient samples per segment.
pub fn geometric_phase_path(
    charge: &PointCharge,
    d: &DipoleMoment,
    cfg: &SlabFieldConfig,
    traj: &Trajectory,
    opts: &PathOptions,
) -> Result<PhaseResult> {
    // the derivative stencil must clear the sheet everywhere along the path
    check_path_clear(cfg, traj, opts.momentum.step() + opts.momentum.margin())?;
    let evals = AtomicU64::new(0);
    let failure = Mutex::new(None);
    let (mut phi, mut error) = (NeumaierSum::default(), 0.0);
    for (a, b) in traj.segments() {
        let len = (b - a).norm();
        let u = (b - a) / len;
        let integrand = |p: Vec3| {
            let at = charge.at(a + (b - a) * p.x);
            match directional_d_dot_pi(&at, d.d, cfg, u, &opts.momentum) {
                Ok(g) => {
                    evals.fetch_add(g.evaluations, Ordering::Relaxed);
                    g.value * len / HBAR
                }
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    0.0
                }
            }
        };
        let region =
            IntegrationRegion::new(Axis::finite(0.0, 1.0), Axis::point(0.0), Axis::point(0.0))?;
        let r = integrate_3d(integrand, &region, &opts.path)?;
        if let Some(e) = failure.lock().expect("poisoned").take() {
            return Err(e);
        }
        let r = r.require_converged()?;
        phi.add(r.value);
        error += r.error_estimate;
    }
    Ok(PhaseResult {
        phi: phi.value(),
        method: PhaseMethod::PathIntegral,
        error_estimate: error,
        evaluations: evals.into_inner(),
    })
}

/// Inserts a vertex wherever a segment crosses one of the slab's bounding
/// planes, so that the sheet field is constant on every piece.
fn split_at_slab_planes(traj: &Trajectory, cfg: &SlabFieldConfig) -> Result<Trajectory> {
    let planes = [(1usize, 0.0), (1, -cfg.y0()), (2, 0.0)];
    let mut out = Vec::new();
    for (a, b) in traj.segments() {
        out.push(a);
        let mut cuts: Vec<f64> = planes
            .iter()
            .filter_map(|&(axis, level)| {
                let (pa, pb) = (a.component(axis), b.component(axis));
                if (pa - level) * (pb - level) < 0.0 {
                    Some((level - pa) / (pb - pa))
                } else {
                    None
                }
            })
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for t in cuts {
            let p = a + (b - a) * t;
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
    }
    if !traj.is_closed() {
        out.push(traj.end());
    }
    Trajectory::new(out, traj.is_closed())
}

/// Loop phase `(1/hbar c) * loop of (B x d) . dR` through a finite slab.
///
/// Segments are cut at the slab surfaces first, so the midpoint rule is exact
/// on each piece.
pub fn hmw_phase(
    d: &DipoleMoment,
    cfg: &SlabFieldConfig,
    loop_path: &Trajectory,
    line: &LineOptions,
) -> Result<PhaseResult> {
    if !loop_path.is_closed() {
        return Err(Error::OpenPath);
    }
    if cfg.is_thin() {
        return Err(Error::InvalidInput(
            "loop phase needs a finite-thickness slab; a thin sheet makes the integrand a surface delta".into(),
        ));
    }
    if cfg.kind() != crate::fieldmom::SheetKind::Magnetic {
        return Err(Error::WrongFieldKind {
            expected: "magnetic",
        });
    }
    let pieces = split_at_slab_planes(loop_path, cfg)?;
    let dv = d.d;
    let field = |p: Vec3| {
        if cfg.contains(p) {
            Vec3::new(cfg.strength(), 0.0, 0.0).cross(dv)
        } else {
            Vec3::ZERO
        }
    };
    let hc = CGS.hbar_c();
    let r = integrate_line(|p| field(p) / hc, &pieces, line)?;
    Ok(PhaseResult {
        phi: r.value,
        method: PhaseMethod::Loop,
        error_estimate: r.error_estimate,
        evaluations: r.samples as u64,
    })
}

/// `phi_g = 3 e a0 n_B / (2 hbar c)` for flux density `n_b` in G cm.
pub fn phi_g_sheet(n_b: f64) -> f64 {
    CGS.phase_per_flux() * n_b
}

/// Relative phase `2 phi_g` between `|+>` and `|->`.
pub fn relative_phase(n_b: f64) -> f64 {
    2.0 * phi_g_sheet(n_b)
}

/// `phi_g^m = -n_E mu / (2 hbar c)`, `n_e` in statvolt, `mu` in erg/G.
pub fn phi_g_dual(n_e: f64, mu: f64) -> f64 {
    -n_e * mu / (2.0 * CGS.hbar_c())
}

/// Neutron magnetic moment, erg/G.
pub fn neutron_moment() -> f64 {
    NEUTRON_MOMENT_IN_MU_N * MU_N
}

/// Flux density in statvolt for a value given in volts.
pub fn volts_to_flux(volts: f64) -> f64 {
    volts * VOLT_TO_STATVOLT
}

/// A probe moving past a pair of sheets: an electric dipole `d_z` and a
/// magnetic moment `mu_z`, a magnetic sheet `n_b` and an electric sheet `n_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetScenario {
    pub d_z: f64,
    pub mu_z: f64,
    pub n_b: f64,
    pub n_e: f64,
}

impl SheetScenario {
    pub fn hydrogen(sign: f64, n_b: f64) -> Self {
        Self {
            d_z: DipoleMoment::hydrogen(sign).z(),
            mu_z: 0.0,
            n_b,
            n_e: 0.0,
        }
    }

    pub fn spin(mu_z: f64, n_e: f64) -> Self {
        Self {
            d_z: 0.0,
            mu_z,
            n_b: 0.0,
            n_e,
        }
    }

    /// Closed-form phase `(d_z n_B - mu_z n_E) / (2 hbar c)`.
    pub fn phase(&self) -> f64 {
        (self.d_z * self.n_b - self.mu_z * self.n_e) / (2.0 * CGS.hbar_c())
    }

    /// Image under `E -> B, d -> mu, B -> -E, mu -> -d`.
    pub fn maxwell_dual(&self) -> Self {
        Self {
            d_z: -self.mu_z,
            mu_z: self.d_z,
            n_b: self.n_e,
            n_e: -self.n_b,
        }
    }
}
