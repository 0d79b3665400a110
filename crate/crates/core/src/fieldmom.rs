//! Field momentum of a point charge in the field of a semi-infinite slab.
//!
//! The slab carries `B = B0 x` on `z' >= 0, -y0 <= y' < 0` and nothing
//! elsewhere. For a charge `q` at `R` the field momentum is
//!
//! ```text
//! Pi_q(R) = 1/(4 pi c) * integral of E_q(r') x B(r') d^3r'
//! ```
//!
//! with `E_q = q (r' - R) / |r' - R|^3`. Only the magnetic overlap is kept;
//! the electric cross term is absent for this configuration.
//!
//! `Pi_y` diverges logarithmically with the `z'` extent of the slab, so it is
//! integrated up to an explicit cutoff. The divergent part does not depend on
//! `R`, so gradients of `Pi` and every phase built from them are cutoff-stable,
//! and the sheet observable uses `Pi_z` only, which is integrated to infinity.

use std::f64::consts::PI;

use crate::constants::C;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::quadrature::{
    integrate_3d, Axis, IntegrationRegion, QuadratureOptions, QuadratureResult,
};

/// Distance below which a sample point counts as sitting on the charge, cm.
pub const SINGULAR_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SheetKind {
    /// `B0 x` sheet, probed by an electric dipole.
    Magnetic,
    /// The Maxwell dual: `E0 x` sheet, probed by a magnetic moment.
    ElectricDual,
}

/// Semi-infinite sheet of uniform field.
///
/// `strength` is `B0` in G for a magnetic sheet or `E0` in statvolt/cm for
/// the electric dual. In the thin-sheet limit the `y` extent collapses onto
/// `y' = 0` and only the product `strength * y0` matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabFieldConfig {
    strength: f64,
    y0: f64,
    thin_sheet: bool,
    kind: SheetKind,
}

impl SlabFieldConfig {
    pub fn new(strength: f64, y0: f64, thin_sheet: bool, kind: SheetKind) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::NonFinite("sheet field strength"));
        }
        if !(y0.is_finite() && y0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "slab thickness y0 must be positive, got {y0}"
            )));
        }
        Ok(Self {
            strength,
            y0,
            thin_sheet,
            kind,
        })
    }

    pub fn magnetic(b0: f64, y0: f64) -> Result<Self> {
        Self::new(b0, y0, false, SheetKind::Magnetic)
    }

    /// Thin magnetic sheet carrying flux density `n_b` (G cm).
    pub fn thin_magnetic(n_b: f64) -> Result<Self> {
        Self::new(n_b, 1.0, true, SheetKind::Magnetic)
    }

    pub fn electric_dual(e0: f64, y0: f64) -> Result<Self> {
        Self::new(e0, y0, false, SheetKind::ElectricDual)
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn is_thin(&self) -> bool {
        self.thin_sheet
    }

    pub fn kind(&self) -> SheetKind {
        self.kind
    }

    /// Linear flux density `strength * y0` (G cm, or statvolt for the dual).
    pub fn flux_density(&self) -> f64 {
        self.strength * self.y0
    }

    /// Same sheet with the strength multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            strength: self.strength * factor,
            ..*self
        }
    }

    /// Whether `r` lies in the support of the sheet field.
    pub fn contains(&self, r: Vec3) -> bool {
        if self.thin_sheet {
            r.y == 0.0 && r.z >= 0.0
        } else {
            r.z >= 0.0 && r.y >= -self.y0 && r.y < 0.0
        }
    }

    /// Euclidean distance from `r` to the field support.
    pub fn distance_to(&self, r: Vec3) -> f64 {
        let (y_lo, y_hi) = if self.thin_sheet {
            (0.0, 0.0)
        } else {
            (-self.y0, 0.0)
        };
        let dy = (y_lo - r.y).max(r.y - y_hi).max(0.0);
        let dz = (-r.z).max(0.0);
        dy.hypot(dz)
    }
}

/// The sheet field at `r`: `strength * x` inside the slab, zero elsewhere.
///
/// Only defined for finite-thickness slabs; a thin sheet's field is a surface
/// distribution.
pub fn bfield(r: Vec3, cfg: &SlabFieldConfig) -> Result<Vec3> {
    if cfg.thin_sheet {
        return Err(Error::InvalidInput(
            "thin-sheet field is a surface distribution; use the surface density".into(),
        ));
    }
    r.checked("field point")?;
    Ok(if cfg.contains(r) {
        Vec3::new(cfg.strength, 0.0, 0.0)
    } else {
        Vec3::ZERO
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCharge {
    pub q: f64,
    pub position: Vec3,
}

impl PointCharge {
    pub fn new(q: f64, position: Vec3) -> Result<Self> {
        if q == 0.0 || !q.is_finite() {
            return Err(Error::InvalidInput(format!(
                "charge must be finite and non-zero, got {q}"
            )));
        }
        position.checked("charge position")?;
        Ok(Self { q, position })
    }

    /// The same charge moved to `position`.
    pub fn at(&self, position: Vec3) -> Self {
        Self {
            q: self.q,
            position,
        }
    }
}

/// Coulomb field `q (r' - R) / |r' - R|^3` (statvolt/cm).
pub fn efield_charge(charge: &PointCharge, r_prime: Vec3) -> Result<Vec3> {
    let d = r_prime - charge.position;
    let dist = d.norm();
    if dist < SINGULAR_RADIUS {
        return Err(Error::SingularPoint {
            point: r_prime.to_array(),
            distance: dist,
        });
    }
    Ok(d * (charge.q / (dist * dist * dist)))
}

/// Outward flux of the charge's field through a sphere of `radius` around it,
/// by cubature over the polar and azimuthal angles. Gauss's law gives `4 pi q`.
pub fn coulomb_flux(
    charge: &PointCharge,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(radius.is_finite() && radius > SINGULAR_RADIUS) {
        return Err(Error::InvalidInput(format!(
            "flux sphere radius must be positive, got {radius}"
        )));
    }
    let region = IntegrationRegion::new(
        Axis::finite(0.0, PI),
        Axis::finite(0.0, 2.0 * PI),
        Axis::point(0.0),
    )?;
    let integrand = |p: Vec3| {
        let (theta, phi) = (p.x, p.y);
        let n = Vec3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        );
        match efield_charge(charge, charge.position + n * radius) {
            Ok(e) => e.dot(n) * radius * radius * theta.sin(),
            Err(_) => f64::NAN,
        }
    };
    integrate_3d(integrand, &region, opts)
}

/// Numerical settings for field-momentum work.
///
/// Everything is tied to the reference length `a` (the distance of the path
/// from the sheet plane): the `z'` cutoff for `Pi_y` defaults to `1e4 a`,
/// the finite-difference step to `a / 200`, and the no-overlap margin is
/// `1e-6 a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumOptions {
    pub length_scale: f64,
    pub quadrature: QuadratureOptions,
    pub z_cutoff: Option<f64>,
    pub step: Option<f64>,
}

impl MomentumOptions {
    pub fn new(length_scale: f64) -> Self {
        Self {
            length_scale,
            quadrature: QuadratureOptions::default(),
            z_cutoff: None,
            step: None,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.quadrature.rel_tol = rel_tol;
        self.quadrature.abs_tol = abs_tol;
        self
    }

    pub fn z_cutoff(&self) -> f64 {
        self.z_cutoff.unwrap_or(1e4 * self.length_scale)
    }

    pub fn step(&self) -> f64 {
        self.step.unwrap_or(self.length_scale / 200.0)
    }

    pub fn margin(&self) -> f64 {
        1e-6 * self.length_scale
    }

    fn validate(&self) -> Result<()> {
        if !(self.length_scale.is_finite() && self.length_scale > 0.0) {
            return Err(Error::InvalidInput("length scale must be positive".into()));
        }
        if !(self.z_cutoff() > 0.0 && self.z_cutoff().is_finite()) {
            return Err(Error::InvalidInput("z cutoff must be positive".into()));
        }
        if !(self.step() > 0.0 && self.step().is_finite()) {
            return Err(Error::InvalidInput(
                "finite-difference step must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Field momentum with per-component quadrature diagnostics (g cm/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMomentum {
    pub pi: Vec3,
    pub components: [QuadratureResult; 3],
    /// `z'` cutoff used for `Pi_y`, whose value depends on it.
    pub y_cutoff: f64,
}

impl FieldMomentum {
    pub fn evaluations(&self) -> u64 {
        self.components.iter().map(|c| c.evaluations).sum()
    }

    pub fn error_estimate(&self) -> Vec3 {
        Vec3::new(
            self.components[0].error_estimate,
            self.components[1].error_estimate,
            self.components[2].error_estimate,
        )
    }
}

fn check_outside(cfg: &SlabFieldConfig, r: Vec3, margin: f64) -> Result<()> {
    if cfg.contains(r) || cfg.distance_to(r) < margin {
        return Err(Error::OverlapViolation {
            point: r.to_array(),
            margin,
        });
    }
    Ok(())
}

fn require_magnetic(cfg: &SlabFieldConfig) -> Result<()> {
    match cfg.kind {
        SheetKind::Magnetic => Ok(()),
        SheetKind::ElectricDual => Err(Error::WrongFieldKind {
            expected: "magnetic",
        }),
    }
}

/// Fails with [`Error::OverlapViolation`] if any point of `traj` comes within
/// `margin` of the field support.
///
/// The distance to the (convex) support is convex along each segment, so a
/// golden-section search finds the closest approach.
pub fn check_path_clear(
    cfg: &SlabFieldConfig,
    traj: &crate::geometry::Trajectory,
    margin: f64,
) -> Result<()> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    for (a, b) in traj.segments() {
        let at = |t: f64| a + (b - a) * t;
        let dist = |t: f64| cfg.distance_to(at(t)) - if cfg.contains(at(t)) { margin } else { 0.0 };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let m1 = hi - INV_PHI * (hi - lo);
            let m2 = lo + INV_PHI * (hi - lo);
            if dist(m1) <= dist(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        for t in [0.0, 0.5 * (lo + hi), 1.0] {
            check_outside(cfg, at(t), margin)?;
        }
    }
    Ok(())
}

/// `Pi_q` at the charge position. The charge must sit strictly outside the
/// slab.
pub fn field_momentum(
    charge: &PointCharge,
    cfg: &SlabFieldConfig,
    opts: &MomentumOptions,
) -> Result<FieldMomentum> {
    opts.validate()?;
    check_outside(cfg, charge.position, opts.margin())?;
    field_momentum_unchecked(charge, cfg, opts)
}

/// One component of `Pi_q`.
pub fn field_momentum_component(
    charge: &PointCharge,
    cfg: &SlabFieldConfig,
    axis: usize,
    opts: &MomentumOptions,
) -> Result<QuadratureResult> {
    opts.validate()?;
    check_outside(cfg, charge.position, opts.margin())?;
    momentum_component(charge, cfg, axis, opts)
}

/// `Pi_q` without the no-overlap check. The integrand is then singular at the
/// charge; the region is cut there so the singularity sits on box corners.
pub(crate) fn field_momentum_unchecked(
    charge: &PointCharge,
    cfg: &SlabFieldConfig,
    opts: &MomentumOptions,
) -> Result<FieldMomentum> {
    let components = [
        momentum_component(charge, cfg, 0, opts)?,
        momentum_component(charge, cfg, 1, opts)?,
        momentum_component(charge, cfg, 2, opts)?,
    ];
    Ok(FieldMomentum {
        pi: Vec3::new(
            components[0].value,
            components[1].value,
            components[2].value,
        ),
        components,
        y_cutoff: opts.z_cutoff(),
    })
}

fn momentum_component(
    charge: &PointCharge,
    cfg: &SlabFieldConfig,
    axis: usize,
    opts: &MomentumOptions,
) -> Result<QuadratureResult> {
    require_magnetic(cfg)?;
    if cfg.strength == 0.0 {
        return Ok(QuadratureResult::exact(0.0));
    }
    let r = charge.position;
    let cutoff = opts.z_cutoff();
    if axis == 1 && r.z >= cutoff {
        return Err(Error::InvalidInput(format!(
            "charge at z = {} lies beyond the Pi_y cutoff {cutoff}",
            r.z
        )));
    }

    let scale = cfg.distance_to(r).max(if cfg.thin_sheet {
        opts.length_scale
    } else {
        cfg.y0
    });
    let near_z = [r.z - scale, r.z, r.z + scale];

    let x_axis = Axis::whole_line().centered(r.x).with_scale(scale);
    let y_axis = if cfg.thin_sheet {
        Axis::point(0.0)
    } else {
        Axis::finite(-cfg.y0, 0.0).with_breaks([r.y])
    };
    let z_axis = if axis == 1 {
        Axis::finite(0.0, cutoff).with_breaks(near_z)
    } else {
        Axis::from(0.0).with_scale(scale).with_breaks(near_z)
    };
    let mut region = IntegrationRegion::new(x_axis, y_axis, z_axis)?;
    // Inside the slab the kernel is odd about R, so a cube centred on the
    // charge integrates to zero and can be cut out.
    if !cfg.thin_sheet && cfg.contains(r) {
        let s = 0.5 * (r.y + cfg.y0).min(-r.y).min(r.z);
        if s > SINGULAR_RADIUS {
            let half = Vec3::new(s, s, s);
            region = region.excluding(r - half, r + half)?;
        }
    }

    // Unit charge and unit field: the kernel is purely geometric, so the
    // absolute tolerance is in cm (finite slab) or dimensionless (thin sheet).
    // Components that vanish by symmetry are judged against the far-side
    // magnitude 2 pi (times y0) rather than against their own value.
    let unit = PointCharge {
        q: 1.0,
        position: r,
    };
    let direction = Vec3::X;
    let kernel = |p: Vec3| match efield_charge(&unit, p) {
        Ok(e) => e.cross(direction).component(axis),
        Err(_) => f64::NAN,
    };

    let mut quad = opts.quadrature.clone();
    let reference = 2.0 * PI * if cfg.thin_sheet { 1.0 } else { cfg.y0 };
    quad.abs_tol = quad.abs_tol.max(quad.rel_tol * reference);
    quad.exclusion = Some((r, SINGULAR_RADIUS));
    let result = integrate_3d(kernel, &region, &quad)?.require_converged()?;

    let weight = if cfg.thin_sheet {
        cfg.flux_density()
    } else {
        cfg.strength
    };
    Ok(result.scaled(charge.q * weight / (4.0 * PI * C)))
}

/// Closed-form `Pi_z` for a thin sheet of flux density `n_b`, charge on the
/// line `y = a`, at height `z`:
///
/// ```text
/// Pi_z = q n_b / (2 pi c) * (pi/2 + atan(z / a))
/// ```
///
/// Obtained by integrating `a / rho^3` over `x'` (giving `2a / (a^2 + (z'-z)^2)`)
/// and then over `z' >= 0`.
pub fn field_momentum_thin_sheet(charge: &PointCharge, a: f64, z: f64, n_b: f64) -> f64 {
    charge.q * n_b / (2.0 * PI * C) * (PI / 2.0 + (z / a).atan())
}

/// A derivative estimate with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// `d . Pi_q` at the charge position, with the summed component error.
fn d_dot_pi(
    charge: &PointCharge,
    d: Vec3,
    cfg: &SlabFieldConfig,
    opts: &MomentumOptions,
) -> Result<(f64, f64, u64)> {
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evals = 0;
    for axis in 0..3 {
        let di = d.component(axis);
        if di == 0.0 {
            continue;
        }
        let c = momentum_component(charge, cfg, axis, opts)?;
        value += di * c.value;
        error += di.abs() * c.error_estimate;
        evals += c.evaluations;
    }
    Ok((value, error, evals))
}

/// Central difference with two-level Richardson extrapolation from samples
/// `(value, error, evaluations)` at offsets `+h, -h, +h/2, -h/2`.
fn richardson(samples: [(f64, f64, u64); 4], step: f64) -> Derivative {
    let [(p1, e1, n1), (m1, e2, n2), (p2, e3, n3), (m2, e4, n4)] = samples;
    let coarse = (p1 - m1) / (2.0 * step);
    let fine = (p2 - m2) / step;
    let value = (4.0 * fine - coarse) / 3.0;
    // truncation part from the Richardson gap, noise part from the quadrature
    let noise = (4.0 / 3.0) * (e3 + e4) / step + (e1 + e2) / (6.0 * step);
    Derivative {
        value,
        error_estimate: (value - fine).abs() + noise,
        evaluations: n1 + n2 + n3 + n4,
    }
}

const STENCIL: [f64; 4] = [1.0, -1.0, 0.5, -0.5];

/// Directional derivative `(1/q) u . grad_R (d . Pi_q)` at the charge
/// position for a unit vector `u`.
pub fn directional_d_dot_pi(
    charge: &PointCharge,
    d: Vec3,
    cfg: &SlabFieldConfig,
    direction: Vec3,
    opts: &MomentumOptions,
) -> Result<Derivative> {
    opts.validate()?;
    d.checked("dipole moment")?;
    require_magnetic(cfg)?;
    let h = opts.step();
    let r = charge.position;
    for s in [h, -h] {
        check_outside(cfg, r + direction * s, opts.margin())?;
    }
    if d == Vec3::ZERO {
        return Ok(Derivative {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut samples = [(0.0, 0.0, 0); 4];
    for (slot, k) in samples.iter_mut().zip(STENCIL) {
        *slot = d_dot_pi(&charge.at(r + direction * (k * h)), d, cfg, opts)?;
    }
    let deriv = richardson(samples, h);
    Ok(Derivative {
        value: deriv.value / charge.q,
        error_estimate: deriv.error_estimate / charge.q.abs(),
        evaluations: deriv.evaluations,
    })
}

/// `(1/q) grad_R (d . Pi_q)` at the charge position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub value: Vec3,
    pub error_estimate: Vec3,
    pub evaluations: u64,
}

/// The interaction term `(1/q) grad (d . Pi_q)` of the centre-of-mass
/// Hamiltonian, by Richardson-extrapolated central differences.
pub fn grad_d_dot_pi(
    charge: &PointCharge,
    d: Vec3,
    cfg: &SlabFieldConfig,
    opts: &MomentumOptions,
) -> Result<Gradient> {
    let parts = [
        directional_d_dot_pi(charge, d, cfg, Vec3::X, opts)?,
        directional_d_dot_pi(charge, d, cfg, Vec3::Y, opts)?,
        directional_d_dot_pi(charge, d, cfg, Vec3::Z, opts)?,
    ];
    Ok(Gradient {
        value: Vec3::new(parts[0].value, parts[1].value, parts[2].value),
        error_estimate: Vec3::new(
            parts[0].error_estimate,
            parts[1].error_estimate,
            parts[2].error_estimate,
        ),
        evaluations: parts.iter().map(|p| p.evaluations).sum(),
    })
}

/// Comparison of the finite-difference curl of `Pi_q` with `(q/c) B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlResidual {
    pub point: Vec3,
    pub curl: Vec3,
    pub expected: Vec3,
    pub residual: f64,
    /// Propagated finite-difference and quadrature uncertainty.
    pub error_estimate: f64,
    /// `max(1e-3 * |q| B0 / c, error_estimate)`.
    pub tolerance: f64,
}

impl CurlResidual {
    pub fn passes(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Checks `curl Pi_q = (q/c) B` at each sample point by central differences.
///
/// Points may lie inside the slab (the charge then overlaps the field, which
/// the identity allows), but every stencil must stay at least three steps
/// away from the slab's bounding planes.
pub fn curl_pi_check(
    charge: &PointCharge,
    cfg: &SlabFieldConfig,
    points: &[Vec3],
    opts: &MomentumOptions,
) -> Result<Vec<CurlResidual>> {
    opts.validate()?;
    require_magnetic(cfg)?;
    let h = opts.step();
    for &p in points {
        p.checked("curl sample point")?;
        let mut planes = vec![(p.y, 0.0), (p.z, 0.0)];
        if !cfg.thin_sheet {
            planes.push((p.y, -cfg.y0));
        }
        if planes.iter().any(|&(c, plane)| (c - plane).abs() < 3.0 * h) {
            return Err(Error::InvalidInput(format!(
                "curl sample {p:?} is within three steps of a slab surface"
            )));
        }
        if cfg.thin_sheet {
            check_outside(cfg, p, opts.margin())?;
        }
    }

    let scale = charge.q.abs() * cfg.strength.abs() / C;
    let mut out = Vec::with_capacity(points.len());
    for &p in points {
        // jac[j][i] = d Pi_i / d x_j
        let mut jac = [[0.0; 3]; 3];
        let mut err = [[0.0; 3]; 3];
        for j in 0..3 {
            let dir = Vec3::axis(j);
            let mut samples = Vec::with_capacity(4);
            for k in STENCIL {
                samples.push(field_momentum_unchecked(
                    &charge.at(p + dir * (k * h)),
                    cfg,
                    opts,
                )?);
            }
            for i in 0..3 {
                let pick = |m: &FieldMomentum| {
                    let c = m.components[i];
                    (c.value, c.error_estimate, c.evaluations)
                };
                let d = richardson(
                    [
                        pick(&samples[0]),
                        pick(&samples[1]),
                        pick(&samples[2]),
                        pick(&samples[3]),
                    ],
                    h,
                );
                jac[j][i] = d.value;
                err[j][i] = d.error_estimate;
            }
        }
        let curl = Vec3::new(
            jac[1][2] - jac[2][1],
            jac[2][0] - jac[0][2],
            jac[0][1] - jac[1][0],
        );
        let curl_err = Vec3::new(
            err[1][2] + err[2][1],
            err[2][0] + err[0][2],
            err[0][1] + err[1][0],
        )
        .norm();
        let expected = if cfg.thin_sheet {
            Vec3::ZERO
        } else {
            bfield(p, cfg)? * (charge.q / C)
        };
        let tolerance = (1e-3 * scale).max(curl_err);
        out.push(CurlResidual {
            point: p,
            curl,
            expected,
            residual: (curl - expected).norm(),
            error_estimate: curl_err,
            tolerance,
        });
    }
    Ok(out)
}
