//! Adaptive cubature over finite and semi-infinite boxes, plus refined
//! midpoint line integrals along polyline trajectories.

mod adaptive;
mod line;
mod region;
mod rules;

pub use line::{integrate_line, integrate_line_samples, LineIntegral, LineOptions};
pub use region::{Axis, Bound, IntegrationRegion};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::parallel::Execution;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

impl QuadratureResult {
    /// An exactly known value (no work done).
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Turns an unconverged result into [`Error::NonConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { partial: self })
        }
    }

    /// Multiplies value and error by a constant factor.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: u64,
    pub execution: Execution,
    /// Samples closer than `radius` to `center` abort the integration with
    /// [`Error::NonFiniteSample`].
    pub exclusion: Option<(Vec3, f64)>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            max_evals: 10_000_000,
            execution: Execution::default(),
            exclusion: None,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    pub(crate) fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_evals == 0 {
            return Err(Error::InvalidInput("max_evals must be positive".into()));
        }
        Ok(())
    }
}

/// Integrates a scalar field over `region`.
///
/// Returns the best estimate even when the evaluation budget runs out; check
/// [`QuadratureResult::converged`] or call
/// [`QuadratureResult::require_converged`].
pub fn integrate_3d<F>(
    f: F,
    region: &IntegrationRegion,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(Vec3) -> f64 + Sync,
{
    adaptive::integrate(&f, region, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_volume() {
        let r = integrate_3d(
            |_| 1.0,
            &IntegrationRegion::unit_cube(),
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_over_all_space() {
        let opts = QuadratureOptions::default();
        let r = integrate_3d(
            |p| (-p.norm_squared()).exp(),
            &IntegrationRegion::whole_space(),
            &opts,
        )
        .unwrap();
        let exact = PI.powf(1.5);
        assert!(r.converged);
        assert!((r.value - exact).abs() / exact < 1e-6, "{r:?}");
        assert!((r.value - exact).abs() <= 10.0 * r.error_estimate.max(1e-300));
    }

    #[test]
    fn collapsed_axis_reduces_dimension() {
        // a / (x^2 + a^2 + z^2)^{3/2}, a = 1: x over the line, z over the half-line
        let region =
            IntegrationRegion::new(Axis::whole_line(), Axis::point(0.0), Axis::from(0.0)).unwrap();
        assert_eq!(region.dimension(), 2);
        let r = integrate_3d(
            |p| 1.0 / (p.x * p.x + 1.0 + p.z * p.z).powf(1.5),
            &region,
            &QuadratureOptions::with_tolerances(1e-9, 1e-14),
        )
        .unwrap();
        assert!((r.value - PI).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn one_dimensional_kronrod_path() {
        let region =
            IntegrationRegion::new(Axis::point(0.0), Axis::point(0.0), Axis::finite(0.0, 1.0))
                .unwrap();
        let r = integrate_3d(
            |p| p.z.sqrt(),
            &region,
            &QuadratureOptions::with_tolerances(1e-10, 1e-14),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn zero_dimensional_region_evaluates_once() {
        let region =
            IntegrationRegion::new(Axis::point(1.0), Axis::point(2.0), Axis::point(3.0)).unwrap();
        let r = integrate_3d(|p| p.x + p.y + p.z, &region, &QuadratureOptions::default()).unwrap();
        assert_eq!(r.value, 6.0);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let opts = QuadratureOptions {
            max_evals: 200,
            ..QuadratureOptions::with_tolerances(1e-12, 1e-300)
        };
        let r = integrate_3d(
            |p| (p.x * p.y * p.z).abs().sqrt(),
            &IntegrationRegion::cube(-1.0, 1.0),
            &opts,
        )
        .unwrap();
        assert!(!r.converged);
        assert!(r.evaluations <= 200);
        assert!((r.value - 64.0 / 27.0).abs() <= r.error_estimate, "{r:?}");
        assert!(matches!(
            r.require_converged(),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn non_finite_sample_is_an_error() {
        let r = integrate_3d(
            |p| 1.0 / p.x,
            &IntegrationRegion::cube(-1.0, 1.0),
            &QuadratureOptions::default(),
        );
        // odd integrand with a pole in the interior; a node lands on x = 0
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
        let r = integrate_3d(
            |_| f64::NAN,
            &IntegrationRegion::unit_cube(),
            &QuadratureOptions::default(),
        );
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
    }

    #[test]
    fn exclusion_zone_aborts() {
        let opts = QuadratureOptions {
            exclusion: Some((Vec3::new(0.5, 0.5, 0.5), 0.1)),
            ..QuadratureOptions::default()
        };
        let r = integrate_3d(|_| 1.0, &IntegrationRegion::unit_cube(), &opts);
        assert!(matches!(r, Err(Error::NonFiniteSample { .. })));
    }

    #[test]
    fn sequential_and_parallel_bit_identical() {
        let f = |p: Vec3| 1.0 / (1.0 + (p - Vec3::new(0.2, -0.1, 0.3)).norm_squared()).powi(2);
        let opts = QuadratureOptions::with_tolerances(1e-9, 1e-15);
        let a = integrate_3d(f, &IntegrationRegion::whole_space(), &opts).unwrap();
        let b = integrate_3d(
            f,
            &IntegrationRegion::whole_space(),
            &opts.clone().sequential(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.evaluations > 1000);
    }

    #[test]
    fn hole_is_removed() {
        let region = IntegrationRegion::cube(-1.0, 1.0)
            .excluding(Vec3::new(-0.5, -0.5, -0.5), Vec3::new(0.5, 0.5, 0.5))
            .unwrap();
        let r = integrate_3d(|_| 1.0, &region, &QuadratureOptions::default()).unwrap();
        assert!((r.value - 7.0).abs() < 1e-12);
        // a singular point inside the hole is never sampled
        let r = integrate_3d(
            |p| 1.0 / p.norm_squared(),
            &region,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert!(r.converged && r.value.is_finite());
    }

    #[test]
    fn rejects_bad_tolerances() {
        let opts = QuadratureOptions::with_tolerances(0.0, 1e-12);
        assert!(integrate_3d(|_| 1.0, &IntegrationRegion::unit_cube(), &opts).is_err());
    }
}
