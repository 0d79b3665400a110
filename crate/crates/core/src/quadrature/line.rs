use crate::error::{Error, Result};
use crate::geometry::{LineSample, Trajectory, Vec3};
use crate::parallel::{compensated_sum, Execution};

#[derive(Debug, Clone, PartialEq)]
pub struct LineOptions {
    /// Midpoint cells per segment at the coarsest level.
    pub initial_per_segment: usize,
    /// Maximum number of doublings after the first level.
    pub max_refinements: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub execution: Execution,
}

impl Default for LineOptions {
    fn default() -> Self {
        Self {
            initial_per_segment: 8,
            max_refinements: 12,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral {
    pub value: f64,
    pub error_estimate: f64,
    /// Refinement levels evaluated (including the first).
    pub levels: usize,
    /// Total integrand evaluations.
    pub samples: usize,
}

/// `sum f(p) . dl` over midpoint samples with Richardson extrapolation between
/// successive doublings.
pub fn integrate_line<F>(f: F, traj: &Trajectory, opts: &LineOptions) -> Result<LineIntegral>
where
    F: Fn(Vec3) -> Vec3 + Sync,
{
    integrate_line_samples(
        |s: &LineSample| Ok::<_, Error>(f(s.point).dot(s.dl)),
        traj,
        opts,
    )
}

/// Generalised form: `g` receives each sample and returns its contribution
/// `f . dl` directly, so callers can use directional derivatives instead of
/// full vector fields.
pub fn integrate_line_samples<G, E>(
    g: G,
    traj: &Trajectory,
    opts: &LineOptions,
) -> Result<LineIntegral, E>
where
    G: Fn(&LineSample) -> Result<f64, E> + Sync,
    E: From<Error> + Send,
{
    if opts.initial_per_segment == 0 || !(opts.rel_tol > 0.0 && opts.abs_tol > 0.0) {
        return Err(Error::InvalidInput(
            "line options need positive cell count and tolerances".into(),
        )
        .into());
    }

    let mut n = opts.initial_per_segment;
    let mut samples = 0;
    let level = |n: usize| -> Result<f64, E> {
        let pts = traj.segment_sample(n)?;
        let contributions = opts.execution.try_map(&pts, &g)?;
        Ok(compensated_sum(contributions))
    };

    let mut midpoint = level(n)?;
    samples += n * traj.segments().count();
    let mut previous: Option<f64> = None;
    let mut last_gap = f64::INFINITY;

    for refinement in 1..=opts.max_refinements {
        n *= 2;
        let finer = level(n)?;
        samples += n * traj.segments().count();
        let extrapolated = if finer == midpoint {
            finer
        } else {
            (4.0 * finer - midpoint) / 3.0
        };
        if let Some(prev) = previous {
            let gap = (extrapolated - prev).abs();
            let tol = opts.abs_tol.max(opts.rel_tol * extrapolated.abs());
            last_gap = gap;
            if gap <= tol {
                return Ok(LineIntegral {
                    value: extrapolated,
                    error_estimate: gap,
                    levels: refinement + 1,
                    samples,
                });
            }
        }
        previous = Some(extrapolated);
        midpoint = finer;
    }

    Err(Error::LineNonConvergence {
        value: previous.unwrap_or(midpoint),
        error_estimate: last_gap,
        levels: opts.max_refinements + 1,
    }
    .into())
}
