//! Globally adaptive subdivision over a product region.
//!
//! Boxes live in parameter space (infinite axes already mapped onto finite
//! intervals). Each round pops the worst boxes from a max-heap, bisects them
//! along the rule's preferred axis and evaluates the children as one batch.
//! The batch is formed by a rule that does not depend on the thread count, so
//! sequential and parallel runs perform identical arithmetic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::region::{AxisMap, IntegrationRegion};
use super::rules::{genz_malik, genz_malik_points, kronrod15, RuleEstimate, KRONROD_POINTS};
use super::{QuadratureOptions, QuadratureResult};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::parallel::{compensated_sum, NeumaierSum};

const MAX_BATCH: usize = 128;

#[derive(Debug, Clone)]
struct Cell {
    center: [f64; 3],
    half: [f64; 3],
    est: RuleEstimate,
    live: bool,
}

#[derive(Debug, PartialEq)]
struct Ranked {
    error: f64,
    id: usize,
}

impl Eq for Ranked {}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Problem<'a, F> {
    f: &'a F,
    maps: [AxisMap; 3],
    active: Vec<usize>,
    opts: &'a QuadratureOptions,
}

impl<F> Problem<'_, F>
where
    F: Fn(Vec3) -> f64 + Sync,
{
    fn sample(&self, t: &[f64]) -> Result<f64> {
        let mut x = [0.0; 3];
        let mut jac = 1.0;
        for (axis, map) in self.maps.iter().enumerate() {
            if let AxisMap::Point(v) = *map {
                x[axis] = v;
            }
        }
        for (k, &axis) in self.active.iter().enumerate() {
            let (xi, ji) = self.maps[axis].eval(t[k]);
            x[axis] = xi;
            jac *= ji;
        }
        let p = Vec3::from_array(x);
        if let Some((center, radius)) = self.opts.exclusion {
            if (p - center).norm() < radius {
                return Err(Error::NonFiniteSample { point: x });
            }
        }
        let v = (self.f)(p);
        let out = v * jac;
        if !out.is_finite() {
            // vanishing integrand at a mapped point at infinity
            if v == 0.0 && jac.is_infinite() {
                return Ok(0.0);
            }
            return Err(Error::NonFiniteSample { point: x });
        }
        Ok(out)
    }

    fn points_per_cell(&self) -> u64 {
        match self.active.len() {
            0 => 1,
            1 => KRONROD_POINTS as u64,
            n => genz_malik_points(n) as u64,
        }
    }

    fn estimate(&self, center: &[f64; 3], half: &[f64; 3]) -> Result<RuleEstimate> {
        let n = self.active.len();
        let mut g = |t: &[f64]| self.sample(t);
        match n {
            0 => Ok(RuleEstimate {
                value: g(&[])?,
                error: 0.0,
                split: 0,
            }),
            1 => kronrod15(&mut g, center[0], half[0]),
            _ => genz_malik(&mut g, &center[..n], &half[..n]),
        }
    }

    fn cell(&self, center: [f64; 3], half: [f64; 3]) -> Result<Cell> {
        let est = self.estimate(&center, &half)?;
        Ok(Cell {
            center,
            half,
            est,
            live: true,
        })
    }
}

pub(crate) fn integrate<F>(
    f: &F,
    region: &IntegrationRegion,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(Vec3) -> f64 + Sync,
{
    opts.validate()?;
    let axes = region.axes();
    let maps = [axes[0].map(), axes[1].map(), axes[2].map()];
    let active: Vec<usize> = (0..3).filter(|&i| !axes[i].is_collapsed()).collect();
    let problem = Problem {
        f,
        maps,
        active: active.clone(),
        opts,
    };
    let per_cell = problem.points_per_cell();

    // Initial tensor grid from the per-axis cut points.
    let cuts: Vec<Vec<f64>> = active.iter().map(|&a| axes[a].parameter_cuts()).collect();
    let mut seeds: Vec<([f64; 3], [f64; 3])> = vec![([0.0; 3], [0.0; 3])];
    for (k, c) in cuts.iter().enumerate() {
        let mut next = Vec::with_capacity(seeds.len() * (c.len() - 1));
        for (center, half) in &seeds {
            for w in c.windows(2) {
                let mut cc = *center;
                let mut hh = *half;
                cc[k] = 0.5 * (w[0] + w[1]);
                hh[k] = 0.5 * (w[1] - w[0]);
                next.push((cc, hh));
            }
        }
        seeds = next;
    }
    if let Some((lo, hi)) = region.hole() {
        seeds.retain(|(c, _)| {
            let mut x = [0.0; 3];
            let mut inside = true;
            for (k, &axis) in active.iter().enumerate() {
                x[axis] = maps[axis].eval(c[k]).0;
                inside &= x[axis] > lo.component(axis) && x[axis] < hi.component(axis);
            }
            let collapsed_inside = (0..3)
                .filter(|i| !active.contains(i))
                .all(|i| match maps[i] {
                    AxisMap::Point(v) => v >= lo.component(i) && v <= hi.component(i),
                    _ => true,
                });
            !(inside && collapsed_inside)
        });
    }

    let mut cells: Vec<Cell> = opts
        .execution
        .try_map(&seeds, |(c, h)| problem.cell(*c, *h))?;
    let mut evaluations = per_cell * cells.len() as u64;

    let mut heap = BinaryHeap::with_capacity(cells.len() * 4);
    let mut value = NeumaierSum::default();
    let mut error = NeumaierSum::default();
    for (id, c) in cells.iter().enumerate() {
        heap.push(Ranked {
            error: c.est.error,
            id,
        });
        value.add(c.est.value);
        error.add(c.est.error);
    }

    loop {
        let tol = opts.tolerance(value.value());
        let err_now = error.value();
        if err_now <= tol || active.is_empty() {
            break;
        }
        if evaluations + 2 * per_cell > opts.max_evals {
            break;
        }

        let mut batch = Vec::new();
        let mut remaining = err_now;
        while let Some(top) = heap.peek() {
            if !batch.is_empty() && (remaining <= tol || batch.len() >= MAX_BATCH) {
                break;
            }
            if evaluations + 2 * per_cell * (batch.len() as u64 + 1) > opts.max_evals {
                break;
            }
            remaining -= top.error;
            batch.push(heap.pop().expect("peeked").id);
        }
        if batch.is_empty() {
            break;
        }

        let mut children = Vec::with_capacity(2 * batch.len());
        for &id in &batch {
            let parent = &cells[id];
            let axis = parent.est.split;
            let mut half = parent.half;
            half[axis] *= 0.5;
            let mut lo = parent.center;
            let mut hi = parent.center;
            lo[axis] -= half[axis];
            hi[axis] += half[axis];
            children.push((lo, half));
            children.push((hi, half));
        }
        let evaluated = opts
            .execution
            .try_map(&children, |(c, h)| problem.cell(*c, *h))?;
        evaluations += per_cell * evaluated.len() as u64;

        for &id in &batch {
            let parent = &mut cells[id];
            parent.live = false;
            value.add(-parent.est.value);
            error.add(-parent.est.error);
        }
        for cell in evaluated {
            let id = cells.len();
            value.add(cell.est.value);
            error.add(cell.est.error);
            heap.push(Ranked {
                error: cell.est.error,
                id,
            });
            cells.push(cell);
        }
    }

    let live = || cells.iter().filter(|c| c.live);
    let value = compensated_sum(live().map(|c| c.est.value));
    let error_estimate = compensated_sum(live().map(|c| c.est.error)).max(0.0);
    let converged = error_estimate <= opts.tolerance(value);
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged,
    })
}
