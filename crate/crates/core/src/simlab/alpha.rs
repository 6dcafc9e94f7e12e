//! Monte Carlo estimate of the range-scaling exponent.
//!
//! For each fraction `f` of the day on the grid, the mean price range over
//! `[0, f]` is averaged across paths; the exponent is the least-squares slope
//! of `ln E[range]` against `ln f`. The standard error comes from the delta
//! method applied to the sample covariance of the per-grid-point ranges.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::simlab::paths::{stream_rng, PathModel};

pub const MIN_PATHS: usize = 1000;
pub const MIN_GRID_POINTS: usize = 5;

/// Paths simulated per parallel task. Results do not depend on it.
const CHUNK: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha_hat: f64,
    pub stderr: f64,
    pub n_paths: usize,
    /// Grid fractions actually used, after rounding to whole steps.
    pub time_grid: Vec<f64>,
    pub mean_ranges: Vec<f64>,
}

/// `{0.1, 0.2, ..., 1.0}`
pub fn decile_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

/// Rounds grid fractions to step indices, checking they are usable.
fn grid_steps(grid: &[f64], steps_per_day: usize) -> Result<Vec<usize>> {
    if let Some(bad) = grid.iter().find(|f| !(f.is_finite() && **f > 0.0 && **f <= 1.0)) {
        return Err(Error::DegenerateGrid(format!("fraction {bad} is outside (0, 1]")));
    }
    let mut steps: Vec<usize> = grid
        .iter()
        .map(|f| (f * steps_per_day as f64).round() as usize)
        .collect();
    steps.sort_unstable();
    let before = steps.len();
    steps.dedup();
    if steps.len() != before {
        return Err(Error::DegenerateGrid(
            "fractions are not distinct at the model's step resolution".into(),
        ));
    }
    if steps.first() == Some(&0) {
        return Err(Error::DegenerateGrid("a fraction rounds to zero steps".into()));
    }
    if steps.len() < MIN_GRID_POINTS {
        return Err(Error::DegenerateGrid(format!(
            "need at least {MIN_GRID_POINTS} distinct fractions, got {}",
            steps.len()
        )));
    }
    Ok(steps)
}

/// Ranges of one path at each grid step, written into `out`.
fn path_ranges(model: &PathModel, path_index: usize, steps: &[usize], out: &mut [f64]) {
    let mut rng = stream_rng(model.seed(), path_index as u64);
    let (mut x, mut hi, mut lo) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut step = 0usize;
    let mut next = 0usize;
    let last = *steps.last().expect("grid validated");
    model.for_each_increment(&mut rng, last, |dx| {
        x += dx;
        hi = hi.max(x);
        lo = lo.min(x);
        step += 1;
        if step == steps[next] {
            out[next] = model.price(1.0, hi) - model.price(1.0, lo);
            next += 1;
        }
    });
}

pub fn estimate_alpha(model: &PathModel, n_paths: usize, grid: &[f64]) -> Result<AlphaEstimate> {
    if n_paths < MIN_PATHS {
        return Err(Error::InvalidParams(format!(
            "need at least {MIN_PATHS} paths, got {n_paths}"
        )));
    }
    let steps = grid_steps(grid, model.steps_per_day())?;
    let g = steps.len();

    // One row of `g` ranges per path, in path order.
    let mut ranges = vec![0.0; n_paths * g];
    ranges
        .par_chunks_mut(CHUNK * g)
        .enumerate()
        .for_each(|(chunk, rows)| {
            for (i, row) in rows.chunks_mut(g).enumerate() {
                path_ranges(model, chunk * CHUNK + i, &steps, row);
            }
        });

    let n = n_paths as f64;
    let mut means = vec![0.0; g];
    for row in ranges.chunks(g) {
        for (m, r) in means.iter_mut().zip(row) {
            *m += r;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    if let Some(j) = means.iter().position(|&m| !(m > 0.0)) {
        return Err(Error::InvalidParams(format!(
            "model produces zero mean range at grid fraction {}",
            steps[j] as f64 / model.steps_per_day() as f64
        )));
    }

    let mut cov = vec![0.0; g * g];
    for row in ranges.chunks(g) {
        for j in 0..g {
            let dj = row[j] - means[j];
            for k in j..g {
                cov[j * g + k] += dj * (row[k] - means[k]);
            }
        }
    }
    for j in 0..g {
        for k in j..g {
            cov[j * g + k] /= n - 1.0;
            cov[k * g + j] = cov[j * g + k];
        }
    }

    let fractions: Vec<f64> = steps
        .iter()
        .map(|&s| s as f64 / model.steps_per_day() as f64)
        .collect();
    let xs: Vec<f64> = fractions.iter().map(|f| f.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / g as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let weights: Vec<f64> = xs.iter().map(|x| (x - mean_x) / sxx).collect();

    let alpha_hat: f64 = weights.iter().zip(&means).map(|(w, m)| w * m.ln()).sum();

    // Var(sum_j w_j ln m_j) with d ln m_j = d m_j / m_j and Cov(m) = cov / n.
    let mut var = 0.0;
    for j in 0..g {
        for k in 0..g {
            var += weights[j] * weights[k] * cov[j * g + k] / (n * means[j] * means[k]);
        }
    }

    Ok(AlphaEstimate {
        alpha_hat,
        stderr: var.max(0.0).sqrt(),
        n_paths,
        time_grid: fractions,
        mean_ranges: means,
    })
}
