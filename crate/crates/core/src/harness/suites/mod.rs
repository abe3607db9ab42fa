mod equality;
mod main_theorem;
mod metrics;
mod quasibalanced;
mod spectral;

use std::f64::consts::TAU;

pub use equality::run_equality_suite;
pub use main_theorem::run_main_suite;
pub use metrics::run_metrics_suite;
pub use quasibalanced::{run_nthroot_suite, run_quasibalanced_suite};
pub use spectral::run_spectral_suite;

use crate::{Result, C64};

/// `mean_θ u(c + r e^{iθ}) - u(c)` over `samples` equispaced angles.
fn circle_excess<F>(u: &F, c: C64, r: f64, samples: usize) -> Result<f64>
where
    F: Fn(C64) -> Result<f64>,
{
    let center = u(c)?;
    let mut sum = 0.0;
    for k in 0..samples {
        sum += u(c + C64::from_polar(r, TAU * k as f64 / samples as f64))?;
    }
    Ok(sum / samples as f64 - center)
}

/// Sub-mean-value excess on a circle, with the quadrature refined from 256 to
/// 1024 nodes when the coarse value is close to or below zero. Returns the
/// excess and whether the two quadratures agreed to `1e-8`.
fn sub_mean_excess<F>(u: &F, c: C64, r: f64) -> Result<(f64, bool)>
where
    F: Fn(C64) -> Result<f64>,
{
    let coarse = circle_excess(u, c, r, 256)?;
    if coarse > 1e-4 {
        return Ok((coarse, true));
    }
    let fine = circle_excess(u, c, r, 1024)?;
    Ok((fine, (fine - coarse).abs() <= 1e-8))
}
