use rand::Rng;

use crate::harness::{run_trials, MapDescriptor, Report, SuiteConfig, Trial, SAMPLE_RADIUS};
use crate::mobius::{mobius_disk, DiskAutomorphism};
use crate::rng::{in_disk, unimodular};
use crate::sympoly::{fiber_distance_h, h1, nth_roots, symmetrize};
use crate::{Result, C64};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `x ↦ π(g(ζ_1), …, g(ζ_n))` with `ζ_j` the n-th roots of `x` and `g` a disk
/// automorphism attains `H(f(x), f(0))^n = |x|` on a spiral grid.
///
/// Trial `t` uses `n = 2 + t mod (cfg.n - 1)`; the first sweep over `n` uses
/// the identity automorphism, later ones random automorphisms.
pub fn run_equality_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_trials(cfg, equality_trial)
}

fn equality_trial(t: &mut Trial<'_>) -> Result<()> {
    let span = t.cfg.n.saturating_sub(1).max(1) as u64;
    let n = if t.cfg.n == 1 { 1 } else { 2 + (t.index % span) as usize };
    let g = if t.index < span {
        DiskAutomorphism::identity()
    } else {
        let a = in_disk(&mut t.rng, 0.9);
        DiskAutomorphism::new(unimodular(&mut t.rng), a)?
    };
    t.set_map(MapDescriptor::named("nth-root-automorphism", n));
    let f = |x: C64| {
        let pts: Vec<C64> = nth_roots(x, n).into_iter().map(|z| g.apply(z)).collect();
        symmetrize(&pts)
    };
    let base = f(C64::new(0.0, 0.0));
    let grid = t.cfg.grid;
    let phase: f64 = t.rng.random::<f64>() * std::f64::consts::TAU;
    for k in 0..grid {
        let modulus = if grid > 1 {
            SAMPLE_RADIUS * k as f64 / (grid - 1) as f64
        } else {
            SAMPLE_RADIUS
        };
        let x = C64::from_polar(modulus, phase + GOLDEN_ANGLE * k as f64);
        let z = f(x);
        let m = mobius_disk(x, C64::new(0.0, 0.0))?.get();
        let hn = fiber_distance_h(&z, &base)?.get().powi(n as i32);
        t.agreement("hn_equals_m", k, &[x], hn, m, t.cfg.tol);
        t.agreement("h1_equals_m", k, &[x], h1(&z, &base)?.get(), m, t.cfg.tol);
    }
    Ok(())
}
