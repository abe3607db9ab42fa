use rand::RngCore;

use crate::harness::{run_trials, MapDescriptor, Report, SuiteConfig, Trial};
use crate::holomaps::{random_map, MapKind};
use crate::mobius::{hausdorff_euclidean, mobius_disk, DiskPoint};
use crate::sympoly::{fiber_distance_h, gn_roots, h1, GnPoint};
use crate::Result;

/// `h^n <= h1` holds up to rounding only.
const HH1_TOL: f64 = 1e-10;
const LIFT_TOL: f64 = 1e-7;

/// For random `f: 𝔻 → G^n` and point pairs `(x, x0)`: `H(f(x), f(x0))^n <= M(x, x0)`,
/// the sharper `h1(f(x), f(x0)) <= M(x, x0)`, and `H^n <= h1`.
pub fn run_main_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_trials(cfg, main_trial)
}

fn main_trial(t: &mut Trial<'_>) -> Result<()> {
    let n = t.pick(1, t.cfg.n);
    let degree = t.pick(1, t.cfg.degree);
    let kind = if t.index.is_multiple_of(2) {
        MapKind::PolyCoords
    } else {
        MapKind::LiftedBlaschke
    };
    let seed = t.rng.next_u64();
    t.set_map(MapDescriptor {
        kind: kind.to_string(),
        seed: Some(seed),
        degree,
        n,
    });
    let f = random_map(seed, kind, n, degree, false)?;
    for sample in 0..t.cfg.grid {
        let (x, x0) = (t.sample_point(), t.sample_point());
        let (dx, dx0) = (DiskPoint::new(x)?, DiskPoint::new(x0)?);
        let (z, z0) = (GnPoint::new(f.eval(dx))?, GnPoint::new(f.eval(dx0))?);
        let m = mobius_disk(x, x0)?.get();
        let hn = fiber_distance_h(&z, &z0)?.get().powi(n as i32);
        let h1v = h1(&z, &z0)?.get();
        let tol = t.cfg.tol;
        t.inequality("hn_le_m", sample, &[x, x0], hn, m, tol);
        t.inequality("h1_le_m", sample, &[x, x0], h1v, m, tol);
        t.inequality("hn_le_h1", sample, &[x, x0], hn, h1v, HH1_TOL);
        if let Some(lifted) = f.lifted_values(dx) {
            let fiber = gn_roots(&z)?.roots.expanded();
            let d = hausdorff_euclidean(&fiber, &lifted)?;
            t.agreement("lifted_fiber", sample, &[x], d, 0.0, LIFT_TOL);
        }
    }
    Ok(())
}
