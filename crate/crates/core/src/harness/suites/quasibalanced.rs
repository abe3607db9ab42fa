use rand::{Rng, RngCore};

use crate::harness::{run_trials, MapDescriptor, Report, SuiteConfig, Trial, SAMPLE_RADIUS};
use crate::holomaps::{random_map, MapKind};
use crate::mobius::DiskPoint;
use crate::quasibalanced::{
    extremal_sandwich, gauge_bisection, nth_root_bound_margin, schwarz_margin, DomainMap, WeightedDomain,
};
use crate::rng::in_disk;
use crate::spectralball::{psi_from_char_poly, spectral_radius, SquareMatrix};
use crate::sympoly::{gn_minkowski, nth_root_map, symmetrize};
use crate::{Result, C64};

const BISECTION_TOL: f64 = 1e-8;

type BoxedMap = Box<dyn Fn(&[C64]) -> Result<Vec<C64>> + Sync>;

/// One source/target pairing of the quasi-balanced suite.
struct Setup {
    source: WeightedDomain,
    target: WeightedDomain,
    map: BoxedMap,
    sampler: fn(&mut Trial<'_>, usize) -> Result<Vec<C64>>,
}

fn disk_sample(t: &mut Trial<'_>, _: usize) -> Result<Vec<C64>> {
    Ok(vec![t.sample_point()])
}

fn polydisk_sample(t: &mut Trial<'_>, n: usize) -> Result<Vec<C64>> {
    Ok((0..n).map(|_| t.sample_point()).collect())
}

fn ball_sample(t: &mut Trial<'_>, n: usize) -> Result<Vec<C64>> {
    let v: Vec<C64> = (0..n).map(|_| in_disk(&mut t.rng, 1.0)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let r = SAMPLE_RADIUS * t.rng.random::<f64>();
    Ok(v.into_iter().map(|c| c * (r / norm.max(f64::MIN_POSITIVE))).collect())
}

/// Random `n × n` matrix rescaled to a spectral radius uniform in `[0, 0.95]`.
fn spectral_sample(t: &mut Trial<'_>, dim: usize) -> Result<Vec<C64>> {
    let n = (dim as f64).sqrt().round() as usize;
    let a = SquareMatrix::new(n, (0..dim).map(|_| in_disk(&mut t.rng, 1.0)).collect())?;
    let rho = spectral_radius(&a)?;
    let r = SAMPLE_RADIUS * t.rng.random::<f64>();
    Ok(a.scale(C64::new(r / rho.max(f64::MIN_POSITIVE), 0.0)).entries().to_vec())
}

fn setup(t: &mut Trial<'_>, n: usize, degree: usize) -> Result<Setup> {
    let case = t.index % 5;
    let gn = WeightedDomain::symmetrized_polydisk(n);
    let symmetrized: BoxedMap = Box::new(|z: &[C64]| Ok(symmetrize(z).sigma().to_vec()));
    Ok(match case {
        0 | 1 => {
            let kind = match (case, (t.index / 5) % 2) {
                (1, _) => MapKind::MatrixPoly,
                (_, 0) => MapKind::PolyCoords,
                _ => MapKind::LiftedBlaschke,
            };
            let seed = t.rng.next_u64();
            t.set_map(MapDescriptor {
                kind: kind.to_string(),
                seed: Some(seed),
                degree,
                n,
            });
            let f = random_map(seed, kind, n, degree, true)?;
            Setup {
                source: WeightedDomain::polydisk(1),
                target: f.target().domain(),
                map: Box::new(move |z: &[C64]| f.apply(z)),
                sampler: disk_sample,
            }
        }
        2 => {
            t.set_map(MapDescriptor::named("psi", n));
            Setup {
                source: WeightedDomain::spectral_ball(n),
                target: gn,
                map: Box::new(move |z: &[C64]| Ok(psi_from_char_poly(&SquareMatrix::new(n, z.to_vec())?).sigma().to_vec())),
                sampler: spectral_sample,
            }
        }
        3 => {
            t.set_map(MapDescriptor::named("symmetrize", n));
            Setup {
                source: WeightedDomain::polydisk(n),
                target: gn,
                map: symmetrized,
                sampler: polydisk_sample,
            }
        }
        _ => {
            t.set_map(MapDescriptor::named("symmetrize", n));
            Setup {
                source: WeightedDomain::ball(n),
                target: gn,
                map: symmetrized,
                sampler: ball_sample,
            }
        }
    })
}

/// Schwarz margins `h_{D1}(z) - h_{D2}(f(z))^p` for origin-preserving maps
/// between built-in domains, plus the gauge sandwich and bisection checks.
///
/// Trials cycle through: random maps `𝔻 → G^n`, random maps `𝔻 → Ω_n`,
/// `Ψ_n: Ω_n → G^n`, and `π: 𝔻^n → G^n` and `π: B_n → G^n`.
pub fn run_quasibalanced_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_trials(cfg, quasibalanced_trial)
}

fn quasibalanced_trial(t: &mut Trial<'_>) -> Result<()> {
    let n = t.pick(1, t.cfg.n);
    let degree = t.pick(1, t.cfg.degree);
    let s = setup(t, n, degree)?;
    let tol = t.cfg.tol;
    let p = s.target.highest_weight() as i32;
    for sample in 0..t.cfg.grid {
        let z = (s.sampler)(t, s.source.dim())?;
        let w = s.map.apply(&z)?;
        let source_gauge = s.source.gauge(&z)?;
        let margin = schwarz_margin(&s.map, &s.source, &s.target, &z)?;
        t.inequality("schwarz", sample, &z, source_gauge - margin, source_gauge, tol);

        let bounds = extremal_sandwich(&s.target, &w)?;
        t.inequality("sandwich_order", sample, &z, bounds.lower, bounds.upper, 0.0);
        t.agreement("sandwich_power", sample, &z, bounds.lower, bounds.upper.powi(p), 0.0);
        let balanced = extremal_sandwich(&s.source, &z)?;
        t.agreement("sandwich_balanced", sample, &z, balanced.lower, balanced.upper, 0.0);

        t.agreement("bisection_source", sample, &z, gauge_bisection(&s.source, &z)?, source_gauge, BISECTION_TOL);
        t.agreement("bisection_target", sample, &z, gauge_bisection(&s.target, &w)?, bounds.upper, BISECTION_TOL);

        if t.index % 5 == 3 {
            let id = |x: &[C64]| Ok(x.to_vec());
            let m = schwarz_margin(&id, &s.source, &s.source, &z)?;
            t.agreement("identity_margin", sample, &z, m, 0.0, tol);
        }
    }
    Ok(())
}

/// `max |λ_j| <= |z|^{1/n}` for `f(z) = π(λ_1, …, λ_n)`, `f(0) = 0`.
pub fn run_nthroot_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_trials(cfg, nthroot_trial)
}

fn nthroot_trial(t: &mut Trial<'_>) -> Result<()> {
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
    let f = random_map(seed, kind, n, degree, true)?;
    let tol = t.cfg.tol;
    for sample in 0..t.cfg.grid {
        let z = t.sample_point();
        let dz = DiskPoint::new(z)?;
        let bound = z.norm().powf(1.0 / n as f64);
        let margin = nth_root_bound_margin(&f, dz)?;
        t.inequality("root_bound", sample, &[z], bound - margin, bound, tol);
        let largest = gn_minkowski(&nth_root_map(z, n)?)?;
        t.agreement("root_map_equality", sample, &[z], largest, bound, tol);
    }
    Ok(())
}
