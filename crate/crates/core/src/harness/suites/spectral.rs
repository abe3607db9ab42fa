use rand::{Rng, RngCore};

use super::sub_mean_excess;
use crate::harness::{run_trials, MapDescriptor, Report, SuiteConfig, Trial};
use crate::holomaps::{random_map, HoloMap, MapKind};
use crate::mobius::{hausdorff_euclidean, mobius_disk, DiskPoint};
use crate::rng::in_disk;
use crate::spectralball::{
    bharali_lhs, blaschke_eval, spectral_radius, spectrum, tilde_map_with, SpectrumData, SquareMatrix,
};
use crate::{Error, Result, C64};

/// Sample pairs whose spectra have two eigenvalues closer than this are
/// redrawn: minimal-polynomial multiplicities are not resolvable there.
const MIN_GAP: f64 = 0.05;
const MAX_REDRAWS: usize = 200;
const ANNIHILATION_TOL: f64 = 1e-8;
const SPECTRAL_MAPPING_TOL: f64 = 1e-6;

fn matrix_at(f: &HoloMap, x: C64) -> Result<(SquareMatrix, SpectrumData)> {
    let a = SquareMatrix::new(f.target().order(), f.eval(DiskPoint::new(x)?))?;
    let s = spectrum(&a)?;
    Ok((a, s))
}

fn separated(s: &SpectrumData) -> bool {
    !s.ill_conditioned && s.min_gap() >= MIN_GAP
}

/// For random `f: 𝔻 → Ω_n`: the spectral Schwarz inequality between `f(z)` and
/// `f(w)`, the annihilating self-map `Ã_A` with `A = f(z)` (kills `A`, acts as
/// the minimal Blaschke product on spectra), and sub-mean values of `log ρ∘f`.
pub fn run_spectral_suite(cfg: &SuiteConfig) -> Result<Report> {
    run_trials(cfg, spectral_trial)
}

fn spectral_trial(t: &mut Trial<'_>) -> Result<()> {
    let n = t.pick(1, t.cfg.n);
    let degree = t.pick(1, t.cfg.degree);
    let seed = t.rng.next_u64();
    t.set_map(MapDescriptor {
        kind: MapKind::MatrixPoly.to_string(),
        seed: Some(seed),
        degree,
        n,
    });
    let f = random_map(seed, MapKind::MatrixPoly, n, degree, false)?;
    let tol = t.cfg.tol;
    for sample in 0..t.cfg.grid {
        let mut draws = 0;
        let (z, w, (a, sa), (b, sb)) = loop {
            let (z, w) = (t.sample_point(), t.sample_point());
            let (ma, mb) = (matrix_at(&f, z)?, matrix_at(&f, w)?);
            if separated(&ma.1) && separated(&mb.1) {
                break (z, w, ma, mb);
            }
            draws += 1;
            if draws >= MAX_REDRAWS {
                return Err(Error::SamplingExhausted(draws));
            }
        };
        let m = mobius_disk(z, w)?.get();
        t.inequality("bharali", sample, &[z, w], bharali_lhs(&sa, &sb)?, m, tol);

        let killed = tilde_map_with(&sa, &a)?.max_abs();
        t.agreement("annihilation", sample, &[z], killed, 0.0, ANNIHILATION_TOL);

        let image = spectrum(&tilde_map_with(&sa, &b)?)?.eigenvalues.expanded();
        let expected = sb
            .eigenvalues
            .expanded()
            .into_iter()
            .map(|mu| blaschke_eval(&sa, mu))
            .collect::<Result<Vec<_>>>()?;
        let d = hausdorff_euclidean(&image, &expected)?;
        t.agreement("spectral_mapping", sample, &[z, w], d, 0.0, SPECTRAL_MAPPING_TOL);
    }

    let c = in_disk(&mut t.rng, 0.5);
    let r = t.rng.random_range(0.05..(0.95 - c.norm()));
    let u = |x: C64| -> Result<f64> {
        let a = SquareMatrix::new(n, f.eval(DiskPoint::new(x)?))?;
        Ok(spectral_radius(&a)?.ln())
    };
    let center = u(c)?;
    if center.is_finite() {
        let (excess, _) = sub_mean_excess(&u, c, r)?;
        t.inequality("log_radius_submean", 0, &[c, C64::new(r, 0.0)], center, center + excess, tol);
    }
    Ok(())
}
