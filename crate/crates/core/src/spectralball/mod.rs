//! The spectral unit ball `Ω_n`: matrices whose spectrum lies in the disk.
//!
//! Eigenvalues come from the Faddeev–LeVerrier characteristic polynomial and
//! the same root solver used for `G^n`; minimal-polynomial multiplicities come
//! from rank stabilisation of `(A - λI)^k`.

mod matrix;

pub use matrix::SquareMatrix;

use serde::{Deserialize, Serialize};

use crate::mobius::{check_disk, pseudo_hyperbolic, MetricValue};
use crate::sympoly::{all_roots_in_unit_disk, symmetrize, GnPoint, RootSolver};
use crate::{Error, PointMultiset, Result, C64};

/// Eigenvalues with algebraic multiplicities, plus the multiplicity of each
/// eigenvalue as a root of the minimal polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumData {
    pub eigenvalues: PointMultiset,
    /// Aligned with `eigenvalues.entries()`.
    pub minimal_multiplicities: Vec<usize>,
    /// Set when a rank test disagreed with the clustered algebraic multiplicity.
    pub ill_conditioned: bool,
}

impl SpectrumData {
    /// `(λ, algebraic multiplicity, minimal multiplicity)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (C64, usize, usize)> + '_ {
        self.eigenvalues
            .entries()
            .iter()
            .zip(&self.minimal_multiplicities)
            .map(|(&(l, a), &m)| (l, a, m))
    }

    pub fn radius(&self) -> f64 {
        self.eigenvalues.max_modulus()
    }

    /// Smallest distance between distinct eigenvalues (infinite for one).
    pub fn min_gap(&self) -> f64 {
        let pts: Vec<C64> = self.eigenvalues.points().collect();
        let mut gap = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                gap = gap.min((pts[i] - pts[j]).norm());
            }
        }
        gap
    }

    fn check_in_disk(&self) -> Result<()> {
        match self.eigenvalues.points().find(|&l| check_disk(l).is_err()) {
            Some(l) => Err(Error::SpectrumOutsideDisk(l)),
            None => Ok(()),
        }
    }
}

/// Ascending coefficients of the monic characteristic polynomial
/// `det(tI - A)`, by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &SquareMatrix) -> Vec<C64> {
    let n = a.order();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut m = SquareMatrix::zeros(n);
    for k in 1..=n {
        m = &(a * &m) + &SquareMatrix::scalar(n, coeffs[n - k + 1]);
        coeffs[n - k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

/// Membership in `Ω_n` by the Schur–Cohn test on the characteristic polynomial.
pub fn in_spectral_ball(a: &SquareMatrix) -> bool {
    all_roots_in_unit_disk(&char_poly(a))
}

pub fn spectrum(a: &SquareMatrix) -> Result<SpectrumData> {
    let report = RootSolver::default().solve(&char_poly(a))?;
    let eigenvalues = report.roots;
    let n = a.order();
    let mut minimal_multiplicities = Vec::with_capacity(eigenvalues.distinct());
    let mut ill_conditioned = false;
    for &(lambda, alg) in eigenvalues.entries() {
        let shifted = a.shift(lambda);
        let mut power = shifted.clone();
        let mut rank = power.rank();
        let mut m = alg;
        for k in 1..=alg {
            let next = &power * &shifted;
            let next_rank = next.rank();
            if next_rank == rank {
                m = k;
                break;
            }
            power = next;
            rank = next_rank;
        }
        if n - rank != alg {
            ill_conditioned = true;
            log::warn!(
                "eigenvalue {lambda}: kernel dimension {} disagrees with algebraic multiplicity {alg}",
                n - rank
            );
        }
        minimal_multiplicities.push(m);
    }
    Ok(SpectrumData {
        eigenvalues,
        minimal_multiplicities,
        ill_conditioned,
    })
}

/// Largest eigenvalue modulus; the Minkowski function of `Ω_n`.
pub fn spectral_radius(a: &SquareMatrix) -> Result<f64> {
    Ok(RootSolver::default().solve(&char_poly(a))?.roots.max_modulus())
}

/// `Ψ_n(A)`: the symmetrization of the spectrum, with algebraic multiplicity.
pub fn psi(a: &SquareMatrix) -> Result<GnPoint> {
    let spec = spectrum(a)?;
    let via_roots = symmetrize(&spec.eigenvalues.expanded());
    let via_coeffs = psi_from_char_poly(a);
    let scale = 1.0 + via_coeffs.sigma().iter().map(|s| s.norm()).fold(0.0, f64::max);
    let drift = via_roots
        .sigma()
        .iter()
        .zip(via_coeffs.sigma())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if drift > 1e-8 * scale {
        log::warn!("psi: eigenvalue and coefficient routes differ by {drift:e}");
    }
    Ok(via_roots)
}

/// `Ψ_n(A)` read off the characteristic polynomial: `σ_j = (-1)^j c_(n-j)`.
pub fn psi_from_char_poly(a: &SquareMatrix) -> GnPoint {
    let coeffs = char_poly(a);
    let n = a.order();
    let sigma = (1..=n)
        .map(|j| if j % 2 == 0 { coeffs[n - j] } else { -coeffs[n - j] })
        .collect();
    GnPoint::new(sigma).expect("characteristic polynomial of a finite matrix is finite")
}

/// Minimal Blaschke product of `A` at `t`.
pub fn minimal_blaschke_eval(a: &SquareMatrix, t: C64) -> Result<C64> {
    blaschke_eval(&spectrum(a)?, t)
}

/// `∏ ((t - λ) / (1 - conj(λ) t))^m(λ)` over the distinct eigenvalues.
pub fn blaschke_eval(spec: &SpectrumData, t: C64) -> Result<C64> {
    spec.check_in_disk()?;
    check_disk(t)?;
    let one = C64::new(1.0, 0.0);
    Ok(spec
        .iter()
        .map(|(l, _, m)| ((t - l) / (one - l.conj() * t)).powu(m as u32))
        .product())
}

/// The self-map of `Ω_n` attached to `A`, evaluated at `B`:
/// `∏_λ (I - conj(λ) B)^(-m(λ)) (B - λ I)^m(λ)`, factors multiplied left to
/// right in ascending eigenvalue order.
pub fn tilde_map(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    tilde_map_with(&spectrum(a)?, b)
}

pub fn tilde_map_with(spec: &SpectrumData, b: &SquareMatrix) -> Result<SquareMatrix> {
    spec.check_in_disk()?;
    let n = b.order();
    if n != spec.eigenvalues.total() {
        return Err(Error::LengthMismatch {
            expected: spec.eigenvalues.total(),
            got: n,
        });
    }
    if !in_spectral_ball(b) {
        return Err(Error::OutsideDomain {
            domain: format!("spectral unit ball of order {n}"),
            gauge: f64::NAN,
        });
    }
    let identity = SquareMatrix::identity(n);
    let mut out = identity.clone();
    for (l, _, m) in spec.iter() {
        let denom = (&identity - &b.scale(l.conj())).inverse()?;
        let factor = &denom.pow(m) * &b.shift(l).pow(m);
        out = &out * &factor;
    }
    Ok(out)
}

/// Left-hand side of the spectral Schwarz inequality for spectra `sz` of
/// `f(z)` and `sw` of `f(w)`.
pub fn bharali_lhs(sz: &SpectrumData, sw: &SpectrumData) -> Result<f64> {
    sz.check_in_disk()?;
    sw.check_in_disk()?;
    let first = sw
        .iter()
        .map(|(l, _, _)| {
            sz.iter()
                .map(|(mu, _, m)| pseudo_hyperbolic(mu, l).powi(m as i32))
                .product::<f64>()
        })
        .fold(0.0, f64::max);
    let second = sz
        .iter()
        .map(|(mu, _, _)| {
            sw.iter()
                .map(|(l, _, m)| pseudo_hyperbolic(mu, l).powi(m as i32))
                .product::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(first.max(second))
}

/// `M(z, w)` minus [`bharali_lhs`]; non-negative for holomorphic `f`.
pub fn bharali_margin(sz: &SpectrumData, sw: &SpectrumData, m: MetricValue) -> Result<f64> {
    Ok(m.get() - bharali_lhs(sz, sw)?)
}
