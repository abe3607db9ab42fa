//! The symmetrization map and the symmetrized polydisk `G^n`.
//!
//! A point of `G^n` is stored in elementary-symmetric coordinates
//! `(σ_1, …, σ_n)`; its fiber is the root multiset of
//! `t^n - σ_1 t^(n-1) + σ_2 t^(n-2) - … + (-1)^n σ_n`.

mod roots;

pub use roots::{RootSolveReport, RootSolver};

#[cfg(test)]
use roots::horner;

use serde::{Deserialize, Serialize};

use crate::mobius::{check_disk, hausdorff, pseudo_hyperbolic, MetricValue};
use crate::{Error, PointMultiset, Result, C64};

/// A point of `C^n` in elementary-symmetric coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnPoint {
    sigma: Vec<C64>,
}

impl GnPoint {
    pub fn new(sigma: Vec<C64>) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::EmptySet);
        }
        if sigma.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { sigma })
    }

    pub fn origin(n: usize) -> Self {
        Self {
            sigma: vec![C64::new(0.0, 0.0); n.max(1)],
        }
    }

    pub fn sigma(&self) -> &[C64] {
        &self.sigma
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// Ascending coefficients of the monic polynomial whose roots are the fiber.
    pub fn monic_coeffs(&self) -> Vec<C64> {
        let n = self.sigma.len();
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        for (j, &s) in self.sigma.iter().enumerate() {
            let j = j + 1;
            coeffs[n - j] = if j % 2 == 0 { s } else { -s };
        }
        coeffs
    }

    /// Membership in `G^n` by the Schur–Cohn test, without extracting roots.
    pub fn in_gn(&self) -> bool {
        all_roots_in_unit_disk(&self.monic_coeffs())
    }
}

impl From<GnPoint> for Vec<C64> {
    fn from(p: GnPoint) -> Self {
        p.sigma
    }
}

/// Elementary symmetric polynomials `(σ_1, …, σ_n)` of `z`.
pub fn symmetrize(z: &[C64]) -> GnPoint {
    let n = z.len();
    // e[j] holds σ_j of the prefix processed so far.
    let mut e = vec![C64::new(0.0, 0.0); n + 1];
    e[0] = C64::new(1.0, 0.0);
    for (k, &x) in z.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let prev = e[j - 1];
            e[j] += x * prev;
        }
    }
    GnPoint {
        sigma: if n == 0 {
            vec![C64::new(0.0, 0.0)]
        } else {
            e.split_off(1)
        },
    }
}

/// The fiber of `p`: roots of its monic polynomial with multiplicities.
pub fn gn_roots(p: &GnPoint) -> Result<RootSolveReport> {
    RootSolver::default().solve(&p.monic_coeffs())
}

/// Minkowski function of `G^n`: the largest root modulus.
pub fn gn_minkowski(p: &GnPoint) -> Result<f64> {
    Ok(gn_roots(p)?.roots.max_modulus())
}

/// Schur–Cohn test: whether every root of the polynomial with ascending
/// coefficients `coeffs` lies in the open unit disk.
///
/// Uses the reduction `p ↦ (conj(a_n) p - a_0 p*) / t`, which keeps the number
/// of roots inside the disk exactly when `|a_0| < |a_n|`.
pub fn all_roots_in_unit_disk(coeffs: &[C64]) -> bool {
    let mut a: Vec<C64> = coeffs.to_vec();
    if a.len() > 1 && a.last().is_some_and(|c| c.norm() == 0.0) {
        // A vanishing leading coefficient means a root at infinity.
        return false;
    }
    while a.len() > 1 {
        let n = a.len() - 1;
        let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(scale > 0.0 && scale.is_finite()) {
            return false;
        }
        for c in a.iter_mut() {
            *c /= scale;
        }
        let (a0, an) = (a[0], a[n]);
        if a0.norm() >= an.norm() {
            return false;
        }
        let next: Vec<C64> = (0..n)
            .map(|k| an.conj() * a[k + 1] - a0 * a[n - 1 - k].conj())
            .collect();
        a = next;
    }
    true
}

/// Fiber of a point required to lie in `G^n`.
fn fiber_in_gn(p: &GnPoint) -> Result<PointMultiset> {
    let report = gn_roots(p)?;
    let gauge = report.roots.max_modulus();
    if report.roots.points().any(|r| check_disk(r).is_err()) {
        return Err(Error::OutsideDomain {
            domain: format!("G^{}", p.dim()),
            gauge,
        });
    }
    Ok(report.roots)
}

fn check_dims(z: &GnPoint, z0: &GnPoint) -> Result<()> {
    if z.dim() != z0.dim() {
        return Err(Error::LengthMismatch {
            expected: z0.dim(),
            got: z.dim(),
        });
    }
    Ok(())
}

/// Hausdorff distance, under the disk's Möbius pseudodistance, between the
/// fibers of `z` and `z0`.
pub fn fiber_distance_h(z: &GnPoint, z0: &GnPoint) -> Result<MetricValue> {
    check_dims(z, z0)?;
    hausdorff(&fiber_in_gn(z)?, &fiber_in_gn(z0)?)
}

/// How fibers enter the products of `h1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberWeighting {
    /// Every root counted with its multiplicity (n factors per product).
    Multiplicity,
    /// Distinct roots only.
    Set,
}

/// `max(max_i ∏_j M(z_i, a_j), max_j ∏_i M(z_i, a_j))` over the fibers
/// `{z_i}` of `z` and `{a_j}` of `z0`, roots repeated by multiplicity.
pub fn h1(z: &GnPoint, z0: &GnPoint) -> Result<MetricValue> {
    h1_with(z, z0, FiberWeighting::Multiplicity)
}

pub fn h1_with(z: &GnPoint, z0: &GnPoint, weighting: FiberWeighting) -> Result<MetricValue> {
    check_dims(z, z0)?;
    let (fz, fa) = (fiber_in_gn(z)?, fiber_in_gn(z0)?);
    let list = |m: &PointMultiset| match weighting {
        FiberWeighting::Multiplicity => m.expanded(),
        FiberWeighting::Set => m.points().collect(),
    };
    MetricValue::new(h1_from_fibers(&list(&fz), &list(&fa)))
}

pub(crate) fn h1_from_fibers(zs: &[C64], als: &[C64]) -> f64 {
    let one_side = |xs: &[C64], ys: &[C64]| {
        xs.iter()
            .map(|&x| ys.iter().map(|&y| pseudo_hyperbolic(x, y)).product::<f64>())
            .fold(0.0, f64::max)
    };
    one_side(zs, als).max(one_side(als, zs))
}

/// Symmetrization of the `n` n-th roots of `x`: `(0, …, 0, (-1)^(n-1) x)`.
pub fn nth_root_map(x: C64, n: usize) -> Result<GnPoint> {
    check_disk(x)?;
    if n == 0 {
        return Err(Error::InvalidConfig("n-th root map needs n >= 1".into()));
    }
    let mut sigma = vec![C64::new(0.0, 0.0); n];
    sigma[n - 1] = if n % 2 == 1 { x } else { -x };
    Ok(GnPoint { sigma })
}

/// The `n` n-th roots of `x`.
pub fn nth_roots(x: C64, n: usize) -> Vec<C64> {
    let (r, theta) = x.to_polar();
    let modulus = r.powf(1.0 / n as f64);
    (0..n)
        .map(|k| {
            C64::from_polar(
                modulus,
                (theta + std::f64::consts::TAU * k as f64) / n as f64,
            )
        })
        .collect()
}
