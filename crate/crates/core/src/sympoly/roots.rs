//! Simultaneous root extraction for complex polynomials.
//!
//! Aberth–Ehrlich iteration from a circle of starting points, a Newton polish
//! of isolated roots, and multiplicity recovery. Multiple roots only converge
//! to a cloud of radius `~eps^(1/k)`, so clusters are found by single linkage
//! on a ladder of radii and accepted only when the refined cluster center is a
//! numerical root of multiplicity `k` (Taylor coefficients below `k` vanish to
//! rounding level). Below the finest rung, points are merged unconditionally.
//! When a multiple root is found, the centers are refitted to the coefficients
//! with the multiplicities held fixed.

use serde::{Deserialize, Serialize};

use crate::multiset::single_linkage;
use crate::{Error, PointMultiset, Result, C64};

/// Outcome of a successful root solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSolveReport {
    pub roots: PointMultiset,
    /// `max |p(root)|` over the representatives, on the monic polynomial.
    pub residual: f64,
    /// Aberth sweeps used by the accepted attempt.
    pub iterations: usize,
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolver {
    /// Per-root absolute update below which a root is frozen.
    pub update_tol: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    /// Unconditional merge radius, relative to `1 + max |root|`.
    pub cluster_factor: f64,
    /// Accepted residual, relative to `sum |a_k| |r|^k` at the root.
    pub residual_tol: f64,
}

impl Default for RootSolver {
    fn default() -> Self {
        Self {
            update_tol: 1e-12,
            max_iterations: 200,
            restarts: 3,
            cluster_factor: 1e-6,
            residual_tol: 1e-10,
        }
    }
}

/// Candidate merge radii, relative to `1 + max |root|`, coarse to fine.
const LADDER: [f64; 7] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5];

/// Slack applied to rounding-level bounds.
const SLACK: f64 = 1e3;

/// `p(z)`, `p'(z)` and `sum |a_k| |z|^k` for ascending coefficients.
pub(crate) fn horner(coeffs: &[C64], z: C64) -> (C64, C64, f64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let r = z.norm();
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        bound = bound * r + a.norm();
    }
    (p, dp, bound)
}

/// Taylor coefficients `p^(j)(c) / j!`, `j = 0..=n`, by repeated synthetic division.
pub(crate) fn taylor_shift(coeffs: &[C64], c: C64) -> Vec<C64> {
    let mut b = coeffs.to_vec();
    let n = b.len() - 1;
    for j in 0..n {
        for i in (j..n).rev() {
            let next = b[i + 1];
            b[i] += c * next;
        }
    }
    b
}

fn taylor_bounds(coeffs: &[C64], r: f64) -> Vec<f64> {
    let mut b: Vec<f64> = coeffs.iter().map(|a| a.norm()).collect();
    let n = b.len() - 1;
    for j in 0..n {
        for i in (j..n).rev() {
            let next = b[i + 1];
            b[i] += r * next;
        }
    }
    b
}

impl RootSolver {
    /// Roots of the polynomial with ascending coefficients `coeffs`.
    ///
    /// The leading coefficient must be non-zero; the polynomial is normalised
    /// to be monic before solving.
    pub fn solve(&self, coeffs: &[C64]) -> Result<RootSolveReport> {
        if coeffs.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        let lead = *coeffs.last().ok_or(Error::EmptySet)?;
        if lead == C64::new(0.0, 0.0) {
            return Err(Error::InvalidConfig(
                "polynomial has a zero leading coefficient".into(),
            ));
        }
        let monic: Vec<C64> = coeffs.iter().map(|&a| a / lead).collect();
        let degree = monic.len() - 1;
        if degree == 0 {
            return Ok(RootSolveReport {
                roots: PointMultiset::from_entries(vec![]),
                residual: 0.0,
                iterations: 0,
            });
        }

        // Exact roots at the origin are split off before iterating.
        let zeros = monic.iter().take_while(|a| **a == C64::new(0.0, 0.0)).count();
        let reduced = &monic[zeros..];

        let mut iterations = 0;
        let mut roots = Vec::with_capacity(degree);
        if reduced.len() > 1 {
            let mut last_residual = f64::NAN;
            let mut found = None;
            for restart in 0..=self.restarts {
                let (candidate, its, converged) = self.aberth(reduced, restart);
                iterations = its;
                if !converged {
                    last_residual = max_relative_residual(reduced, &candidate);
                    continue;
                }
                found = Some(candidate);
                break;
            }
            match found {
                Some(mut r) => {
                    self.polish(reduced, &mut r);
                    roots.extend(r);
                }
                None => {
                    return Err(Error::NoConvergence {
                        iterations,
                        restarts: self.restarts,
                        residual: last_residual,
                    })
                }
            }
        }
        roots.extend(std::iter::repeat_n(C64::new(0.0, 0.0), zeros));

        let mut clustered = self.cluster(&monic, &roots);
        if clustered.entries().iter().any(|e| e.1 > 1) {
            clustered = refine_structure(&monic, clustered);
        }
        let mut residual = 0.0f64;
        let mut relative = 0.0f64;
        for p in clustered.points() {
            let (v, _, bound) = horner(&monic, p);
            residual = residual.max(v.norm());
            relative = relative.max(v.norm() / bound.max(f64::MIN_POSITIVE));
        }
        if !(relative <= self.residual_tol) {
            return Err(Error::NoConvergence {
                iterations,
                restarts: self.restarts,
                residual,
            });
        }
        Ok(RootSolveReport {
            roots: clustered,
            residual,
            iterations,
        })
    }

    /// One Aberth run (Gauss–Seidel sweeps). Returns the iterates, the sweep
    /// count and whether every root met a stopping test.
    fn aberth(&self, monic: &[C64], restart: usize) -> (Vec<C64>, usize, bool) {
        let n = monic.len() - 1;
        let radius = 1.0
            + monic[..n]
                .iter()
                .map(|a| a.norm())
                .fold(0.0, f64::max);
        let offset = 0.4 + restart as f64 * std::f64::consts::PI / (2.0 * n as f64 + 1.0);
        let mut z: Vec<C64> = (0..n)
            .map(|k| {
                C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + offset)
            })
            .collect();
        let mut done = vec![false; n];
        let floor = 16.0 * n as f64 * f64::EPSILON;

        for sweep in 1..=self.max_iterations {
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let (p, dp, bound) = horner(monic, z[i]);
                if p.norm() <= floor * bound {
                    done[i] = true;
                    continue;
                }
                let s: C64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let denom = dp / p - s;
                let step = if denom.norm() > 0.0 {
                    denom.inv()
                } else {
                    C64::new(self.update_tol, self.update_tol)
                };
                z[i] -= step;
                if !(z[i].re.is_finite() && z[i].im.is_finite()) {
                    return (z, sweep, false);
                }
                if step.norm() < self.update_tol * z[i].norm().max(1.0) {
                    done[i] = true;
                }
            }
            if done.iter().all(|&d| d) {
                return (z, sweep, true);
            }
        }
        (z, self.max_iterations, false)
    }

    /// Newton polish of isolated roots; a step is kept only if it lowers `|p|`.
    fn polish(&self, monic: &[C64], roots: &mut [C64]) {
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        for i in 0..roots.len() {
            let isolated = (0..roots.len())
                .filter(|&j| j != i)
                .all(|j| (roots[i] - roots[j]).norm() > 1e-3 * scale);
            if !isolated {
                continue;
            }
            for _ in 0..3 {
                let (p, dp, _) = horner(monic, roots[i]);
                if p.norm() == 0.0 || dp.norm() == 0.0 {
                    break;
                }
                let next = roots[i] - p / dp;
                if horner(monic, next).0.norm() < p.norm() {
                    roots[i] = next;
                } else {
                    break;
                }
            }
        }
    }

    fn cluster(&self, monic: &[C64], roots: &[C64]) -> PointMultiset {
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let all: Vec<usize> = (0..roots.len()).collect();
        let mut entries = Vec::new();
        self.cluster_level(monic, roots, &all, 0, scale, &mut entries);
        PointMultiset::from_entries(entries)
    }

    fn cluster_level(
        &self,
        monic: &[C64],
        roots: &[C64],
        members: &[usize],
        level: usize,
        scale: f64,
        out: &mut Vec<(C64, usize)>,
    ) {
        let pts: Vec<C64> = members.iter().map(|&i| roots[i]).collect();
        if level == LADDER.len() {
            for group in single_linkage(&pts, self.cluster_factor * scale) {
                if group.len() == 1 {
                    out.push((pts[group[0]], 1));
                    continue;
                }
                let centroid = group.iter().map(|&g| pts[g]).sum::<C64>() / group.len() as f64;
                let radius = self.cluster_factor * scale;
                let center = refine_center(monic, centroid, group.len(), radius).unwrap_or(centroid);
                out.push((center, group.len()));
            }
            return;
        }
        let radius = LADDER[level] * scale;
        for group in single_linkage(&pts, radius) {
            if group.len() == 1 {
                out.push((pts[group[0]], 1));
                continue;
            }
            let centroid = group.iter().map(|&g| pts[g]).sum::<C64>() / group.len() as f64;
            if let Some(center) = refine_center(monic, centroid, group.len(), radius) {
                if is_multiple_root(monic, center, group.len()) {
                    out.push((center, group.len()));
                    continue;
                }
            }
            let sub: Vec<usize> = group.iter().map(|&g| members[g]).collect();
            self.cluster_level(monic, roots, &sub, level + 1, scale, out);
        }
    }
}

/// Newton iteration on `p^(k-1)`, whose simple root is a `k`-fold root of `p`.
/// Gives up if the center wanders further than `radius` from the start.
fn refine_center(monic: &[C64], start: C64, k: usize, radius: f64) -> Option<C64> {
    let mut c = start;
    for _ in 0..16 {
        let t = taylor_shift(monic, c);
        let lead = t[k] * k as f64;
        if lead.norm() == 0.0 {
            break;
        }
        let step = t[k - 1] / lead;
        c -= step;
        if (c - start).norm() > radius || !(c.re.is_finite() && c.im.is_finite()) {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + c.norm()) {
            break;
        }
    }
    Some(c)
}

/// Gauss–Newton on the cluster centers with the multiplicities held fixed.
///
/// A simple root next to a `k`-fold cluster at distance `d` has condition
/// `~1/d^k` as a root of `p`, but only `~1` as a parameter of the factored
/// form, so fitting the factored form to the coefficients recovers it.
fn refine_structure(monic: &[C64], found: PointMultiset) -> PointMultiset {
    let entries = found.entries().to_vec();
    let mults: Vec<usize> = entries.iter().map(|e| e.1).collect();
    let mut centers: Vec<C64> = entries.iter().map(|e| e.0).collect();
    let scale = 1.0 + centers.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let max_shift = 1e-3 * scale;
    let mut best = coefficient_misfit(monic, &centers, &mults);
    for _ in 0..8 {
        let jac: Vec<Vec<C64>> = (0..centers.len())
            .map(|i| {
                let mut others: Vec<(C64, usize)> = centers.iter().copied().zip(mults.iter().copied()).collect();
                others[i].1 -= 1;
                expand(&others)
                    .iter()
                    .map(|&a| -a * mults[i] as f64)
                    .collect::<Vec<_>>()
            })
            .collect();
        let rhs: Vec<C64> = best.1.iter().map(|&r| -r).collect();
        let Some(step) = least_squares(&jac, &rhs) else { break };
        let trial: Vec<C64> = centers.iter().zip(&step).map(|(c, d)| c + d).collect();
        let moved = trial.iter().zip(&entries).all(|(t, e)| (t - e.0).norm() <= max_shift);
        let misfit = coefficient_misfit(monic, &trial, &mults);
        if !moved || !(misfit.0 < best.0) {
            break;
        }
        centers = trial;
        best = misfit;
    }
    PointMultiset::from_entries(centers.into_iter().zip(mults).collect())
}

/// Ascending coefficients of `prod (t - c)^m`.
fn expand(factors: &[(C64, usize)]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for &(c, m) in factors {
        for _ in 0..m {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * c;
            }
            coeffs = next;
        }
    }
    coeffs
}

fn coefficient_misfit(monic: &[C64], centers: &[C64], mults: &[usize]) -> (f64, Vec<C64>) {
    let factors: Vec<(C64, usize)> = centers.iter().copied().zip(mults.iter().copied()).collect();
    let fitted = expand(&factors);
    let r: Vec<C64> = fitted.iter().zip(monic).map(|(f, a)| f - a).collect();
    (r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(), r)
}

/// Least-squares solution of `sum_i x_i cols[i] = rhs` by twice-applied
/// modified Gram–Schmidt. `None` if the columns are numerically dependent.
fn least_squares(cols: &[Vec<C64>], rhs: &[C64]) -> Option<Vec<C64>> {
    let k = cols.len();
    let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut r = vec![vec![C64::new(0.0, 0.0); k]; k];
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let h = dot(qi, &v);
                r[i][j] += h;
                v.iter_mut().zip(qi).for_each(|(x, y)| *x -= h * y);
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let col_norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-13 * col_norm) {
            return None;
        }
        r[j][j] = C64::new(norm, 0.0);
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }
    let b: Vec<C64> = q.iter().map(|qi| dot(qi, rhs)).collect();
    let mut x = vec![C64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let s: C64 = (i + 1..k).map(|j| r[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / r[i][i];
    }
    Some(x)
}

/// Whether `p(c + s) = O(s^k)` up to rounding in the coefficients.
fn is_multiple_root(monic: &[C64], c: C64, k: usize) -> bool {
    let t = taylor_shift(monic, c);
    let bounds = taylor_bounds(monic, c.norm());
    let n = monic.len() as f64;
    (0..k).all(|j| t[j].norm() <= SLACK * n * f64::EPSILON * bounds[j])
}

fn max_relative_residual(monic: &[C64], roots: &[C64]) -> f64 {
    roots
        .iter()
        .map(|&r| {
            let (p, _, b) = horner(monic, r);
            p.norm() / b.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}
