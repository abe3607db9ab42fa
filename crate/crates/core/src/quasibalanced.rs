//! Quasi-balanced domains: the weighted circle action, the Minkowski gauge,
//! and the Schwarz-lemma margins built on it.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::mobius::DiskPoint;
use crate::spectralball::{in_spectral_ball, spectral_radius, SquareMatrix};
use crate::sympoly::{gn_minkowski, GnPoint};
use crate::{Error, Result, C64};

pub type Membership = Arc<dyn Fn(&[C64]) -> bool + Send + Sync>;
pub type Gauge = Arc<dyn Fn(&[C64]) -> Result<f64> + Send + Sync>;

const MAX_BRACKET: f64 = (1u64 << 60) as f64;
const MIN_BRACKET: f64 = 1e-12;
const BISECTION_STEPS: usize = 60;
const ORIGIN_TOL: f64 = 1e-12;

/// A `(p_1, …, p_n)`-balanced domain given by a membership predicate.
#[derive(Clone)]
pub struct WeightedDomain {
    name: String,
    weights: Vec<u32>,
    membership: Membership,
    known_gauge: Option<Gauge>,
}

impl fmt::Debug for WeightedDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedDomain")
            .field("name", &self.name)
            .field("weights", &self.weights)
            .field("known_gauge", &self.known_gauge.is_some())
            .finish()
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl WeightedDomain {
    pub fn new(name: impl Into<String>, weights: Vec<u32>, membership: Membership) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySet);
        }
        if weights.contains(&0) || weights.iter().copied().fold(0, gcd) != 1 {
            return Err(Error::InvalidConfig(format!(
                "weights {weights:?} must be positive and relatively prime"
            )));
        }
        let name = name.into();
        if !membership(&vec![C64::new(0.0, 0.0); weights.len()]) {
            return Err(Error::InvalidConfig(format!("{name} does not contain the origin")));
        }
        Ok(Self {
            name,
            weights,
            membership,
            known_gauge: None,
        })
    }

    pub fn with_known_gauge(mut self, gauge: Gauge) -> Self {
        self.known_gauge = Some(gauge);
        self
    }

    /// The unit polydisk `𝔻^n`, balanced.
    pub fn polydisk(n: usize) -> Self {
        Self::new(
            format!("polydisk({n})"),
            vec![1; n],
            Arc::new(|z: &[C64]| z.iter().all(|c| c.norm() < 1.0)),
        )
        .expect("polydisk is well formed")
        .with_known_gauge(Arc::new(|z: &[C64]| Ok(z.iter().map(|c| c.norm()).fold(0.0, f64::max))))
    }

    /// The Euclidean unit ball in `ℂ^n`, balanced.
    pub fn ball(n: usize) -> Self {
        fn norm(z: &[C64]) -> f64 {
            z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
        }
        Self::new(format!("ball({n})"), vec![1; n], Arc::new(|z: &[C64]| norm(z) < 1.0))
            .expect("ball is well formed")
            .with_known_gauge(Arc::new(|z: &[C64]| Ok(norm(z))))
    }

    /// The symmetrized polydisk `G^n`, weights `(1, 2, …, n)`.
    pub fn symmetrized_polydisk(n: usize) -> Self {
        Self::new(
            format!("G^{n}"),
            (1..=n as u32).collect(),
            Arc::new(|z: &[C64]| GnPoint::new(z.to_vec()).is_ok_and(|p| p.in_gn())),
        )
        .expect("G^n is well formed")
        .with_known_gauge(Arc::new(|z: &[C64]| gn_minkowski(&GnPoint::new(z.to_vec())?)))
    }

    /// The spectral unit ball `Ω_n`, as `n²` row-major coordinates; balanced.
    pub fn spectral_ball(n: usize) -> Self {
        Self::new(
            format!("Omega_{n}"),
            vec![1; n * n],
            Arc::new(move |z: &[C64]| SquareMatrix::new(n, z.to_vec()).is_ok_and(|a| in_spectral_ball(&a))),
        )
        .expect("spectral ball is well formed")
        .with_known_gauge(Arc::new(move |z: &[C64]| spectral_radius(&SquareMatrix::new(n, z.to_vec())?)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn highest_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn has_known_gauge(&self) -> bool {
        self.known_gauge.is_some()
    }

    /// Membership; points of the wrong dimension are outside.
    pub fn contains(&self, z: &[C64]) -> bool {
        z.len() == self.dim() && (self.membership)(z)
    }

    /// Minkowski gauge, closed form when known, otherwise by bisection.
    pub fn gauge(&self, z: &[C64]) -> Result<f64> {
        self.check_len(z)?;
        match &self.known_gauge {
            Some(g) => g(z),
            None => gauge_bisection(self, z),
        }
    }

    fn check_len(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        Ok(())
    }
}

/// `λ • z = (λ^{p_1} z_1, …, λ^{p_n} z_n)`.
pub fn weighted_action(lambda: C64, z: &[C64], weights: &[u32]) -> Result<Vec<C64>> {
    if z.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            got: z.len(),
        });
    }
    Ok(z.iter().zip(weights).map(|(&c, &p)| lambda.powu(p) * c).collect())
}

/// `inf { t > 0 : (1/t) • z ∈ D }` by bracketing and bisection, ignoring any
/// closed-form gauge the domain carries.
pub fn gauge_bisection(domain: &WeightedDomain, z: &[C64]) -> Result<f64> {
    domain.check_len(z)?;
    if z.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    if z.iter().all(|c| c.norm() == 0.0) {
        return Ok(0.0);
    }
    let inside = |t: f64| {
        let w = weighted_action(C64::new(1.0 / t, 0.0), z, &domain.weights).expect("length checked");
        domain.contains(&w)
    };

    let mut t = 1.0;
    let (mut lo, mut hi);
    if inside(t) {
        while inside(t) {
            t /= 2.0;
            if t < MIN_BRACKET {
                return Ok(0.0);
            }
        }
        (lo, hi) = (t, 2.0 * t);
    } else {
        while !inside(t) {
            t *= 2.0;
            if t > MAX_BRACKET {
                return Err(Error::UnboundedGauge);
            }
        }
        (lo, hi) = (t / 2.0, t);
    }
    if !inside(2.0 * hi) || inside(lo / 2.0) {
        return Err(Error::NonMonotone(format!(
            "{} along the ray through {z:?}",
            domain.name
        )));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bracket on the extremal function `λ_D(z, 0)`: `h^{p_n} ≤ λ_D ≤ h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn extremal_sandwich(domain: &WeightedDomain, z: &[C64]) -> Result<GaugeBounds> {
    let upper = domain.gauge(z)?;
    Ok(GaugeBounds {
        lower: upper.powi(domain.highest_weight() as i32),
        upper,
    })
}

/// Something that can be evaluated pointwise as a map between domains.
pub trait DomainMap {
    fn apply(&self, z: &[C64]) -> Result<Vec<C64>>;
}

impl<F> DomainMap for F
where
    F: Fn(&[C64]) -> Result<Vec<C64>>,
{
    fn apply(&self, z: &[C64]) -> Result<Vec<C64>> {
        self(z)
    }
}

fn check_origin<F: DomainMap + ?Sized>(f: &F, dim: usize) -> Result<()> {
    let image = f.apply(&vec![C64::new(0.0, 0.0); dim])?;
    let drift = image.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if drift > ORIGIN_TOL {
        return Err(Error::OriginNotFixed(drift));
    }
    Ok(())
}

/// `h_{D1}(z) - h_{D2}(f(z))^p` with `p` the highest weight of `D2`.
pub fn schwarz_margin<F: DomainMap + ?Sized>(
    f: &F,
    d1: &WeightedDomain,
    d2: &WeightedDomain,
    z: &[C64],
) -> Result<f64> {
    d1.check_len(z)?;
    check_origin(f, d1.dim())?;
    if !d1.contains(z) {
        return Err(Error::OutsideDomain {
            domain: d1.name.clone(),
            gauge: d1.gauge(z).unwrap_or(f64::NAN),
        });
    }
    let w = f.apply(z)?;
    let source = d1.gauge(z)?;
    let target = d2.gauge(&w)?;
    Ok(source - target.powi(d2.highest_weight() as i32))
}

/// `|z|^{1/n} - max |λ_j|` where `f(z) = π(λ_1, …, λ_n)` in `G^n`.
pub fn nth_root_bound_margin<F: DomainMap + ?Sized>(f: &F, z: DiskPoint) -> Result<f64> {
    check_origin(f, 1)?;
    let w = GnPoint::new(f.apply(&[z.value()])?)?;
    let n = w.dim() as f64;
    Ok(z.value().norm().powf(1.0 / n) - gn_minkowski(&w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{in_disk, SplitMix64};
    use crate::sympoly::{nth_root_map, symmetrize};
    use rand::Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn without_gauge(d: &WeightedDomain) -> WeightedDomain {
        WeightedDomain {
            known_gauge: None,
            ..d.clone()
        }
    }

    fn builtins(n: usize) -> Vec<WeightedDomain> {
        vec![
            WeightedDomain::polydisk(n),
            WeightedDomain::ball(n),
            WeightedDomain::symmetrized_polydisk(n),
            WeightedDomain::spectral_ball(n),
        ]
    }

    #[test]
    fn action_examples() {
        let z = [c(0.4, 0.0), c(0.4, 0.0)];
        assert_eq!(weighted_action(c(1.0, 0.0), &z, &[1, 2]).unwrap(), z.to_vec());
        let w = weighted_action(c(0.5, 0.0), &z, &[1, 2]).unwrap();
        assert!((w[0] - c(0.2, 0.0)).norm() < 1e-16 && (w[1] - c(0.1, 0.0)).norm() < 1e-16);
        assert!(weighted_action(c(0.5, 0.0), &z, &[1]).is_err());
    }

    #[test]
    fn action_composes() {
        let mut rng = SplitMix64::new(3);
        let weights = [1, 2, 3, 4];
        for _ in 0..100 {
            let z: Vec<C64> = (0..4).map(|_| in_disk(&mut rng, 1.0)).collect();
            let (l, m) = (in_disk(&mut rng, 1.0), in_disk(&mut rng, 1.0));
            let a = weighted_action(l * m, &z, &weights).unwrap();
            let b = weighted_action(l, &weighted_action(m, &z, &weights).unwrap(), &weights).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn domain_validation() {
        let all = Arc::new(|_: &[C64]| true);
        assert!(WeightedDomain::new("x", vec![2, 4], all.clone()).is_err());
        assert!(WeightedDomain::new("x", vec![0, 1], all.clone()).is_err());
        assert!(WeightedDomain::new("x", vec![2, 3], all).is_ok());
        assert!(WeightedDomain::new("x", vec![1], Arc::new(|_: &[C64]| false)).is_err());
        assert_eq!(WeightedDomain::symmetrized_polydisk(4).highest_weight(), 4);
    }

    #[test]
    fn bisection_examples() {
        let p = without_gauge(&WeightedDomain::polydisk(2));
        assert!((gauge_bisection(&p, &[c(0.5, 0.0), c(0.2, 0.0)]).unwrap() - 0.5).abs() < 1e-9);
        let g = without_gauge(&WeightedDomain::symmetrized_polydisk(2));
        assert!((gauge_bisection(&g, &[c(0.0, 0.0), c(-0.25, 0.0)]).unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(gauge_bisection(&g, &[c(0.0, 0.0); 2]).unwrap(), 0.0);
        let big = [c(3.0e6, 0.0), c(1.0, 0.0)];
        assert!((gauge_bisection(&p, &big).unwrap() - 3.0e6).abs() < 1e-6);
    }

    #[test]
    fn bisection_errors() {
        // Membership that only holds near the origin on one axis never brackets.
        let strip = WeightedDomain::new(
            "strip",
            vec![1, 1],
            Arc::new(|z: &[C64]| z[0].norm() < 1.0),
        )
        .unwrap();
        assert_eq!(gauge_bisection(&strip, &[c(0.0, 0.0), c(5.0, 0.0)]).unwrap(), 0.0);
        let annulus_hole = WeightedDomain::new(
            "holed",
            vec![1],
            Arc::new(|z: &[C64]| z[0].norm() < 1.0 && !(0.2..0.3).contains(&z[0].norm())),
        )
        .unwrap();
        assert!(matches!(
            gauge_bisection(&annulus_hole, &[c(0.5, 0.0)]),
            Err(Error::NonMonotone(_))
        ));
        let nowhere = WeightedDomain::new(
            "point",
            vec![1],
            Arc::new(|z: &[C64]| z[0].norm() == 0.0),
        )
        .unwrap();
        assert_eq!(gauge_bisection(&nowhere, &[c(0.5, 0.0)]), Err(Error::UnboundedGauge));
    }

    #[test]
    fn bisection_matches_known_gauges() {
        let mut rng = SplitMix64::new(17);
        for n in 1..=4 {
            for d in builtins(n) {
                let bare = without_gauge(&d);
                for _ in 0..20 {
                    let z: Vec<C64> = (0..d.dim()).map(|_| in_disk(&mut rng, 1.5)).collect();
                    let known = d.gauge(&z).unwrap();
                    let bisected = gauge_bisection(&bare, &z).unwrap();
                    assert!((known - bisected).abs() < 1e-8, "{} {known} {bisected}", d.name());
                }
            }
        }
    }

    #[test]
    fn gauge_is_quasi_homogeneous_and_tracks_membership() {
        let mut rng = SplitMix64::new(41);
        for n in 1..=4 {
            for d in builtins(n) {
                for _ in 0..20 {
                    let z: Vec<C64> = (0..d.dim()).map(|_| in_disk(&mut rng, 1.0)).collect();
                    let g = d.gauge(&z).unwrap();
                    let l = in_disk(&mut rng, 2.0);
                    let scaled = weighted_action(l, &z, d.weights()).unwrap();
                    assert!((d.gauge(&scaled).unwrap() - l.norm() * g).abs() < 1e-8);
                    // Straddle the boundary along the weighted ray.
                    let s: f64 = rng.random_range(0.9..1.1);
                    let probe = weighted_action(c(s / g, 0.0), &z, d.weights()).unwrap();
                    if (s - 1.0).abs() > 1e-6 {
                        assert_eq!(d.contains(&probe), s < 1.0, "{}", d.name());
                    }
                }
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let g = WeightedDomain::symmetrized_polydisk(2);
        let b = extremal_sandwich(&g, &[c(0.0, 0.0), c(-0.25, 0.0)]).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-12 && (b.upper - 0.5).abs() < 1e-12);
        let zero = extremal_sandwich(&g, &[c(0.0, 0.0); 2]).unwrap();
        assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
        let p = WeightedDomain::polydisk(3);
        let b = extremal_sandwich(&p, &[c(0.1, 0.2), c(0.3, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn schwarz_examples() {
        let disk = WeightedDomain::polydisk(1);
        let g2 = WeightedDomain::symmetrized_polydisk(2);
        let z = [c(0.3, 0.4)];

        let root = |x: &[C64]| Ok(nth_root_map(x[0], 2)?.sigma().to_vec());
        assert!(schwarz_margin(&root, &disk, &g2, &z).unwrap().abs() < 1e-12);

        let embed = |x: &[C64]| Ok(vec![x[0], c(0.0, 0.0)]);
        let m = schwarz_margin(&embed, &disk, &g2, &z).unwrap();
        assert!((m - (0.5 - 0.25)).abs() < 1e-12);

        // The identity on G^n loses the exponent: h - h^n.
        let id = |x: &[C64]| Ok(x.to_vec());
        let w = [c(0.0, 0.0), c(-0.25, 0.0)];
        assert!((schwarz_margin(&id, &g2, &g2, &w).unwrap() - 0.25).abs() < 1e-12);
        let p = WeightedDomain::polydisk(2);
        assert_eq!(schwarz_margin(&id, &p, &p, &[c(0.2, 0.0), c(0.1, 0.0)]).unwrap(), 0.0);

        let shifted = |x: &[C64]| Ok(vec![x[0] + 0.1, c(0.0, 0.0)]);
        assert!(matches!(
            schwarz_margin(&shifted, &disk, &g2, &z),
            Err(Error::OriginNotFixed(_))
        ));
        assert!(matches!(
            schwarz_margin(&embed, &disk, &g2, &[c(1.5, 0.0)]),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn nth_root_examples() {
        let z = DiskPoint::new(c(0.25, 0.0)).unwrap();
        for n in 1..=5 {
            let root = move |x: &[C64]| Ok(nth_root_map(x[0], n)?.sigma().to_vec());
            assert!(nth_root_bound_margin(&root, z).unwrap().abs() < 1e-12);
            let zero = move |_: &[C64]| Ok(vec![c(0.0, 0.0); n]);
            let m = nth_root_bound_margin(&zero, z).unwrap();
            assert!((m - 0.25f64.powf(1.0 / n as f64)).abs() < 1e-15);
        }
        let embed = |x: &[C64]| Ok(vec![x[0], c(0.0, 0.0)]);
        assert!((nth_root_bound_margin(&embed, z).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn symmetrized_disk_maps_respect_bound() {
        // f(x) = π(a_1 x, …) with a_j in the closed disk; each root is a_j x.
        let mut rng = SplitMix64::new(77);
        for n in 2..=5 {
            let a: Vec<C64> = (0..n).map(|_| in_disk(&mut rng, 1.0)).collect();
            let f = |x: &[C64]| {
                let pts: Vec<C64> = a.iter().map(|&aj| aj * x[0]).collect();
                Ok(symmetrize(&pts).sigma().to_vec())
            };
            for _ in 0..20 {
                let z = DiskPoint::new(in_disk(&mut rng, 0.99)).unwrap();
                assert!(nth_root_bound_margin(&f, z).unwrap() >= -1e-7);
            }
        }
    }
}
