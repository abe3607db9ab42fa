//! Seeded holomorphic maps from the disk into `𝔻`, `G^n` and `Ω_n`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::mobius::{mobius_disk, DiskPoint};
use crate::quasibalanced::{DomainMap, WeightedDomain};
use crate::rng::{in_disk, unimodular, SplitMix64};
use crate::sympoly::symmetrize;
use crate::{Error, Result, C64};

const MAX_N: usize = 8;
const MAX_DEGREE: usize = 12;
const SUB_SEEDS: u64 = 8;
const BOUNDARY_SAMPLES: usize = 512;
const RESCALE_SLACK: f64 = 0.01;
const AUDIT_SAMPLES: usize = 4096;
const AUDIT_RADIUS: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    PolyCoords,
    LiftedBlaschke,
    MatrixPoly,
}

impl MapKind {
    pub const ALL: [MapKind; 3] = [MapKind::PolyCoords, MapKind::LiftedBlaschke, MapKind::MatrixPoly];

    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::PolyCoords => "poly-coords",
            MapKind::LiftedBlaschke => "lifted-blaschke",
            MapKind::MatrixPoly => "matrix-poly",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown map kind {s:?}")))
    }
}

/// Codomain of a map. `Gn(1)` is the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Gn(usize),
    SpectralBall(usize),
}

impl Target {
    pub fn order(self) -> usize {
        match self {
            Target::Gn(n) | Target::SpectralBall(n) => n,
        }
    }

    /// Number of complex coordinates.
    pub fn dim(self) -> usize {
        match self {
            Target::Gn(n) => n,
            Target::SpectralBall(n) => n * n,
        }
    }

    pub fn domain(self) -> WeightedDomain {
        match self {
            Target::Gn(n) => WeightedDomain::symmetrized_polydisk(n),
            Target::SpectralBall(n) => WeightedDomain::spectral_ball(n),
        }
    }
}

/// `scale · ∏ (x - a) / (1 - conj(a) x)` with `|scale| ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteBlaschke {
    pub scale: C64,
    pub zeros: Vec<C64>,
}

impl FiniteBlaschke {
    pub fn new(scale: C64, zeros: Vec<C64>) -> Result<Self> {
        if scale.norm() > 1.0 {
            return Err(Error::OutsideDisk(scale));
        }
        if let Some(&a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::OutsideDisk(a));
        }
        Ok(Self { scale, zeros })
    }

    pub fn eval(&self, x: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        self.zeros
            .iter()
            .fold(self.scale, |acc, &a| acc * (x - a) / (one - a.conj() * x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MapData {
    /// Ascending polynomial coefficients per target coordinate.
    PolyCoords(Vec<Vec<C64>>),
    /// One disk self-map per root; the map is their symmetrization.
    LiftedBlaschke(Vec<FiniteBlaschke>),
    /// Ascending polynomial coefficients per matrix entry, row-major.
    MatrixPoly(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoloMap {
    data: MapData,
    target: Target,
    seed: Option<u64>,
    degree: usize,
}

fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

impl HoloMap {
    pub fn poly_coords(coeffs: Vec<Vec<C64>>) -> Result<Self> {
        let n = coeffs.len();
        Self::from_data(MapData::PolyCoords(coeffs), Target::Gn(n))
    }

    pub fn lifted_blaschke(factors: Vec<FiniteBlaschke>) -> Result<Self> {
        let n = factors.len();
        Self::from_data(MapData::LiftedBlaschke(factors), Target::Gn(n))
    }

    pub fn matrix_poly(order: usize, entries: Vec<Vec<C64>>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::LengthMismatch {
                expected: order * order,
                got: entries.len(),
            });
        }
        Self::from_data(MapData::MatrixPoly(entries), Target::SpectralBall(order))
    }

    fn from_data(data: MapData, target: Target) -> Result<Self> {
        if target.order() == 0 || target.order() > MAX_N {
            return Err(Error::InvalidConfig(format!(
                "target order {} outside 1..={MAX_N}",
                target.order()
            )));
        }
        let degree = match &data {
            MapData::PolyCoords(c) | MapData::MatrixPoly(c) => {
                c.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
            }
            MapData::LiftedBlaschke(f) => f.iter().map(|g| g.zeros.len()).max().unwrap_or(0),
        };
        Ok(Self {
            data,
            target,
            seed: None,
            degree,
        })
    }

    pub fn kind(&self) -> MapKind {
        match self.data {
            MapData::PolyCoords(_) => MapKind::PolyCoords,
            MapData::LiftedBlaschke(_) => MapKind::LiftedBlaschke,
            MapData::MatrixPoly(_) => MapKind::MatrixPoly,
        }
    }

    pub fn data(&self) -> &MapData {
        &self.data
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, x: DiskPoint) -> Vec<C64> {
        self.eval_raw(x.value())
    }

    /// The lifted values `g_i(x)`, for the lifted kind only.
    pub fn lifted_values(&self, x: DiskPoint) -> Option<Vec<C64>> {
        match &self.data {
            MapData::LiftedBlaschke(f) => Some(f.iter().map(|g| g.eval(x.value())).collect()),
            _ => None,
        }
    }

    /// Evaluation without the disk check; used on the boundary circle.
    fn eval_raw(&self, x: C64) -> Vec<C64> {
        match &self.data {
            MapData::PolyCoords(c) | MapData::MatrixPoly(c) => c.iter().map(|p| horner(p, x)).collect(),
            MapData::LiftedBlaschke(f) => {
                let roots: Vec<C64> = f.iter().map(|g| g.eval(x)).collect();
                symmetrize(&roots).sigma().to_vec()
            }
        }
    }

    /// Multiplies coordinate `j` by `c^{p_j}`, with `p_j` the target weights.
    fn rescale(&mut self, c: f64) {
        let weights = self.target.domain().weights().to_vec();
        if let MapData::PolyCoords(coords) | MapData::MatrixPoly(coords) = &mut self.data {
            for (p, &w) in coords.iter_mut().zip(&weights) {
                let f = c.powi(w as i32);
                p.iter_mut().for_each(|a| *a *= f);
            }
        }
    }

    /// Number of points among `samples` random points with `|x| ≤ 0.999`
    /// whose image fails the target membership test.
    pub fn audit(&self, rng: &mut SplitMix64, samples: usize) -> usize {
        let domain = self.target.domain();
        (0..samples)
            .filter(|_| !domain.contains(&self.eval_raw(in_disk(rng, AUDIT_RADIUS))))
            .count()
    }
}

impl DomainMap for HoloMap {
    fn apply(&self, z: &[C64]) -> Result<Vec<C64>> {
        if z.len() != 1 {
            return Err(Error::LengthMismatch { expected: 1, got: z.len() });
        }
        Ok(self.eval(DiskPoint::new(z[0])?))
    }
}

/// Largest target gauge of `f` on the unit circle: a dense sample followed by
/// golden-section refinement around the best few sample angles.
fn boundary_sup(f: &HoloMap, domain: &WeightedDomain) -> Result<f64> {
    let gauge = |theta: f64| domain.gauge(&f.eval_raw(C64::from_polar(1.0, theta)));
    let step = TAU / BOUNDARY_SAMPLES as f64;
    let mut samples = Vec::with_capacity(BOUNDARY_SAMPLES);
    for k in 0..BOUNDARY_SAMPLES {
        let theta = k as f64 * step;
        samples.push((gauge(theta)?, theta));
    }
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = samples[0].0;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for &(_, theta) in samples.iter().take(4) {
        let (mut a, mut b) = (theta - step, theta + step);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (gauge(c)?, gauge(d)?);
        for _ in 0..24 {
            if fc > fd {
                b = d;
                (d, fd) = (c, fc);
                c = b - ratio * (b - a);
                fc = gauge(c)?;
            } else {
                a = c;
                (c, fc) = (d, fd);
                d = a + ratio * (b - a);
                fd = gauge(d)?;
            }
            best = best.max(fc).max(fd);
        }
    }
    Ok(best)
}

fn draw_poly(rng: &mut SplitMix64, degree: usize, fix_origin: bool) -> Vec<C64> {
    let mut p: Vec<C64> = (0..=degree).map(|_| in_disk(rng, 1.0)).collect();
    if fix_origin {
        p[0] = C64::new(0.0, 0.0);
    }
    p
}

fn draw(rng: &mut SplitMix64, kind: MapKind, n: usize, degree: usize, fix_origin: bool) -> Result<HoloMap> {
    let mut map = match kind {
        MapKind::PolyCoords => {
            HoloMap::poly_coords((0..n).map(|_| draw_poly(rng, degree, fix_origin)).collect())?
        }
        MapKind::MatrixPoly => HoloMap::matrix_poly(
            n,
            (0..n * n).map(|_| draw_poly(rng, degree, fix_origin)).collect(),
        )?,
        MapKind::LiftedBlaschke => {
            let factors = (0..n)
                .map(|_| {
                    let count = 1 + (rng.next_u64() % degree as u64) as usize;
                    let mut zeros: Vec<C64> = (0..count).map(|_| in_disk(rng, 1.0)).collect();
                    if fix_origin {
                        zeros[0] = C64::new(0.0, 0.0);
                    }
                    let scale = if rng.next_u64().is_multiple_of(2) {
                        unimodular(rng)
                    } else {
                        in_disk(rng, 1.0)
                    };
                    FiniteBlaschke::new(scale, zeros)
                })
                .collect::<Result<Vec<_>>>()?;
            HoloMap::lifted_blaschke(factors)?
        }
    };
    map.degree = degree;
    if kind != MapKind::LiftedBlaschke {
        let s = boundary_sup(&map, &map.target.domain())?;
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::DegenerateMap);
        }
        map.rescale(1.0 / (s + RESCALE_SLACK));
    }
    let zero = C64::new(0.0, 0.0);
    let constant_origin = |x: f64| map.eval_raw(C64::new(x, 0.0)).iter().all(|&c| c == zero);
    if constant_origin(0.0) && constant_origin(0.5) && constant_origin(-0.7) {
        return Err(Error::DegenerateMap);
    }
    Ok(map)
}

/// Seeded random map into `G^n` (poly-coords, lifted-blaschke) or `Ω_n`
/// (matrix-poly), rescaled so the image of the closed disk of radius 0.999
/// lies in the target, then audited on 4096 random points.
pub fn random_map(seed: u64, kind: MapKind, n: usize, degree: usize, fix_origin: bool) -> Result<HoloMap> {
    if n == 0 || n > MAX_N || degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidConfig(format!(
            "random_map needs 1 <= n <= {MAX_N} and 1 <= degree <= {MAX_DEGREE}, got n={n} degree={degree}"
        )));
    }
    for sub in 0..SUB_SEEDS {
        let mut rng = SplitMix64::for_stream(seed, sub);
        let mut map = match draw(&mut rng, kind, n, degree, fix_origin) {
            Err(Error::DegenerateMap) => continue,
            other => other?,
        };
        map.seed = Some(seed);
        let failures = map.audit(&mut rng, AUDIT_SAMPLES);
        if failures > 0 {
            return Err(Error::AuditFailure {
                failures,
                samples: AUDIT_SAMPLES,
            });
        }
        return Ok(map);
    }
    Err(Error::DegenerateMap)
}

/// `M(x, y) - M(g(x), g(y))` for a disk-valued `g`.
pub fn disk_contraction_margin(g: &HoloMap, x: DiskPoint, y: DiskPoint) -> Result<f64> {
    if g.target != Target::Gn(1) {
        return Err(Error::InvalidConfig(format!("{:?} is not the unit disk", g.target)));
    }
    let (gx, gy) = (g.eval(x)[0], g.eval(y)[0]);
    Ok(mobius_disk(x.value(), y.value())?.get() - mobius_disk(gx, gy)?.get())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobius::hausdorff_euclidean;
    use crate::spectralball::{spectral_radius, SquareMatrix};
    use crate::sympoly::{gn_minkowski, gn_roots, nth_root_map, GnPoint};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn target_gauge(map: &HoloMap, w: Vec<C64>) -> f64 {
        match map.target() {
            Target::Gn(_) => gn_minkowski(&GnPoint::new(w).unwrap()).unwrap(),
            Target::SpectralBall(n) => spectral_radius(&SquareMatrix::new(n, w).unwrap()).unwrap(),
        }
    }

    #[test]
    fn eval_examples() {
        let zero = HoloMap::poly_coords(vec![vec![c(0.0, 0.0); 3]; 2]).unwrap();
        assert_eq!(zero.eval(dp(0.3, 0.2)), vec![c(0.0, 0.0); 2]);

        let lifted = HoloMap::lifted_blaschke(vec![
            FiniteBlaschke::new(c(1.0, 0.0), vec![c(0.0, 0.0)]).unwrap(),
            FiniteBlaschke::new(c(0.0, 0.0), vec![]).unwrap(),
        ])
        .unwrap();
        let w = lifted.eval(dp(0.25, 0.0));
        assert!((w[0] - c(0.25, 0.0)).norm() < 1e-16 && w[1].norm() < 1e-16);

        let root = HoloMap::poly_coords(vec![vec![c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]).unwrap();
        let expected = nth_root_map(c(0.09, 0.0), 2).unwrap();
        assert_eq!(root.eval(dp(0.09, 0.0)), expected.sigma().to_vec());
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in MapKind::ALL {
            let a = random_map(11, kind, 3, 4, false).unwrap();
            let b = random_map(11, kind, 3, 4, false).unwrap();
            assert_eq!(a, b);
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
            assert_ne!(a, random_map(12, kind, 3, 4, false).unwrap());
        }
    }

    #[test]
    fn fixed_origin_maps_vanish_at_zero() {
        for kind in MapKind::ALL {
            for seed in 0..5 {
                let f = random_map(seed, kind, 3, 3, true).unwrap();
                assert!(f.eval(dp(0.0, 0.0)).iter().all(|w| *w == c(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn generated_images_stay_in_target() {
        let mut rng = SplitMix64::new(1234);
        for kind in MapKind::ALL {
            for seed in 0..6 {
                let n = 1 + seed as usize % 4;
                let f = random_map(seed, kind, n, 1 + seed as usize, seed % 2 == 0).unwrap();
                for _ in 0..1024 {
                    let x = DiskPoint::new(in_disk(&mut rng, 0.999)).unwrap();
                    assert!(target_gauge(&f, f.eval(x)) < 1.0);
                }
            }
        }
    }

    #[test]
    fn rescale_multiplies_by_weighted_powers() {
        let mut f = HoloMap::poly_coords(vec![vec![c(0.0, 0.0), c(1.0, 0.0)]; 3]).unwrap();
        f.rescale(0.5);
        let MapData::PolyCoords(coords) = f.data() else { unreachable!() };
        for (j, p) in coords.iter().enumerate() {
            assert_eq!(p[1], c(0.5f64.powi(j as i32 + 1), 0.0));
        }
    }

    #[test]
    fn lifted_roots_are_recovered() {
        let mut rng = SplitMix64::new(5);
        for seed in 0..20 {
            let f = random_map(seed, MapKind::LiftedBlaschke, 1 + seed as usize % 5, 4, false).unwrap();
            let x = DiskPoint::new(in_disk(&mut rng, 0.95)).unwrap();
            let expected = f.lifted_values(x).unwrap();
            let fiber = gn_roots(&GnPoint::new(f.eval(x)).unwrap()).unwrap().roots.expanded();
            assert!(hausdorff_euclidean(&fiber, &expected).unwrap() <= 1e-7);
        }
    }

    #[test]
    fn contraction_examples() {
        let x = dp(0.5, 0.0);
        let y = dp(0.0, 0.0);
        let id = HoloMap::poly_coords(vec![vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert_eq!(disk_contraction_margin(&id, x, y).unwrap(), 0.0);
        let constant = HoloMap::poly_coords(vec![vec![c(0.3, 0.1)]]).unwrap();
        assert_eq!(disk_contraction_margin(&constant, x, y).unwrap(), 0.5);
        let square = HoloMap::poly_coords(vec![vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!((disk_contraction_margin(&square, x, y).unwrap() - 0.25).abs() < 1e-15);
        let g2 = HoloMap::poly_coords(vec![vec![c(0.0, 0.0)]; 2]).unwrap();
        assert!(disk_contraction_margin(&g2, x, y).is_err());
    }

    #[test]
    fn random_disk_maps_contract() {
        let mut rng = SplitMix64::new(8);
        for seed in 0..100 {
            let kind = if seed % 2 == 0 { MapKind::PolyCoords } else { MapKind::LiftedBlaschke };
            let g = random_map(seed, kind, 1, 1 + seed as usize % 12, false).unwrap();
            for _ in 0..100 {
                let x = DiskPoint::new(in_disk(&mut rng, 0.999)).unwrap();
                let y = DiskPoint::new(in_disk(&mut rng, 0.999)).unwrap();
                assert!(disk_contraction_margin(&g, x, y).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(random_map(0, MapKind::PolyCoords, 9, 2, false).is_err());
        assert!(random_map(0, MapKind::PolyCoords, 2, 13, false).is_err());
        assert!(random_map(0, MapKind::PolyCoords, 0, 2, false).is_err());
        assert_eq!("matrix-poly".parse::<MapKind>().unwrap(), MapKind::MatrixPoly);
        assert!("nope".parse::<MapKind>().is_err());
    }
}
