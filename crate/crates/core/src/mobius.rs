//! The Möbius pseudodistance and the Hausdorff pseudodistance it induces.
//!
//! On the unit disk the Möbius pseudodistance is the pseudo-hyperbolic
//! distance `|(z - w) / (1 - conj(w) z)|`; on a ball it is known only from
//! the center, and on a product of disks it is the maximum over coordinates.
//! Its hyperbolic-tangent inverse is the Carathéodory distance.

use serde::{Deserialize, Serialize};

use crate::{Error, PointMultiset, Result, C64};

/// Euclidean tolerance used to identify points when collapsing a multiset to
/// its underlying set.
pub const SET_COLLAPSE_TOL: f64 = 1e-9;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(value: C64) -> Result<Self> {
        check_disk(value)?;
        Ok(Self(value))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

impl TryFrom<C64> for DiskPoint {
    type Error = Error;

    fn try_from(value: C64) -> Result<Self> {
        Self::new(value)
    }
}

/// A value of the Möbius pseudodistance, always in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MetricValue(f64);

impl MetricValue {
    pub const ZERO: MetricValue = MetricValue(0.0);

    /// Wraps `m`, clamping values that rounding pushed onto `1.0`.
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::OutsideDisk(C64::new(m, 0.0)));
        }
        Ok(Self(m.min(BELOW_ONE)))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<MetricValue> for f64 {
    fn from(m: MetricValue) -> f64 {
        m.0
    }
}

const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

pub(crate) fn check_disk(z: C64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk(z));
    }
    Ok(())
}

/// Unchecked pseudo-hyperbolic distance; callers guarantee `|z|, |w| < 1`.
#[inline]
pub(crate) fn pseudo_hyperbolic(z: C64, w: C64) -> f64 {
    let m = ((z - w) / (C64::new(1.0, 0.0) - w.conj() * z)).norm();
    m.min(BELOW_ONE)
}

/// Möbius pseudodistance of the unit disk.
pub fn mobius_disk(z: C64, w: C64) -> Result<MetricValue> {
    check_disk(z)?;
    check_disk(w)?;
    Ok(MetricValue(pseudo_hyperbolic(z, w)))
}

/// Möbius pseudodistance of the ball `B(center, radius)` from its center.
pub fn mobius_ball(center: &[C64], radius: f64, z: &[C64]) -> Result<MetricValue> {
    if center.len() != z.len() {
        return Err(Error::LengthMismatch {
            expected: center.len(),
            got: z.len(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutsideBall {
            distance: f64::NAN,
            radius,
        });
    }
    let distance = center
        .iter()
        .zip(z)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if distance >= radius || distance.is_nan() {
        return Err(Error::OutsideBall { distance, radius });
    }
    Ok(MetricValue(distance / radius))
}

/// Möbius pseudodistance of the unit polydisk: the coordinatewise maximum.
pub fn mobius_polydisk(z: &[C64], w: &[C64]) -> Result<MetricValue> {
    if z.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: w.len(),
        });
    }
    let mut best = 0.0f64;
    for (&a, &b) in z.iter().zip(w) {
        best = best.max(mobius_disk(a, b)?.0);
    }
    Ok(MetricValue(best))
}

/// Two-sided Hausdorff distance between finite sets under `dist`.
pub fn hausdorff_by<F>(a: &[C64], b: &[C64], dist: F) -> Result<f64>
where
    F: Fn(C64, C64) -> f64,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |from: &[C64], to: &[C64]| {
        from.iter()
            .map(|&p| to.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Hausdorff pseudodistance induced by the disk's Möbius pseudodistance.
///
/// Multiplicities are ignored: both multisets are collapsed to their
/// underlying sets (points within [`SET_COLLAPSE_TOL`] identified) first.
pub fn hausdorff(a: &PointMultiset, b: &PointMultiset) -> Result<MetricValue> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    for p in a.points().chain(b.points()) {
        check_disk(p)?;
    }
    let sa = a.collapse(SET_COLLAPSE_TOL);
    let sb = b.collapse(SET_COLLAPSE_TOL);
    hausdorff_by(&sa, &sb, pseudo_hyperbolic).map(MetricValue)
}

/// Euclidean Hausdorff distance between the underlying sets of two point lists.
pub fn hausdorff_euclidean(a: &[C64], b: &[C64]) -> Result<f64> {
    hausdorff_by(a, b, |p, q| (p - q).norm())
}

/// Carathéodory distance from a Möbius pseudodistance value: `artanh(m)`.
pub fn caratheodory_from_mobius(m: MetricValue) -> f64 {
    m.0.atanh()
}

/// Automorphism `z ↦ rotation · (z - center) / (1 - conj(center) z)` of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskAutomorphism {
    pub rotation: C64,
    pub center: C64,
}

impl DiskAutomorphism {
    pub fn identity() -> Self {
        Self {
            rotation: C64::new(1.0, 0.0),
            center: C64::new(0.0, 0.0),
        }
    }

    /// `rotation` is normalised onto the unit circle.
    pub fn new(rotation: C64, center: C64) -> Result<Self> {
        check_disk(center)?;
        let r = rotation.norm();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            rotation: rotation / r,
            center,
        })
    }

    pub fn apply(&self, z: C64) -> C64 {
        self.rotation * (z - self.center) / (C64::new(1.0, 0.0) - self.center.conj() * z)
    }
}
