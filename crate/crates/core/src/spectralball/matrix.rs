use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Dense `n × n` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<C64>,
}

impl SquareMatrix {
    pub fn new(order: usize, entries: Vec<C64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptySet);
        }
        if entries.len() != order * order {
            return Err(Error::LengthMismatch {
                expected: order * order,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| !(e.re.is_finite() && e.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { order, entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![C64::new(0.0, 0.0); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::scalar(order, C64::new(1.0, 0.0))
    }

    pub fn scalar(order: usize, c: C64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.entries[i * order + i] = c;
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    /// Companion matrix of the monic polynomial with ascending coefficients
    /// `coeffs` (last entry 1): ones on the subdiagonal, `-a_i` in the last column.
    pub fn companion(coeffs: &[C64]) -> Result<Self> {
        let n = coeffs.len().checked_sub(1).filter(|&n| n > 0).ok_or(Error::EmptySet)?;
        let lead = coeffs[n];
        let mut m = Self::zeros(n);
        for i in 1..n {
            m.entries[i * n + i - 1] = C64::new(1.0, 0.0);
        }
        for (i, &a) in coeffs[..n].iter().enumerate() {
            m.entries[i * n + n - 1] = -a / lead;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.order + j]
    }

    pub fn trace(&self) -> C64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|&e| e * c).collect(),
        }
    }

    /// `self - λ I`.
    pub fn shift(&self, lambda: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.order {
            m.entries[i * self.order + i] -= lambda;
        }
        m
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::identity(self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        let norm = self.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p.norm() <= f64::EPSILON * norm * n as f64 || p.norm() == 0.0 {
                return Err(Error::SingularFactor);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = p.inv();
            for j in 0..n {
                a[col * n + j] *= p_inv;
                inv[col * n + j] *= p_inv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * ac;
                    inv[r * n + j] -= f * ic;
                }
            }
        }
        Ok(Self {
            order: n,
            entries: inv,
        })
    }

    /// Numerical rank: elimination with full pivoting, stopping once the best
    /// remaining pivot falls below `1e-8 · (1 + largest column norm)`.
    pub fn rank(&self) -> usize {
        let n = self.order;
        let col_norm = (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j).norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let threshold = 1e-8 * (1.0 + col_norm);
        let mut a = self.entries.clone();
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut best = (k, k, 0.0f64);
            for (ri, &r) in rows.iter().enumerate().skip(k) {
                for (ci, &c) in cols.iter().enumerate().skip(k) {
                    let v = a[r * n + c].norm();
                    if v > best.2 {
                        best = (ri, ci, v);
                    }
                }
            }
            if best.2 <= threshold {
                return k;
            }
            rows.swap(k, best.0);
            cols.swap(k, best.1);
            let (pr, pc) = (rows[k], cols[k]);
            let p = a[pr * n + pc];
            for &r in &rows[k + 1..] {
                let f = a[r * n + pc] / p;
                for &c in &cols[k..] {
                    let v = a[pr * n + c];
                    a[r * n + c] -= f * v;
                }
            }
        }
        n
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        let n = self.order;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        SquareMatrix {
            order: n,
            entries: out,
        }
    }
}
