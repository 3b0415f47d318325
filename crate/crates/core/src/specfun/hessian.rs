use crate::error::{GwlError, Result};
use serde::{Deserialize, Serialize};

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix rows must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Cholesky factorization succeeds.
    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_some()
    }

    fn cholesky(&self) -> Option<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
                if i == j {
                    let d = self.get(i, i) - s;
                    if !(d > 0.0) {
                        return None;
                    }
                    l[i * n + i] = d.sqrt();
                } else {
                    l[i * n + j] = (self.get(i, j) - s) / l[j * n + j];
                }
            }
        }
        Some(l)
    }

    /// Gauss–Jordan inverse with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::zeros(n);
        for i in 0..n {
            inv.set(i, i, 1.0);
        }
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))?;
            if a[pivot * n + col].abs() < 1e-300 {
                return None;
            }
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.data.swap(col * n + j, pivot * n + j);
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv.data[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= factor * a[col * n + j];
                    inv.data[r * n + j] -= factor * inv.data[col * n + j];
                }
            }
        }
        Some(inv)
    }

    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }
}

/// Central-difference Hessian, symmetrized as `(H + Hᵀ) / 2`.
///
/// The step for coordinate `i` is `rel_step * max(|x_i|, 1)`; pass
/// `f64::EPSILON.cbrt()` for the usual choice.
pub fn numeric_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], rel_step: f64) -> Result<Matrix> {
    let k = x.len();
    let h: Vec<f64> = x.iter().map(|xi| rel_step * xi.abs().max(1.0)).collect();
    let mut hess = Matrix::zeros(k);
    let mut p = x.to_vec();
    let f0 = f(x);
    for i in 0..k {
        p[i] = x[i] + h[i];
        let fp = f(&p);
        p[i] = x[i] - h[i];
        let fm = f(&p);
        p[i] = x[i];
        hess.set(i, i, (fp - 2.0 * f0 + fm) / (h[i] * h[i]));
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                p[i] = x[i] + si * h[i];
                p[j] = x[j] + sj * h[j];
                let v = f(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0)) / (4.0 * h[i] * h[j]);
            hess.set(i, j, v);
            hess.set(j, i, v);
        }
    }
    hess.symmetrize();
    let bad: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| !hess.get(i, j).is_finite())
        .collect();
    if !bad.is_empty() {
        return Err(GwlError::Domain(format!("non-finite Hessian entries at {bad:?}")));
    }
    Ok(hess)
}

#[cfg(test)]
mod tests {
    use super::*;

    const STEP: f64 = 6.055_454_452_393_343e-6;

    #[test]
    fn square() {
        let h = numeric_hessian(|x| x[0] * x[0], &[3.0], STEP).unwrap();
        assert!((h.get(0, 0) - 2.0).abs() < 1e-4);
    }

    #[test]
    fn bilinear() {
        let h = numeric_hessian(|x| x[0] * x[1], &[1.0, 1.0], STEP).unwrap();
        assert!(h.get(0, 0).abs() < 1e-4 && h.get(1, 1).abs() < 1e-4);
        assert!((h.get(0, 1) - 1.0).abs() < 1e-6 && (h.get(1, 0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn non_finite_reported() {
        let r = numeric_hessian(|x| if x[0] > 1.0 { f64::INFINITY } else { x[0] }, &[1.0], STEP);
        assert!(r.is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(&[vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]]);
        let inv = m.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| m.get(i, k) * inv.get(k, j)).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(m.is_positive_definite());
        assert!(!Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_positive_definite());
    }
}
