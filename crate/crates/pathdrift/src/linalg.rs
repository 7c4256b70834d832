//! Small dense symmetric matrices for low-dimensional state spaces.
//!
//! Everything here is sized for d in the single digits; storage is a flat
//! row-major `Vec<f64>` and factorizations are plain textbook Cholesky.

use crate::error::{PathdriftError, Result};

/// Square d×d matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMat {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMat {
    pub fn from_rows(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(PathdriftError::domain(format!(
                "matrix data length {} does not match dim {}",
                data.len(),
                dim
            )));
        }
        Ok(SquareMat { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SquareMat {
            dim,
            data: vec![0.0; dim * dim],
        };
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut m = Self::identity(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn scale(&self, c: f64) -> SquareMat {
        SquareMat {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| dot(row, x))
            .collect()
    }

    /// A Aᵀ, used to form a = σσᵀ from a diffusion matrix.
    pub fn mul_transpose(&self) -> SquareMat {
        let d = self.dim;
        let mut out = SquareMat {
            dim: d,
            data: vec![0.0; d * d],
        };
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += self.at(i, k) * self.at(j, k);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn max_asymmetry(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    /// Lower-triangular Cholesky factor. Fails on non-SPD input.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let d = self.dim;
        let mut l = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let mut sum = self.at(i, j);
                for k in 0..j {
                    sum -= l[i * d + k] * l[j * d + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(PathdriftError::numeric(format!(
                            "matrix is not positive definite (pivot {sum:e} at row {i})"
                        )));
                    }
                    l[i * d + i] = sum.sqrt();
                } else {
                    l[i * d + j] = sum / l[j * d + j];
                }
            }
        }
        Ok(Cholesky { dim: d, l })
    }

    /// Eigenvalue range of a symmetric matrix via cyclic Jacobi rotations.
    /// Used to check ellipticity declarations on constant diffusions.
    pub fn sym_eigen_range(&self) -> Result<(f64, f64)> {
        if self.max_asymmetry() > 1e-9 {
            return Err(PathdriftError::domain(
                "eigen range requested for a non-symmetric matrix".to_string(),
            ));
        }
        let d = self.dim;
        let mut a = self.data.clone();
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..d {
                for j in (i + 1)..d {
                    off += a[i * d + j] * a[i * d + j];
                }
            }
            if off.sqrt() < 1e-14 {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[p * d + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a[p * d + p];
                    let aqq = a[q * d + q];
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let akp = a[k * d + p];
                        let akq = a[k * d + q];
                        a[k * d + p] = c * akp - s * akq;
                        a[k * d + q] = s * akp + c * akq;
                    }
                    for k in 0..d {
                        let apk = a[p * d + k];
                        let aqk = a[q * d + k];
                        a[p * d + k] = c * apk - s * aqk;
                        a[q * d + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..d {
            lo = lo.min(a[i * d + i]);
            hi = hi.max(a[i * d + i]);
        }
        Ok((lo, hi))
    }
}

/// Cholesky factorization A = L Lᵀ.
pub struct Cholesky {
    dim: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn det(&self) -> f64 {
        let mut det = 1.0;
        for i in 0..self.dim {
            let lii = self.l[i * self.dim + i];
            det *= lii * lii;
        }
        det
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut y = b.to_vec();
        // forward: L y = b
        for i in 0..d {
            for k in 0..i {
                y[i] -= self.l[i * d + k] * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        // backward: Lᵀ x = y
        for i in (0..d).rev() {
            for k in (i + 1)..d {
                y[i] -= self.l[k * d + i] * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        y
    }

    /// ⟨A⁻¹ v, v⟩
    pub fn quad_form_inv(&self, v: &[f64]) -> f64 {
        let x = self.solve(v);
        x.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn inverse(&self) -> SquareMat {
        let d = self.dim;
        let mut inv = SquareMat {
            dim: d,
            data: vec![0.0; d * d],
        };
        let mut e = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            let col = self.solve(&e);
            for (i, v) in col.iter().enumerate() {
                inv.set(i, j, *v);
            }
            e[j] = 0.0;
        }
        inv
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
