use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{MorseError, DEFAULT_TOLERANCE};

/// Symmetric matrix `L` defining `Λ(x) = <x, Lx> / |x|^2` on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFlowModel {
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Ascending eigenvalues with orthonormal eigenvectors; each eigenvector's
/// first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn positive_count(&self) -> usize {
        self.values.iter().filter(|&&x| x > 0.0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.values.iter().filter(|&&x| x < 0.0).count()
    }

    /// Signs of the eigenvalues in ascending order, `true` for positive.
    pub fn sign_pattern(&self) -> Vec<bool> {
        self.values.iter().map(|&x| x > 0.0).collect()
    }
}

impl LinearFlowModel {
    pub fn new(l: Vec<Vec<f64>>) -> Self {
        Self { l, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let l = (0..n)
            .map(|i| (0..n).map(|j| if i == j { values[i] } else { 0.0 }).collect())
            .collect();
        Self::new(l)
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn matrix(&self) -> Result<DMatrix<f64>, MorseError> {
        let n = self.l.len();
        if n == 0 || self.l.iter().any(|r| r.len() != n) {
            let cols = self.l.first().map_or(0, Vec::len);
            return Err(MorseError::NotSquare { rows: n, cols });
        }
        if self.l.iter().flatten().any(|x| !x.is_finite()) {
            return Err(MorseError::NonFinite);
        }
        Ok(DMatrix::from_fn(n, n, |r, c| self.l[r][c]))
    }

    fn scale(&self) -> f64 {
        self.l.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()))
    }

    /// Eigen-decomposition with the simplicity and zero-free checks.
    pub fn spectrum(&self) -> Result<Spectrum, MorseError> {
        let m = self.matrix()?;
        let n = m.nrows();
        let tol = self.tolerance * self.scale();
        for r in 0..n {
            for c in r + 1..n {
                let diff = (m[(r, c)] - m[(c, r)]).abs();
                if diff > tol {
                    return Err(MorseError::NotSymmetric { row: r, col: c, diff });
                }
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut vecs: Vec<DVector<f64>> =
            order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
        reorthogonalize(&mut vecs);
        let mut values = Vec::with_capacity(n);
        for v in vecs.iter_mut() {
            if let Some(first) = v.iter().copied().find(|x| x.abs() > tol) {
                if first < 0.0 {
                    *v = -v.clone();
                }
            }
            // Rayleigh quotient of the cleaned vector.
            values.push(v.dot(&(&sym * &*v)));
        }
        for (k, w) in values.windows(2).enumerate() {
            if w[1] - w[0] <= 10.0 * tol {
                return Err(MorseError::DegenerateSpectrum(format!(
                    "eigenvalues {} and {} are closer than {:e}",
                    k + 1,
                    k + 2,
                    10.0 * tol
                )));
            }
        }
        if let Some(k) = values.iter().position(|x| x.abs() <= 10.0 * tol) {
            return Err(MorseError::DegenerateSpectrum(format!("eigenvalue {} is zero", k + 1)));
        }
        Ok(Spectrum { values, vectors: vecs.iter().map(|v| v.iter().copied().collect()).collect() })
    }
}

/// Two passes of modified Gram-Schmidt.
fn reorthogonalize(vecs: &mut [DVector<f64>]) {
    for _ in 0..2 {
        for i in 0..vecs.len() {
            for j in 0..i {
                let proj = vecs[i].dot(&vecs[j]);
                let wj = vecs[j].clone();
                vecs[i].axpy(-proj, &wj, 1.0);
            }
            let norm = vecs[i].norm();
            vecs[i] /= norm;
        }
    }
}

/// Critical point `[w_i]` of `Λ` on projective space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RpCriticalPoint {
    /// 1-based position in the ascending spectrum.
    pub eigen_index: usize,
    pub morse_index: usize,
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
}

pub fn rp_critical_points(model: &LinearFlowModel) -> Result<Vec<RpCriticalPoint>, MorseError> {
    let sp = model.spectrum()?;
    Ok(sp
        .values
        .iter()
        .zip(sp.vectors)
        .enumerate()
        .map(|(k, (&eigenvalue, eigenvector))| RpCriticalPoint {
            eigen_index: k + 1,
            morse_index: k,
            eigenvalue,
            eigenvector,
        })
        .collect())
}
