use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Eigenvalue floor used when repairing an indefinite covariance.
const EIGEN_FLOOR: f64 = 1e-10;

/// Parameters of one Gaussian component: mean, covariance and draw count.
#[derive(Debug, Clone, PartialEq)]
pub struct MvnSpec {
    pub mu: Array1<f64>,
    sigma: Array2<f64>,
    pub count: usize,
}

impl MvnSpec {
    /// Builds a spec from a covariance given as its upper triangle.
    ///
    /// Entries below the diagonal are ignored and replaced by their mirror.
    pub fn new(mu: Array1<f64>, sigma_upper: Array2<f64>, count: usize) -> Result<Self> {
        let n = mu.len();
        if n == 0 || sigma_upper.dim() != (n, n) {
            return Err(Error::InvalidParams(format!(
                "mean has dimension {n} but covariance is {:?}",
                sigma_upper.dim()
            )));
        }
        let mut sigma = sigma_upper;
        for i in 0..n {
            for j in (i + 1)..n {
                sigma[[j, i]] = sigma[[i, j]];
            }
        }
        Ok(MvnSpec { mu, sigma, count })
    }

    /// The symmetrized covariance.
    pub fn sigma(&self) -> &Array2<f64> {
        &self.sigma
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// A factor `L` with `L·Lᵀ` equal to the (possibly repaired) covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFactor {
    pub l: Array2<f64>,
    /// True when negative eigenvalues had to be clipped.
    pub repaired: bool,
}

/// Factors a symmetric covariance for sampling.
///
/// Positive-definite input uses Cholesky. A positive-semidefinite but
/// singular matrix is factored through its eigendecomposition as-is. A matrix
/// with a negative eigenvalue has every eigenvalue below `1e-10` clipped to
/// `1e-10` and is reassembled before factoring.
pub fn factor_covariance(sigma: &Array2<f64>) -> Result<CovarianceFactor> {
    let n = sigma.nrows();
    if sigma.iter().any(|v| !v.is_finite()) {
        return Err(Error::CovarianceRepair("non-finite entry".into()));
    }
    let s = DMatrix::from_fn(n, n, |i, j| sigma[[i, j]]);
    if let Some(ch) = s.clone().cholesky() {
        return Ok(CovarianceFactor {
            l: to_ndarray(&ch.l()),
            repaired: false,
        });
    }

    let eig = SymmetricEigen::new(s);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::CovarianceRepair(
            "eigendecomposition diverged".into(),
        ));
    }
    if min >= -1e-12 * scale {
        // semidefinite: V·diag(√λ)
        let root = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let l = &eig.eigenvectors * DMatrix::from_diagonal(&root);
        return Ok(CovarianceFactor {
            l: to_ndarray(&l),
            repaired: false,
        });
    }

    log::warn!("covariance has eigenvalue {min:.3e}; clipping to {EIGEN_FLOOR:e}");
    let clipped = eig.eigenvalues.map(|v| v.max(EIGEN_FLOOR));
    let rebuilt =
        &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
    let rebuilt = (&rebuilt + rebuilt.transpose()) * 0.5;
    match rebuilt.cholesky() {
        Some(ch) => Ok(CovarianceFactor {
            l: to_ndarray(&ch.l()),
            repaired: true,
        }),
        None => Err(Error::CovarianceRepair(format!(
            "matrix still indefinite after clipping (min eigenvalue {min:.3e})"
        ))),
    }
}

fn to_ndarray(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Draws `spec.count` points as `mu + L·z` with `z` standard normal.
///
/// The stream is consumed one coordinate at a time, row by row, so the output
/// is a pure function of the spec and the stream state.
pub fn sample_mvn<R: Rng + ?Sized>(spec: &MvnSpec, rng: &mut R) -> Result<Array2<f64>> {
    if spec.count == 0 {
        return Err(Error::InvalidParams("count must be at least 1".into()));
    }
    let factor = factor_covariance(&spec.sigma)?;
    let n = spec.dim();
    let mut out = Array2::<f64>::zeros((spec.count, n));
    let mut z = vec![0.0; n];
    for mut row in out.rows_mut() {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..n {
            let mut acc = 0.0;
            for (j, zj) in z.iter().enumerate() {
                let lij = factor.l[[i, j]];
                if lij != 0.0 {
                    acc += lij * zj;
                }
            }
            row[i] = spec.mu[i] + acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use ndarray::{array, Axis};

    fn reassemble(f: &CovarianceFactor) -> Array2<f64> {
        f.l.dot(&f.l.t())
    }

    #[test]
    fn upper_triangle_is_mirrored() {
        let s = MvnSpec::new(array![0.0, 0.0], array![[1.0, 0.5], [99.0, 2.0]], 1).unwrap();
        assert_eq!(s.sigma(), &array![[1.0, 0.5], [0.5, 2.0]]);
    }

    #[test]
    fn synthetic1_cluster2_needs_no_repair() {
        // leading minors 1, 1, 1
        let sigma = array![[1.0, 1.0, 1.0], [1.0, 2.0, 2.0], [1.0, 2.0, 3.0]];
        let f = factor_covariance(&sigma).unwrap();
        assert!(!f.repaired);
        let back = reassemble(&f);
        for (a, b) in back.iter().zip(sigma.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_covariance_returns_the_mean() {
        let spec = MvnSpec::new(array![1.5, -2.0], Array2::zeros((2, 2)), 1).unwrap();
        let x = sample_mvn(&spec, &mut stream(1)).unwrap();
        assert_eq!(x.row(0).to_vec(), vec![1.5, -2.0]);
    }

    #[test]
    fn indefinite_matrix_is_repaired() {
        let sigma = array![[1.0, 2.0], [2.0, 1.0]]; // eigenvalues 3, -1
        let f = factor_covariance(&sigma).unwrap();
        assert!(f.repaired);
        let back = reassemble(&f);
        let eig = SymmetricEigen::new(DMatrix::from_fn(2, 2, |i, j| back[[i, j]]));
        assert!(eig.eigenvalues.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn non_finite_covariance_fails() {
        let sigma = array![[f64::NAN, 0.0], [0.0, 1.0]];
        assert!(matches!(
            factor_covariance(&sigma),
            Err(Error::CovarianceRepair(_))
        ));
    }

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let spec = MvnSpec::new(array![0.0, 1.0], array![[1.0, 0.7], [0.0, 1.0]], 50).unwrap();
        let a = sample_mvn(&spec, &mut stream(9)).unwrap();
        let b = sample_mvn(&spec, &mut stream(9)).unwrap();
        assert_eq!(a, b);
    }

    // At m = 10 000 the mean has standard error 0.01 and a variance entry
    // about 0.014, so both bounds sit beyond 5 standard errors.
    #[test]
    fn standard_normal_moments() {
        let spec = MvnSpec::new(array![0.0, 0.0, 0.0], Array2::eye(3), 10_000).unwrap();
        for seed in 0..20 {
            let x = sample_mvn(&spec, &mut stream(seed)).unwrap();
            let mean = x.mean_axis(Axis(0)).unwrap();
            assert!(mean.iter().all(|m| m.abs() < 0.05), "seed {seed}: {mean}");
            let centered = &x - &mean;
            let cov = centered.t().dot(&centered) / (x.nrows() as f64 - 1.0);
            for ((i, j), c) in cov.indexed_iter() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 0.1, "seed {seed}: cov[{i}][{j}] = {c}");
            }
        }
    }
}
