//! Thin wrappers around the LAPACK-backed dense solvers plus a stochastic
//! Lanczos quadrature estimator for trace norms at dimensions where a full
//! eigendecomposition is out of reach.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigValsh, Eigh, UPLO};
use num_complex::Complex64;
use rand::Rng;

use crate::ensembles::SeedSpec;
use crate::error::{Error, Result};

/// Ascending eigenvalues of a real symmetric matrix.
pub fn eigvalsh_real(a: &Array2<f64>) -> Result<Vec<f64>> {
    let vals = a
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::Linalg(format!("dsyev failed on {}x{}: {e}", a.nrows(), a.ncols())))?;
    Ok(vals.to_vec())
}

/// Ascending eigenvalues of a complex Hermitian matrix.
pub fn eigvalsh_complex(a: &Array2<Complex64>) -> Result<Vec<f64>> {
    let vals = a
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::Linalg(format!("zheev failed on {}x{}: {e}", a.nrows(), a.ncols())))?;
    Ok(vals.to_vec())
}

/// Eigenvalues and eigenvectors of a real symmetric matrix (ascending).
pub fn eigh_real(a: &Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let (vals, vecs) = a
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Linalg(format!("dsyev (vectors) failed: {e}")))?;
    Ok((vals.to_vec(), vecs))
}

/// Full nonsymmetric complex eigendecomposition (right eigenvectors).
pub fn eig_complex(a: &Array2<Complex64>) -> Result<(Vec<Complex64>, Array2<Complex64>)> {
    let (vals, vecs) = a
        .eig()
        .map_err(|e| Error::Linalg(format!("zgeev failed on {}x{}: {e}", a.nrows(), a.ncols())))?;
    Ok((vals.to_vec(), vecs))
}

/// A @ conj(A)^T for a complex rectangular matrix, exact Hermitian symmetrized.
pub fn gram_complex(a: &Array2<Complex64>) -> Array2<Complex64> {
    let ah = a.t().mapv(|z| z.conj());
    let mut g = a.dot(&ah);
    hermitize_complex(&mut g);
    g
}

/// A @ A^T for a real rectangular matrix, exact symmetrized.
pub fn gram_real(a: &Array2<f64>) -> Array2<f64> {
    let mut g = a.dot(&a.t());
    hermitize_real(&mut g);
    g
}

pub fn hermitize_complex(m: &mut Array2<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

pub fn hermitize_real(m: &mut Array2<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// tr(B^3) for Hermitian B without forming B^3: one GEMM and a dot.
pub fn trace_cube_complex(b: &Array2<Complex64>) -> f64 {
    let b2 = b.dot(b);
    // tr(B^3) = sum_ij (B^2)_ij conj(B_ij) since B is Hermitian
    b2.iter()
        .zip(b.iter())
        .map(|(x, y)| (x * y.conj()).re)
        .sum()
}

pub fn trace_cube_real(b: &Array2<f64>) -> f64 {
    let b2 = b.dot(b);
    b2.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Symmetric linear operator given only through matrix-vector products.
pub trait SymOp: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &Array1<f64>) -> Array1<f64>;
}

/// Partial transpose of a low-rank real Gram matrix, applied matrix-free.
///
/// For `rho = sum_m v_m v_m^T` with each `v_m` reshaped to an `n1 x n2`
/// matrix `V_m`, the partially transposed operator acts on `W` (same shape)
/// as `W -> sum_m V_m W^T V_m`. One application costs `2 n3` small GEMMs
/// instead of touching an `(n1 n2)^2` dense matrix.
pub struct PtLowRankOp {
    slices: Vec<Array2<f64>>,
    n1: usize,
    n2: usize,
}

impl PtLowRankOp {
    /// `amps` is the `(n1*n2) x n3` coefficient matrix of the pure state.
    pub fn new(amps: &Array2<f64>, n1: usize, n2: usize) -> Result<Self> {
        if amps.nrows() != n1 * n2 {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix has {} rows, expected n1*n2 = {}",
                amps.nrows(),
                n1 * n2
            )));
        }
        let slices = (0..amps.ncols())
            .map(|m| {
                Array2::from_shape_fn((n1, n2), |(i, j)| amps[(i * n2 + j, m)])
            })
            .collect();
        Ok(Self { slices, n1, n2 })
    }
}

impl SymOp for PtLowRankOp {
    fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    fn apply(&self, x: &Array1<f64>) -> Array1<f64> {
        let w = x
            .view()
            .into_shape_with_order((self.n1, self.n2))
            .expect("vector length matches n1*n2");
        let wt = w.t();
        let mut acc = Array2::<f64>::zeros((self.n1, self.n2));
        for v in &self.slices {
            acc += &v.dot(&wt).dot(v);
        }
        acc.into_shape_with_order(self.n1 * self.n2)
            .expect("reshape back")
    }
}

/// Estimate `tr |B| = sum_i |mu_i|` of a symmetric operator by stochastic
/// Lanczos quadrature: Rademacher probes, fully reorthogonalized Lanczos,
/// Gauss quadrature through the tridiagonal eigendecomposition.
pub fn trace_norm_slq(op: &dyn SymOp, steps: usize, probes: usize, seed: SeedSpec) -> Result<f64> {
    let n = op.dim();
    let k = steps.min(n);
    let mut total = 0.0;
    for probe in 0..probes {
        let mut rng = SeedSpec {
            master_seed: seed.master_seed ^ 0x51c3_a11c_e5ed_5eed,
            trial_index: seed.trial_index.wrapping_mul(1000).wrapping_add(probe as u64),
        }
        .rng();
        let mut z = Array1::<f64>::zeros(n);
        for zi in z.iter_mut() {
            *zi = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        let z_norm_sq = n as f64;
        z.mapv_inplace(|v| v / (n as f64).sqrt());

        let mut basis: Vec<Array1<f64>> = Vec::with_capacity(k);
        let mut alphas: Vec<f64> = Vec::with_capacity(k);
        let mut betas: Vec<f64> = Vec::with_capacity(k);
        let mut v = z;
        let mut v_prev: Option<Array1<f64>> = None;
        for j in 0..k {
            basis.push(v.clone());
            let mut w = op.apply(&v);
            let alpha = w.dot(&v);
            alphas.push(alpha);
            w.scaled_add(-alpha, &v);
            if let Some(prev) = &v_prev {
                w.scaled_add(-betas[j - 1], prev);
            }
            // full reorthogonalization keeps the quadrature nodes honest
            for b in &basis {
                let c = w.dot(b);
                w.scaled_add(-c, b);
            }
            let beta = w.dot(&w).sqrt();
            if j + 1 == k || beta < 1e-14 {
                break;
            }
            betas.push(beta);
            w.mapv_inplace(|x| x / beta);
            v_prev = Some(std::mem::replace(&mut v, w));
        }

        let kk = alphas.len();
        let mut t = Array2::<f64>::zeros((kk, kk));
        for (i, a) in alphas.iter().enumerate() {
            t[(i, i)] = *a;
        }
        for (i, b) in betas.iter().take(kk.saturating_sub(1)).enumerate() {
            t[(i, i + 1)] = *b;
            t[(i + 1, i)] = *b;
        }
        let (nodes, vecs) = eigh_real(&t)?;
        let mut estimate = 0.0;
        for (idx, theta) in nodes.iter().enumerate() {
            let weight = vecs[(0, idx)] * vecs[(0, idx)];
            estimate += weight * theta.abs();
        }
        total += z_norm_sq * estimate;
    }
    Ok(total / probes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    struct DenseOp(Array2<f64>);
    impl SymOp for DenseOp {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn apply(&self, x: &Array1<f64>) -> Array1<f64> {
            self.0.dot(x)
        }
    }

    #[test]
    fn eigvalsh_diagonal() {
        let a = Array2::from_diag(&array![0.3, 0.1, 0.4, 0.2]);
        let vals = eigvalsh_real(&a).unwrap();
        assert_eq!(vals, vec![0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn trace_cube_matches_spectrum() {
        let mut a = Array2::from_shape_fn((6, 6), |(i, j)| ((i * 7 + j * 3) % 11) as f64 / 11.0);
        hermitize_real(&mut a);
        let direct = trace_cube_real(&a);
        let vals = eigvalsh_real(&a).unwrap();
        let from_spec: f64 = vals.iter().map(|x| x.powi(3)).sum();
        assert_relative_eq!(direct, from_spec, epsilon = 1e-10);
    }

    #[test]
    fn slq_recovers_trace_norm_of_sign_indefinite_matrix() {
        // Diagonally dominant with both signs: the probe variance is small,
        // so this isolates the |.| quadrature through the Lanczos nodes.
        let n = 24;
        let mut a = Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                (i as f64 - 11.5) / 12.0
            } else {
                0.02 * ((((i * 13 + j * 5) % 17) as f64 - 8.0) / 17.0)
            }
        });
        hermitize_real(&mut a);
        let vals = eigvalsh_real(&a).unwrap();
        let exact: f64 = vals.iter().map(|x| x.abs()).sum();
        let est = trace_norm_slq(
            &DenseOp(a),
            n,
            16,
            SeedSpec {
                master_seed: 5,
                trial_index: 0,
            },
        )
        .unwrap();
        assert_relative_eq!(est, exact, max_relative = 0.02);
    }
}
