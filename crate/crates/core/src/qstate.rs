//! States, reduced density matrices, the partial-transpose index map and
//! Hermitian spectra: the exact linear-algebra substrate for everything else.
//!
//! A tripartite pure state lives on subsystems of dimensions `(n1, n2, n3)`.
//! Amplitudes are stored row-major over the composite index `i * n3 + n`
//! with `i = i1 * n2 + i2` the pair index and `n` the environment index, so
//! the partial transpose is a pure integer permutation of matrix entries.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg;

/// Eigenvalues below this (on a trace-1 spectrum) count as genuinely negative.
pub const NPT_THRESHOLD: f64 = -1e-12;

const NORM_TOL: f64 = 1e-12;

/// Number field of the sampled state ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Complex,
    Real,
}

impl Field {
    pub fn label(&self) -> &'static str {
        match self {
            Field::Complex => "complex",
            Field::Real => "real",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Field::Complex),
            "real" => Ok(Field::Real),
            other => Err(Error::InvalidInput(format!(
                "unknown field '{other}', expected complex|real"
            ))),
        }
    }
}

/// Subsystem dimension bookkeeping for a tripartite split.
///
/// `n = n1 * n2` is the dimension of the pair kept after the trace and
/// `m = n * n3` the full Hilbert-space dimension. Local dimensions are
/// arbitrary (not only powers of two).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionDims {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl PartitionDims {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 < 1 || n2 < 1 || n3 < 1 {
            return Err(Error::InvalidInput(format!(
                "subsystem dimensions must be >= 1, got ({n1},{n2},{n3})"
            )));
        }
        Ok(Self { n1, n2, n3 })
    }

    /// Construct from qubit counts `l1`, `l2` and total `l` (so the traced
    /// block holds `l - l1 - l2` qubits).
    pub fn from_qubits(l1: u32, l2: u32, l: u32) -> Result<Self> {
        if l1 + l2 > l {
            return Err(Error::InvalidInput(format!(
                "qubit split ({l1},{l2}) exceeds total {l}"
            )));
        }
        if l >= 60 {
            return Err(Error::InvalidInput(format!("total qubit count {l} too large")));
        }
        Self::new(1 << l1, 1 << l2, 1 << (l - l1 - l2))
    }

    /// Pair dimension kept after tracing.
    pub fn n(&self) -> usize {
        self.n1 * self.n2
    }

    /// Full Hilbert-space dimension.
    pub fn m(&self) -> usize {
        self.n() * self.n3
    }

    /// Aspect ratio of the induced Wishart-type ensemble.
    pub fn q_ratio(&self) -> f64 {
        self.n3 as f64 / self.n() as f64
    }

    /// Critical split: the lower edge of the rescaled spectrum touches zero.
    pub fn is_critical(&self) -> bool {
        self.n3 == 4 * self.n()
    }
}

/// Amplitudes of a normalized pure state over `PartitionDims`.
#[derive(Debug, Clone)]
pub enum StateVector {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct PureState {
    pub dims: PartitionDims,
    pub amplitudes: StateVector,
}

impl PureState {
    pub fn from_complex(dims: PartitionDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.m() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for Hilbert dimension {}",
                amplitudes.len(),
                dims.m()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state norm^2 = {norm}, not 1 within {NORM_TOL}"
            )));
        }
        Ok(Self {
            dims,
            amplitudes: StateVector::Complex(amplitudes),
        })
    }

    pub fn from_real(dims: PartitionDims, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != dims.m() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for Hilbert dimension {}",
                amplitudes.len(),
                dims.m()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state norm^2 = {norm}, not 1 within {NORM_TOL}"
            )));
        }
        Ok(Self {
            dims,
            amplitudes: StateVector::Real(amplitudes),
        })
    }

    pub fn field(&self) -> Field {
        match self.amplitudes {
            StateVector::Complex(_) => Field::Complex,
            StateVector::Real(_) => Field::Real,
        }
    }

    /// Amplitude a_{i,n} at pair index `i` and environment index `n`.
    pub fn amp(&self, i: usize, n: usize) -> Complex64 {
        let idx = i * self.dims.n3 + n;
        match &self.amplitudes {
            StateVector::Complex(v) => v[idx],
            StateVector::Real(v) => Complex64::new(v[idx], 0.0),
        }
    }

    /// Reorder the tripartite tensor legs: `perm = [a, b, c]` makes the new
    /// subsystem 1 the old subsystem `a`, and so on (1-based labels 1..=3).
    pub fn permute_subsystems(&self, perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for p in perm {
            if !(1..=3).contains(&p) || seen[p - 1] {
                return Err(Error::InvalidInput(format!("invalid permutation {perm:?}")));
            }
            seen[p - 1] = true;
        }
        let old = [self.dims.n1, self.dims.n2, self.dims.n3];
        let new_dims = PartitionDims::new(old[perm[0] - 1], old[perm[1] - 1], old[perm[2] - 1])?;
        let strides_old = [old[1] * old[2], old[2], 1];
        let m = self.dims.m();
        let mut map = vec![0usize; m];
        let (na, nb, nc) = (new_dims.n1, new_dims.n2, new_dims.n3);
        for ia in 0..na {
            for ib in 0..nb {
                for ic in 0..nc {
                    let mut idx_old = 0;
                    let coords = [ia, ib, ic];
                    for (slot, &p) in perm.iter().enumerate() {
                        idx_old += coords[slot] * strides_old[p - 1];
                    }
                    map[(ia * nb + ib) * nc + ic] = idx_old;
                }
            }
        }
        let amplitudes = match &self.amplitudes {
            StateVector::Complex(v) => StateVector::Complex(map.iter().map(|&i| v[i]).collect()),
            StateVector::Real(v) => StateVector::Real(map.iter().map(|&i| v[i]).collect()),
        };
        Ok(Self {
            dims: new_dims,
            amplitudes,
        })
    }

    /// View the amplitudes as the `n x n3` coefficient matrix.
    pub fn coefficient_matrix_complex(&self) -> Array2<Complex64> {
        let (n, n3) = (self.dims.n(), self.dims.n3);
        match &self.amplitudes {
            StateVector::Complex(v) => {
                Array2::from_shape_vec((n, n3), v.clone()).expect("length checked at construction")
            }
            StateVector::Real(v) => Array2::from_shape_fn((n, n3), |(i, m)| {
                Complex64::new(v[i * n3 + m], 0.0)
            }),
        }
    }

    pub fn coefficient_matrix_real(&self) -> Option<Array2<f64>> {
        let (n, n3) = (self.dims.n(), self.dims.n3);
        match &self.amplitudes {
            StateVector::Real(v) => {
                Some(Array2::from_shape_vec((n, n3), v.clone()).expect("length checked"))
            }
            StateVector::Complex(_) => None,
        }
    }
}

/// Dense Hermitian matrix, real-symmetric or complex backed.
#[derive(Debug, Clone)]
pub enum HermitianMatrix {
    Real(Array2<f64>),
    Complex(Array2<Complex64>),
}

#[derive(Debug, Clone)]
pub struct HermitianOperator {
    data: HermitianMatrix,
}

impl HermitianOperator {
    pub fn from_real(m: Array2<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self {
            data: HermitianMatrix::Real(m),
        })
    }

    pub fn from_complex(m: Array2<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self {
            data: HermitianMatrix::Complex(m),
        })
    }

    pub fn dim(&self) -> usize {
        match &self.data {
            HermitianMatrix::Real(m) => m.nrows(),
            HermitianMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn data(&self) -> &HermitianMatrix {
        &self.data
    }

    pub fn as_complex(&self) -> Array2<Complex64> {
        match &self.data {
            HermitianMatrix::Real(m) => m.mapv(|x| Complex64::new(x, 0.0)),
            HermitianMatrix::Complex(m) => m.clone(),
        }
    }

    pub fn real_view(&self) -> Option<ArrayView2<'_, f64>> {
        match &self.data {
            HermitianMatrix::Real(m) => Some(m.view()),
            HermitianMatrix::Complex(_) => None,
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.data {
            HermitianMatrix::Real(m) => m.diag().sum(),
            HermitianMatrix::Complex(m) => m.diag().iter().map(|z| z.re).sum(),
        }
    }

    /// tr(H^2) through the squared Frobenius norm.
    pub fn trace_sq(&self) -> f64 {
        match &self.data {
            HermitianMatrix::Real(m) => m.iter().map(|x| x * x).sum(),
            HermitianMatrix::Complex(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    pub fn trace_cube(&self) -> f64 {
        match &self.data {
            HermitianMatrix::Real(m) => linalg::trace_cube_real(m),
            HermitianMatrix::Complex(m) => linalg::trace_cube_complex(m),
        }
    }

    /// Largest |H - H^dagger| entry.
    pub fn hermiticity_residual(&self) -> f64 {
        match &self.data {
            HermitianMatrix::Real(m) => {
                let mut r: f64 = 0.0;
                for i in 0..m.nrows() {
                    for j in i..m.ncols() {
                        r = r.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
                r
            }
            HermitianMatrix::Complex(m) => {
                let mut r: f64 = 0.0;
                for i in 0..m.nrows() {
                    for j in i..m.ncols() {
                        r = r.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
                r
            }
        }
    }

    /// Flat array-of-rows JSON dump for debugging. Complex entries come out
    /// as `[re, im]` pairs, real entries as plain numbers.
    pub fn to_json_rows(&self) -> Value {
        match &self.data {
            HermitianMatrix::Real(m) => json!(m
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect::<Vec<_>>()),
            HermitianMatrix::Complex(m) => json!(m
                .rows()
                .into_iter()
                .map(|r| r.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        }
    }
}

/// Sorted real spectrum of a Hermitian operator, with the rescaled copy
/// `x_i = dim * value_i` used for comparisons against the limit laws.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub values: Vec<f64>,
    pub scaled: Vec<f64>,
    pub min_value: f64,
}

impl SpectrumSample {
    pub fn new(mut values: Vec<f64>, scale_dim: usize) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN eigenvalues"));
        let scaled = values.iter().map(|v| v * scale_dim as f64).collect();
        let min_value = values.first().copied().unwrap_or(f64::NAN);
        Self {
            values,
            scaled,
            min_value,
        }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn moment(&self, m: u32) -> f64 {
        self.values.iter().map(|v| v.powi(m as i32)).sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reduced density matrix of the pair block: rho_{ij} = sum_m a_{im} conj(a_{jm}).
pub fn partial_trace(state: &PureState) -> Result<HermitianOperator> {
    match &state.amplitudes {
        StateVector::Real(_) => {
            let a = state.coefficient_matrix_real().expect("real state");
            HermitianOperator::from_real(linalg::gram_real(&a))
        }
        StateVector::Complex(_) => {
            let a = state.coefficient_matrix_complex();
            HermitianOperator::from_complex(linalg::gram_complex(&a))
        }
    }
}

/// Index map of the partial transpose on the second factor:
/// `(i, j) -> (g(i,j), g(j,i))` with `g(i,j) = i - i mod n2 + j mod n2`.
/// The map is an involution on the index pairs.
pub fn pt_index_map(i: usize, j: usize, n2: usize) -> (usize, usize) {
    (i - i % n2 + j % n2, j - j % n2 + i % n2)
}

/// Partial transpose over the second (trailing) factor of the pair.
///
/// Entry-wise this is `out[g(i,j), g(j,i)] = rho[i, j]`, equivalently a
/// transpose of every `n2 x n2` block; trace and tr(.^2) are preserved
/// exactly up to the permutation.
pub fn partial_transpose(rho: &HermitianOperator, dims: PartitionDims) -> Result<HermitianOperator> {
    let n = dims.n();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} but n1*n2 = {n}",
            rho.dim()
        )));
    }
    match rho.data() {
        HermitianMatrix::Real(m) => {
            let out = transpose_blocks(m, dims.n1, dims.n2);
            HermitianOperator::from_real(out)
        }
        HermitianMatrix::Complex(m) => {
            let out = transpose_blocks(m, dims.n1, dims.n2);
            HermitianOperator::from_complex(out)
        }
    }
}

fn transpose_blocks<T: Copy>(m: &Array2<T>, n1: usize, n2: usize) -> Array2<T> {
    let n = n1 * n2;
    let mut out = m.clone();
    for bi in 0..n1 {
        for bj in 0..n1 {
            let (r0, c0) = (bi * n2, bj * n2);
            for a in 0..n2 {
                for b in 0..n2 {
                    out[(r0 + a, c0 + b)] = m[(r0 + b, c0 + a)];
                }
            }
        }
    }
    debug_assert_eq!(out.nrows(), n);
    out
}

/// Full real spectrum of a Hermitian operator, ascending.
///
/// The input is re-symmetrized as (H + H^dagger)/2 before the solve so that
/// accumulated float error cannot break the solver's assumptions.
pub fn hermitian_spectrum(h: &HermitianOperator) -> Result<SpectrumSample> {
    let dim = h.dim();
    let values = match h.data() {
        HermitianMatrix::Real(m) => {
            let mut s = m.clone();
            linalg::hermitize_real(&mut s);
            linalg::eigvalsh_real(&s)?
        }
        HermitianMatrix::Complex(m) => {
            let mut s = m.clone();
            linalg::hermitize_complex(&mut s);
            linalg::eigvalsh_complex(&s)?
        }
    };
    Ok(SpectrumSample::new(values, dim))
}

/// Partial-transpose spectrum of a pure bipartite state directly from its
/// Schmidt eigenvalues: `{lambda_i} U {+-sqrt(lambda_i lambda_j), i < j}`,
/// zero-padded to `n1 * n2` values. No matrix is built.
pub fn schmidt_pt_spectrum(lambdas: &[f64], n1: usize, n2: usize) -> Result<SpectrumSample> {
    if lambdas.len() > n1.min(n2) {
        return Err(Error::InvalidInput(format!(
            "{} Schmidt values exceed min(n1, n2) = {}",
            lambdas.len(),
            n1.min(n2)
        )));
    }
    if lambdas.iter().any(|&l| l < -1e-12) {
        return Err(Error::InvalidInput("negative Schmidt eigenvalue".into()));
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "Schmidt eigenvalues sum to {total}, not 1"
        )));
    }
    let clipped: Vec<f64> = lambdas.iter().map(|&l| l.max(0.0)).collect();
    let mut values = clipped.clone();
    for i in 0..clipped.len() {
        for j in (i + 1)..clipped.len() {
            let root = (clipped[i] * clipped[j]).sqrt();
            values.push(root);
            values.push(-root);
        }
    }
    values.resize(n1 * n2, 0.0);
    Ok(SpectrumSample::new(values, n1 * n2))
}

/// Schmidt eigenvalues of a bipartite pure state (spectrum of the smaller
/// reduced block).
pub fn schmidt_eigenvalues(state: &PureState) -> Result<Vec<f64>> {
    // reuse the tripartite partial trace with the pair = subsystem 1 alone
    let dims = state.dims;
    if dims.n3 != 1 {
        return Err(Error::InvalidInput(
            "schmidt_eigenvalues expects a pure pair state (n3 = 1)".into(),
        ));
    }
    let bipartite = PureState {
        dims: PartitionDims::new(dims.n1, 1, dims.n2)?,
        amplitudes: state.amplitudes.clone(),
    };
    let rho1 = partial_trace(&bipartite)?;
    Ok(hermitian_spectrum(&rho1)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn basis_state(dims: PartitionDims, k: usize) -> PureState {
        let mut v = vec![Complex64::new(0.0, 0.0); dims.m()];
        v[k] = Complex64::new(1.0, 0.0);
        PureState::from_complex(dims, v).unwrap()
    }

    #[test]
    fn dims_bookkeeping() {
        let d = PartitionDims::from_qubits(2, 2, 10).unwrap();
        assert_eq!((d.n1, d.n2, d.n3), (4, 4, 64));
        assert_eq!(d.n(), 16);
        assert_eq!(d.m(), 1024);
        assert!(d.is_critical());
        assert!(PartitionDims::new(0, 2, 2).is_err());
        assert!(PartitionDims::from_qubits(3, 3, 5).is_err());
    }

    #[test]
    fn partial_trace_product_state_is_rank_one() {
        // |0>_{12} x |phi>_3 reduces to |0><0|
        let dims = PartitionDims::new(2, 2, 3).unwrap();
        let phi = [0.6, 0.0, 0.8];
        let mut v = vec![Complex64::new(0.0, 0.0); dims.m()];
        for (n, &p) in phi.iter().enumerate() {
            v[n] = Complex64::new(p, 0.0);
        }
        let state = PureState::from_complex(dims, v).unwrap();
        let rho = partial_trace(&state).unwrap();
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        let spec = hermitian_spectrum(&rho).unwrap();
        assert_relative_eq!(spec.values[3], 1.0, epsilon = 1e-12);
        assert!(spec.values[..3].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn partial_trace_no_environment_is_projector() {
        let dims = PartitionDims::new(2, 2, 1).unwrap();
        let amp = 0.5_f64;
        let v = vec![Complex64::new(amp, 0.0); 4];
        let state = PureState::from_complex(dims, v).unwrap();
        let rho = partial_trace(&state).unwrap();
        // pure projector: rho^2 = rho
        assert_relative_eq!(rho.trace_sq(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_rejects_wrong_length() {
        let dims = PartitionDims::new(2, 2, 2).unwrap();
        assert!(PureState::from_complex(dims, vec![Complex64::new(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn pt_index_map_basics() {
        for i in 0..16 {
            assert_eq!(pt_index_map(i, i, 4), (i, i), "g(i,i) = i");
        }
        assert_eq!(pt_index_map(0, 1, 2), (1, 0));
        // involution on random pairs
        for i in 0..16 {
            for j in 0..16 {
                let (ti, tj) = pt_index_map(i, j, 4);
                assert_eq!(pt_index_map(ti, tj, 4), (i, j));
            }
        }
    }

    #[test]
    fn bell_state_pt_spectrum() {
        let dims = PartitionDims::new(2, 2, 1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        // (|00> + |11>)/sqrt(2): pair index i = i1*2 + i2
        let mut v = vec![Complex64::new(0.0, 0.0); 4];
        v[0] = Complex64::new(r, 0.0);
        v[3] = Complex64::new(r, 0.0);
        let state = PureState::from_complex(dims, v).unwrap();
        let rho = partial_trace(&state).unwrap();
        let pt = partial_transpose(&rho, dims).unwrap();
        let spec = hermitian_spectrum(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in spec.values.iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_transpose_involution_bitwise() {
        let dims = PartitionDims::new(3, 2, 2).unwrap();
        let mut m = Array2::from_shape_fn((6, 6), |(i, j)| {
            Complex64::new((i * 6 + j) as f64, (i as f64) - (j as f64))
        });
        linalg::hermitize_complex(&mut m);
        let h = HermitianOperator::from_complex(m.clone()).unwrap();
        let once = partial_transpose(&h, dims).unwrap();
        let twice = partial_transpose(&once, dims).unwrap();
        assert_eq!(twice.as_complex(), m);
    }

    #[test]
    fn partial_transpose_separable_stays_positive() {
        // product state |0><0| x |+><+| has nonnegative PT spectrum
        let dims = PartitionDims::new(2, 2, 1).unwrap();
        let state = basis_state(dims, 0);
        let rho = partial_trace(&state).unwrap();
        let pt = partial_transpose(&rho, dims).unwrap();
        let spec = hermitian_spectrum(&pt).unwrap();
        assert!(spec.min_value > NPT_THRESHOLD);
    }

    #[test]
    fn partial_transpose_rejects_bad_dims() {
        let dims = PartitionDims::new(2, 2, 1).unwrap();
        let h = HermitianOperator::from_real(Array2::eye(6)).unwrap();
        assert!(partial_transpose(&h, dims).is_err());
    }

    #[test]
    fn spectrum_of_diagonal_and_identity() {
        let h = HermitianOperator::from_real(Array2::from_diag(&ndarray::arr1(&[
            0.1, 0.2, 0.3, 0.4,
        ])))
        .unwrap();
        let spec = hermitian_spectrum(&h).unwrap();
        assert_eq!(spec.values, vec![0.1, 0.2, 0.3, 0.4]);
        assert_relative_eq!(spec.scaled[0], 0.4, epsilon = 1e-15);

        let n = 8;
        let h = HermitianOperator::from_real(Array2::eye(n) / n as f64).unwrap();
        let spec = hermitian_spectrum(&h).unwrap();
        for v in &spec.values {
            assert_relative_eq!(*v, 1.0 / n as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn schmidt_pt_spectrum_trivial_cases() {
        let spec = schmidt_pt_spectrum(&[1.0], 2, 2).unwrap();
        assert_eq!(spec.values, vec![0.0, 0.0, 0.0, 1.0]);

        let spec = schmidt_pt_spectrum(&[0.5, 0.5], 2, 2).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in spec.values.iter().zip(expect) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn schmidt_pt_spectrum_rejects_bad_input() {
        assert!(schmidt_pt_spectrum(&[0.7, 0.7], 2, 2).is_err());
        assert!(schmidt_pt_spectrum(&[1.2, -0.2], 2, 2).is_err());
        assert!(schmidt_pt_spectrum(&[0.5, 0.3, 0.2], 2, 4).is_err());
    }

    #[test]
    fn permute_subsystems_round_trip() {
        let dims = PartitionDims::new(2, 3, 4).unwrap();
        let m = dims.m();
        let mut v: Vec<Complex64> = (0..m)
            .map(|k| Complex64::new(k as f64 + 1.0, (k % 5) as f64))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        let state = PureState::from_complex(dims, v.clone()).unwrap();
        let cycled = state
            .permute_subsystems([2, 3, 1])
            .unwrap()
            .permute_subsystems([2, 3, 1])
            .unwrap()
            .permute_subsystems([2, 3, 1])
            .unwrap();
        match (&state.amplitudes, &cycled.amplitudes) {
            (StateVector::Complex(a), StateVector::Complex(b)) => assert_eq!(a, b),
            _ => panic!("variant changed"),
        }
    }
}
