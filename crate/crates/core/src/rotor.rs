//! Three coupled kicked rotors: the classical symplectic map on the
//! 6-torus, the quantized one-step propagator in the position basis, and a
//! pipeline that diagonalizes the propagator and feeds every eigenstate
//! through the reduced-density / partial-transpose measures.

use ndarray::{linalg::kron, Array2};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{measure_state, MeasureReport};
use crate::qstate::{PartitionDims, PureState};

/// Largest propagator dimension the dense pipeline accepts.
pub const MAX_DENSE_DIM: usize = 4096;

/// Kick strengths, pair couplings, Hilbert dimensions and the quantization
/// phase of the three coupled rotors.
#[derive(Debug, Clone, Copy)]
pub struct RotorParams {
    /// Kick strengths (K1, K2, K3).
    pub kicks: [f64; 3],
    /// Couplings (b12, b13, b23); symmetric by construction.
    pub couplings: [f64; 3],
    /// Hilbert dimensions (N1, N2, N3).
    pub dims: [usize; 3],
    /// Bloch phase breaking parity; 0.35 unless stated otherwise.
    pub alpha: f64,
}

impl RotorParams {
    pub fn new(dims: [usize; 3], kicks: [f64; 3], couplings: [f64; 3], alpha: f64) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidInput(format!(
                "rotor dimensions must be >= 2, got {dims:?}"
            )));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidInput(format!("alpha = {alpha} not in [0, 1)")));
        }
        Ok(Self {
            kicks,
            couplings,
            dims,
            alpha,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn partition(&self) -> PartitionDims {
        PartitionDims::new(self.dims[0], self.dims[1], self.dims[2])
            .expect("validated at construction")
    }

    /// Coupling between rotors `i` and `j` (0-based, i != j).
    fn b(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.couplings[0],
            (0, 2) => self.couplings[1],
            (1, 2) => self.couplings[2],
            _ => unreachable!("i == j has no coupling"),
        }
    }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    // x.floor() on exact integers gives r = 0; negative inputs stay in [0,1)
    if r >= 1.0 {
        r - 1.0
    } else {
        r
    }
}

/// One step of the classical coupled map: kick the momenta with the local
/// force plus the pair couplings, then advance the angles with the new
/// momenta; both coordinates wrapped back onto the unit torus.
pub fn classical_step(state: [f64; 6], params: &RotorParams) -> [f64; 6] {
    let q = [state[0], state[2], state[4]];
    let p = [state[1], state[3], state[5]];
    let mut p_new = [0.0; 3];
    for i in 0..3 {
        let mut kick = params.kicks[i] / TAU * (TAU * q[i]).sin();
        for j in 0..3 {
            if j != i {
                kick += params.b(i, j) / TAU * (TAU * (q[i] + q[j])).sin();
            }
        }
        p_new[i] = wrap_unit(p[i] + kick);
    }
    let mut out = [0.0; 6];
    for i in 0..3 {
        out[2 * i] = wrap_unit(q[i] + p_new[i]);
        out[2 * i + 1] = p_new[i];
    }
    out
}

/// One-step propagator of a single kicked rotor in the position basis:
/// U(n', n) = e^{-i pi/4}/sqrt(N) exp[-i N K/(2 pi) cos(2 pi (n+alpha)/N)]
///            exp[i pi (n'-n)^2 / N].
pub fn single_map_unitary(kick: f64, n: usize, alpha: f64) -> Array2<Complex64> {
    let nf = n as f64;
    let norm = 1.0 / nf.sqrt();
    let corner = Complex64::from_polar(norm, -PI / 4.0);
    let kick_phase: Vec<Complex64> = (0..n)
        .map(|col| {
            let arg = -nf * kick / TAU * (TAU * (col as f64 + alpha) / nf).cos();
            Complex64::from_polar(1.0, arg)
        })
        .collect();
    Array2::from_shape_fn((n, n), |(row, col)| {
        let d = row as f64 - col as f64;
        corner * kick_phase[col] * Complex64::from_polar(1.0, PI * d * d / nf)
    })
}

/// The quantized coupled map.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    pub matrix: Array2<Complex64>,
    pub params: RotorParams,
}

impl FloquetOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |(U^dagger U - I)_{ij}|.
    pub fn unitarity_residual(&self) -> f64 {
        let uh = self.matrix.t().mapv(|z| z.conj());
        let prod = uh.dot(&self.matrix);
        let n = prod.nrows();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                r = r.max((prod[(i, j)] - expect).norm());
            }
        }
        r
    }
}

/// Build the coupled propagator: the tensor product of the three single maps
/// times the diagonal pair-coupling phases
/// exp{-i sqrt(Ni Nj) b_ij/(2 pi) cos[2 pi ((n_i+alpha)/N_i + (n_j+alpha)/N_j)]}.
pub fn coupled_unitary(params: &RotorParams) -> Result<FloquetOperator> {
    let dim = params.total_dim();
    if dim > MAX_DENSE_DIM {
        return Err(Error::InvalidInput(format!(
            "propagator dimension {dim} exceeds the dense limit {MAX_DENSE_DIM}; \
             reduce N1*N2*N3"
        )));
    }
    let singles: Vec<Array2<Complex64>> = (0..3)
        .map(|i| single_map_unitary(params.kicks[i], params.dims[i], params.alpha))
        .collect();
    let mut u = kron(&kron(&singles[0], &singles[1]), &singles[2]);

    let [n1, n2, n3] = params.dims;
    let alpha = params.alpha;
    let angle = |n: usize, dim: usize| (n as f64 + alpha) / dim as f64;
    let mut col_phase = vec![Complex64::new(1.0, 0.0); dim];
    for (col, phase) in col_phase.iter_mut().enumerate() {
        let a = col / (n2 * n3);
        let b = (col / n3) % n2;
        let c = col % n3;
        let coords = [(a, n1), (b, n2), (c, n3)];
        let mut arg = 0.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let scale = ((coords[i].1 * coords[j].1) as f64).sqrt();
                arg -= scale * params.b(i, j) / TAU
                    * (TAU * (angle(coords[i].0, coords[i].1) + angle(coords[j].0, coords[j].1)))
                        .cos();
            }
        }
        *phase = Complex64::from_polar(1.0, arg);
    }
    for mut row in u.rows_mut() {
        for (col, v) in row.iter_mut().enumerate() {
            *v *= col_phase[col];
        }
    }
    Ok(FloquetOperator {
        matrix: u,
        params: *params,
    })
}

/// Every eigenstate of the propagator, measured as a tripartite pure state.
#[derive(Debug)]
pub struct EigenstateStats {
    pub reports: Vec<MeasureReport>,
    pub eigenvalues: Vec<Complex64>,
    pub unitarity_residual: f64,
}

impl EigenstateStats {
    pub fn mean_log_negativity(&self) -> f64 {
        self.reports.iter().map(|r| r.log_negativity).sum::<f64>() / self.reports.len() as f64
    }

    pub fn npt_fraction(&self) -> f64 {
        self.reports.iter().filter(|r| r.is_npt).count() as f64 / self.reports.len() as f64
    }

    pub fn mean_skewness(&self) -> f64 {
        self.reports.iter().map(|r| r.skewness).sum::<f64>() / self.reports.len() as f64
    }
}

/// Dense diagonalization of the propagator followed by the full measure
/// pipeline on each eigenvector.
pub fn eigenstate_pipeline(op: &FloquetOperator) -> Result<EigenstateStats> {
    let residual = op.unitarity_residual();
    if residual > 1e-10 {
        return Err(Error::Numerics(format!(
            "propagator unitarity residual {residual:e} exceeds 1e-10"
        )));
    }
    let (eigenvalues, vectors) = linalg::eig_complex(&op.matrix)?;
    for (k, ev) in eigenvalues.iter().enumerate() {
        if (ev.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::Numerics(format!(
                "eigenvalue {k} has modulus {} (non-unitary spectrum)",
                ev.norm()
            )));
        }
    }
    let dims = op.params.partition();
    let mut reports = Vec::with_capacity(eigenvalues.len());
    for (k, col) in vectors.columns().into_iter().enumerate() {
        let mut amps: Vec<Complex64> = col.to_vec();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        let state = PureState::from_complex(dims, amps)?;
        reports.push(measure_state(&state, k as u64)?);
    }
    Ok(EigenstateStats {
        reports,
        eigenvalues,
        unitarity_residual: residual,
    })
}
