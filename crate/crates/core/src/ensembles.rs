//! Reproducible random sources: Haar-uniform pure states (complex and real),
//! Gaussian Hermitian ensembles with pinned entry variances, and the shifted
//! model `B = A + I/N` whose spectrum mimics a partially transposed reduced
//! density matrix.
//!
//! Every sample is a pure function of a `SeedSpec`. Distinct trial indices
//! select distinct ChaCha streams under one master key, so a run is
//! bit-reproducible no matter how trials are scheduled across workers.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qstate::{Field, HermitianOperator, PartitionDims, PureState};

/// Addresses one trial's private random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    /// Counter-based substream: the master seed keys the generator, the
    /// trial index picks the stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// Symmetry class of the Gaussian ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaClass {
    /// Real symmetric (orthogonal class, beta = 1).
    Goe,
    /// Complex Hermitian (unitary class, beta = 2).
    Gue,
}

impl BetaClass {
    pub fn beta(&self) -> u8 {
        match self {
            BetaClass::Goe => 1,
            BetaClass::Gue => 2,
        }
    }

    pub fn from_beta(beta: u8) -> Result<Self> {
        match beta {
            1 => Ok(BetaClass::Goe),
            2 => Ok(BetaClass::Gue),
            other => Err(Error::InvalidInput(format!("beta must be 1 or 2, got {other}"))),
        }
    }

    pub fn for_field(field: Field) -> Self {
        match field {
            Field::Complex => BetaClass::Gue,
            Field::Real => BetaClass::Goe,
        }
    }
}

/// Entry variances for `sample_gauss`: diagonal entries are N(0, sigma2);
/// off-diagonal components (real and imaginary parts for the unitary class,
/// the single real part for the orthogonal class) are N(0, sigma2/2).
#[derive(Debug, Clone, Copy)]
pub struct GaussEnsembleParams {
    pub dim: usize,
    pub sigma2: f64,
    pub beta_class: BetaClass,
}

impl GaussEnsembleParams {
    pub fn new(dim: usize, sigma2: f64, beta_class: BetaClass) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidInput("dim must be >= 1".into()));
        }
        if sigma2 <= 0.0 {
            return Err(Error::InvalidInput(format!("sigma2 = {sigma2} must be > 0")));
        }
        Ok(Self {
            dim,
            sigma2,
            beta_class,
        })
    }

    /// Ensemble mean of tr(A^2) under these conventions: N^2 sigma2 for the
    /// unitary class and N(N+1) sigma2 / 2 for the orthogonal class.
    pub fn mean_trace_sq(&self) -> f64 {
        let n = self.dim as f64;
        match self.beta_class {
            BetaClass::Gue => n * n * self.sigma2,
            BetaClass::Goe => n * (n + 1.0) * self.sigma2 / 2.0,
        }
    }
}

/// Haar-uniform pure state: iid standard normals, normalized.
pub fn sample_haar_state(dims: PartitionDims, field: Field, seed: SeedSpec) -> PureState {
    let m = dims.m();
    let mut rng = seed.rng();
    match field {
        Field::Complex => {
            let mut v: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in v.iter_mut() {
                *z /= norm;
            }
            PureState::from_complex(dims, v).expect("normalized by construction")
        }
        Field::Real => {
            let mut v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
            PureState::from_real(dims, v).expect("normalized by construction")
        }
    }
}

/// One Gaussian Hermitian (or real symmetric) sample.
pub fn sample_gauss(params: GaussEnsembleParams, seed: SeedSpec) -> HermitianOperator {
    let n = params.dim;
    let sd = params.sigma2.sqrt();
    let sd_off = (params.sigma2 / 2.0).sqrt();
    let mut rng = seed.rng();
    match params.beta_class {
        BetaClass::Gue => {
            let mut m = Array2::<Complex64>::zeros((n, n));
            for i in 0..n {
                let d: f64 = rng.sample(StandardNormal);
                m[(i, i)] = Complex64::new(sd * d, 0.0);
                for j in (i + 1)..n {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let z = Complex64::new(sd_off * re, sd_off * im);
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            HermitianOperator::from_complex(m).expect("square by construction")
        }
        BetaClass::Goe => {
            let mut m = Array2::<f64>::zeros((n, n));
            for i in 0..n {
                let d: f64 = rng.sample(StandardNormal);
                m[(i, i)] = sd * d;
                for j in (i + 1)..n {
                    let x: f64 = rng.sample(StandardNormal);
                    m[(i, j)] = sd_off * x;
                    m[(j, i)] = sd_off * x;
                }
            }
            HermitianOperator::from_real(m).expect("square by construction")
        }
    }
}

/// Shifted-ensemble surrogate for a partially transposed reduced density
/// matrix: `B = A + I/N` with the variance of `A` chosen so that
/// `<tr(A^2)> = 1/n3` exactly for the given symmetry class. Then `<tr B> = 1`
/// and the rescaled spectrum `x = N mu` follows a semicircle of radius
/// `2 sqrt(n1 n2 / n3)` centered at 1.
pub fn sample_shifted_model(
    dims: PartitionDims,
    beta_class: BetaClass,
    seed: SeedSpec,
) -> Result<HermitianOperator> {
    let n = dims.n();
    let nf = n as f64;
    let sigma2 = match beta_class {
        BetaClass::Gue => 1.0 / (nf * nf * dims.n3 as f64),
        BetaClass::Goe => 2.0 / (nf * (nf + 1.0) * dims.n3 as f64),
    };
    let params = GaussEnsembleParams::new(n, sigma2, beta_class)?;
    let a = sample_gauss(params, seed);
    let shift = 1.0 / nf;
    Ok(match a.data() {
        crate::qstate::HermitianMatrix::Real(m) => {
            let mut b = m.clone();
            for i in 0..n {
                b[(i, i)] += shift;
            }
            HermitianOperator::from_real(b).expect("square")
        }
        crate::qstate::HermitianMatrix::Complex(m) => {
            let mut b = m.clone();
            for i in 0..n {
                b[(i, i)] += Complex64::new(shift, 0.0);
            }
            HermitianOperator::from_complex(b).expect("square")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{hermitian_spectrum, partial_trace, StateVector};
    use approx::assert_relative_eq;

    #[test]
    fn identical_seed_reproduces_bitwise() {
        let dims = PartitionDims::new(2, 2, 4).unwrap();
        let s = SeedSpec::new(42, 7);
        let a = sample_haar_state(dims, Field::Complex, s);
        let b = sample_haar_state(dims, Field::Complex, s);
        match (&a.amplitudes, &b.amplitudes) {
            (StateVector::Complex(x), StateVector::Complex(y)) => assert_eq!(x, y),
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let n = 4096;
        let mut r0 = SeedSpec::new(9, 0).rng();
        let mut r1 = SeedSpec::new(9, 1).rng();
        let x: Vec<f64> = (0..n).map(|_| r0.sample::<f64, _>(StandardNormal)).collect();
        let y: Vec<f64> = (0..n).map(|_| r1.sample::<f64, _>(StandardNormal)).collect();
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let corr = dot / n as f64;
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr = {corr}");
    }

    #[test]
    fn single_amplitude_state_has_unit_modulus() {
        let dims = PartitionDims::new(1, 1, 1).unwrap();
        let s = sample_haar_state(dims, Field::Complex, SeedSpec::new(3, 0));
        assert_relative_eq!(s.amp(0, 0).norm(), 1.0, epsilon = 1e-15);
        let s = sample_haar_state(dims, Field::Real, SeedSpec::new(3, 1));
        assert_relative_eq!(s.amp(0, 0).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn component_mean_square_is_one_over_m() {
        // <|a|^2> = 1/M by exchange symmetry of the sphere
        let dims = PartitionDims::new(2, 2, 4).unwrap();
        let m = dims.m() as f64;
        let trials = 2000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let s = sample_haar_state(dims, Field::Complex, SeedSpec::new(100, t));
            let v = s.amp(1, 2).norm_sqr();
            acc += v;
            acc2 += v * v;
        }
        let mean = acc / trials as f64;
        let se = ((acc2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!(
            (mean - 1.0 / m).abs() < 3.0 * se,
            "mean {mean} vs {} (se {se})",
            1.0 / m
        );
    }

    #[test]
    fn scalar_gauss_sample_is_normal() {
        let params = GaussEnsembleParams::new(1, 4.0, BetaClass::Gue).unwrap();
        let trials = 4000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let h = sample_gauss(params, SeedSpec::new(5, t));
            let x = h.trace();
            acc += x;
            acc2 += x * x;
        }
        let mean = acc / trials as f64;
        let var = acc2 / trials as f64 - mean * mean;
        assert!(mean.abs() < 3.0 * (4.0_f64 / trials as f64).sqrt());
        assert!((var - 4.0).abs() < 0.4, "var = {var}");
    }

    #[test]
    fn gue_trace_sq_matches_identity() {
        // <tr A^2> = N^2 sigma^2; fixed seeds, 3 SE window
        let n = 64;
        let sigma2 = 1.0 / ((n * n) as f64 * 16.0);
        let params = GaussEnsembleParams::new(n, sigma2, BetaClass::Gue).unwrap();
        let trials = 2000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let a = sample_gauss(params, SeedSpec::new(77, t));
            let x = a.trace_sq();
            acc += x;
            acc2 += x * x;
        }
        let mean = acc / trials as f64;
        let se = ((acc2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert_relative_eq!(params.mean_trace_sq(), 1.0 / 16.0, epsilon = 1e-15);
        assert!(
            (mean - 1.0 / 16.0).abs() < 3.0 * se,
            "mean {mean}, se {se}"
        );
    }

    #[test]
    fn goe_trace_sq_matches_identity() {
        let n = 32;
        let sigma2 = 1e-3;
        let params = GaussEnsembleParams::new(n, sigma2, BetaClass::Goe).unwrap();
        let expect = params.mean_trace_sq();
        let trials = 3000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let a = sample_gauss(params, SeedSpec::new(78, t));
            let x = a.trace_sq();
            acc += x;
            acc2 += x * x;
        }
        let mean = acc / trials as f64;
        let se = ((acc2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!((mean - expect).abs() < 3.0 * se, "mean {mean} vs {expect}");
    }

    #[test]
    fn gue_semicircle_support() {
        // sigma = 1/sqrt(N): eigenvalues concentrate on [-2, 2]
        let n = 512;
        let params = GaussEnsembleParams::new(n, 1.0 / n as f64, BetaClass::Gue).unwrap();
        let a = sample_gauss(params, SeedSpec::new(11, 0));
        let spec = hermitian_spectrum(&a).unwrap();
        assert!(spec.values[0] > -2.2 && spec.values[0] < -1.8);
        assert!(spec.values[n - 1] < 2.2 && spec.values[n - 1] > 1.8);
    }

    #[test]
    fn shifted_model_shifts_eigenvalues_exactly() {
        let dims = PartitionDims::new(2, 2, 8).unwrap();
        let seed = SeedSpec::new(21, 3);
        let b = sample_shifted_model(dims, BetaClass::Gue, seed).unwrap();
        let n = dims.n();
        let sigma2 = 1.0 / ((n * n) as f64 * dims.n3 as f64);
        let a = sample_gauss(
            GaussEnsembleParams::new(n, sigma2, BetaClass::Gue).unwrap(),
            seed,
        );
        let sb = hermitian_spectrum(&b).unwrap();
        let sa = hermitian_spectrum(&a).unwrap();
        for (x, y) in sb.values.iter().zip(sa.values.iter()) {
            assert_relative_eq!(*x, y + 1.0 / n as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn subsystem_entropy_matches_exact_average() {
        // dims (2,1,4): subsystem of dimension 2 against environment 4;
        // exact mean entropy = 1/5 + 1/6 + 1/7
        let dims = PartitionDims::new(2, 1, 4).unwrap();
        let expect = 1.0 / 5.0 + 1.0 / 6.0 + 1.0 / 7.0;
        let trials = 20_000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let s = sample_haar_state(dims, Field::Complex, SeedSpec::new(2024, t));
            let rho = partial_trace(&s).unwrap();
            let spec = hermitian_spectrum(&rho).unwrap();
            let ent: f64 = spec
                .values
                .iter()
                .map(|&l| if l > 0.0 { -l * l.ln() } else { 0.0 })
                .sum();
            acc += ent;
            acc2 += ent * ent;
        }
        let mean = acc / trials as f64;
        let se = ((acc2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!(
            (mean - expect).abs() < 3.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn real_sixth_moment_ensemble_average() {
        // <a^6> M(M+2)(M+4) = 15 at M = 8
        let dims = PartitionDims::new(2, 2, 2).unwrap();
        let m = dims.m() as f64;
        let scale = m * (m + 2.0) * (m + 4.0);
        let trials = 40_000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for t in 0..trials {
            let s = sample_haar_state(dims, Field::Real, SeedSpec::new(31, t));
            // average a^6 over the coordinates of one state
            let mut per_state = 0.0;
            for i in 0..dims.n() {
                for n in 0..dims.n3 {
                    per_state += s.amp(i, n).re.powi(6);
                }
            }
            per_state *= scale / m;
            acc += per_state;
            acc2 += per_state * per_state;
        }
        let mean = acc / trials as f64;
        let se = ((acc2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!((mean - 15.0).abs() < 3.0 * se, "mean {mean} (se {se})");
    }
}
