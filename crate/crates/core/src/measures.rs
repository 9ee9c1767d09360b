//! Entanglement and spectral statistics of sampled states: negativity,
//! log-negativity (natural log throughout), purity, von Neumann entropy,
//! arbitrary spectral moments, the permutation-invariant third moment after
//! partial transpose, sample skewness and the NPT classification.

use crate::error::{Error, Result};
use crate::qstate::{
    hermitian_spectrum, partial_trace, partial_transpose, Field, HermitianOperator, PartitionDims,
    PureState, SpectrumSample, NPT_THRESHOLD,
};

const TRACE_TOL: f64 = 1e-8;

/// Which pair of subsystems is kept, with the transpose applied to the
/// second member of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Keep (1,2), transpose 2.
    OneTwo,
    /// Keep (2,3), transpose 3.
    TwoThree,
    /// Keep (3,1), transpose 1.
    ThreeOne,
}

impl Pairing {
    pub const ALL: [Pairing; 3] = [Pairing::OneTwo, Pairing::TwoThree, Pairing::ThreeOne];

    fn permutation(&self) -> [usize; 3] {
        match self {
            Pairing::OneTwo => [1, 2, 3],
            Pairing::TwoThree => [2, 3, 1],
            Pairing::ThreeOne => [3, 1, 2],
        }
    }
}

/// Per-state entanglement summary; one CSV row.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub trial: u64,
    pub dims: PartitionDims,
    pub field: Field,
    pub purity: f64,
    pub entropy: f64,
    pub negativity: f64,
    pub log_negativity: f64,
    pub mu_min: f64,
    pub is_npt: bool,
    pub skewness: f64,
    pub m3_pt: f64,
}

impl MeasureReport {
    pub const CSV_HEADER: &'static str =
        "trial,N1,N2,N3,field,purity,entropy,negativity,log_negativity,mu_min,is_npt,skewness,m3_pt";

    pub fn csv_row(&self) -> String {
        let f = crate::harness::fmt_f64;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.dims.n1,
            self.dims.n2,
            self.dims.n3,
            self.field.label(),
            f(self.purity),
            f(self.entropy),
            f(self.negativity),
            f(self.log_negativity),
            f(self.mu_min),
            self.is_npt,
            f(self.skewness),
            f(self.m3_pt),
        )
    }
}

fn check_unit_trace(spec: &SpectrumSample) -> Result<()> {
    let tr = spec.sum();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidInput(format!(
            "spectrum sums to {tr}, expected a trace-1 operator"
        )));
    }
    Ok(())
}

/// Negativity (sum of moduli of negative eigenvalues): (sum_i |mu_i| - 1)/2,
/// clamped at zero for spectra without a negative part.
pub fn negativity(spec: &SpectrumSample) -> Result<f64> {
    check_unit_trace(spec)?;
    Ok(((spec.abs_sum() - 1.0) / 2.0).max(0.0))
}

/// Log-negativity ln(sum_i |mu_i|), zero for nonnegative spectra.
pub fn log_negativity(spec: &SpectrumSample) -> Result<f64> {
    check_unit_trace(spec)?;
    Ok(spec.abs_sum().ln().max(0.0))
}

/// m-th spectral moment sum_i mu_i^m.
pub fn moment(spec: &SpectrumSample, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidInput("moment order must be >= 1".into()));
    }
    Ok(spec.moment(m))
}

/// tr(H^m) by repeated multiplication; agrees with the spectral route.
pub fn moment_of_operator(h: &HermitianOperator, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidInput("moment order must be >= 1".into()));
    }
    match h.data() {
        crate::qstate::HermitianMatrix::Real(a) => {
            let mut pw = a.clone();
            for _ in 1..m {
                pw = pw.dot(a);
            }
            Ok(pw.diag().sum())
        }
        crate::qstate::HermitianMatrix::Complex(a) => {
            let mut pw = a.clone();
            for _ in 1..m {
                pw = pw.dot(a);
            }
            Ok(pw.diag().iter().map(|z| z.re).sum())
        }
    }
}

/// Purity sum_i lambda_i^2 of a (nonnegative) spectrum.
pub fn purity(spec: &SpectrumSample) -> f64 {
    spec.moment(2)
}

/// Von Neumann entropy -sum lambda ln lambda with 0 ln 0 = 0.
///
/// Rank-deficient reduced matrices produce tiny negative eigenvalues from
/// roundoff; anything in (-1e-8, 0) is clipped to zero, anything lower is a
/// genuine error (entropy of a partially transposed spectrum is undefined).
pub fn von_neumann_entropy(spec: &SpectrumSample) -> Result<f64> {
    if spec.min_value < -TRACE_TOL {
        return Err(Error::InvalidInput(format!(
            "entropy undefined for spectra with eigenvalue {}",
            spec.min_value
        )));
    }
    Ok(spec
        .values
        .iter()
        .map(|&l| if l > 0.0 { -l * l.ln() } else { 0.0 })
        .sum())
}

/// Sample skewness of a spectrum: (1/N) sum ((mu - mean)/sigma)^3 with the
/// population sigma. `None` when the spectrum is degenerate (sigma = 0).
pub fn sample_skewness(spec: &SpectrumSample) -> Option<f64> {
    let n = spec.len() as f64;
    if spec.len() < 3 {
        return None;
    }
    let mean = spec.sum() / n;
    let var = spec.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if var <= 0.0 {
        return None;
    }
    let third = spec.values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    Some(third / var.powf(1.5))
}

/// Skewness of the PT spectrum straight from tr(B), tr(B^2), tr(B^3),
/// avoiding the eigensolve. Identical to `sample_skewness` on the spectrum.
pub fn skewness_from_moments(dim: usize, tr1: f64, tr2: f64, tr3: f64) -> Option<f64> {
    let n = dim as f64;
    let mean = tr1 / n;
    let var = tr2 / n - mean * mean;
    if var <= 0.0 {
        return None;
    }
    let third = tr3 / n - 3.0 * mean * tr2 / n + 2.0 * mean.powi(3);
    Some(third / var.powf(1.5))
}

/// Reduced-and-transposed operator for one pairing of the tripartite split.
pub fn reduced_pt(state: &PureState, pairing: Pairing) -> Result<HermitianOperator> {
    let permuted = state.permute_subsystems(pairing.permutation())?;
    let rho = partial_trace(&permuted)?;
    partial_transpose(&rho, permuted.dims)
}

/// tr[(rho_pair^T)^3] for each of the three pairings.
pub fn pt_third_moments(state: &PureState) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (k, pairing) in Pairing::ALL.iter().enumerate() {
        out[k] = reduced_pt(state, *pairing)?.trace_cube();
    }
    Ok(out)
}

/// m-th PT moment for each pairing (used for the m > 3 asymmetry checks).
pub fn pt_moments(state: &PureState, m: u32) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (k, pairing) in Pairing::ALL.iter().enumerate() {
        let b = reduced_pt(state, *pairing)?;
        out[k] = moment_of_operator(&b, m)?;
    }
    Ok(out)
}

/// The cubic local-unitary invariant tr[(rho_12^T2)^3]; identical for all
/// three pairings on every tripartite pure state.
pub fn kempe_invariant(state: &PureState) -> Result<f64> {
    Ok(reduced_pt(state, Pairing::OneTwo)?.trace_cube())
}

/// Full per-state report: reduced spectrum (purity, entropy) and the
/// partially transposed spectrum (everything else).
pub fn measure_state(state: &PureState, trial: u64) -> Result<MeasureReport> {
    let rho = partial_trace(state)?;
    let rho_spec = hermitian_spectrum(&rho)?;
    let pt = partial_transpose(&rho, state.dims)?;
    let pt_spec = hermitian_spectrum(&pt)?;
    report_from_spectra(state.dims, state.field(), trial, &rho_spec, &pt_spec)
}

/// Assemble a report when both spectra are already known.
pub fn report_from_spectra(
    dims: PartitionDims,
    field: Field,
    trial: u64,
    rho_spec: &SpectrumSample,
    pt_spec: &SpectrumSample,
) -> Result<MeasureReport> {
    Ok(MeasureReport {
        trial,
        dims,
        field,
        purity: purity(rho_spec),
        entropy: von_neumann_entropy(rho_spec)?,
        negativity: negativity(pt_spec)?,
        log_negativity: log_negativity(pt_spec)?,
        mu_min: pt_spec.min_value,
        is_npt: pt_spec.min_value < NPT_THRESHOLD,
        skewness: sample_skewness(pt_spec).unwrap_or(f64::NAN),
        m3_pt: pt_spec.moment(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_haar_state, SeedSpec};
    use crate::qstate::schmidt_pt_spectrum;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn wstate(alpha: f64, beta: f64, gamma: f64) -> PureState {
        let dims = PartitionDims::new(2, 2, 2).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        // |001>, |010>, |100> with index (i1*2 + i2)*2 + i3
        v[1] = Complex64::new(alpha, 0.0);
        v[2] = Complex64::new(beta, 0.0);
        v[4] = Complex64::new(gamma, 0.0);
        PureState::from_complex(dims, v).unwrap()
    }

    #[test]
    fn negativity_of_bell_pt_spectrum() {
        let spec = schmidt_pt_spectrum(&[0.5, 0.5], 2, 2).unwrap();
        assert_relative_eq!(negativity(&spec).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(
            log_negativity(&spec).unwrap(),
            2.0_f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn nonnegative_spectrum_has_zero_negativity() {
        let spec = SpectrumSample::new(vec![0.25; 4], 4);
        assert_eq!(negativity(&spec).unwrap(), 0.0);
        assert_eq!(log_negativity(&spec).unwrap(), 0.0);
    }

    #[test]
    fn trace_check_rejects_unnormalized() {
        let spec = SpectrumSample::new(vec![0.4, 0.4], 2);
        assert!(negativity(&spec).is_err());
        assert!(log_negativity(&spec).is_err());
    }

    #[test]
    fn moments_trivial_and_pt_invariant() {
        let dims = PartitionDims::new(2, 2, 4).unwrap();
        let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(17, 0));
        let rho = partial_trace(&state).unwrap();
        let pt = partial_transpose(&rho, dims).unwrap();
        let s_rho = hermitian_spectrum(&rho).unwrap();
        let s_pt = hermitian_spectrum(&pt).unwrap();
        assert_relative_eq!(moment(&s_rho, 1).unwrap(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(moment(&s_pt, 1).unwrap(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(
            moment(&s_rho, 2).unwrap(),
            moment(&s_pt, 2).unwrap(),
            epsilon = 1e-10
        );
        // spectral route == matrix-power route
        assert_relative_eq!(
            moment(&s_pt, 3).unwrap(),
            moment_of_operator(&pt, 3).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn entropy_and_purity_of_maximally_mixed() {
        let n = 8;
        let spec = SpectrumSample::new(vec![1.0 / n as f64; n], n);
        assert_relative_eq!(purity(&spec), 1.0 / n as f64, epsilon = 1e-14);
        assert_relative_eq!(
            von_neumann_entropy(&spec).unwrap(),
            (n as f64).ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_rejects_genuinely_negative_spectra() {
        let spec = SpectrumSample::new(vec![1.5, -0.5], 2);
        assert!(von_neumann_entropy(&spec).is_err());
        // tiny negatives from roundoff are clipped
        let spec = SpectrumSample::new(vec![1.0 + 1e-12, -1e-12], 2);
        assert!(von_neumann_entropy(&spec).unwrap().abs() < 1e-10);
    }

    #[test]
    fn skewness_symmetric_spectrum_is_zero() {
        let spec = SpectrumSample::new(vec![-0.3, 0.0, 0.3], 3);
        assert_relative_eq!(sample_skewness(&spec).unwrap(), 0.0, epsilon = 1e-14);
        let degenerate = SpectrumSample::new(vec![0.25; 4], 4);
        assert!(sample_skewness(&degenerate).is_none());
    }

    #[test]
    fn skewness_from_moments_matches_spectrum_route() {
        let dims = PartitionDims::new(2, 3, 3).unwrap();
        let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(5, 2));
        let rho = partial_trace(&state).unwrap();
        let pt = partial_transpose(&rho, dims).unwrap();
        let spec = hermitian_spectrum(&pt).unwrap();
        let via_spec = sample_skewness(&spec).unwrap();
        let via_moments =
            skewness_from_moments(dims.n(), pt.trace(), pt.trace_sq(), pt.trace_cube()).unwrap();
        assert_relative_eq!(via_spec, via_moments, epsilon = 1e-9);
    }

    #[test]
    fn wstate_symmetric_point_invariant() {
        let a = 1.0 / 3f64.sqrt();
        let state = wstate(a, a, a);
        let inv = kempe_invariant(&state).unwrap();
        assert_relative_eq!(inv, 2.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn wstate_asymmetric_point_has_known_pt_spectrum() {
        let state = wstate((3f64 / 7.0).sqrt(), (2f64 / 7.0).sqrt(), (2f64 / 7.0).sqrt());
        let b = reduced_pt(&state, Pairing::OneTwo).unwrap();
        let spec = hermitian_spectrum(&b).unwrap();
        let expect = [-1.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        for (got, want) in spec.values.iter().zip(expect) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        let inv = kempe_invariant(&state).unwrap();
        assert_relative_eq!(inv, 79.0 / 343.0, epsilon = 1e-12);
    }

    #[test]
    fn third_moment_pairings_agree_per_state() {
        for trial in 0..16 {
            let dims = PartitionDims::new(2, 3, 4).unwrap();
            let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(23, trial));
            let m3 = pt_third_moments(&state).unwrap();
            assert!((m3[0] - m3[1]).abs() < 1e-12, "{m3:?}");
            assert!((m3[0] - m3[2]).abs() < 1e-12, "{m3:?}");
        }
    }

    #[test]
    fn fourth_moments_differ_across_pairings() {
        let mut asymmetric = 0;
        let trials = 20;
        for trial in 0..trials {
            let dims = PartitionDims::new(2, 2, 2).unwrap();
            let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(29, trial));
            let m4 = pt_moments(&state, 4).unwrap();
            if (m4[0] - m4[2]).abs() > 1e-6 {
                asymmetric += 1;
            }
        }
        assert!(asymmetric > trials / 2, "only {asymmetric}/{trials} asymmetric");
    }

    #[test]
    fn report_identity_log_negativity_vs_negativity() {
        let dims = PartitionDims::new(2, 2, 2).unwrap();
        for trial in 0..10 {
            let state = sample_haar_state(dims, Field::Real, SeedSpec::new(31, trial));
            let r = measure_state(&state, trial).unwrap();
            assert_relative_eq!(
                r.log_negativity,
                (1.0 + 2.0 * r.negativity).ln(),
                epsilon = 1e-10
            );
            assert!(r.purity >= 1.0 / dims.n() as f64 - 1e-12 && r.purity <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn csv_row_is_stable() {
        let dims = PartitionDims::new(2, 2, 2).unwrap();
        let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(1, 0));
        let r = measure_state(&state, 0).unwrap();
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), MeasureReport::CSV_HEADER.split(',').count());
        let again = measure_state(&state, 0).unwrap().csv_row();
        assert_eq!(row, again);
    }
}
