//! Monte Carlo driver: seeded, worker-count-independent ensemble runs,
//! histogramming, critical-point extreme-value fits, an adaptive
//! log-negativity estimator for large splits, and the self-check suite
//! behind the `verify` command.

use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

use crate::ensembles::{sample_haar_state, BetaClass, SeedSpec};
use crate::error::{Error, Result};
use crate::laws::{self, ModelGeometry};
use crate::linalg::{self, PtLowRankOp};
use crate::measures::{self, MeasureReport};
use crate::qstate::{
    hermitian_spectrum, partial_trace, partial_transpose, schmidt_pt_spectrum, Field,
    PartitionDims, PureState, StateVector, NPT_THRESHOLD,
};
use crate::tracy_widom;

/// 17-significant-digit scientific format used by every CSV/JSON writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Which experiment a config drives (echoed into reports).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentTag {
    Ensemble,
    Critical,
    Laws,
    Tw,
    Rotor,
    Verify,
}

impl ExperimentTag {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentTag::Ensemble => "ensemble",
            ExperimentTag::Critical => "critical",
            ExperimentTag::Laws => "laws",
            ExperimentTag::Tw => "tw",
            ExperimentTag::Rotor => "rotor",
            ExperimentTag::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dims: PartitionDims,
    pub field: Field,
    pub trials: u64,
    pub master_seed: u64,
    pub bins: usize,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub tag: ExperimentTag,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidInput("trials must be >= 1".into()));
        }
        if self.bins < 10 {
            return Err(Error::InvalidInput(format!(
                "bins = {} below the minimum of 10",
                self.bins
            )));
        }
        Ok(())
    }
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Area-normalized histogram: density = count / (total samples * bin width),
/// so the total area equals the fraction of samples inside `range`.
#[derive(Debug, Clone)]
pub struct HistogramTable {
    /// (bin_left, bin_right, density)
    pub bins: Vec<(f64, f64, f64)>,
}

impl HistogramTable {
    fn from_counts(counts: &[u64], total: u64, lo: f64, hi: f64) -> Self {
        let nb = counts.len();
        let width = (hi - lo) / nb as f64;
        let bins = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let left = lo + k as f64 * width;
                (left, left + width, c as f64 / (total as f64 * width))
            })
            .collect();
        Self { bins }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,bin_right,density\n");
        for (l, r, d) in &self.bins {
            s.push_str(&format!("{},{},{}\n", fmt_f64(*l), fmt_f64(*r), fmt_f64(*d)));
        }
        s
    }

    pub fn area(&self) -> f64 {
        self.bins.iter().map(|(l, r, d)| (r - l) * d).sum()
    }
}

pub fn make_histogram(samples: &[f64], bins: usize, range: (f64, f64)) -> Result<HistogramTable> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("histogram needs at least one sample".into()));
    }
    if bins == 0 || range.1 <= range.0 {
        return Err(Error::InvalidInput("bad histogram geometry".into()));
    }
    let mut counts = vec![0u64; bins];
    bin_into(&mut counts, samples.iter().copied(), range.0, range.1);
    Ok(HistogramTable::from_counts(
        &counts,
        samples.len() as u64,
        range.0,
        range.1,
    ))
}

fn bin_into(counts: &mut [u64], samples: impl Iterator<Item = f64>, lo: f64, hi: f64) {
    let nb = counts.len() as f64;
    for x in samples {
        if x >= lo && x < hi {
            let k = ((x - lo) / (hi - lo) * nb) as usize;
            counts[k.min(counts.len() - 1)] += 1;
        } else if x == hi {
            counts[counts.len() - 1] += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

impl Accum {
    fn push(&mut self, x: f64) {
        if x.is_finite() {
            self.sum += x;
            self.sum_sq += x * x;
            self.count += 1;
        }
    }

    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    fn se(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = self.count as f64;
        let var = (self.sum_sq - self.sum * self.sum / n) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// Aggregate of one ensemble run.
#[derive(Debug, Clone)]
pub struct EnsembleSummary {
    pub dims: PartitionDims,
    pub field: Field,
    pub trials: u64,
    pub master_seed: u64,
    pub failures: u64,
    pub mean_purity: f64,
    pub se_purity: f64,
    pub mean_entropy: f64,
    pub se_entropy: f64,
    pub mean_negativity: f64,
    pub se_negativity: f64,
    pub mean_log_negativity: f64,
    pub se_log_negativity: f64,
    pub mean_skewness: f64,
    pub se_skewness: f64,
    pub mean_m3_pt: f64,
    pub se_m3_pt: f64,
    pub npt_fraction: f64,
    pub npt_se: f64,
    /// Pooled rescaled transposed eigenvalues over the default wide range.
    pub histogram: HistogramTable,
    /// sup |empirical - semicircle| over 40 bins spanning the law support,
    /// as a fraction of the law's peak density.
    pub law_misfit_rel_peak: f64,
}

impl EnsembleSummary {
    pub fn to_json(&self) -> Value {
        json!({
            "experiment": "ensemble",
            "dims": {"n1": self.dims.n1, "n2": self.dims.n2, "n3": self.dims.n3},
            "field": self.field.label(),
            "trials": self.trials,
            "seed": self.master_seed,
            "failures": self.failures,
            "means": {
                "purity": self.mean_purity,
                "entropy": self.mean_entropy,
                "negativity": self.mean_negativity,
                "log_negativity": self.mean_log_negativity,
                "skewness": self.mean_skewness,
                "m3_pt": self.mean_m3_pt,
            },
            "standard_errors": {
                "purity": self.se_purity,
                "entropy": self.se_entropy,
                "negativity": self.se_negativity,
                "log_negativity": self.se_log_negativity,
                "skewness": self.se_skewness,
                "m3_pt": self.se_m3_pt,
            },
            "npt_fraction": self.npt_fraction,
            "npt_se": self.npt_se,
            "law_misfit_rel_peak": self.law_misfit_rel_peak,
            "histogram": self.histogram.bins.iter()
                .map(|(l, r, d)| json!([l, r, d])).collect::<Vec<_>>(),
        })
    }
}

struct TrialOutcome {
    report: MeasureReport,
    wide_counts: Vec<u64>,
    law_counts: Vec<u64>,
    eig_count: u64,
}

const LAW_BINS: usize = 40;

/// Run the sample -> reduce -> transpose -> spectrum -> measure pipeline for
/// every trial. Per-trial seeding makes the result exactly reproducible for
/// any worker count; failures are tolerated up to 0.1% of trials and
/// excluded from the aggregates.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<(EnsembleSummary, Vec<MeasureReport>)> {
    config.validate()?;
    let dims = config.dims;
    let geometry = ModelGeometry::from_dims(dims);
    let rt = geometry.r_tilde;
    let wide_range = (1.0 - 1.5 * rt, 1.0 + 1.5 * rt);
    let law_range = (1.0 - rt, 1.0 + rt);
    let bins = config.bins;
    let field = config.field;
    let seed = config.master_seed;

    let results: Vec<std::result::Result<TrialOutcome, String>> =
        with_pool(config.workers, || {
            (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let state = sample_haar_state(dims, field, SeedSpec::new(seed, t));
                    let run = || -> Result<TrialOutcome> {
                        let rho = partial_trace(&state)?;
                        let rho_spec = hermitian_spectrum(&rho)?;
                        let pt = partial_transpose(&rho, dims)?;
                        let pt_spec = hermitian_spectrum(&pt)?;
                        let report =
                            measures::report_from_spectra(dims, field, t, &rho_spec, &pt_spec)?;
                        let mut wide_counts = vec![0u64; bins];
                        bin_into(
                            &mut wide_counts,
                            pt_spec.scaled.iter().copied(),
                            wide_range.0,
                            wide_range.1,
                        );
                        let mut law_counts = vec![0u64; LAW_BINS];
                        bin_into(
                            &mut law_counts,
                            pt_spec.scaled.iter().copied(),
                            law_range.0,
                            law_range.1,
                        );
                        Ok(TrialOutcome {
                            report,
                            wide_counts,
                            law_counts,
                            eig_count: pt_spec.len() as u64,
                        })
                    };
                    run().map_err(|e| format!("trial {t}: {e}"))
                })
                .collect()
        })?;

    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let fail_count = failures.len() as u64;
    if fail_count * 1000 > config.trials {
        return Err(Error::Numerics(format!(
            "{fail_count} of {} trials failed (first: {})",
            config.trials, failures[0]
        )));
    }

    let mut acc_purity = Accum::default();
    let mut acc_entropy = Accum::default();
    let mut acc_neg = Accum::default();
    let mut acc_logneg = Accum::default();
    let mut acc_skew = Accum::default();
    let mut acc_m3 = Accum::default();
    let mut npt_count = 0u64;
    let mut wide_counts = vec![0u64; bins];
    let mut law_counts = vec![0u64; LAW_BINS];
    let mut total_eigs = 0u64;
    let mut reports = Vec::with_capacity(results.len());
    for r in &results {
        if let Ok(out) = r {
            acc_purity.push(out.report.purity);
            acc_entropy.push(out.report.entropy);
            acc_neg.push(out.report.negativity);
            acc_logneg.push(out.report.log_negativity);
            acc_skew.push(out.report.skewness);
            acc_m3.push(out.report.m3_pt);
            if out.report.is_npt {
                npt_count += 1;
            }
            for (a, b) in wide_counts.iter_mut().zip(&out.wide_counts) {
                *a += b;
            }
            for (a, b) in law_counts.iter_mut().zip(&out.law_counts) {
                *a += b;
            }
            total_eigs += out.eig_count;
            reports.push(out.report.clone());
        }
    }
    let good = reports.len() as u64;
    let npt_fraction = npt_count as f64 / good as f64;
    let npt_se = (npt_fraction * (1.0 - npt_fraction) / good as f64).sqrt();

    // semicircle misfit over the law support
    let law_width = (law_range.1 - law_range.0) / LAW_BINS as f64;
    let peak = 2.0 / (std::f64::consts::PI * rt);
    let mut sup = 0.0f64;
    for (k, &c) in law_counts.iter().enumerate() {
        let center = law_range.0 + (k as f64 + 0.5) * law_width;
        let emp = c as f64 / (total_eigs as f64 * law_width);
        let law = laws::semicircle_scaled(dims, center);
        sup = sup.max((emp - law).abs());
    }

    let summary = EnsembleSummary {
        dims,
        field,
        trials: config.trials,
        master_seed: seed,
        failures: fail_count,
        mean_purity: acc_purity.mean(),
        se_purity: acc_purity.se(),
        mean_entropy: acc_entropy.mean(),
        se_entropy: acc_entropy.se(),
        mean_negativity: acc_neg.mean(),
        se_negativity: acc_neg.se(),
        mean_log_negativity: acc_logneg.mean(),
        se_log_negativity: acc_logneg.se(),
        mean_skewness: acc_skew.mean(),
        se_skewness: acc_skew.se(),
        mean_m3_pt: acc_m3.mean(),
        se_m3_pt: acc_m3.se(),
        npt_fraction,
        npt_se,
        histogram: HistogramTable::from_counts(&wide_counts, total_eigs, wide_range.0, wide_range.1),
        law_misfit_rel_peak: sup / peak,
    };

    if let Some(path) = &config.out {
        write_reports_csv(path, &reports)?;
    }
    Ok((summary, reports))
}

pub fn write_reports_csv(path: &PathBuf, reports: &[MeasureReport]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{}", MeasureReport::CSV_HEADER)?;
    for r in reports {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Critical-point report: observed extreme-value statistics against the
/// shift-adjusted model predictions.
#[derive(Debug, Clone)]
pub struct CriticalReport {
    pub dims: PartitionDims,
    pub field: Field,
    pub trials: u64,
    pub master_seed: u64,
    pub shift: f64,
    pub ks: f64,
    pub f_npt_predicted: f64,
    pub f_npt_observed: f64,
    pub avg_logneg_predicted: f64,
    pub avg_logneg_observed: f64,
    pub warning: Option<String>,
}

impl CriticalReport {
    pub fn to_json(&self) -> Value {
        json!({
            "experiment": "critical",
            "dims": {"n1": self.dims.n1, "n2": self.dims.n2, "n3": self.dims.n3},
            "field": self.field.label(),
            "trials": self.trials,
            "seed": self.master_seed,
            "shift": self.shift,
            "ks": self.ks,
            "f_npt_predicted": self.f_npt_predicted,
            "f_npt_observed": self.f_npt_observed,
            "avg_logneg_predicted": self.avg_logneg_predicted,
            "avg_logneg_observed": self.avg_logneg_observed,
            "warning": self.warning,
        })
    }
}

/// Collect minimum transposed eigenvalues, rescale them onto the
/// extreme-value axis, fit the shift and emit predictions vs observations.
pub fn run_critical(config: &ExperimentConfig) -> Result<CriticalReport> {
    config.validate()?;
    let dims = config.dims;
    let field = config.field;
    let seed = config.master_seed;

    let per_trial: Vec<std::result::Result<(f64, f64), String>> =
        with_pool(config.workers, || {
            (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let state = sample_haar_state(dims, field, SeedSpec::new(seed, t));
                    let run = || -> Result<(f64, f64)> {
                        let rho = partial_trace(&state)?;
                        let pt = partial_transpose(&rho, dims)?;
                        let spec = hermitian_spectrum(&pt)?;
                        let e_ln = measures::log_negativity(&spec)?;
                        Ok((spec.min_value, e_ln))
                    };
                    run().map_err(|e| format!("trial {t}: {e}"))
                })
                .collect()
        })?;

    let fail_count = per_trial.iter().filter(|r| r.is_err()).count() as u64;
    if fail_count * 1000 > config.trials {
        return Err(Error::Numerics(format!(
            "{fail_count} of {} trials failed",
            config.trials
        )));
    }
    let good: Vec<(f64, f64)> = per_trial.iter().filter_map(|r| r.as_ref().ok()).copied().collect();

    let scaled: Vec<f64> = good
        .iter()
        .map(|(mu, _)| tracy_widom::scale_min_eigenvalue(*mu, dims))
        .collect();
    let observed_npt =
        good.iter().filter(|(mu, _)| *mu < NPT_THRESHOLD).count() as f64 / good.len() as f64;
    let observed_eln = good.iter().map(|(_, e)| e).sum::<f64>() / good.len() as f64;

    let tw = tracy_widom::solve_painleve2()?.with_beta(BetaClass::for_field(field));
    let fit = tracy_widom::fit_shift(&scaled, &tw)?;
    Ok(CriticalReport {
        dims,
        field,
        trials: config.trials,
        master_seed: seed,
        shift: fit.shift,
        ks: fit.ks_distance,
        f_npt_predicted: tracy_widom::npt_fraction(&tw, fit.shift)?,
        f_npt_observed: observed_npt,
        avg_logneg_predicted: tracy_widom::avg_logneg_critical(dims, &tw, fit.shift),
        avg_logneg_observed: observed_eln,
        warning: fit.warning,
    })
}

/// Dense-dimension ceiling for the exact log-negativity spectrum route.
pub const DENSE_LOGNEG_LIMIT: usize = 2048;

/// Mean log-negativity (and its standard error) over Haar samples, choosing
/// the cheapest exact-enough route for the split:
/// - no environment: Schmidt form, ln[(sum_i sqrt(lambda_i))^2];
/// - pair dimension within the dense limit: full transposed spectrum;
/// - larger real splits: matrix-free stochastic Lanczos trace-norm estimate
///   (validated against the dense route in the test suite).
pub fn average_logneg(
    dims: PartitionDims,
    field: Field,
    trials: u64,
    master_seed: u64,
) -> Result<(f64, f64)> {
    let mut acc = Accum::default();
    for t in 0..trials {
        let state = sample_haar_state(dims, field, SeedSpec::new(master_seed, t));
        acc.push(logneg_one_state(&state)?);
    }
    Ok((acc.mean(), acc.se()))
}

fn logneg_one_state(state: &PureState) -> Result<f64> {
    let dims = state.dims;
    if dims.n3 == 1 {
        // pure pair: trace norm from the Schmidt spectrum of the smaller side
        let ordered = if dims.n1 <= dims.n2 {
            state.clone()
        } else {
            state.permute_subsystems([2, 1, 3])?
        };
        let bipartite = PureState {
            dims: PartitionDims::new(ordered.dims.n1, 1, ordered.dims.n2)?,
            amplitudes: ordered.amplitudes.clone(),
        };
        let rho1 = partial_trace(&bipartite)?;
        let lambdas = hermitian_spectrum(&rho1)?.values;
        let root_sum: f64 = lambdas.iter().map(|&l| l.max(0.0).sqrt()).sum();
        return Ok((root_sum * root_sum).ln().max(0.0));
    }
    if dims.n() <= DENSE_LOGNEG_LIMIT {
        let rho = partial_trace(state)?;
        let pt = partial_transpose(&rho, dims)?;
        let spec = hermitian_spectrum(&pt)?;
        return measures::log_negativity(&spec);
    }
    match &state.amplitudes {
        StateVector::Real(_) => {
            let coeffs = state.coefficient_matrix_real().expect("real state");
            let op = PtLowRankOp::new(&coeffs, dims.n1, dims.n2)?;
            let trace_norm = linalg::trace_norm_slq(
                &op,
                320,
                24,
                SeedSpec::new(0xb10c_ab1e ^ dims.n() as u64, 0),
            )?;
            Ok(trace_norm.max(1.0).ln())
        }
        StateVector::Complex(_) => Err(Error::InvalidInput(format!(
            "complex split with pair dimension {} exceeds the dense limit {}",
            dims.n(),
            DENSE_LOGNEG_LIMIT
        ))),
    }
}

/// One named self-check with its achieved value and bound.
#[derive(Debug, Clone)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl VerifyCheck {
    fn upper(name: &'static str, value: f64, bound: f64) -> Self {
        Self {
            name,
            value,
            bound,
            pass: value <= bound,
        }
    }

    fn window(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name,
            value,
            bound: hi,
            pass: value >= lo && value <= hi,
        }
    }
}

#[derive(Debug)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "[{}] {:<44} value {:>12.4e}  bound {:>9.2e}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.value,
                c.bound
            ));
        }
        s.push_str(&format!(
            "{} of {} checks passed\n",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        ));
        s
    }
}

/// Run every module's invariants at small dimensions. Exit-code material:
/// any failed check should abort a pipeline.
pub fn verify_suite() -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let d234 = PartitionDims::new(2, 3, 4)?;

    // trace and purity invariance under the partial transpose
    let mut worst_trace = 0.0f64;
    let mut worst_purity = 0.0f64;
    for (i, field) in [Field::Complex, Field::Real].iter().enumerate() {
        for t in 0..50 {
            let state = sample_haar_state(d234, *field, SeedSpec::new(1000 + i as u64, t));
            let rho = partial_trace(&state)?;
            let pt = partial_transpose(&rho, d234)?;
            worst_trace = worst_trace
                .max((rho.trace() - 1.0).abs())
                .max((pt.trace() - 1.0).abs());
            worst_purity = worst_purity.max((rho.trace_sq() - pt.trace_sq()).abs());
        }
    }
    checks.push(VerifyCheck::upper("pt-preserves-trace", worst_trace, 1e-10));
    checks.push(VerifyCheck::upper("pt-preserves-purity", worst_purity, 1e-10));

    // transposing either factor yields the same multiset of eigenvalues
    let mut worst_mirror = 0.0f64;
    for t in 0..20 {
        let state = sample_haar_state(d234, Field::Complex, SeedSpec::new(1100, t));
        let rho = partial_trace(&state)?;
        let pt2 = partial_transpose(&rho, d234)?;
        let spec2 = hermitian_spectrum(&pt2)?;
        // transpose of the whole matrix turns a second-factor transpose
        // into a first-factor one without changing the spectrum
        let pt1 = crate::qstate::HermitianOperator::from_complex(pt2.as_complex().t().to_owned())?;
        let spec1 = hermitian_spectrum(&pt1)?;
        for (a, b) in spec1.values.iter().zip(spec2.values.iter()) {
            worst_mirror = worst_mirror.max((a - b).abs());
        }
    }
    checks.push(VerifyCheck::upper("pt-factor-mirror-spectrum", worst_mirror, 1e-10));

    // index map: bijective involution; entries of one row whose columns
    // differ mod n2 land in distinct rows (and the column-block analogue)
    let (n1, n2) = (4usize, 4usize);
    let n = n1 * n2;
    let mut map_ok = true;
    let mut seen = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = crate::qstate::pt_index_map(i, j, n2);
            if crate::qstate::pt_index_map(ti, tj, n2) != (i, j) {
                map_ok = false;
            }
            if std::mem::replace(&mut seen[ti * n + tj], true) {
                map_ok = false; // image position already taken: not a bijection
            }
            for jp in 0..n {
                if jp % n2 != j % n2 {
                    let (ti2, _) = crate::qstate::pt_index_map(i, jp, n2);
                    if ti2 == ti {
                        map_ok = false;
                    }
                }
            }
        }
    }
    checks.push(VerifyCheck::upper(
        "pt-index-map-involution-separation",
        if map_ok { 0.0 } else { 1.0 },
        0.5,
    ));

    // Schmidt route equals the matrix route on pure pairs up to 8x8
    let mut worst_schmidt = 0.0f64;
    for &(a, b) in &[(2usize, 2usize), (4, 4), (8, 8), (3, 5)] {
        let dims = PartitionDims::new(a, b, 1)?;
        for t in 0..10 {
            let state = sample_haar_state(dims, Field::Complex, SeedSpec::new(1200, t));
            let rho = partial_trace(&state)?;
            let pt = partial_transpose(&rho, dims)?;
            let direct = hermitian_spectrum(&pt)?;
            let ordered = if a <= b {
                state.clone()
            } else {
                state.permute_subsystems([2, 1, 3])?
            };
            let bip = PureState {
                dims: PartitionDims::new(ordered.dims.n1, 1, ordered.dims.n2)?,
                amplitudes: ordered.amplitudes.clone(),
            };
            let lambdas = hermitian_spectrum(&partial_trace(&bip)?)?
                .values
                .iter()
                .map(|&l| l.max(0.0))
                .collect::<Vec<_>>();
            let total: f64 = lambdas.iter().sum();
            let lambdas: Vec<f64> = lambdas.iter().map(|l| l / total).collect();
            let schmidt = schmidt_pt_spectrum(&lambdas, a.min(b), a.max(b))?;
            for (x, y) in direct.values.iter().zip(schmidt.values.iter()) {
                worst_schmidt = worst_schmidt.max((x - y).abs());
            }
        }
    }
    checks.push(VerifyCheck::upper("schmidt-vs-matrix-spectrum", worst_schmidt, 1e-10));

    // cubic invariant is pairing-independent state by state
    let mut worst_kempe = 0.0f64;
    for dims in [
        PartitionDims::new(2, 2, 2)?,
        PartitionDims::new(2, 3, 4)?,
        PartitionDims::new(4, 4, 4)?,
    ] {
        for (i, field) in [Field::Complex, Field::Real].iter().enumerate() {
            for t in 0..20 {
                let state = sample_haar_state(dims, *field, SeedSpec::new(1300 + i as u64, t));
                let m3 = measures::pt_third_moments(&state)?;
                worst_kempe = worst_kempe
                    .max((m3[0] - m3[1]).abs())
                    .max((m3[0] - m3[2]).abs());
            }
        }
    }
    checks.push(VerifyCheck::upper("cubic-invariant-symmetry", worst_kempe, 1e-12));

    // fourth moments are NOT pairing symmetric for generic states
    let d222 = PartitionDims::new(2, 2, 2)?;
    let mut asym = 0u32;
    for t in 0..20 {
        let state = sample_haar_state(d222, Field::Complex, SeedSpec::new(1400, t));
        let m4 = measures::pt_moments(&state, 4)?;
        if (m4[0] - m4[2]).abs() > 1e-6 {
            asym += 1;
        }
    }
    checks.push(VerifyCheck::window("fourth-moment-asymmetry-fraction", asym as f64 / 20.0, 0.6, 1.0));

    // all odd moments pairing-symmetric when only two subsystems entangle
    let mut worst_odd = 0.0f64;
    for t in 0..10 {
        let pair = sample_haar_state(
            PartitionDims::new(2, 2, 1)?,
            Field::Complex,
            SeedSpec::new(1500, t),
        );
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 12];
        if let StateVector::Complex(v) = &pair.amplitudes {
            // embed |phi_12> x |0_3> with a 3-dimensional third leg
            for (idx, z) in v.iter().enumerate() {
                amps[idx * 3] = *z;
            }
        }
        let state = PureState::from_complex(PartitionDims::new(2, 2, 3)?, amps)?;
        for m in [1u32, 3, 5, 7] {
            let mm = measures::pt_moments(&state, m)?;
            worst_odd = worst_odd.max((mm[0] - mm[1]).abs()).max((mm[0] - mm[2]).abs());
        }
    }
    checks.push(VerifyCheck::upper("odd-moments-pair-product-states", worst_odd, 1e-12));

    // log-negativity identity against negativity
    let mut worst_id = 0.0f64;
    for t in 0..40 {
        let state = sample_haar_state(d234, Field::Real, SeedSpec::new(1600, t));
        let r = measures::measure_state(&state, t)?;
        worst_id = worst_id.max((r.log_negativity - (1.0 + 2.0 * r.negativity).ln()).abs());
    }
    checks.push(VerifyCheck::upper("logneg-negativity-identity", worst_id, 1e-10));

    // Monte Carlo third moments against the exact ensemble averages
    for (field, label) in [
        (Field::Complex, "third-moment-mc-complex"),
        (Field::Real, "third-moment-mc-real"),
    ] {
        let trials = 20_000u64;
        let mut acc = Accum::default();
        for t in 0..trials {
            let state = sample_haar_state(d222, field, SeedSpec::new(1700, t));
            acc.push(measures::kempe_invariant(&state)?);
        }
        let expect = laws::avg_third_moment_pt(d222, field);
        let dev = (acc.mean() - expect).abs() / acc.se();
        checks.push(VerifyCheck::upper(label, dev, 3.0));
    }

    // reference curves integrate to one
    let mp = laws::mp_curve(PartitionDims::new(8, 8, 256)?, 20_001)?;
    checks.push(VerifyCheck::upper(
        "mp-curve-normalization",
        (mp.integral() - 1.0).abs(),
        1e-6,
    ));
    let sc = laws::semicircle_curve(PartitionDims::new(8, 8, 64)?, 20_001);
    checks.push(VerifyCheck::upper(
        "semicircle-curve-normalization",
        (sc.integral() - 1.0).abs(),
        1e-6,
    ));

    // geometry identity N (lambda+ - lambda-) = 2 r_tilde
    let mut worst_geom = 0.0f64;
    for dims in [
        PartitionDims::new(2, 4, 32)?,
        PartitionDims::new(8, 8, 64)?,
        PartitionDims::new(3, 3, 27)?,
    ] {
        let g = ModelGeometry::from_dims(dims);
        worst_geom = worst_geom
            .max((dims.n() as f64 * (g.lambda_plus - g.lambda_minus) - 2.0 * g.r_tilde).abs());
    }
    checks.push(VerifyCheck::upper("geometry-range-identity", worst_geom, 1e-12));

    // extreme-value table self-consistency
    let tw = tracy_widom::solve_painleve2()?;
    let mut monotone = true;
    for w in tw.f2.windows(2) {
        if w[1] > w[0] + 1e-12 {
            monotone = false;
        }
    }
    for w in tw.f1.windows(2) {
        if w[1] > w[0] + 1e-12 {
            monotone = false;
        }
    }
    checks.push(VerifyCheck::upper(
        "tw-cdf-monotone",
        if monotone { 0.0 } else { 1.0 },
        0.5,
    ));
    checks.push(VerifyCheck::window(
        "tw-unitary-origin-tail",
        1.0 - tw.cdf(0.0),
        0.025,
        0.035,
    ));
    let goe = tw.clone().with_beta(BetaClass::Goe);
    checks.push(VerifyCheck::window(
        "tw-orthogonal-origin-tail",
        1.0 - goe.cdf(0.0),
        0.16,
        0.18,
    ));

    // seeded reproducibility and cross-stream independence
    let s0 = sample_haar_state(d234, Field::Complex, SeedSpec::new(2024, 5));
    let s1 = sample_haar_state(d234, Field::Complex, SeedSpec::new(2024, 5));
    let identical = match (&s0.amplitudes, &s1.amplitudes) {
        (StateVector::Complex(a), StateVector::Complex(b)) => a == b,
        _ => false,
    };
    checks.push(VerifyCheck::upper(
        "seed-reproducibility",
        if identical { 0.0 } else { 1.0 },
        0.5,
    ));
    let m = 4096;
    let mut r0 = SeedSpec::new(2025, 0).rng();
    let mut r1 = SeedSpec::new(2025, 1).rng();
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut dot = 0.0;
    for _ in 0..m {
        let a: f64 = r0.sample(StandardNormal);
        let b: f64 = r1.sample(StandardNormal);
        dot += a * b;
    }
    checks.push(VerifyCheck::upper(
        "stream-cross-correlation",
        (dot / m as f64).abs(),
        4.0 / (m as f64).sqrt(),
    ));

    // overlap with a fixed state follows the expected beta law
    let dims_ks = PartitionDims::new(4, 1, 4)?;
    let mks = dims_ks.m() as f64;
    let mut overlaps: Vec<f64> = (0..10_000)
        .map(|t| {
            let s = sample_haar_state(dims_ks, Field::Complex, SeedSpec::new(2026, t));
            s.amp(0, 0).norm_sqr()
        })
        .collect();
    overlaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks = 0.0f64;
    for (i, x) in overlaps.iter().enumerate() {
        let cdf = 1.0 - (1.0 - x).powf(mks - 1.0);
        ks = ks.max((cdf - i as f64 / overlaps.len() as f64).abs());
        ks = ks.max((cdf - (i as f64 + 1.0) / overlaps.len() as f64).abs());
    }
    checks.push(VerifyCheck::upper("haar-overlap-ks", ks, 0.02));

    // rotor: decoupled propagator is a tensor product; coupled one unitary
    let params = crate::rotor::RotorParams::new([2, 2, 2], [8.0, 7.0, 6.0], [0.0; 3], 0.35)?;
    let u0 = crate::rotor::coupled_unitary(&params)?;
    let singles: Vec<_> = (0..3)
        .map(|i| crate::rotor::single_map_unitary(params.kicks[i], params.dims[i], params.alpha))
        .collect();
    let expect = ndarray::linalg::kron(&ndarray::linalg::kron(&singles[0], &singles[1]), &singles[2]);
    let mut worst_kron = 0.0f64;
    for (a, b) in u0.matrix.iter().zip(expect.iter()) {
        worst_kron = worst_kron.max((a - b).norm());
    }
    checks.push(VerifyCheck::upper("rotor-decoupled-tensor-product", worst_kron, 1e-12));
    let coupled = crate::rotor::coupled_unitary(&crate::rotor::RotorParams::new(
        [2, 2, 4],
        [8.0, 7.0, 6.0],
        [1.60, 1.51, 1.42],
        0.35,
    )?)?;
    checks.push(VerifyCheck::upper(
        "rotor-unitarity-residual",
        coupled.unitarity_residual(),
        1e-10,
    ));

    Ok(VerifyReport { checks })
}
