//! Closed-form reference curves and exact ensemble averages that the Monte
//! Carlo is tested against: the Marchenko-Pastur density of reduced density
//! matrices, the shifted rescaled semicircle of their partial transposes,
//! exact third-moment averages, skewness estimates, the log-negativity of
//! the shifted-ensemble model, exact subsystem purity/entropy averages,
//! W-state spectra and the two integer sequences separating their moments.

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, hyp2f1, trapezoid};
use crate::qstate::{Field, PartitionDims};

/// Which limiting law a curve tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawTag {
    MarchenkoPastur,
    Semicircle,
    ScaledSemicircle,
}

impl LawTag {
    pub fn label(&self) -> &'static str {
        match self {
            LawTag::MarchenkoPastur => "marchenko-pastur",
            LawTag::Semicircle => "semicircle",
            LawTag::ScaledSemicircle => "scaled-semicircle",
        }
    }
}

/// A probability density tabulated on a grid.
#[derive(Debug, Clone)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub support: (f64, f64),
    pub law_tag: LawTag,
}

impl DensityCurve {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }
}

/// Classification of the split by the rescaled semicircle radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Radius < 1: the transposed spectrum stays positive for typical states.
    Ppt,
    /// Radius = 1: lower edge exactly at zero; extreme-value statistics rule.
    Critical,
    /// Radius > 1: a macroscopic negative part appears.
    Npt,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Ppt => "PPT",
            Regime::Critical => "critical",
            Regime::Npt => "NPT",
        }
    }
}

/// Geometry of the shifted-ensemble model for one split.
#[derive(Debug, Clone, Copy)]
pub struct ModelGeometry {
    /// Semicircle radius on the unscaled eigenvalue axis: 2/sqrt(n3 N).
    pub r: f64,
    /// Rescaled radius N r = 2 sqrt(n1 n2 / n3).
    pub r_tilde: f64,
    /// Lower edge of the reduced-density-matrix density.
    pub lambda_minus: f64,
    /// Upper edge.
    pub lambda_plus: f64,
    pub regime: Regime,
}

impl ModelGeometry {
    pub fn from_dims(dims: PartitionDims) -> Self {
        let n = dims.n() as f64;
        let n3 = dims.n3 as f64;
        let r = 2.0 / (n3 * n).sqrt();
        let r_tilde = n * r;
        let q = n3 / n;
        let lambda_minus = (1.0 + 1.0 / q - 2.0 / q.sqrt()) / n;
        let lambda_plus = (1.0 + 1.0 / q + 2.0 / q.sqrt()) / n;
        let regime = if dims.is_critical() {
            Regime::Critical
        } else if r_tilde < 1.0 {
            Regime::Ppt
        } else {
            Regime::Npt
        };
        Self {
            r,
            r_tilde,
            lambda_minus,
            lambda_plus,
            regime,
        }
    }
}

/// Support of the reduced-density-matrix eigenvalue density. Requires the
/// environment at least as large as the pair (Q >= 1); rank-deficient splits
/// are the spectrum code's business, not this law's.
pub fn mp_support(dims: PartitionDims) -> Result<(f64, f64)> {
    if dims.q_ratio() < 1.0 {
        return Err(Error::InvalidInput(format!(
            "Q = n3/(n1 n2) = {} < 1: density edge formula not applicable",
            dims.q_ratio()
        )));
    }
    let g = ModelGeometry::from_dims(dims);
    Ok((g.lambda_minus, g.lambda_plus))
}

/// Eigenvalue density of the reduced density matrix at `lambda`
/// (normalized to unit integral; zero outside the support).
pub fn mp_density(dims: PartitionDims, lambda: f64) -> Result<f64> {
    let (lo, hi) = mp_support(dims)?;
    if lambda <= lo || lambda >= hi {
        return Ok(0.0);
    }
    let n = dims.n() as f64;
    let q = dims.q_ratio();
    Ok(n * q / (2.0 * std::f64::consts::PI) * ((hi - lambda) * (lambda - lo)).sqrt() / lambda)
}

pub fn mp_curve(dims: PartitionDims, points: usize) -> Result<DensityCurve> {
    let (lo, hi) = mp_support(dims)?;
    let grid: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&x| mp_density(dims, x).expect("support checked"))
        .collect();
    Ok(DensityCurve {
        grid,
        values,
        support: (lo, hi),
        law_tag: LawTag::MarchenkoPastur,
    })
}

/// Density of the rescaled transposed spectrum x = N mu: a semicircle of
/// radius `r_tilde` centered at 1.
pub fn semicircle_scaled(dims: PartitionDims, x: f64) -> f64 {
    let rt = ModelGeometry::from_dims(dims).r_tilde;
    let d2 = rt * rt - (x - 1.0) * (x - 1.0);
    if d2 <= 0.0 {
        0.0
    } else {
        2.0 / (std::f64::consts::PI * rt * rt) * d2.sqrt()
    }
}

pub fn semicircle_curve(dims: PartitionDims, points: usize) -> DensityCurve {
    let rt = ModelGeometry::from_dims(dims).r_tilde;
    let (lo, hi) = (1.0 - rt, 1.0 + rt);
    let grid: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| semicircle_scaled(dims, x)).collect();
    DensityCurve {
        grid,
        values,
        support: (lo, hi),
        law_tag: LawTag::ScaledSemicircle,
    }
}

/// Number of matrix entries moved by a partial transpose over `k` qubits of
/// an `m`-qubit density matrix: 2^{2m} (1 - 2^{-k}).
pub fn exchange_count(m_qubits: u32, k: u32) -> Result<u128> {
    if 2 * k > m_qubits {
        return Err(Error::InvalidInput(format!(
            "k = {k} exceeds m/2 = {}",
            m_qubits as f64 / 2.0
        )));
    }
    if 2 * m_qubits >= 127 {
        return Err(Error::InvalidInput("qubit count too large for u128".into()));
    }
    let total = 1u128 << (2 * m_qubits);
    Ok(total - (total >> k))
}

/// Exact ensemble average of tr[(rho_12^T2)^3].
pub fn avg_third_moment_pt(dims: PartitionDims, field: Field) -> f64 {
    let (n1, n2, n3) = (dims.n1 as f64, dims.n2 as f64, dims.n3 as f64);
    let m = dims.m() as f64;
    match field {
        Field::Complex => (n1 * n1 + n2 * n2 + n3 * n3 + 3.0 * m) / ((m + 1.0) * (m + 2.0)),
        Field::Real => {
            (n1 * n1 + n2 * n2 + n3 * n3 + 3.0 * (n1 + n2 + n3 + m)) / ((m + 2.0) * (m + 4.0))
        }
    }
}

/// Exact ensemble average of tr[rho_12^3] (no transpose).
pub fn avg_third_moment_rho(dims: PartitionDims, field: Field) -> f64 {
    let (n1, n2, n3) = (dims.n1 as f64, dims.n2 as f64, dims.n3 as f64);
    let n = n1 * n2;
    let m = dims.m() as f64;
    match field {
        Field::Complex => (n * n + n3 * n3 + 3.0 * m + 1.0) / ((m + 1.0) * (m + 2.0)),
        Field::Real => (n * n + n3 * n3 + 3.0 * (n + n3 + m) + 4.0) / ((m + 2.0) * (m + 4.0)),
    }
}

/// Large-dimension estimate of the mean sample skewness of the transposed
/// spectrum: (n2/n1 + n1/n2)/sqrt(M), with an extra 3(1/n1 + 1/n2) inside
/// the bracket for real states.
pub fn skewness_analytic(dims: PartitionDims, field: Field) -> f64 {
    let (n1, n2) = (dims.n1 as f64, dims.n2 as f64);
    let m = dims.m() as f64;
    let mut bracket = n2 / n1 + n1 / n2;
    if field == Field::Real {
        bracket += 3.0 * (1.0 / n1 + 1.0 / n2);
    }
    bracket / m.sqrt()
}

/// Mean log-negativity of the shifted-ensemble model.
///
/// For radius > 1 the negative lobe of the semicircle gives
/// ln[(2/pi) asin(1/r) + 2 (1 + 2 r^2) sqrt(1 - 1/r^2) / (3 pi r)].
/// At or below the critical radius the model mean is zero; the returned
/// regime flags that the extreme-value machinery owns that case.
pub fn avg_log_negativity_model(dims: PartitionDims) -> (f64, Regime) {
    let g = ModelGeometry::from_dims(dims);
    let rt = g.r_tilde;
    if rt <= 1.0 {
        return (0.0, g.regime);
    }
    let pi = std::f64::consts::PI;
    let bracket = 2.0 / pi * (1.0 / rt).asin()
        + 2.0 / (3.0 * pi * rt) * (1.0 - 1.0 / (rt * rt)).sqrt() * (1.0 + 2.0 * rt * rt);
    (bracket.ln(), g.regime)
}

/// Mean of sqrt(lambda) under the rescaled reduced-density density with
/// aspect ratio Q >= 1, by adaptive quadrature after the angular substitution
/// that removes the edge singularities.
pub fn kappa(q: f64) -> Result<f64> {
    if q < 1.0 {
        return Err(Error::InvalidInput(format!(
            "kappa needs Q >= 1 (swap subsystems first), got {q}"
        )));
    }
    let sq = q.sqrt();
    let x_minus = (1.0 - 1.0 / sq).powi(2);
    let x_plus = (1.0 + 1.0 / sq).powi(2);
    let center = 0.5 * (x_plus + x_minus);
    let half = 0.5 * (x_plus - x_minus);
    let pi = std::f64::consts::PI;
    // x = center + half sin(theta): sqrt((x+ - x)(x - x-)) = half cos(theta)
    let f = |theta: f64| {
        let x = center + half * theta.sin();
        let c = theta.cos();
        if x <= 0.0 {
            0.0
        } else {
            half * half * c * c / x.sqrt()
        }
    };
    let integral = adaptive_simpson(&f, -pi / 2.0, pi / 2.0, 1e-12);
    Ok(q / (2.0 * pi) * integral)
}

/// Same quantity through the closed hypergeometric form; retained as an
/// independent route for cross-checking the quadrature.
pub fn kappa_hypergeometric(q: f64) -> Result<f64> {
    if q <= 1.0 {
        return Err(Error::InvalidInput(
            "hypergeometric form needs Q > 1 (prefactor vanishes at Q = 1)".into(),
        ));
    }
    let sq = q.sqrt();
    let z = -4.0 * sq / (sq - 1.0).powi(2);
    Ok((sq - 1.0) * (hyp2f1(0.5, -0.5, 2.0, z) - hyp2f1(0.5, 0.5, 2.0, z)))
}

/// Asymptotic mean log-negativity and negativity of a pure pair state with
/// subsystem dimensions n1 <= n2: E_LN ~ ln(kappa^2 n1),
/// negativity ~ (kappa^2 n1 - 1)/2.
pub fn avg_measures_pure(n1: usize, n2: usize) -> Result<(f64, f64)> {
    if n2 < n1 {
        return Err(Error::InvalidInput(
            "order the pure pair so that n1 <= n2".into(),
        ));
    }
    let q = n2 as f64 / n1 as f64;
    let k = kappa(q)?;
    let s = k * k * n1 as f64;
    Ok((s.ln(), (s - 1.0) / 2.0))
}

/// Closed-form transposed spectra of the generalized W state
/// alpha|001> + beta|010> + gamma|100>, plus its cubic invariant.
#[derive(Debug, Clone)]
pub struct WStateAnalytics {
    /// Eigenvalues of the (1,2) pairing after transposing 2.
    pub pt_12: [f64; 4],
    /// Eigenvalues of the (1,3) pairing after transposing 3.
    pub pt_13: [f64; 4],
    /// Eigenvalues of the (2,3) pairing after transposing 3.
    pub pt_23: [f64; 4],
    pub invariant: f64,
}

pub fn wstate_analytics(alpha: f64, beta: f64, gamma: f64) -> Result<WStateAnalytics> {
    let (a2, b2, c2) = (alpha * alpha, beta * beta, gamma * gamma);
    if (a2 + b2 + c2 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "W-state weights sum to {}, expected 1",
            a2 + b2 + c2
        )));
    }
    let pair = |s2: f64, p2: f64, q2: f64| {
        let disc = (s2 * s2 + 4.0 * p2 * q2).sqrt();
        [(s2 + disc) / 2.0, (s2 - disc) / 2.0]
    };
    let [p12a, p12b] = pair(a2, b2, c2);
    let [p13a, p13b] = pair(b2, a2, c2);
    let [p23a, p23b] = pair(c2, a2, b2);
    Ok(WStateAnalytics {
        pt_12: [b2, c2, p12a, p12b],
        pt_13: [a2, c2, p13a, p13b],
        pt_23: [a2, b2, p23a, p23b],
        invariant: a2.powi(3) + b2.powi(3) + c2.powi(3) + 3.0 * a2 * b2 * c2,
    })
}

/// The two integer sequences t_n = 3^n + (1-sqrt7)^n + (1+sqrt7)^n and
/// t'_n = 2^n + 4^n + (-1)^n, generated by their exact integer recursions
/// t_{n+3} = 5 t_{n+2} - 18 t_n and t'_{n+3} = 5 t'_{n+2} - 2 t'_{n+1} - 8 t'_n.
/// They agree exactly at n = 1 and n = 3 and nowhere else.
pub fn tn_sequences(n_max: usize) -> Result<(Vec<i128>, Vec<i128>)> {
    if n_max < 3 {
        return Err(Error::InvalidInput("need n_max >= 3".into()));
    }
    if n_max > 60 {
        return Err(Error::InvalidInput("n_max > 60 overflows i128".into()));
    }
    let mut t: Vec<i128> = vec![5, 25, 71];
    let mut tp: Vec<i128> = vec![5, 21, 71];
    for n in 3..n_max {
        t.push(5 * t[n - 1] - 18 * t[n - 3]);
        tp.push(5 * tp[n - 1] - 2 * tp[n - 2] - 8 * tp[n - 3]);
    }
    Ok((t, tp))
}

/// Exact mean purity of an n-dimensional subsystem of a random pure state
/// with environment dimension m: (n + m)/(n m + 1).
pub fn avg_purity(n: usize, m: usize) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    (nf + mf) / (nf * mf + 1.0)
}

/// Exact mean subsystem entropy: sum_{k=m+1}^{n m} 1/k - (n-1)/(2m), n <= m.
pub fn page_entropy(n: usize, m: usize) -> Result<f64> {
    if n > m {
        return Err(Error::InvalidInput(format!(
            "mean-entropy formula needs subsystem <= environment, got {n} > {m}"
        )));
    }
    let harmonic: f64 = (m + 1..=n * m).map(|k| 1.0 / k as f64).sum();
    Ok(harmonic - (n as f64 - 1.0) / (2.0 * m as f64))
}
