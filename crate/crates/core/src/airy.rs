//! Airy function boundary data for the right edge of the Painleve-II solve.
//!
//! Only large positive arguments are needed (the integration starts at
//! s = 8), so Ai and Ai' come from their large-argument asymptotic series,
//! which at s >= 6 delivers 13+ correct digits. The tail integrals that seed
//! the cumulative quantities have closed forms in Ai and Ai' except for
//! int Ai, which is done by quadrature of the series.

use crate::numerics::adaptive_simpson;

const SQRT_PI: f64 = 1.772453850905516;

fn asymptotic_sums(s: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * s.powf(1.5);
    let mut u: f64 = 1.0; // u_k
    let mut term_u: f64 = 1.0;
    let mut sum_u: f64 = 1.0;
    let mut sum_v: f64 = 1.0;
    let mut sign: f64 = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        let new_term = u / zeta.powi(k);
        if new_term.abs() > term_u.abs() {
            break; // asymptotic series turned; stop at the smallest term
        }
        term_u = new_term;
        sign = -sign;
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        sum_u += sign * term_u;
        sum_v += sign * v / zeta.powi(k);
        if term_u.abs() < 1e-18 {
            break;
        }
    }
    (sum_u, sum_v)
}

/// Ai(s) for s >= 6 via the exponentially damped asymptotic series.
pub fn ai(s: f64) -> f64 {
    debug_assert!(s >= 6.0, "asymptotic regime only");
    let zeta = 2.0 / 3.0 * s.powf(1.5);
    let (sum_u, _) = asymptotic_sums(s);
    (-zeta).exp() / (2.0 * SQRT_PI * s.powf(0.25)) * sum_u
}

/// Ai'(s) for s >= 6.
pub fn ai_prime(s: f64) -> f64 {
    debug_assert!(s >= 6.0, "asymptotic regime only");
    let zeta = 2.0 / 3.0 * s.powf(1.5);
    let (_, sum_v) = asymptotic_sums(s);
    -s.powf(0.25) * (-zeta).exp() / (2.0 * SQRT_PI) * sum_v
}

/// int_s^inf Ai(x)^2 dx = Ai'(s)^2 - s Ai(s)^2 (exact Airy identity).
pub fn ai_sq_tail(s: f64) -> f64 {
    let a = ai(s);
    let ap = ai_prime(s);
    ap * ap - s * a * a
}

/// int_s^inf (x - s) Ai(x)^2 dx = (2 s^2/3) Ai^2 - (1/3) Ai Ai' - (2 s/3) Ai'^2.
pub fn ai_sq_linear_tail(s: f64) -> f64 {
    let a = ai(s);
    let ap = ai_prime(s);
    2.0 * s * s / 3.0 * a * a - a * ap / 3.0 - 2.0 * s / 3.0 * ap * ap
}

/// int_s^inf Ai(x) dx by adaptive quadrature of the asymptotic form; the
/// remainder beyond x = 40 is below 1e-100. Tolerance is tied to the value
/// at the left edge, which sets the scale of the whole integral.
pub fn ai_tail(s: f64) -> f64 {
    adaptive_simpson(&ai, s, 40.0, 1e-10 * ai(s).abs())
}
