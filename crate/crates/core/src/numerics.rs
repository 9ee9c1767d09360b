//! Small shared numerics: adaptive quadrature, trapezoid sums, a Gauss
//! hypergeometric series for the cross-check route in `laws`.

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// Subdivides until the classic |S2 - S1|/15 estimate is below the local
/// tolerance share. Suited to the smooth-after-substitution integrands used
/// here; not a general-purpose oscillatory integrator.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    simpson_recurse(f, a, b, fa, fm, fb, simpson_rule(a, b, fa, fm, fb), tol, 30)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Trapezoid rule over sampled values on an arbitrary (sorted) grid.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    assert_eq!(grid.len(), values.len());
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Gauss hypergeometric 2F1(a, b; c; z) for z <= 0.
///
/// Maps z into [0, 1) with the Pfaff transformation
/// 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)) and sums the series.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    assert!(z <= 0.0, "series route only implemented for z <= 0");
    if z == 0.0 {
        return 1.0;
    }
    let zp = z / (z - 1.0);
    let prefactor = (1.0 - z).powf(-a);
    let (ta, tb) = (a, c - b);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..20_000 {
        let kf = k as f64;
        term *= (ta + kf) * (tb + kf) / ((c + kf) * (kf + 1.0)) * zp;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_integrates_polynomial_exactly() {
        let f = |x: f64| 3.0 * x * x;
        assert_relative_eq!(adaptive_simpson(&f, 0.0, 2.0, 1e-12), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn simpson_handles_square_root_edge() {
        // endpoint with a sqrt kink still converges under subdivision
        let f = |x: f64| (1.0 - x * x).max(0.0).sqrt();
        let quarter_circle = std::f64::consts::PI / 4.0;
        assert_relative_eq!(
            adaptive_simpson(&f, 0.0, 1.0, 1e-10),
            quarter_circle,
            epsilon = 1e-8
        );
    }

    #[test]
    fn hyp2f1_reduces_to_log_identity() {
        // 2F1(1, 1; 2; z) = -ln(1-z)/z
        for &z in &[-0.3, -2.0, -10.0] {
            assert_relative_eq!(
                hyp2f1(1.0, 1.0, 2.0, z),
                -(1.0 - z).ln() / z,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn trapezoid_linear_function() {
        let grid = [0.0, 0.5, 1.5, 2.0];
        let vals: Vec<f64> = grid.iter().map(|x| 2.0 * x + 1.0).collect();
        assert_relative_eq!(trapezoid(&grid, &vals), 6.0, epsilon = 1e-14);
    }
}
