//! Embedded adaptive Runge-Kutta (Dormand-Prince 5(4)) for small ODE
//! systems, with exact landing on caller-requested output points.

use crate::error::{Error, Result};

/// Dormand-Prince coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights (same as the last A row) and 4th-order weights.
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub struct AdaptiveRk {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
}

impl Default for AdaptiveRk {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            max_step: 0.1,
        }
    }
}

impl AdaptiveRk {
    /// Integrate y' = f(s, y) from `s0` to `s1` (either direction), invoking
    /// `observe(s, y)` at `s0`, at every point of `outputs` (which must be
    /// ordered from `s0` towards `s1`), and nowhere else.
    pub fn integrate<F, O>(
        &self,
        mut f: F,
        s0: f64,
        s1: f64,
        y0: &[f64],
        outputs: &[f64],
        mut observe: O,
    ) -> Result<Vec<f64>>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        O: FnMut(f64, &[f64]),
    {
        let dir = (s1 - s0).signum();
        if dir == 0.0 {
            return Err(Error::InvalidInput("empty integration range".into()));
        }
        let dim = y0.len();
        let mut s = s0;
        let mut y = y0.to_vec();
        observe(s, &y);

        let mut k = vec![vec![0.0; dim]; 7];
        let mut y_stage = vec![0.0; dim];
        let mut y5 = vec![0.0; dim];
        let mut h = self.max_step.min((s1 - s0).abs() / 10.0) * dir;
        let mut next_output = 0usize;

        f(s, &y, &mut k[0]);
        let mut steps = 0u64;
        while (s1 - s) * dir > 1e-14 {
            steps += 1;
            if steps > 50_000_000 {
                return Err(Error::Numerics("step budget exhausted".into()));
            }
            // land exactly on the next requested output or the endpoint
            let mut target = s1;
            if next_output < outputs.len() {
                target = outputs[next_output];
            }
            if (target - s) * dir <= 0.0 {
                next_output += 1;
                continue;
            }
            let h_work = h;
            let mut landing = None;
            if ((s + h) - target) * dir > 0.0 {
                h = target - s;
                landing = Some(target); // snap exactly; repeated s += h drifts by ulps
            }

            // six stages + FSAL stage
            for stage in 0..6 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(stage + 1) {
                        acc += A[stage][j] * kj[i];
                    }
                    y_stage[i] = y[i] + h * acc;
                }
                f(s + C[stage] * h, &y_stage, &mut k[stage + 1]);
            }
            let mut err_norm: f64 = 0.0;
            for i in 0..dim {
                let mut acc5 = 0.0;
                let mut acc4 = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    acc5 += B5[j] * kj[i];
                    acc4 += B4[j] * kj[i];
                }
                y5[i] = y[i] + h * acc5;
                let sc = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                let e = h * (acc5 - acc4) / sc;
                err_norm = err_norm.max(e.abs());
            }
            if !err_norm.is_finite() {
                return Err(Error::Numerics(format!(
                    "integrator blow-up near s = {s} (solution left its branch)"
                )));
            }
            if err_norm <= 1.0 {
                s = landing.unwrap_or(s + h);
                y.copy_from_slice(&y5);
                let (head, tail) = k.split_at_mut(6);
                head[0].copy_from_slice(&tail[0]); // FSAL
                if next_output < outputs.len() && (s - outputs[next_output]) * dir >= -1e-14 {
                    observe(s, &y);
                    next_output += 1;
                }
            }
            // PI-free step controller with the usual safety factors; a step
            // that was clamped onto an output point must not shrink the
            // working step for the next interval
            let factor = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h = if landing.is_some() && err_norm <= 1.0 {
                h_work
            } else {
                (h * factor).clamp(-self.max_step, self.max_step)
            };
            if h.abs() < 1e-13 {
                return Err(Error::Numerics(format!(
                    "step size underflow near s = {s} (err = {err_norm:e})"
                )));
            }
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay_backwards() {
        // y' = y integrated from 0 down to -3: y(-3) = e^{-3}
        let rk = AdaptiveRk::default();
        let y = rk
            .integrate(
                |_s, y, dy| dy[0] = y[0],
                0.0,
                -3.0,
                &[1.0],
                &[],
                |_, _| {},
            )
            .unwrap();
        assert_relative_eq!(y[0], (-3.0_f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let rk = AdaptiveRk {
            rtol: 1e-11,
            atol: 1e-14,
            max_step: 0.2,
        };
        let y = rk
            .integrate(
                |_s, y, dy| {
                    dy[0] = y[1];
                    dy[1] = -y[0];
                },
                0.0,
                20.0 * std::f64::consts::PI,
                &[1.0, 0.0],
                &[],
                |_, _| {},
            )
            .unwrap();
        assert_relative_eq!(y[0], 1.0, epsilon = 1e-7);
        assert!(y[1].abs() < 1e-7);
    }

    #[test]
    fn observes_requested_grid() {
        let rk = AdaptiveRk::default();
        let grid = [-0.5, -1.0, -1.5, -2.0];
        let mut seen = Vec::new();
        rk.integrate(
            |_s, y, dy| dy[0] = -y[0],
            0.0,
            -2.0,
            &[1.0],
            &grid,
            |s, y| seen.push((s, y[0])),
        )
        .unwrap();
        // first observation is s0, then the grid points
        assert_eq!(seen.len(), 1 + grid.len());
        for (idx, &g) in grid.iter().enumerate() {
            let (s, y) = seen[idx + 1];
            assert_relative_eq!(s, g, epsilon = 1e-12);
            assert_relative_eq!(y, (-g).exp(), max_relative = 1e-9); // y(s) = e^{-s}
        }
    }
}
