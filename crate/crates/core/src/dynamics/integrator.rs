//! Dormand-Prince 5(4) with local extrapolation and FSAL, for the linear
//! autonomous system `y' = f(y)` over complex vectors.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    /// Relative and absolute per-step tolerance.
    pub tol: f64,
    /// Bound on `|monitor(y) − monitor(y₀)|`; a step exceeding it is rejected.
    pub monitor_bound: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `t0` through every time in `outputs` (strictly increasing,
/// each `≥ t0`), calling `record(t, y)` on arrival. `monitor` returns a
/// conserved scalar whose drift from its initial value is bounded.
pub fn integrate<F, M, R>(
    f: F,
    monitor: M,
    mut y: Vec<C64>,
    t0: f64,
    outputs: &[f64],
    opts: &StepOptions,
    mut record: R,
) -> Result<StepStats>
where
    F: Fn(&[C64], &mut [C64]),
    M: Fn(&[C64]) -> f64,
    R: FnMut(f64, &[C64]) -> Result<()>,
{
    let n = y.len();
    let z = C64::new(0.0, 0.0);
    let mut k: Vec<Vec<C64>> = (0..7).map(|_| vec![z; n]).collect();
    let mut stage = vec![z; n];
    let mut y_new = vec![z; n];
    let m0 = monitor(&y);
    let mut stats = StepStats::default();
    let mut t = t0;
    f(&y, &mut k[0]);
    let span = outputs.last().map_or(0.0, |&te| te - t0);
    let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let slope = k[0].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut h = if slope > 0.0 { (0.01 * scale / slope).min(span) } else { span };
    if !(h > 0.0) {
        h = 1.0;
    }
    for &target in outputs {
        while t < target {
            let last = t + h >= target;
            let step = if last { target - t } else { h };
            let h_min = 1e-13 * t.abs().max(1.0);
            if step < h_min && !last {
                return Err(Error::StepSizeUnderflow { t });
            }
            for s in 0..6 {
                let row = A[s];
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, a) in row.iter().enumerate() {
                        if *a != 0.0 {
                            acc += k[j][i] * (step * a);
                        }
                    }
                    stage[i] = acc;
                }
                if s == 5 {
                    y_new.copy_from_slice(&stage);
                }
                f(&stage, &mut k[s + 1]);
            }
            // k[6] = f(y_new) for the error estimate and FSAL
            let mut err = 0.0f64;
            for i in 0..n {
                let mut e = z;
                for (j, c) in E.iter().enumerate() {
                    if *c != 0.0 {
                        e += k[j][i] * c;
                    }
                }
                let sc = opts.tol * (1.0 + y[i].norm().max(y_new[i].norm()));
                err = err.max((e * step).norm() / sc);
            }
            if !err.is_finite() {
                err = f64::INFINITY;
            }
            if err <= 1.0 {
                let drift = (monitor(&y_new) - m0).abs();
                if drift > opts.monitor_bound {
                    stats.rejected += 1;
                    if 0.5 * step < h_min {
                        return Err(Error::MonitorBreach { t: t + step, drift, bound: opts.monitor_bound });
                    }
                    h = 0.5 * step;
                    continue;
                }
                t = if last { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                let (first, rest) = k.split_at_mut(1);
                first[0].copy_from_slice(&rest[5]);
                stats.accepted += 1;
                if stats.accepted + stats.rejected > opts.max_steps {
                    return Err(Error::StepSizeUnderflow { t });
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = step * fac;
                } else {
                    h = h.max(step * fac.min(1.0));
                }
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.25)).clamp(0.1, 0.9);
                if h < h_min {
                    return Err(Error::StepSizeUnderflow { t });
                }
            }
        }
        record(t, &y)?;
    }
    Ok(stats)
}
