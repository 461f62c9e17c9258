//! Second-order check of the stochastic limit on a discretized reservoir.
//!
//! The reservoir is replaced by `M` modes on a band, and the vacuum
//! two-point term of the rescaled wave operator is summed mode by mode with
//! closed-form time integrals. As `λ → 0` the rotating channel tends to
//! `−Γ₋ t` and the counter-rotating cross term dies out.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reservoir::{gamma_minus, Detuning, GammaOptions, Interval, SpectralDensity};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteReservoir {
    /// `(ω_k, g_k)`, frequencies strictly increasing.
    pub modes: Vec<(f64, f64)>,
    pub band: (f64, f64),
}

impl DiscreteReservoir {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `Σ g_k²`.
    pub fn total_weight(&self) -> f64 {
        self.modes.iter().map(|(_, g)| g * g).sum()
    }

    pub fn single_mode(omega: f64, g: f64) -> Self {
        Self { modes: vec![(omega, g)], band: (omega, omega) }
    }
}

/// Midpoint rule on `band` with `g_k² = J(ω_k)Δω`. When `resonance` is given
/// it must lie inside the band.
pub fn discretize(j: &SpectralDensity, m: usize, band: Interval, resonance: Option<f64>) -> Result<DiscreteReservoir> {
    if m < 2 {
        return Err(Error::ParamInvariantViolation(format!("need at least two modes, got {m}")));
    }
    if !band.is_finite() || !(band.lo < band.hi) {
        return Err(Error::ParamInvariantViolation(format!("band [{}, {}] must be finite and nonempty", band.lo, band.hi)));
    }
    if let Some(r) = resonance {
        if !band.contains(r) {
            return Err(Error::BandTooNarrow { resonance: r, lo: band.lo, hi: band.hi });
        }
    }
    let dw = (band.hi - band.lo) / m as f64;
    let modes = (0..m)
        .map(|k| {
            let w = band.lo + (k as f64 + 0.5) * dw;
            (w, (j.eval(w).max(0.0) * dw).sqrt())
        })
        .collect();
    Ok(DiscreteReservoir { modes, band: (band.lo, band.hi) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Rotating,
    CounterRotating,
}

fn phi1(z: C64) -> C64 {
    if z.norm() < 0.5 {
        // (e^z − 1)/z
        let mut term = C64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..20 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `∫₀¹ uⁿ e^{xu} du` for `n = 0..len`, with `x` purely imaginary.
fn moments(x: C64, len: usize) -> Vec<C64> {
    let mut m = vec![C64::new(0.0, 0.0); len];
    if x.norm() <= 4.0 {
        for (n, mn) in m.iter_mut().enumerate() {
            let mut pow = C64::new(1.0, 0.0);
            let mut fact = 1.0;
            for j in 0..60 {
                *mn += pow / (fact * (n + j + 1) as f64);
                pow *= x;
                fact *= (j + 1) as f64;
            }
        }
    } else {
        let ex = x.exp();
        m[0] = (ex - 1.0) / x;
        for n in 1..len {
            m[n] = (ex - m[n - 1] * n as f64) / x;
        }
    }
    m
}

/// `∫₀¹ du e^{xu} ∫₀ᵘ dv e^{yv}`.
fn unit_double(x: C64, y: C64) -> C64 {
    if y.norm() >= 0.1 {
        return (phi1(x + y) - phi1(x)) / y;
    }
    const TERMS: usize = 14;
    let m = moments(x, TERMS + 1);
    let mut sum = C64::new(0.0, 0.0);
    let mut yp = C64::new(1.0, 0.0);
    let mut fact = 1.0;
    for n in 0..TERMS {
        fact *= (n + 1) as f64;
        sum += yp * m[n + 1] / fact;
        yp *= y;
    }
    sum
}

/// `∫₀ᵗ dt₁ ∫₀^{t₁} dt₂ e^{i a t₁ + i b t₂}`.
pub fn double_time_integral(a: f64, b: f64, t: f64) -> C64 {
    unit_double(C64::new(0.0, a * t), C64::new(0.0, b * t)) * (t * t)
}

/// `I_λ(t) = −(1/λ²) Σ_k g_k² ∫₀ᵗ∫₀^{t₁} e^{i a_k t₁ + i b_k t₂}` with
/// `a_k = Δ_k/λ²`, `Δ_k = ω_k − ω_ref`. The rotating channel has
/// `b_k = −a_k`; the counter-rotating cross term picks up an extra
/// `e^{2iω_ref t₂/λ²}`.
pub fn second_order_term(channel: Channel, res: &DiscreteReservoir, omega_ref: f64, lambda: f64, t: f64) -> C64 {
    let l2 = lambda * lambda;
    let extra = match channel {
        Channel::Rotating => 0.0,
        Channel::CounterRotating => 2.0 * omega_ref,
    };
    let sum: C64 = res
        .modes
        .iter()
        .filter(|(_, g)| *g != 0.0)
        .map(|&(w, g)| {
            let d = w - omega_ref;
            double_time_integral(d / l2, (extra - d) / l2, t) * (g * g)
        })
        .sum();
    -sum / l2
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub lambda: f64,
    /// `I_λ(t)` of the rotating channel.
    pub second_order: C64,
    /// `−Γ₋ t`.
    pub predicted: C64,
    /// `|I_λ(t)/t + Γ₋|`.
    pub abs_error: f64,
    /// `|I_λ(t)|` of the counter-rotating cross term.
    pub counter_rotating: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub t: f64,
    pub modes: usize,
    pub gamma_minus: C64,
    pub rows: Vec<ConvergenceRow>,
    /// `abs_error` strictly decreases down the rows.
    pub monotone: bool,
    /// `|I/t|` change at the smallest λ when the mode count is doubled.
    pub discretization_floor: f64,
}

impl ConvergenceTable {
    pub fn final_relative_error(&self) -> f64 {
        let scale = self.gamma_minus.norm();
        self.rows.last().map_or(0.0, |r| if scale > 0.0 { r.abs_error / scale } else { r.abs_error })
    }

    /// Ratios of consecutive counter-rotating magnitudes (previous / next).
    pub fn counter_rotating_ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[0].counter_rotating / w[1].counter_rotating).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,re_I_over_t,im_I_over_t,re_pred,im_pred,abs_err,cr_mag\n");
        for r in &self.rows {
            let i = r.second_order / self.t;
            let p = r.predicted / self.t;
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.lambda, i.re, i.im, p.re, p.im, r.abs_error, r.counter_rotating
            ));
        }
        s
    }
}

/// Rotating and counter-rotating second-order terms along `lambdas`, compared
/// with `−Γ₋` of `j` at the resonance `omega_ref`.
pub fn convergence_report(
    j: &SpectralDensity,
    m: usize,
    band: Interval,
    omega_ref: f64,
    lambdas: &[f64],
    t: f64,
    gamma_opts: &GammaOptions,
) -> Result<ConvergenceTable> {
    if lambdas.is_empty() || lambdas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::ParamInvariantViolation("λ sequence must be nonempty and strictly decreasing".into()));
    }
    if lambdas.iter().any(|l| !(*l > 0.0 && *l <= 1.0)) {
        return Err(Error::ParamInvariantViolation("λ must lie in (0, 1]".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::ParamInvariantViolation(format!("t = {t} must be positive")));
    }
    let res = discretize(j, m, band, Some(omega_ref))?;
    let gm = gamma_minus(j, Detuning::plus(omega_ref), gamma_opts)?.value;
    let rows: Vec<ConvergenceRow> = lambdas
        .par_iter()
        .map(|&lambda| {
            let i = second_order_term(Channel::Rotating, &res, omega_ref, lambda, t);
            ConvergenceRow {
                lambda,
                second_order: i,
                predicted: -gm * t,
                abs_error: (i / t + gm).norm(),
                counter_rotating: second_order_term(Channel::CounterRotating, &res, omega_ref, lambda, t).norm(),
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
    let fine = discretize(j, 2 * m, band, None)?;
    let last = rows.last().map(|r| r.lambda).unwrap_or(1.0);
    let floor = ((second_order_term(Channel::Rotating, &fine, omega_ref, last, t)
        - second_order_term(Channel::Rotating, &res, omega_ref, last, t))
        / t)
        .norm();
    Ok(ConvergenceTable { t, modes: m, gamma_minus: gm, rows, monotone, discretization_floor: floor })
}

/// `|(1/λ²) ∫₀^{t'} Σ g_k² e^{iΔ_k(t−s)/λ²} ds|`: the first-order overlap
/// between the reservoir field at `t` and the wave operator up to `t'`.
pub fn time_consecutive_check(res: &DiscreteReservoir, omega_ref: f64, lambda: f64, t: f64, t_prime: f64) -> Result<f64> {
    if !(t > t_prime) {
        return Err(Error::OrderViolation { t, t_prime });
    }
    if t_prime == 0.0 {
        return Ok(0.0);
    }
    let l2 = lambda * lambda;
    let sum: C64 = res
        .modes
        .iter()
        .map(|&(w, g)| {
            let c = (w - omega_ref) / l2;
            // e^{ict} ∫₀^{t'} e^{−ics} ds
            C64::new(0.0, c * t).exp() * phi1(C64::new(0.0, -c * t_prime)) * (t_prime * g * g)
        })
        .sum();
    Ok(sum.norm() / l2)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn flat_band(omega_r: f64) -> (SpectralDensity, Interval) {
        (SpectralDensity::flat(0.8, omega_r, 1.0).unwrap(), Interval::new(omega_r - 1.0, omega_r + 1.0).unwrap())
    }

    /// Trapezoid rule on a fine 2-D grid.
    fn brute_double(a: f64, b: f64, t: f64) -> C64 {
        let n = 2000;
        let h = t / n as f64;
        let mut total = C64::new(0.0, 0.0);
        for i in 0..=n {
            let t1 = i as f64 * h;
            let mut inner = C64::new(0.0, 0.0);
            for k in 0..=i {
                let t2 = k as f64 * h;
                let w = if k == 0 || k == i { 0.5 } else { 1.0 };
                inner += C64::new(0.0, a * t1 + b * t2).exp() * w;
            }
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            total += inner * (h * w);
        }
        total * h
    }

    #[test]
    fn double_integral_matches_grid() {
        for &(a, b) in &[(0.0, 0.0), (0.3, -0.3), (2.0, 5.0), (1e-4, 3e-5), (-7.0, 7.02), (11.0, -4.0)] {
            let exact = double_time_integral(a, b, 1.5);
            let grid = brute_double(a, b, 1.5);
            assert!((exact - grid).norm() < 1e-5, "{a} {b}: {exact} vs {grid}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for &x in &[0.5, 3.9, 4.1, 20.0] {
            let y = 0.1;
            let lo = unit_double(C64::new(0.0, x), C64::new(0.0, y * (1.0 - 1e-9)));
            let hi = unit_double(C64::new(0.0, x), C64::new(0.0, y * (1.0 + 1e-9)));
            assert!((lo - hi).norm() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn flat_weight_is_exact() {
        let (j, band) = flat_band(3.0);
        let r = discretize(&j, 100, band, Some(3.0)).unwrap();
        assert!((r.total_weight() - 1.6).abs() < 1e-12);
        assert!(r.modes.windows(2).all(|w| w[1].0 > w[0].0));
        let z = discretize(&SpectralDensity::zero(), 10, band, None).unwrap();
        assert!(z.modes.iter().all(|(_, g)| *g == 0.0));
    }

    #[test]
    fn resonance_outside_band() {
        let (j, band) = flat_band(3.0);
        assert!(matches!(discretize(&j, 10, band, Some(5.0)), Err(Error::BandTooNarrow { .. })));
        assert!(discretize(&j, 1, band, None).is_err());
    }

    #[test]
    fn single_resonant_mode_grows_quadratically() {
        let r = DiscreteReservoir::single_mode(2.0, 0.3);
        for &lambda in &[1.0, 0.5, 0.1] {
            let t = 1.7;
            let v = second_order_term(Channel::Rotating, &r, 2.0, lambda, t);
            let want = -0.09 * t * t / (2.0 * lambda * lambda);
            assert!((v - want).norm() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn flat_band_converges_to_gamma() {
        let (j, band) = flat_band(3.0);
        let table = convergence_report(&j, 400, band, 3.0, &[1.0, 0.5, 0.25, 0.125], 2.0, &GammaOptions::default()).unwrap();
        assert!((table.gamma_minus - C64::new(0.8 * PI, 0.0)).norm() < 1e-10);
        assert!(table.monotone, "{:?}", table.rows);
        assert!(table.final_relative_error() <= 1e-2);
        assert!(table.counter_rotating_ratios().iter().all(|r| *r >= 2.0), "{:?}", table.counter_rotating_ratios());
        assert_eq!(table.to_csv().lines().count(), 5);
    }

    #[test]
    fn zero_density_table_is_zero() {
        let (_, band) = flat_band(3.0);
        let t = convergence_report(&SpectralDensity::zero(), 50, band, 3.0, &[1.0, 0.5], 1.0, &GammaOptions::default())
            .unwrap();
        assert!(t.rows.iter().all(|r| r.second_order == C64::new(0.0, 0.0) && r.abs_error == 0.0));
    }

    #[test]
    fn time_consecutive_residual() {
        let (j, band) = flat_band(3.0);
        let res = discretize(&j, 4000, band, Some(3.0)).unwrap();
        let vals: Vec<f64> =
            [0.5, 0.25, 0.125, 0.0625].iter().map(|&l| time_consecutive_check(&res, 3.0, l, 2.0, 1.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
        assert_eq!(time_consecutive_check(&res, 3.0, 0.5, 2.0, 0.0).unwrap(), 0.0);
        assert!(matches!(time_consecutive_check(&res, 3.0, 0.5, 1.0, 1.0), Err(Error::OrderViolation { .. })));
        let single = DiscreteReservoir::single_mode(3.0, 0.5);
        let a = time_consecutive_check(&single, 3.0, 0.5, 2.0, 1.0).unwrap();
        let b = time_consecutive_check(&single, 3.0, 0.0625, 2.0, 1.0).unwrap();
        assert!(b > a && a > 0.0);
    }

    #[test]
    fn rotating_limit_matches_gamma() {
        let (j, band) = flat_band(3.0);
        let res = discretize(&j, 200_000, band, Some(3.0)).unwrap();
        let gm = gamma_minus(&j, Detuning::plus(3.0), &GammaOptions::default()).unwrap().value;
        let i = second_order_term(Channel::Rotating, &res, 3.0, 1.0 / 128.0, 2.0) / 2.0;
        assert!((i + gm).norm() / gm.norm() < 1e-4);
    }
}
