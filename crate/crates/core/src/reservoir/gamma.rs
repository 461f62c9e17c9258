use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::SpectralDensity;
use super::quadrature::{integrate, QuadOptions};
use crate::error::{Error, Result};

/// `Δ(ω) = sign · (ω − reference)` with `sign = ±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detuning {
    pub sign: f64,
    pub reference: f64,
}

impl Detuning {
    /// `Δ = ω − reference`.
    pub fn plus(reference: f64) -> Self {
        Self { sign: 1.0, reference }
    }

    /// `Δ = −(ω − reference)`.
    pub fn minus(reference: f64) -> Self {
        Self { sign: -1.0, reference }
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.sign * (w - self.reference)
    }

    pub fn root(&self) -> f64 {
        self.reference
    }

    pub fn negated(&self) -> Self {
        Self { sign: -self.sign, reference: self.reference }
    }
}

/// Phase convention of the half-Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `∫₀^∞ ds e^{+iΔs}`: damping rates come out nonnegative.
    #[default]
    Canonical,
    /// `∫₀^∞ ds e^{−iΔs}`, the complex conjugate.
    Conjugate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaOptions {
    /// Decreasing positive regularization parameters.
    pub eps_seq: Vec<f64>,
    /// Residual above which the warning flag is raised.
    pub tolerance: f64,
    pub quad: QuadOptions,
    pub convention: Convention,
    /// Use closed forms (flat, full-line Lorentzian) instead of quadrature.
    pub closed_form: bool,
}

impl Default for GammaOptions {
    fn default() -> Self {
        Self {
            eps_seq: default_eps_seq(),
            tolerance: 1e-8,
            quad: QuadOptions::default(),
            convention: Convention::Canonical,
            closed_form: true,
        }
    }
}

impl GammaOptions {
    pub fn quadrature_only() -> Self {
        Self { closed_form: false, ..Self::default() }
    }
}

/// `0.1 · 2^{−i}`, `i = 0..6`.
pub fn default_eps_seq() -> Vec<f64> {
    (0..7).map(|i| 0.1 * 0.5f64.powi(i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizationReport {
    pub eps_seq: Vec<f64>,
    /// `Γ(ε)` for each entry of `eps_seq`.
    pub values: Vec<C64>,
    pub extrapolated: C64,
    pub residual: f64,
    /// Residual exceeded the configured tolerance.
    pub warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaCoefficient {
    pub value: C64,
    /// Root of `Δ`, where the delta contribution sits.
    pub resonance: f64,
    /// `Δ` has no root inside the support of `J`: only the principal value survives.
    pub no_resonance_in_support: bool,
    pub report: RegularizationReport,
}

/// Weights `w_i` with `p(0) = Σ w_i y_i` for the interpolant through `(x_i, y_i)`.
fn lagrange_at_zero(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            x.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xj / (xj - x[i]))
                .product()
        })
        .collect()
}

fn extrapolate(x: &[f64], y: &[C64]) -> C64 {
    lagrange_at_zero(x).iter().zip(y).map(|(w, v)| *v * *w).sum()
}

fn validate_eps(eps: &[f64]) -> Result<()> {
    if eps.len() < 3 {
        return Err(Error::ParamMismatch("ε sequence needs at least three entries".into()));
    }
    if eps.iter().any(|e| !(*e > 0.0) || !e.is_finite()) || eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::ParamMismatch("ε sequence must be positive and strictly decreasing".into()));
    }
    Ok(())
}

/// `Γ(ε) = ∫ J(ω) / (ε − iΔ(ω)) dω` by adaptive quadrature, canonical phase.
pub fn gamma_regularized(j: &SpectralDensity, det: Detuning, eps: f64, quad: &QuadOptions) -> Result<(C64, f64)> {
    if j.is_identically_zero() {
        return Ok((C64::new(0.0, 0.0), 0.0));
    }
    let s = j.support();
    let mut breaks = j.breakpoints();
    breaks.push(det.root());
    let r = integrate(|w| C64::new(j.eval(w), 0.0) / C64::new(eps, -det.eval(w)), s.lo, s.hi, &breaks, quad)?;
    Ok((r.value, r.error))
}

fn one_sided_mean(j: &SpectralDensity, w: f64) -> f64 {
    let h = 1e-12 * w.abs().max(1.0);
    0.5 * (j.eval(w - h) + j.eval(w + h))
}

/// The coefficient `Γ₋ = lim_{ε→0⁺} ∫ J(ω) / (ε − iΔ(ω)) dω`, extrapolated
/// polynomially in `ε` from `opts.eps_seq`. Without a closed form the real
/// part is the delta contribution `π J(root)`.
pub fn gamma_minus(j: &SpectralDensity, det: Detuning, opts: &GammaOptions) -> Result<GammaCoefficient> {
    validate_eps(&opts.eps_seq)?;
    let eps = &opts.eps_seq;
    let weights = lagrange_at_zero(eps);
    let amplification: f64 = weights.iter().map(|w| w.abs()).sum();

    let closed = if opts.closed_form { j.closed_form_gamma(det, 0.0) } else { None };
    let (mut values, quad_err) = match closed {
        Some(_) => (eps.iter().map(|&e| j.closed_form_gamma(det, e).expect("closed form")).collect(), 0.0),
        None => {
            let mut values = Vec::with_capacity(eps.len());
            let mut worst = 0.0f64;
            for &e in eps {
                let (v, err) = gamma_regularized(j, det, e, &opts.quad)?;
                values.push(v);
                worst = worst.max(err);
            }
            (values, worst)
        }
    };
    let mut extrapolated = extrapolate(eps, &values);
    let residual = match closed {
        Some(exact) => (extrapolated - exact).norm(),
        None => {
            let drop_first = extrapolate(&eps[1..], &values[1..]);
            (extrapolated - drop_first).norm() + amplification * quad_err
        }
    };
    let root = det.root();
    let outside = !j.support().contains(root);
    let mut value = closed.unwrap_or(extrapolated);
    if closed.is_none() {
        // Re Γ(ε) is J smoothed at scale ε, which is not polynomial in ε
        // once an edge of J lies closer to the root than ε; use its limit
        value.re = if outside { 0.0 } else { PI * one_sided_mean(j, root) };
    }
    if opts.convention == Convention::Conjugate {
        value = value.conj();
        extrapolated = extrapolated.conj();
        values.iter_mut().for_each(|v| *v = v.conj());
    }
    Ok(GammaCoefficient {
        value,
        resonance: root,
        no_resonance_in_support: outside,
        report: RegularizationReport {
            eps_seq: eps.clone(),
            values,
            extrapolated,
            residual,
            warning: residual > opts.tolerance,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Hl,
    Dhl,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum MatterGammas {
    Hl { h1: C64, h2: C64 },
    Dhl { b_plus: C64, b_minus: C64, c_plus: C64, c_minus: C64 },
}

/// The `Γ₋` coefficients of a model: one per radiation mode plus the
/// matter channels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSet {
    pub radiation: Vec<C64>,
    pub matter: MatterGammas,
}

impl GammaSet {
    pub fn hl(radiation: Vec<C64>, h1: C64, h2: C64) -> Self {
        Self { radiation, matter: MatterGammas::Hl { h1, h2 } }
    }

    pub fn dhl(radiation: Vec<C64>, b_plus: C64, b_minus: C64, c_plus: C64, c_minus: C64) -> Self {
        Self { radiation, matter: MatterGammas::Dhl { b_plus, b_minus, c_plus, c_minus } }
    }

    pub fn model(&self) -> ModelKind {
        match self.matter {
            MatterGammas::Hl { .. } => ModelKind::Hl,
            MatterGammas::Dhl { .. } => ModelKind::Dhl,
        }
    }

    pub fn modes(&self) -> usize {
        self.radiation.len()
    }

    /// `(Γ^(h₁), Γ^(h₂))`.
    pub fn hl_matter(&self) -> Result<(C64, C64)> {
        match self.matter {
            MatterGammas::Hl { h1, h2 } => Ok((h1, h2)),
            _ => Err(Error::ParamMismatch("expected an HL coefficient set".into())),
        }
    }

    /// `(Γ^(B+), Γ^(B−), Γ^(C+), Γ^(C−))`.
    pub fn dhl_matter(&self) -> Result<(C64, C64, C64, C64)> {
        match self.matter {
            MatterGammas::Dhl { b_plus, b_minus, c_plus, c_minus } => Ok((b_plus, b_minus, c_plus, c_minus)),
            _ => Err(Error::ParamMismatch("expected a DHL coefficient set".into())),
        }
    }

    pub fn has_nonnegative_rates(&self) -> bool {
        let m: Vec<C64> = match self.matter {
            MatterGammas::Hl { h1, h2 } => vec![h1, h2],
            MatterGammas::Dhl { b_plus, b_minus, c_plus, c_minus } => vec![b_plus, b_minus, c_plus, c_minus],
        };
        self.radiation.iter().chain(&m).all(|g| g.re >= 0.0)
    }
}

/// A computed [`GammaSet`] with the per-coefficient regularization details.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComputedGammaSet {
    pub set: GammaSet,
    pub coefficients: Vec<(String, GammaCoefficient)>,
}

impl ComputedGammaSet {
    pub fn any_warning(&self) -> bool {
        self.coefficients.iter().any(|(_, c)| c.report.warning)
    }

    pub fn get(&self, label: &str) -> Option<&GammaCoefficient> {
        self.coefficients.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HlDensities {
    pub g: Vec<SpectralDensity>,
    pub h1: SpectralDensity,
    pub h2: SpectralDensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DhlDensities {
    pub g: Vec<SpectralDensity>,
    pub b_plus: SpectralDensity,
    pub b_minus: SpectralDensity,
    pub c_plus: SpectralDensity,
    pub c_minus: SpectralDensity,
}

pub const RESONANCE_TOLERANCE: f64 = 1e-9;

fn check_resonance(omega_r: f64, mu: f64) -> Result<()> {
    if (omega_r - 2.0 * mu).abs() > RESONANCE_TOLERANCE * omega_r.abs().max(1.0) {
        return Err(Error::ResonanceViolation { omega_r, two_mu: 2.0 * mu });
    }
    Ok(())
}

fn compute_all(jobs: Vec<(String, &SpectralDensity, Detuning)>, opts: &GammaOptions) -> Result<Vec<(String, GammaCoefficient)>> {
    jobs.into_par_iter()
        .map(|(label, j, det)| gamma_minus(j, det, opts).map(|c| (label, c)))
        .collect()
}

/// HL coefficients: `g_j` and `h₁` with `Δ = ω − ω_R`, `h₂` with `Δ = ω + ω_R`.
pub fn gamma_set_hl(d: &HlDensities, omega_r: f64, mu: f64, opts: &GammaOptions) -> Result<ComputedGammaSet> {
    check_resonance(omega_r, mu)?;
    let mut jobs: Vec<_> =
        d.g.iter().enumerate().map(|(k, j)| (format!("g{k}"), j, Detuning::plus(omega_r))).collect();
    jobs.push(("h1".into(), &d.h1, Detuning::plus(omega_r)));
    jobs.push(("h2".into(), &d.h2, Detuning::plus(-omega_r)));
    let coefficients = compute_all(jobs, opts)?;
    let n = d.g.len();
    let radiation = coefficients[..n].iter().map(|(_, c)| c.value).collect();
    let set = GammaSet::hl(radiation, coefficients[n].1.value, coefficients[n + 1].1.value);
    Ok(ComputedGammaSet { set, coefficients })
}

/// DHL coefficients: `B±` with `Δ = ω ∓ μ`, `C±` with `Δ = −(ω ∓ μ)`,
/// radiation as in the HL case.
pub fn gamma_set_dhl(d: &DhlDensities, omega_r: f64, mu: f64, opts: &GammaOptions) -> Result<ComputedGammaSet> {
    check_resonance(omega_r, mu)?;
    let mut jobs: Vec<_> =
        d.g.iter().enumerate().map(|(k, j)| (format!("g{k}"), j, Detuning::plus(omega_r))).collect();
    jobs.push(("b_plus".into(), &d.b_plus, Detuning::plus(mu)));
    jobs.push(("b_minus".into(), &d.b_minus, Detuning::plus(-mu)));
    jobs.push(("c_plus".into(), &d.c_plus, Detuning::minus(mu)));
    jobs.push(("c_minus".into(), &d.c_minus, Detuning::minus(-mu)));
    let coefficients = compute_all(jobs, opts)?;
    let n = d.g.len();
    let radiation = coefficients[..n].iter().map(|(_, c)| c.value).collect();
    let v = |k: usize| coefficients[n + k].1.value;
    let set = GammaSet::dhl(radiation, v(0), v(1), v(2), v(3));
    Ok(ComputedGammaSet { set, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn flat_symmetric_band_gives_pi_j0() {
        let wr = 3.0;
        let j = SpectralDensity::flat(1.0, wr, 1.0).unwrap();
        for opts in [GammaOptions::default(), GammaOptions::quadrature_only()] {
            let g = gamma_minus(&j, Detuning::plus(wr), &opts).unwrap();
            assert!(close(g.value, C64::new(PI, 0.0), 1e-9), "{:?}", g.value);
            assert!(!g.report.warning);
            assert!(!g.no_resonance_in_support);
        }
    }

    #[test]
    fn flat_asymmetric_band_has_log_principal_value() {
        let j = SpectralDensity::flat(0.7, 0.5, 1.5).unwrap(); // [−1, 2], root 0
        let g = gamma_minus(&j, Detuning::plus(0.0), &GammaOptions::quadrature_only()).unwrap();
        let expect = C64::new(0.7 * PI, 0.7 * 2f64.ln());
        assert!(close(g.value, expect, 1e-9), "{:?}", g.value);
    }

    #[test]
    fn closed_form_and_quadrature_agree_for_lorentzian() {
        let wr = 1.0;
        let j = SpectralDensity::lorentzian(1.0, wr + 0.5, 0.2).unwrap();
        let a = gamma_minus(&j, Detuning::plus(wr), &GammaOptions::default()).unwrap();
        let b = gamma_minus(&j, Detuning::plus(wr), &GammaOptions::quadrature_only()).unwrap();
        let exact = C64::new(0.0, PI * 0.2) / C64::new(0.5, 0.2);
        assert!(close(a.value, exact, 1e-14));
        assert!(close(b.value, exact, 1e-9), "{:?} vs {exact:?}", b.value);
        assert!((exact.re - 0.4333).abs() < 1e-3 && (exact.im - 1.0833).abs() < 1e-3);
    }

    #[test]
    fn gaussian_principal_value_matches_subtraction_oracle() {
        // Re = π J(root); Im = PV ∫ J/Δ by subtracting J(root) on a symmetric window
        let (c, s, root) = (0.3, 0.4, 0.0);
        let j = SpectralDensity::gaussian(1.0, c, s).unwrap();
        let g = gamma_minus(&j, Detuning::plus(root), &GammaOptions::quadrature_only()).unwrap();
        let j0 = j.eval(root);
        let n = 200_000;
        let l = 12.0;
        let h = 2.0 * l / n as f64;
        let mut pv = 0.0;
        for k in 0..n {
            let x = -l + (k as f64 + 0.5) * h;
            pv += (j.eval(x) - j0 * (-x * x).exp()) / x * h;
        }
        // ∫ e^{−x²}/x is zero in principal value
        assert!((g.value.re - PI * j0).abs() < 1e-9);
        assert!((g.value.im - pv).abs() < 1e-7, "{} vs {pv}", g.value.im);
    }

    #[test]
    fn zero_density_is_zero() {
        let g = gamma_minus(&SpectralDensity::zero(), Detuning::plus(1.0), &GammaOptions::default()).unwrap();
        assert_eq!(g.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn root_outside_support_is_reported() {
        let j = SpectralDensity::flat(1.0, 2.0, 1.0).unwrap();
        let g = gamma_minus(&j, Detuning::plus(-2.0), &GammaOptions::quadrature_only()).unwrap();
        assert!(g.no_resonance_in_support);
        assert!(g.value.re.abs() < 1e-10);
        assert!((g.value.im - (5.0f64 / 3.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn conjugate_convention_conjugates() {
        let j = SpectralDensity::gaussian(0.5, 1.2, 0.3).unwrap();
        let mut opts = GammaOptions::quadrature_only();
        let a = gamma_minus(&j, Detuning::plus(1.0), &opts).unwrap().value;
        opts.convention = Convention::Conjugate;
        let b = gamma_minus(&j, Detuning::plus(1.0), &opts).unwrap().value;
        assert!((a.conj() - b).norm() < 1e-15);
    }

    #[test]
    fn eps_sequence_is_validated() {
        let j = SpectralDensity::flat(1.0, 0.0, 1.0).unwrap();
        let bad = GammaOptions { eps_seq: vec![0.1, 0.2, 0.05], ..GammaOptions::default() };
        assert!(gamma_minus(&j, Detuning::plus(0.0), &bad).is_err());
        let short = GammaOptions { eps_seq: vec![0.1, 0.05], ..GammaOptions::default() };
        assert!(gamma_minus(&j, Detuning::plus(0.0), &short).is_err());
    }

    #[test]
    fn hl_set_checks_resonance_and_detunings() {
        let wr = 2.0;
        let d = HlDensities {
            g: vec![SpectralDensity::flat(0.2, wr, 0.5).unwrap()],
            h1: SpectralDensity::flat(0.1, wr, 0.5).unwrap(),
            h2: SpectralDensity::flat(0.3, 1.0, 0.5).unwrap(),
        };
        assert!(matches!(
            gamma_set_hl(&d, wr, 0.9, &GammaOptions::default()),
            Err(Error::ResonanceViolation { .. })
        ));
        let s = gamma_set_hl(&d, wr, 1.0, &GammaOptions::default()).unwrap();
        assert!(close(s.set.radiation[0], C64::new(0.2 * PI, 0.0), 1e-12));
        let (h1, h2) = s.set.hl_matter().unwrap();
        assert!(close(h1, C64::new(0.1 * PI, 0.0), 1e-12));
        // h₂ lives on ω > 0, root at −ω_R: pump suppressed
        assert!(h2.re.abs() < 1e-12);
        assert!(s.get("h2").unwrap().no_resonance_in_support);
    }

    #[test]
    fn dhl_swap_and_mirror() {
        let mu = 0.8;
        let jb = SpectralDensity::gaussian(0.4, mu + 0.3, 0.5).unwrap();
        let d = DhlDensities {
            g: vec![],
            b_plus: jb.clone(),
            b_minus: SpectralDensity::zero(),
            c_plus: SpectralDensity::zero(),
            c_minus: SpectralDensity::zero(),
        };
        let opts = GammaOptions::quadrature_only();
        let a = gamma_set_dhl(&d, 2.0 * mu, mu, &opts).unwrap().set.dhl_matter().unwrap();
        // translating the density by −2μ moves it to the B− resonance
        let shifted = DhlDensities { b_plus: SpectralDensity::zero(), b_minus: jb.shifted(-2.0 * mu), ..d.clone() };
        let b = gamma_set_dhl(&shifted, 2.0 * mu, mu, &opts).unwrap().set.dhl_matter().unwrap();
        assert!((a.0 - b.1).norm() < 1e-9);
        // mirroring ω → −ω conjugates the coefficient
        let mirrored = DhlDensities { b_plus: SpectralDensity::zero(), b_minus: jb.mirrored(), ..d };
        let m = gamma_set_dhl(&mirrored, 2.0 * mu, mu, &opts).unwrap().set.dhl_matter().unwrap();
        assert!((a.0.conj() - m.1).norm() < 1e-9);
        assert_eq!(a.2, C64::new(0.0, 0.0));
    }
}
