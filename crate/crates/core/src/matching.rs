//! Dictionaries between reservoir coefficients and the parameters of the
//! dissipative laser generator.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{ASParams, AtomRates};
use crate::reservoir::{GammaSet, ModelKind};

pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-10;

/// Parameters recovered from a coefficient set. Chain size and couplings do
/// not enter the coefficients and are supplied on conversion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedParams {
    pub atom: AtomRates,
    pub omega: Vec<f64>,
    pub kappa: Vec<f64>,
}

impl ResolvedParams {
    pub fn to_as_params(&self, half_chain: usize, lambda: Vec<f64>) -> ASParams {
        ASParams {
            half_chain,
            epsilon: self.atom.epsilon,
            gamma1: self.atom.gamma1,
            gamma2: self.atom.gamma2,
            eta: self.atom.eta,
            omega: self.omega.clone(),
            kappa: self.kappa.clone(),
            lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchStatus {
    Exact,
    /// `γ₂ ≠ 2γ₁`: the resolved parameters are the projection `γ₁ → γ₂/2`.
    NoExactMatch { residual: f64 },
    /// The fermion-channel balance fails by `residual`.
    Unbalanced { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constraints {
    /// `|γ₁ − γ₂/2|` (boson-reservoir model).
    pub gamma2_eq_2gamma1: Option<f64>,
    /// `|γ₁ − γ₂|` (fermion-reservoir model).
    pub gamma1_eq_gamma2: Option<f64>,
    pub eta_in_range: bool,
    /// `|Re(Γ^(B+) + Γ^(C+)) − Re(Γ^(B−) + Γ^(C−))|`.
    pub dhl_balance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub model: ModelKind,
    pub resolved: ResolvedParams,
    pub residuals: Vec<(String, f64)>,
    pub constraints: Constraints,
    pub status: MatchStatus,
    /// `Im Γ^(h₁) + Im Γ^(h₂)`, which the laser generator does not see.
    pub free_imaginary_sum: Option<f64>,
    pub tolerance: f64,
    pub feasible: bool,
}

impl MatchReport {
    fn finish(mut self) -> Self {
        let eta = self.resolved.atom.eta;
        self.constraints.eta_in_range = (-1.0 - self.tolerance..=1.0 + self.tolerance).contains(&eta);
        let worst = self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);
        self.feasible = worst <= self.tolerance && self.constraints.eta_in_range;
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.resolved.atom;
        let model = match self.model {
            ModelKind::Hl => "hl",
            ModelKind::Dhl => "dhl",
        };
        writeln!(f, "model = {model}")?;
        match self.status {
            MatchStatus::Exact => writeln!(f, "status = exact")?,
            MatchStatus::NoExactMatch { residual } => writeln!(f, "status = no_exact_match\nstatus_residual = {residual:e}")?,
            MatchStatus::Unbalanced { residual } => writeln!(f, "status = unbalanced\nstatus_residual = {residual:e}")?,
        }
        writeln!(f, "feasible = {}", self.feasible)?;
        writeln!(f, "tolerance = {:e}", self.tolerance)?;
        writeln!(f, "epsilon = {}", a.epsilon)?;
        writeln!(f, "gamma1 = {}", a.gamma1)?;
        writeln!(f, "gamma2 = {}", a.gamma2)?;
        writeln!(f, "eta = {}", a.eta)?;
        for (j, (w, k)) in self.resolved.omega.iter().zip(&self.resolved.kappa).enumerate() {
            writeln!(f, "omega_{j} = {w}")?;
            writeln!(f, "kappa_{j} = {k}")?;
        }
        if let Some(s) = self.free_imaginary_sum {
            writeln!(f, "free_imaginary_sum = {s}")?;
        }
        if let Some(r) = self.constraints.gamma2_eq_2gamma1 {
            writeln!(f, "constraint.gamma2_eq_2gamma1 = {r:e}")?;
        }
        if let Some(r) = self.constraints.gamma1_eq_gamma2 {
            writeln!(f, "constraint.gamma1_eq_gamma2 = {r:e}")?;
        }
        if let Some(r) = self.constraints.dhl_balance {
            writeln!(f, "constraint.dhl_balance = {r:e}")?;
        }
        writeln!(f, "constraint.eta_in_range = {}", self.constraints.eta_in_range)?;
        for (name, r) in &self.residuals {
            writeln!(f, "residual.{name} = {r:e}")?;
        }
        Ok(())
    }
}

fn radiation_params(g: &GammaSet) -> (Vec<f64>, Vec<f64>) {
    (g.radiation.iter().map(|z| z.im).collect(), g.radiation.iter().map(|z| z.re).collect())
}

/// Reads laser parameters off a boson-reservoir coefficient set:
/// `ω_j = Im Γ^(g)_j`, `κ_j = Re Γ^(g)_j`, `γ₁ = Re(Γ^(h₁) + Γ^(h₂))`,
/// `ε = Im(Γ^(h₁) − Γ^(h₂))`, `γ₂ = 2γ₁`, `η = (Re Γ^(h₂) − Re Γ^(h₁)) / γ₁`.
pub fn as_from_hl_gammas(g: &GammaSet, tolerance: f64) -> Result<MatchReport> {
    let (h1, h2) = g.hl_matter()?;
    let sum = h1.re + h2.re;
    if sum == 0.0 {
        return Err(Error::DegeneratePump);
    }
    let gamma1 = sum;
    let gamma2 = 2.0 * gamma1;
    let eta = (h2.re - h1.re) / sum;
    let epsilon = (h1 - h2).im;
    let (omega, kappa) = radiation_params(g);
    let residuals = vec![
        ("re_h1".to_string(), (h1.re - 0.25 * gamma2 * (1.0 - eta)).abs()),
        ("re_h2".to_string(), (h2.re - 0.25 * gamma2 * (1.0 + eta)).abs()),
    ];
    Ok(MatchReport {
        model: ModelKind::Hl,
        resolved: ResolvedParams { atom: AtomRates { epsilon, gamma1, gamma2, eta }, omega, kappa },
        residuals,
        constraints: Constraints { gamma2_eq_2gamma1: Some(0.0), gamma1_eq_gamma2: None, eta_in_range: false, dhl_balance: None },
        status: MatchStatus::Exact,
        free_imaginary_sum: Some(h1.im + h2.im),
        tolerance,
        feasible: false,
    }
    .finish())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HlTargets {
    pub gammas: GammaSet,
    pub report: MatchReport,
}

/// Inverts the boson-reservoir dictionary. The coefficient set is determined
/// up to `Im Γ^(h₁) + Im Γ^(h₂) = imaginary_sum`. When `γ₂ ≠ 2γ₁`, `γ₁` is
/// projected to `γ₂/2` and the status records `|γ₁ − γ₂/2|`.
pub fn hl_gamma_targets_from_as(p: &ASParams, imaginary_sum: f64, tolerance: f64) -> Result<HlTargets> {
    p.validate()?;
    let gap = (p.gamma1 - 0.5 * p.gamma2).abs();
    let exact = gap <= tolerance;
    let re1 = 0.25 * p.gamma2 * (1.0 - p.eta);
    let re2 = 0.25 * p.gamma2 * (1.0 + p.eta);
    let h1 = C64::new(re1, 0.5 * (imaginary_sum + p.epsilon));
    let h2 = C64::new(re2, 0.5 * (imaginary_sum - p.epsilon));
    let radiation = p.kappa.iter().zip(&p.omega).map(|(&k, &w)| C64::new(k, w)).collect();
    let gammas = GammaSet::hl(radiation, h1, h2);
    let atom = AtomRates { epsilon: p.epsilon, gamma1: 0.5 * p.gamma2, gamma2: p.gamma2, eta: p.eta };
    let report = MatchReport {
        model: ModelKind::Hl,
        resolved: ResolvedParams { atom, omega: p.omega.clone(), kappa: p.kappa.clone() },
        residuals: vec![("gamma2_eq_2gamma1".to_string(), gap)],
        constraints: Constraints { gamma2_eq_2gamma1: Some(gap), gamma1_eq_gamma2: None, eta_in_range: false, dhl_balance: None },
        status: if exact { MatchStatus::Exact } else { MatchStatus::NoExactMatch { residual: gap } },
        free_imaginary_sum: Some(imaginary_sum),
        tolerance,
        feasible: false,
    }
    .finish();
    Ok(HlTargets { gammas, report })
}

/// Reads laser parameters off a fermion-reservoir coefficient set by
/// projecting the spin-mapped matter generator onto the one-electron sector:
/// `γ₁ = γ₂ = Re(Γ^(B+) + Γ^(B−) + Γ^(C+) + Γ^(C−))`,
/// `ε = Im(Γ^(B+) − Γ^(B−) − Γ^(C+) + Γ^(C−))`,
/// `η = Re(Γ^(B−) − Γ^(B+) + Γ^(C+) − Γ^(C−)) / γ₁`.
/// Balance failure is reported in the status, not as an error.
pub fn dhl_match_check(g: &GammaSet, tolerance: f64) -> Result<MatchReport> {
    let (bp, bm, cp, cm) = g.dhl_matter()?;
    let sigma = (bp + bm + cp + cm).re;
    if sigma == 0.0 {
        return Err(Error::DegeneratePump);
    }
    let balance = ((bp + cp).re - (bm + cm).re).abs();
    let epsilon = (bp - bm - cp + cm).im;
    let eta = (bm.re - bp.re + cp.re - cm.re) / sigma;
    let gamma2_balanced = 2.0 * (bp + cp).re;
    let (omega, kappa) = radiation_params(g);
    Ok(MatchReport {
        model: ModelKind::Dhl,
        resolved: ResolvedParams { atom: AtomRates { epsilon, gamma1: sigma, gamma2: sigma, eta }, omega, kappa },
        residuals: vec![("dhl_balance".to_string(), balance)],
        constraints: Constraints {
            gamma2_eq_2gamma1: None,
            gamma1_eq_gamma2: Some((sigma - gamma2_balanced).abs()),
            eta_in_range: false,
            dhl_balance: Some(balance),
        },
        status: if balance <= tolerance { MatchStatus::Exact } else { MatchStatus::Unbalanced { residual: balance } },
        free_imaginary_sum: None,
        tolerance,
        feasible: false,
    }
    .finish())
}
