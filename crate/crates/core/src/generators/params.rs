use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reservoir::{
    gamma_set_dhl, gamma_set_hl, ComputedGammaSet, DhlDensities, GammaOptions, HlDensities,
};

/// Single-atom rates of the dissipative two-level generator:
/// `L σ± = −(γ₁ ∓ iε) σ±`, `L σ_z = −γ₂ (σ_z − η I)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomRates {
    pub epsilon: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eta: f64,
}

impl AtomRates {
    /// Lindblad rates `(decay, pump, dephasing)` reproducing these actions.
    pub fn lindblad_rates(&self) -> (f64, f64, f64) {
        let decay = 0.5 * self.gamma2 * (1.0 - self.eta);
        let pump = 0.5 * self.gamma2 * (1.0 + self.eta);
        let dephasing = 0.5 * (self.gamma1 - 0.5 * self.gamma2);
        (decay, pump, dephasing)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParamInvariantViolation(m));
        if !(self.epsilon > 0.0) {
            return bad(format!("atomic energy gap must be positive (got {})", self.epsilon));
        }
        if !(self.gamma2 > 0.0 && self.gamma2 <= 2.0 * self.gamma1) {
            return bad(format!("need 0 < gamma2 <= 2 gamma1 (got gamma1 = {}, gamma2 = {})", self.gamma1, self.gamma2));
        }
        if !(-1.0..=1.0).contains(&self.eta) {
            return bad(format!("pump parameter eta must lie in [-1, 1] (got {})", self.eta));
        }
        Ok(())
    }
}

/// Parameters of the dissipative laser model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ASParams {
    /// Half chain size `N`; there are `2N+1` atoms.
    pub half_chain: usize,
    pub epsilon: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eta: f64,
    /// Mode frequencies `ω_l`.
    pub omega: Vec<f64>,
    /// Mode dampings `κ_l`.
    pub kappa: Vec<f64>,
    /// Real couplings `λ_l`.
    pub lambda: Vec<f64>,
}

impl ASParams {
    pub fn modes(&self) -> usize {
        self.omega.len()
    }

    pub fn atom(&self) -> AtomRates {
        AtomRates { epsilon: self.epsilon, gamma1: self.gamma1, gamma2: self.gamma2, eta: self.eta }
    }

    pub fn with_atom(mut self, a: AtomRates) -> Self {
        self.epsilon = a.epsilon;
        self.gamma1 = a.gamma1;
        self.gamma2 = a.gamma2;
        self.eta = a.eta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.atom().validate()?;
        let n = self.omega.len();
        if self.kappa.len() != n || self.lambda.len() != n {
            return Err(Error::ParamMismatch(format!(
                "{} frequencies, {} dampings and {} couplings; the counts must agree",
                n,
                self.kappa.len(),
                self.lambda.len()
            )));
        }
        if let Some(w) = self.omega.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::ParamInvariantViolation(format!("mode frequencies must be positive (got {w})")));
        }
        if let Some(k) = self.kappa.iter().find(|k| !(**k > 0.0)) {
            return Err(Error::ParamInvariantViolation(format!("mode dampings must be positive (got {k})")));
        }
        if let Some(l) = self.lambda.iter().find(|l| !l.is_finite()) {
            return Err(Error::ParamInvariantViolation(format!("coupling {l} is not finite")));
        }
        Ok(())
    }
}

/// Hamiltonian-side parameters of the boson-reservoir model.
#[derive(Debug, Clone, PartialEq)]
pub struct HLParams {
    pub omega_r: f64,
    pub mu: f64,
    pub alpha: f64,
    /// Counter-rotating strength.
    pub beta: f64,
    pub densities: HlDensities,
}

impl HLParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) {
            return Err(Error::ParamInvariantViolation(format!("beta must be nonnegative (got {})", self.beta)));
        }
        Ok(())
    }

    pub fn gamma_set(&self, opts: &GammaOptions) -> Result<ComputedGammaSet> {
        self.validate()?;
        gamma_set_hl(&self.densities, self.omega_r, self.mu, opts)
    }
}

/// Hamiltonian-side parameters of the fermion-reservoir model.
#[derive(Debug, Clone, PartialEq)]
pub struct DHLParams {
    pub omega_r: f64,
    pub mu: f64,
    pub densities: DhlDensities,
}

impl DHLParams {
    pub fn gamma_set(&self, opts: &GammaOptions) -> Result<ComputedGammaSet> {
        gamma_set_dhl(&self.densities, self.omega_r, self.mu, opts)
    }
}
