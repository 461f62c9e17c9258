//! TOML run configuration shared by every subcommand.
//!
//! ```toml
//! [units]
//! reference_rate = 1.0      # required; every rate and frequency is in these units
//!
//! [system]
//! model = "as"              # "as" | "hl" | "dhl"
//! half_chain = 0            # N, so 2N+1 atoms
//! modes = 1                 # n
//! cutoff = 3                # Fock cutoff per mode
//!
//! [as]
//! epsilon = 1.0
//! gamma1 = 0.5
//! gamma2 = 1.0
//! eta = 0.2
//! omega = [1.0]
//! kappa = [0.3]
//! lambda = [0.4]
//!
//! [hl]                      # density fields name entries of [densities]
//! omega_r = 2.0
//! mu = 1.0
//! g = ["rad"]
//! h1 = "flat"
//! h2 = "flat"
//! lambda = [0.4]
//!
//! [densities.flat]
//! kind = "flat"             # zero | flat | lorentzian | gaussian | table
//! j0 = 0.1
//! center = 2.0
//! half_width = 1.0
//! ```
//!
//! Optional sections: `[dhl]`, `[gamma]`, `[match]`, `[build]`, `[compare]`,
//! `[run]`, `[sl_check]`; see the field docs below.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dynamics::InitialState;
use crate::error::{Error, Result};
use crate::generators::{ASParams, DHLParams, HLParams};
use crate::matching::DEFAULT_MATCH_TOLERANCE;
use crate::operator_core::{HilbertSpec, SiteKind};
use crate::reservoir::{
    default_eps_seq, Convention, DhlDensities, GammaOptions, HlDensities, Interval, QuadOptions, SpectralDensity,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    As,
    Hl,
    Dhl,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::As => "as",
            Model::Hl => "hl",
            Model::Dhl => "dhl",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub reference_rate: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub model: Model,
    #[serde(default)]
    pub half_chain: usize,
    #[serde(default = "one")]
    pub modes: usize,
    #[serde(default = "three")]
    pub cutoff: usize,
}

fn one() -> usize {
    1
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsConfig {
    pub epsilon: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eta: f64,
    pub omega: Vec<f64>,
    pub kappa: Vec<f64>,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HlConfig {
    pub omega_r: f64,
    pub mu: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    pub g: Vec<String>,
    pub h1: String,
    pub h2: String,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DhlConfig {
    pub omega_r: f64,
    pub mu: f64,
    pub g: Vec<String>,
    pub b_plus: String,
    pub b_minus: String,
    pub c_plus: String,
    pub c_minus: String,
    pub lambda: Vec<f64>,
}

/// One named spectral density. Which fields are needed depends on `kind`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub kind: String,
    pub j0: Option<f64>,
    pub center: Option<f64>,
    pub half_width: Option<f64>,
    pub width: Option<f64>,
    pub sigma: Option<f64>,
    /// Inline table for `kind = "table"`.
    pub omega: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
    /// Two-column text file for `kind = "table"`, relative to the config file.
    pub file: Option<PathBuf>,
    /// Optional `[lo, hi]` window the density is cut to.
    pub restrict: Option<[f64; 2]>,
}

impl DensityConfig {
    pub fn resolve(&self, name: &str, base: &Path) -> Result<SpectralDensity> {
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| Error::Config(format!("density '{name}' of kind '{}' needs '{field}'", self.kind)))
        };
        let j = match self.kind.as_str() {
            "zero" => SpectralDensity::zero(),
            "flat" => SpectralDensity::flat(need(self.j0, "j0")?, need(self.center, "center")?, need(self.half_width, "half_width")?)?,
            "lorentzian" => {
                SpectralDensity::lorentzian(need(self.j0, "j0")?, need(self.center, "center")?, need(self.width, "width")?)?
            }
            "gaussian" => {
                SpectralDensity::gaussian(need(self.j0, "j0")?, need(self.center, "center")?, need(self.sigma, "sigma")?)?
            }
            "table" => match (&self.omega, &self.values, &self.file) {
                (Some(w), Some(v), None) => SpectralDensity::tabulated(w.clone(), v.clone())?,
                (None, None, Some(f)) => SpectralDensity::load_table(base.join(f))?,
                _ => {
                    return Err(Error::Config(format!(
                        "density '{name}': a table needs either 'omega' and 'values' or 'file'"
                    )))
                }
            },
            other => return Err(Error::Config(format!("density '{name}': unknown kind '{other}'"))),
        };
        match self.restrict {
            Some([lo, hi]) => j.restricted(Interval::new(lo, hi)?),
            None => Ok(j),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaConfig {
    #[serde(default = "canonical")]
    pub convention: Convention,
    #[serde(default = "gamma_tolerance")]
    pub tolerance: f64,
    #[serde(default = "yes")]
    pub closed_form: bool,
    pub eps_seq: Option<Vec<f64>>,
    pub max_intervals: Option<usize>,
}

fn canonical() -> Convention {
    Convention::Canonical
}

fn gamma_tolerance() -> f64 {
    GammaOptions::default().tolerance
}

fn yes() -> bool {
    true
}

impl Default for GammaConfig {
    fn default() -> Self {
        Self { convention: canonical(), tolerance: gamma_tolerance(), closed_form: true, eps_seq: None, max_intervals: None }
    }
}

impl GammaConfig {
    pub fn options(&self) -> GammaOptions {
        let mut quad = QuadOptions::default();
        if let Some(m) = self.max_intervals {
            quad.max_intervals = m;
        }
        GammaOptions {
            eps_seq: self.eps_seq.clone().unwrap_or_else(default_eps_seq),
            tolerance: self.tolerance,
            quad,
            convention: self.convention,
            closed_form: self.closed_form,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfig {
    #[serde(default = "match_tolerance")]
    pub tolerance: f64,
    /// `Im Γ^(h₁) + Im Γ^(h₂)`, left free by the dictionary.
    #[serde(default)]
    pub imaginary_sum: f64,
}

fn match_tolerance() -> f64 {
    DEFAULT_MATCH_TOLERANCE
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self { tolerance: match_tolerance(), imaginary_sum: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildFormat {
    #[default]
    Summary,
    Binary,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    #[serde(default)]
    pub format: BuildFormat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub left: Model,
    pub right: Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolvePicture {
    #[default]
    Schrodinger,
    Heisenberg,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "all_down")]
    pub initial: InitialState,
    /// Explicit output times; otherwise `steps + 1` uniform times on `[0, t_end]`.
    pub t_grid: Option<Vec<f64>>,
    #[serde(default = "t_end")]
    pub t_end: f64,
    #[serde(default = "steps")]
    pub steps: usize,
    #[serde(default = "run_tol")]
    pub tol: f64,
    #[serde(default)]
    pub picture: EvolvePicture,
    /// `sz:k`, `sp:k`, `sm:k` for atom `k`; `n:l`, `a:l` for mode `l`.
    /// Defaults to `σ_z` of every atom and `n` of every mode.
    pub observables: Option<Vec<String>>,
}

fn all_down() -> InitialState {
    InitialState::AllDown
}

fn t_end() -> f64 {
    5.0
}

fn steps() -> usize {
    50
}

fn run_tol() -> f64 {
    1e-10
}

impl Default for RunSection {
    fn default() -> Self {
        Self { initial: all_down(), t_grid: None, t_end: t_end(), steps: steps(), tol: run_tol(), picture: EvolvePicture::default(), observables: None }
    }
}

impl RunSection {
    pub fn times(&self) -> Result<Vec<f64>> {
        if let Some(g) = &self.t_grid {
            return Ok(g.clone());
        }
        if !(self.t_end > 0.0) || self.steps == 0 {
            return Err(Error::Config("[run] needs t_end > 0 and steps > 0".into()));
        }
        Ok((0..=self.steps).map(|k| self.t_end * k as f64 / self.steps as f64).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlCheckConfig {
    pub density: String,
    #[serde(default = "sl_modes")]
    pub modes: usize,
    pub band: [f64; 2],
    /// Reference frequency `ω_R` of the rotating frame.
    pub omega_r: f64,
    #[serde(default = "sl_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "sl_t")]
    pub t: f64,
}

fn sl_modes() -> usize {
    400
}

fn sl_lambdas() -> Vec<f64> {
    vec![1.0, 0.5, 0.25, 0.125]
}

fn sl_t() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub units: Units,
    pub system: SystemConfig,
    #[serde(rename = "as")]
    pub as_params: Option<AsConfig>,
    pub hl: Option<HlConfig>,
    pub dhl: Option<DhlConfig>,
    #[serde(default)]
    pub densities: BTreeMap<String, DensityConfig>,
    #[serde(default)]
    pub gamma: GammaConfig,
    #[serde(default, rename = "match")]
    pub matching: MatchConfig,
    #[serde(default)]
    pub build: BuildConfig,
    pub compare: Option<CompareConfig>,
    #[serde(default)]
    pub run: RunSection,
    pub sl_check: Option<SlCheckConfig>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.base_dir = base_dir.into();
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn validate(&self) -> Result<()> {
        let r = self.units.reference_rate;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Config(format!("[units] reference_rate must be positive (got {r})")));
        }
        let n = self.system.modes;
        let count = |what: &str, len: usize| {
            if len != n {
                return Err(Error::Config(format!("{what} has {len} entries but [system] declares {n} modes")));
            }
            Ok(())
        };
        if let Some(a) = &self.as_params {
            count("[as] omega", a.omega.len())?;
            count("[as] kappa", a.kappa.len())?;
            count("[as] lambda", a.lambda.len())?;
        }
        if let Some(h) = &self.hl {
            count("[hl] g", h.g.len())?;
            count("[hl] lambda", h.lambda.len())?;
            for name in h.g.iter().chain([&h.h1, &h.h2]) {
                self.check_density(name)?;
            }
        }
        if let Some(d) = &self.dhl {
            count("[dhl] g", d.g.len())?;
            count("[dhl] lambda", d.lambda.len())?;
            for name in d.g.iter().chain([&d.b_plus, &d.b_minus, &d.c_plus, &d.c_minus]) {
                self.check_density(name)?;
            }
        }
        if let Some(s) = &self.sl_check {
            self.check_density(&s.density)?;
        }
        Ok(())
    }

    fn check_density(&self, name: &str) -> Result<()> {
        if !self.densities.contains_key(name) {
            return Err(Error::Config(format!("density '{name}' is not defined under [densities]")));
        }
        Ok(())
    }

    pub fn density(&self, name: &str) -> Result<SpectralDensity> {
        self.check_density(name)?;
        self.densities[name].resolve(name, &self.base_dir)
    }

    pub fn space_spec(&self, matter: SiteKind) -> HilbertSpec {
        HilbertSpec::laser(matter, self.system.half_chain, self.system.modes, self.system.cutoff)
    }

    pub fn as_params(&self) -> Result<ASParams> {
        let a = self.as_params.as_ref().ok_or_else(|| Error::Config("missing [as] section".into()))?;
        Ok(ASParams {
            half_chain: self.system.half_chain,
            epsilon: a.epsilon,
            gamma1: a.gamma1,
            gamma2: a.gamma2,
            eta: a.eta,
            omega: a.omega.clone(),
            kappa: a.kappa.clone(),
            lambda: a.lambda.clone(),
        })
    }

    /// HL parameters and couplings `λ_l`.
    pub fn hl_params(&self) -> Result<(HLParams, Vec<f64>)> {
        let h = self.hl.as_ref().ok_or_else(|| Error::Config("missing [hl] section".into()))?;
        let densities = HlDensities {
            g: h.g.iter().map(|n| self.density(n)).collect::<Result<_>>()?,
            h1: self.density(&h.h1)?,
            h2: self.density(&h.h2)?,
        };
        Ok((HLParams { omega_r: h.omega_r, mu: h.mu, alpha: h.alpha, beta: h.beta, densities }, h.lambda.clone()))
    }

    pub fn dhl_params(&self) -> Result<(DHLParams, Vec<f64>)> {
        let d = self.dhl.as_ref().ok_or_else(|| Error::Config("missing [dhl] section".into()))?;
        let densities = DhlDensities {
            g: d.g.iter().map(|n| self.density(n)).collect::<Result<_>>()?,
            b_plus: self.density(&d.b_plus)?,
            b_minus: self.density(&d.b_minus)?,
            c_plus: self.density(&d.c_plus)?,
            c_minus: self.density(&d.c_minus)?,
        };
        Ok((DHLParams { omega_r: d.omega_r, mu: d.mu, densities }, d.lambda.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[units]
reference_rate = 1.0
[system]
model = "hl"
[hl]
omega_r = 2.0
mu = 1.0
g = ["rad"]
h1 = "flat"
h2 = "flat"
lambda = [0.4]
[densities.rad]
kind = "lorentzian"
j0 = 0.1
center = 2.0
width = 0.5
[densities.flat]
kind = "flat"
j0 = 0.1
center = 2.0
half_width = 1.0
"#;

    #[test]
    fn parses_and_resolves() {
        let c = RunConfig::parse(BASE, ".").unwrap();
        let (p, lambda) = c.hl_params().unwrap();
        assert_eq!(lambda, vec![0.4]);
        assert_eq!(p.densities.g.len(), 1);
        assert_eq!(c.run.times().unwrap().len(), 51);
        assert_eq!(c.gamma.options(), GammaOptions::default());
    }

    #[test]
    fn units_are_required() {
        let text = BASE.replace("[units]\nreference_rate = 1.0\n", "");
        assert!(matches!(RunConfig::parse(&text, "."), Err(Error::Config(_))));
        let text = BASE.replace("reference_rate = 1.0", "reference_rate = 0.0");
        assert!(matches!(RunConfig::parse(&text, "."), Err(Error::Config(_))));
    }

    #[test]
    fn dangling_density_and_counts() {
        let text = BASE.replace("h2 = \"flat\"", "h2 = \"nope\"");
        assert!(RunConfig::parse(&text, ".").unwrap_err().to_string().contains("nope"));
        let text = BASE.replace("lambda = [0.4]", "lambda = [0.4, 0.1]");
        assert!(matches!(RunConfig::parse(&text, "."), Err(Error::Config(_))));
        let text = BASE.replace("[system]", "[system]\nbogus = 1");
        assert!(matches!(RunConfig::parse(&text, "."), Err(Error::Config(_))));
    }

    #[test]
    fn inline_table_density() {
        let d = DensityConfig {
            kind: "table".into(),
            omega: Some(vec![0.0, 1.0, 2.0]),
            values: Some(vec![0.0, 1.0, 0.0]),
            restrict: Some([0.5, 2.0]),
            ..Default::default()
        };
        let j = d.resolve("t", Path::new(".")).unwrap();
        assert!((j.eval(0.75) - 0.75).abs() < 1e-15);
        assert_eq!(j.eval(0.25), 0.0);
        let bad = DensityConfig { kind: "table".into(), ..Default::default() };
        assert!(bad.resolve("t", Path::new(".")).is_err());
    }
}
