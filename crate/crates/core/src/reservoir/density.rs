use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64 as C64;

use super::gamma::Detuning;
use crate::error::{Error, Result};

/// Closed interval of frequencies; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidDensity(format!("support [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, w: f64) -> bool {
        w >= self.lo && w <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityForm {
    /// `J0` on `[center − half_width, center + half_width]`.
    Flat { j0: f64, center: f64, half_width: f64 },
    /// `J0 w² / ((ω − center)² + w²)`: peak value `J0`.
    Lorentzian { j0: f64, center: f64, width: f64 },
    /// `J0 exp(−(ω − center)² / 2σ²)`.
    Gaussian { j0: f64, center: f64, sigma: f64 },
    /// Piecewise-linear interpolation of samples on a strictly increasing grid.
    Tabulated { omega: Vec<f64>, values: Vec<f64> },
    /// Nonnegative combination `Σ c_k J_k`.
    Sum(Vec<(f64, SpectralDensity)>),
}

/// Effective reservoir density `J(ω)` with the dispersion Jacobian and the
/// squared form factor folded in. `J` vanishes outside `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    form: DensityForm,
    support: Interval,
}

impl SpectralDensity {
    pub fn zero() -> Self {
        Self::flat(0.0, 0.0, 1.0).expect("valid")
    }

    pub fn flat(j0: f64, center: f64, half_width: f64) -> Result<Self> {
        if !(j0 >= 0.0) || !(half_width > 0.0) {
            return Err(Error::InvalidDensity(format!("flat density needs J0 >= 0 and half_width > 0 (got {j0}, {half_width})")));
        }
        let support = Interval::new(center - half_width, center + half_width)?;
        Ok(Self { form: DensityForm::Flat { j0, center, half_width }, support })
    }

    pub fn lorentzian(j0: f64, center: f64, width: f64) -> Result<Self> {
        if !(j0 >= 0.0) || !(width > 0.0) {
            return Err(Error::InvalidDensity(format!("lorentzian needs J0 >= 0 and width > 0 (got {j0}, {width})")));
        }
        Ok(Self { form: DensityForm::Lorentzian { j0, center, width }, support: Interval::REAL_LINE })
    }

    pub fn gaussian(j0: f64, center: f64, sigma: f64) -> Result<Self> {
        if !(j0 >= 0.0) || !(sigma > 0.0) {
            return Err(Error::InvalidDensity(format!("gaussian needs J0 >= 0 and sigma > 0 (got {j0}, {sigma})")));
        }
        Ok(Self { form: DensityForm::Gaussian { j0, center, sigma }, support: Interval::REAL_LINE })
    }

    pub fn tabulated(omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if omega.len() != values.len() || omega.len() < 2 {
            return Err(Error::InvalidDensity("tabulated density needs at least two (ω, J) pairs".into()));
        }
        if omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidDensity("tabulated frequency grid must be strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDensity(format!("tabulated density has invalid value {v}")));
        }
        let support = Interval::new(omega[0], *omega.last().unwrap())?;
        Ok(Self { form: DensityForm::Tabulated { omega, values }, support })
    }

    /// Parses a two-column `ω J` text table. Blank lines and lines starting
    /// with `#` are skipped; columns may be separated by whitespace or commas.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut omega = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::InvalidDensity(format!("line {}: expected two columns", lineno + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::InvalidDensity(format!("line {}: {e}", lineno + 1)))
            };
            omega.push(parse(cols[0])?);
            values.push(parse(cols[1])?);
        }
        Self::tabulated(omega, values)
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }

    pub fn sum(terms: Vec<(f64, SpectralDensity)>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        if terms.iter().any(|(c, _)| !(*c >= 0.0)) {
            return Err(Error::InvalidDensity("combination weights must be nonnegative".into()));
        }
        let lo = terms.iter().map(|(_, j)| j.support.lo).fold(f64::INFINITY, f64::min);
        let hi = terms.iter().map(|(_, j)| j.support.hi).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { form: DensityForm::Sum(terms), support: Interval::new(lo, hi)? })
    }

    /// Restricts the support to `window` (the density is cut to zero outside).
    pub fn restricted(mut self, window: Interval) -> Result<Self> {
        self.support = self
            .support
            .intersect(&window)
            .ok_or_else(|| Error::InvalidDensity("restriction leaves an empty support".into()))?;
        Ok(self)
    }

    pub fn form(&self) -> &DensityForm {
        &self.form
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn eval(&self, w: f64) -> f64 {
        if !self.support.contains(w) {
            return 0.0;
        }
        self.eval_form(w)
    }

    fn eval_form(&self, w: f64) -> f64 {
        match &self.form {
            DensityForm::Flat { j0, .. } => *j0,
            DensityForm::Lorentzian { j0, center, width } => {
                let x = w - center;
                j0 * width * width / (x * x + width * width)
            }
            DensityForm::Gaussian { j0, center, sigma } => {
                let x = (w - center) / sigma;
                j0 * (-0.5 * x * x).exp()
            }
            DensityForm::Tabulated { omega, values } => {
                let k = match omega.binary_search_by(|p| p.partial_cmp(&w).unwrap()) {
                    Ok(k) => return values[k],
                    Err(k) => k,
                };
                if k == 0 || k == omega.len() {
                    return 0.0;
                }
                let t = (w - omega[k - 1]) / (omega[k] - omega[k - 1]);
                values[k - 1] * (1.0 - t) + values[k] * t
            }
            DensityForm::Sum(terms) => terms.iter().map(|(c, j)| c * j.eval(w)).sum(),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match &self.form {
            DensityForm::Flat { j0, .. } | DensityForm::Lorentzian { j0, .. } | DensityForm::Gaussian { j0, .. } => {
                *j0 == 0.0
            }
            DensityForm::Tabulated { values, .. } => values.iter().all(|v| *v == 0.0),
            DensityForm::Sum(terms) => terms.iter().all(|(c, j)| *c == 0.0 || j.is_identically_zero()),
        }
    }

    /// Points where `J` has kinks, jumps or a sharp feature; quadrature
    /// splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![self.support.lo, self.support.hi];
        match &self.form {
            DensityForm::Flat { .. } => {}
            DensityForm::Lorentzian { center, .. } | DensityForm::Gaussian { center, .. } => pts.push(*center),
            DensityForm::Tabulated { omega, .. } => pts.extend(omega.iter().copied()),
            DensityForm::Sum(terms) => {
                for (_, j) in terms {
                    pts.extend(j.breakpoints());
                }
            }
        }
        pts.retain(|p| p.is_finite() && p >= &self.support.lo && p <= &self.support.hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// `ω ↦ J(ω − shift)`: the density translated by `shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        let form = match &self.form {
            DensityForm::Flat { j0, center, half_width } => {
                DensityForm::Flat { j0: *j0, center: center + shift, half_width: *half_width }
            }
            DensityForm::Lorentzian { j0, center, width } => {
                DensityForm::Lorentzian { j0: *j0, center: center + shift, width: *width }
            }
            DensityForm::Gaussian { j0, center, sigma } => {
                DensityForm::Gaussian { j0: *j0, center: center + shift, sigma: *sigma }
            }
            DensityForm::Tabulated { omega, values } => {
                DensityForm::Tabulated { omega: omega.iter().map(|w| w + shift).collect(), values: values.clone() }
            }
            DensityForm::Sum(terms) => DensityForm::Sum(terms.iter().map(|(c, j)| (*c, j.shifted(shift))).collect()),
        };
        Self { form, support: Interval { lo: self.support.lo + shift, hi: self.support.hi + shift } }
    }

    /// `ω ↦ J(−ω)`.
    pub fn mirrored(&self) -> Self {
        let form = match &self.form {
            DensityForm::Flat { j0, center, half_width } => {
                DensityForm::Flat { j0: *j0, center: -center, half_width: *half_width }
            }
            DensityForm::Lorentzian { j0, center, width } => {
                DensityForm::Lorentzian { j0: *j0, center: -center, width: *width }
            }
            DensityForm::Gaussian { j0, center, sigma } => {
                DensityForm::Gaussian { j0: *j0, center: -center, sigma: *sigma }
            }
            DensityForm::Tabulated { omega, values } => DensityForm::Tabulated {
                omega: omega.iter().rev().map(|w| -w).collect(),
                values: values.iter().rev().copied().collect(),
            },
            DensityForm::Sum(terms) => DensityForm::Sum(terms.iter().map(|(c, j)| (*c, j.mirrored())).collect()),
        };
        Self { form, support: Interval { lo: -self.support.hi, hi: -self.support.lo } }
    }

    pub fn total_weight_estimate(&self) -> Option<f64> {
        match &self.form {
            DensityForm::Flat { j0, .. } => Some(j0 * (self.support.hi - self.support.lo)),
            DensityForm::Lorentzian { j0, width, .. } if !self.support.is_finite() => Some(PI * j0 * width),
            _ => None,
        }
    }

    /// `Γ(ε) = ∫ J(ω) / (ε − iΔ(ω)) dω` in closed form, for flat densities and
    /// for Lorentzians on the whole real line. `ε = 0` gives the limit value.
    pub fn closed_form_gamma(&self, detuning: Detuning, eps: f64) -> Option<C64> {
        let i = C64::new(0.0, 1.0);
        if self.is_identically_zero() {
            return Some(C64::new(0.0, 0.0));
        }
        let raw = match &self.form {
            DensityForm::Flat { j0, .. } => {
                // ∫ dω / (ε − i x) over x ∈ [a, b] equals i [ln(ε − i x)]_a^b; at ε = 0
                // this is π 1[a<0<b] + i ln|b/a| (principal branch handles the jump).
                let a = self.support.lo - detuning.reference;
                let b = self.support.hi - detuning.reference;
                let v = if eps > 0.0 {
                    i * ((C64::new(eps, -b)).ln() - C64::new(eps, -a).ln())
                } else {
                    let re = if a < 0.0 && b > 0.0 {
                        PI
                    } else if a == 0.0 || b == 0.0 {
                        PI / 2.0
                    } else {
                        0.0
                    };
                    C64::new(re, (b / a).abs().ln())
                };
                *j0 * v
            }
            DensityForm::Lorentzian { j0, center, width } if !self.support.is_finite() => {
                let delta = center - detuning.reference;
                i * PI * j0 * width / C64::new(delta, width + eps)
            }
            _ => return None,
        };
        // sign −1 maps Δ to −Δ, i.e. complex conjugation of the canonical value
        Some(if detuning.sign < 0.0 { raw.conj() } else { raw })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_density_vanishes_outside_support() {
        let j = SpectralDensity::flat(2.0, 1.0, 0.5).unwrap();
        assert_eq!(j.eval(1.2), 2.0);
        assert_eq!(j.eval(1.6), 0.0);
        assert_eq!(j.eval(0.4), 0.0);
    }

    #[test]
    fn tabulated_grid_must_increase() {
        assert!(SpectralDensity::tabulated(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(SpectralDensity::tabulated(vec![0.0, 1.0], vec![0.0, -1.0]).is_err());
        let j = SpectralDensity::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(j.eval(0.5), 1.0);
        assert_eq!(j.eval(2.0), 1.0);
        assert_eq!(j.eval(3.5), 0.0);
    }

    #[test]
    fn table_text_parses_with_comments() {
        let j = SpectralDensity::parse_table("# w J\n0.0 1.0\n\n1.0, 3.0\n2.0\t1.0\n").unwrap();
        assert_eq!(j.eval(0.5), 2.0);
        assert!(SpectralDensity::parse_table("0 1 2\n").is_err());
        assert!(SpectralDensity::parse_table("1 1\n0 1\n").is_err());
    }

    #[test]
    fn shift_and_mirror_transform_the_argument() {
        let j = SpectralDensity::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        let s = j.shifted(2.0);
        let m = j.mirrored();
        for w in [-0.5, 0.3, 1.0, 2.2, 2.9] {
            assert!((s.eval(w + 2.0) - j.eval(w)).abs() < 1e-14);
            assert!((m.eval(-w) - j.eval(w)).abs() < 1e-15);
        }
    }

    #[test]
    fn restriction_cuts_support() {
        let j = SpectralDensity::lorentzian(1.0, 0.0, 1.0).unwrap().restricted(Interval::new(-1.0, 2.0).unwrap()).unwrap();
        assert_eq!(j.eval(-1.5), 0.0);
        assert!((j.eval(1.0) - 0.5).abs() < 1e-15);
    }
}
