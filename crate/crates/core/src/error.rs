use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("total dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("empty Hilbert space specification")]
    EmptySpace,
    #[error("site {site}: {reason}")]
    SiteMismatch { site: usize, reason: String },
    #[error("operands live on different Hilbert spaces")]
    SpaceMismatch,
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("parameter invariant violated: {0}")]
    ParamInvariantViolation(String),
    #[error("invalid spectral density: {0}")]
    InvalidDensity(String),
    #[error("adaptive quadrature exceeded its budget of {intervals} subintervals (error estimate {estimate:e})")]
    QuadratureDivergence { intervals: usize, estimate: f64 },
    #[error("resonance condition violated: omega_r = {omega_r}, 2*mu = {two_mu}")]
    ResonanceViolation { omega_r: f64, two_mu: f64 },
    #[error("expected a generator in the {expected} picture")]
    PictureMismatch { expected: &'static str },
    #[error("generator is not hermiticity preserving (deviation {0:e})")]
    DecompositionFailure(f64),
    #[error("Re(gamma_h1) + Re(gamma_h2) vanishes; the pump parameter is undefined")]
    DegeneratePump,
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("trace drift {drift:e} exceeds the monitor bound {bound:e} at t = {t}")]
    MonitorBreach { t: f64, drift: f64, bound: f64 },
    #[error("generator kernel has dimension {0}, expected 1")]
    DegenerateKernel(usize),
    #[error("resonance {resonance} lies outside the band [{lo}, {hi}]")]
    BandTooNarrow { resonance: f64, lo: f64, hi: f64 },
    #[error("time ordering violated: need t > t' (t = {t}, t' = {t_prime})")]
    OrderViolation { t: f64, t_prime: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("config: {0}")]
    Config(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureDivergence { .. }
                | Error::StepSizeUnderflow { .. }
                | Error::MonitorBreach { .. }
                | Error::DegenerateKernel(_)
                | Error::DecompositionFailure(_)
        )
    }
}
