use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid-parameter: {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// η = 0 at ω_q = ω₀/2: the subspace is already degenerate and no
    /// rotation is defined. Callers should fall back to the bare basis.
    #[error("undefined-angle: eta = 0 at omega_q = omega_0/2; use the bare basis")]
    UndefinedAngle,

    #[error("domain: {0}")]
    Domain(String),

    #[error("no-trapping-spacing: control amplitude is zero, trapping spacing diverges")]
    NoTrappingSpacing,

    #[error("invalid-rates: r2 = {r2} < r1/2 = {half_r1} gives negative pure dephasing")]
    InvalidRates { r2: f64, half_r1: f64 },

    #[error("singular-point: susceptibility denominator vanishes at delta = {delta}")]
    SingularPoint { delta: f64 },

    #[error("singular-f: F^2 = sqrt(2) makes the critical spacing diverge")]
    SingularF,

    #[error("overflow: {0}")]
    Overflow(String),

    #[error(
        "stability-guard: dt = {dt} ns too large for fastest scale {fastest} rad/ns; suggested dt = {suggested_dt} ns"
    )]
    StabilityGuard { dt: f64, fastest: f64, suggested_dt: f64 },

    #[error("no-bracket: regime is {regime} at both ends of [{lo}, {hi}] rad/ns")]
    NoBracket { lo: f64, hi: f64, regime: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
