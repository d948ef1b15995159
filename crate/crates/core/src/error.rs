use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrismError {
    /// A physical parameter violates the invariant of the type that owns it.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Ω = δω = 0 with vanishing relaxation rates has no defined susceptibility.
    #[error("degenerate susceptibility input (all rates and detuning zero)")]
    DegenerateInput,

    /// 1 + 4π Re χ ≤ 0: the refractive index would be imaginary.
    #[error("non-physical susceptibility: 1 + 4*pi*Re(chi) = {0} <= 0")]
    NonPhysicalIndex(f64),

    /// Field amplitude reached the grid edge margin.
    #[error("guard band violated: edge amplitude {edge:.3e} of peak exceeds {limit:.1e}")]
    GuardBand { edge: f64, limit: f64 },

    #[error("grid violation: {0}")]
    Grid(String),

    #[error("field has zero power")]
    ZeroPower,

    #[error("fields are sampled on different grids")]
    GridMismatch,

    #[error("spectral resolution search exceeded the detuning bound of {bound:.3e} rad/s")]
    Unresolvable { bound: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, PrismError>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> PrismError {
    PrismError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
