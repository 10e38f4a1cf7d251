use core::fmt;

/// Errors raised by the numerical layer.
///
/// Termination of a trajectory (blow-up, NaN) is reported as data in
/// [`crate::evolution::Termination`], not through this type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid or array dimensions disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter is outside its admissible range; `field` names it.
    InvalidParams { field: &'static str, reason: &'static str },
    /// `∂_x^{-1}` was asked to act on a field with a non-negligible x-mean.
    NonZeroXMean { max_line_mean: f64, tolerance: f64 },
    /// A norm in a quotient denominator vanished.
    DegenerateField,
    /// Iteration limit reached before the residual target.
    NoConvergence { iterations: usize, residual: f64 },
    /// The iterate shrank to zero.
    CollapseToZero,
    /// The profile is not localized in the box.
    BoundaryContamination { ratio: f64, threshold: f64 },
    /// No positive λ with P(λu) = 0.
    NoNehariRoot,
    /// The constrained energy flow ran below the configured floor.
    FlowDiverges { energy: f64 },
    /// The Zaitsev denominator comes too close to zero.
    NearSingular { min_denominator: f64 },
    /// The two closed forms of the sharp constant disagree.
    InconsistentGroundState { rel_diff: f64 },
    /// A non-finite value appeared during time stepping.
    NanEncountered { time: f64 },
    /// Not enough samples for the requested finite differences.
    InsufficientSampling { needed: usize, found: usize },
    /// h'(z) has no positive root.
    NoPositiveRoot,
    /// The instability construction failed for every b tried.
    NotAdmissible { last_b: f64 },
    /// The dilated profile carries too much energy near the grid cutoff.
    ResamplingError { band_fraction: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParams { field, reason } => write!(f, "invalid parameter {field}: {reason}"),
            Error::NonZeroXMean { max_line_mean, tolerance } => {
                write!(f, "field has nonzero x-mean ({max_line_mean:e} > {tolerance:e})")
            }
            Error::DegenerateField => write!(f, "degenerate field: a required norm vanishes"),
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:e})")
            }
            Error::CollapseToZero => write!(f, "iterate collapsed to zero"),
            Error::BoundaryContamination { ratio, threshold } => {
                write!(f, "profile not localized: boundary/peak ratio {ratio:e} exceeds {threshold:e}")
            }
            Error::NoNehariRoot => write!(f, "no positive Nehari scaling root"),
            Error::FlowDiverges { energy } => write!(f, "energy flow diverges (E = {energy:e})"),
            Error::NearSingular { min_denominator } => {
                write!(f, "profile denominator nearly singular ({min_denominator:e})")
            }
            Error::InconsistentGroundState { rel_diff } => {
                write!(f, "sharp-constant closed forms disagree by {rel_diff:e}")
            }
            Error::NanEncountered { time } => write!(f, "non-finite value at t = {time}"),
            Error::InsufficientSampling { needed, found } => {
                write!(f, "need at least {needed} samples, found {found}")
            }
            Error::NoPositiveRoot => write!(f, "no positive root of h'"),
            Error::NotAdmissible { last_b } => {
                write!(f, "no admissible instability data up to b = {last_b}")
            }
            Error::ResamplingError { band_fraction } => {
                write!(f, "dilated profile leaves the resolved band (fraction {band_fraction:e})")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
