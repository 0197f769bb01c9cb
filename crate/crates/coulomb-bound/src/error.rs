use thiserror::Error;

/// Errors raised by density construction, functional evaluation and the
/// verification oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("grid radii must be strictly increasing and positive (index {index})")]
    GridNotIncreasing { index: usize },
    #[error("grid values must be nonnegative and finite (index {index})")]
    GridNegativeValue { index: usize },
    #[error("grid needs at least {min} nodes, got {got}")]
    GridTooShort { min: usize, got: usize },
    #[error("grid tail does not decay (fitted rate {rate}); charge integral diverges")]
    InfiniteExtent { rate: f64 },
    #[error("total charge must be positive and finite, got {0}")]
    InvalidTotalCharge(f64),
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("seminorm double integral diverges: sqrt-density has a jump at the support boundary")]
    DivergentSeminorm,
    #[error("k-space integral did not converge (integrand does not decay)")]
    NonConvergentKIntegral,
    #[error("L = \u{222b}\u{3c1}^{{4/3}} vanishes; ratio Q undefined")]
    ZeroL43,
    #[error("alpha must lie in (0,1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("species list is empty")]
    EmptySpecies,
    #[error("point configuration needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {i} and {j} coincide (distance {dist})")]
    CoincidentPoints { i: usize, j: usize, dist: f64 },
    #[error("Onsager margin requires unit charges, got {0}")]
    NonUnitCharge(f64),
    #[error("density vanishes at point {index}; the lambda smearing recipe is undefined there")]
    ZeroDensityAtPoint { index: usize },
    #[error("orbital is not normalized: \u{222b}|\u{3c6}|\u{b2} = {norm}")]
    NonNormalizedOrbital { norm: f64 },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
