use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown material `{name}` (available: {available})")]
    UnknownMaterial { name: String, available: String },

    #[error("unknown atom species `{0}`")]
    UnknownAtom(String),

    #[error("magnetic moment must be positive, got {0:e} J/T")]
    ZeroMoment(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("mesh too coarse: {got} panels, at least {min} required")]
    TooCoarse { got: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observation point ({x:e}, {z:e}) lies on the current sheet")]
    OnSheet { x: f64, z: f64 },

    #[error("quadrature did not converge after {intervals} subintervals (error estimate {estimate:e})")]
    QuadratureNonConvergence { intervals: usize, estimate: f64 },

    #[error("current {current:e} A exceeds the critical current {critical:e} A")]
    CurrentExceedsCritical { current: f64, critical: f64 },

    #[error("current history is not a monotonic ramp from zero; use the cycle profile")]
    NonMonotonicHistory,

    #[error("current ordering violated: need 0 <= I ({current:e}) <= Imax ({max:e}) <= Ic ({critical:e})")]
    OrderingViolation { current: f64, max: f64, critical: f64 },

    #[error("point at r = {r:e} m lies inside the cylinder of radius {radius:e} m")]
    InteriorPoint { r: f64, radius: f64 },

    #[error("no trap exists: {0}")]
    NoTrap(String),

    #[error("linear system is singular (reciprocal condition estimate {rcond:e})")]
    SingularSystem { rcond: f64 },

    #[error("observation point ({x:e}, {z:e}) is within {distance:e} m of the conductor surface (cutoff {cutoff:e} m)")]
    TooCloseToSurface {
        x: f64,
        z: f64,
        distance: f64,
        cutoff: f64,
    },

    #[error("point ({x:e}, {z:e}) lies inside the conductor")]
    InsideConductor { x: f64, z: f64 },

    #[error("no potential minimum found: {0}")]
    NoMinimum(String),

    #[error("no potential barrier in the {0} direction")]
    UnboundedDirection(String),

    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("unit error: {0}")]
    Unit(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
