use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape coordinate singular: bodies 1 and 2 collide")]
    ShapeSingular,

    #[error("total collapse: moment of inertia is zero")]
    TotalCollapse,

    #[error("collision between bodies {0} and {1}")]
    Collision(usize, usize),

    #[error("map pole: shape lies within {0:e} of ζ = 1/2")]
    MapPole(f64),

    #[error("configuration is not in the center-of-mass frame (offset {0:e})")]
    NotCenterOfMass(f64),

    #[error("velocity undefined on central configuration")]
    CriticalPoint,

    #[error("closed form evaluated outside its domain (2μρ + 3ρ² = {0:e})")]
    OutsideDomain(f64),

    #[error("unphysical required size: √I = {0:e}")]
    UnphysicalSize(f64),

    #[error("non-positive moment of inertia {0:e}")]
    NonPositiveInertia(f64),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("inconsistent initial data: {0}")]
    InconsistentInitialData(String),

    #[error("unphysical mu {0}: the equal-mass bound requires mu >= 3")]
    UnphysicalMu(f64),

    #[error("no seed found on level set mu = {0}")]
    NoSeed(f64),

    #[error("least-squares fit failed: {0}")]
    FitFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
