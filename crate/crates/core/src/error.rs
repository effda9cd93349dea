use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group label `{0}`")]
    InvalidLabel(String),
    #[error("generator closure exceeded {cap} elements")]
    ClosureOverflow { cap: usize },
    #[error("class algebra eigenvalues did not split after {attempts} attempts")]
    CharacterSplit { attempts: usize },
    #[error("multiplicity {value} is not within tolerance of an integer")]
    NonIntegerMultiplicity { value: f64 },
    #[error("representation is not a (anti-)homomorphism: residual {residual:e}")]
    NotARepresentation { residual: f64 },
    #[error("no affine Dynkin template matches the adjacency matrix")]
    NoDynkinMatch,
    #[error("matrices do not commute: residual {residual:e}")]
    NotCommuting { residual: f64 },
    #[error("simultaneous triangularization failed")]
    Triangularization,
    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("point lies on the fixed locus; its orbit is not free")]
    NotFreeOrbit,
    #[error("joint spectrum is not stable under the group action")]
    SpectrumNotInvariant,
    #[error("equivariance residual {residual:e} exceeds tolerance")]
    NotEquivariant { residual: f64 },
    #[error("invariant basis has {found} elements but the Molien series predicts {expected} in degree {degree}")]
    MolienMismatch { degree: usize, found: usize, expected: usize },
    #[error("Molien coefficient {value} in degree {degree} is not an integer")]
    MolienNotInteger { degree: usize, value: f64 },
    #[error("degree cap {0} too small for the invariant generators")]
    DegreeCapTooSmall(usize),
    #[error("no relation among the generators up to degree {0}")]
    NoRelation(usize),
    #[error("relation space at degree {degree} has dimension {dim}, expected 1")]
    RelationNotUnique { degree: usize, dim: usize },
    #[error("value depends on the spectrum representative: spread {spread:e}")]
    RepresentativeDependence { spread: f64 },
    #[error("input triple is not stacky-stable")]
    Unstable,
    #[error("input triple has no cyclic vector")]
    NotCyclic,
    #[error("moment-map flow failed to decrease the residual after backtracking at iteration {iteration}")]
    FlowStalled { iteration: usize },
    #[error("no stable origin-supported triple found after {attempts} attempts")]
    FiberSampling { attempts: usize },
    #[error("uniqueness violated: {0}")]
    Uniqueness(String),
    #[error("incidence mismatch: {0}")]
    Incidence(String),
    #[error("chart index {chart} out of range for n = {n}")]
    ChartIndex { n: usize, chart: usize },
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
