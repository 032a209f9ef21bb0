use crate::lattice::Vertex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("epsilon {0} is outside [0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("potential {0} is outside [0, 1]")]
    PotentialOutOfRange(f64),

    #[error("expected {expected} values for the region, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} lies outside B_{half_width}")]
    OutsideRegion { vertex: Vertex, half_width: u32 },

    #[error("B_{required} does not fit inside B_{available}")]
    RegionTooSmall { required: u32, available: u32 },

    #[error("{a} and {b} are not nearest neighbours")]
    NotNeighbours { a: Vertex, b: Vertex },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("radii must satisfy 0 < m < n < r <= {limit}, got m={m} n={n} r={r}")]
    RadiusOrdering { m: u32, n: u32, r: u32, limit: u32 },

    #[error("brute-force oracle supports half-width <= {limit}, got {half_width}")]
    OracleTooLarge { half_width: u32, limit: u32 },

    #[error("operator with {blocks} blocks exceeds the supported maximum of {limit}")]
    OperatorTooLarge { blocks: usize, limit: usize },

    #[error("power iteration did not converge in {iterations} iterations (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },
}
