//! Abstract snowspheres as combinatorics: generator validation, iterated
//! subdivision into j-cylinders, the chain metric `d_j`, and the annulus
//! diagnostics behind its convergence proof.

pub mod generator;
pub mod metric;
pub mod subdivision;

pub use generator::{build_generator, snowsphere_hausdorff_dim, GeneratorComplex, GeneratorSpec};
pub use metric::{
    annulus_crossing_min, chain_distance, metric_probe, random_address,
    representative_deviation, vertex_addresses, MetricProbe, PointAddress,
};
pub use subdivision::{BaseKind, SubdivisionComplex};

use thiserror::Error;

/// Cylinder budget: levels are built only while the total face count stays
/// under this.
pub const CYLINDER_BUDGET: usize = 5_000_000;

#[derive(Debug, Error)]
pub enum SnowcombError {
    #[error("generator grid clause violated: {0}")]
    Grid(String),
    #[error("generator boundary clause violated: {0}")]
    Boundary(String),
    #[error("generator disk clause violated: {0}")]
    Disk(String),
    #[error("generator symmetry clause violated: {0}")]
    Symmetry(String),
    #[error("generator corner clause violated: {0}")]
    Corner(String),
    #[error("subdivision budget exceeded: {0} cylinders over budget {1}")]
    BudgetExceeded(usize, usize),
    #[error("invalid point address: {0}")]
    InvalidAddress(String),
    #[error("level {0} not built (max {1})")]
    LevelUnavailable(usize, usize),
    #[error("metric probe failed: {0}")]
    Probe(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("generator file parse error: {0}")]
    Parse(#[from] serde_json::Error),
}
