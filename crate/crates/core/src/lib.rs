//! Free, Boolean, conditionally free and bi-free additive convolutions of
//! compactly supported measures, computed through analytic subordination.
//!
//! Measures live in [`measure`]; the subordination fixed points in
//! [`solver`]. The convolution modules evaluate Cauchy transforms of the
//! convolved measures and their atoms, while [`series`] and [`oracle`] give
//! independent moment-level routes used for verification.

pub mod bifreeconv;
pub mod cfree;
pub mod contour;
pub mod error;
pub mod freeconv;
pub mod limits;
pub mod measure;
pub mod oracle;
pub mod schema;
pub mod semigroup;
pub mod series;
pub mod solver;

pub use bifreeconv::{
    bifree_atoms, bifree_eval, bound_check, density2d_smoothed, double_poisson_smoothing,
    matrix_cauchy_2x2, matrix_r_2x2, pi1, BiEvalDiagnostics, BiFreeEvaluator, UpperTriangular2,
};
pub use cfree::{
    bi_boolean_eval, boolean_atoms, boolean_eval, cbifree_eval, cfree_eval, h_function, CPair1D,
    CPair2D,
};
pub use error::{Error, Result};
pub use freeconv::{free_atoms, free_density, free_eval, FreeConvEvaluator};
pub use measure::{
    Atom1D, ComplexPoint, DensityGrid, Measure1D, MeasureOptions, PlanarAtom, PlanarMeasure,
};
pub use oracle::{universal_moment_oracle, Letter, OraclePair};
pub use semigroup::{
    atom_evolution, marginal_atom_evolution, semigroup_eval, semigroup_marginal_eval,
    SemigroupState,
};
pub use series::{MomentTable2D, Series1, Series2};
pub use solver::{free_subordination, semigroup_subordination, SolverConfig, SubordinationResult};
