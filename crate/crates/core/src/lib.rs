//! Certified lower bounds for multivariate polynomials on polytopes through
//! blossom (Bernstein) linear relaxations, and verification and synthesis of
//! polytopic invariant sets for polynomial vector fields.

pub mod error;
pub mod geometry;
pub mod invariance;
pub mod lpsolve;
pub mod oracle;
pub mod polynomial;
pub mod relaxation;

pub use error::{Error, Result};
pub use invariance::{
    repair_offsets, synthesize, verify, FacetReport, FacetStatus, PolytopeTemplate,
    SynthesisParams, SynthesisStatus, SynthesisTrace, VectorField, VerificationReport,
};
pub use lpsolve::{LpProblem, LpSolution, LpStatus, Sense};
pub use oracle::{grid_min, sample_facet, vertex_min};
pub use polynomial::{
    bernstein_coefficients, facet_objective, BernsteinTensor, MultiPoly, Rectangle,
};
pub use relaxation::{
    lower_bound, sensitivity_bound, BoundResult, ConstraintSet, LinearConstraint,
};
