//! Numerical tolerances used throughout the crate.
//!
//! Every comparison against an analytic identity goes through one of these
//! named constants so the accuracy contract of the whole crate is visible in
//! one place. Tolerances are absolute unless the name says otherwise;
//! relative tolerances are applied against the natural scale of the quantity
//! being tested (stated in each doc comment).

/// Projective equality of isometries: after canonicalizing the sign of a
/// unit-determinant 2x2 matrix (largest-magnitude entry made positive),
/// entries must agree to this absolute tolerance.
pub const EQ_PROJECTIVE: f64 = 1e-9;

/// Relative tolerance for classifying a vector as lightlike: |<v,v>| below
/// this multiple of the Euclidean norm-square of v.
pub const LIGHTLIKE_REL: f64 = 1e-10;

/// Absolute tolerance for internal consistency sums that should vanish
/// exactly (e.g. cocycle evaluations of relations, facet pairing residuals).
pub const CONSISTENCY_SUM: f64 = 1e-10;

/// Relative tolerance when comparing a fast closed-form implementation
/// against an independent oracle (series expansion, brute-force walk, ...).
pub const ORACLE_REL: f64 = 1e-8;

/// Relative tolerance for finite-difference checks of derivative formulas.
pub const FD_REL: f64 = 1e-6;

/// Step size used by finite-difference checks.
pub const FD_STEP: f64 = 1e-4;

/// Absolute tolerance for incidence tests (point on geodesic, vector in a
/// plane) after normalizing the participants to unit scale.
pub const ON_TOL: f64 = 1e-9;

/// Threshold on the ratio of consecutive singular values when deciding the
/// kernel dimension of a stacked linear system.
pub const KERNEL_SVD: f64 = 1e-8;

/// Absolute tolerance when checking a vector is normalized.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// Absolute tolerance for the parallelogram residual of a degenerate
/// quadrilateral deformation (the four edge vectors must sum to zero).
pub const PARALLELOGRAM: f64 = 1e-10;

/// Slack demanded of the uniform contraction inequality for anti-de Sitter
/// domains: measured improvement minus predicted improvement must exceed
/// minus this tolerance.
pub const EQ81_SLACK: f64 = 1e-10;

/// Absolute tolerance in the planar chart of the arc-complex gallery
/// (barycentric point-in-triangle tests).
pub const CHART_TOL: f64 = 1e-6;

/// Absolute tolerance on the hyperboloid constraint <p,p> = -1 for points
/// produced by normalization.
pub const HPOINT_TOL: f64 = 1e-12;
