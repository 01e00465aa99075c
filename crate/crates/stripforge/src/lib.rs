//! Strip deformations of convex cocompact hyperbolic surfaces, and the
//! construction of crooked-plane fundamental domains for the associated
//! flat and anti-de Sitter 3-manifolds.
//!
//! The crate is organized in layers:
//!
//! * [`lorentz`] — the Minkowski vector space R^{2,1}, the hyperboloid model
//!   of the hyperbolic plane, oriented geodesics, and the isometry group
//!   (2x2 real matrices of determinant ±1 acting by the adjoint
//!   representation).
//! * [`words`] — reduced words in a free group and conjugacy-class
//!   enumeration.
//! * [`schottky`] — Schottky-style holonomy representations given by ping-pong
//!   pairs of disjoint geodesics, infinitesimal deformations (cocycles), and
//!   margin scans for the properness criteria.
//! * [`cells`] — cell structures on a surface (systems of disjoint geodesic
//!   arcs), the developing walk that lists arc crossings of a path, and the
//!   strip-deformation calculus built on top of it.
//! * [`surfaces`] — concrete convex cocompact surfaces (doubled hyperideal
//!   polygons) together with Schottky witnesses and triangulations.
//! * [`flip`] — the linear relation satisfied by strip deformations under an
//!   elementary move on a triangulation, and the degenerate quadrilateral
//!   configuration where the relation specializes to explicit coefficients.
//! * [`crooked`] — crooked planes in Minkowski space, exact disjointness,
//!   and fundamental domains for affine deformations.
//! * [`ads`] — the anti-de Sitter analogues of crooked planes and domains.
//! * [`gallery`] — the arc complex of the three-holed sphere with its
//!   strip-deformation chart.

pub mod ads;
pub mod cells;
pub mod crooked;
pub mod error;
pub mod flip;
pub mod gallery;
pub mod lorentz;
pub mod schottky;
pub mod surfaces;
pub mod tol;
pub mod words;

pub use error::{Error, Result};
