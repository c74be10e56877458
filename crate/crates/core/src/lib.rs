//! Exact Frobenius and monodromy structures on the first de Rham cohomology of
//! semistable curves and abelian varieties.
//!
//! Everything is computed over the rationals. A curve is described by the dual
//! graph of its special fiber plus integer Frobenius matrices for the
//! good-reduction components; an abelian variety by its torus rank, the
//! valuation (monodromy) pairing on the period lattice and the Frobenius of
//! its good-reduction quotient. Both descriptions produce a [`PhiNModule`],
//! and for a Jacobian the two must coincide exactly.
//!
//! Layout:
//! - [`linalg`]: rationals, matrices, characteristic polynomials, p-adic
//!   valuations and Newton polygons.
//! - [`graph`]: dual graphs, fundamental cycles, the edge pairing.
//! - [`weil`]: Weil-q Frobenius matrices and naive elliptic point counting.
//! - [`laurent`]: formal Laurent 1-forms on an annulus, residues, primitives
//!   with a log term, hypercocycle checks.
//! - [`module`]: the graded (Phi, N)-module and its verifications.
//! - [`builders`]: the curve-side and abelian-variety-side constructions.

pub mod builders;
pub mod graph;
pub mod laurent;
pub mod linalg;
pub mod module;
pub mod weil;

pub use builders::{
    build_from_av, build_from_curve, check_curve_jacobian_agreement, jacobian_data,
    BuildError, ComponentSource, CurveInstance, UniformizationData,
};
pub use graph::{CycleBasis, DualGraph, GraphError};
pub use laurent::{LaurentForm, LaurentPoly, LogFunction};
pub use linalg::{NewtonPolygon, QMatrix, Rational, Valuation};
pub use module::{PhiNModule, RelationReport};
pub use weil::{EllipticCurveSpec, WeilMatrix};
