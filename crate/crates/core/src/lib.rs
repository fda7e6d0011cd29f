//! Exact computation of the 3d-index of an ideally triangulated cusped
//! 3-manifold.
//!
//! The index of a quantum-torus element is a lattice sum of products of
//! tetrahedron indices, one factor per tetrahedron, weighted by powers of
//! q^{1/2} read off the Neumann-Zagier data of the triangulation.  All
//! series arithmetic is exact: coefficients are arbitrary-precision
//! integers and every value carries its own truncation order.
//!
//! Module map:
//! - [`qseries`]: truncated Laurent series in q^{1/2} over a generic
//!   integer scalar.
//! - [`tetindex`]: the tetrahedron index I_Δ(m,e), its symmetric form
//!   J_Δ(a,b,c), the degree formula, and a floating-point evaluator.
//! - [`qtorus`]: Weyl-ordered monomials of the even quantum torus, the
//!   symplectic form ω, the double-arc form δ, the chirality involution,
//!   and peripheral (Chebyshev) elements.
//! - [`expr`]: the monomial-expression mini-language used by the CLI.
//! - [`triangulation`]: ingestion and validation of Neumann-Zagier gluing
//!   data, edge combinations, surface normalization, summand degrees.
//! - [`indexer`]: the index map on monomials and elements, the DGG
//!   peripheral index, and the quotient-relation checkers.
//! - [`pachner`]: 3-2 and 2-0 move maps on exponent lattices with
//!   symplectic and edge-lattice validation.
//!
//! All values are immutable after construction and all operations are
//! pure; the tetrahedron-index memo tables sit behind mutexes, so
//! everything here is safe to share and send across threads.

pub mod expr;
pub mod indexer;
pub mod pachner;
pub mod qseries;
pub mod qtorus;
pub mod tetindex;
pub mod triangulation;

pub(crate) mod zlattice;

/// Exponent counted in half-units: the integer `h` stands for q^{h/2}.
pub type HalfExp = i64;

/// The concrete coefficient ring used by the whole pipeline.
pub type Coeff = num_bigint::BigInt;

/// Laurent series in q^{1/2} with arbitrary-precision integer coefficients.
pub type QSeries = qseries::Series<Coeff>;

pub use qtorus::{ExponentVector, TorusElement};
pub use triangulation::Triangulation;
