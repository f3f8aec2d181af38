//! Tools for the minimum number of distinct eigenvalues of a graph.
//!
//! For a simple graph `G` on vertices `0..n`, let `S(G)` be the set of real
//! symmetric `n x n` matrices whose off-diagonal entry `(i, j)` is nonzero
//! exactly when `{i, j}` is an edge of `G`; diagonal entries are free. The
//! quantity of interest is
//!
//! ```text
//! q(G) = min { #distinct eigenvalues of A : A in S(G) }
//! ```
//!
//! The crate computes combinatorial lower bounds on `q(G)`, builds explicit
//! matrices that witness upper bounds, and searches for witnesses when no
//! closed form is known. Every witness is re-checked numerically by an
//! internal eigensolver before it is reported; a checked witness is a
//! [`spectra::VerifiedCertificate`].
//!
//! Module map:
//! * [`graph`]: graph type, graph6 and edge-list codecs, families, products;
//! * [`spectra`]: symmetric matrices, Jacobi eigensolver, eigenvalue
//!   clustering, pattern membership, certificates and their verification;
//! * [`bounds`]: lower-bound rules and the clique-cover upper bound;
//! * [`constructions`]: closed-form certificates for structured families;
//! * [`search`]: alternating-projection search for certificates;
//! * [`survey`]: batch processing of graph6 streams.

pub mod bounds;
pub mod constructions;
mod error;
pub mod graph;
pub mod search;
pub mod spectra;
pub mod survey;

pub use bounds::{BoundReport, CliqueCover, LowerBound, Obstruction, UpperBound};
pub use constructions::JoinSelfReport;
pub use error::{Error, Result};
pub use graph::{Family, Graph};
pub use search::{EstimateOptions, QEstimate, SearchOutcome, SearchProblem, SearchStats, SearchTarget};
pub use spectra::{
    Certificate, Clustering, EigenDecomposition, PatternCheck, Provenance, SymMatrix,
    VerifiedCertificate, VerifyOutcome,
};
pub use survey::{SurveyOptions, SurveyRow, SurveySummary};
