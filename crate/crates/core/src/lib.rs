//! Non-commutative polynomial calculus and curvature signatures of nc varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] dense symmetric linear algebra (eigenvalues, inertia, ranks, kernels);
//! * [`freealg`] words and polynomials in symmetric non-commuting letters, with a parser;
//! * [`calculus`] directional derivatives, Hessians and mixed Hessians;
//! * [`mateval`] evaluation at tuples of symmetric matrices, border vectors, the
//!   orthonormal basis of symmetric tuples;
//! * [`middlematrix`] middle matrices, scalar middle matrices, relaxed middle matrices,
//!   degree bounds, convexity and sum/difference-of-squares certificates;
//! * [`curvature`] clamped tangent planes, the clamped second fundamental form and its
//!   signature, relaxed Hessian signatures, subspace decompositions and direct sums;
//! * [`variety`] word independence, annihilating polynomials, codimension formulas and the
//!   signature of a variety;
//! * [`cli`] the JSON-emitting command front end used by the `nccurv` binary.

pub mod calculus;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod freealg;
pub mod mateval;
pub mod middlematrix;
pub mod numerics;
pub mod random;
pub mod variety;

pub use error::{NcError, Result};
pub use freealg::{Letter, LetterClass, NcPoly, ParseOptions, Word};
pub use mateval::MatrixPoint;
pub use numerics::{Inertia, SymMatrix, DEFAULT_TOL};

/// Version string embedded in every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tag describing the word and border-vector ordering used in serialized layouts.
pub const ORDERING_TAG: &str = "graded-lex(x<h<k); border=(length, h-index, word)";
