//! n-inner products and the n-iterated 2-inner product over exact rationals
//! or `f64`, with Dodgson determinant identities and applications to
//! regression and Chebyshev functionals.

pub mod applications;
pub mod axioms;
pub mod dodgson;
pub mod error;
pub mod io;
pub mod linalg;
pub mod products;
pub mod rng;
pub mod scalar;
pub mod suite;

pub use error::{Error, ParseError, ParseScalarError, Result};
pub use linalg::{InnerSpace, SquareMatrix, Vector, DEFAULT_TOL};
pub use products::{ConditionedPair, ProductKind};
pub use scalar::{Exact, Mode, Scalar};
