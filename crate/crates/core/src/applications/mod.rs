//! Applications of the iterated product: the Lupu inequality, Gram
//! determinant relations, regression by the vector method, population
//! statistics, and Chebyshev functionals.

mod chebyshev;
mod gram;
mod regression;
mod stats;

pub use chebyshev::{chebyshev, n_chebyshev, n_chebyshev_gap};
pub use gram::{
    conditioned_gram_matrix, gram_form_four, gram_form_three, gram_swap_residual, gram_wrt_residual, lupu_gap,
};
pub use regression::{
    compare_fits, fit_normal_equations, fit_statistics_form, fit_vector_method, Dataset, FitComparison, Method,
    RegressionFit,
};
pub use stats::{covariance, mean, stddev, variance};

use serde::Serialize;

use crate::linalg::{InnerSpace, Vector};
use crate::scalar::{self, Scalar};

/// Both sides of an identity, with the magnitude its float-mode residual is
/// measured against.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct IdentityCheck<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub lhs: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub rhs: S,
    #[serde(skip)]
    pub scale: f64,
}

impl<S: Scalar> IdentityCheck<S> {
    pub fn new(lhs: S, rhs: S, scale: f64) -> Self {
        IdentityCheck { lhs, rhs, scale }
    }

    pub fn residual(&self) -> S {
        self.lhs.clone() - self.rhs.clone()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lhs.approx_eq(&self.rhs, tol, self.scale)
    }
}

/// `‖v‖²` as a float, for magnitude estimates.
pub(crate) fn sq<S: Scalar>(space: &InnerSpace<S>, v: &Vector<S>) -> f64 {
    space.inner(v, v).to_f64().abs()
}
