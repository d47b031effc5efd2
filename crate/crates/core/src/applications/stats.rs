//! Population statistics (weights `1/n`), each computed by the usual sums and
//! again as 2-inner products against the all-ones vector `u`:
//! `mean = ⟨x,u⟩/‖u‖²`, `cov(x,y) = ⟨x,y|u⟩/‖u‖⁴`.

use crate::error::{Error, Result};
use crate::linalg::{InnerSpace, Vector};
use crate::products::{standard_n_inner, ConditionedPair, NormValue};
use crate::scalar::Scalar;

fn count<S: Scalar>(data: &[S]) -> Result<S> {
    if data.is_empty() {
        return Err(Error::Empty("data"));
    }
    Ok(S::from_i64(data.len() as i64))
}

fn agree<S: Scalar>(what: &str, direct: S, via_product: S, scale: f64, tol: f64) -> Result<S> {
    if direct.approx_eq(&via_product, tol, scale) {
        Ok(direct)
    } else {
        Err(Error::Inconsistent(format!("{what}: sums give {direct}, 2-inner products give {via_product}")))
    }
}

fn ones<S: Scalar>(n: usize) -> Vector<S> {
    Vector::new(vec![S::one(); n])
}

pub fn mean<S: Scalar>(data: &[S], tol: f64) -> Result<S> {
    let n = count(data)?;
    let direct = data.iter().fold(S::zero(), |a, b| a + b.clone()) / n;
    let space = InnerSpace::euclidean(data.len());
    let u = ones(data.len());
    let x = Vector::new(data.to_vec());
    let via = space.inner(&x, &u) / space.inner(&u, &u);
    let scale = data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    agree("mean", direct, via, scale, tol)
}

pub fn covariance<S: Scalar>(x: &[S], y: &[S], tol: f64) -> Result<S> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let n = count(x)?;
    let mx = mean(x, tol)?;
    let my = mean(y, tol)?;
    let sxy = x.iter().zip(y).fold(S::zero(), |a, (p, q)| a + p.clone() * q.clone());
    let direct = sxy / n - mx * my;

    let space = InnerSpace::euclidean(x.len());
    let u = ones(x.len());
    let p = ConditionedPair::new(Vector::new(x.to_vec()), Vector::new(y.to_vec()), vec![u.clone()]);
    let uu = space.inner(&u, &u);
    let via = standard_n_inner(&space, &p)? / (uu.clone() * uu);
    let rms = |v: &[S]| (v.iter().map(|e| e.to_f64().powi(2)).sum::<f64>() / v.len() as f64).sqrt();
    agree("covariance", direct, via, rms(x) * rms(y), tol)
}

pub fn variance<S: Scalar>(data: &[S], tol: f64) -> Result<S> {
    covariance(data, data, tol)
}

/// Exact root when the variance is a rational square; float approximation
/// always.
pub fn stddev<S: Scalar>(data: &[S], tol: f64) -> Result<NormValue<S>> {
    let var = variance(data, tol)?;
    let scale = data.iter().map(|e| e.to_f64().powi(2)).fold(0.0, f64::max);
    NormValue::from_squared(var, tol, scale)
}
