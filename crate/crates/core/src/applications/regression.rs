//! Least-squares fits of `w ≈ a·x + b·y + c·e`, three ways.
//!
//! The vector method writes the Cramer quotients of the normal system as
//! iterated 2-inner products; the statistics form uses population
//! covariances; the normal-equation solver is plain Cramer on the 3×3 system
//! and serves as the oracle for the other two.

use std::fmt;

use serde::Serialize;

use super::stats::{covariance, mean, variance};
use crate::error::{Error, Result};
use crate::linalg::{cramer_solve, InnerSpace, SquareMatrix, Vector};
use crate::products::{iterated_2_inner, magnitude, ConditionedPair, ProductKind};
use crate::scalar::{self, Mode, Scalar};

/// Relative size of `var(x)var(y) − cov(x,y)²` below which float predictors
/// count as collinear.
pub const COLLINEARITY_GUARD: f64 = 1e-12;

/// Samples `(x_i, y_i)` of the two predictors and `z_i` of the response.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<S> {
    x: Vec<S>,
    y: Vec<S>,
    z: Vec<S>,
}

impl<S: Scalar> Dataset<S> {
    pub fn new(x: Vec<S>, y: Vec<S>, z: Vec<S>) -> Result<Self> {
        for other in [&y, &z] {
            if other.len() != x.len() {
                return Err(Error::DimensionMismatch { expected: x.len(), found: other.len() });
            }
        }
        if x.len() < 3 {
            return Err(Error::InvalidConfig(format!("a dataset needs at least 3 samples, got {}", x.len())));
        }
        Ok(Dataset { x, y, z })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[S] {
        &self.x
    }

    pub fn y(&self) -> &[S] {
        &self.y
    }

    pub fn z(&self) -> &[S] {
        &self.z
    }

    /// `Σ (z_i − a x_i − b y_i − c)²`.
    pub fn residual_sum_squares(&self, a: &S, b: &S, c: &S) -> S {
        (0..self.len()).fold(S::zero(), |acc, i| {
            let r = self.z[i].clone() - a.clone() * self.x[i].clone() - b.clone() * self.y[i].clone() - c.clone();
            acc + r.clone() * r
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    VectorCramer,
    StatisticsForm,
    NormalEquations,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::VectorCramer => "vector_cramer",
            Method::StatisticsForm => "statistics_form",
            Method::NormalEquations => "normal_equations",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct RegressionFit<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub a: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub b: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub c: S,
    pub method: Method,
    #[serde(serialize_with = "scalar::serialize")]
    pub residual_sum_squares: S,
}

impl<S: Scalar> RegressionFit<S> {
    pub fn coefficients(&self) -> [&S; 3] {
        [&self.a, &self.b, &self.c]
    }
}

fn iterated<S: Scalar>(space: &InnerSpace<S>, x: &Vector<S>, y: &Vector<S>, conds: [&Vector<S>; 2]) -> Result<(S, f64)> {
    let p = ConditionedPair::new(x.clone(), y.clone(), conds.map(Vector::clone).to_vec());
    Ok((iterated_2_inner(space, &p)?, magnitude(ProductKind::Iterated, space, &p)))
}

/// `a = (w,x|y,e)_*/(x,x|y,e)_*`, `b = (w,y|x,e)_*/(x,x|y,e)_*`,
/// `c = ‖e‖²(w,e|x,y)_*/(‖y‖²(x,x|y,e)_*)`.
///
/// The result is checked against the normal system `G(x,y,e)·(a,b,c) =
/// (⟨w,x⟩,⟨w,y⟩,⟨w,e⟩)` and, for unit `e`, against
/// `c = ⟨w,e⟩ − a⟨x,e⟩ − b⟨y,e⟩`.
pub fn fit_vector_method<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    y: &Vector<S>,
    e: &Vector<S>,
    w: &Vector<S>,
) -> Result<RegressionFit<S>> {
    space.check_all([x, y, e, w])?;
    let tol = space.tol();
    let yy = space.inner(y, y);
    if yy.is_zero() {
        return Err(Error::Singular { what: "‖y‖²", witness: yy.to_string() });
    }
    let (den, den_scale) = iterated(space, x, x, [y, e])?;
    if den.is_negligible(tol, den_scale) {
        return Err(Error::Singular { what: "(x,x|y,e)_*", witness: den.to_string() });
    }
    let ee = space.inner(e, e);
    let a = iterated(space, w, x, [y, e])?.0 / den.clone();
    let b = iterated(space, w, y, [x, e])?.0 / den.clone();
    let c = ee.clone() * iterated(space, w, e, [x, y])?.0 / (yy * den);

    let basis = [x, y, e];
    let theta = [a.clone(), b.clone(), c.clone()];
    for (i, bi) in basis.iter().enumerate() {
        let lhs = basis
            .iter()
            .zip(&theta)
            .fold(S::zero(), |acc, (bj, t)| acc + space.inner(bi, bj) * t.clone());
        let rhs = space.inner(w, bi);
        let scale = basis.iter().zip(&theta).map(|(bj, t)| (space.inner(bi, bj) * t.clone()).to_f64().abs()).sum();
        if !lhs.approx_eq(&rhs, tol, scale) {
            return Err(Error::Inconsistent(format!("normal equation {i}: {lhs} ≠ {rhs}")));
        }
    }
    if ee.approx_eq(&S::one(), tol, 1.0) {
        let simple = space.inner(w, e) - a.clone() * space.inner(x, e) - b.clone() * space.inner(y, e);
        let scale = space.inner(w, e).to_f64().abs() + (a.clone() * space.inner(x, e)).to_f64().abs()
            + (b.clone() * space.inner(y, e)).to_f64().abs();
        if !simple.approx_eq(&c, tol, scale) {
            return Err(Error::Inconsistent(format!("intercept {c} ≠ ⟨w,e⟩ − a⟨x,e⟩ − b⟨y,e⟩ = {simple}")));
        }
    }
    let r = &(&(w - &x.scaled(&a)) - &y.scaled(&b)) - &e.scaled(&c);
    let rss = space.inner(&r, &r);
    Ok(RegressionFit { a, b, c, method: Method::VectorCramer, residual_sum_squares: rss })
}

fn dataset_vector_fit<S: Scalar>(ds: &Dataset<S>, tol: f64) -> Result<RegressionFit<S>> {
    let n = ds.len();
    let space = InnerSpace::euclidean(n).with_tol(tol);
    let u = Vector::new(vec![S::one(); n]);
    let fit = fit_vector_method(&space, &Vector::new(ds.x.clone()), &Vector::new(ds.y.clone()), &u, &Vector::new(ds.z.clone()))
        .map_err(|err| match err {
            Error::Singular { witness, .. } => Error::Collinear { what: "(x,x|y,u)_*", witness },
            other => other,
        })?;
    let rss = ds.residual_sum_squares(&fit.a, &fit.b, &fit.c);
    Ok(RegressionFit { residual_sum_squares: rss, ..fit })
}

/// Solves the three normal equations
/// `aΣx² + bΣxy + cΣx = Σxz`, `aΣxy + bΣy² + cΣy = Σyz`, `aΣx + bΣy + nc = Σz`
/// by Cramer's rule.
pub fn fit_normal_equations<S: Scalar>(ds: &Dataset<S>, tol: f64) -> Result<RegressionFit<S>> {
    let sum = |f: &dyn Fn(usize) -> S| (0..ds.len()).fold(S::zero(), |acc, i| acc + f(i));
    let (x, y, z) = (&ds.x, &ds.y, &ds.z);
    let sx = sum(&|i| x[i].clone());
    let sy = sum(&|i| y[i].clone());
    let sxy = sum(&|i| x[i].clone() * y[i].clone());
    let m = SquareMatrix::from_rows(vec![
        vec![sum(&|i| x[i].clone() * x[i].clone()), sxy.clone(), sx.clone()],
        vec![sxy, sum(&|i| y[i].clone() * y[i].clone()), sy.clone()],
        vec![sx, sy, S::from_i64(ds.len() as i64)],
    ])?;
    let rhs = [
        sum(&|i| x[i].clone() * z[i].clone()),
        sum(&|i| y[i].clone() * z[i].clone()),
        sum(&|i| z[i].clone()),
    ];
    let theta = cramer_solve(&m, &rhs, tol).map_err(|err| match err {
        Error::Singular { witness, .. } => Error::Collinear { what: "normal-equation determinant", witness },
        other => other,
    })?;
    let [a, b, c]: [S; 3] = theta.try_into().expect("three unknowns");
    let rss = ds.residual_sum_squares(&a, &b, &c);
    Ok(RegressionFit { a, b, c, method: Method::NormalEquations, residual_sum_squares: rss })
}

fn statistics_form_unchecked<S: Scalar>(ds: &Dataset<S>, tol: f64) -> Result<RegressionFit<S>> {
    let (x, y, z) = (&ds.x, &ds.y, &ds.z);
    let vx = variance(x, tol)?;
    let vy = variance(y, tol)?;
    let cxy = covariance(x, y, tol)?;
    let cxz = covariance(x, z, tol)?;
    let cyz = covariance(y, z, tol)?;
    let d = vx.clone() * vy.clone() - cxy.clone() * cxy.clone();
    let degenerate = match S::MODE {
        Mode::Exact => d.is_zero(),
        Mode::Float => d.to_f64().abs() <= COLLINEARITY_GUARD * (vx.to_f64() * vy.to_f64()).abs(),
    };
    if degenerate {
        return Err(Error::Collinear { what: "var(x)var(y) − cov(x,y)²", witness: d.to_string() });
    }
    let a = (vy * cxz.clone() - cxy.clone() * cyz.clone()) / d.clone();
    let b = (vx * cyz - cxy * cxz) / d;
    let c = mean(z, tol)? - a.clone() * mean(x, tol)? - b.clone() * mean(y, tol)?;
    let rss = ds.residual_sum_squares(&a, &b, &c);
    Ok(RegressionFit { a, b, c, method: Method::StatisticsForm, residual_sum_squares: rss })
}

/// `a = [var(y)cov(x,z) − cov(x,y)cov(y,z)] / [var(x)var(y) − cov(x,y)²]`,
/// `b` symmetrically, `c = μ_z − aμ_x − bμ_y`. Fails with
/// [`Error::Inconsistent`] if the vector method or the normal equations
/// disagree.
pub fn fit_statistics_form<S: Scalar>(ds: &Dataset<S>, tol: f64) -> Result<RegressionFit<S>> {
    let cmp = compare_fits(ds, tol)?;
    if !cmp.agree {
        return Err(Error::Inconsistent(format!(
            "regression methods disagree by {}",
            cmp.max_discrepancy
        )));
    }
    Ok(cmp.fits.into_iter().find(|f| f.method == Method::StatisticsForm).expect("fit present"))
}

/// All three fits on one dataset and their largest coefficient difference.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct FitComparison<S> {
    /// Vector method, statistics form, normal equations.
    pub fits: Vec<RegressionFit<S>>,
    #[serde(serialize_with = "scalar::serialize")]
    pub max_discrepancy: S,
    /// Exact mode: literal equality. Float mode: relative to the largest coefficient.
    pub agree: bool,
}

pub fn compare_fits<S: Scalar>(ds: &Dataset<S>, tol: f64) -> Result<FitComparison<S>> {
    let fits = vec![dataset_vector_fit(ds, tol)?, statistics_form_unchecked(ds, tol)?, fit_normal_equations(ds, tol)?];
    let scale = fits
        .iter()
        .flat_map(|f| f.coefficients().map(|c| c.to_f64().abs()))
        .fold(0.0, f64::max);
    let mut max_discrepancy = S::zero();
    let mut agree = true;
    for (i, f) in fits.iter().enumerate() {
        for g in &fits[i + 1..] {
            for (p, q) in f.coefficients().into_iter().zip(g.coefficients()) {
                let d = (p.clone() - q.clone()).abs();
                if d > max_discrepancy {
                    max_discrepancy = d;
                }
                agree &= p.approx_eq(q, tol, scale);
            }
        }
    }
    Ok(FitComparison { fits, max_discrepancy, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;
    use crate::scalar::Exact;

    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }
    fn col(v: &[i64]) -> Vec<Exact> {
        v.iter().map(|&e| q(e)).collect()
    }

    fn synthetic() -> Dataset<Exact> {
        let x = col(&[1, 2, 0, 4, -1, 3]);
        let y = col(&[0, 1, 5, -2, 2, 2]);
        let z = x.iter().zip(&y).map(|(a, b)| q(2) * a + q(3) * b + q(5)).collect();
        Dataset::new(x, y, z).unwrap()
    }

    #[test]
    fn exact_plane_is_recovered_by_all_methods() {
        let cmp = compare_fits(&synthetic(), 0.0).unwrap();
        assert!(cmp.agree);
        for f in &cmp.fits {
            assert_eq!((f.a.clone(), f.b.clone(), f.c.clone()), (q(2), q(3), q(5)), "{}", f.method);
            assert_eq!(f.residual_sum_squares, q(0));
        }
    }

    #[test]
    fn vector_method_exact_combination() {
        let s = InnerSpace::euclidean(4);
        let x = Vector::from_i64s(&[1, 2, 0, 1]);
        let y = Vector::from_i64s(&[0, 1, 1, 3]);
        let e = Vector::from_i64s(&[2, 0, 1, 1]);
        let w = &(&x.scaled(&q(2)) + &y.scaled(&q(3))) - &e;
        let f = fit_vector_method(&s, &x, &y, &e, &w).unwrap();
        assert_eq!((f.a, f.b, f.c, f.residual_sum_squares), (q(2), q(3), q(-1), q(0)));

        let x = Vector::from_i64s(&[1, 0, 0, 0]);
        let f = fit_vector_method(&s, &x, &Vector::from_i64s(&[0, 1, 0, 0]), &Vector::from_i64s(&[0, 0, 1, 1]), &x).unwrap();
        assert_eq!((f.a, f.b, f.c), (q(1), q(0), q(0)));
    }

    #[test]
    fn vector_method_with_unit_intercept_vector() {
        let s = InnerSpace::<Exact>::euclidean(3);
        let e = Vector::from_i64s(&[0, 0, 1]);
        let f = fit_vector_method(&s, &Vector::from_i64s(&[1, 1, 0]), &Vector::from_i64s(&[0, 1, 1]), &e, &Vector::from_i64s(&[3, -1, 2]))
            .unwrap();
        assert_eq!(f.residual_sum_squares, q(0));
    }

    #[test]
    fn dependent_vectors_are_singular() {
        let s = InnerSpace::euclidean(3);
        let x = Vector::from_i64s(&[1, 2, 3]);
        let err = fit_vector_method(&s, &x, &x.scaled(&q(2)), &Vector::from_i64s(&[0, 0, 1]), &x).unwrap_err();
        assert_eq!(err, Error::Singular { what: "(x,x|y,e)_*", witness: "0".into() });
        let err = fit_vector_method(&s, &x, &Vector::zeros(3), &Vector::from_i64s(&[0, 0, 1]), &x).unwrap_err();
        assert!(matches!(err, Error::Singular { what: "‖y‖²", .. }));
    }

    #[test]
    fn collinear_dataset() {
        let x = col(&[1, 2, 3, 4]);
        let ds = Dataset::new(x.clone(), x.clone(), col(&[1, 0, 1, 0])).unwrap();
        assert!(matches!(fit_statistics_form(&ds, 0.0), Err(Error::Collinear { .. })));
        assert!(matches!(fit_normal_equations(&ds, 0.0), Err(Error::Collinear { .. })));
        let f: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0];
        let ds = Dataset::new(f.clone(), f.iter().map(|v| 3.0 * v + 1.0).collect(), f.clone()).unwrap();
        assert!(matches!(fit_statistics_form(&ds, 1e-9), Err(Error::Collinear { .. })));
    }

    #[test]
    fn uncorrelated_predictors_reduce_to_simple_slopes() {
        let x = col(&[1, -1, 1, -1]);
        let y = col(&[1, 1, -1, -1]);
        let z = col(&[3, 0, 7, 2]);
        let ds = Dataset::new(x.clone(), y.clone(), z.clone()).unwrap();
        let f = fit_statistics_form(&ds, 0.0).unwrap();
        assert_eq!(f.a, covariance(&x, &z, 0.0).unwrap() / variance(&x, 0.0).unwrap());
        assert_eq!(f.b, covariance(&y, &z, 0.0).unwrap() / variance(&y, 0.0).unwrap());
    }

    #[test]
    fn random_exact_datasets_agree_literally() {
        for t in 0..10 {
            let mut r = TrialRng::new(17, t);
            let cols: Vec<Vec<Exact>> = (0..3).map(|_| r.vector::<Exact>(8).into_coords()).collect();
            let ds = Dataset::new(cols[0].clone(), cols[1].clone(), cols[2].clone()).unwrap();
            let cmp = compare_fits(&ds, 0.0).unwrap();
            assert_eq!(cmp.max_discrepancy, q(0));
        }
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::new(col(&[1, 2]), col(&[1, 2]), col(&[1, 2])).is_err());
        assert!(matches!(
            Dataset::new(col(&[1, 2, 3]), col(&[1, 2]), col(&[1, 2, 3])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }
}
