//! Python bindings: the `ninner` extension module.
//!
//! Every entry point takes a `mode`. Exact mode accepts `int`, `Fraction`,
//! `float` (converted exactly) or `str` literals such as `"3/4"` and returns
//! `Fraction`s; float mode accepts anything `float()` does and returns floats.

use ninner_core::applications::{
    chebyshev, compare_fits, covariance, fit_vector_method, lupu_gap, mean, n_chebyshev, n_chebyshev_gap, variance,
    Dataset, FitComparison, RegressionFit,
};
use ninner_core::axioms::{axiom_check as run_axiom_check, symmetry_counterexample as pinned_triple, Axiom};
use ninner_core::dodgson::{condensation_residual, condense as run_condense, leading_block_residual};
use ninner_core::products::{
    e_factor, evaluate, iterated_2_inner_expanded, representation_report, schwarz_gap, standard_n_norm, weak_n_norm,
    ConditionedPair, NormValue,
};
use ninner_core::suite::{run_suite, SuiteConfig, SuiteKind};
use ninner_core::{Error, Exact, InnerSpace, Mode, ProductKind, Scalar, SquareMatrix, Vector, DEFAULT_TOL};
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyList, PyString};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

create_exception!(ninner, NinnerError, PyValueError, "Raised when an operation has no defined result.");
create_exception!(ninner, DimensionError, NinnerError, "Vectors or matrix rows of mismatched length.");
create_exception!(ninner, SingularError, NinnerError, "A required determinant or norm vanishes.");

fn to_pyerr(e: Error) -> PyErr {
    match e {
        Error::DimensionMismatch { .. } | Error::LineLength { .. } => DimensionError::new_err(e.to_string()),
        Error::Singular { .. } | Error::Collinear { .. } => SingularError::new_err(e.to_string()),
        _ => NinnerError::new_err(e.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    mode.parse().map_err(PyValueError::new_err)
}

fn parse_product(kind: &str) -> PyResult<ProductKind> {
    kind.parse::<ProductKind>().map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Scalars that cross the Python boundary.
trait PyScalar: Scalar {
    fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Self>;
    fn to_py(&self, py: Python<'_>) -> PyResult<Py<PyAny>>;
}

fn literal<S: Scalar>(obj: &Bound<'_, PyAny>) -> PyResult<Option<S>> {
    if !obj.is_instance_of::<PyString>() {
        return Ok(None);
    }
    let text: String = obj.extract()?;
    S::parse_literal(&text).map(Some).map_err(|e| PyValueError::new_err(e.to_string()))
}

impl PyScalar for Exact {
    fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Some(v) = literal(obj)? {
            return Ok(v);
        }
        if obj.is_instance_of::<PyFloat>() {
            let frac = obj.py().import("fractions")?.getattr("Fraction")?.call1((obj,))?;
            return Ok(frac.extract::<Exact>()?);
        }
        obj.extract::<Exact>()
            .map_err(|_| PyTypeError::new_err(format!("expected int, Fraction, float or str, got {}", obj.get_type())))
    }

    fn to_py(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        self.clone().into_py_any(py)
    }
}

impl PyScalar for f64 {
    fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Some(v) = literal(obj)? {
            return Ok(v);
        }
        Ok(obj.extract::<f64>()?)
    }

    fn to_py(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        self.into_py_any(py)
    }
}

fn scalars<S: PyScalar>(obj: &Bound<'_, PyAny>) -> PyResult<Vec<S>> {
    obj.try_iter()?.map(|item| S::from_py(&item?)).collect()
}

fn vector<S: PyScalar>(obj: &Bound<'_, PyAny>) -> PyResult<Vector<S>> {
    Ok(Vector::new(scalars(obj)?))
}

fn vectors<S: PyScalar>(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Vector<S>>> {
    obj.try_iter()?.map(|item| vector(&item?)).collect()
}

fn matrix<S: PyScalar>(obj: &Bound<'_, PyAny>) -> PyResult<SquareMatrix<S>> {
    let rows = obj.try_iter()?.map(|item| scalars(&item?)).collect::<PyResult<Vec<_>>>()?;
    SquareMatrix::from_rows(rows).map_err(to_pyerr)
}

fn list<S: PyScalar>(py: Python<'_>, vs: &[S]) -> PyResult<Py<PyAny>> {
    let items = vs.iter().map(|v| v.to_py(py)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)?.into_py_any(py)
}

fn rows<S: PyScalar>(py: Python<'_>, rs: &[Vec<S>]) -> PyResult<Py<PyAny>> {
    let items = rs.iter().map(|r| list(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)?.into_py_any(py)
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_py_any(py),
            (None, Some(u)) => u.into_py_any(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_py_any(py),
        },
        Value::String(s) => s.into_py_any(py),
        Value::Array(items) => {
            let items = items.iter().map(|i| json_to_py(py, i)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_py_any(py)
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, val) in map {
                d.set_item(k, json_to_py(py, val)?)?;
            }
            d.into_py_any(py)
        }
    }
}

fn norm_dict<S: PyScalar>(py: Python<'_>, n: &NormValue<S>) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("squared", n.squared.to_py(py)?)?;
    d.set_item("root", n.root.as_ref().map(|r| r.to_py(py)).transpose()?)?;
    d.set_item("approx", n.approx)?;
    d.into_py_any(py)
}

fn fit_dict<S: PyScalar>(py: Python<'_>, f: &RegressionFit<S>) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    d.set_item("method", f.method.to_string())?;
    d.set_item("a", f.a.to_py(py)?)?;
    d.set_item("b", f.b.to_py(py)?)?;
    d.set_item("c", f.c.to_py(py)?)?;
    d.set_item("residual_sum_squares", f.residual_sum_squares.to_py(py)?)?;
    d.into_py_any(py)
}

fn comparison_dict<S: PyScalar>(py: Python<'_>, cmp: &FitComparison<S>) -> PyResult<Py<PyAny>> {
    let d = PyDict::new(py);
    let fits = cmp.fits.iter().map(|f| fit_dict(py, f)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("fits", fits)?;
    d.set_item("max_discrepancy", cmp.max_discrepancy.to_py(py)?)?;
    d.set_item("agree", cmp.agree)?;
    d.into_py_any(py)
}

macro_rules! by_mode {
    ($mode:expr, $S:ident => $body:expr) => {
        match $mode {
            Mode::Exact => {
                type $S = Exact;
                $body
            }
            Mode::Float => {
                type $S = f64;
                $body
            }
        }
    };
}

enum Inner {
    Exact(InnerSpace<Exact>),
    Float(InnerSpace<f64>),
}

macro_rules! with_space {
    ($self:expr, $s:ident, $S:ident => $body:expr) => {
        match &$self.inner {
            Inner::Exact($s) => {
                type $S = Exact;
                $body
            }
            Inner::Float($s) => {
                type $S = f64;
                $body
            }
        }
    };
}

/// A real inner product space: Euclidean, or weighted by a symmetric
/// positive definite matrix.
#[pyclass(name = "Space", module = "ninner", frozen)]
pub struct Space {
    inner: Inner,
}

fn pair<S: PyScalar>(x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conds: &Bound<'_, PyAny>) -> PyResult<ConditionedPair<S>> {
    Ok(ConditionedPair::new(vector(x)?, vector(y)?, vectors(conds)?))
}

fn build<S: PyScalar>(dim: Option<usize>, weight: Option<&Bound<'_, PyAny>>, tol: f64) -> PyResult<InnerSpace<S>> {
    let space = match (dim, weight) {
        (_, Some(w)) => {
            let w = matrix::<S>(w)?;
            if dim.is_some_and(|d| d != w.order()) {
                return Err(DimensionError::new_err(format!("dim {} does not match weight order {}", dim.unwrap_or(0), w.order())));
            }
            InnerSpace::weighted(w).map_err(to_pyerr)?
        }
        (Some(d), None) => InnerSpace::euclidean(d),
        (None, None) => return Err(PyTypeError::new_err("Space needs dim or weight")),
    };
    Ok(space.with_tol(tol))
}

#[pymethods]
impl Space {
    #[new]
    #[pyo3(signature = (dim = None, weight = None, mode = "exact", tol = DEFAULT_TOL))]
    fn new(dim: Option<usize>, weight: Option<&Bound<'_, PyAny>>, mode: &str, tol: f64) -> PyResult<Self> {
        let inner = match parse_mode(mode)? {
            Mode::Exact => Inner::Exact(build(dim, weight, tol)?),
            Mode::Float => Inner::Float(build(dim, weight, tol)?),
        };
        Ok(Space { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        with_space!(self, s, _S => s.dim())
    }

    #[getter]
    fn mode(&self) -> String {
        match self.inner {
            Inner::Exact(_) => Mode::Exact,
            Inner::Float(_) => Mode::Float,
        }
        .to_string()
    }

    #[getter]
    fn tol(&self) -> f64 {
        with_space!(self, s, _S => s.tol())
    }

    fn __repr__(&self) -> String {
        let weighted = with_space!(self, s, _S => s.weight().is_some());
        format!("Space(dim={}, mode={:?}, weighted={})", self.dim(), self.mode(), if weighted { "True" } else { "False" })
    }

    /// ⟨x, y⟩.
    fn inner(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => s.inner_product(&vector::<S>(x)?, &vector::<S>(y)?).map_err(to_pyerr)?.to_py(py))
    }

    /// The Gram matrix [⟨v_i, v_j⟩].
    fn gram_matrix(&self, py: Python<'_>, vs: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => rows(py, &s.gram_matrix(&vectors::<S>(vs)?).map_err(to_pyerr)?.rows()))
    }

    /// Γ(v_1, …, v_k).
    fn gram_determinant(&self, py: Python<'_>, vs: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => s.gram_determinant(&vectors::<S>(vs)?).map_err(to_pyerr)?.to_py(py))
    }

    /// ⟨x, y | x_n, …, x_2⟩ with conditioners listed from x_n down to x_2.
    fn standard(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => evaluate(ProductKind::Standard, s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?.to_py(py))
    }

    /// (x, y | x_n, …, x_2)_*; x_n is peeled first.
    fn iterated(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => evaluate(ProductKind::Iterated, s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?.to_py(py))
    }

    /// The iterated product and the 2×2 matrix whose determinant it is.
    fn iterated_expanded(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        with_space!(self, s, S => {
            let e = iterated_2_inner_expanded(s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?;
            let top: Vec<Vec<S>> = e.top.iter().map(|r| r.to_vec()).collect();
            Ok((e.value.to_py(py)?, rows(py, &top)?))
        })
    }

    /// E_n for conditioners x_n, …, x_2.
    fn e_factor(&self, py: Python<'_>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => e_factor(s, &vectors::<S>(conditioners)?).map_err(to_pyerr)?.to_py(py))
    }

    /// The iterated product, E_n, the standard product and
    /// iterated − E_n·standard.
    fn representation(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => {
            let r = representation_report(s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?;
            let d = PyDict::new(py);
            d.set_item("n", r.n)?;
            d.set_item("value", r.value.to_py(py)?)?;
            d.set_item("e_factor", r.e_factor.to_py(py)?)?;
            d.set_item("standard_value", r.standard_value.to_py(py)?)?;
            d.set_item("residual", r.residual.to_py(py)?)?;
            d.into_py_any(py)
        })
    }

    /// The Cauchy–Schwarz gap of the iterated product, with an equality
    /// witness y = μx + Σ c_i x_i when one exists.
    fn schwarz(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => {
            let r = schwarz_gap(s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?;
            let d = PyDict::new(py);
            d.set_item("gap", r.gap.to_py(py)?)?;
            d.set_item("xx", r.xx.to_py(py)?)?;
            d.set_item("yy", r.yy.to_py(py)?)?;
            d.set_item("xy", r.xy.to_py(py)?)?;
            let eq = match &r.equality {
                Some(w) => {
                    let e = PyDict::new(py);
                    e.set_item("mu", w.mu.to_py(py)?)?;
                    e.set_item("span_coefficients", list(py, &w.span_coefficients)?)?;
                    e.set_item("mu_nonnegative", w.mu_nonnegative())?;
                    Some(e)
                }
                None => None,
            };
            d.set_item("equality", eq)?;
            d.into_py_any(py)
        })
    }

    /// The n-norm of v: `kind="standard"` or the weak norm of `"iterated"`.
    #[pyo3(signature = (v, conditioners, kind = "standard"))]
    fn norm(&self, py: Python<'_>, v: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>, kind: &str) -> PyResult<Py<PyAny>> {
        let kind = parse_product(kind)?;
        with_space!(self, s, S => {
            let (v, c) = (vector::<S>(v)?, vectors::<S>(conditioners)?);
            let n = match kind {
                ProductKind::Standard => standard_n_norm(s, &v, &c),
                ProductKind::Iterated => weak_n_norm(s, &v, &c),
            };
            norm_dict(py, &n.map_err(to_pyerr)?)
        })
    }

    /// The Lupu gap Γ(x, w, z), checked against (x,x|w,z)_* = gap·‖z‖²; never negative.
    fn lupu_gap(&self, py: Python<'_>, x: &Bound<'_, PyAny>, w: &Bound<'_, PyAny>, z: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => lupu_gap(s, &vector::<S>(x)?, &vector::<S>(w)?, &vector::<S>(z)?).map_err(to_pyerr)?.to_py(py))
    }

    /// The Chebyshev functional of x, y with respect to z.
    fn chebyshev(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, z: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => chebyshev(s, &vector::<S>(x)?, &vector::<S>(y)?, &vector::<S>(z)?).map_err(to_pyerr)?.to_py(py))
    }

    /// The n-Chebyshev functional T_n(x, y | x_n, …, x_2).
    fn n_chebyshev(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => n_chebyshev(s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?.to_py(py))
    }

    /// T_n(x, x)·T_n(y, y) − T_n(x, y)²; never negative.
    fn n_chebyshev_gap(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, conditioners: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => n_chebyshev_gap(s, &pair::<S>(x, y, conditioners)?).map_err(to_pyerr)?.to_py(py))
    }

    /// Least-squares w ≈ a·x + b·y + c·e by the vector Cramer method.
    fn fit(&self, py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, e: &Bound<'_, PyAny>, w: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        with_space!(self, s, S => {
            let f = fit_vector_method(s, &vector::<S>(x)?, &vector::<S>(y)?, &vector::<S>(e)?, &vector::<S>(w)?).map_err(to_pyerr)?;
            fit_dict(py, &f)
        })
    }
}

/// Determinant of a square matrix given as a list of rows.
#[pyfunction]
#[pyo3(signature = (matrix, mode = "exact"))]
fn determinant(py: Python<'_>, matrix: &Bound<'_, PyAny>, mode: &str) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => self::matrix::<S>(matrix)?.determinant().to_py(py))
}

/// Dodgson condensation with the row rotations it needed.
#[pyfunction]
#[pyo3(signature = (matrix, mode = "exact"))]
fn condense(py: Python<'_>, matrix: &Bound<'_, PyAny>, mode: &str) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => {
        let c = run_condense(&self::matrix::<S>(matrix)?);
        let d = PyDict::new(py);
        d.set_item("value", c.value.to_py(py)?)?;
        d.set_item("rotations", c.rotations)?;
        d.set_item("fell_back", c.fell_back)?;
        d.set_item("fragile", c.fragile)?;
        d.into_py_any(py)
    })
}

/// Residuals of the leading-block and condensation Dodgson identities
/// (order ≥ 3); both are zero.
#[pyfunction]
#[pyo3(signature = (matrix, mode = "exact"))]
fn dodgson_residuals(py: Python<'_>, matrix: &Bound<'_, PyAny>, mode: &str) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
    by_mode!(parse_mode(mode)?, S => {
        let m = self::matrix::<S>(matrix)?;
        let r1 = leading_block_residual(&m).map_err(to_pyerr)?;
        let r2 = condensation_residual(&m).map_err(to_pyerr)?;
        Ok((r1.to_py(py)?, r2.to_py(py)?))
    })
}

/// Fits z ≈ a·x + b·y + c by the vector, statistics and normal-equation
/// methods and compares them.
#[pyfunction]
#[pyo3(signature = (x, y, z, mode = "exact", tol = DEFAULT_TOL))]
fn regress(py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, z: &Bound<'_, PyAny>, mode: &str, tol: f64) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => {
        let ds = Dataset::<S>::new(scalars(x)?, scalars(y)?, scalars(z)?).map_err(to_pyerr)?;
        comparison_dict(py, &compare_fits(&ds, tol).map_err(to_pyerr)?)
    })
}

#[pyfunction(name = "mean")]
#[pyo3(signature = (data, mode = "exact", tol = DEFAULT_TOL))]
fn py_mean(py: Python<'_>, data: &Bound<'_, PyAny>, mode: &str, tol: f64) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => mean(&scalars::<S>(data)?, tol).map_err(to_pyerr)?.to_py(py))
}

/// Population variance.
#[pyfunction(name = "variance")]
#[pyo3(signature = (data, mode = "exact", tol = DEFAULT_TOL))]
fn py_variance(py: Python<'_>, data: &Bound<'_, PyAny>, mode: &str, tol: f64) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => variance(&scalars::<S>(data)?, tol).map_err(to_pyerr)?.to_py(py))
}

/// Population covariance.
#[pyfunction(name = "covariance")]
#[pyo3(signature = (x, y, mode = "exact", tol = DEFAULT_TOL))]
fn py_covariance(py: Python<'_>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>, mode: &str, tol: f64) -> PyResult<Py<PyAny>> {
    by_mode!(parse_mode(mode)?, S => covariance(&scalars::<S>(x)?, &scalars::<S>(y)?, tol).map_err(to_pyerr)?.to_py(py))
}

/// (1,0,0), (1,1,1), (2,1,2) zero-padded to `dim`.
#[pyfunction]
#[pyo3(signature = (dim = 3, mode = "exact"))]
fn symmetry_counterexample(py: Python<'_>, dim: usize, mode: &str) -> PyResult<Py<PyAny>> {
    if dim < 3 {
        return Err(PyValueError::new_err("the triple needs dim >= 3"));
    }
    by_mode!(parse_mode(mode)?, S => {
        let vs: Vec<Vec<S>> = pinned_triple::<S>(dim).into_iter().map(Vector::into_coords).collect();
        rows(py, &vs)
    })
}

/// Checks one axiom on `samples` seeded trials in dimension `dim`
/// (default n + 1).
#[pyfunction]
#[pyo3(signature = (axiom, n = 3, dim = None, product = None, samples = 50, seed = 0, mode = "exact", tol = DEFAULT_TOL))]
#[allow(clippy::too_many_arguments)]
fn axiom_check(
    py: Python<'_>,
    axiom: &str,
    n: usize,
    dim: Option<usize>,
    product: Option<&str>,
    samples: usize,
    seed: u64,
    mode: &str,
    tol: f64,
) -> PyResult<Py<PyAny>> {
    let axiom: Axiom = axiom.parse().map_err(PyValueError::new_err)?;
    let product = product.map(parse_product).transpose()?.unwrap_or_else(|| axiom.default_product());
    let dim = dim.unwrap_or(n + 1);
    by_mode!(parse_mode(mode)?, S => {
        let space = InnerSpace::<S>::euclidean(dim).with_tol(tol);
        let r = py.detach(|| run_axiom_check(&space, axiom, product, n, samples, seed)).map_err(to_pyerr)?;
        let d = PyDict::new(py);
        d.set_item("axiom", axiom.to_string())?;
        d.set_item("product", product.to_string())?;
        d.set_item("n", r.n)?;
        d.set_item("trials", r.trials)?;
        d.set_item("failures", r.failures)?;
        d.set_item("passed", r.passed())?;
        d.set_item("expected_to_hold", axiom.expected_to_hold(product, n))?;
        let ce = match &r.counterexample {
            Some(c) => {
                let e = PyDict::new(py);
                let vs: Vec<Vec<S>> = c.vectors.iter().map(|v| v.coords().to_vec()).collect();
                e.set_item("vectors", rows(py, &vs)?)?;
                e.set_item("lhs", c.lhs.to_py(py)?)?;
                e.set_item("rhs", c.rhs.to_py(py)?)?;
                e.set_item("detail", &c.detail)?;
                Some(e)
            }
            None => None,
        };
        d.set_item("counterexample", ce)?;
        d.into_py_any(py)
    })
}

/// Runs a seeded suite and returns its report as a dict; scalars inside
/// counterexamples appear as strings in exact mode.
#[pyfunction]
#[pyo3(signature = (suite = "all", n = 3, dim = None, trials = 50, seed = 0, mode = "exact", tol = DEFAULT_TOL))]
fn verify(py: Python<'_>, suite: &str, n: usize, dim: Option<usize>, trials: usize, seed: u64, mode: &str, tol: f64) -> PyResult<Py<PyAny>> {
    let config = SuiteConfig {
        suite: suite.parse::<SuiteKind>().map_err(PyValueError::new_err)?,
        n,
        dim: dim.unwrap_or((n + 1).max(4)),
        trials,
        seed,
        mode: parse_mode(mode)?,
        tol,
    };
    let report = py.detach(|| run_suite(&config)).map_err(to_pyerr)?;
    let value = serde_json::to_value(&report).map_err(|e| NinnerError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Adds the module contents to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("NinnerError", py.get_type::<NinnerError>())?;
    m.add("DimensionError", py.get_type::<DimensionError>())?;
    m.add("SingularError", py.get_type::<SingularError>())?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(condense, m)?)?;
    m.add_function(wrap_pyfunction!(dodgson_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(regress, m)?)?;
    m.add_function(wrap_pyfunction!(py_mean, m)?)?;
    m.add_function(wrap_pyfunction!(py_variance, m)?)?;
    m.add_function(wrap_pyfunction!(py_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[pymodule]
fn ninner(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
