//! Vectors, square matrices, weighted inner product spaces, Gram matrices.

use std::ops::{Add, Index, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance used for float-mode zero tests unless overridden.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![S::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = S::one();
        v
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, a: &S) -> Self {
        Vector(self.0.iter().map(|c| c.clone() * a.clone()).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: &S, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "vector lengths differ");
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(s, o)| s.clone() + a.clone() * o.clone())
                .collect(),
        )
    }

    /// `Σ coeffs[i] * vs[i]` over vectors of length `dim`.
    pub fn combination(dim: usize, coeffs: &[S], vs: &[Vector<S>]) -> Self {
        coeffs
            .iter()
            .zip(vs)
            .fold(Self::zeros(dim), |acc, (c, v)| acc.axpy(c, v))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector(self.0.iter().map(f).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;
    fn add(self, rhs: &Vector<S>) -> Vector<S> {
        self.axpy(&S::one(), rhs)
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;
    fn sub(self, rhs: &Vector<S>) -> Vector<S> {
        self.axpy(&-S::one(), rhs)
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;
    fn neg(self) -> Vector<S> {
        self.scaled(&-S::one())
    }
}

impl<S: Scalar> Serialize for Vector<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_seq(self.0.iter().map(Scalar::to_json))
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<S> {
    order: usize,
    entries: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn new(order: usize, entries: Vec<S>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidMatrix("order must be at least 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for order {order}",
                entries.len()
            )));
        }
        Ok(SquareMatrix { order, entries })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let order = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::InvalidMatrix(format!(
                "row {} has {} entries, expected {order}",
                i + 1,
                r.len()
            )));
        }
        Self::new(order, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    /// Builds an `order × order` matrix from `f(i, j)`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(order > 0, "matrix order must be positive");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.order).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i).clone())
    }

    /// The submatrix picking `rows` and `cols` in the order given. Indices
    /// must be in range; repeated indices are allowed (the determinant is
    /// then zero).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len(), "selection must be square");
        Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn determinant(&self) -> S {
        S::determinant(self)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self
            .entries
            .iter()
            .map(|e| e.to_f64().abs())
            .fold(0.0, f64::max);
        (0..self.order).all(|i| {
            (i + 1..self.order).all(|j| self.get(i, j).approx_eq(self.get(j, i), tol, scale))
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SquareMatrix<T> {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        (0..self.order)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl<S: Scalar> Serialize for SquareMatrix<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_seq((0..self.order).map(|i| {
            self.row(i).iter().map(Scalar::to_json).collect::<Vec<_>>()
        }))
    }
}

/// Solves `a · θ = b` by Cramer's rule on the core determinant.
pub fn cramer_solve<S: Scalar>(a: &SquareMatrix<S>, b: &[S], tol: f64) -> Result<Vec<S>> {
    let n = a.order();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let det = a.determinant();
    if det.is_negligible(tol, hadamard_bound(a)) {
        return Err(Error::Singular {
            what: "system determinant",
            witness: det.to_string(),
        });
    }
    Ok((0..n)
        .map(|k| {
            let replaced =
                SquareMatrix::from_fn(n, |i, j| if j == k { b[i].clone() } else { a.get(i, j).clone() });
            replaced.determinant() / det.clone()
        })
        .collect())
}

/// Product of row norms; bounds `|det a|`.
pub fn hadamard_bound<S: Scalar>(a: &SquareMatrix<S>) -> f64 {
    (0..a.order())
        .map(|i| a.row(i).iter().map(|e| e.to_f64().powi(2)).sum::<f64>().sqrt())
        .product()
}

/// A particular solution of the normal equations `G θ = b`, free variables
/// set to zero. `G` is a Gram matrix, so the system is always consistent.
pub fn solve_normal_equations<S: Scalar>(gram: &SquareMatrix<S>, b: &[S], tol: f64) -> Vec<S> {
    let n = gram.order();
    let mut a = gram.rows();
    for (row, rhs) in a.iter_mut().zip(b) {
        row.push(rhs.clone());
    }
    let scale = gram.entries().iter().map(|e| e.to_f64().abs()).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let best = (r..n).max_by(|&i, &j| a[i][c].to_f64().abs().total_cmp(&a[j][c].to_f64().abs()));
        let p = match S::MODE {
            crate::Mode::Exact => (r..n).find(|&i| !a[i][c].is_zero()),
            crate::Mode::Float => best.filter(|&i| !a[i][c].is_negligible(tol, scale)),
        };
        let Some(p) = p else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let d = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![S::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[row][n].clone();
    }
    x
}

/// A finite-dimensional real inner product space `⟨x, y⟩ = xᵀ W y`.
#[derive(Clone, Debug)]
pub struct InnerSpace<S> {
    dim: usize,
    weight: Option<SquareMatrix<S>>,
    tol: f64,
}

impl<S: Scalar> InnerSpace<S> {
    /// Identity weight: the ordinary dot product.
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        InnerSpace { dim, weight: None, tol: DEFAULT_TOL }
    }

    /// Weighted inner product. The weight must be symmetric and positive
    /// definite (checked through its leading principal minors).
    pub fn weighted(weight: SquareMatrix<S>) -> Result<Self> {
        Self::weighted_with_tol(weight, DEFAULT_TOL)
    }

    pub fn weighted_with_tol(weight: SquareMatrix<S>, tol: f64) -> Result<Self> {
        if !weight.is_symmetric(tol) {
            return Err(Error::InvalidWeight("matrix is not symmetric".into()));
        }
        let n = weight.order();
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            let minor = weight.select(&idx, &idx).determinant();
            if !minor.is_positive() {
                return Err(Error::InvalidWeight(format!(
                    "leading principal minor of order {k} is {minor}, not positive"
                )));
            }
        }
        Ok(InnerSpace { dim: n, weight: Some(weight), tol })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn weight(&self) -> Option<&SquareMatrix<S>> {
        self.weight.as_ref()
    }

    pub fn check_dim(&self, v: &Vector<S>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(())
    }

    pub fn check_all<'a>(&self, vs: impl IntoIterator<Item = &'a Vector<S>>) -> Result<()> {
        vs.into_iter().try_for_each(|v| self.check_dim(v))
    }

    pub fn inner_product(&self, x: &Vector<S>, y: &Vector<S>) -> Result<S> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
        }
        self.check_dim(x)?;
        Ok(self.inner(x, y))
    }

    /// Inner product without dimension checks.
    pub(crate) fn inner(&self, x: &Vector<S>, y: &Vector<S>) -> S {
        match &self.weight {
            None => dot(x.coords(), y.coords()),
            Some(w) => dot(x.coords(), &w.apply(y.coords())),
        }
    }

    pub fn norm_squared(&self, v: &Vector<S>) -> Result<S> {
        self.inner_product(v, v)
    }

    pub fn gram_matrix(&self, vs: &[Vector<S>]) -> Result<SquareMatrix<S>> {
        if vs.is_empty() {
            return Err(Error::Empty("gram matrix needs at least one vector"));
        }
        self.check_all(vs)?;
        Ok(self.gram_unchecked(vs.iter()))
    }

    pub(crate) fn gram_unchecked<'a>(&self, vs: impl IntoIterator<Item = &'a Vector<S>>) -> SquareMatrix<S> {
        let vs: Vec<&Vector<S>> = vs.into_iter().collect();
        let n = vs.len();
        let mut g: Vec<Vec<S>> = vec![Vec::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let v = if j < i { g[j][i].clone() } else { self.inner(vs[i], vs[j]) };
                g[i].push(v);
            }
        }
        SquareMatrix::from_rows(g).expect("square by construction")
    }

    pub fn gram_determinant(&self, vs: &[Vector<S>]) -> Result<S> {
        Ok(self.gram_matrix(vs)?.determinant())
    }

    /// Exact mode: the Gram determinant is literally zero. Float mode: it is at
    /// most `tol · ∏‖vᵢ‖²`.
    pub fn is_linearly_dependent(&self, vs: &[Vector<S>]) -> Result<bool> {
        if vs.is_empty() {
            return Err(Error::Empty("dependence test needs at least one vector"));
        }
        self.check_all(vs)?;
        if vs.len() > self.dim {
            return Ok(true);
        }
        let g = self.gram_unchecked(vs);
        let scale: f64 = (0..g.order()).map(|i| g.get(i, i).to_f64()).product();
        Ok(g.determinant().is_negligible(self.tol, scale))
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
