//! The standard n-inner product, the n-iterated 2-inner product, their norms,
//! and the factor `E_n` relating the two.
//!
//! Conditioners are stored in the order they are written, `(x, y | x_n, …, x_2)`:
//! position 0 holds `x_n`, which the iterated recursion peels first, and the
//! last position holds `x_2`. The standard product does not depend on the
//! order; `E_n` and the iterated product do.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{solve_normal_equations, InnerSpace, SquareMatrix, Vector};
use crate::scalar::{self, pow, Mode, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionedPair<S> {
    pub x: Vector<S>,
    pub y: Vector<S>,
    /// `[x_n, …, x_2]`.
    pub conditioners: Vec<Vector<S>>,
}

impl<S: Scalar> ConditionedPair<S> {
    pub fn new(x: Vector<S>, y: Vector<S>, conditioners: Vec<Vector<S>>) -> Self {
        ConditionedPair { x, y, conditioners }
    }

    /// `(v, v | conditioners)`.
    pub fn diagonal(v: Vector<S>, conditioners: Vec<Vector<S>>) -> Self {
        ConditionedPair { x: v.clone(), y: v, conditioners }
    }

    /// The `n` of the n-product: one more than the number of conditioners.
    pub fn order(&self) -> usize {
        self.conditioners.len() + 1
    }

    pub fn with_args(&self, x: Vector<S>, y: Vector<S>) -> Self {
        ConditionedPair { x, y, conditioners: self.conditioners.clone() }
    }

    fn validate(&self, space: &InnerSpace<S>) -> Result<()> {
        if self.conditioners.is_empty() {
            return Err(Error::NoConditioners);
        }
        space.check_dim(&self.x)?;
        space.check_dim(&self.y)?;
        space.check_all(&self.conditioners)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Standard,
    Iterated,
}

impl std::fmt::Display for ProductKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProductKind::Standard => "standard",
            ProductKind::Iterated => "iterated",
        })
    }
}

impl std::str::FromStr for ProductKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(ProductKind::Standard),
            "iterated" => Ok(ProductKind::Iterated),
            _ => Err(format!("unknown product {s:?} (expected standard or iterated)")),
        }
    }
}

/// Gram matrix of `[x, y, x_n, …, x_2]` with the evaluators that share it.
pub(crate) struct Tableau<S> {
    gram: SquareMatrix<S>,
    m: usize,
}

const X: usize = 0;
const Y: usize = 1;

impl<S: Scalar> Tableau<S> {
    pub(crate) fn new(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Self {
        let vs = [&p.x, &p.y].into_iter().chain(&p.conditioners);
        Tableau { gram: space.gram_unchecked(vs), m: p.conditioners.len() }
    }

    fn cond(j: usize) -> usize {
        2 + j
    }

    /// `(a, b | c_0, …, c_{m-1})_*`, memoized on (a, b, depth).
    fn iterated(&self, a: usize, b: usize) -> S {
        let k = self.m + 2;
        let mut memo: Vec<Option<S>> = vec![None; k * k * (self.m + 1)];
        self.iterated_at(a, b, 0, &mut memo)
    }

    fn iterated_at(&self, a: usize, b: usize, j: usize, memo: &mut [Option<S>]) -> S {
        if j == self.m {
            return self.gram.get(a, b).clone();
        }
        let k = self.m + 2;
        let slot = (j * k + a) * k + b;
        if let Some(v) = &memo[slot] {
            return v.clone();
        }
        let c = Self::cond(j);
        let v = self.iterated_at(a, b, j + 1, memo) * self.iterated_at(c, c, j + 1, memo)
            - self.iterated_at(a, c, j + 1, memo) * self.iterated_at(c, b, j + 1, memo);
        memo[slot] = Some(v.clone());
        v
    }

    /// The outermost 2×2 matrix of the recursion.
    fn iterated_top(&self) -> [[S; 2]; 2] {
        let k = self.m + 2;
        let mut memo: Vec<Option<S>> = vec![None; k * k * (self.m + 1)];
        let c = Self::cond(0);
        let mut at = |a, b| self.iterated_at(a, b, 1, &mut memo);
        [[at(X, Y), at(X, c)], [at(c, Y), at(c, c)]]
    }

    /// `⟨a, b | c_from, …, c_{m-1}⟩`, reducing to `⟨a, b⟩` when `from == m`.
    fn standard(&self, a: usize, b: usize, from: usize) -> S {
        if from == self.m {
            return self.gram.get(a, b).clone();
        }
        let tail = (from..self.m).map(Self::cond);
        let rows: Vec<usize> = std::iter::once(a).chain(tail.clone()).collect();
        let cols: Vec<usize> = std::iter::once(b).chain(tail).collect();
        self.gram.select(&rows, &cols).determinant()
    }

    fn e_factor(&self) -> S {
        (1..self.m).fold(S::one(), |acc, i| {
            let c = Self::cond(i);
            acc * pow(&self.standard(c, c, i + 1), 1u64 << (i - 1))
        })
    }

    fn root_diag(&self, a: usize) -> f64 {
        self.gram.get(a, a).to_f64().abs().sqrt()
    }

    /// Magnitude bound for the iterated product: the same recursion with
    /// every subtraction replaced by addition on `‖a‖‖b‖`.
    fn iterated_scale(&self, a: usize, b: usize) -> f64 {
        fn rec<S: Scalar>(t: &Tableau<S>, a: usize, b: usize, j: usize, memo: &mut [Option<f64>]) -> f64 {
            if j == t.m {
                return t.root_diag(a) * t.root_diag(b);
            }
            let k = t.m + 2;
            let slot = (j * k + a) * k + b;
            if let Some(v) = memo[slot] {
                return v;
            }
            let c = Tableau::<S>::cond(j);
            let v = rec(t, a, b, j + 1, memo) * rec(t, c, c, j + 1, memo)
                + rec(t, a, c, j + 1, memo) * rec(t, c, b, j + 1, memo);
            memo[slot] = Some(v);
            v
        }
        let k = self.m + 2;
        rec(self, a, b, 0, &mut vec![None; k * k * (self.m + 1)])
    }

    /// Hadamard bound for the standard product.
    fn standard_scale(&self, a: usize, b: usize) -> f64 {
        (0..self.m)
            .map(|j| self.gram.get(Self::cond(j), Self::cond(j)).to_f64().abs())
            .product::<f64>()
            * self.root_diag(a)
            * self.root_diag(b)
    }

    fn scale(&self, kind: ProductKind, a: usize, b: usize) -> f64 {
        match kind {
            ProductKind::Standard => self.standard_scale(a, b),
            ProductKind::Iterated => self.iterated_scale(a, b),
        }
    }
}

/// `⟨x, y | x_n, …, x_2⟩`: the determinant of inner products whose first row
/// is `⟨x,y⟩, ⟨x,x_2⟩, …` and whose remaining rows are indexed by the
/// conditioners.
pub fn standard_n_inner<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<S> {
    p.validate(space)?;
    Ok(Tableau::new(space, p).standard(X, Y, 0))
}

/// Standard product that also accepts an empty conditioner list, where it is
/// the plain inner product.
pub fn standard_or_inner<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    y: &Vector<S>,
    conditioners: &[Vector<S>],
) -> Result<S> {
    let p = ConditionedPair::new(x.clone(), y.clone(), conditioners.to_vec());
    space.check_dim(x)?;
    space.check_dim(y)?;
    space.check_all(conditioners)?;
    Ok(Tableau::new(space, &p).standard(X, Y, 0))
}

/// `(x, y | x_n, …, x_2)_*`: a 2-inner product for one conditioner, otherwise
/// the 2×2 determinant of lower-order iterated products obtained by peeling
/// `x_n`.
pub fn iterated_2_inner<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<S> {
    p.validate(space)?;
    Ok(Tableau::new(space, p).iterated(X, Y))
}

/// The iterated product together with the 2×2 matrix it is the determinant of.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct IteratedExpansion<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub value: S,
    /// `[[(x,y|…), (x,x_n|…)], [(x_n,y|…), (x_n,x_n|…)]]` over the remaining
    /// conditioners. For a single conditioner these are plain inner products.
    #[serde(serialize_with = "serialize_2x2")]
    pub top: [[S; 2]; 2],
}

fn serialize_2x2<S: Scalar, Se: serde::Serializer>(
    m: &[[S; 2]; 2],
    s: Se,
) -> std::result::Result<Se::Ok, Se::Error> {
    s.collect_seq(m.iter().map(|r| [r[0].to_json(), r[1].to_json()]))
}

pub fn iterated_2_inner_expanded<S: Scalar>(
    space: &InnerSpace<S>,
    p: &ConditionedPair<S>,
) -> Result<IteratedExpansion<S>> {
    p.validate(space)?;
    let t = Tableau::new(space, p);
    let top = t.iterated_top();
    let value = top[0][0].clone() * top[1][1].clone() - top[0][1].clone() * top[1][0].clone();
    Ok(IteratedExpansion { value, top })
}

/// Evaluates either product.
pub fn evaluate<S: Scalar>(kind: ProductKind, space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<S> {
    match kind {
        ProductKind::Standard => standard_n_inner(space, p),
        ProductKind::Iterated => iterated_2_inner(space, p),
    }
}

/// Magnitude scale for float-mode zero tests on `kind(x, y | …)`.
pub fn magnitude<S: Scalar>(kind: ProductKind, space: &InnerSpace<S>, p: &ConditionedPair<S>) -> f64 {
    if S::MODE == Mode::Exact {
        return 1.0;
    }
    Tableau::new(space, p).scale(kind, X, Y)
}

/// A norm whose square is exact. `root` is the exact square root when it is
/// representable (always, in float mode).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct NormValue<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub squared: S,
    #[serde(serialize_with = "scalar::serialize_opt")]
    pub root: Option<S>,
    pub approx: f64,
}

impl<S: Scalar> NormValue<S> {
    /// Float-mode values slightly below zero (within `tol · scale`) clamp to
    /// zero; anything more negative is an error.
    pub fn from_squared(squared: S, tol: f64, scale: f64) -> Result<Self> {
        let squared = if squared.is_negative() {
            if S::MODE == Mode::Float && squared.is_negligible(tol, scale) {
                S::zero()
            } else {
                return Err(Error::NegativeSquaredNorm { value: squared.to_f64() });
            }
        } else {
            squared
        };
        let approx = squared.to_f64().sqrt();
        Ok(NormValue { root: squared.exact_sqrt(), squared, approx })
    }
}

fn norm_of<S: Scalar>(
    kind: ProductKind,
    space: &InnerSpace<S>,
    v: &Vector<S>,
    conditioners: &[Vector<S>],
) -> Result<NormValue<S>> {
    let p = ConditionedPair::diagonal(v.clone(), conditioners.to_vec());
    let sq = evaluate(kind, space, &p)?;
    NormValue::from_squared(sq, space.tol(), magnitude(kind, space, &p))
}

/// `‖v | x_n, …, x_2‖ = √⟨v, v | x_n, …, x_2⟩`.
pub fn standard_n_norm<S: Scalar>(
    space: &InnerSpace<S>,
    v: &Vector<S>,
    conditioners: &[Vector<S>],
) -> Result<NormValue<S>> {
    norm_of(ProductKind::Standard, space, v, conditioners)
}

/// The weak n-norm generated by the iterated product.
pub fn weak_n_norm<S: Scalar>(
    space: &InnerSpace<S>,
    v: &Vector<S>,
    conditioners: &[Vector<S>],
) -> Result<NormValue<S>> {
    norm_of(ProductKind::Iterated, space, v, conditioners)
}

/// `E_n = ∏_{k=2}^{n-1} ⟨x_k, x_k | x_{k-1}, …, x_2⟩^{2^{n-k-1}}`, with the
/// `k = 2` factor read as `⟨x_2, x_2⟩`. `E_2 = 1`.
pub fn e_factor<S: Scalar>(space: &InnerSpace<S>, conditioners: &[Vector<S>]) -> Result<S> {
    let first = conditioners.first().ok_or(Error::NoConditioners)?;
    space.check_all(conditioners)?;
    let p = ConditionedPair::new(first.clone(), first.clone(), conditioners.to_vec());
    Ok(Tableau::new(space, &p).e_factor())
}

/// The iterated product, `E_n`, and the standard product, each computed on
/// its own path.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct ProductReport<S> {
    pub n: usize,
    #[serde(serialize_with = "scalar::serialize")]
    pub value: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub e_factor: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub standard_value: S,
    /// `value − e_factor · standard_value`.
    #[serde(serialize_with = "scalar::serialize")]
    pub residual: S,
}

/// Evaluates `(x,y|…)_* = E_n · ⟨x,y|…⟩` from both sides and fails with
/// [`Error::Inconsistent`] when they disagree (exactly, or beyond the
/// relative tolerance in float mode).
pub fn representation_report<S: Scalar>(
    space: &InnerSpace<S>,
    p: &ConditionedPair<S>,
) -> Result<ProductReport<S>> {
    p.validate(space)?;
    let t = Tableau::new(space, p);
    let value = t.iterated(X, Y);
    let e = t.e_factor();
    let standard_value = t.standard(X, Y, 0);
    let residual = value.clone() - e.clone() * standard_value.clone();
    let scale = if S::MODE == Mode::Float { t.iterated_scale(X, Y) } else { 1.0 };
    if !residual.is_negligible(space.tol(), scale) {
        return Err(Error::Inconsistent(format!(
            "iterated product {value} differs from E_n·standard = {e}·{standard_value}"
        )));
    }
    Ok(ProductReport { n: p.order(), value, e_factor: e, standard_value, residual })
}

/// `y = μ x + Σ cᵢ x_i`, found by least squares.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct EqualityWitness<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub mu: S,
    /// Coefficients on the conditioners, in stored order.
    #[serde(serialize_with = "scalar::serialize_vec")]
    pub span_coefficients: Vec<S>,
}

impl<S: Scalar> EqualityWitness<S> {
    pub fn mu_nonnegative(&self) -> bool {
        !self.mu.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct SchwarzReport<S> {
    /// `(x,x|…)(y,y|…) − (x,y|…)²`, never negative.
    #[serde(serialize_with = "scalar::serialize")]
    pub gap: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub xx: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub yy: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub xy: S,
    /// Present when `y − μx` lies in the span of the conditioners.
    pub equality: Option<EqualityWitness<S>>,
}

/// Gap in the Schwarz-type inequality for the iterated product, with
/// equality-case detection.
pub fn schwarz_gap<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<SchwarzReport<S>> {
    p.validate(space)?;
    let xx = iterated_2_inner(space, &p.with_args(p.x.clone(), p.x.clone()))?;
    let yy = iterated_2_inner(space, &p.with_args(p.y.clone(), p.y.clone()))?;
    let xy = iterated_2_inner(space, p)?;
    let gap = xx.clone() * yy.clone() - xy.clone() * xy.clone();
    let scale = if S::MODE == Mode::Float {
        let t = Tableau::new(space, p);
        t.iterated_scale(X, X) * t.iterated_scale(Y, Y)
    } else {
        1.0
    };
    if gap.is_negative() && !gap.is_negligible(space.tol(), scale) {
        return Err(Error::Inconsistent(format!("negative Schwarz gap {gap}")));
    }
    Ok(SchwarzReport { equality: equality_witness(space, p), gap, xx, yy, xy })
}

fn equality_witness<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Option<EqualityWitness<S>> {
    // x goes last so it is the free variable when it lies in the span, giving μ = 0.
    let basis: Vec<&Vector<S>> = p.conditioners.iter().chain([&p.x]).collect();
    let gram = space.gram_unchecked(basis.iter().copied());
    let rhs: Vec<S> = basis.iter().map(|b| space.inner(b, &p.y)).collect();
    let theta = solve_normal_equations(&gram, &rhs, space.tol());
    let fit = basis
        .iter()
        .zip(&theta)
        .fold(Vector::zeros(space.dim()), |acc, (b, c)| acc.axpy(c, b));
    let r = &p.y - &fit;
    let yy = space.inner(&p.y, &p.y).to_f64();
    if !space.inner(&r, &r).is_negligible(space.tol(), yy) {
        return None;
    }
    let mut theta = theta;
    let mu = theta.pop().expect("basis includes x");
    Some(EqualityWitness { mu, span_coefficients: theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn v(c: &[i64]) -> Vector<Exact> {
        Vector::from_i64s(c)
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    fn pinned_triple() -> (InnerSpace<Exact>, Vector<Exact>, Vector<Exact>, Vector<Exact>) {
        (InnerSpace::euclidean(3), v(&[1, 0, 0]), v(&[1, 1, 1]), v(&[2, 1, 2]))
    }

    #[test]
    fn iterated_counterexample_values() {
        let (s, x, u, vv) = pinned_triple();
        let a = iterated_2_inner_expanded(&s, &ConditionedPair::diagonal(x.clone(), vec![u.clone(), vv.clone()])).unwrap();
        assert_eq!(a.value, q(9));
        assert_eq!(a.top, [[q(5), q(-1)], [q(-1), q(2)]]);
        let b = iterated_2_inner_expanded(&s, &ConditionedPair::diagonal(vv, vec![u, x])).unwrap();
        assert_eq!(b.value, q(1));
        assert_eq!(b.top, [[q(5), q(3)], [q(3), q(2)]]);
    }

    #[test]
    fn standard_examples() {
        let (s, x, u, vv) = pinned_triple();
        let p = ConditionedPair::diagonal(x.clone(), vec![u.clone(), vv.clone()]);
        assert_eq!(standard_n_inner(&s, &p).unwrap(), q(1));
        let s2 = InnerSpace::euclidean(2);
        let p2 = ConditionedPair::new(v(&[1, 0]), v(&[0, 1]), vec![v(&[1, 1])]);
        assert_eq!(standard_n_inner(&s2, &p2).unwrap(), q(-1));
        let in_span = ConditionedPair::new(&u + &vv, x, vec![u, vv]);
        assert_eq!(standard_n_inner(&s, &in_span).unwrap(), q(0));
    }

    #[test]
    fn norms() {
        let (s, x, u, vv) = pinned_triple();
        let conds = vec![u.clone(), vv.clone()];
        let n = standard_n_norm(&s, &x, &conds).unwrap();
        assert_eq!((n.squared.clone(), n.root.clone()), (q(1), Some(q(1))));
        assert_eq!(weak_n_norm(&s, &x, &conds).unwrap().root, Some(q(3)));
        assert_eq!(standard_n_norm(&s, &vv, &conds).unwrap().squared, q(0));
        assert_eq!(weak_n_norm(&s, &vv, &conds).unwrap().squared, q(0));
        // irrational root stays as an exact square
        let n2 = standard_n_norm(&s, &x.scaled(&q(2)), &[u]).unwrap();
        assert_eq!(n2.squared, q(8));
        assert_eq!(n2.root, None);
        assert!((n2.approx - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn float_norm_clamps_small_negatives_only() {
        assert_eq!(NormValue::<f64>::from_squared(-1e-12, 1e-9, 1.0).unwrap().squared, 0.0);
        assert!(matches!(
            NormValue::<f64>::from_squared(-1e-3, 1e-9, 1.0),
            Err(Error::NegativeSquaredNorm { .. })
        ));
    }

    #[test]
    fn e_factor_examples() {
        let (s, x, u, vv) = pinned_triple();
        assert_eq!(e_factor(&s, &[x.clone()]).unwrap(), q(1));
        assert_eq!(e_factor(&s, &[u.clone(), vv.clone()]).unwrap(), q(9));
        // n = 4 with conditioners (v, w, z): ⟨z,z|w⟩⟨z,z⟩²
        let (w, z) = (u.clone(), vv.clone());
        let expect = (s.inner(&z, &z) * s.inner(&w, &w) - s.inner(&z, &w) * s.inner(&z, &w))
            * s.inner(&z, &z)
            * s.inner(&z, &z);
        assert_eq!(e_factor(&s, &[x, w, z]).unwrap(), expect);
        assert_eq!(e_factor::<Exact>(&s, &[]), Err(Error::NoConditioners));
    }

    #[test]
    fn representation_examples() {
        let (s, x, u, vv) = pinned_triple();
        let r = representation_report(&s, &ConditionedPair::diagonal(x.clone(), vec![u.clone(), vv])).unwrap();
        assert_eq!((r.value, r.e_factor, r.standard_value), (q(9), q(9), q(1)));
        let r2 = representation_report(&s, &ConditionedPair::new(x, u.clone(), vec![u])).unwrap();
        assert_eq!(r2.e_factor, q(1));
        assert_eq!(r2.value, r2.standard_value);
    }

    #[test]
    fn zero_conditioner_annihilates() {
        let (s, x, u, vv) = pinned_triple();
        for pos in 0..2 {
            let mut conds = vec![u.clone(), vv.clone()];
            conds[pos] = Vector::zeros(3);
            let p = ConditionedPair::new(x.clone(), u.clone(), conds);
            assert_eq!(iterated_2_inner(&s, &p).unwrap(), q(0));
        }
    }

    #[test]
    fn schwarz_equality_cases() {
        let (s, x, u, vv) = pinned_triple();
        let conds = vec![u.clone()];
        let same = schwarz_gap(&s, &ConditionedPair::diagonal(x.clone(), conds.clone())).unwrap();
        assert_eq!(same.gap, q(0));
        assert_eq!(same.equality.unwrap().mu, q(1));
        let shifted = schwarz_gap(&s, &ConditionedPair::new(x.clone(), &x + &u, conds.clone())).unwrap();
        assert_eq!(shifted.gap, q(0));
        let w = shifted.equality.unwrap();
        assert_eq!((w.mu, w.span_coefficients), (q(1), vec![q(1)]));
        let generic = schwarz_gap(&s, &ConditionedPair::new(x, vv, conds)).unwrap();
        assert!(generic.gap > q(0));
        assert!(generic.equality.is_none());
    }

    #[test]
    fn errors() {
        let (s, x, u, _) = pinned_triple();
        assert_eq!(
            iterated_2_inner(&s, &ConditionedPair::new(x.clone(), u.clone(), vec![])),
            Err(Error::NoConditioners)
        );
        assert_eq!(
            standard_n_inner(&s, &ConditionedPair::new(x, u, vec![v(&[1, 2])])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }
}
