//! Randomized conformance checks for the n-inner product axioms (I1–I6), the
//! weak n-inner product axioms (P1–P5) and the weak n-norm conditions (C1–C4).
//!
//! I2 (full permutation symmetry) is expected to fail for the iterated product
//! once n ≥ 3; the check returns the violating tuple.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{InnerSpace, Vector};
use crate::products::{self, evaluate, magnitude, ConditionedPair, ProductKind};
use crate::rng::TrialRng;
use crate::scalar::{self, sqrt_sum_dominates, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    P1,
    P2,
    P3,
    P4,
    P5,
    C1,
    C2,
    C3,
    C4,
}

impl Axiom {
    pub const ALL: [Axiom; 15] = [
        Axiom::I1,
        Axiom::I2,
        Axiom::I3,
        Axiom::I4,
        Axiom::I5,
        Axiom::I6,
        Axiom::P1,
        Axiom::P2,
        Axiom::P3,
        Axiom::P4,
        Axiom::P5,
        Axiom::C1,
        Axiom::C2,
        Axiom::C3,
        Axiom::C4,
    ];

    /// I axioms are stated for the standard product, P and C for the iterated one.
    pub fn default_product(self) -> ProductKind {
        match self {
            Axiom::I1 | Axiom::I2 | Axiom::I3 | Axiom::I4 | Axiom::I5 | Axiom::I6 => ProductKind::Standard,
            _ => ProductKind::Iterated,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Axiom::I1 | Axiom::P1 => "positivity, zero exactly on dependent tuples",
            Axiom::I2 => "invariance under every permutation of (v1, …, vn)",
            Axiom::I3 | Axiom::P3 => "symmetry in the two arguments",
            Axiom::I4 | Axiom::P4 => "homogeneity in the first argument",
            Axiom::I5 | Axiom::P5 => "additivity in the first argument",
            Axiom::I6 => "vanishes when v, v2, …, vn are dependent",
            Axiom::P2 => "interchange of x with the first conditioner",
            Axiom::C1 => "norm nonnegative, zero exactly on dependent tuples",
            Axiom::C2 => "norm interchange of x with the first conditioner",
            Axiom::C3 => "norm absolute homogeneity",
            Axiom::C4 => "norm triangle inequality",
        }
    }

    /// Whether the axiom holds for `product` at order `n`.
    pub fn expected_to_hold(self, product: ProductKind, n: usize) -> bool {
        !(self == Axiom::I2 && product == ProductKind::Iterated && n >= 3)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Axiom {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let up = s.trim().to_ascii_uppercase();
        Axiom::ALL
            .into_iter()
            .find(|a| a.to_string() == up)
            .ok_or_else(|| format!("unknown axiom {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct Counterexample<S> {
    pub vectors: Vec<Vector<S>>,
    #[serde(serialize_with = "scalar::serialize")]
    pub lhs: S,
    #[serde(serialize_with = "scalar::serialize")]
    pub rhs: S,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct CheckReport<S> {
    pub axiom: Axiom,
    pub product: ProductKind,
    pub n: usize,
    pub trials: usize,
    pub failures: usize,
    /// The failing trial with the smallest index.
    pub counterexample: Option<Counterexample<S>>,
}

impl<S: Scalar> CheckReport<S> {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `(1,0,0), (1,1,1), (2,1,2)` zero-padded to `dim`: the triple on which the
/// 3-iterated product breaks permutation symmetry (9 against 1).
pub fn symmetry_counterexample<S: Scalar>(dim: usize) -> [Vector<S>; 3] {
    assert!(dim >= 3, "the fixture lives in at least three dimensions");
    let pad = |c: [i64; 3]| {
        let mut v = vec![0; dim];
        v[..3].copy_from_slice(&c);
        Vector::from_i64s(&v)
    };
    [pad([1, 0, 0]), pad([1, 1, 1]), pad([2, 1, 2])]
}

/// Checks `axiom` for `product` on `samples` random tuples at order `n`.
/// Trial `i` draws from stream `(seed, i)`.
pub fn axiom_check<S: Scalar>(
    space: &InnerSpace<S>,
    axiom: Axiom,
    product: ProductKind,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<CheckReport<S>> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidConfig(format!("order n = {n} is below 2")));
    }
    if space.dim() < n {
        return Err(Error::InvalidConfig(format!(
            "dimension {} cannot hold {n} independent vectors",
            space.dim()
        )));
    }
    let outcomes: Vec<Result<Option<Counterexample<S>>>> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let mut rng = TrialRng::new(seed, t as u64);
            let ctx = Ctx { space, product, m: n - 1 };
            if t == 0 && axiom == Axiom::I2 && product == ProductKind::Iterated && n == 3 {
                return ctx.permutation_check(symmetry_counterexample(space.dim()).to_vec(), &mut rng);
            }
            ctx.trial(axiom, &mut rng)
        })
        .collect();
    let mut failures = 0;
    let mut counterexample = None;
    for o in outcomes {
        if let Some(c) = o? {
            failures += 1;
            counterexample.get_or_insert(c);
        }
    }
    Ok(CheckReport { axiom, product, n, trials: samples, failures, counterexample })
}

struct Ctx<'a, S> {
    space: &'a InnerSpace<S>,
    product: ProductKind,
    /// number of conditioners
    m: usize,
}

type Outcome<S> = Result<Option<Counterexample<S>>>;

impl<S: Scalar> Ctx<'_, S> {
    fn tol(&self) -> f64 {
        self.space.tol()
    }

    fn eval(&self, x: &Vector<S>, y: &Vector<S>, conds: &[Vector<S>]) -> Result<(S, f64)> {
        let p = ConditionedPair::new(x.clone(), y.clone(), conds.to_vec());
        Ok((evaluate(self.product, self.space, &p)?, magnitude(self.product, self.space, &p)))
    }

    fn norm_sq(&self, v: &Vector<S>, conds: &[Vector<S>]) -> Result<(S, f64)> {
        let n = match self.product {
            ProductKind::Standard => products::standard_n_norm(self.space, v, conds)?,
            ProductKind::Iterated => products::weak_n_norm(self.space, v, conds)?,
        };
        let p = ConditionedPair::diagonal(v.clone(), conds.to_vec());
        Ok((n.squared, magnitude(self.product, self.space, &p)))
    }

    fn fail(vectors: Vec<Vector<S>>, lhs: S, rhs: S, detail: impl Into<String>) -> Outcome<S> {
        Ok(Some(Counterexample { vectors, lhs, rhs, detail: detail.into() }))
    }

    fn compare(&self, vectors: Vec<Vector<S>>, lhs: (S, f64), rhs: (S, f64), detail: &str) -> Outcome<S> {
        if lhs.0.approx_eq(&rhs.0, self.tol(), lhs.1.max(rhs.1)) {
            Ok(None)
        } else {
            Self::fail(vectors, lhs.0, rhs.0, detail)
        }
    }

    fn random_pair(&self, rng: &mut TrialRng) -> (Vector<S>, Vector<S>, Vec<Vector<S>>) {
        let d = self.space.dim();
        (rng.vector(d), rng.vector(d), rng.vectors(d, self.m))
    }

    /// `(v, conds)` with `v, conds` linearly dependent, either because `v`
    /// lies in the span or because the conditioners themselves are dependent.
    fn dependent_tuple(&self, rng: &mut TrialRng) -> (Vector<S>, Vec<Vector<S>>) {
        let d = self.space.dim();
        let mut conds: Vec<Vector<S>> = rng.vectors(d, self.m);
        if rng.coin() {
            let v = rng.combination(d, &conds);
            (v, conds)
        } else {
            let k = rng.index(self.m);
            let others: Vec<Vector<S>> =
                conds.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, c)| c.clone()).collect();
            conds[k] = rng.combination(d, &others);
            (rng.vector(d), conds)
        }
    }

    fn positivity(&self, rng: &mut TrialRng, via_norm: bool) -> Outcome<S> {
        let value = |v: &Vector<S>, c: &[Vector<S>]| {
            if via_norm {
                self.norm_sq(v, c)
            } else {
                self.eval(v, v, c)
            }
        };
        let mut tuple = rng.independent(self.space, self.m + 1)?;
        let conds = tuple.split_off(1);
        let v = tuple.pop().expect("one vector left");
        let (val, scale) = value(&v, &conds)?;
        if !val.is_positive() || val.is_negligible(self.tol(), scale) {
            let mut vs = vec![v];
            vs.extend(conds);
            return Self::fail(vs, val, S::zero(), "independent tuple without positive value");
        }
        let (w, dep) = self.dependent_tuple(rng);
        let (val, scale) = value(&w, &dep)?;
        if !val.is_negligible(self.tol(), scale) {
            let mut vs = vec![w];
            vs.extend(dep);
            return Self::fail(vs, val, S::zero(), "dependent tuple with nonzero value");
        }
        Ok(None)
    }

    /// Compares `(v1,v1|v2,…,vn)` with every permutation. Transpositions of
    /// `v1` with a conditioner come first, starting from the last one.
    fn permutation_check(&self, tuple: Vec<Vector<S>>, rng: &mut TrialRng) -> Outcome<S> {
        let n = tuple.len();
        let base = self.eval(&tuple[0], &tuple[0], &tuple[1..])?;
        let mut perms: Vec<Vec<usize>> = (1..n)
            .rev()
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(0, k);
                p
            })
            .collect();
        if n <= 5 {
            let rest: Vec<Vec<usize>> = all_permutations(n).into_iter().filter(|p| !perms.contains(p)).collect();
            perms.extend(rest);
        } else {
            for _ in 0..20 {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.index(i + 1));
                }
                perms.push(p);
            }
        }
        for perm in perms {
            let t: Vec<Vector<S>> = perm.iter().map(|&i| tuple[i].clone()).collect();
            let other = self.eval(&t[0], &t[0], &t[1..])?;
            if let Some(c) = self.compare(tuple.clone(), base.clone(), other, &format!("permutation {perm:?}"))? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn trial(&self, axiom: Axiom, rng: &mut TrialRng) -> Outcome<S> {
        let d = self.space.dim();
        let with = |first: Vec<Vector<S>>, conds: &[Vector<S>]| {
            let mut v = first;
            v.extend_from_slice(conds);
            v
        };
        match axiom {
            Axiom::I1 | Axiom::P1 => self.positivity(rng, false),
            Axiom::C1 => self.positivity(rng, true),
            Axiom::I2 => {
                let tuple = rng.independent(self.space, self.m + 1)?;
                self.permutation_check(tuple, rng)
            }
            Axiom::I3 | Axiom::P3 => {
                let (x, y, c) = self.random_pair(rng);
                let l = self.eval(&x, &y, &c)?;
                let r = self.eval(&y, &x, &c)?;
                self.compare(with(vec![x, y], &c), l, r, "swapped arguments")
            }
            Axiom::I4 | Axiom::P4 => {
                let (x, y, c) = self.random_pair(rng);
                let alpha: S = rng.rational();
                let l = self.eval(&x.scaled(&alpha), &y, &c)?;
                let (r, s) = self.eval(&x, &y, &c)?;
                let scale = s * alpha.to_f64().abs();
                self.compare(with(vec![x, y], &c), l, (alpha.clone() * r, scale), &format!("alpha = {alpha}"))
            }
            Axiom::I5 | Axiom::P5 => {
                let (x, y, c) = self.random_pair(rng);
                let x2: Vector<S> = rng.vector(d);
                let l = self.eval(&(&x + &x2), &y, &c)?;
                let (a, sa) = self.eval(&x, &y, &c)?;
                let (b, sb) = self.eval(&x2, &y, &c)?;
                self.compare(with(vec![x, x2, y], &c), l, (a + b, sa + sb), "sum in first argument")
            }
            Axiom::I6 => {
                let (v, conds) = self.dependent_tuple(rng);
                let w: Vector<S> = rng.vector(d);
                let l = self.eval(&v, &w, &conds)?;
                self.compare(with(vec![v, w], &conds), l, (S::zero(), 0.0), "dependent first argument")
            }
            Axiom::P2 | Axiom::C2 => {
                let (x, _, c) = self.random_pair(rng);
                let mut swapped = c.clone();
                let head = std::mem::replace(&mut swapped[0], x.clone());
                let (l, r) = if axiom == Axiom::P2 {
                    (self.eval(&x, &x, &c)?, self.eval(&head, &head, &swapped)?)
                } else {
                    (self.norm_sq(&x, &c)?, self.norm_sq(&head, &swapped)?)
                };
                self.compare(with(vec![x], &c), l, r, "x interchanged with the first conditioner")
            }
            Axiom::C3 => {
                let (x, _, c) = self.random_pair(rng);
                let alpha: S = rng.rational();
                let (l, sl) = self.norm_sq(&x.scaled(&alpha), &c)?;
                let (r, sr) = self.norm_sq(&x, &c)?;
                let a2 = alpha.clone() * alpha.clone();
                self.compare(with(vec![x], &c), (l, sl), (a2 * r, sr * alpha.to_f64().powi(2)), &format!("alpha = {alpha}"))
            }
            Axiom::C4 => {
                let (x, y, c) = self.random_pair(rng);
                let (s, _) = self.norm_sq(&(&x + &y), &c)?;
                let (a, _) = self.norm_sq(&x, &c)?;
                let (b, _) = self.norm_sq(&y, &c)?;
                if sqrt_sum_dominates(&s, &a, &b, self.tol()) {
                    Ok(None)
                } else {
                    Self::fail(with(vec![x, y], &c), s, a + b, "‖x+y‖² against ‖x‖² + ‖y‖² (roots compared)")
                }
            }
        }
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn iterated_product_is_a_weak_n_inner_product() {
        let s = InnerSpace::<Exact>::euclidean(4);
        for axiom in [Axiom::P1, Axiom::P2, Axiom::P3, Axiom::P4, Axiom::P5, Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C4] {
            let r = axiom_check(&s, axiom, ProductKind::Iterated, 3, 20, 11).unwrap();
            assert!(r.passed(), "{axiom}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn standard_product_satisfies_every_n_inner_axiom() {
        let s = InnerSpace::<Exact>::euclidean(4);
        for axiom in [Axiom::I1, Axiom::I2, Axiom::I3, Axiom::I4, Axiom::I5, Axiom::I6] {
            let r = axiom_check(&s, axiom, ProductKind::Standard, 3, 15, 5).unwrap();
            assert!(r.passed(), "{axiom}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn permutation_symmetry_fails_for_iterated_product_with_pinned_witness() {
        let s = InnerSpace::<Exact>::euclidean(3);
        let r = axiom_check(&s, Axiom::I2, ProductKind::Iterated, 3, 5, 0).unwrap();
        assert!(!r.passed());
        let c = r.counterexample.unwrap();
        assert_eq!(c.vectors, symmetry_counterexample::<Exact>(3).to_vec());
        assert_eq!((c.lhs, c.rhs), (Exact::from_i64(9), Exact::from_i64(1)));
        assert!(!Axiom::I2.expected_to_hold(ProductKind::Iterated, 3));
        // n = 2: the iterated and standard products coincide
        let r2 = axiom_check(&s, Axiom::I2, ProductKind::Iterated, 2, 10, 0).unwrap();
        assert!(r2.passed());
    }

    #[test]
    fn dependent_input_gives_zero() {
        let s = InnerSpace::<Exact>::euclidean(3);
        let [x, u, _] = symmetry_counterexample::<Exact>(3);
        let dep = ConditionedPair::diagonal(x.scaled(&Exact::from_i64(3)), vec![u, x]);
        assert_eq!(products::iterated_2_inner(&s, &dep).unwrap(), Exact::from_i64(0));
    }

    #[test]
    fn float_mode_checks_pass() {
        let s = InnerSpace::<f64>::euclidean(5);
        for axiom in Axiom::ALL {
            let product = axiom.default_product();
            let r = axiom_check(&s, axiom, product, 4, 10, 3).unwrap();
            assert_eq!(r.passed(), axiom.expected_to_hold(product, 4), "{axiom}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn config_errors() {
        let s = InnerSpace::<Exact>::euclidean(2);
        assert!(axiom_check(&s, Axiom::P1, ProductKind::Iterated, 3, 1, 0).is_err());
        assert!(axiom_check(&s, Axiom::P1, ProductKind::Iterated, 2, 0, 0).is_err());
        assert!(axiom_check(&s, Axiom::P1, ProductKind::Iterated, 1, 1, 0).is_err());
        assert_eq!("c4".parse::<Axiom>().unwrap(), Axiom::C4);
    }
}
