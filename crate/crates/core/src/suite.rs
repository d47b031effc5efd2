//! Seeded randomized suites over every identity and inequality in the crate.
//!
//! Each check draws trial `t` from the ChaCha8 stream `(seed ⊕ tag, t)`,
//! where `tag` is derived from the check's name, so reports are identical
//! across runs and thread counts.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::applications::{
    chebyshev, compare_fits, gram_form_four, gram_form_three, gram_swap_residual, gram_wrt_residual, lupu_gap,
    n_chebyshev, n_chebyshev_gap, Dataset, IdentityCheck,
};
use crate::axioms::{axiom_check, Axiom, CheckReport};
use crate::dodgson::{condensation_determinant, condensation_residual, leading_block_residual, representation_bridge_residual};
use crate::error::{Error, Result};
use crate::linalg::{hadamard_bound, InnerSpace, SquareMatrix, Vector};
use crate::products::{
    iterated_2_inner, magnitude, representation_report, schwarz_gap, standard_n_inner, standard_n_norm,
    ConditionedPair, ProductKind,
};
use crate::rng::TrialRng;
use crate::scalar::{pow, Exact, Mode, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Axioms,
    Schwarz,
    Representation,
    Scaling,
    Dodgson,
    Gram,
    Chebyshev,
    Regression,
    All,
}

impl SuiteKind {
    pub const EACH: [SuiteKind; 8] = [
        SuiteKind::Axioms,
        SuiteKind::Schwarz,
        SuiteKind::Representation,
        SuiteKind::Scaling,
        SuiteKind::Dodgson,
        SuiteKind::Gram,
        SuiteKind::Chebyshev,
        SuiteKind::Regression,
    ];

    /// Whether the suite draws n-tuples (and so constrains `n` and `dim`).
    fn uses_order(self) -> bool {
        !matches!(self, SuiteKind::Dodgson | SuiteKind::Gram | SuiteKind::Regression)
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

impl FromStr for SuiteKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        SuiteKind::EACH
            .into_iter()
            .chain([SuiteKind::All])
            .find(|k| k.to_string() == lower)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    pub dim: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { suite: SuiteKind::All, dim: 4, n: 3, trials: 50, seed: 0, mode: Mode::Exact, tol: crate::DEFAULT_TOL }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad(format!("tolerance {} is not a nonnegative number", self.tol));
        }
        if self.dim == 0 {
            return bad("dim must be at least 1".into());
        }
        let needs_order = self.suite == SuiteKind::All || self.suite.uses_order();
        if needs_order {
            if !(2..=8).contains(&self.n) {
                return bad(format!("n = {} is outside 2..=8", self.n));
            }
            if self.dim < self.n {
                return bad(format!("dim = {} is below n = {}", self.dim, self.n));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: SuiteKind,
    pub name: String,
    /// `false` for checks that are supposed to find a violation.
    pub expected_pass: bool,
    pub trials: usize,
    pub failures: usize,
    pub as_expected: bool,
    /// From the failing trial with the smallest index.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckOutcome>,
    pub checks_as_expected: usize,
    pub ok: bool,
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let checks = match config.mode {
        Mode::Exact => Runner::<Exact>::new(config).run()?,
        Mode::Float => Runner::<f64>::new(config).run()?,
    };
    let checks_as_expected = checks.iter().filter(|c| c.as_expected).count();
    Ok(SuiteReport { config: config.clone(), ok: checks_as_expected == checks.len(), checks, checks_as_expected })
}

/// FNV-1a, to give every check its own family of streams.
fn tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

type TrialOutcome = Result<Option<Value>>;

fn mismatch<S: Scalar>(vectors: &[Vector<S>], lhs: &S, rhs: &S) -> Value {
    json!({ "vectors": vectors, "lhs": lhs.to_json(), "rhs": rhs.to_json() })
}

fn identity<S: Scalar>(check: IdentityCheck<S>, tol: f64, vectors: &[Vector<S>]) -> TrialOutcome {
    Ok((!check.holds(tol)).then(|| mismatch(vectors, &check.lhs, &check.rhs)))
}

struct Runner<'a, S> {
    cfg: &'a SuiteConfig,
    space: InnerSpace<S>,
    out: Vec<CheckOutcome>,
}

impl<'a, S: Scalar> Runner<'a, S> {
    fn new(cfg: &'a SuiteConfig) -> Self {
        Runner { cfg, space: InnerSpace::euclidean(cfg.dim).with_tol(cfg.tol), out: Vec::new() }
    }

    fn tol(&self) -> f64 {
        self.cfg.tol
    }

    fn dim(&self) -> usize {
        self.cfg.dim
    }

    /// Number of conditioners.
    fn m(&self) -> usize {
        self.cfg.n - 1
    }

    fn run(mut self) -> Result<Vec<CheckOutcome>> {
        let kinds: Vec<SuiteKind> =
            if self.cfg.suite == SuiteKind::All { SuiteKind::EACH.to_vec() } else { vec![self.cfg.suite] };
        for kind in kinds {
            match kind {
                SuiteKind::Axioms => self.axioms()?,
                SuiteKind::Schwarz => self.schwarz(),
                SuiteKind::Representation => self.representation(),
                SuiteKind::Scaling => self.scaling(),
                SuiteKind::Dodgson => self.dodgson(),
                SuiteKind::Gram => self.gram(),
                SuiteKind::Chebyshev => self.chebyshev(),
                SuiteKind::Regression => self.regression(),
                SuiteKind::All => unreachable!("expanded above"),
            }
        }
        Ok(self.out)
    }

    fn check<F>(&mut self, suite: SuiteKind, name: &str, trials: usize, f: F)
    where
        F: Fn(&Self, &mut TrialRng, usize) -> TrialOutcome + Sync,
        S: Sync,
    {
        let stream = self.cfg.seed ^ tag(name);
        let results: Vec<TrialOutcome> = (0..trials)
            .into_par_iter()
            .map(|t| f(self, &mut TrialRng::new(stream, t as u64), t))
            .collect();
        let mut failures = 0;
        let mut counterexample = None;
        for r in results {
            let failed = match r {
                Ok(None) => None,
                Ok(Some(v)) => Some(v),
                Err(e) => Some(json!({ "error": e.to_string() })),
            };
            if let Some(v) = failed {
                failures += 1;
                counterexample.get_or_insert(v);
            }
        }
        self.out.push(CheckOutcome {
            suite,
            name: name.to_string(),
            expected_pass: true,
            trials,
            failures,
            as_expected: failures == 0,
            counterexample,
        });
    }

    fn push_axiom(&mut self, r: CheckReport<S>) -> Result<()> {
        let expected_pass = r.axiom.expected_to_hold(r.product, r.n);
        let counterexample = r.counterexample.as_ref().map(serde_json::to_value).transpose().map_err(|e| {
            Error::Inconsistent(format!("counterexample serialization: {e}"))
        })?;
        let as_expected = if expected_pass { r.passed() } else { r.failures > 0 && counterexample.is_some() };
        self.out.push(CheckOutcome {
            suite: SuiteKind::Axioms,
            name: format!("{} on the {} product: {}", r.axiom, r.product, r.axiom.describe()),
            expected_pass,
            trials: r.trials,
            failures: r.failures,
            as_expected,
            counterexample,
        });
        Ok(())
    }

    fn axioms(&mut self) -> Result<()> {
        let (n, trials, seed) = (self.cfg.n, self.cfg.trials, self.cfg.seed);
        for axiom in Axiom::ALL {
            let r = axiom_check(&self.space, axiom, axiom.default_product(), n, trials, seed)?;
            self.push_axiom(r)?;
        }
        let r = axiom_check(&self.space, Axiom::I2, ProductKind::Iterated, n, trials, seed)?;
        self.push_axiom(r)
    }

    fn pair(&self, rng: &mut TrialRng) -> ConditionedPair<S> {
        let d = self.dim();
        ConditionedPair::new(rng.vector(d), rng.vector(d), rng.vectors(d, self.m()))
    }

    fn iterated_eq(&self, l: &ConditionedPair<S>, lhs: S, rhs: S, scale: f64) -> TrialOutcome {
        let scale = scale.max(magnitude(ProductKind::Iterated, &self.space, l));
        Ok((!lhs.approx_eq(&rhs, self.tol(), scale)).then(|| {
            let mut vs = vec![l.x.clone(), l.y.clone()];
            vs.extend(l.conditioners.iter().cloned());
            mismatch(&vs, &lhs, &rhs)
        }))
    }

    fn schwarz(&mut self) {
        let t = self.cfg.trials;
        self.check(SuiteKind::Schwarz, "Schwarz gap of the iterated product is nonnegative", t, |r, rng, _| {
            schwarz_gap(&r.space, &r.pair(rng)).map(|_| None)
        });
        self.check(SuiteKind::Schwarz, "equality detected when y = μx + span element, μ ≥ 0", t, |r, rng, _| {
            let mut tuple = rng.independent(&r.space, r.cfg.n)?;
            let conds = tuple.split_off(1);
            let x = tuple.pop().expect("x drawn");
            let mu: S = rng.rational::<S>().abs();
            let y = &x.scaled(&mu) + &rng.combination(r.dim(), &conds);
            let p = ConditionedPair::new(x, y, conds);
            let rep = schwarz_gap(&r.space, &p)?;
            let scale = magnitude(ProductKind::Iterated, &r.space, &p).powi(2);
            let found = rep.equality.as_ref().is_some_and(|w| {
                w.mu_nonnegative() && w.mu.approx_eq(&mu, r.tol(), 1.0)
            });
            Ok((!(rep.gap.is_negligible(r.tol(), scale) && found))
                .then(|| json!({ "vectors": [&p.x, &p.y], "gap": rep.gap.to_json(), "mu": mu.to_json() })))
        });
        if self.dim() > self.cfg.n {
            self.check(SuiteKind::Schwarz, "no equality witness and positive gap on independent draws", t, |r, rng, _| {
                let mut vs = rng.independent(&r.space, r.cfg.n + 1)?;
                let conds = vs.split_off(2);
                let p = ConditionedPair::new(vs[0].clone(), vs[1].clone(), conds);
                let rep = schwarz_gap(&r.space, &p)?;
                let scale = (rep.xx.clone() * rep.yy.clone()).to_f64().abs();
                let strict = rep.gap.is_positive() && !rep.gap.is_negligible(r.tol(), scale);
                Ok((!strict || rep.equality.is_some()).then(|| json!({ "vectors": vs, "gap": rep.gap.to_json() })))
            });
        }
    }

    fn representation(&mut self) {
        let t = self.cfg.trials;
        self.check(SuiteKind::Representation, "iterated product equals E_n times the standard product", t, |r, rng, _| {
            representation_report(&r.space, &r.pair(rng)).map(|_| None)
        });
        self.check(SuiteKind::Representation, "standard product is invariant under conditioner permutations", t, |r, rng, _| {
            let p = r.pair(rng);
            let mut shuffled = p.conditioners.clone();
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.index(i + 1));
            }
            let q = p.with_args(p.x.clone(), p.y.clone());
            let q = ConditionedPair { conditioners: shuffled, ..q };
            let (a, b) = (standard_n_inner(&r.space, &p)?, standard_n_inner(&r.space, &q)?);
            let scale = magnitude(ProductKind::Standard, &r.space, &p);
            Ok((!a.approx_eq(&b, r.tol(), scale)).then(|| mismatch(&q.conditioners, &a, &b)))
        });
        if self.m() >= 2 {
            self.check(SuiteKind::Representation, "2×2 determinant of standard products factors through E", t, |r, rng, _| {
                let p = r.pair(rng);
                let res = representation_bridge_residual(&r.space, &p)?;
                let scale = magnitude(ProductKind::Standard, &r.space, &p).powi(2);
                Ok((!res.is_negligible(r.tol(), scale)).then(|| json!({ "residual": res.to_json() })))
            });
        }
    }

    fn scaling(&mut self) {
        let t = self.cfg.trials;
        self.check(SuiteKind::Scaling, "scaling every argument by t scales the iterated product by t^(2^n)", t, |r, rng, _| {
            let p = r.pair(rng);
            let s: S = rng.nonzero_rational();
            let q = ConditionedPair::new(
                p.x.scaled(&s),
                p.y.scaled(&s),
                p.conditioners.iter().map(|c| c.scaled(&s)).collect(),
            );
            let factor = pow(&s, 1 << r.cfg.n);
            let lhs = iterated_2_inner(&r.space, &q)?;
            let rhs = factor.clone() * iterated_2_inner(&r.space, &p)?;
            r.iterated_eq(&q, lhs, rhs, magnitude(ProductKind::Iterated, &r.space, &p) * factor.to_f64().abs())
        });
        self.check(SuiteKind::Scaling, "parallelogram law for the standard n-norm", t, |r, rng, _| {
            let p = r.pair(rng);
            let c = &p.conditioners;
            let nsq = |v: &Vector<S>| standard_n_norm(&r.space, v, c).map(|n| n.squared);
            let lhs = nsq(&(&p.x + &p.y))? + nsq(&(&p.x - &p.y))?;
            let rhs = S::from_i64(2) * (nsq(&p.x)? + nsq(&p.y)?);
            let scale = rhs.to_f64().abs();
            Ok((!lhs.approx_eq(&rhs, r.tol(), scale)).then(|| mismatch(&[p.x.clone(), p.y.clone()], &lhs, &rhs)))
        });
        self.check(SuiteKind::Scaling, "polarization identity for the standard n-inner product", t, |r, rng, _| {
            let p = r.pair(rng);
            let c = &p.conditioners;
            let nsq = |v: &Vector<S>| standard_n_norm(&r.space, v, c).map(|n| n.squared);
            let (plus, minus) = (nsq(&(&p.x + &p.y))?, nsq(&(&p.x - &p.y))?);
            let scale = plus.to_f64().abs() + minus.to_f64().abs();
            let lhs = plus - minus;
            let rhs = S::from_i64(4) * standard_n_inner(&r.space, &p)?;
            Ok((!lhs.approx_eq(&rhs, r.tol(), scale)).then(|| mismatch(&[p.x.clone(), p.y.clone()], &lhs, &rhs)))
        });
        self.check(SuiteKind::Scaling, "iterated product vanishes when x lies in the conditioner span", t, |r, rng, _| {
            let p = r.pair(rng);
            let x = rng.combination(r.dim(), &p.conditioners);
            let q = p.with_args(x, p.y.clone());
            let v = iterated_2_inner(&r.space, &q)?;
            r.iterated_eq(&q, v, S::zero(), 0.0)
        });
        self.check(SuiteKind::Scaling, "iterated product is unchanged by translations along the span", t, |r, rng, _| {
            let p = r.pair(rng);
            let x = &p.x + &rng.combination(r.dim(), &p.conditioners);
            let y = &p.y + &rng.combination(r.dim(), &p.conditioners);
            let q = p.with_args(x, y);
            let (a, b) = (iterated_2_inner(&r.space, &q)?, iterated_2_inner(&r.space, &p)?);
            r.iterated_eq(&q, a, b, magnitude(ProductKind::Iterated, &r.space, &p))
        });
    }

    /// Matrix for trial `t`: plain random, a zero interior entry, a zero
    /// interior row segment (so the interior minor vanishes), or entries in
    /// {−1, 0, 1}.
    fn dodgson_matrix(rng: &mut TrialRng, order: usize, t: usize) -> SquareMatrix<S> {
        let mut rows = rng.matrix::<S>(order).rows();
        let inner = 1..order - 1;
        match t % 4 {
            1 => {
                let (i, j) = (1 + rng.index(order - 2), 1 + rng.index(order - 2));
                rows[i][j] = S::zero();
            }
            2 => {
                let i = 1 + rng.index(order - 2);
                for j in inner {
                    rows[i][j] = S::zero();
                }
            }
            3 => {
                for row in rows.iter_mut() {
                    for e in row.iter_mut() {
                        *e = S::from_i64(rng.index(3) as i64 - 1);
                    }
                }
            }
            _ => {}
        }
        SquareMatrix::from_rows(rows).expect("square by construction")
    }

    fn dodgson(&mut self) {
        let t = self.cfg.trials;
        for order in 3..=self.dim().max(3) {
            let checks: [(&str, fn(&SquareMatrix<S>) -> Result<(S, S)>); 3] = [
                ("leading-block Dodgson identity", |m| Ok((leading_block_residual(m)?, S::zero()))),
                ("condensation Dodgson identity", |m| Ok((condensation_residual(m)?, S::zero()))),
                ("condensation determinant equals the core determinant", |m| {
                    Ok((condensation_determinant(m), m.determinant()))
                }),
            ];
            for (label, f) in checks {
                let name = format!("{label}, order {order}");
                self.check(SuiteKind::Dodgson, &name, t, |r, rng, i| {
                    let m = Self::dodgson_matrix(rng, order, i);
                    let (a, b) = f(&m)?;
                    let h = hadamard_bound(&m);
                    Ok((!a.approx_eq(&b, r.tol(), h * h)).then(|| {
                        json!({ "matrix": &m, "lhs": a.to_json(), "rhs": b.to_json() })
                    }))
                });
            }
        }
    }

    fn gram(&mut self) {
        let t = self.cfg.trials;
        let d = self.dim();
        if d >= 3 {
            self.check(SuiteKind::Gram, "Lupu gap on the worked counterexample is 1", 1, |r, _, _| {
                let [x, u, v] = crate::axioms::symmetry_counterexample::<S>(r.dim());
                let g = lupu_gap(&r.space, &x, &u, &v)?;
                Ok((!g.approx_eq(&S::one(), r.tol(), 1.0)).then(|| mismatch(&[x, u, v], &g, &S::one())))
            });
        }
        self.check(SuiteKind::Gram, "Lupu gap is nonnegative and equals (x,x|w,z)_*/‖z‖²", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(d, 3);
            let g = lupu_gap(&r.space, &vs[0], &vs[1], &vs[2])?;
            let scale = vs.iter().map(|v| r.space.inner(v, v).to_f64()).product::<f64>();
            Ok((g.is_negative() && !g.is_negligible(r.tol(), scale)).then(|| mismatch(&vs, &g, &S::zero())))
        });
        self.check(SuiteKind::Gram, "swapping the two conditioners rescales by ‖z‖²/‖w‖²", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(d, 3);
            identity(gram_swap_residual(&r.space, &vs[0], &vs[1], &vs[2])?, r.tol(), &vs)
        });
        self.check(SuiteKind::Gram, "(x,x|w,z)_* = Γ(x,w,z)·‖z‖²", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(d, 3);
            identity(gram_form_three(&r.space, &vs[0], &vs[1], &vs[2])?, r.tol(), &vs)
        });
        self.check(SuiteKind::Gram, "(x,x|v,w,z)_* = Γ(x,v,w,z)·‖w|z‖²·‖z‖⁴", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(d, 4);
            identity(gram_form_four(&r.space, &vs[0], &vs[1], &vs[2], &vs[3])?, r.tol(), &vs)
        });
        self.check(SuiteKind::Gram, "Γ(x,w,v|z) = Γ(x,w,v,z)·‖z‖⁴", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(d, 4);
            identity(gram_wrt_residual(&r.space, &vs[0], &vs[1], &vs[2], &vs[3])?, r.tol(), &vs)
        });
    }

    fn chebyshev(&mut self) {
        let t = self.cfg.trials;
        self.check(SuiteKind::Chebyshev, "Chebyshev functional equals the 2-inner product (x,y|z)_*", t, |r, rng, _| {
            let vs: Vec<Vector<S>> = rng.vectors(r.dim(), 3);
            chebyshev(&r.space, &vs[0], &vs[1], &vs[2]).map(|_| None)
        });
        self.check(SuiteKind::Chebyshev, "n-Chebyshev functional equals the iterated product", t, |r, rng, _| {
            let conds = rng.independent(&r.space, r.m())?;
            let p = ConditionedPair::new(rng.vector(r.dim()), rng.vector(r.dim()), conds);
            n_chebyshev(&r.space, &p).map(|_| None)
        });
        self.check(SuiteKind::Chebyshev, "n-Chebyshev Schwarz gap is nonnegative", t, |r, rng, _| {
            let conds = rng.independent(&r.space, r.m())?;
            let p = ConditionedPair::new(rng.vector(r.dim()), rng.vector(r.dim()), conds);
            n_chebyshev_gap(&r.space, &p).map(|_| None)
        });
    }

    fn regression(&mut self) {
        const SAMPLES: usize = 8;
        let t = self.cfg.trials;
        self.check(SuiteKind::Regression, "all methods recover z = 2x + 3y + 5 with zero residual", 1, |r, rng, _| {
            let x: Vec<S> = rng.vector::<S>(SAMPLES).into_coords();
            let y: Vec<S> = rng.vector::<S>(SAMPLES).into_coords();
            let z = x
                .iter()
                .zip(&y)
                .map(|(a, b)| S::from_i64(2) * a.clone() + S::from_i64(3) * b.clone() + S::from_i64(5))
                .collect();
            let cmp = compare_fits(&Dataset::new(x, y, z)?, r.tol())?;
            let target = [2, 3, 5].map(S::from_i64);
            let bad = cmp.fits.iter().any(|f| {
                f.coefficients().iter().zip(&target).any(|(c, e)| !c.approx_eq(e, r.tol(), 5.0))
                    || !f.residual_sum_squares.is_negligible(r.tol(), 1.0)
            });
            Ok(bad.then(|| serde_json::to_value(&cmp).unwrap_or(Value::Null)))
        });
        self.check(SuiteKind::Regression, "vector method, statistics form and normal equations agree", t, |r, rng, _| {
            let cols: Vec<Vec<S>> = (0..3).map(|_| rng.vector::<S>(SAMPLES).into_coords()).collect();
            let [x, y, z]: [Vec<S>; 3] = cols.try_into().expect("three columns");
            let cmp = compare_fits(&Dataset::new(x, y, z)?, r.tol())?;
            Ok((!cmp.agree).then(|| serde_json::to_value(&cmp).unwrap_or(Value::Null)))
        });
        self.check(SuiteKind::Regression, "perturbing a fitted coefficient never lowers the residual", t, |r, rng, _| {
            let cols: Vec<Vec<S>> = (0..3).map(|_| rng.vector::<S>(SAMPLES).into_coords()).collect();
            let [x, y, z]: [Vec<S>; 3] = cols.try_into().expect("three columns");
            let ds = Dataset::new(x, y, z)?;
            let fit = crate::applications::fit_normal_equations(&ds, r.tol())?;
            let delta = S::from_ratio(1, 1000);
            let base = fit.residual_sum_squares.clone();
            for k in 0..3 {
                for sign in [-1, 1] {
                    let mut c = [fit.a.clone(), fit.b.clone(), fit.c.clone()];
                    c[k] = c[k].clone() + S::from_i64(sign) * delta.clone();
                    let rss = ds.residual_sum_squares(&c[0], &c[1], &c[2]);
                    if rss < base && !(base.clone() - rss.clone()).is_negligible(r.tol(), base.to_f64()) {
                        return Ok(Some(json!({ "coefficient": k, "sign": sign, "rss": rss.to_json(), "fitted_rss": base.to_json() })));
                    }
                }
            }
            Ok(None)
        });
    }
}
