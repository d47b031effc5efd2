//! Dodgson-type determinant identities as checkable residuals, and a
//! condensation determinant that uses them constructively.
//!
//! Indices are 0-based throughout.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{InnerSpace, SquareMatrix};
use crate::products::{standard_or_inner, ConditionedPair};
use crate::scalar::{self, Mode, Scalar};

/// Row and column indices of a minor, each strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        MinorSpec { rows, cols }
    }

    pub fn principal(idx: Vec<usize>) -> Self {
        MinorSpec { rows: idx.clone(), cols: idx }
    }

    pub fn validate(&self, order: usize) -> Result<()> {
        if self.rows.len() != self.cols.len() {
            return Err(Error::InvalidMinor(format!(
                "{} rows but {} columns",
                self.rows.len(),
                self.cols.len()
            )));
        }
        if self.rows.is_empty() {
            return Err(Error::InvalidMinor("no rows selected".into()));
        }
        for (what, idx) in [("row", &self.rows), ("column", &self.cols)] {
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMinor(format!("{what} indices are not strictly increasing")));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= order) {
                return Err(Error::InvalidMinor(format!(
                    "{what} index {bad} out of range for order {order}"
                )));
            }
        }
        Ok(())
    }
}

pub fn minor<S: Scalar>(m: &SquareMatrix<S>, spec: &MinorSpec) -> Result<S> {
    spec.validate(m.order())?;
    Ok(ordered_minor(m, &spec.rows, &spec.cols))
}

/// Determinant of the submatrix taken in the given (not necessarily sorted)
/// row and column order. Reordering multiplies by the permutation signs.
pub(crate) fn ordered_minor<S: Scalar>(m: &SquareMatrix<S>, rows: &[usize], cols: &[usize]) -> S {
    if rows.is_empty() {
        return S::one();
    }
    let (Some((r, rs)), Some((c, cs))) = (sort_with_sign(rows), sort_with_sign(cols)) else {
        return S::zero();
    };
    let det = m.select(&r, &c).determinant();
    if rs * cs < 0 {
        -det
    } else {
        det
    }
}

/// Sorted copy of `idx` and the sign of the sorting permutation; `None` on
/// a repeated index.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by_key(|&i| idx[i]);
    let sorted: Vec<usize> = order.iter().map(|&i| idx[i]).collect();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, permutation_sign(&order)))
}

/// Sign of a permutation of `0..len`, by counting cycles.
pub(crate) fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn det2<S: Scalar>(a: S, b: S, c: S, d: S) -> S {
    a * d - b * c
}

fn require_order<S: Scalar>(m: &SquareMatrix<S>, min: usize) -> Result<usize> {
    let n = m.order();
    if n < min {
        return Err(Error::InvalidMatrix(format!("order {n} is below the required {min}")));
    }
    Ok(n)
}

/// `|A₍₀..n-3₎| · |A| − det[[|lead+r|, …], …]` where `lead` is the leading
/// `(n−2)` block and the 2×2 determinant borders it with the last two rows
/// and columns. Always zero.
pub fn leading_block_residual<S: Scalar>(m: &SquareMatrix<S>) -> Result<S> {
    let n = require_order(m, 3)?;
    let lead: Vec<usize> = (0..n - 2).collect();
    let bordered = |r: usize, c: usize| {
        let rows: Vec<usize> = lead.iter().copied().chain([r]).collect();
        let cols: Vec<usize> = lead.iter().copied().chain([c]).collect();
        ordered_minor(m, &rows, &cols)
    };
    let lhs = ordered_minor(m, &lead, &lead) * m.determinant();
    let rhs = det2(
        bordered(n - 2, n - 2),
        bordered(n - 2, n - 1),
        bordered(n - 1, n - 2),
        bordered(n - 1, n - 1),
    );
    Ok(lhs - rhs)
}

/// `|A interior| · |A| − det[[NW, NE], [SW, SE]]` where the four corners are
/// the connected `(n−1)`-minors and the interior drops the first and last
/// rows and columns. For order 3 the interior is the centre entry.
pub fn condensation_residual<S: Scalar>(m: &SquareMatrix<S>) -> Result<S> {
    let n = require_order(m, 3)?;
    let interior: Vec<usize> = (1..n - 1).collect();
    let head: Vec<usize> = (0..n - 1).collect();
    let tail: Vec<usize> = (1..n).collect();
    let lhs = ordered_minor(m, &interior, &interior) * m.determinant();
    let rhs = det2(
        ordered_minor(m, &head, &head),
        ordered_minor(m, &head, &tail),
        ordered_minor(m, &tail, &head),
        ordered_minor(m, &tail, &tail),
    );
    Ok(lhs - rhs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct Condensation<S> {
    #[serde(serialize_with = "scalar::serialize")]
    pub value: S,
    /// Cyclic row rotations applied before condensation went through.
    pub rotations: usize,
    /// Condensation hit zero divisors for every rotation and the core
    /// determinant was used instead.
    pub fell_back: bool,
    /// Float condensation divides by entries that may be tiny.
    pub fragile: bool,
}

/// Dodgson condensation. On a zero interior divisor the rows are rotated
/// cyclically (sign `(−1)^{n−1}` per rotation) and condensation retried;
/// after `n` failed rotations the core determinant is used.
pub fn condense<S: Scalar>(m: &SquareMatrix<S>) -> Condensation<S> {
    let n = m.order();
    let fragile = S::MODE == Mode::Float;
    let mut rows = m.rows();
    for rotations in 0..n {
        if let Some(v) = try_condense(rows.clone()) {
            let value = if rotations * (n - 1) % 2 == 1 { -v } else { v };
            return Condensation { value, rotations, fell_back: false, fragile };
        }
        rows.rotate_left(1);
    }
    Condensation { value: m.determinant(), rotations: n, fell_back: true, fragile }
}

pub fn condensation_determinant<S: Scalar>(m: &SquareMatrix<S>) -> S {
    condense(m).value
}

fn try_condense<S: Scalar>(mut cur: Vec<Vec<S>>) -> Option<S> {
    let mut prev: Option<Vec<Vec<S>>> = None;
    while cur.len() > 1 {
        let k = cur.len();
        let mut next = Vec::with_capacity(k - 1);
        for i in 0..k - 1 {
            let mut row = Vec::with_capacity(k - 1);
            for j in 0..k - 1 {
                let d = det2(
                    cur[i][j].clone(),
                    cur[i][j + 1].clone(),
                    cur[i + 1][j].clone(),
                    cur[i + 1][j + 1].clone(),
                );
                row.push(match &prev {
                    None => d,
                    Some(p) => {
                        let div = &p[i + 1][j + 1];
                        if div.is_zero() {
                            return None;
                        }
                        d / div.clone()
                    }
                });
            }
            next.push(row);
        }
        prev = Some(std::mem::replace(&mut cur, next));
    }
    cur.pop().and_then(|mut r| r.pop())
}

/// Residual of the step that links the two representations: for
/// conditioners `[x_{n+1}, x_n, …, x_2]`,
///
/// `det[[⟨x,y|R⟩, ⟨x,x_{n+1}|R⟩], [⟨x_{n+1},y|R⟩, ⟨x_{n+1},x_{n+1}|R⟩]]
///   − ⟨x,y|x_{n+1},R⟩ · ⟨x_n,x_n|x_{n−1},…,x_2⟩` with `R = x_n, …, x_2`.
pub fn representation_bridge_residual<S: Scalar>(
    space: &InnerSpace<S>,
    p: &ConditionedPair<S>,
) -> Result<S> {
    if p.conditioners.len() < 2 {
        return Err(Error::InvalidConfig("the bridge identity needs at least two conditioners".into()));
    }
    let (head, rest) = p.conditioners.split_first().expect("nonempty");
    let std = |a, b, c: &[_]| standard_or_inner(space, a, b, c);
    let lhs = det2(
        std(&p.x, &p.y, rest)?,
        std(&p.x, head, rest)?,
        std(head, &p.y, rest)?,
        std(head, head, rest)?,
    );
    let rhs = std(&p.x, &p.y, &p.conditioners)? * std(&rest[0], &rest[0], &rest[1..])?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;
    use crate::scalar::Exact;

    fn m(rows: &[&[i64]]) -> SquareMatrix<Exact> {
        SquareMatrix::from_i64_rows(rows).unwrap()
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    #[test]
    fn minor_examples() {
        let g = m(&[&[9, 5, 2], &[5, 3, 1], &[2, 1, 1]]);
        assert_eq!(minor(&g, &MinorSpec::principal(vec![0])).unwrap(), q(9));
        assert_eq!(minor(&g, &MinorSpec::principal(vec![0, 1, 2])).unwrap(), g.determinant());
        let a = m(&[&[5, -1], &[-1, 2]]);
        assert_eq!(minor(&a, &MinorSpec::principal(vec![0, 1])).unwrap(), q(9));
    }

    #[test]
    fn minor_rejects_bad_specs() {
        let g = m(&[&[1, 2], &[3, 4]]);
        for spec in [
            MinorSpec::new(vec![1, 0], vec![0, 1]),
            MinorSpec::new(vec![0], vec![0, 1]),
            MinorSpec::new(vec![0, 2], vec![0, 1]),
            MinorSpec::new(vec![], vec![]),
            MinorSpec::new(vec![0, 0], vec![0, 1]),
        ] {
            assert!(matches!(minor(&g, &spec), Err(Error::InvalidMinor(_))), "{spec:?}");
        }
    }

    #[test]
    fn ordered_minor_tracks_permutation_sign() {
        let a = m(&[&[2, 7, 1, 8], &[2, 8, 1, 8], &[2, 8, 4, 5], &[9, 0, 4, 5]]);
        let sorted = ordered_minor(&a, &[0, 1, 3], &[0, 2, 3]);
        let swapped = ordered_minor(&a, &[1, 0, 3], &[0, 2, 3]);
        assert_eq!(swapped, -sorted.clone());
        // a cyclic shift of n rows carries sign (−1)^{n−1}
        let full: Vec<usize> = (0..4).collect();
        let shifted = vec![1, 2, 3, 0];
        assert_eq!(permutation_sign(&shifted), -1);
        assert_eq!(ordered_minor(&a, &shifted, &full), -a.determinant());
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn residuals_on_small_matrices() {
        let a = m(&[&[3, -1, 4], &[1, 5, -9], &[2, 6, 5]]);
        assert_eq!(leading_block_residual(&a).unwrap(), q(0));
        assert_eq!(condensation_residual(&a).unwrap(), q(0));
        // zero centre: the identity holds even though condensation must divide by it
        let z = m(&[&[1, 2, 3], &[4, 0, 6], &[7, 8, 9]]);
        assert_eq!(condensation_residual(&z).unwrap(), q(0));
        assert_eq!(leading_block_residual(&z).unwrap(), q(0));
        assert!(leading_block_residual(&m(&[&[1, 2], &[3, 4]])).is_err());
    }

    #[test]
    fn condensation_examples() {
        assert_eq!(condensation_determinant(&m(&[&[5, -1], &[-1, 2]])), q(9));
        assert_eq!(condensation_determinant(&SquareMatrix::<Exact>::identity(6)), q(1));
        assert_eq!(condensation_determinant(&m(&[&[4]])), q(4));
        let z = m(&[&[1, 2, 3], &[4, 0, 6], &[7, 8, 9]]);
        let c = condense(&z);
        assert_eq!(c.value, z.determinant());
        assert!(c.rotations > 0);
        assert!(!c.fragile);
    }

    #[test]
    fn condensation_falls_back_when_rotation_cannot_help() {
        // Column of zeros in the interior position for every rotation.
        let a = m(&[&[1, 0, 2], &[3, 0, 4], &[5, 0, 6]]);
        let c = condense(&a);
        assert_eq!(c.value, q(0));
        assert!(c.fell_back);
        let b = m(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(condensation_determinant(&b), b.determinant());
    }

    #[test]
    fn bridge_on_counterexample_vectors() {
        let s = InnerSpace::euclidean(4);
        let v = |c: &[i64]| Vector::<Exact>::from_i64s(c);
        let (x, u, w, extra) = (v(&[1, 0, 0, 0]), v(&[1, 1, 1, 0]), v(&[2, 1, 2, 0]), v(&[3, -1, 2, 5]));
        let p = ConditionedPair::new(x.clone(), u.clone(), vec![extra, u.clone(), w.clone()]);
        assert_eq!(representation_bridge_residual(&s, &p).unwrap(), q(0));
        let zero = ConditionedPair::new(Vector::zeros(4), u.clone(), vec![x, w]);
        assert_eq!(representation_bridge_residual(&s, &zero).unwrap(), q(0));
        assert!(representation_bridge_residual(&s, &ConditionedPair::new(u.clone(), u.clone(), vec![u])).is_err());
    }
}
