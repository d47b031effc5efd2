use super::sq;
use crate::error::{Error, Result};
use crate::linalg::{InnerSpace, Vector};
use crate::products::{iterated_2_inner, magnitude, ConditionedPair, ProductKind};
use crate::scalar::Scalar;

fn disagree<S: Scalar>(what: &str, a: &S, b: &S) -> Error {
    Error::Inconsistent(format!("{what} is {a} but the iterated product is {b}"))
}

/// `T_z(x,y) = ‖z‖²⟨x,y⟩ − ⟨x,z⟩⟨y,z⟩`, equal to `(x,y|z)_*`.
pub fn chebyshev<S: Scalar>(space: &InnerSpace<S>, x: &Vector<S>, y: &Vector<S>, z: &Vector<S>) -> Result<S> {
    space.check_all([x, y, z])?;
    let t = space.inner(z, z) * space.inner(x, y) - space.inner(x, z) * space.inner(y, z);
    let via = iterated_2_inner(space, &ConditionedPair::new(x.clone(), y.clone(), vec![z.clone()]))?;
    let scale = sq(space, z) * (sq(space, x) * sq(space, y)).sqrt();
    if !t.approx_eq(&via, space.tol(), scale) {
        return Err(disagree("T_z(x,y)", &t, &via));
    }
    Ok(t)
}

/// `T(a,b)` over `conds`, peeling one conditioner per level,
/// without sharing subresults.
fn functional<S: Scalar>(space: &InnerSpace<S>, a: &Vector<S>, b: &Vector<S>, conds: &[Vector<S>]) -> S {
    match conds {
        [z] => space.inner(z, z) * space.inner(a, b) - space.inner(a, z) * space.inner(b, z),
        [z, rest @ ..] => {
            functional(space, a, b, rest) * functional(space, z, z, rest)
                - functional(space, a, z, rest) * functional(space, z, b, rest)
        }
        [] => unreachable!("callers reject empty conditioner lists"),
    }
}

/// The n-Chebyshev functional: the Chebyshev functional nested once per
/// conditioner. Requires nonzero conditioners and fails with
/// [`Error::Inconsistent`] if it differs from the iterated product.
pub fn n_chebyshev<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<S> {
    if p.conditioners.is_empty() {
        return Err(Error::NoConditioners);
    }
    space.check_all([&p.x, &p.y])?;
    space.check_all(&p.conditioners)?;
    if let Some(index) = p.conditioners.iter().position(Vector::is_zero) {
        return Err(Error::ZeroConditioner { index });
    }
    let t = functional(space, &p.x, &p.y, &p.conditioners);
    let via = iterated_2_inner(space, p)?;
    if !t.approx_eq(&via, space.tol(), magnitude(ProductKind::Iterated, space, p)) {
        return Err(disagree("the n-Chebyshev functional", &t, &via));
    }
    Ok(t)
}

/// `T(x,x)T(y,y) − T(x,y)²`, never negative.
pub fn n_chebyshev_gap<S: Scalar>(space: &InnerSpace<S>, p: &ConditionedPair<S>) -> Result<S> {
    let xx = n_chebyshev(space, &p.with_args(p.x.clone(), p.x.clone()))?;
    let yy = n_chebyshev(space, &p.with_args(p.y.clone(), p.y.clone()))?;
    let xy = n_chebyshev(space, p)?;
    let gap = xx.clone() * yy.clone() - xy.clone() * xy;
    let scale = (xx * yy).to_f64().abs();
    if gap.is_negative() && !gap.is_negligible(space.tol(), scale) {
        return Err(Error::Inconsistent(format!("negative n-Chebyshev Schwarz gap {gap}")));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;
    use crate::scalar::Exact;

    fn v(c: &[i64]) -> Vector<Exact> {
        Vector::from_i64s(c)
    }

    #[test]
    fn plane_values() {
        let s = InnerSpace::euclidean(2);
        assert_eq!(chebyshev(&s, &v(&[1, 0]), &v(&[0, 1]), &v(&[1, 1])).unwrap(), Exact::from_i64(-1));
        assert_eq!(chebyshev(&s, &v(&[3, 1]), &v(&[1, 1]), &v(&[1, 1])).unwrap(), Exact::from_i64(0));
        assert_eq!(chebyshev(&s, &v(&[1, 0]), &v(&[1, 0]), &v(&[1, 0])).unwrap(), Exact::from_i64(0));
    }

    #[test]
    fn worked_counterexample_value() {
        let s = InnerSpace::euclidean(3);
        let p = ConditionedPair::diagonal(v(&[1, 0, 0]), vec![v(&[1, 1, 1]), v(&[2, 1, 2])]);
        assert_eq!(n_chebyshev(&s, &p).unwrap(), Exact::from_i64(9));
        let p = ConditionedPair::diagonal(v(&[1, 1, 1]), vec![v(&[1, 1, 1]), v(&[2, 1, 2])]);
        assert_eq!(n_chebyshev(&s, &p).unwrap(), Exact::from_i64(0));
    }

    #[test]
    fn zero_conditioner_rejected() {
        let s = InnerSpace::euclidean(3);
        let p = ConditionedPair::diagonal(v(&[1, 0, 0]), vec![v(&[1, 1, 1]), v(&[0, 0, 0])]);
        assert_eq!(n_chebyshev(&s, &p), Err(Error::ZeroConditioner { index: 1 }));
    }

    #[test]
    fn gap_nonnegative_on_random_data() {
        let s = InnerSpace::<Exact>::euclidean(5);
        for t in 0..20 {
            let mut r = TrialRng::new(2, t);
            let p = ConditionedPair::new(r.vector(5), r.vector(5), r.vectors(5, 3));
            if p.conditioners.iter().any(Vector::is_zero) {
                continue;
            }
            assert!(n_chebyshev_gap(&s, &p).unwrap() >= Exact::from_i64(0));
        }
    }
}
