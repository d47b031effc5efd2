use super::{sq, IdentityCheck};
use crate::error::{Error, Result};
use crate::linalg::{InnerSpace, SquareMatrix, Vector};
use crate::products::{iterated_2_inner, standard_n_inner, ConditionedPair};
use crate::scalar::Scalar;

fn iterated<S: Scalar>(space: &InnerSpace<S>, x: &Vector<S>, y: &Vector<S>, conds: &[&Vector<S>]) -> Result<S> {
    let p = ConditionedPair::new(x.clone(), y.clone(), conds.iter().map(|&c| c.clone()).collect());
    iterated_2_inner(space, &p)
}

/// `‖x‖²‖w‖²‖z‖² + 2⟨w,z⟩⟨z,x⟩⟨x,w⟩ − ‖x‖²⟨w,z⟩² − ‖w‖²⟨z,x⟩² − ‖z‖²⟨x,w⟩²`,
/// which is never negative. Fails with [`Error::Inconsistent`] unless
/// `gap · ‖z‖² = (x,x|w,z)_*`.
pub fn lupu_gap<S: Scalar>(space: &InnerSpace<S>, x: &Vector<S>, w: &Vector<S>, z: &Vector<S>) -> Result<S> {
    space.check_all([x, w, z])?;
    let ip = |a: &Vector<S>, b: &Vector<S>| space.inner(a, b);
    let (xx, ww, zz) = (ip(x, x), ip(w, w), ip(z, z));
    let (wz, zx, xw) = (ip(w, z), ip(z, x), ip(x, w));
    let two = S::from_i64(2);
    let gap = xx.clone() * ww.clone() * zz.clone() + two * wz.clone() * zx.clone() * xw.clone()
        - xx * wz.clone() * wz
        - ww * zx.clone() * zx
        - zz.clone() * xw.clone() * xw;
    let check = IdentityCheck::new(
        gap.clone() * zz,
        iterated(space, x, x, &[w, z])?,
        sq(space, x) * sq(space, w) * sq(space, z).powi(2),
    );
    if !check.holds(space.tol()) {
        return Err(Error::Inconsistent(format!(
            "Lupu gap times ‖z‖² is {} but (x,x|w,z)_* is {}",
            check.lhs, check.rhs
        )));
    }
    Ok(gap)
}

/// `(x,x|z,w)_*·‖z‖²` against `(x,x|w,z)_*·‖w‖²`.
pub fn gram_swap_residual<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    w: &Vector<S>,
    z: &Vector<S>,
) -> Result<IdentityCheck<S>> {
    space.check_all([x, w, z])?;
    let lhs = iterated(space, x, x, &[z, w])? * space.inner(z, z);
    let rhs = iterated(space, x, x, &[w, z])? * space.inner(w, w);
    let scale = sq(space, x) * (sq(space, w) * sq(space, z)).powi(2);
    Ok(IdentityCheck::new(lhs, rhs, scale))
}

/// The matrix `[⟨a_i, a_j | z⟩]` of 2-inner products with respect to `z`.
pub fn conditioned_gram_matrix<S: Scalar>(
    space: &InnerSpace<S>,
    vs: &[Vector<S>],
    z: &Vector<S>,
) -> Result<SquareMatrix<S>> {
    space.check_dim(z)?;
    space.check_all(vs)?;
    let zz = space.inner(z, z);
    Ok(SquareMatrix::from_fn(vs.len(), |i, j| {
        zz.clone() * space.inner(&vs[i], &vs[j]) - space.inner(&vs[i], z) * space.inner(z, &vs[j])
    }))
}

/// `Γ(x,w,v | z)` against `Γ(x,w,v,z)·‖z‖⁴`, where `Γ(·|z)` is the determinant
/// of [`conditioned_gram_matrix`]. Also confirms
/// `Γ(x,w,v|z)·⟨w,w|z⟩ = (x,x|v,w,z)_*`, failing with [`Error::Inconsistent`]
/// otherwise.
pub fn gram_wrt_residual<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    w: &Vector<S>,
    v: &Vector<S>,
    z: &Vector<S>,
) -> Result<IdentityCheck<S>> {
    let triple = [x.clone(), w.clone(), v.clone()];
    let g = conditioned_gram_matrix(space, &triple, z)?;
    let det = g.determinant();
    let zz = space.inner(z, z);
    let gamma = space.gram_determinant(&[x.clone(), w.clone(), v.clone(), z.clone()])?;
    let (nx, nw, nv, nz) = (sq(space, x), sq(space, w), sq(space, v), sq(space, z));
    let check = IdentityCheck::new(det.clone(), gamma * zz.clone() * zz, nx * nw * nv * nz.powi(3));

    let bridge = IdentityCheck::new(
        det * g.get(1, 1).clone(),
        iterated(space, x, x, &[v, w, z])?,
        nx * nv * nw.powi(2) * nz.powi(4),
    );
    if !bridge.holds(space.tol()) {
        return Err(Error::Inconsistent(format!(
            "Γ(x,w,v|z)·⟨w,w|z⟩ = {} but (x,x|v,w,z)_* = {}",
            bridge.lhs, bridge.rhs
        )));
    }
    Ok(check)
}

/// `(x,x|w,z)_*` against `Γ(x,w,z)·‖z‖²`.
pub fn gram_form_three<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    w: &Vector<S>,
    z: &Vector<S>,
) -> Result<IdentityCheck<S>> {
    let lhs = iterated(space, x, x, &[w, z])?;
    let gamma = space.gram_determinant(&[x.clone(), w.clone(), z.clone()])?;
    let nz = sq(space, z);
    Ok(IdentityCheck::new(lhs, gamma * space.inner(z, z), sq(space, x) * sq(space, w) * nz * nz))
}

/// `(x,x|v,w,z)_*` against `Γ(x,v,w,z)·‖w|z‖²·‖z‖⁴`.
pub fn gram_form_four<S: Scalar>(
    space: &InnerSpace<S>,
    x: &Vector<S>,
    v: &Vector<S>,
    w: &Vector<S>,
    z: &Vector<S>,
) -> Result<IdentityCheck<S>> {
    let lhs = iterated(space, x, x, &[v, w, z])?;
    let gamma = space.gram_determinant(&[x.clone(), v.clone(), w.clone(), z.clone()])?;
    let wz = standard_n_inner(space, &ConditionedPair::diagonal(w.clone(), vec![z.clone()]))?;
    let zz = space.inner(z, z);
    let scale = sq(space, x) * sq(space, v) * sq(space, w).powi(2) * sq(space, z).powi(4);
    Ok(IdentityCheck::new(lhs, gamma * wz * zz.clone() * zz, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;
    use crate::scalar::Exact;

    fn v(c: &[i64]) -> Vector<Exact> {
        Vector::from_i64s(c)
    }
    fn q(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    #[test]
    fn lupu_gap_on_worked_counterexample_is_one() {
        let s = InnerSpace::euclidean(3);
        assert_eq!(lupu_gap(&s, &v(&[1, 0, 0]), &v(&[1, 1, 1]), &v(&[2, 1, 2])).unwrap(), q(1));
    }

    #[test]
    fn lupu_gap_orthonormal_and_coplanar() {
        let s = InnerSpace::euclidean(3);
        assert_eq!(lupu_gap(&s, &v(&[1, 0, 0]), &v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(), q(1));
        assert_eq!(lupu_gap(&s, &v(&[1, 2, 0]), &v(&[3, 1, 0]), &v(&[0, 5, 0])).unwrap(), q(0));
    }

    #[test]
    fn swap_residual_vanishes() {
        let s = InnerSpace::euclidean(3);
        let r = gram_swap_residual(&s, &v(&[1, 0, 0]), &v(&[1, 1, 1]), &v(&[2, 1, 2])).unwrap();
        assert_eq!(r.residual(), q(0));
        let r = gram_swap_residual(&s, &v(&[1, 4, 0]), &v(&[1, 1, 1]), &v(&[1, 1, 1])).unwrap();
        assert_eq!(r.residual(), q(0));
    }

    #[test]
    fn gram_wrt_special_cases() {
        let s = InnerSpace::euclidean(4);
        let (x, w, vv) = (v(&[1, 2, 0, 0]), v(&[0, 1, 3, 0]), v(&[2, 0, 1, 0]));
        let r = gram_wrt_residual(&s, &x, &w, &vv, &v(&[0, 0, 0, 0])).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(0), q(0)));
        let r = gram_wrt_residual(&s, &x, &w, &vv, &v(&[0, 0, 0, 1])).unwrap();
        let gamma = s.gram_determinant(&[x, w, vv]).unwrap();
        assert_eq!(r.lhs, gamma);
        assert_eq!(r.rhs, gamma);
    }

    #[test]
    fn gram_wrt_needs_the_fourth_vector_in_the_gram_determinant() {
        let s = InnerSpace::<Exact>::euclidean(4);
        let mut rng = TrialRng::new(9, 0);
        let vs: Vec<Vector<Exact>> = rng.vectors(4, 4);
        let r = gram_wrt_residual(&s, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap();
        assert_eq!(r.residual(), q(0));
        let zz = s.norm_squared(&vs[3]).unwrap();
        let z_free = s.gram_determinant(&vs[..3]).unwrap() * zz.clone() * zz;
        assert_ne!(r.lhs, z_free);
    }

    #[test]
    fn gram_forms_hold_on_random_data() {
        let s = InnerSpace::<Exact>::euclidean(5);
        for t in 0..20 {
            let vs: Vec<Vector<Exact>> = TrialRng::new(3, t).vectors(5, 4);
            assert_eq!(gram_form_three(&s, &vs[0], &vs[1], &vs[2]).unwrap().residual(), q(0));
            assert_eq!(gram_form_four(&s, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap().residual(), q(0));
            assert!(lupu_gap(&s, &vs[0], &vs[1], &vs[2]).unwrap() >= q(0));
        }
    }

    #[test]
    fn float_identities_hold_within_tolerance() {
        let s = InnerSpace::<f64>::euclidean(4);
        for t in 0..20 {
            let vs: Vec<Vector<f64>> = TrialRng::new(5, t).vectors(4, 4);
            assert!(gram_wrt_residual(&s, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap().holds(1e-9));
            assert!(gram_swap_residual(&s, &vs[0], &vs[1], &vs[2]).unwrap().holds(1e-9));
            assert!(gram_form_four(&s, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap().holds(1e-9));
        }
    }
}
