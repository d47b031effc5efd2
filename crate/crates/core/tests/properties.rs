use ninner_core::applications::{chebyshev, lupu_gap, n_chebyshev};
use ninner_core::dodgson::{condensation_determinant, condensation_residual, leading_block_residual};
use ninner_core::products::{iterated_2_inner, representation_report, standard_n_inner, ConditionedPair};
use ninner_core::{Exact, InnerSpace, Scalar, SquareMatrix, Vector};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Exact> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| Exact::from_ratio(p, q))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector<Exact>> {
    proptest::collection::vec(rational(), dim).prop_map(Vector::new)
}

fn vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<Vector<Exact>>> {
    proptest::collection::vec(vector(dim), count)
}

fn matrix(order: usize) -> impl Strategy<Value = SquareMatrix<Exact>> {
    proptest::collection::vec(rational(), order * order).prop_map(move |e| SquareMatrix::new(order, e).unwrap())
}

/// Order and the pair: `order - 1` conditioners in dimension `order + 1`.
fn pair(max_order: usize) -> impl Strategy<Value = (usize, ConditionedPair<Exact>)> {
    (2..=max_order).prop_flat_map(|n| {
        (Just(n), vectors(n + 1, n + 1)).prop_map(|(n, mut vs)| {
            let conds = vs.split_off(2);
            let y = vs.pop().unwrap();
            let x = vs.pop().unwrap();
            (n, ConditionedPair::new(x, y, conds))
        })
    })
}

/// Cofactor expansion along the first row.
fn laplace(m: &[Vec<Exact>]) -> Exact {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len()).fold(Exact::from_i64(0), |acc, j| {
        let sub: Vec<Vec<Exact>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = m[0][j].clone() * laplace(&sub);
        if j % 2 == 0 { acc + term } else { acc - term }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_matches_cofactor_expansion(m in (1usize..=5).prop_flat_map(matrix)) {
        prop_assert_eq!(m.determinant(), laplace(&m.rows()));
    }

    #[test]
    fn float_determinant_tracks_exact(m in (1usize..=5).prop_flat_map(matrix)) {
        let f = m.map(|e| e.to_f64());
        let exact = m.determinant().to_f64();
        prop_assert!((f.determinant() - exact).abs() <= 1e-9 * ninner_core::linalg::hadamard_bound(&f).max(1.0));
    }

    #[test]
    fn gram_determinant_is_nonnegative(vs in (1usize..=4).prop_flat_map(|k| vectors(4, k))) {
        let s = InnerSpace::euclidean(4);
        prop_assert!(s.gram_determinant(&vs).unwrap() >= Exact::from_i64(0));
    }

    #[test]
    fn iterated_equals_e_factor_times_standard((_, p) in pair(5)) {
        let s = InnerSpace::euclidean(p.x.len());
        let r = representation_report(&s, &p).unwrap();
        prop_assert_eq!(r.residual, Exact::from_i64(0));
    }

    #[test]
    fn standard_product_ignores_conditioner_order((_, p) in pair(5), k in any::<prop::sample::Index>()) {
        let s = InnerSpace::euclidean(p.x.len());
        let mut q = p.clone();
        let i = k.index(q.conditioners.len());
        q.conditioners.rotate_left(i);
        q.conditioners.reverse();
        prop_assert_eq!(standard_n_inner(&s, &p).unwrap(), standard_n_inner(&s, &q).unwrap());
    }

    #[test]
    fn iterated_product_is_symmetric_and_bilinear((_, p) in pair(4), a in rational(), x2 in vector(5)) {
        let s = InnerSpace::euclidean(p.x.len());
        let x2 = Vector::new(x2.coords()[..p.x.len()].to_vec());
        let v = iterated_2_inner(&s, &p).unwrap();
        prop_assert_eq!(&v, &iterated_2_inner(&s, &p.with_args(p.y.clone(), p.x.clone())).unwrap());
        let scaled = iterated_2_inner(&s, &p.with_args(p.x.scaled(&a), p.y.clone())).unwrap();
        prop_assert_eq!(scaled, a * v.clone());
        let sum = iterated_2_inner(&s, &p.with_args(&p.x + &x2, p.y.clone())).unwrap();
        let other = iterated_2_inner(&s, &p.with_args(x2, p.y.clone())).unwrap();
        prop_assert_eq!(sum, v + other);
    }

    #[test]
    fn dodgson_identities_vanish(m in (3usize..=6).prop_flat_map(matrix)) {
        let zero = Exact::from_i64(0);
        prop_assert_eq!(leading_block_residual(&m).unwrap(), zero.clone());
        prop_assert_eq!(condensation_residual(&m).unwrap(), zero);
        prop_assert_eq!(condensation_determinant(&m), m.determinant());
    }

    #[test]
    fn chebyshev_functionals_match_iterated_product((_, p) in pair(4)) {
        prop_assume!(p.conditioners.iter().all(|c| !c.is_zero()));
        let s = InnerSpace::euclidean(p.x.len());
        prop_assert_eq!(n_chebyshev(&s, &p).unwrap(), iterated_2_inner(&s, &p).unwrap());
        let z = &p.conditioners[0];
        let single = ConditionedPair::new(p.x.clone(), p.y.clone(), vec![z.clone()]);
        prop_assert_eq!(chebyshev(&s, &p.x, &p.y, z).unwrap(), iterated_2_inner(&s, &single).unwrap());
    }

    #[test]
    fn lupu_gap_is_nonnegative(vs in vectors(3, 3)) {
        let s = InnerSpace::euclidean(3);
        prop_assert!(lupu_gap(&s, &vs[0], &vs[1], &vs[2]).unwrap() >= Exact::from_i64(0));
    }
}
