use ninner_core::applications::{compare_fits, lupu_gap, n_chebyshev, Dataset};
use ninner_core::axioms::{axiom_check, symmetry_counterexample, Axiom};
use ninner_core::dodgson::{condensation_determinant, minor, MinorSpec};
use ninner_core::products::{
    e_factor, iterated_2_inner_expanded, representation_report, standard_n_inner, ConditionedPair, ProductKind,
};
use ninner_core::{Exact, InnerSpace, Scalar, SquareMatrix};

fn q(n: i64) -> Exact {
    Exact::from_i64(n)
}

fn grid(rows: [[i64; 2]; 2]) -> [[Exact; 2]; 2] {
    rows.map(|r| r.map(q))
}

#[test]
fn permutation_counterexample_with_intermediate_determinants() {
    let s = InnerSpace::euclidean(3);
    let [x, u, v] = symmetry_counterexample::<Exact>(3);

    let a = iterated_2_inner_expanded(&s, &ConditionedPair::diagonal(x.clone(), vec![u.clone(), v.clone()])).unwrap();
    assert_eq!(a.value, q(9));
    assert_eq!(a.top, grid([[5, -1], [-1, 2]]));

    let b = iterated_2_inner_expanded(&s, &ConditionedPair::diagonal(v.clone(), vec![u.clone(), x.clone()])).unwrap();
    assert_eq!(b.value, q(1));
    assert_eq!(b.top, grid([[5, 3], [3, 2]]));

    let p = ConditionedPair::diagonal(x.clone(), vec![u.clone(), v.clone()]);
    assert_eq!(standard_n_inner(&s, &p).unwrap(), q(1));
    assert_eq!(e_factor(&s, &p.conditioners).unwrap(), q(9));
    assert_eq!(representation_report(&s, &p).unwrap().residual, q(0));
    assert_eq!(s.gram_determinant(&[x.clone(), u.clone(), v.clone()]).unwrap(), q(1));
    assert_eq!(lupu_gap(&s, &x, &u, &v).unwrap(), q(1));
    assert_eq!(n_chebyshev(&s, &p).unwrap(), q(9));
}

#[test]
fn gram_matrix_minors() {
    let s = InnerSpace::euclidean(3);
    let [x, u, v] = symmetry_counterexample::<Exact>(3);
    let g = s.gram_matrix(&[v, u, x]).unwrap();
    assert_eq!(g, SquareMatrix::from_i64_rows(&[&[9, 5, 2], &[5, 3, 1], &[2, 1, 1]]).unwrap());
    assert_eq!(minor(&g, &MinorSpec::principal(vec![0])).unwrap(), q(9));
    let m = SquareMatrix::<Exact>::from_i64_rows(&[&[5, -1], &[-1, 2]]).unwrap();
    assert_eq!(minor(&m, &MinorSpec::principal(vec![0, 1])).unwrap(), q(9));
    assert_eq!(condensation_determinant(&m), q(9));
    assert_eq!(condensation_determinant(&SquareMatrix::<Exact>::identity(6)), q(1));
}

#[test]
fn permutation_check_reports_the_pinned_triple() {
    let s = InnerSpace::<Exact>::euclidean(3);
    let r = axiom_check(&s, Axiom::I2, ProductKind::Iterated, 3, 1, 42).unwrap();
    let c = r.counterexample.expect("violation");
    assert_eq!((c.lhs, c.rhs), (q(9), q(1)));
}

#[test]
fn plane_dataset_from_all_methods() {
    let x: Vec<Exact> = [0, 1, 2, 3, 4].map(q).to_vec();
    let y: Vec<Exact> = [1, 0, 4, 1, 2].map(q).to_vec();
    let z = x.iter().zip(&y).map(|(a, b)| q(2) * a + q(3) * b + q(5)).collect();
    let cmp = compare_fits(&Dataset::new(x, y, z).unwrap(), 0.0).unwrap();
    for f in cmp.fits {
        assert_eq!([f.a, f.b, f.c], [q(2), q(3), q(5)]);
        assert_eq!(f.residual_sum_squares, q(0));
    }
}
