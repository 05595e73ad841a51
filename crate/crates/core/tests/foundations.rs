mod common;

use common::*;
use itertools::Itertools;
use mrcodes::completion::{verify_nonvanishing, zero_pattern_nontrivial_sets, SupportPattern};
use mrcodes::matrix::Solution;
use mrcodes::{Elem, Field, GaloisField, Matrix};
use proptest::prelude::*;

#[test]
fn field_axioms() {
    field_axiom_suite().unwrap();
}

#[test]
fn embeddings_are_injective_homomorphisms() {
    embedding_suite().unwrap();
}

#[test]
fn cauchy_blocks_are_superregular() {
    cauchy_suite().unwrap();
}

#[test]
fn vandermonde_blocks_are_mds() {
    vandermonde_suite().unwrap();
}

#[test]
fn determinants_multiply_and_match_cofactors() {
    determinant_suite().unwrap();
}

#[test]
fn minimal_polynomials_are_minimal() {
    minimal_polynomial_suite().unwrap();
}

#[test]
fn encoding_round_trips() {
    for (p, m) in [(2, 16), (3, 10), (251, 2), (5, 6)] {
        let f = gf(p, m);
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
            assert_eq!(f.elem(x.enc()).unwrap(), x);
        }
        assert!(f.elem(f.order()).is_err());
    }
}

#[test]
fn primitive_elements_have_full_order() {
    for (p, m) in [(2, 1), (2, 8), (2, 16), (3, 5), (7, 3), (13, 2), (65_521, 1), (3, 17)] {
        let f = gf(p, m);
        let g = f.primitive_element();
        assert_eq!(f.multiplicative_order(g), Some(f.order() - 1), "GF({p}^{m})");
    }
}

#[test]
fn sweep_reports_do_not_depend_on_thread_count() {
    let f = gf(5, 1);
    let mut r = rng(3);
    // low-rank rows produce many vanishing minors
    let base = random_matrix(&f, 2, 9, &mut r);
    let m = Matrix::from_fn(f.clone(), 3, 9, |i, j| if i < 2 { *base.get(i, j) } else { f.add(base.get(0, j), base.get(1, j)) });
    let sets: Vec<Vec<usize>> = (0..9).combinations(3).collect();
    let reports: Vec<_> = [1, 2, 4]
        .into_iter()
        .map(|t| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
            pool.install(|| verify_nonvanishing(&m, sets.clone(), 1000).unwrap().without_timing())
        })
        .collect();
    assert!(!reports[0].passed);
    assert_eq!(reports[0].failures.len(), sets.len());
    assert!(reports.iter().all_equal());
}

fn small_field() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(vec![(2u64, 2u32), (7, 1), (2, 3), (3, 2), (5, 2), (7, 2)]).prop_map(|(p, m)| gf(p, m))
}

fn matrix_in(f: GaloisField, rows: usize, cols: usize) -> impl Strategy<Value = mrcodes::GfMatrix> {
    prop::collection::vec(0..f.order(), rows * cols)
        .prop_map(move |v| Matrix::new(f.clone(), rows, cols, v.into_iter().map(|e| f.elem(e).unwrap()).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_multiplicative((a, b) in (small_field(), 1usize..=4).prop_flat_map(|(f, n)| (matrix_in(f.clone(), n, n), matrix_in(f, n, n)))) {
        let f = a.field().clone();
        prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), f.mul(&a.det().unwrap(), &b.det().unwrap()));
        prop_assert_eq!(a.det().unwrap(), cofactor_det(&a));
    }

    #[test]
    fn solutions_satisfy_the_system((a, x) in (small_field(), 1usize..=5, 1usize..=5)
        .prop_flat_map(|(f, r, c)| (matrix_in(f.clone(), r, c), matrix_in(f, c, 1))))
    {
        // a consistent right-hand side by construction
        let rhs = a.mul(&x).unwrap();
        let rs = a.rank_and_solve(Some(&rhs)).unwrap();
        prop_assert_eq!(rs.rank, a.rank());
        match rs.solution {
            Solution::Unique(sol) => {
                prop_assert_eq!(rs.rank, a.cols());
                prop_assert_eq!(a.mul(&sol).unwrap(), rhs);
            }
            Solution::Underdetermined => prop_assert!(rs.rank < a.cols()),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(a in small_field().prop_flat_map(|f| matrix_in(f, 3, 5))) {
        let f = a.field().clone();
        let ker = a.kernel();
        prop_assert_eq!(ker.len(), 5 - a.rank());
        for v in ker {
            let col = Matrix::new(f.clone(), 5, 1, v).unwrap();
            prop_assert!(a.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn matching_agrees_with_expansion(rows in 1usize..=4, extra in 0usize..=2, bits in prop::collection::vec(any::<bool>(), 24)) {
        let cols = (rows + extra).min(6);
        let p = SupportPattern::from_fn(rows, cols, |i, j| bits[i * 6 + j]);
        prop_assert_eq!(zero_pattern_nontrivial_sets(&p).unwrap(), pattern_sets_by_expansion(&p));
    }

    #[test]
    fn sweep_matches_cofactor_oracle(m in small_field().prop_flat_map(|f| matrix_in(f, 3, 6))) {
        let f = m.field().clone();
        let sets: Vec<Vec<usize>> = (0..6).combinations(3).collect();
        let report = verify_nonvanishing(&m, sets.clone(), usize::MAX).unwrap();
        let expected: Vec<Vec<usize>> = sets
            .into_iter()
            .filter(|s| f.is_zero(&cofactor_det(&m.select_columns(s).unwrap())))
            .collect();
        prop_assert_eq!(report.passed, expected.is_empty());
        prop_assert_eq!(report.failures, expected);
    }

    #[test]
    fn cauchy_on_random_points_is_superregular(seed in any::<u64>(), k in 1usize..=3, n in 1usize..=4) {
        let f = gf(11, 1);
        let mut r = rng(seed);
        let mut pts: Vec<Elem> = f.elements().collect();
        for i in (1..pts.len()).rev() {
            pts.swap(i, rand::Rng::gen_range(&mut r, 0..=i));
        }
        let c = mrcodes::matrix::cauchy(&f, &pts[..k], &pts[k..k + n]).unwrap();
        prop_assert!(c.is_superregular());
    }

    #[test]
    fn vandermonde_on_random_points_is_mds(points in prop::sample::subsequence((0u64..11).collect::<Vec<_>>(), 1..=7), k in 1usize..=7) {
        let f = gf(11, 1);
        let pts: Vec<Elem> = points.iter().map(|&e| f.elem(e).unwrap()).collect();
        let k = k.min(pts.len());
        prop_assert!(mrcodes::matrix::vandermonde(&f, &pts, k).unwrap().is_mds().unwrap());
    }
}
