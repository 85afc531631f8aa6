use charpoly::berkowitz::{adjoint, char_poly, determinant, inverse, Mode};
use charpoly::clow::{clow_sum_coefficients, minor_sum_coefficients, DEFAULT_ENUM_CAP};
use charpoly::matrix::{chain_product, tree_product, Matrix};
use charpoly::matrix_file;
use charpoly::random::TrialRng;
use charpoly::ring::{RingElement, RingSpec, M61};
use proptest::prelude::*;

fn rings() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::Integer),
        Just(RingSpec::Rational),
        Just(RingSpec::prime_field(7).unwrap()),
        Just(RingSpec::prime_field(M61).unwrap()),
    ]
}

fn element(spec: RingSpec) -> impl Strategy<Value = RingElement> {
    (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| match spec {
        RingSpec::Rational => spec.fraction(n, d).unwrap(),
        _ => spec.from_i64(n * d),
    })
}

fn triple() -> impl Strategy<Value = (RingElement, RingElement, RingElement)> {
    rings().prop_flat_map(|s| (element(s), element(s), element(s)))
}

/// A seeded matrix: `(ring, n, seed)` names it reproducibly.
fn seeded_matrix(max_n: usize) -> impl Strategy<Value = Matrix> {
    (rings(), 1..=max_n, any::<u64>()).prop_map(|(s, n, seed)| TrialRng::new(seed, 0).matrix(s, n))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let spec = a.spec();
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &spec.zero(), a.clone());
        prop_assert_eq!(&a * &spec.one(), a.clone());
        prop_assert_eq!(&a + &(-&a), spec.zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
    }

    #[test]
    fn field_inverses((a, _, _) in triple()) {
        if a.spec().is_field() && !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), a.spec().one());
        }
    }

    #[test]
    fn printing_then_parsing_is_identity((a, _, _) in triple()) {
        let reparsed = a.spec().parse_literal(&a.to_string()).unwrap();
        prop_assert_eq!(reparsed, a);
    }

    #[test]
    fn matrix_file_round_trip(a in seeded_matrix(6)) {
        let text = matrix_file::print(&a);
        prop_assert_eq!(matrix_file::parse(&text, None).unwrap(), a);
    }

    #[test]
    fn multiplication_is_associative(spec in rings(), n in 1usize..5, m in 1usize..5, seed: u64) {
        let mut rng = TrialRng::new(seed, 1);
        let a = Matrix::from_fn(spec, n, m, |_, _| rng.element(spec));
        let b = Matrix::from_fn(spec, m, n, |_, _| rng.element(spec));
        let c = Matrix::from_fn(spec, n, m, |_, _| rng.element(spec));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tree_product_matches_fold(spec in rings(), dims in prop::collection::vec(1usize..4, 2..10), seed: u64) {
        let mut rng = TrialRng::new(seed, 2);
        let chain: Vec<Matrix> = dims
            .windows(2)
            .map(|w| Matrix::from_fn(spec, w[0], w[1], |_, _| rng.element(spec)))
            .collect();
        let tree = tree_product(&chain).unwrap();
        prop_assert_eq!(&tree.product, &chain_product(&chain).unwrap());
        prop_assert_eq!(tree.stages, charpoly::matrix::ceil_log2(chain.len()));
    }

    #[test]
    fn decomposition_matches_repeated_deletion(a in seeded_matrix(7)) {
        let mut m = a.clone();
        for j in 1..=a.rows() {
            m = m.delete_rows_cols(&[1]).unwrap();
            let d = a.decompose(j).unwrap();
            prop_assert_eq!(&d.principal, &m);
        }
        prop_assert_eq!(a.decompose(1).unwrap().reassemble(), a);
    }

    #[test]
    fn sequential_equals_parallel(a in seeded_matrix(8)) {
        let s = char_poly(&a, Mode::Sequential).unwrap();
        let p = char_poly(&a, Mode::Parallel).unwrap();
        prop_assert!(s.coeffs[0].is_one());
        prop_assert_eq!(s.coeffs.len(), a.rows() + 1);
        prop_assert_eq!(s, p);
    }

    #[test]
    fn adjugate_identity(a in seeded_matrix(6)) {
        let n = a.rows();
        let det = Matrix::scalar(a.spec(), n, &determinant(&a).unwrap());
        let adj = adjoint(&a).unwrap();
        prop_assert_eq!(a.multiply(&adj).unwrap(), det.clone());
        prop_assert_eq!(adj.multiply(&a).unwrap(), det);
    }

    #[test]
    fn inverse_over_fields(a in seeded_matrix(5)) {
        if a.spec().is_field() && !determinant(&a).unwrap().is_zero() {
            let inv = inverse(&a).unwrap();
            prop_assert_eq!(a.multiply(&inv).unwrap(), Matrix::identity(a.spec(), a.rows()));
        }
    }

    #[test]
    fn oracles_agree_with_berkowitz(a in seeded_matrix(4)) {
        let p = char_poly(&a, Mode::Sequential).unwrap().coeffs;
        prop_assert_eq!(&clow_sum_coefficients(&a, DEFAULT_ENUM_CAP).unwrap(), &p);
        prop_assert_eq!(&minor_sum_coefficients(&a, DEFAULT_ENUM_CAP).unwrap(), &p);
    }
}
