use jumat_core::{
    is_parallel, is_real_parallel, rat, GaussianRational, Matrix, MatrixPoly, Rational, Vector,
};
use proptest::prelude::*;

type Gq = GaussianRational;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| rat(n, d))
}

fn gaussian() -> impl Strategy<Value = Gq> {
    (rational(), rational()).prop_map(|(re, im)| Gq::new(re, im))
}

fn nonzero_gaussian() -> impl Strategy<Value = Gq> {
    gaussian().prop_filter("nonzero", |c| !c.is_zero())
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(gaussian(), n).prop_map(Vector)
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(gaussian(), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn matrix_poly(n: usize) -> impl Strategy<Value = MatrixPoly> {
    prop::collection::vec(matrix(n), 1..4).prop_map(move |c| MatrixPoly::new(n, n, c).unwrap())
}

proptest! {
    #[test]
    fn field_laws(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Gq::zero());
    }

    #[test]
    fn inverses(a in nonzero_gaussian(), b in gaussian()) {
        prop_assert!((&a * &a.recip().unwrap()).is_one());
        prop_assert_eq!(&b.checked_div(&a).unwrap() * &a, b);
    }

    #[test]
    fn conjugation_and_modulus(a in gaussian(), b in gaussian()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a * &b).abs2(), a.abs2() * b.abs2());
        prop_assert_eq!(&a * &a.conj(), Gq::from(a.abs2()));
    }

    #[test]
    fn display_round_trip(a in gaussian()) {
        prop_assert_eq!(a.to_string().parse::<Gq>().unwrap(), a);
    }

    #[test]
    fn star_is_an_anti_homomorphism(a in matrix_poly(3), b in matrix_poly(3)) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(ab.star(), b.star().checked_mul(&a.star()).unwrap());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn product_degree_and_evaluation(a in matrix_poly(2), b in matrix_poly(2), x in gaussian()) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert!(ab.degree() <= a.degree() + b.degree());
        prop_assert_eq!(ab.eval(&x), a.eval(&x).checked_mul(&b.eval(&x)).unwrap());
    }

    #[test]
    fn multiplication_is_associative(a in matrix_poly(2), b in matrix_poly(2), c in matrix_poly(2)) {
        let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_matrix(m in matrix(3)) {
        if let Some(inv) = m.inverse() {
            prop_assert!(m.checked_mul(&inv).unwrap().is_identity());
        } else {
            prop_assert!(!m.nullspace().is_empty());
        }
    }

    /// Dyadic symmetry `a·b* = b·a*` holds exactly for real multiples.
    #[test]
    fn real_parallel_matches_dyadic_symmetry(a in vector(3), c in gaussian()) {
        prop_assume!(!a.is_zero());
        let b = a.scale(&c);
        prop_assert_eq!(is_parallel(&a, &b), Some(c.clone()));
        let symmetric = a.outer(&b) == b.outer(&a);
        prop_assert_eq!(symmetric, c.is_real());
        prop_assert_eq!(is_real_parallel(&a, &b).is_some(), c.is_real());
    }
}
