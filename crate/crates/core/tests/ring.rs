use std::collections::HashMap;

use arcalg::{LaurentPoly, Monomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const ARITY: usize = 3;

fn monomial() -> impl Strategy<Value = Monomial> {
    (-6i64..=6, prop::collection::vec(-2i64..=2, ARITY)).prop_map(|(half_a, vexp)| Monomial { half_a, vexp })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial(), -5i64..=5), 0..5)
        .prop_map(|ts| LaurentPoly::from_terms(ARITY, ts.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=7, 1i64..=5, any::<bool>()).prop_map(|(p, q, neg)| BigRational::new(if neg { -p } else { p }.into(), q.into()))
}

type Dict = HashMap<(i64, Vec<i64>), BigInt>;

fn dict(p: &LaurentPoly) -> Dict {
    p.terms().map(|(m, c)| ((m.half_a, m.vexp.clone()), c.clone())).collect()
}

/// Schoolbook convolution on exponent tuples.
fn naive_product(x: &LaurentPoly, y: &LaurentPoly) -> Dict {
    let mut out: Dict = HashMap::new();
    for (m1, c1) in x.terms() {
        for (m2, c2) in y.terms() {
            let key = (m1.half_a + m2.half_a, m1.vexp.iter().zip(&m2.vexp).map(|(a, b)| a + b).collect());
            *out.entry(key).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Direct evaluation, term by term, with integer powers.
fn naive_eval(p: &LaurentPoly, a_half: &BigRational, vs: &[BigRational]) -> BigRational {
    let pw = |b: &BigRational, e: i64| {
        let mut acc = BigRational::one();
        for _ in 0..e.unsigned_abs() {
            acc *= b;
        }
        if e < 0 { acc.recip() } else { acc }
    };
    p.terms()
        .map(|(m, c)| {
            let mut t = BigRational::from_integer(c.clone()) * pw(a_half, m.half_a);
            for (v, &e) in vs.iter().zip(&m.vexp) {
                t *= pw(v, e);
            }
            t
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn commutative_ring_axioms(x in poly(), y in poly(), z in poly()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &LaurentPoly::zero(ARITY), x.clone());
        prop_assert_eq!(&x * &LaurentPoly::one(ARITY), x.clone());
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(&x + &(-&x), LaurentPoly::zero(ARITY));
    }

    #[test]
    fn product_matches_convolution(x in poly(), y in poly()) {
        prop_assert_eq!(dict(&(&x * &y)), naive_product(&x, &y));
    }

    #[test]
    fn specialization_is_a_homomorphism(x in poly(), y in poly(), a in nonzero_rational(), vs in prop::collection::vec(nonzero_rational(), ARITY)) {
        let sx = x.specialize(&a, &vs).unwrap();
        let sy = y.specialize(&a, &vs).unwrap();
        prop_assert_eq!(&sx, &naive_eval(&x, &a, &vs));
        prop_assert_eq!((&x + &y).specialize(&a, &vs).unwrap(), &sx + &sy);
        prop_assert_eq!((&x * &y).specialize(&a, &vs).unwrap(), &sx * &sy);
    }

    #[test]
    fn print_parse_round_trip(x in poly()) {
        let text = x.to_string();
        prop_assert_eq!(LaurentPoly::parse(&text, ARITY).unwrap(), x);
    }

    #[test]
    fn monomials_are_units(m in monomial(), sign in prop::sample::select(vec![-1i64, 1])) {
        let u = LaurentPoly::term(ARITY, sign, m);
        let inv = u.unit_inverse().unwrap();
        prop_assert!((&u * &inv).is_one());
    }
}

#[test]
fn named_constants() {
    let a = |k| LaurentPoly::a_pow(1, k);
    assert_eq!(LaurentPoly::framing_loop(1), -a(2) - a(-2));
    assert_eq!(LaurentPoly::puncture_loop(1), a(1) + a(-1));
    assert_eq!(LaurentPoly::delta(1), LaurentPoly::a_half_pow(1, 1) + LaurentPoly::a_half_pow(1, -1));
    assert_eq!(LaurentPoly::parse("-A^2-A^-2", 1).unwrap(), LaurentPoly::framing_loop(1));
    assert_eq!(LaurentPoly::parse("(A^(1/2)+A^(-1/2))^2", 1).unwrap(), a(1) + LaurentPoly::constant(1, 2) + a(-1));
}

#[test]
fn non_units_and_bad_input() {
    assert!(LaurentPoly::puncture_loop(1).unit_inverse().is_none());
    assert!(LaurentPoly::constant(1, 2).unit_inverse().is_none());
    assert!(LaurentPoly::parse("A^(1/3)", 1).is_err());
    assert!(LaurentPoly::parse("v4", 3).is_err());
    assert!(LaurentPoly::parse("A +", 1).is_err());
}
