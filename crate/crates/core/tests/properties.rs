use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use qmt::certify::{check, parse_certificate, prove_matrix_order, prove_tv_general, render_certificate, CertifyError};
use qmt::diagram::{parse, print};
use qmt::distance::{entrywise_leq, split, tv, tvmax, TvMethod};
use qmt::quantale::{check_laws, Extended, LawvereQuantale, QuantaleValue};
use qmt::sample;
use qmt::semantics::realize::{canonical_form, stochastic_term};
use qmt::semantics::{Matrix, Semiring};
use qmt::theory::builtin_by_name;
use qmt::Rational;

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn as_big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

fn extended() -> impl Strategy<Value = Extended> {
    prop_oneof![
        9 => (0i64..40, 1i64..12).prop_map(|(n, d)| Extended::Finite(Rational::new(n, d))),
        1 => Just(Extended::Infinity),
    ]
}

proptest! {
    #[test]
    fn rational_arithmetic_matches_bigrational(a in -10_000i64..10_000, b in 1i64..500, c in -10_000i64..10_000, d in 1i64..500) {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!(as_big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(as_big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(as_big(&(&x * &y)), &bx * &by);
        if c != 0 {
            prop_assert_eq!(as_big(&(&x / &y)), &bx / &by);
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn lawvere_laws(a in extended(), b in extended(), c in extended(), family in prop::collection::vec(extended(), 0..5)) {
        let bad = check_laws(&LawvereQuantale, &a, &b, &c, &family);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn terms_reparse(seed in any::<u64>(), arity in 0usize..4, layers in 1usize..4) {
        let mut rng = sample::rng(seed);
        let ha = builtin_by_name("ha_nonneg").unwrap();
        let t = sample::ha_term(&mut rng, Semiring::NonNegative, arity, layers);
        prop_assert_eq!(parse(&print(&t), &ha.signature).unwrap(), t);
        let ca = builtin_by_name("ca").unwrap();
        let t = sample::ca_term(&mut rng, arity.max(1), layers);
        prop_assert_eq!(parse(&print(&t), &ca.signature).unwrap(), t);
    }

    #[test]
    fn matrices_round_trip(seed in any::<u64>(), rows in 0usize..5, cols in 0usize..5) {
        let mut rng = sample::rng(seed);
        let m = sample::semiring_matrix(&mut rng, Semiring::NonNegative, rows, cols);
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<Matrix>(&json).unwrap(), m.clone());
        if rows > 0 && cols > 0 {
            prop_assert_eq!(Matrix::parse(&m.to_string()).unwrap(), m);
        }
    }

    #[test]
    fn tv_is_a_bounded_pseudometric(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let [a, b, c] = [0; 3].map(|_| sample::distribution(&mut rng, m));
        let d = |x, y| tv(x, y, TvMethod::Sum).unwrap();
        for method in TvMethod::ALL {
            prop_assert_eq!(tv(&a, &b, method).unwrap(), d(&a, &b));
        }
        prop_assert_eq!(d(&a, &a), Rational::zero());
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert!(d(&a, &b) <= Rational::one());
    }

    #[test]
    fn split_recombines(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let (mu, nu) = (sample::distribution(&mut rng, m), sample::distribution(&mut rng, m));
        let s = split(&mu, &nu).unwrap();
        prop_assert_eq!(s.recombine(), (mu.clone(), nu.clone()));
        prop_assert_eq!(s.lambda, tv(&mu, &nu, TvMethod::Sum).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_certificates_exist_exactly_when_entrywise(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        let mut rng = sample::rng(seed);
        let t = builtin_by_name("preord_nonneg").unwrap();
        let a = sample::semiring_matrix(&mut rng, Semiring::NonNegative, rows, cols);
        let b = if rng.gen_bool(0.5) {
            sample::above(&mut rng, Semiring::NonNegative, &a)
        } else {
            sample::semiring_matrix(&mut rng, Semiring::NonNegative, rows, cols)
        };
        let leq = entrywise_leq(&a, &b).unwrap();
        match prove_matrix_order(&t, &canonical_form(&a).term, &canonical_form(&b).term) {
            Ok(c) => {
                prop_assert!(leq);
                prop_assert_eq!(check(&c, &t).unwrap(), QuantaleValue::Boolean(true));
            }
            Err(CertifyError::NotDerivable { .. }) => prop_assert!(!leq),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn tv_certificates_are_tight_and_reparse(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut rng = sample::rng(seed);
        let ba = builtin_by_name("ba").unwrap();
        let (a, b) = (sample::stochastic(&mut rng, m, n), sample::stochastic(&mut rng, m, n));
        let (f, g) = (stochastic_term(&a).unwrap(), stochastic_term(&b).unwrap());
        let c = prove_tv_general(&ba, &f, &g).unwrap();
        let d = tvmax(&a, &b).unwrap();
        prop_assert_eq!(check(&c, &ba).unwrap(), QuantaleValue::lawvere(d).unwrap());
        prop_assert_eq!(parse_certificate(&render_certificate(&c, None), &ba).unwrap(), c);
    }
}
