use logbehave::kernel::{binomial_i64, fmt_rational, parse_rational};
use logbehave::logbehavior::{
    l_operator, nth_root_step, puiseux_fit, r_order, ratio2_seq, ratio_seq, RootMode, StepMethod,
};
use logbehave::recurrence::{catalog, guess_recurrence, verify_recurrence, PRecurrence};
use logbehave::sequences::{a_direct, a_transformed, extend_by_recurrence, table, AForm, SequenceName, SequenceValues};
use logbehave::{IntPoly, Integer, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(p, q)| Rational::from((p, q)))
}

fn poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-bound..=bound, 0..=max_deg + 1).prop_map(|cs| IntPoly::from_i64s(&cs))
}

#[test]
fn signed_binomial_identity_exhaustive() {
    for n in 0..=60i64 {
        for k in 0..=60i64 {
            let lhs = binomial_i64(-n - 1, k).unwrap();
            let mut rhs = binomial_i64(n + k, k).unwrap();
            if k % 2 == 1 {
                rhs = -rhs;
            }
            assert_eq!(lhs, rhs, "n={n} k={k}");
        }
    }
}

#[test]
fn ratio2_exceeds_one_on_tail() {
    for name in [SequenceName::A, SequenceName::B] {
        let vals = table(name, 1, 402).unwrap();
        let r2 = ratio2_seq(&vals).unwrap();
        for n in 3..=400 {
            assert!(*r2.at(n).unwrap() > 1, "{name} at {n}");
        }
    }
}

#[test]
fn a_and_b_are_integral() {
    for name in [SequenceName::A, SequenceName::B] {
        let vals = table(name, 1, 500).unwrap();
        for (n, v) in vals.iter() {
            assert_eq!(*v.denom(), 1, "{name}({n}) = {}", fmt_rational(v));
        }
    }
}

#[test]
fn l_sign_matches_ratio_monotonicity_on_prefixes() {
    for name in [SequenceName::A, SequenceName::B, SequenceName::Apery, SequenceName::S] {
        let start = name.offset().max(2);
        let vals = table(name, start, start + 150).unwrap();
        let l = l_operator(&vals, 1).unwrap();
        let r = ratio_seq(&vals).unwrap();
        for n in start..=vals.end() - 2 {
            let up = r.at(n).unwrap() < r.at(n + 1).unwrap();
            assert_eq!(l.at(n).unwrap().cmp0() == std::cmp::Ordering::Greater, up, "{name} at {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signed_binomial_identity(n in 0i64..=60, k in 0i64..=60) {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(binomial_i64(-n - 1, k).unwrap(), binomial_i64(n + k, k).unwrap() * sign);
    }

    #[test]
    fn rational_add_sub_round_trip(a in rational(), c in rational()) {
        let sum = Rational::from(&a + &c);
        prop_assert_eq!(Rational::from(&sum - &c), a.clone());
        prop_assert!(*a.denom() > 0);
        prop_assert_eq!(parse_rational(&fmt_rational(&a)).unwrap(), a);
    }

    #[test]
    fn poly_eval_is_multiplicative(p in poly(5, 50), q in poly(5, 50), n in -1000i64..1000) {
        let x = Integer::from(n);
        let prod = &p * &q;
        prop_assert_eq!(prod.eval(&x), p.eval(&x) * q.eval(&x));
    }

    #[test]
    fn a_forms_agree(n in 1i64..=300) {
        let primary = a_direct(n, AForm::Primary).unwrap();
        prop_assert_eq!(&a_direct(n, AForm::Dual).unwrap(), &primary);
        prop_assert_eq!(&a_transformed(n).unwrap(), &primary);
    }

    #[test]
    fn l_sign_matches_ratio_monotonicity(vals in prop::collection::vec(1i64..1000, 3..40)) {
        let vals = SequenceValues::new("u", 0, vals.into_iter().map(Rational::from).collect());
        let l = l_operator(&vals, 1).unwrap();
        let r = ratio_seq(&vals).unwrap();
        for n in 0..=vals.end() - 2 {
            let up = r.at(n).unwrap() < r.at(n + 1).unwrap();
            prop_assert_eq!(l.at(n).unwrap().cmp0() == std::cmp::Ordering::Greater, up);
        }
    }

    #[test]
    fn ratio2_is_ratio_of_ratios(vals in prop::collection::vec(1i64..1000, 3..40), offset in -3i64..5) {
        let vals = SequenceValues::new("u", offset, vals.into_iter().map(Rational::from).collect());
        let r2 = ratio2_seq(&vals).unwrap();
        let rr = ratio_seq(&ratio_seq(&vals).unwrap()).unwrap();
        prop_assert_eq!(r2.offset, rr.offset);
        prop_assert_eq!(r2.values, rr.values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn guess_recovers_generated_recurrence(
        order in 1usize..=2,
        coeffs in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3),
        seed in prop::collection::vec(-5i64..=5, 2),
    ) {
        let polys: Vec<IntPoly> = coeffs[..=order].iter().map(|c| IntPoly::from_i64s(c)).collect();
        let gen = PRecurrence::new(polys, 0);
        prop_assume!(gen.is_ok());
        let gen = gen.unwrap();
        let seed = SequenceValues::new("g", 0, seed[..order].iter().map(|&v| Rational::from(v)).collect());
        let vals = extend_by_recurrence(&gen, &seed, 80);
        prop_assume!(vals.is_ok());
        let vals = vals.unwrap();
        // the zero sequence satisfies every recurrence, so there is nothing to recover
        prop_assume!(vals.values.iter().any(|v| !v.is_zero()));

        let window = vals.slice(0, 29).unwrap();
        let guessed = guess_recurrence(&window, 2, 2).unwrap();
        prop_assert!(guessed.is_some());
        let guessed = guessed.unwrap();
        prop_assert!(guessed.order() <= order);
        let last = vals.end() - guessed.order() as i64;
        prop_assert!(verify_recurrence(&guessed, &vals, 0, last).unwrap().holds());
        // 50 terms beyond the guessing window
        prop_assert!(last >= 29 + 50);
    }

    #[test]
    fn fast_and_exact_root_steps_agree(which in 0usize..3, n in 3i64..=120) {
        let name = [SequenceName::A, SequenceName::B, SequenceName::Apery][which];
        let vals = table(name, n - 1, n + 1).unwrap();
        let exact = nth_root_step(&vals, n, RootMode::Exact).unwrap();
        let fast = nth_root_step(&vals, n, RootMode::Log).unwrap();
        prop_assert_eq!(exact.method, StepMethod::Exact);
        prop_assert_eq!(exact.holds, fast.holds);
    }

    #[test]
    fn puiseux_fit_is_scale_invariant(p in 1i64..10_000, q in 1i64..10_000) {
        let base = table(SequenceName::B, 1, 202).unwrap();
        let scaled = base.scaled(&Rational::from((p, q)));
        let f0 = puiseux_fit(&ratio2_seq(&base).unwrap(), None, None, 256).unwrap();
        let f1 = puiseux_fit(&ratio2_seq(&scaled).unwrap(), None, None, 256).unwrap();
        prop_assert_eq!(&f0.alpha, &f1.alpha);
        prop_assert_eq!(&f0.c, &f1.c);
        prop_assert_eq!(r_order(&f0).unwrap(), r_order(&f1).unwrap());
    }
}

#[test]
fn catalog_recurrences_extend_from_three_seeds() {
    for (name, rec) in [(SequenceName::A, catalog::a_recurrence()), (SequenceName::B, catalog::b_recurrence())] {
        let direct = table(name, 1, 150).unwrap();
        let seed = direct.slice(1, 3).unwrap();
        let ext = extend_by_recurrence(&rec, &seed, 147).unwrap();
        assert_eq!(ext.values, direct.values, "{name}");
    }
}
