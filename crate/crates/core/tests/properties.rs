//! Generative laws for words, reversing and the cube check.

use proptest::prelude::*;

use cubecheck::completeness::cube_condition;
use cubecheck::presentation::Complement;
use cubecheck::reversing::{left_reverse, right_reverse, ReversalOutcome, Reverser};
use cubecheck::words::{format_word, parse_word};
use cubecheck::{catalog_load, Generator, Letter, Presentation, Side, Sign, Word};

const CASES: u32 = 500;

fn d4() -> Presentation {
    catalog_load("d4:new").unwrap()
}

fn generator(t_range: i64) -> impl Strategy<Value = Generator> {
    prop_oneof![
        (1i64..=4).prop_map(|i| Generator::finite('s', i)),
        (-t_range..=t_range).prop_map(|i| Generator::indexed('t', i)),
    ]
}

fn letter(t_range: i64) -> impl Strategy<Value = Letter> {
    (generator(t_range), any::<bool>())
        .prop_map(|(g, pos)| Letter::new(g, if pos { Sign::Pos } else { Sign::Neg }))
}

fn word(t_range: i64, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(t_range), 0..=max_len).prop_map(Word::from)
}

fn positive_word(t_range: i64, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(generator(t_range), 1..=max_len).prop_map(Word::positive)
}

/// Free reduction by the slowest possible method: delete the first adjacent
/// inverse pair until none is left.
fn naive_reduce(w: &Word) -> Word {
    let mut letters = w.letters().to_vec();
    'outer: loop {
        for i in 0..letters.len().saturating_sub(1) {
            if letters[i].gen == letters[i + 1].gen && letters[i].sign != letters[i + 1].sign {
                letters.drain(i..i + 2);
                continue 'outer;
            }
        }
        return Word::from(letters);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_format_round_trip(w in word(40, 12)) {
        let p = d4();
        let text = format_word(&w);
        prop_assert_eq!(parse_word(&text, &p).unwrap(), w.clone());
        prop_assert_eq!(p.parse_word(&text).unwrap(), w);
    }

    #[test]
    fn free_reduce_is_idempotent_and_matches_naive(w in word(3, 16)) {
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(naive_reduce(&w), r.clone());
        prop_assert!(r.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        prop_assert_eq!(r.exponent_sum(), w.exponent_sum());
    }

    #[test]
    fn word_times_inverse_reduces_to_empty(w in word(5, 16)) {
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        prop_assert!(w.inverse().concat(&w).free_reduce().is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn shift_action_laws(w in word(10, 12), v in word(10, 6), a in -20i64..20, b in -20i64..20) {
        prop_assert_eq!(w.shift(0), w.clone());
        prop_assert_eq!(w.shift(a).shift(b), w.shift(a + b));
        prop_assert_eq!(w.shift(a).shift(-a), w.clone());
        prop_assert_eq!(w.shift(a).inverse(), w.inverse().shift(a));
        prop_assert_eq!(w.concat(&v).shift(a), w.shift(a).concat(&v.shift(a)));
        prop_assert_eq!(w.shift(a).free_reduce(), w.free_reduce().shift(a));
        prop_assert_eq!(w.shift(a).len(), w.len());
        for (x, y) in w.letters().iter().zip(w.shift(a).letters()) {
            if x.gen.is_indexed() {
                prop_assert_eq!(y.gen.index(), x.gen.index() + a);
            } else {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn reversing_commutes_with_shift(w in word(4, 8), k in -9i64..9, left in any::<bool>()) {
        let p = d4();
        let rev = |w: &Word| if left { left_reverse(w, &p, 400) } else { right_reverse(w, &p, 400) };
        let direct = rev(&w).unwrap();
        let shifted = rev(&w.shift(k)).unwrap();
        prop_assert_eq!(shifted, direct.shift(&p, k));
    }

    #[test]
    fn cube_verdicts_commute_with_shift(
        u in generator(3),
        v in generator(3),
        w in generator(3),
        k in -7i64..7,
        left in any::<bool>(),
    ) {
        let p = d4();
        let side = if left { Side::Left } else { Side::Right };
        let (u, v, w) = (Word::positive([u]), Word::positive([v]), Word::positive([w]));
        let base = cube_condition(&u, &v, &w, &p, side, 2_000).unwrap();
        let moved = cube_condition(&u.shift(k), &v.shift(k), &w.shift(k), &p, side, 2_000).unwrap();
        prop_assert_eq!(base.verdict, moved.verdict);
        prop_assert_eq!(base.first.shift(&p, k), moved.first);
    }

    #[test]
    fn complements_are_coherent(x in generator(6), y in generator(6), left in any::<bool>()) {
        let p = d4();
        let side = if left { Side::Left } else { Side::Right };
        let xy = p.complement(side, x, y).unwrap();
        let yx = p.complement(side, y, x).unwrap();
        match (&xy, &yx) {
            (Complement::Equal, Complement::Equal) => prop_assert_eq!(x, y),
            (Complement::None, Complement::None) => prop_assert_ne!(x, y),
            (
                Complement::Pair { first, second, instance },
                Complement::Pair { first: f2, second: s2, instance: i2 },
            ) => {
                prop_assert_eq!(first, s2);
                prop_assert_eq!(second, f2);
                prop_assert!(instance.same_relation(i2));
                let (gx, gy) = (Word::positive([x]), Word::positive([y]));
                let (lhs, rhs) = match side {
                    Side::Right => (gx.concat(first), gy.concat(second)),
                    Side::Left => (first.concat(&gx), second.concat(&gy)),
                };
                prop_assert_eq!(&instance.lhs, &lhs);
                prop_assert_eq!(&instance.rhs, &rhs);
                prop_assert_eq!(lhs.len(), rhs.len());
            }
            other => prop_assert!(false, "asymmetric lookup {other:?}"),
        }
    }

    #[test]
    fn reversal_steps_conserve_exponent_sum(w in word(4, 10), left in any::<bool>()) {
        let p = d4();
        let side = if left { Side::Left } else { Side::Right };
        let trace = Reverser::new(&p).reverse(side, &w, 300).unwrap();
        trace.check(&p).unwrap();
        for later in trace.words() {
            prop_assert_eq!(later.exponent_sum(), w.exponent_sum());
        }
        if let ReversalOutcome::Terminal { positive, negative } = &trace.outcome {
            prop_assert_eq!(positive.len() as i64 - negative.len() as i64, w.exponent_sum());
        }
    }

    #[test]
    fn fuel_is_monotone(u in positive_word(3, 5), v in positive_word(3, 5), f in 0usize..40) {
        let p = d4();
        let rev = Reverser::new(&p);
        let small = rev.quotient(&u, &v, f).unwrap();
        let large = rev.quotient(&u, &v, f + 25).unwrap();
        prop_assert!(large.steps.starts_with(&small.steps));
        match small.outcome {
            ReversalOutcome::Diverged { .. } => prop_assert_eq!(small.len(), f),
            _ => prop_assert_eq!(&large, &small),
        }
        if !matches!(large.outcome, ReversalOutcome::Diverged { .. }) {
            let exact = rev.quotient(&u, &v, large.len()).unwrap();
            prop_assert_eq!(exact, large);
        }
    }
}
