//! Randomized structural invariants, complementing the acceptance gate.

use num_rational::Rational64;
use proptest::prelude::*;

use conecalc::norm::cancellation_norm;
use conecalc::parse::parse_word;
use conecalc::word::{Letter, Word};
use conecalc::WeightedAlphabet;

fn letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0usize..2, any::<bool>()), 0..=max_len)
        .prop_map(|ls| ls.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect())
}

fn unit_ab() -> WeightedAlphabet {
    WeightedAlphabet::unit(["a", "b"])
}

proptest! {
    #[test]
    fn reduce_is_idempotent(ls in letters(24)) {
        let w = Word::from_letters(ls);
        let r = w.reduce();
        prop_assert_eq!(r.reduce(), r);
    }

    #[test]
    fn display_parse_round_trip(ls in letters(24)) {
        let ab = unit_ab();
        let w = Word::from_letters(ls);
        let again = parse_word(&w.display(&ab), &ab).unwrap();
        prop_assert_eq!(w, again);
    }

    #[test]
    fn norm_is_subadditive(xs in letters(10), ys in letters(10)) {
        let ab = unit_ab();
        let x = Word::from_letters(xs);
        let y = Word::from_letters(ys);
        let nx = cancellation_norm(&x, &ab).unwrap().value;
        let ny = cancellation_norm(&y, &ab).unwrap().value;
        let nxy = cancellation_norm(&x.concat(&y), &ab).unwrap().value;
        prop_assert!(nxy <= nx + ny);
    }

    #[test]
    fn norm_is_symmetric(ls in letters(12)) {
        let ab = unit_ab();
        let w = Word::from_letters(ls);
        let n = cancellation_norm(&w, &ab).unwrap().value;
        let ni = cancellation_norm(&w.inverse(), &ab).unwrap().value;
        prop_assert_eq!(n, ni);
    }

    #[test]
    fn norm_vanishes_exactly_on_trivial_words(ls in letters(12)) {
        let ab = unit_ab();
        let w = Word::from_letters(ls);
        let n = cancellation_norm(&w, &ab).unwrap().value;
        prop_assert_eq!(n == Rational64::from_integer(0), w.reduce().letters.is_empty());
    }

    #[test]
    fn certificate_always_verifies(ls in letters(14)) {
        let ab = unit_ab();
        let w = Word::from_letters(ls);
        let cert = cancellation_norm(&w, &ab).unwrap();
        cert.verify(&w, &ab).unwrap();
    }
}
