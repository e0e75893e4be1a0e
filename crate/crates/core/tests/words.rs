use proptest::prelude::*;
use wicks::word::{
    all_words, apply_labelling, canonical_cyclic, cyclic_reduce, free_reduce, reduced_words, w, LabellingFunction, Word,
};

fn word_strategy(rank: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(|codes| Word::new(codes.into_iter().map(wicks::Letter::from_code).collect()))
}

#[test]
fn free_reduce_is_idempotent_and_shortening() {
    for len in 0..=10 {
        for u in all_words(2, len) {
            let r = free_reduce(&u);
            assert!(r.len() <= u.len());
            assert!(r.is_reduced());
            assert_eq!(free_reduce(&r), r);
        }
    }
}

#[test]
fn cyclic_reduce_reassembles() {
    for len in 0..=8 {
        for u in all_words(2, len) {
            let (core, conj) = cyclic_reduce(&u);
            assert!(core.is_cyclically_reduced());
            assert_eq!(Word::join([&conj, &core, &conj.inverse()]).free_reduce(), u.free_reduce());
        }
    }
}

#[test]
fn canonical_cyclic_is_rotation_invariant() {
    for len in 1..=8 {
        for u in reduced_words(2, len) {
            let c = canonical_cyclic(&u);
            for k in 0..len {
                assert_eq!(canonical_cyclic(&u.rotate(k)), c);
            }
        }
    }
}

#[test]
fn parse_and_display_round_trip() {
    for s in ["1", "a", "abAB", "xyzXYZ"] {
        assert_eq!(w(s).to_string(), s);
    }
    assert!("".parse::<Word>().is_err());
    assert!("ab1".parse::<Word>().is_err());
}

proptest! {
    #[test]
    fn labelling_is_a_homomorphism(
        x in word_strategy(2, 6),
        y in word_strategy(2, 6),
        ia in word_strategy(3, 4),
        ib in word_strategy(3, 4),
    ) {
        let theta = LabellingFunction::new().with('a', ia).with('b', ib);
        let lhs = apply_labelling(&theta, &x.concat(&y)).unwrap();
        let rhs = apply_labelling(&theta, &x).unwrap().concat(&apply_labelling(&theta, &y).unwrap()).free_reduce();
        prop_assert_eq!(lhs, rhs);
        let inv = apply_labelling(&theta, &x.inverse()).unwrap();
        prop_assert_eq!(inv, apply_labelling(&theta, &x).unwrap().inverse());
    }

    #[test]
    fn shortlex_is_a_total_order(x in word_strategy(2, 5), y in word_strategy(2, 5)) {
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x.len() < y.len() {
            prop_assert!(x < y);
        }
    }
}
