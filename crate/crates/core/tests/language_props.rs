//! Acceptor behaviour against closed-form oracles.

use lingwalk::analysis::{fidelity, membership, words_of_length};
use lingwalk::language::{
    build_sequential, build_sequential_word, build_spatial, parse_walk, superpose_words, target_word, LanguageId,
    QuantumWord, Symbol, Word,
};
use proptest::prelude::*;

fn word_strategy(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, len)
        .prop_map(|bits| Word::new(bits.into_iter().map(|b| if b { Symbol::B } else { Symbol::A }).collect()))
}

fn even_word(max_half: usize) -> impl Strategy<Value = Word> {
    (1..=max_half).prop_flat_map(|m| word_strategy(2 * m..=2 * m))
}

/// Symbol pairs `a` at `p`, `b` at `p + δ` meet at the merge and are
/// accepted; every other symbol is split evenly.
fn sequential_oracle(w: &Word, delay: usize) -> f64 {
    let s = w.symbols();
    let n = s.len() as f64;
    let pairs = (0..s.len())
        .filter(|&p| s[p] == Symbol::A && s.get(p + delay) == Some(&Symbol::B))
        .count() as f64;
    2.0 * pairs / n + (n - 2.0 * pairs) / (2.0 * n)
}

#[test]
fn sequential_pair_oracle_exhaustive() {
    for n in 1..=8 {
        let lab = build_sequential(&LanguageId::Lab, n).unwrap();
        let leq = (n.is_multiple_of(2)).then(|| build_sequential(&LanguageId::Leq, n).unwrap());
        for w in words_of_length(n) {
            let o = lab.run_word(&w).unwrap();
            assert!((o.accept - sequential_oracle(&w, 1)).abs() < 1e-12, "ab {w}");
            assert!((o.accept + o.reject - 1.0).abs() < 1e-12);
            if let Some(leq) = &leq {
                let p = leq.acceptance(&w).unwrap();
                assert!((p - sequential_oracle(&w, n / 2)).abs() < 1e-12, "eq {w}");
            }
        }
    }
}

#[test]
fn sequential_lab_accepts_shorter_members() {
    let walk = build_sequential(&LanguageId::Lab, 8).unwrap();
    for m in 0..=4 {
        let w = target_word(&LanguageId::Lab, 2 * m).unwrap();
        assert!((walk.acceptance(&w).unwrap() - 1.0).abs() < 1e-12, "{w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spatial_closed_form(w in even_word(6), lab in prop::bool::ANY) {
        let lang = if lab { LanguageId::Lab } else { LanguageId::Leq };
        let n = w.len();
        let walk = build_spatial(&lang, n).unwrap();
        let t = target_word(&lang, n).unwrap();
        let k = (n - t.matches(&w)) as f64;
        let nf = n as f64;
        let o = walk.run_word(&w).unwrap();
        prop_assert!((o.accept - (nf - k).powi(2) / (nf * nf)).abs() < 1e-12);
        prop_assert!((o.reject - k * k / (nf * nf)).abs() < 1e-12);
        prop_assert_eq!((o.accept - 1.0).abs() < 1e-9, membership(&lang, &w));
    }

    #[test]
    fn specific_word_walks(t in word_strategy(1..=7), u in word_strategy(1..=7)) {
        let walk = build_sequential_word(&t).unwrap();
        if u.len() <= t.len() {
            let matches = t.symbols().iter().zip(u.symbols()).filter(|(a, b)| a == b).count();
            let p = walk.acceptance(&u).unwrap();
            prop_assert!((p - matches as f64 / u.len() as f64).abs() < 1e-12);
        } else {
            prop_assert!(walk.acceptance(&u).is_err());
        }
        let back = parse_walk(&walk.to_json()).unwrap();
        prop_assert_eq!(back, walk);
    }

    #[test]
    fn quantum_fidelity_depends_on_matches(base in even_word(3), other in even_word(3), theta in 0.0f64..std::f64::consts::FRAC_PI_2) {
        prop_assume!(base.len() == other.len() && base != other);
        let n = base.len() as f64;
        let walk = build_spatial(&LanguageId::SpecificWord(base.clone()), base.len()).unwrap();
        let phi = walk.accepting_state(&QuantumWord::classical(&base).unwrap()).unwrap().unwrap();
        let out = walk.run(&superpose_words(&base, &other, theta).unwrap()).unwrap();
        let m = base.matches(&other) as f64;
        let expect = ((m + (n - m) * theta.cos()) / n).powi(2);
        prop_assert!((fidelity(&out.state, &phi).unwrap() - expect).abs() < 1e-12);
        prop_assert!(out.accept + out.reject <= 1.0 + 1e-12);
    }

    #[test]
    fn complement_swaps_probabilities(w in even_word(4)) {
        let walk = build_spatial(&LanguageId::Leq, w.len()).unwrap();
        let co = walk.complement().unwrap();
        let (a, b) = (walk.run_word(&w).unwrap(), co.run_word(&w).unwrap());
        prop_assert!((a.accept - b.reject).abs() < 1e-15);
        prop_assert!((a.reject - b.accept).abs() < 1e-15);
    }
}
