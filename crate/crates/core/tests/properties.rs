mod support;

use comms::automata::{widen_n, Dfa, FiniteAutomaton};
use comms::domain::{AbstVal, Interval, WidenParams};
use comms::exe::{label_is_executable, parse_fragment, regex_of};
use comms::transducers::{concat_sft, lex_parser, substring_sft};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec("[abc]{0,5}", 0..5)
}

fn language(ws: &[String]) -> FiniteAutomaton {
    Dfa::from_strs(ws.iter().map(String::as_str))
}

/// Words of length at most `depth` accepted from state `q`.
fn residual(a: &FiniteAutomaton, q: usize, depth: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![(q, String::new())];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for (state, word) in frontier {
            if a.is_final(state) {
                out.insert(word.clone());
            }
            for (c, &to) in a.transitions(state) {
                next.push((to, format!("{word}{c}")));
            }
        }
        frontier = next;
    }
    out
}

fn abst_val() -> impl Strategy<Value = AbstVal> {
    let bound = prop::option::of(-20i64..20);
    prop_oneof![
        Just(AbstVal::Top),
        Just(AbstVal::Bot),
        (bound.clone(), bound).prop_map(|(lo, hi)| AbstVal::from_interval(Interval { lo, hi })),
        (any::<bool>(), any::<bool>()).prop_map(|(t, f)| {
            AbstVal::from_bools(comms::domain::BoolSet { may_true: t, may_false: f })
        }),
        words().prop_map(|ws| AbstVal::from_fa(language(&ws))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lub_and_glb_bound_their_arguments(a in abst_val(), b in abst_val()) {
        let lub = a.lub(&b);
        let glb = a.glb(&b);
        prop_assert!(a.leq(&lub) && b.leq(&lub));
        prop_assert!(glb.leq(&a) && glb.leq(&b));
        prop_assert_eq!(lub.clone(), b.lub(&a));
        prop_assert_eq!(a.lub(&a), a.clone());
    }

    #[test]
    fn value_widening_covers_the_join(a in abst_val(), b in abst_val(), n in 1usize..4) {
        let params = WidenParams { fa_n: n, thresholds: Vec::new() };
        prop_assert!(a.lub(&b).leq(&a.widen(&b, &params)));
    }

    #[test]
    fn automata_widening_is_monotone_in_the_horizon(xs in words(), ys in words(), n in 1usize..3) {
        let (a, b) = (language(&xs), language(&ys));
        let coarse = widen_n(&a, &b, n);
        let fine = widen_n(&a, &b, n + 1);
        prop_assert!(a.union(&b).is_subset_of(&fine));
        prop_assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn regex_extraction_preserves_the_language(seed in any::<u64>()) {
        let a = support::random_statement_automaton(&mut rng(seed), 8, &support::ATOMS);
        prop_assert_eq!(regex_of(&a).to_dfa(), a);
    }

    #[test]
    fn transducer_composition_is_relational(w in "[a-d]{0,6}", start in 1usize..4, len in 0usize..4) {
        let first = concat_sft('z');
        let second = substring_sft(start, len);
        let direct: BTreeSet<String> = first.transduce(&w).iter().flat_map(|v| second.transduce(v)).collect();
        prop_assert_eq!(first.compose(&second).transduce(&w), direct);
    }

    #[test]
    fn generated_statements_pass_the_filter(seed in any::<u64>()) {
        let stmt = support::fuzz_statement(&mut rng(seed));
        prop_assert!(lex_parser().transduce(&stmt).contains(&stmt), "{}", stmt);
    }

    #[test]
    fn parser_acceptance_implies_filter_acceptance(seed in any::<u64>(), cut in 0usize..40, ins in "[a-z0-9;:=+{} ]") {
        // Mutated statements probe the border between the two recognizers.
        let stmt = support::fuzz_statement(&mut rng(seed));
        let at = cut.min(stmt.len());
        let mutated = format!("{}{}{}", &stmt[..at], ins, &stmt[at..]);
        for candidate in [stmt.clone(), mutated, stmt[..at].to_string()] {
            if parse_fragment(&candidate).is_some_and(|f| !matches!(f, comms::exe::Fragment::Nothing)) {
                prop_assert!(label_is_executable(&candidate), "{:?}", candidate);
            }
        }
    }

    #[test]
    fn reflection_free_programs_are_sound(seed in any::<u64>()) {
        let src = support::fuzz_program(&mut rng(seed));
        let violations = support::soundness_violations(&src);
        prop_assert!(violations.is_empty(), "{}: {:?}", src, violations);
    }
}

#[test]
fn coverage_oracle_rejects_a_wrong_program() {
    let wrong = support::program("x:=x+2;$");
    let missed = support::uncovered_by(&wrong, &[("x", 0)], &["x:=x+1;"], support::oracle_limits());
    assert_eq!(missed.len(), 1);
}

#[test]
fn soundness_oracle_sees_an_unsound_store() {
    use comms::concrete::{CollectingMemory, CollectingStore, ValueSet};
    use comms::domain::{AbstractMemory, AbstractStore};
    let mut abs = AbstractStore::new();
    abs.set(1, AbstractMemory::from_pairs([("x".to_string(), AbstVal::int(1))]));
    let concrete = CollectingStore::entry(CollectingMemory::from_pairs([("x", ValueSet::ints([1, 2]))]));
    assert_eq!(comms::interp::store_contains(&abs, &concrete).len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_form_is_unique(xs in words(), ys in words()) {
        let (a, b) = (language(&xs), language(&ys));
        prop_assert_eq!(a.union(&b), b.union(&a));
        let mut reversed = xs.clone();
        reversed.reverse();
        prop_assert_eq!(language(&reversed), a.clone());
        // Minimal: words are at most five letters, so residuals up to six
        // letters tell all states apart.
        let distinct: BTreeSet<BTreeSet<String>> = (0..a.num_states()).map(|q| residual(&a, q, 6)).collect();
        prop_assert_eq!(distinct.len(), a.num_states());
    }
}
