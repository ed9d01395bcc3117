use super::*;
use crate::alphabet::sigma;

fn lang(words: &[&str]) -> FiniteAutomaton {
    Dfa::from_strs(words.iter().copied())
}

const INC: &str = "x:=x+1;";

#[test]
fn empty_language_is_one_rejecting_state() {
    let e: FiniteAutomaton = Dfa::empty();
    assert_eq!(e.num_states(), 1);
    assert!(e.is_empty());
    assert_eq!(lang(&[]), e);
    assert_eq!(lang(&["ab"]).intersect(&lang(&["ba"])), e);
}

#[test]
fn canonical_form_identifies_equal_languages() {
    let a = lang(&["ab", "b"]).union(&lang(&["ab"]));
    let b = lang(&["b", "ab"]);
    assert_eq!(a, b);
    let star1 = lang(&["a"]).star();
    let star2 = lang(&["a", "aa"]).star();
    assert_eq!(star1, star2);
    assert_eq!(star1.num_states(), 1);
}

#[test]
fn concat_and_star() {
    let a = lang(&["a", "b"]).concat(&lang(&["c"]));
    assert_eq!(a, lang(&["ac", "bc"]));
    let s = lang(&["ab"]).star();
    assert!(s.accepts_str(""));
    assert!(s.accepts_str("abab"));
    assert!(!s.accepts_str("aba"));
    assert!(!s.is_finite());
    assert_eq!(s.max_len(), None);
}

#[test]
fn inclusion() {
    let u = Dfa::universal(sigma());
    assert!(lang(&["abc", ""]).is_subset_of(&u));
    assert!(!u.is_subset_of(&lang(&["abc"])));
    assert!(lang(&["a"]).is_subset_of(&lang(&["a", "b"])));
    assert!(!lang(&["a", "c"]).is_subset_of(&lang(&["a", "b"])));
    assert!(Dfa::empty().is_subset_of(&lang(&[])));
}

#[test]
fn lengths_and_enumeration() {
    let a = lang(&["abc", "d", "ef"]);
    assert_eq!(a.min_len(), Some(1));
    assert_eq!(a.max_len(), Some(3));
    assert_eq!(a.enumerate_strings(10).unwrap(), ["d", "ef", "abc"]);
    assert_eq!(a.enumerate_strings(2), None);
    assert_eq!(lang(&[""]).enumerate_strings(1).unwrap(), [""]);
}

#[test]
fn factors_of_a_word() {
    let f = lang(&["abc"]).factors();
    let mut got = f.enumerate_strings(100).unwrap();
    got.sort();
    assert_eq!(got, ["", "a", "ab", "abc", "b", "bc", "c"]);
}

#[test]
fn quotient_of_a_chain_builds_a_loop() {
    // 0 -a-> 1 -a-> 2(final); merge everything.
    let a = lang(&["aa"]);
    let p = StatePartition::from_blocks(3, &[vec![0, 1, 2]]).unwrap();
    assert_eq!(a.quotient(&p).unwrap(), lang(&["a"]).star());
    assert!(StatePartition::from_blocks(3, &[vec![0, 1]]).is_err());
    assert!(a.quotient(&StatePartition::discrete(2)).is_err());
    assert_eq!(a.quotient(&StatePartition::discrete(3)).unwrap(), a);
}

#[test]
fn widening_generalizes_a_growing_chain_to_star() {
    let inc2 = INC.repeat(2);
    let old = lang(&["", INC]);
    let new = lang(&["", INC, &inc2]);
    let w = widen_n(&old, &new, 3);
    assert_eq!(w, lang(&[INC]).star());
}

#[test]
fn widening_without_epsilon_gives_plus() {
    let inc2 = INC.repeat(2);
    let w = widen_n(&lang(&[INC]), &lang(&[INC, &inc2]), 3);
    let plus = lang(&[INC]).concat(&lang(&[INC]).star());
    assert_eq!(w, plus);
}

#[test]
fn widening_is_an_upper_bound() {
    let old = lang(&["ab", "c"]);
    let new = lang(&["abab", "x"]);
    let w = widen_n(&old, &new, 2);
    assert!(old.is_subset_of(&w));
    assert!(new.is_subset_of(&w));
}

#[test]
fn widening_of_infinite_chain_stabilizes() {
    // a^0 ∪ ... ∪ a^k for growing k.
    let mut acc = lang(&[""]);
    let mut k = 1;
    let stable = loop {
        let next = acc.union(&lang(&[&"a".repeat(k)]));
        let w = widen_n(&acc, &next, 2);
        if w == acc {
            break k;
        }
        acc = w;
        k += 1;
        assert!(k < 20, "no stabilization");
    };
    assert!(stable < 10);
    assert_eq!(acc, lang(&["a"]).star());
}

#[test]
fn dot_output_mentions_every_state() {
    let a = lang(&["ab", "ac"]);
    let dot = a.to_dot("sample");
    assert!(dot.starts_with("digraph \"sample\""));
    for q in 0..a.num_states() {
        assert!(dot.contains(&format!("q{q} [")));
    }
    assert!(dot.contains("[bc]"));
    assert_eq!(char_class_label(&['a', 'b', 'c', 'x']), "[a-cx]");
}
