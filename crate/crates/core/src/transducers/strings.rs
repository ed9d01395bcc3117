use super::{dfa_rules, Guard, Output, Sft, SymSet};
use crate::alphabet::sigma;
use crate::automata::FiniteAutomaton;

fn sigma_set() -> SymSet {
    sigma().collect()
}

/// Echoes exactly the words of `fa`.
pub fn identity_sft(fa: &FiniteAutomaton) -> Sft {
    let mut sft = Sft {
        num_states: fa.num_states(),
        initial: 0,
        finals: fa.final_states().collect(),
        rules: Vec::new(),
    };
    dfa_rules(&mut sft, fa, 0);
    sft
}

/// Appends `symbol` to the input.
pub fn concat_sft(symbol: char) -> Sft {
    let mut sft = Sft::new();
    let end = sft.add_state();
    sft.add_rule(0, Guard::Set(sigma_set()), Output::Identity, 0);
    sft.add_rule(0, Guard::Epsilon, Output::Const(symbol), end);
    sft.finals.insert(end);
    sft
}

/// Emits the `len` symbols starting at 1-based position `start`; rejects
/// inputs too short to contain the window.
pub fn substring_sft(start: usize, len: usize) -> Sft {
    assert!(start >= 1, "substring positions are 1-based");
    let all = sigma_set();
    let mut sft = Sft::new();
    let mut q = 0;
    for _ in 1..start {
        let t = sft.add_state();
        sft.add_rule(q, Guard::Set(all.clone()), Output::Epsilon, t);
        q = t;
    }
    for _ in 0..len {
        let t = sft.add_state();
        sft.add_rule(q, Guard::Set(all.clone()), Output::Identity, t);
        q = t;
    }
    sft.add_rule(q, Guard::Set(all), Output::Epsilon, q);
    sft.finals.insert(q);
    sft
}

/// Image of a language under a transducer.
pub fn apply(fa: &FiniteAutomaton, sft: &Sft) -> FiniteAutomaton {
    identity_sft(fa).compose(sft).output_fa()
}

/// Appends `word` to the input; [`concat_sft`] chained over its symbols.
pub fn append_sft(word: &str) -> Sft {
    let mut sft = Sft::new();
    sft.add_rule(0, Guard::Set(sigma_set()), Output::Identity, 0);
    let mut q = 0;
    for c in word.chars() {
        let t = sft.add_state();
        sft.add_rule(q, Guard::Epsilon, Output::Const(c), t);
        q = t;
    }
    sft.finals.insert(q);
    sft
}

pub fn append_str(fa: &FiniteAutomaton, word: &str) -> FiniteAutomaton {
    apply(fa, &append_sft(word))
}
