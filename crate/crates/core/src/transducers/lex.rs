//! The lexer transducer: echoes each lexeme followed by its token marker.

use super::{Guard, Output, Sft, SymSet};
use crate::alphabet::{sigma, APEX};
use crate::automata::{Dfa, FiniteAutomaton};
use crate::lang::KEYWORDS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Id,
    ConstS,
    ConstA,
    ConstB,
    Aop,
    Bop,
    Uop,
    Num,
    Len,
    Conc,
    Substr,
    Relop,
    If,
    While,
    Assign,
    Skip,
    Reflect,
    Rand,
}

pub const TOKENS: [Token; 18] = [
    Token::Id,
    Token::ConstS,
    Token::ConstA,
    Token::ConstB,
    Token::Aop,
    Token::Bop,
    Token::Uop,
    Token::Num,
    Token::Len,
    Token::Conc,
    Token::Substr,
    Token::Relop,
    Token::If,
    Token::While,
    Token::Assign,
    Token::Skip,
    Token::Reflect,
    Token::Rand,
];

/// Markers live in the private-use area, so they never collide with Σ.
const MARKER_BASE: u32 = 0xE000;

pub fn marker(t: Token) -> char {
    char::from_u32(MARKER_BASE + t as u32).expect("private-use code point")
}

pub fn token_of_marker(c: char) -> Option<Token> {
    let k = (c as u32).checked_sub(MARKER_BASE)?;
    TOKENS.get(k as usize).copied()
}

impl Token {
    pub fn name(self) -> &'static str {
        match self {
            Token::Id => "id",
            Token::ConstS => "const_s",
            Token::ConstA => "const_a",
            Token::ConstB => "const_b",
            Token::Aop => "aop",
            Token::Bop => "bop",
            Token::Uop => "uop",
            Token::Num => "num",
            Token::Len => "len",
            Token::Conc => "conc",
            Token::Substr => "substr",
            Token::Relop => "relop",
            Token::If => "if",
            Token::While => "while",
            Token::Assign => "assign",
            Token::Skip => "skip",
            Token::Reflect => "reflect",
            Token::Rand => "rand",
        }
    }

    pub fn from_name(name: &str) -> Option<Token> {
        TOKENS.iter().copied().find(|t| t.name() == name)
    }

    /// Lexemes ending in a letter or digit; two of these may not touch.
    fn ends_word(self) -> bool {
        matches!(
            self,
            Token::Id | Token::ConstA | Token::ConstB | Token::If | Token::While | Token::Skip
        )
    }

    pub(crate) fn lexemes(self) -> FiniteAutomaton {
        let lit = |ws: &[&str]| Dfa::from_strs(ws.iter().copied());
        match self {
            Token::Id => {
                let letters: Vec<char> = ('a'..='z').chain('A'..='Z').collect();
                let tail: Vec<char> =
                    letters.iter().copied().chain('0'..='9').chain(['_']).collect();
                let first = Dfa::words(letters.iter().map(|&c| vec![c]));
                first
                    .concat(&Dfa::universal(tail))
                    .minus(&Dfa::from_strs(KEYWORDS))
            }
            Token::ConstS => {
                let apex = lit(&["'"]);
                let body: Vec<char> = sigma().filter(|&c| c != APEX).collect();
                apex.concat(&Dfa::universal(body)).concat(&apex)
            }
            Token::ConstA => {
                let digit = Dfa::words(('0'..='9').map(|c| vec![c]));
                lit(&["", "-"]).concat(&digit).concat(&digit.star())
            }
            Token::ConstB => lit(&["true", "false"]),
            Token::Aop => lit(&["+", "-", "*"]),
            Token::Bop => lit(&["&"]),
            Token::Uop => lit(&["!"]),
            Token::Num => lit(&["num("]),
            Token::Len => lit(&["len("]),
            Token::Conc => lit(&["."]),
            Token::Substr => lit(&["ss(", ","]),
            Token::Relop => lit(&["=", "<", ">"]),
            Token::If => lit(&["if"]),
            Token::While => lit(&["while"]),
            Token::Assign => lit(&[":="]),
            Token::Skip => lit(&["skip"]),
            Token::Reflect => lit(&["reflect("]),
            Token::Rand => lit(&["rand("]),
        }
    }
}

/// Symbols passed through verbatim between lexemes.
pub(crate) const LEX_PUNCTUATION: [char; 5] = [';', '{', '}', ')', '$'];

/// Builds the lexer. Between tokens the state remembers whether the last
/// lexeme ended a word, so `ifx` is never split into `if` and `x`.
pub fn lex_sft() -> Sft {
    let mut sft = Sft::new();
    let free = 0;
    let after_word = sft.add_state();
    sft.finals.extend([free, after_word]);
    let pass: SymSet = LEX_PUNCTUATION.into_iter().chain([' ']).collect();
    for from in [free, after_word] {
        sft.add_rule(from, Guard::Set(pass.clone()), Output::Identity, free);
    }
    for tok in TOKENS {
        let dfa = tok.lexemes();
        let base = sft.num_states;
        sft.num_states += dfa.num_states();
        super::dfa_rules(&mut sft, &dfa, base);
        // Leave the between-token states straight into the lexeme automaton.
        for (&c, &t) in dfa.transitions(0) {
            sft.add_rule(free, Guard::Set([c].into()), Output::Identity, t + base);
            if !c.is_ascii_alphanumeric() {
                sft.add_rule(after_word, Guard::Set([c].into()), Output::Identity, t + base);
            }
        }
        let back = if tok.ends_word() { after_word } else { free };
        for f in dfa.final_states() {
            sft.add_rule(f + base, Guard::Epsilon, Output::Const(marker(tok)), back);
        }
    }
    sft.trim()
}
