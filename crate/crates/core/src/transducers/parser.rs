//! The statement parser transducer, generated from a small regular grammar.
//!
//! Grammar notation: `name = alternatives ;` with `|`, juxtaposition,
//! postfix `* + ?`, parentheses, quoted punctuation and `#` comments. Bare
//! names are token names unless defined as rules; rules may not recurse. The
//! first rule is the start symbol.

use super::lex::{lex_sft, marker, Token};
use super::{Guard, Output, Sft, SymSet};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Partial statements, one per edge label. `)` and spaces may appear between
/// any two terminals, so closing-parenthesis miscounts are tolerated.
pub const PARSER_GRAMMAR: &str = r#"
seq    = elem+ ;
elem   = skip ";"
       | id assign expr ";"
       | id assign reflect expr ";"
       | reflect expr ";"
       | if expr "{"
       | while expr "{"
       | "}" | "$" | ";" ;
expr   = prefix* atom (binop prefix* atom)* ;
prefix = uop | num | len | substr ;
atom   = id | const_s | const_a | const_b | rand ;
binop  = aop | bop | relop | conc | substr ;
"#;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("grammar syntax error near byte {0}")]
    Syntax(usize),
    #[error("unknown symbol `{0}`")]
    Unknown(String),
    #[error("rule `{0}` is recursive")]
    Recursive(String),
    #[error("empty grammar")]
    Empty,
}

#[derive(Clone, Debug)]
enum Re {
    Name(String),
    Lit(String),
    Seq(Vec<Re>),
    Alt(Vec<Re>),
    Star(Box<Re>),
    Plus(Box<Re>),
    Opt(Box<Re>),
}

struct GrammarParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl GrammarParser<'_> {
    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'#' {
                while self.src.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn name(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into())
    }

    fn expect(&mut self, c: u8) -> Result<(), GrammarError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(GrammarError::Syntax(self.pos))
        }
    }

    fn rules(&mut self) -> Result<Vec<(String, Re)>, GrammarError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            let name = self.name().ok_or(GrammarError::Syntax(self.pos))?;
            self.expect(b'=')?;
            let body = self.alt()?;
            self.expect(b';')?;
            out.push((name, body));
        }
        Ok(out)
    }

    fn alt(&mut self) -> Result<Re, GrammarError> {
        let mut alts = vec![self.seq()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            alts.push(self.seq()?);
        }
        Ok(if alts.len() == 1 { alts.pop().unwrap() } else { Re::Alt(alts) })
    }

    fn seq(&mut self) -> Result<Re, GrammarError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            let atom = match c {
                b'"' => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.src.get(self.pos).is_some_and(|&c| c != b'"') {
                        self.pos += 1;
                    }
                    if self.pos >= self.src.len() {
                        return Err(GrammarError::Syntax(start));
                    }
                    let text = String::from_utf8_lossy(&self.src[start..self.pos]).into();
                    self.pos += 1;
                    Re::Lit(text)
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.alt()?;
                    self.expect(b')')?;
                    inner
                }
                c if c.is_ascii_alphabetic() => Re::Name(self.name().unwrap()),
                _ => break,
            };
            let item = match self.src.get(self.pos) {
                Some(b'*') => Re::Star(Box::new(atom)),
                Some(b'+') => Re::Plus(Box::new(atom)),
                Some(b'?') => Re::Opt(Box::new(atom)),
                _ => {
                    items.push(atom);
                    continue;
                }
            };
            self.pos += 1;
            items.push(item);
        }
        Ok(Re::Seq(items))
    }
}

struct Builder<'g> {
    rules: &'g BTreeMap<String, Re>,
    sft: Sft,
    expanding: Vec<String>,
}

/// Symbols allowed between any two terminals.
fn gap() -> SymSet {
    [' ', ')'].into()
}

fn silent(sft: &mut Sft, from: usize, to: usize) {
    sft.add_rule(from, Guard::Epsilon, Output::Epsilon, to);
}

impl Builder<'_> {
    /// Thompson construction; returns the exit state of a fragment entered at `entry`.
    fn compile(&mut self, re: &Re, entry: usize) -> Result<usize, GrammarError> {
        match re {
            Re::Name(name) => {
                if let Some(body) = self.rules.get(name) {
                    if self.expanding.contains(name) {
                        return Err(GrammarError::Recursive(name.clone()));
                    }
                    self.expanding.push(name.clone());
                    let exit = self.compile(body, entry)?;
                    self.expanding.pop();
                    return Ok(exit);
                }
                let tok = Token::from_name(name).ok_or_else(|| GrammarError::Unknown(name.clone()))?;
                let chars: SymSet = tok.lexemes().alphabet();
                let start = self.terminal_entry(entry);
                let body = self.sft.add_state();
                let exit = self.sft.add_state();
                self.sft.add_rule(start, Guard::Set(chars.clone()), Output::Identity, body);
                self.sft.add_rule(body, Guard::Set(chars), Output::Identity, body);
                self.sft.add_rule(body, Guard::Set([marker(tok)].into()), Output::Epsilon, exit);
                Ok(exit)
            }
            Re::Lit(text) => {
                let mut q = self.terminal_entry(entry);
                for c in text.chars() {
                    let t = self.sft.add_state();
                    self.sft.add_rule(q, Guard::Set([c].into()), Output::Identity, t);
                    q = t;
                }
                Ok(q)
            }
            Re::Seq(items) => {
                let mut q = entry;
                for item in items {
                    q = self.compile(item, q)?;
                }
                Ok(q)
            }
            Re::Alt(alts) => {
                let exit = self.sft.add_state();
                for alt in alts {
                    let start = self.sft.add_state();
                    silent(&mut self.sft, entry, start);
                    let end = self.compile(alt, start)?;
                    silent(&mut self.sft, end, exit);
                }
                Ok(exit)
            }
            Re::Star(inner) | Re::Plus(inner) => {
                let start = self.sft.add_state();
                silent(&mut self.sft, entry, start);
                let end = self.compile(inner, start)?;
                let exit = self.sft.add_state();
                silent(&mut self.sft, end, start);
                silent(&mut self.sft, end, exit);
                if matches!(re, Re::Star(_)) {
                    silent(&mut self.sft, entry, exit);
                }
                Ok(exit)
            }
            Re::Opt(inner) => {
                let end = self.compile(inner, entry)?;
                silent(&mut self.sft, entry, end);
                Ok(end)
            }
        }
    }

    fn terminal_entry(&mut self, entry: usize) -> usize {
        let q = self.sft.add_state();
        silent(&mut self.sft, entry, q);
        self.sft.add_rule(q, Guard::Set(gap()), Output::Identity, q);
        q
    }
}

/// Compiles a grammar into a transducer that echoes lexeme symbols,
/// punctuation and spaces, and consumes token markers silently.
pub fn compile_grammar(text: &str) -> Result<Sft, GrammarError> {
    let list = GrammarParser { src: text.as_bytes(), pos: 0 }.rules()?;
    let start = list.first().ok_or(GrammarError::Empty)?.0.clone();
    let rules: BTreeMap<String, Re> = list.into_iter().collect();
    let mut b = Builder { rules: &rules, sft: Sft::new(), expanding: Vec::new() };
    let end = b.compile(&Re::Name(start), 0)?;
    let last = b.sft.add_state();
    silent(&mut b.sft, end, last);
    b.sft.add_rule(last, Guard::Set(gap()), Output::Identity, last);
    b.sft.finals.insert(last);
    Ok(b.sft.eliminate_silent().trim())
}

pub fn parser_sft() -> Sft {
    compile_grammar(PARSER_GRAMMAR).expect("built-in grammar is well formed")
}

/// `Lex ⋄ Parser`, built once.
pub fn lex_parser() -> &'static Sft {
    static CELL: OnceLock<Sft> = OnceLock::new();
    CELL.get_or_init(|| lex_sft().compose(&parser_sft()))
}
