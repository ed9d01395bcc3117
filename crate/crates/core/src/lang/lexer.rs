use super::ParseError;
use crate::alphabet::{in_sigma, APEX};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    If,
    While,
    Skip,
    Reflect,
    Rand,
    Len,
    Num,
    Ss,
    True,
    False,
    Assign,
    Plus,
    Minus,
    Star,
    Dot,
    Eq,
    Lt,
    Gt,
    Amp,
    Bang,
    LParen,
    RParen,
    Comma,
    Semi,
    LBrace,
    RBrace,
    Dollar,
}

pub const KEYWORDS: [&str; 10] =
    ["if", "while", "skip", "reflect", "rand", "len", "num", "ss", "true", "false"];

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "if" => Tok::If,
        "while" => Tok::While,
        "skip" => Tok::Skip,
        "reflect" => Tok::Reflect,
        "rand" => Tok::Rand,
        "len" => Tok::Len,
        "num" => Tok::Num,
        "ss" => Tok::Ss,
        "true" => Tok::True,
        "false" => Tok::False,
        _ => return None,
    })
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = keyword(&word).unwrap_or(Tok::Ident(word));
            // Call-like keywords are glued to their parenthesis, as in the
            // token grammar used to check generated code.
            let call = matches!(tok, Tok::Len | Tok::Num | Tok::Ss | Tok::Rand | Tok::Reflect);
            if call && chars.get(i) != Some(&'(') {
                return Err(err(tl, tc, format!("expected `(` right after {tok:?}")));
            }
            tok
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| err(tl, tc, format!("integer literal {digits} out of range")))?;
            Tok::Int(n)
        } else if c == APEX {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err(tl, tc, "unterminated string literal".into())),
                    Some(&APEX) => break,
                    Some(&d) if in_sigma(d) => s.push(d),
                    Some(&d) => {
                        return Err(err(tl, tc, format!("symbol {d:?} is not allowed in strings")))
                    }
                }
                i += 1;
            }
            i += 1;
            Tok::Str(s)
        } else if c == ':' && chars.get(i + 1) == Some(&'=') {
            i += 2;
            Tok::Assign
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '&' => Tok::Amp,
                '!' => Tok::Bang,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '$' => Tok::Dollar,
                _ => return Err(err(tl, tc, format!("unexpected symbol {c:?}"))),
            }
        };
        col += i - start;
        out.push(Spanned { tok, line: tl, col: tc });
    }
    Ok(out)
}
