//! Syntax of CommS: AST, labeling, source parsing and printing.
//!
//! ```text
//! a ::= x | n | rand() | len(s) | num(s) | a+a | a-a | a*a
//! b ::= x | true | false | e=e | e>e | e<e | b&b | !b
//! s ::= x | '' | 'σ' | s.σ | ss(s,a,a)
//! c ::= skip; | x:=e; | c c | if b {c}; | while b {c}; | reflect(s); | x:=reflect(s);
//! P ::= c $
//! ```
//!
//! Multi-symbol literals such as `'ab'` and concatenation of two arbitrary
//! string expressions (`s.t`) are accepted as surface forms.

mod ast;
mod lexer;
mod parser;
mod pretty;
mod program;

pub use ast::{program_vars, strip_labels, ArithOp, CmpOp, Expr, Label, Stmt, StmtKind};
pub use lexer::KEYWORDS;
pub use parser::{parse_executable, parse_expr, parse_program, parse_program_with, ParseOptions};
pub use pretty::{pretty_print, print_expr, print_stmt, print_stmts};
pub use program::{label, LabeledProgram, LineRef};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("missing terminator `$`")]
    MissingTerminator,
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_COUNT: &str =
        "x:=1;str:='';while x<3 {str:='x:=x+1;'.str; reflect(str);};$";

    #[test]
    fn smallest_program_has_two_labels() {
        let p = parse_program("x:=1;$").unwrap();
        assert_eq!(p.end_label, 2);
        assert!(matches!(p.stm(1), Some(LineRef::Stmt(s)) if s.label == 1));
        assert!(matches!(p.stm(2), Some(LineRef::End)));
        assert!(p.stm(3).is_none());
    }

    #[test]
    fn counting_example_is_labeled_one_to_six() {
        let p = parse_program(EXAMPLE_COUNT).unwrap();
        assert_eq!(p.end_label, 6);
        let kinds: Vec<&str> = p
            .labels()
            .map(|l| match p.stm(l).unwrap() {
                LineRef::End => "$",
                LineRef::Stmt(s) => match s.kind {
                    StmtKind::Assign(..) => "assign",
                    StmtKind::While(..) => "while",
                    StmtKind::Reflect(_) => "reflect",
                    _ => "other",
                },
            })
            .collect();
        assert_eq!(kinds, ["assign", "assign", "while", "assign", "reflect", "$"]);
        assert_eq!(p.next(5), 3);
        assert_eq!(p.next(3), 6);
        assert_eq!(p.loop_heads(), vec![3]);
    }

    #[test]
    fn missing_rhs_is_a_syntax_error() {
        assert!(matches!(parse_program("x:=;$"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn missing_dollar_is_reported() {
        assert_eq!(parse_program("x:=1;").unwrap_err(), ParseError::MissingTerminator);
    }

    #[test]
    fn labeling_matches_statement_order() {
        let p = parse_program("x:=x+1;$").unwrap();
        assert_eq!(p.end_label, 2);
        let p = parse_program("x:=x+1;x:=x+1;$").unwrap();
        assert_eq!(p.end_label, 3);
        let p = parse_program("$").unwrap();
        assert_eq!(p.end_label, 1);
        assert!(matches!(p.stm(1), Some(LineRef::End)));
    }

    #[test]
    fn relabeling_is_idempotent() {
        let p = parse_program(EXAMPLE_COUNT).unwrap();
        let q = label(p.unlabeled());
        assert_eq!(p, q);
    }

    #[test]
    fn pretty_print_round_trips() {
        let p = parse_program("x:=1;$").unwrap();
        assert_eq!(pretty_print(&p), "x:=1;$");
        for src in [
            EXAMPLE_COUNT,
            "if x>0 {y:='a:=a+1;';}; if x<0 {y:='b:=b+1;';}; reflect(y);$",
            "while !x=1&true {if b {z:=ss(s,1,len(s)-1);};};$",
            "x:=-3*y+num('12');s:=s.'$';v:=reflect(s);$",
        ] {
            let p = parse_program(src).unwrap();
            let text = pretty_print(&p);
            assert_eq!(parse_program(&text).unwrap(), p, "{text}");
        }
    }

    #[test]
    fn nested_blocks_print_balanced_braces() {
        let p = parse_program("while x<3 {if y=1 {x:=x+1;};};$").unwrap();
        let text = pretty_print(&p);
        assert_eq!(text.matches('{').count(), text.matches('}').count());
    }

    #[test]
    fn reserved_identifiers_need_opt_in() {
        assert!(parse_program("_g1:=rand();$").is_err());
        let opts = ParseOptions { allow_reserved: true };
        assert!(parse_program_with("_g1:=rand();$", opts).is_ok());
    }

    #[test]
    fn executable_strings_may_omit_the_terminator() {
        assert!(parse_executable("x:=x+1;$").is_some());
        assert!(parse_executable("x:=x+1;").is_some());
        assert!(parse_executable("hello").is_none());
        assert_eq!(parse_executable("").unwrap().end_label, 1);
    }

    #[test]
    fn every_statement_needs_its_semicolon() {
        assert!(parse_program("if x>0 {y:=1};$").is_err());
        assert!(parse_program("if x>0 {y:=1;};$").is_ok());
    }
}
