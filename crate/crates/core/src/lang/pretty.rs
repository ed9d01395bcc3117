use super::ast::{Expr, Stmt, StmtKind};
use super::program::LabeledProgram;
use std::fmt::Write;

/// Renders a program in the compact concrete syntax accepted by the parser.
pub fn pretty_print(p: &LabeledProgram) -> String {
    let mut out = String::new();
    write_block(&mut out, &p.body);
    out.push('$');
    out
}

/// Renders a statement list without the terminator.
pub fn print_stmts(body: &[Stmt]) -> String {
    let mut out = String::new();
    write_block(&mut out, body);
    out
}

/// Renders a single statement, including its trailing `;`.
pub fn print_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    write_stmt(&mut out, s);
    out
}

fn write_block(out: &mut String, body: &[Stmt]) {
    for s in body {
        write_stmt(out, s);
    }
}

fn write_stmt(out: &mut String, s: &Stmt) {
    match &s.kind {
        StmtKind::Skip => out.push_str("skip;"),
        StmtKind::Assign(x, e) => {
            let _ = write!(out, "{x}:={};", print_expr(e));
        }
        StmtKind::AssignReflect(x, e) => {
            let _ = write!(out, "{x}:=reflect({});", print_expr(e));
        }
        StmtKind::Reflect(e) => {
            let _ = write!(out, "reflect({});", print_expr(e));
        }
        StmtKind::If(b, c) | StmtKind::While(b, c) => {
            let kw = if matches!(s.kind, StmtKind::If(..)) { "if" } else { "while" };
            let _ = write!(out, "{kw} {} {{", print_expr(b));
            write_block(out, c);
            out.push_str("};");
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Var(x) => x.clone(),
        Expr::Int(n) => n.to_string(),
        Expr::Bool(b) => b.to_string(),
        Expr::Str(s) => format!("'{s}'"),
        Expr::Rand => "rand()".into(),
        Expr::Len(s) => format!("len({})", print_expr(s)),
        Expr::Num(s) => format!("num({})", print_expr(s)),
        Expr::Substr(s, a, b) => {
            format!("ss({},{},{})", print_expr(s), print_expr(a), print_expr(b))
        }
        Expr::Not(b) => format!("!{}", print_expr(b)),
        Expr::And(a, b) => binary(a, "&", b),
        Expr::Cmp(op, a, b) => binary(a, op.symbol(), b),
        Expr::Arith(op, a, b) => binary(a, op.symbol(), b),
        Expr::Concat(a, b) => binary(a, ".", b),
    }
}

/// The surface syntax has no grouping parentheses, so operands are printed
/// as-is; trees produced by the parser always print back to themselves.
fn binary(a: &Expr, op: &str, b: &Expr) -> String {
    format!("{}{op}{}", print_expr(a), print_expr(b))
}
