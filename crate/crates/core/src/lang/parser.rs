use super::ast::{ArithOp, CmpOp, Expr, Stmt, StmtKind};
use super::lexer::{tokenize, Spanned, Tok};
use super::program::{label, LabeledProgram};
use super::ParseError;

/// Parser switches.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept identifiers starting with `_`, the namespace reserved for
    /// synthesized guard variables.
    pub allow_reserved: bool,
}

/// Parses a complete program terminated by `$`.
pub fn parse_program(src: &str) -> Result<LabeledProgram, ParseError> {
    parse_program_with(src, ParseOptions::default())
}

pub fn parse_program_with(src: &str, opts: ParseOptions) -> Result<LabeledProgram, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, opts };
    let body = p.stmts()?;
    match p.peek() {
        Some(Tok::Dollar) => {
            p.pos += 1;
        }
        None => return Err(ParseError::MissingTerminator),
        Some(t) => return Err(p.error(format!("unexpected {}", describe(t)))),
    }
    if let Some(t) = p.peek() {
        return Err(p.error(format!("{} after the terminator `$`", describe(t))));
    }
    Ok(label(body))
}

/// Parses a single expression (used by the CLI and by tests).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, opts: ParseOptions::default() };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

/// Whether a string value denotes an executable program: either it parses as
/// written or it parses once the terminator `$` is appended.
pub fn parse_executable(value: &str) -> Option<LabeledProgram> {
    match parse_program(value) {
        Ok(p) => Some(p),
        Err(ParseError::MissingTerminator) => parse_program(&format!("{value}$")).ok(),
        Err(_) => None,
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(x) => format!("identifier `{x}`"),
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Str(s) => format!("string '{s}'"),
        other => format!("{other:?}"),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    opts: ParseOptions,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn error(&self, msg: String) -> ParseError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.col),
            None => (1, 1),
        };
        ParseError::Syntax { line, col, msg }
    }

    /// Whether token `i + 1` starts right where token `i` (one symbol long) ends.
    fn glued(&self, i: usize) -> bool {
        match (self.toks.get(i), self.toks.get(i + 1)) {
            (Some(a), Some(b)) => a.line == b.line && a.col + 1 == b.col,
            _ => false,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {want:?}, found {}", describe(t)))),
            None => Err(ParseError::MissingTerminator),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn stmts(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        while !matches!(self.peek(), None | Some(Tok::Dollar) | Some(Tok::RBrace)) {
            out.push(self.stmt()?);
        }
        Ok(out)
    }


    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                if x.starts_with('_') && !self.opts.allow_reserved {
                    return Err(self.error(format!("identifier `{x}` uses the reserved `_` prefix")));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(t) => Err(self.error(format!("expected identifier, found {}", describe(&t)))),
            None => Err(ParseError::MissingTerminator),
        }
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(Tok::LBrace)?;
        let body = self.stmts()?;
        if body.is_empty() {
            return Err(self.error("empty block".into()));
        }
        self.expect(Tok::RBrace)?;
        Ok(body)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let kind = match self.peek() {
            Some(Tok::Skip) => {
                self.pos += 1;
                StmtKind::Skip
            }
            Some(Tok::If) => {
                self.pos += 1;
                let b = self.expr()?;
                StmtKind::If(b, self.block()?)
            }
            Some(Tok::While) => {
                self.pos += 1;
                let b = self.expr()?;
                StmtKind::While(b, self.block()?)
            }
            Some(Tok::Reflect) => {
                self.pos += 1;
                StmtKind::Reflect(self.call_arg()?)
            }
            Some(Tok::Ident(_)) => {
                let x = self.ident()?;
                self.expect(Tok::Assign)?;
                if self.peek() == Some(&Tok::Reflect) {
                    self.pos += 1;
                    StmtKind::AssignReflect(x, self.call_arg()?)
                } else {
                    let e = self.expr()?;
                    StmtKind::Assign(x, e)
                }
            }
            Some(t) => return Err(self.error(format!("expected a statement, found {}", describe(t)))),
            None => return Err(ParseError::MissingTerminator),
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt::new(kind))
    }

    fn call_arg(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.not()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.not()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(Expr::Not(Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.sum()?;
        let op = match self.peek() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Gt) => CmpOp::Gt,
            _ => return Ok(lhs),
        };
        self.pos += 1;
        let rhs = self.sum()?;
        Ok(Expr::cmp(op, lhs, rhs))
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.prod()?;
        loop {
            lhs = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    Expr::arith(ArithOp::Add, lhs, self.prod()?)
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    Expr::arith(ArithOp::Sub, lhs, self.prod()?)
                }
                Some(Tok::Dot) => {
                    self.pos += 1;
                    Expr::concat(lhs, self.prod()?)
                }
                _ => return Ok(lhs),
            };
        }
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        while self.eat(&Tok::Star) {
            lhs = Expr::arith(ArithOp::Mul, lhs, self.primary()?);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return Err(ParseError::MissingTerminator),
        };
        let e = match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Expr::Int(n)
            }
            Tok::Minus if matches!(self.peek_at(1), Some(Tok::Int(_))) && self.glued(self.pos) => {
                let Some(Tok::Int(n)) = self.peek_at(1).cloned() else { unreachable!() };
                self.pos += 2;
                Expr::Int(-n)
            }
            Tok::True => {
                self.pos += 1;
                Expr::Bool(true)
            }
            Tok::False => {
                self.pos += 1;
                Expr::Bool(false)
            }
            Tok::Str(s) => {
                self.pos += 1;
                Expr::Str(s)
            }
            Tok::Rand => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                self.expect(Tok::RParen)?;
                Expr::Rand
            }
            Tok::Len => {
                self.pos += 1;
                Expr::Len(Box::new(self.call_arg()?))
            }
            Tok::Num => {
                self.pos += 1;
                Expr::Num(Box::new(self.call_arg()?))
            }
            Tok::Ss => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let s = self.expr()?;
                self.expect(Tok::Comma)?;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RParen)?;
                Expr::Substr(Box::new(s), Box::new(a), Box::new(b))
            }
            Tok::Ident(_) => Expr::Var(self.ident()?),
            t => return Err(self.error(format!("expected an expression, found {}", describe(&t)))),
        };
        Ok(e)
    }
}
