use super::{ExeError, Regex};
use crate::lang::{label, parse_program, CmpOp, Expr, LabeledProgram, LineRef, Stmt, StmtKind};

/// Prefix of synthesized guard variables. The source parser rejects it in
/// user identifiers, so guards never capture program variables.
pub const GUARD_PREFIX: &str = "_g";

pub fn is_guard(var: &str) -> bool {
    var.starts_with(GUARD_PREFIX)
}

/// What a single statement label contributes to the program being built.
#[derive(Clone, Debug, PartialEq)]
pub enum Fragment {
    Stmt(Stmt),
    Open { is_loop: bool, cond: Expr },
    Close,
    /// `;` after a block, or the terminator.
    Nothing,
}

/// Reads one statement label with the source parser. `None` when the label
/// is not a well-formed piece of a program.
pub fn parse_fragment(label_text: &str) -> Option<Fragment> {
    let text = label_text.trim_start();
    match text {
        ";" | "$" => return Some(Fragment::Nothing),
        "}" => return Some(Fragment::Close),
        _ => {}
    }
    if let Some(head) = text.strip_suffix('{') {
        let p = parse_program(&format!("{head}{{skip;}};$")).ok()?;
        return match only_stmt(&p)?.kind.clone() {
            StmtKind::If(cond, _) => Some(Fragment::Open { is_loop: false, cond }),
            StmtKind::While(cond, _) => Some(Fragment::Open { is_loop: true, cond }),
            _ => None,
        };
    }
    if !text.ends_with(';') {
        return None;
    }
    let p = parse_program(&format!("{text}$")).ok()?;
    let s = only_stmt(&p)?;
    (!matches!(s.kind, StmtKind::If(..) | StmtKind::While(..))).then(|| Fragment::Stmt(s.clone()))
}

fn only_stmt(p: &LabeledProgram) -> Option<&Stmt> {
    match (p.body.len(), p.stm(1)) {
        (1, Some(LineRef::Stmt(s))) => Some(s),
        _ => None,
    }
}

struct Frame {
    head: Option<(bool, Expr)>,
    body: Vec<Stmt>,
}

struct Synth {
    guards: usize,
}

impl Synth {
    fn fresh(&mut self) -> String {
        self.guards += 1;
        format!("{GUARD_PREFIX}{}", self.guards)
    }

    fn push(frames: &mut [Frame], s: Stmt) {
        frames.last_mut().expect("root frame").body.push(s);
    }

    /// Translates a sub-expression that must be block-balanced on its own.
    fn closed(&mut self, r: &Regex) -> Result<Vec<Stmt>, ExeError> {
        let mut frames = vec![Frame { head: None, body: Vec::new() }];
        self.emit(r, &mut frames)?;
        if frames.len() != 1 {
            return Err(ExeError::UnbalancedBlocks);
        }
        let body = frames.pop().unwrap().body;
        Ok(if body.is_empty() { vec![Stmt::new(StmtKind::Skip)] } else { body })
    }

    fn emit(&mut self, r: &Regex, frames: &mut Vec<Frame>) -> Result<(), ExeError> {
        match r {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Atom(text) => match parse_fragment(text).ok_or_else(|| ExeError::InvalidAtom(text.clone()))? {
                Fragment::Nothing => {}
                Fragment::Stmt(s) => Self::push(frames, s),
                Fragment::Open { is_loop, cond } => {
                    frames.push(Frame { head: Some((is_loop, cond)), body: Vec::new() })
                }
                Fragment::Close => {
                    let frame = frames.pop().expect("root frame");
                    let Some((is_loop, cond)) = frame.head else {
                        return Err(ExeError::UnbalancedBlocks);
                    };
                    let body = if frame.body.is_empty() { vec![Stmt::new(StmtKind::Skip)] } else { frame.body };
                    let kind = if is_loop { StmtKind::While(cond, body) } else { StmtKind::If(cond, body) };
                    Self::push(frames, Stmt::new(kind));
                }
            },
            Regex::Concat(rs) => {
                for r in rs {
                    self.emit(r, frames)?;
                }
            }
            Regex::Star(inner) => {
                let g = self.fresh();
                let mut body = self.closed(inner)?;
                body.push(draw(&g));
                Self::push(frames, draw(&g));
                Self::push(frames, Stmt::new(StmtKind::While(guard_is(&g, 1), body)));
            }
            Regex::Alt(rs) => {
                let g = self.fresh();
                let (first, rest) = rs.split_first().expect("alternation has branches");
                let left = self.closed(first)?;
                let right = match rest {
                    [only] => self.closed(only)?,
                    _ => self.closed(&Regex::Alt(rest.to_vec()))?,
                };
                Self::push(frames, draw(&g));
                Self::push(frames, Stmt::new(StmtKind::If(guard_is(&g, 1), left)));
                Self::push(frames, Stmt::new(StmtKind::If(guard_is(&g, 2), right)));
            }
        }
        Ok(())
    }
}

fn draw(g: &str) -> Stmt {
    Stmt::new(StmtKind::Assign(g.to_string(), Expr::Rand))
}

fn guard_is(g: &str, k: i64) -> Expr {
    Expr::cmp(CmpOp::Eq, Expr::var(g), Expr::Int(k))
}

/// Program whose runs cover every statement sequence of `r`. Each star and
/// each alternation gets a fresh guard drawn from `rand()`, numbered in
/// pre-order.
pub fn prog_syn(r: &Regex) -> Result<LabeledProgram, ExeError> {
    let mut synth = Synth { guards: 0 };
    let mut frames = vec![Frame { head: None, body: Vec::new() }];
    synth.emit(r, &mut frames)?;
    if frames.len() != 1 {
        return Err(ExeError::UnbalancedBlocks);
    }
    Ok(label(frames.pop().unwrap().body))
}
