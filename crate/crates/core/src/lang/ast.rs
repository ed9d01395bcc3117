use std::collections::BTreeSet;

/// Program line label. Labels start at 1.
pub type Label = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Lt,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
        }
    }
}

/// Untyped expression tree. Arithmetic, Boolean and string expressions share
/// one type because a bare variable can denote any of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Int(i64),
    Bool(bool),
    /// String literal. A literal of length > 1 stands for `''` followed by
    /// one single-symbol append per character.
    Str(String),
    Rand,
    Len(Box<Expr>),
    Num(Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    /// `ss(s, from, count)`: `count` symbols starting at the 1-based position `from`.
    Substr(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn arith(op: ArithOp, l: Expr, r: Expr) -> Expr {
        Expr::Arith(op, Box::new(l), Box::new(r))
    }

    pub fn cmp(op: CmpOp, l: Expr, r: Expr) -> Expr {
        Expr::Cmp(op, Box::new(l), Box::new(r))
    }

    pub fn concat(l: Expr, r: Expr) -> Expr {
        Expr::Concat(Box::new(l), Box::new(r))
    }

    /// Free variables, in sorted order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Int(_) | Expr::Bool(_) | Expr::Str(_) | Expr::Rand => {}
            Expr::Len(e) | Expr::Num(e) | Expr::Not(e) => e.collect_vars(out),
            Expr::Arith(_, a, b) | Expr::Cmp(_, a, b) | Expr::And(a, b) | Expr::Concat(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Substr(s, a, b) => {
                s.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StmtKind {
    Skip,
    Assign(String, Expr),
    If(Expr, Vec<Stmt>),
    While(Expr, Vec<Stmt>),
    Reflect(Expr),
    AssignReflect(String, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stmt {
    pub label: Label,
    pub kind: StmtKind,
}

impl Stmt {
    /// An unlabeled statement; [`label`](crate::lang::label) fixes the label.
    pub fn new(kind: StmtKind) -> Stmt {
        Stmt { label: 0, kind }
    }
}

/// Strips labels so that structurally equal programs compare equal.
pub fn strip_labels(body: &[Stmt]) -> Vec<Stmt> {
    body.iter()
        .map(|s| Stmt {
            label: 0,
            kind: match &s.kind {
                StmtKind::If(b, c) => StmtKind::If(b.clone(), strip_labels(c)),
                StmtKind::While(b, c) => StmtKind::While(b.clone(), strip_labels(c)),
                k => k.clone(),
            },
        })
        .collect()
}

/// Variables read or written anywhere in a statement list.
pub fn program_vars(body: &[Stmt]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for s in body {
        match &s.kind {
            StmtKind::Skip => {}
            StmtKind::Assign(x, e) | StmtKind::AssignReflect(x, e) => {
                out.insert(x.clone());
                out.extend(e.vars());
            }
            StmtKind::Reflect(e) => out.extend(e.vars()),
            StmtKind::If(b, c) | StmtKind::While(b, c) => {
                out.extend(b.vars());
                out.extend(program_vars(c));
            }
        }
    }
    out
}
