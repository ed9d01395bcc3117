use super::ast::{strip_labels, Label, Stmt, StmtKind};

/// A labeled CommS program: statements labeled 1.. in textual order and the
/// terminal `$` labeled `end_label`.
#[derive(Clone, Debug)]
pub struct LabeledProgram {
    pub body: Vec<Stmt>,
    pub end_label: Label,
    /// Index `l - 1` holds the statement labeled `l` (the last entry is `$`).
    lines: Vec<Line>,
}

#[derive(Clone, Debug)]
struct Line {
    stmt: Option<Stmt>,
    next: Label,
}

/// What sits at a program line.
#[derive(Clone, Copy, Debug)]
pub enum LineRef<'a> {
    Stmt(&'a Stmt),
    End,
}

impl PartialEq for LabeledProgram {
    fn eq(&self, other: &Self) -> bool {
        self.end_label == other.end_label && self.body == other.body
    }
}

impl Eq for LabeledProgram {}

impl LabeledProgram {
    /// Statement at line `l` (the function stm of the program).
    pub fn stm(&self, l: Label) -> Option<LineRef<'_>> {
        let line = self.lines.get(l.checked_sub(1)?)?;
        Some(match &line.stmt {
            Some(s) => LineRef::Stmt(s),
            None => LineRef::End,
        })
    }

    /// Label reached once the statement at `l` completes without branching
    /// into a body.
    pub fn next(&self, l: Label) -> Label {
        self.lines[l - 1].next
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        1..=self.end_label
    }

    /// First label of the program (the `$` label for the empty program).
    pub fn entry(&self) -> Label {
        1
    }

    /// Labels of all `while` statements (loop heads).
    pub fn loop_heads(&self) -> Vec<Label> {
        self.lines
            .iter()
            .filter_map(|line| match &line.stmt {
                Some(Stmt { label, kind: StmtKind::While(..) }) => Some(*label),
                _ => None,
            })
            .collect()
    }

    /// The body with every label reset to 0.
    pub fn unlabeled(&self) -> Vec<Stmt> {
        strip_labels(&self.body)
    }
}

/// Labels `body` deterministically: statements in textual order from 1, then `$`.
pub fn label(body: Vec<Stmt>) -> LabeledProgram {
    let mut counter = 0;
    let body = assign_labels(body, &mut counter);
    let end_label = counter + 1;
    let mut lines: Vec<Option<Line>> = vec![None; end_label];
    lines[end_label - 1] = Some(Line { stmt: None, next: end_label });
    link(&body, end_label, &mut lines);
    let lines = lines.into_iter().map(|l| l.expect("every label is linked")).collect();
    LabeledProgram { body, end_label, lines }
}

fn assign_labels(body: Vec<Stmt>, counter: &mut Label) -> Vec<Stmt> {
    body.into_iter()
        .map(|s| {
            *counter += 1;
            let label = *counter;
            let kind = match s.kind {
                StmtKind::If(b, c) => StmtKind::If(b, assign_labels(c, counter)),
                StmtKind::While(b, c) => StmtKind::While(b, assign_labels(c, counter)),
                k => k,
            };
            Stmt { label, kind }
        })
        .collect()
}

fn link(block: &[Stmt], after: Label, lines: &mut [Option<Line>]) {
    for (i, s) in block.iter().enumerate() {
        let next = block.get(i + 1).map_or(after, |n| n.label);
        match &s.kind {
            StmtKind::If(_, c) => link(c, next, lines),
            StmtKind::While(_, c) => link(c, s.label, lines),
            _ => {}
        }
        lines[s.label - 1] = Some(Line { stmt: Some(s.clone()), next });
    }
}
