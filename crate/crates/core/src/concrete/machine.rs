use super::{
    eval_expr, executable_subset, filter_condition, CollectingMemory, CollectingStore,
    ConcreteError, ValueSet,
};
use crate::lang::{pretty_print, Expr, Label, LabeledProgram, LineRef, StmtKind};
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

/// Bounds that keep the explorer finite.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Longest explored trace, in transitions.
    pub max_len: usize,
    /// Deepest allowed nesting of reflected programs.
    pub max_tower: usize,
    /// Cap on distinct states per exploration.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_len: 64, max_tower: 10, max_states: 200_000 }
    }
}

/// A configuration of the transition system: the next line to execute and
/// the flow-sensitive store.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub pc: Label,
    pub store: Arc<CollectingStore>,
}

impl State {
    /// Memory at the line about to execute.
    pub fn current(&self) -> CollectingMemory {
        self.store.get(self.pc)
    }
}

/// All states reachable within the bounds, in breadth-first order.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub end_label: Label,
    pub states: Vec<State>,
    pub depth: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
    /// Some state at the depth bound still had successors.
    pub truncated: bool,
}

impl Exploration {
    /// Blocking states, shallowest first.
    pub fn finals(&self) -> impl Iterator<Item = &State> {
        self.states.iter().filter(|s| s.pc == self.end_label)
    }

    pub fn first_final(&self) -> Option<&State> {
        self.finals().next()
    }

    /// Join of the `$`-line memories over every blocking state; `None` if no
    /// run terminated within the bounds.
    pub fn exit_memory(&self) -> Option<CollectingMemory> {
        self.finals()
            .map(|s| s.store.get(self.end_label))
            .reduce(|a, b| a.join(&b))
    }

    /// Per-line join over every visited state.
    pub fn line_join(&self) -> CollectingStore {
        let mut out = CollectingStore::new();
        for s in &self.states {
            for (l, m) in s.store.lines() {
                out.join_at(l, m);
            }
        }
        out
    }

    /// Maximal paths from the initial state, as state indices. Stops after
    /// `limit` paths.
    pub fn paths(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            return out;
        }
        let mut stack = vec![vec![0usize]];
        while let Some(path) = stack.pop() {
            if out.len() >= limit {
                break;
            }
            let last = *path.last().unwrap();
            let next: Vec<usize> = self.successors[last]
                .iter()
                .copied()
                .filter(|n| !path.contains(n))
                .collect();
            if next.is_empty() {
                out.push(path);
                continue;
            }
            for n in next.into_iter().rev() {
                let mut p = path.clone();
                p.push(n);
                stack.push(p);
            }
        }
        out
    }
}

/// Explorer with a cache of reflected sub-runs.
pub struct Machine {
    pub limits: Limits,
    cache: HashMap<(String, CollectingMemory, usize), Option<CollectingMemory>>,
}

impl Machine {
    pub fn new(limits: Limits) -> Self {
        Machine { limits, cache: HashMap::new() }
    }

    /// Breadth-first exploration of `p` from `init` at tower height `depth`.
    pub fn explore(
        &mut self,
        p: &LabeledProgram,
        init: CollectingStore,
        depth: usize,
    ) -> Result<Exploration, ConcreteError> {
        let root = State { pc: p.entry(), store: Arc::new(init) };
        let mut ex = Exploration {
            end_label: p.end_label,
            states: vec![root.clone()],
            depth: vec![0],
            successors: vec![Vec::new()],
            truncated: false,
        };
        let mut index: HashMap<State, usize> = HashMap::from([(root, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let state = ex.states[i].clone();
            if state.pc == p.end_label {
                continue;
            }
            if ex.depth[i] >= self.limits.max_len {
                ex.truncated = true;
                continue;
            }
            for next in self.step(p, &state, depth)? {
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if ex.states.len() >= self.limits.max_states {
                            return Err(ConcreteError::StateLimit(self.limits.max_states));
                        }
                        let j = ex.states.len();
                        index.insert(next.clone(), j);
                        ex.states.push(next);
                        ex.depth.push(ex.depth[i] + 1);
                        ex.successors.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                if !ex.successors[i].contains(&j) {
                    ex.successors[i].push(j);
                }
            }
        }
        Ok(ex)
    }

    fn advance(state: &State, to: Label, m: &CollectingMemory) -> State {
        let mut store = (*state.store).clone();
        store.join_at(to, m);
        State { pc: to, store: Arc::new(store) }
    }

    fn eval(e: &Expr, m: &CollectingMemory, line: Label) -> Result<ValueSet, ConcreteError> {
        eval_expr(e, m).map_err(|err| match err {
            ConcreteError::Type { msg, .. } => ConcreteError::Type { line, msg },
            other => other,
        })
    }

    /// One-step successors of a non-blocking state.
    pub fn step(
        &mut self,
        p: &LabeledProgram,
        state: &State,
        depth: usize,
    ) -> Result<Vec<State>, ConcreteError> {
        let l = state.pc;
        let Some(LineRef::Stmt(stmt)) = p.stm(l) else {
            return Ok(Vec::new());
        };
        let m = state.current();
        let next = p.next(l);
        let out = match &stmt.kind {
            StmtKind::Skip => vec![Self::advance(state, next, &m)],
            StmtKind::Assign(x, e) => {
                let mut m2 = m.clone();
                m2.set(x, Self::eval(e, &m, l)?);
                vec![Self::advance(state, next, &m2)]
            }
            StmtKind::If(b, body) | StmtKind::While(b, body) => {
                let vals = Self::eval(b, &m, l)?;
                if vals.bools.is_empty() && !vals.is_empty() {
                    return Err(ConcreteError::Type { line: l, msg: "condition is not Boolean".into() });
                }
                let mut out = Vec::new();
                for (polarity, target) in [(true, body[0].label), (false, next)] {
                    if vals.bools.contains(&polarity) {
                        out.push(Self::advance(state, target, &filter_condition(b, &m, polarity)));
                    }
                }
                out
            }
            StmtKind::Reflect(s) | StmtKind::AssignReflect(_, s) => {
                let vals = Self::eval(s, &m, l)?;
                let programs = executable_subset(&vals.strs);
                let target = match &stmt.kind {
                    StmtKind::AssignReflect(x, _) => Some(x),
                    _ => None,
                };
                if programs.is_empty() {
                    let mut m2 = m.clone();
                    if let Some(x) = target {
                        m2.set(x, vals);
                    }
                    return Ok(vec![Self::advance(state, next, &m2)]);
                }
                let mut exit: Option<CollectingMemory> = None;
                for (_, prog) in &programs {
                    if let Some(e) = self.sub_run(prog, &m, depth + 1, l)? {
                        exit = Some(exit.map_or(e.clone(), |acc| acc.join(&e)));
                    }
                }
                // A reflected run that never terminates has no successor.
                let Some(mut exit) = exit else { return Ok(Vec::new()) };
                if let Some(x) = target {
                    let mut m2 = m.clone();
                    m2.set(x, ValueSet::strs([""]));
                    exit = exit.join(&m2);
                }
                vec![Self::advance(state, next, &exit)]
            }
        };
        Ok(out)
    }

    fn sub_run(
        &mut self,
        prog: &LabeledProgram,
        m: &CollectingMemory,
        depth: usize,
        site: Label,
    ) -> Result<Option<CollectingMemory>, ConcreteError> {
        if depth > self.limits.max_tower {
            return Err(ConcreteError::TowerDivergence { line: site });
        }
        let key = (pretty_print(prog), m.clone(), depth);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let ex = self
            .explore(prog, CollectingStore::entry(m.clone()), depth)
            .map_err(|e| match e {
                ConcreteError::TowerDivergence { .. } => ConcreteError::TowerDivergence { line: site },
                other => other,
            })?;
        let exit = ex.exit_memory();
        self.cache.insert(key, exit.clone());
        Ok(exit)
    }
}

/// Bounded trace prefixes of `p` from `init`, projected on stores.
pub fn run_traces(
    p: &LabeledProgram,
    init: CollectingStore,
    max_len: usize,
    max_tower: usize,
) -> Result<Vec<Vec<CollectingStore>>, ConcreteError> {
    let limits = Limits { max_len, max_tower, ..Limits::default() };
    let ex = Machine::new(limits).explore(p, init, 0)?;
    Ok(ex
        .paths(10_000)
        .into_iter()
        .map(|path| path.into_iter().map(|i| (*ex.states[i].store).clone()).collect())
        .collect())
}
