use super::{
    abs_eval, abs_filter, Analysis, AnalysisConfig, AnalysisError, SiteOutcome, SiteRecord, Warning,
    WarningKind,
};
use crate::alphabet::sigma;
use crate::automata::{Dot, FiniteAutomaton};
use crate::domain::{AbstVal, AbstractMemory, AbstractStore, WidenParams};
use crate::exe::{exe_pipeline, is_guard, Synthesis};
use crate::lang::{parse_executable, pretty_print, program_vars, Label, LabeledProgram, LineRef, StmtKind};
use std::collections::{BTreeMap, BTreeSet};

/// Words inspected when deciding whether a reflect site can fall through.
const FALL_THROUGH_WORDS: usize = 64;

/// Analyzes `p` from `init` at line 1.
pub fn analyze(p: &LabeledProgram, init: AbstractMemory, cfg: &AnalysisConfig) -> Result<Analysis, AnalysisError> {
    cfg.validate()?;
    analyze_from(p, init, cfg, 0, &BTreeSet::new())
}

/// Analysis at reflection depth `depth`. `outer` holds the variables of the
/// enclosing programs, which a tower cutoff may have to clobber.
pub fn analyze_from(
    p: &LabeledProgram,
    init: AbstractMemory,
    cfg: &AnalysisConfig,
    depth: usize,
    outer: &BTreeSet<String>,
) -> Result<Analysis, AnalysisError> {
    let mut scope = outer.clone();
    scope.extend(program_vars(&p.body).into_iter().filter(|x| !is_guard(x)));
    let assigns = p
        .labels()
        .filter(|&l| {
            matches!(p.stm(l), Some(LineRef::Stmt(s))
                if matches!(s.kind, StmtKind::Assign(..) | StmtKind::AssignReflect(..) | StmtKind::Reflect(_)))
        })
        .collect();
    let mut engine = Engine {
        p,
        cfg,
        params: cfg.widen_params(),
        depth,
        scope,
        store: AbstractStore::new(),
        updates: BTreeMap::new(),
        loop_heads: p.loop_heads().into_iter().collect(),
        assigns,
        sites: BTreeMap::new(),
        warnings: BTreeMap::new(),
    };
    let iterations = engine.run(init)?;
    Ok(Analysis {
        depth,
        program: pretty_print(p),
        store: engine.store,
        sites: engine.sites.into_values().collect(),
        warnings: engine.warnings.into_values().collect(),
        iterations,
    })
}

struct Engine<'a> {
    p: &'a LabeledProgram,
    cfg: &'a AnalysisConfig,
    params: WidenParams,
    depth: usize,
    scope: BTreeSet<String>,
    store: AbstractStore,
    updates: BTreeMap<(Label, Label), usize>,
    loop_heads: BTreeSet<Label>,
    assigns: BTreeSet<Label>,
    sites: BTreeMap<Label, SiteRecord>,
    warnings: BTreeMap<(Label, u8), Warning>,
}

impl Engine<'_> {
    fn run(&mut self, init: AbstractMemory) -> Result<usize, AnalysisError> {
        for l in self.p.labels() {
            self.store.set(l, AbstractMemory::unreachable());
        }
        let entry = self.p.entry();
        self.store.set(entry, init);
        let mut work = BTreeSet::from([entry]);
        let mut iterations = 0;
        while let Some(l) = work.pop_first() {
            iterations += 1;
            if iterations > self.cfg.max_iterations {
                return Err(AnalysisError::Budget(self.cfg.max_iterations, self.depth));
            }
            let m = self.store.get(l);
            if !m.is_reachable() {
                continue;
            }
            for (target, out) in self.transfer(l, &m)? {
                if self.update(l, target, &out) {
                    work.insert(target);
                }
            }
        }
        Ok(iterations)
    }

    /// Joins `m`, flowing along the edge from `from`, into line `l`.
    /// Assignment edges and edges into loop heads widen once they have
    /// contributed `loop_widen_delay` times. Reports whether the line changed.
    fn update(&mut self, from: Label, l: Label, m: &AbstractMemory) -> bool {
        let old = self.store.get(l);
        if m.leq(&old) {
            return false;
        }
        let joined = old.join(m);
        let widening = self.assigns.contains(&from) || self.loop_heads.contains(&l);
        let count = self.updates.entry((from, l)).or_default();
        let new = if widening && *count >= self.cfg.loop_widen_delay {
            old.widen(&joined, &self.params)
        } else {
            joined
        };
        *count += 1;
        self.store.set(l, new);
        true
    }

    fn transfer(&mut self, l: Label, m: &AbstractMemory) -> Result<Vec<(Label, AbstractMemory)>, AnalysisError> {
        let Some(LineRef::Stmt(stmt)) = self.p.stm(l) else {
            return Ok(Vec::new());
        };
        let next = self.p.next(l);
        Ok(match &stmt.kind {
            StmtKind::Skip => vec![(next, m.clone())],
            StmtKind::Assign(x, e) => {
                let mut out = m.clone();
                out.set(x, abs_eval(e, m));
                vec![(next, out)]
            }
            StmtKind::If(b, body) | StmtKind::While(b, body) => [(body[0].label, true), (next, false)]
                .into_iter()
                .map(|(target, polarity)| (target, abs_filter(b, m, polarity)))
                .filter(|(_, out)| out.is_reachable())
                .collect(),
            StmtKind::Reflect(s) => vec![(next, self.reflect(l, None, s, m)?)],
            StmtKind::AssignReflect(x, s) => vec![(next, self.reflect(l, Some(x), s, m)?)],
        })
    }

    fn warn(&mut self, line: Label, kind: WarningKind, message: String) {
        let key = (line, kind as u8);
        self.warnings.insert(key, Warning { line, depth: self.depth, kind, message });
    }

    /// `m` with every variable the strings of `fa` might touch set to ⊤.
    fn clobber(&self, fa: &FiniteAutomaton, m: &AbstractMemory, target: Option<&str>) -> AbstractMemory {
        let factors = fa.factors();
        // Nested reflection can reach variables its own text never names.
        let everything = *fa == FiniteAutomaton::universal(sigma()) || factors.accepts_str("reflect(");
        let mut out = m.clone();
        let names: BTreeSet<String> = self.scope.iter().cloned().chain(m.vars().map(|(x, _)| x.clone())).collect();
        for x in names {
            if everything || factors.accepts_str(&x) {
                out.set(&x, AbstVal::Top);
            }
        }
        if let Some(x) = target {
            out.set(x, AbstVal::Top);
        }
        out
    }

    fn reflect(
        &mut self,
        line: Label,
        target: Option<&String>,
        s: &crate::lang::Expr,
        m: &AbstractMemory,
    ) -> Result<AbstractMemory, AnalysisError> {
        let arg = abs_eval(s, m);
        let target = target.map(String::as_str);
        let fall_through = {
            let mut out = m.clone();
            if let Some(x) = target {
                out.set(x, arg.clone());
            }
            out
        };
        let mut record = SiteRecord {
            line,
            depth: self.depth,
            argument: arg.clone(),
            outcome: SiteOutcome::NotExecutable,
            input_dot: None,
            stmsyn_dot: None,
            exec_dot: None,
            regex: None,
            program: None,
            sub: None,
        };
        let fa = match arg.as_fa() {
            Some(fa) if !fa.is_empty() => fa,
            Some(_) => {
                self.sites.insert(line, record);
                return Ok(fall_through);
            }
            None => {
                record.outcome = SiteOutcome::NotAString;
                self.sites.insert(line, record);
                return Ok(fall_through);
            }
        };
        if self.depth >= self.cfg.tower_threshold {
            self.warn(
                line,
                WarningKind::TowerCutoff,
                format!("reflection depth {} reached the threshold; touched variables set to ⊤", self.depth),
            );
            record.outcome = SiteOutcome::TowerCutoff;
            self.sites.insert(line, record);
            return Ok(self.clobber(&fa, m, target));
        }
        let syn = match exe_pipeline(&fa) {
            Ok(syn) => syn,
            Err(e) => {
                self.warn(line, WarningKind::Degraded, format!("no program synthesized ({e}); touched variables set to ⊤"));
                record.outcome = SiteOutcome::Degraded;
                self.sites.insert(line, record);
                return Ok(self.clobber(&fa, m, target));
            }
        };
        record_artifacts(&mut record, &syn, line);
        let Some(prog) = syn.program.clone() else {
            self.sites.insert(line, record);
            return Ok(fall_through);
        };
        let sub = super::analyze_from(&prog, m.clone(), self.cfg, self.depth + 1, &self.scope)?;
        let mut out = sub.store.get(prog.end_label);
        let guards: Vec<String> = out.vars().map(|(x, _)| x.clone()).filter(|x| is_guard(x)).collect();
        for g in guards {
            out.remove(&g);
        }
        if let Some(x) = target {
            let mut emptied = m.clone();
            emptied.set(x, AbstVal::strs([""]));
            out = out.join(&emptied);
        }
        if !syn.total && !all_executable(&fa) {
            out = out.join(&fall_through);
        }
        record.outcome = SiteOutcome::Synthesized;
        record.sub = Some(Box::new(sub));
        self.sites.insert(line, record);
        Ok(out)
    }
}

fn record_artifacts(record: &mut SiteRecord, syn: &Synthesis, line: Label) {
    record.input_dot = Some(syn.input.to_dot(&format!("site{line}_input")));
    record.stmsyn_dot = Some(syn.stmsyn.to_nfa().to_dot(&format!("site{line}_stmsyn")));
    record.exec_dot = Some(syn.exec.to_nfa().to_dot(&format!("site{line}_exec")));
    record.regex = Some(syn.regex.to_string());
    record.program = syn.program.as_ref().map(pretty_print);
}

/// Whether every word of a small finite language is executable, so that a
/// concrete run cannot fall through.
fn all_executable(fa: &FiniteAutomaton) -> bool {
    fa.enumerate_strings(FALL_THROUGH_WORDS)
        .is_some_and(|words| words.iter().all(|w| parse_executable(w).is_some()))
}
