use super::*;
use crate::automata::Dfa;
use crate::lang::{pretty_print, StmtKind};

fn fa(words: &[&str]) -> FiniteAutomaton {
    Dfa::from_strs(words.iter().copied())
}

fn atom(s: &str) -> Regex {
    Regex::atom(s)
}

#[test]
fn single_statement_gives_three_edges() {
    let edges = stm_syn_edges(&quoted(&fa(&["x:=x+1;$"]))).unwrap();
    let labels: Vec<&str> = edges.edges.iter().map(|(_, l, _)| l.as_str()).collect();
    assert_eq!(labels.len(), 3);
    assert!(labels.contains(&"x:=x+1;") && labels.contains(&"$") && labels.contains(&""));
    let a = edges.to_automaton();
    assert!(a.accepts(&["x:=x+1;".to_string(), "$".to_string()]));
}

#[test]
fn non_statements_are_erased() {
    let a = stm_syn(&quoted(&fa(&["hello"]))).unwrap();
    assert!(a.is_empty());
    let s = exe_pipeline(&fa(&["hello"])).unwrap();
    assert!(s.program.is_none());
}

#[test]
fn missing_apex_is_reported() {
    assert_eq!(stm_syn(&fa(&["x:=1;"])).unwrap_err(), ExeError::NoApexStart);
}

#[test]
fn cycle_inside_a_statement_is_not_silently_cut() {
    let digits = fa(&["x:=1"]).concat(&fa(&["0"]).star()).concat(&fa(&[";"]));
    assert_eq!(stm_syn(&quoted(&digits)).unwrap_err(), ExeError::IntraStatementCycle);
}

#[test]
fn universal_language_short_circuits() {
    let all = Dfa::universal(crate::alphabet::sigma());
    assert_eq!(exe_pipeline(&all).unwrap_err(), ExeError::Universal);
}

#[test]
fn filter_drops_ill_formed_labels() {
    let a = stm_syn(&quoted(&fa(&["x:=;", "x:=1;", "wBhilAeBx;"]))).unwrap();
    let kept = filter_executable(&a);
    assert!(kept.accepts(&["x:=1;".to_string()]));
    assert!(!kept.accepts(&["x:=;".to_string()]));
    assert_eq!(kept.alphabet().len(), 1);
}

#[test]
fn branching_values_give_a_guarded_choice() {
    let s = exe_pipeline(&fa(&["a:=a+1;", "b:=b+1;"])).unwrap();
    let p = s.program.unwrap();
    assert_eq!(pretty_print(&p), "_g1:=rand();if _g1=1 {a:=a+1;};if _g1=2 {b:=b+1;};$");
}

#[test]
fn star_becomes_a_guarded_loop() {
    let r = Regex::concat([atom("x:=x+1;"), Regex::star(atom("x:=x+1;"))]);
    let p = prog_syn(&r).unwrap();
    assert_eq!(pretty_print(&p), "x:=x+1;_g1:=rand();while _g1=1 {x:=x+1;_g1:=rand();};$");
}

fn running_example_regex() -> Regex {
    let inc = || atom("x:=x+1;");
    let ten = || atom("y:=10;");
    Regex::alt([
        Regex::concat([inc(), atom("$")]),
        Regex::concat([
            atom("while x>5 {"),
            inc(),
            atom("y:=x;"),
            atom("}"),
            atom(";"),
            atom("$"),
        ]),
        Regex::concat([inc(), ten(), Regex::star(Regex::concat([inc(), ten()])), inc(), atom("$")]),
    ])
}

#[test]
fn running_example_program_matches_the_listing() {
    let p = prog_syn(&running_example_regex()).unwrap();
    let expected = "_g1:=rand();\
        if _g1=1 {x:=x+1;};\
        if _g1=2 {_g2:=rand();\
        if _g2=1 {while x>5 {x:=x+1;y:=x;};};\
        if _g2=2 {x:=x+1;y:=10;_g3:=rand();while _g3=1 {x:=x+1;y:=10;_g3:=rand();};x:=x+1;};};$";
    assert_eq!(pretty_print(&p), expected);
    // 18 statements; the terminator takes the next label.
    assert_eq!(p.end_label, 19);
}

#[test]
fn unbalanced_blocks_are_rejected() {
    let r = Regex::concat([atom("x:=1;"), atom("}")]);
    assert_eq!(prog_syn(&r).unwrap_err(), ExeError::UnbalancedBlocks);
    let r = Regex::alt([atom("if x>0 {"), atom("skip;")]);
    assert_eq!(prog_syn(&r).unwrap_err(), ExeError::UnbalancedBlocks);
}

#[test]
fn fragments_parse_with_the_source_grammar() {
    assert!(matches!(parse_fragment(" while x>5 {"), Some(Fragment::Open { is_loop: true, .. })));
    assert_eq!(parse_fragment("}"), Some(Fragment::Close));
    assert!(matches!(
        parse_fragment("y:=reflect(s);"),
        Some(Fragment::Stmt(s)) if matches!(s.kind, StmtKind::AssignReflect(..))
    ));
    assert!(parse_fragment("x:=1").is_none());
    assert!(parse_fragment("if x {skip;};").is_none());
}

#[test]
fn regex_round_trips_through_automata() {
    let a = running_example_regex().to_dfa();
    let back = regex_of(&a);
    assert_eq!(back.to_dfa(), a);
}

#[test]
fn loop_of_statements_is_recovered() {
    let values = fa(&["x:=x+1;"]).concat(&fa(&["x:=x+1;"]).star());
    let s = exe_pipeline(&values).unwrap();
    let expected = Regex::concat([atom("x:=x+1;"), Regex::star(atom("x:=x+1;"))]).to_dfa();
    assert_eq!(s.exec, expected);
    assert_eq!(s.regex.to_dfa(), expected);
    assert!(s.program.unwrap().loop_heads().len() == 1);
}

#[test]
fn empty_string_is_the_empty_program() {
    let s = exe_pipeline(&fa(&[""])).unwrap();
    assert_eq!(s.regex, Regex::Epsilon);
    assert_eq!(pretty_print(&s.program.unwrap()), "$");
}

#[test]
fn coverage_tracks_non_executable_words() {
    let loop_values = fa(&["x:=x+1;"]).concat(&fa(&["x:=x+1;"]).star());
    assert!(exe_pipeline(&loop_values).unwrap().total);
    assert!(!exe_pipeline(&fa(&["x:=1;", "hello"])).unwrap().total);
    assert!(exe_pipeline(&fa(&["x:=1;$"])).unwrap().total);
    assert_eq!(spelled(&stm_syn(&quoted(&fa(&["a:=1;"]))).unwrap()), fa(&["a:=1;"]));
}
