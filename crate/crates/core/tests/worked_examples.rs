mod common;

use std::collections::BTreeMap;

use common::{model, n, p};
use mimc::congruence::species_equal;
use mimc::consistency::enumerate_positions;
use mimc::diagram::{compile_table, import, instantiate, DiagramSpec};
use mimc::syntax::{parse_action, parse_capability};
use mimc::terms::strip_process;
use mimc::{
    canonicalize, caps_equal, check_semantic, check_strong, check_weak, enabled_transitions,
    explore, print_process, process_equal, Action, Bounds, ConsistencyVerdict, Process,
};

const MU: &str = "{bind(E2){} + bind(pRb){bind(E2){}}}";
const MU1: &str = "{bind(DP1){bind(E2){} + bind(pRb){bind(E2){}}}}";
const MU2: &str = "{bind(E2F1){bind(E2){} + bind(pRb){bind(E2){}}}}";
const MU3: &str = "{bind(E2F1:DP1){bind(E2){}}}";
const MU4: &str = "{bind(E2F1:DP1){} + bind((E2F1:DP1):pRb){}}";
const DNA: &str = "{[+(E2F1:DP1):E2; -((E2F1:DP1):pRb):E2]prod(mRNA)}.DNA";

fn p1() -> Process {
    p(&format!(
        "{MU1}.E2F1 | {MU1}.E2F1 | {MU2}.DP1 | {MU2}.DP1 | {MU3}.pRb | {MU3}.pRb | {MU4}.E2 | {DNA}"
    ))
}

fn p2() -> Process {
    p(&format!(
        "{MU1}.E2F1 | {MU2}.DP1 | {MU3}.pRb | {MU3}.pRb | {MU4}.E2 | {DNA} | {MU}.({MU1}.E2F1 : {MU2}.DP1)"
    ))
}

fn p3() -> Process {
    p(&format!(
        "{MU1}.E2F1 | {MU2}.DP1 | {MU3}.pRb | {MU3}.pRb | {DNA} | {{}}.({MU}.({MU1}.E2F1 : {MU2}.DP1) : {MU4}.E2)"
    ))
}

fn act(s: &str) -> Action {
    parse_action(s).unwrap()
}

fn dna_production() -> Action {
    act("prod(DNA,{mRNA})")
}

#[test]
fn e2f1_first_step_forms_the_dimer() {
    let ts = enabled_transitions(&p1());
    let t = ts
        .iter()
        .find(|t| t.action == act("ncb(E2F1,DP1)"))
        .expect("dimerisation enabled");
    assert_eq!(t.target, canonicalize(&p2()));
}

#[test]
fn e2f1_second_step_binds_the_promoter() {
    let ts = enabled_transitions(&p2());
    let t = ts
        .iter()
        .find(|t| t.action == act("ncb(E2F1:DP1,E2)"))
        .expect("promoter binding enabled");
    assert_eq!(t.target, canonicalize(&p3()));
}

#[test]
fn e2f1_model_file_is_p1() {
    assert_eq!(canonicalize(&p(&model("e2f1.mimc"))), canonicalize(&p1()));
}

#[test]
fn dna_transcription_needs_the_dimer_on_the_promoter() {
    assert!(!enabled_transitions(&p1())
        .iter()
        .any(|t| t.action == dna_production()));
    assert!(!enabled_transitions(&p2())
        .iter()
        .any(|t| t.action == dna_production()));
    let ts = enabled_transitions(&p3());
    let t = ts
        .iter()
        .find(|t| t.action == dna_production())
        .expect("transcription");
    assert!(process_equal(&t.target, &p3().par(p("mRNA"))));
}

#[test]
fn dna_transcription_blocked_by_the_trimer() {
    let blocked = p3().par(p("(((E2F1:DP1):pRb):E2)"));
    assert!(!enabled_transitions(&blocked)
        .iter()
        .any(|t| t.action == dna_production()));
}

#[test]
fn e2f1_exploration_contains_the_path() {
    let lts = explore(&p1(), Bounds::new(2, 1000));
    let (s1, s2, s3) = (
        lts.find_state(&p1()).unwrap(),
        lts.find_state(&p2()).unwrap(),
        lts.find_state(&p3()).unwrap(),
    );
    assert_eq!(s1, lts.initial);
    assert!(lts
        .successors(s1)
        .any(|e| e.to == s2 && e.action == act("ncb(DP1,E2F1)")));
    assert!(lts
        .successors(s2)
        .any(|e| e.to == s3 && e.action == act("ncb((DP1:E2F1),E2)")));
}

#[test]
fn e2f1_names() {
    let names = strip_process(&p1()).unwrap();
    let expected = ["E2F1", "DP1", "pRb", "E2", "DNA"]
        .map(n)
        .into_iter()
        .collect();
    assert_eq!(names, expected);
}

#[test]
fn e2f1_semantically_consistent_to_depth_four() {
    assert!(!check_semantic(&p1(), Bounds::new(4, 10_000)).is_inconsistent());
}

#[test]
fn abc_has_two_transitions() {
    let pabc = p(&model("p_abc.mimc"));
    let ts = enabled_transitions(&pabc);
    let actions: Vec<Action> = ts.iter().map(|t| t.action.clone()).collect();
    assert_eq!(actions.len(), 2, "{actions:?}");
    assert!(actions.contains(&act("ncb(A,B)")));
    assert!(actions.contains(&act("mod('p,B)")));
    let bound = ts.iter().find(|t| t.action == act("ncb(A,B)")).unwrap();
    let expected = p(
        "{bind(B){bind(C){}}}.A | {bind(A){bind(C){}} + mod('p){}}.B | {bind(A:B){}}.C \
         | {bind(C){}}.({bind(B){bind(C){}}}.A : {bind(A){bind(C){}} + mod('p){}}.B)",
    );
    assert!(process_equal(&bound.target, &expected));
}

#[test]
fn abc_diagram_compiles_to_the_term() {
    let d = DiagramSpec::from_json(&model("p_abc.mimd.json")).unwrap();
    let (table, q) = import(&d).unwrap();
    assert_eq!(q, canonicalize(&p(&model("p_abc.mimc"))));
    let a = parse_capability("{bind(B){bind(C){}}}").unwrap();
    assert!(caps_equal(table.get(&n("A")).unwrap(), &a));
    assert_eq!(check_strong(&q), ConsistencyVerdict::Consistent);
}

#[test]
fn e2f1_diagram_compiles_to_p1() {
    let d = DiagramSpec::from_json(&model("e2f1.mimd.json")).unwrap();
    let table = compile_table(&d).unwrap();
    let counts = BTreeMap::from([
        (n("E2F1"), 2),
        (n("DP1"), 2),
        (n("pRb"), 2),
        (n("E2"), 1),
        (n("DNA"), 1),
    ]);
    let q = instantiate(&table, &counts).unwrap();
    assert!(process_equal(&q, &p1()));
    assert_eq!(check_strong(&q), ConsistencyVerdict::Consistent);
}

#[test]
fn enzyme_recreates_itself() {
    let enzyme = p(&model("enzyme.mimc"));
    let original = parse_capability("rec x.{bind(A){conv(x.E | {}.C)}}").unwrap();
    let lts = explore(&enzyme, Bounds::new(3, 1000));
    let found = lts.states.iter().any(|s| {
        let has_c = s.molecules().iter().any(|m| m.name() == n("C"));
        let has_e = s
            .molecules()
            .iter()
            .any(|m| m.name() == n("E") && caps_equal(&m.caps, &original));
        has_c && has_e
    });
    assert!(
        found,
        "{:#?}",
        lts.states.iter().map(print_process).collect::<Vec<_>>()
    );
    assert!(!lts.truncated);
}

#[test]
fn enzyme_diagram_matches_the_term() {
    let d = DiagramSpec::from_json(&model("enzyme.mimd.json")).unwrap();
    let (_, q) = import(&d).unwrap();
    let term = p(&model("enzyme.mimc"));
    let enzyme = |p: &Process| {
        p.molecules()
            .iter()
            .find(|m| m.name() == n("E"))
            .cloned()
            .unwrap()
    };
    assert!(species_equal(&enzyme(&q), &enzyme(&term)));
    // the compiled substrate also carries the reciprocal binding
    let a = q.molecules().iter().find(|m| m.name() == n("A")).unwrap();
    assert_eq!(a.caps.summands().len(), 1);
    assert_eq!(check_strong(&q), ConsistencyVerdict::Consistent);
}

#[test]
fn consistency_examples() {
    let weak_only = p(&model("p2.mimc"));
    let strong = p(&model("p3.mimc"));
    assert_eq!(check_weak(&weak_only), ConsistencyVerdict::Consistent);
    let v = check_strong(&weak_only);
    let w = v.witness().expect("inconsistent");
    assert_eq!(w.second.name, n("B"));
    let missing = w.missing.as_ref().unwrap();
    assert_eq!(
        missing,
        &mimc::BasicCap::bind(n("A"), parse_capability("{bind(C){}}").unwrap())
    );
    assert_eq!(check_strong(&strong), ConsistencyVerdict::Consistent);
    assert_eq!(check_weak(&strong), ConsistencyVerdict::Consistent);

    let split = p("{bind(B){bind(C){}}}.A | {}.A");
    let v = check_semantic(&split, Bounds::new(0, 10));
    let w = v.witness().expect("inconsistent at depth 0");
    assert_eq!(w.first.name, n("A"));
    assert!(!caps_equal(&w.first.caps, &w.second.caps));
}

#[test]
fn positions_of_the_dimer() {
    let es = enumerate_positions(&p2());
    let mu = parse_capability(MU).unwrap();
    assert!(es
        .iter()
        .any(|e| e.name == n("E2F1:DP1") && caps_equal(&e.caps, &mu)));
    let trimer = parse_capability("{bind(E2){}}").unwrap();
    assert!(es
        .iter()
        .any(|e| e.name == n("(E2F1:DP1):pRb") && caps_equal(&e.caps, &trimer)));
}

#[test]
fn species_equality_up_to_unfolding() {
    let a = p("rec x.{bind(A){conv(x.E | {}.C)}}.E");
    let b = p("{bind(A){conv(rec y.{bind(A){conv(y.E | C)}}.E | C)}}.E");
    assert!(species_equal(&a.molecules()[0], &b.molecules()[0]));
}
