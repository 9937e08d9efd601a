//! A brute-force reading of the reduction rules, kept independent of the
//! library's own redex search.
//!
//! For every way of picking the one or two molecules a rule consumes, in the
//! order the rule lists them, the rule is instantiated with every summand of
//! the acting molecule's (unfolded) capability. The remaining molecules form
//! the context `Q`, and the parallel rule is applied once per molecule of `Q`.
//! A step survives when its residual promoter set is empty.

use mimc::congruence::process_equal;
use mimc::semantics::{Action, Transition};
use mimc::terms::{
    strip_process, strip_species, BasicCap, CapOp, Inner, Name, NameSet, Process, Species,
};

struct Step {
    nu: NameSet,
    iota: NameSet,
    action: Action,
    result: Vec<Species>,
}

fn strip(s: &Species) -> Name {
    strip_species(s).expect("closed term")
}

fn summands(s: &Species) -> Vec<BasicCap> {
    s.caps.summands().into_owned()
}

/// Rules for a single acting molecule.
fn unary(s: &Species) -> Vec<Step> {
    let mut out = Vec::new();
    let n = strip(s);
    if let Inner::NonCovalent(a, b) = &s.body {
        out.push(Step {
            nu: NameSet::new(),
            iota: NameSet::new(),
            action: Action::NcUnbond(strip(a), strip(b)),
            result: vec![(**a).clone(), (**b).clone()],
        });
    }
    for g in summands(s) {
        if g.inhibitors.contains(&n) {
            continue;
        }
        let (action, result) = match &g.op {
            CapOp::Convert(p) => (
                Action::Conversion(n.clone(), strip_process(p).unwrap()),
                p.molecules().to_vec(),
            ),
            CapOp::Produce(p) => {
                let mut r = vec![s.clone()];
                r.extend(p.molecules().iter().cloned());
                (Action::Production(n.clone(), strip_process(p).unwrap()), r)
            }
            CapOp::CovMod { modtype, cont } => (
                Action::Modification(modtype.clone(), n.clone()),
                vec![Species::covalent_mod(
                    cont.clone(),
                    modtype.clone(),
                    s.clone(),
                )],
            ),
            _ => continue,
        };
        out.push(Step {
            nu: g.promoters.clone(),
            iota: g.inhibitors.clone(),
            action,
            result,
        });
    }
    out
}

/// Rules for an ordered pair `s1 | s2`.
fn binary(s1: &Species, s2: &Species) -> Vec<Step> {
    let mut out = Vec::new();
    let (n1, n2) = (strip(s1), strip(s2));
    for g in summands(s1) {
        let blocked = g.inhibitors.contains(&n1) || g.inhibitors.contains(&n2);
        let (action, result) = match &g.op {
            CapOp::NonCovBind { partner, cont } if *partner == n2 && !blocked => (
                Action::NcBond(n1.clone(), n2.clone()),
                vec![Species::non_covalent(cont.clone(), s1.clone(), s2.clone())],
            ),
            CapOp::CovBind { partner, cont } if *partner == n2 && !blocked => (
                Action::CovBond(n1.clone(), n2.clone()),
                vec![Species::covalent_bond(cont.clone(), s1.clone(), s2.clone())],
            ),
            CapOp::Cleave { target } if *target == n2 && !blocked => match &s2.body {
                Inner::CovalentBond(a, b) => (
                    Action::CleaveBond(n1.clone(), n2.clone()),
                    vec![s1.clone(), (**a).clone(), (**b).clone()],
                ),
                Inner::CovalentMod(_, a) => (
                    Action::CleaveMod(n1.clone(), n2.clone()),
                    vec![s1.clone(), (**a).clone()],
                ),
                _ => continue,
            },
            _ => continue,
        };
        out.push(Step {
            nu: g.promoters.clone(),
            iota: g.inhibitors.clone(),
            action,
            result,
        });
    }
    out
}

/// Labels of symmetric reactions are compared as unordered pairs.
fn normalize(a: Action) -> Action {
    match a {
        Action::NcBond(x, y) => Action::nc_bond(x, y),
        Action::NcUnbond(x, y) => Action::nc_unbond(x, y),
        Action::CovBond(x, y) => Action::cov_bond(x, y),
        other => other,
    }
}

/// All transitions of `p`, one per (action, target) class.
pub fn transitions(p: &Process) -> Vec<Transition> {
    let ms = p.molecules();
    let mut raw: Vec<(Vec<usize>, Step)> = Vec::new();
    for i in 0..ms.len() {
        for st in unary(&ms[i]) {
            raw.push((vec![i], st));
        }
        for j in 0..ms.len() {
            if i != j {
                for st in binary(&ms[i], &ms[j]) {
                    raw.push((vec![i, j], st));
                }
            }
        }
    }
    let mut out: Vec<Transition> = Vec::new();
    'steps: for (used, st) in raw {
        let mut nu = st.nu.clone();
        let mut target = st.result.clone();
        for (k, q) in ms.iter().enumerate() {
            if used.contains(&k) {
                continue;
            }
            let qn = strip(q);
            if st.iota.contains(&qn) {
                continue 'steps;
            }
            nu.remove(&qn);
            target.push(q.clone());
        }
        if !nu.is_empty() {
            continue;
        }
        let t = Transition {
            action: normalize(st.action),
            target: Process::new(target),
        };
        if !out
            .iter()
            .any(|u| u.action == t.action && process_equal(&u.target, &t.target))
        {
            out.push(t);
        }
    }
    out
}

/// Same transitions up to congruence of targets, in any order.
pub fn agrees(oracle: &[Transition], actual: &[Transition]) -> bool {
    oracle.len() == actual.len()
        && oracle.iter().all(|o| {
            actual
                .iter()
                .any(|a| a.action == o.action && process_equal(&a.target, &o.target))
        })
}
