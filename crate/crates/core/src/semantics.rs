//! Labelled reduction semantics and bounded state-space exploration.
//!
//! [`local_redexes`] instantiates the eight reaction rules on the top-level
//! molecules of a state and reports each instance together with the promoter
//! and inhibitor sets of the capability that fired. [`enabled_transitions`]
//! then closes each instance under the parallel rule: every molecule that is
//! not a reactant discharges promoters by name and must not be an inhibitor.
//! Only instances whose promoters are all discharged become transitions.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::congruence::{canonical_species, canonicalize, fingerprint, Fingerprint};
use crate::terms::{names_of, CapOp, Ident, Inner, Name, NameSet, Process, Species};

/// Transition labels.
///
/// The binding and unbinding labels are symmetric in their two names, like
/// the compounds they create or break, and are stored with the names sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    NcBond(Name, Name),
    NcUnbond(Name, Name),
    Conversion(Name, NameSet),
    Production(Name, NameSet),
    CovBond(Name, Name),
    /// A cleaver breaks a covalent bond `[N1 N2]`.
    CleaveBond(Name, Name),
    Modification(Ident, Name),
    /// A cleaver removes a covalent modification `['q N]`.
    CleaveMod(Name, Name),
}

impl Action {
    pub fn nc_bond(a: Name, b: Name) -> Self {
        let (a, b) = sorted(a, b);
        Action::NcBond(a, b)
    }

    pub fn nc_unbond(a: Name, b: Name) -> Self {
        let (a, b) = sorted(a, b);
        Action::NcUnbond(a, b)
    }

    pub fn cov_bond(a: Name, b: Name) -> Self {
        let (a, b) = sorted(a, b);
        Action::CovBond(a, b)
    }
}

fn sorted(a: Name, b: Name) -> (Name, Name) {
    if b < a {
        (b, a)
    } else {
        (a, b)
    }
}

/// A rule instance `P →(ν,ι) α P'` before the parallel rule is applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GatedTransition {
    pub promoters: NameSet,
    pub inhibitors: NameSet,
    pub action: Action,
    /// Canonical successor of the whole state.
    pub target: Process,
    /// Indices of the consumed or acting molecules in the source state.
    pub reactants: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub action: Action,
    pub target: Process,
}

/// Enumerates every instance of the reaction rules over the molecules of `p`.
///
/// Indices in [`GatedTransition::reactants`] refer to the molecules of
/// `canonicalize(p)`.
pub fn local_redexes(p: &Process) -> Vec<GatedTransition> {
    redexes(&canonicalize(p), false)
}

/// With `gated`, redexes that the rest of `p` blocks are skipped before their
/// targets are built. `p` must be canonical.
fn redexes(p: &Process, gated: bool) -> Vec<GatedTransition> {
    let ms = p.molecules();
    let names: Vec<Name> = ms.iter().map(Species::name).collect();
    let mut out = Vec::new();

    for (i, m) in ms.iter().enumerate() {
        if let Inner::NonCovalent(a, b) = &m.body {
            out.push(GatedTransition {
                promoters: NameSet::new(),
                inhibitors: NameSet::new(),
                action: Action::nc_unbond(a.name(), b.name()),
                target: rebuild(ms, &[i], vec![(**a).clone(), (**b).clone()]),
                reactants: vec![i],
            });
        }

        for g in m.caps.summands().iter() {
            if g.inhibitors.contains(&names[i]) {
                continue;
            }
            let mut emit = |action: Action, reactants: Vec<usize>, added: Vec<Species>| {
                if gated && !fires(&g.promoters, &g.inhibitors, &reactants, &names) {
                    return;
                }
                out.push(GatedTransition {
                    promoters: g.promoters.clone(),
                    inhibitors: g.inhibitors.clone(),
                    action,
                    target: rebuild(ms, &reactants, added),
                    reactants,
                })
            };
            match &g.op {
                CapOp::NonCovBind { partner, cont } | CapOp::CovBind { partner, cont } => {
                    if g.inhibitors.contains(partner) {
                        continue;
                    }
                    let covalent = matches!(g.op, CapOp::CovBind { .. });
                    for (j, other) in ms.iter().enumerate() {
                        if j == i || names[j] != *partner {
                            continue;
                        }
                        let (action, compound) = if covalent {
                            (
                                Action::cov_bond(names[i].clone(), names[j].clone()),
                                Species::covalent_bond(cont.clone(), m.clone(), other.clone()),
                            )
                        } else {
                            (
                                Action::nc_bond(names[i].clone(), names[j].clone()),
                                Species::non_covalent(cont.clone(), m.clone(), other.clone()),
                            )
                        };
                        emit(action, vec![i, j], vec![compound]);
                    }
                }
                CapOp::Convert(products) => {
                    let action = Action::Conversion(names[i].clone(), names_of(products));
                    emit(action, vec![i], products.molecules().to_vec());
                }
                CapOp::Produce(products) => {
                    let action = Action::Production(names[i].clone(), names_of(products));
                    let mut added = vec![m.clone()];
                    added.extend_from_slice(products.molecules());
                    emit(action, vec![i], added);
                }
                CapOp::CovMod { modtype, cont } => {
                    let action = Action::Modification(modtype.clone(), names[i].clone());
                    let modified = Species::covalent_mod(cont.clone(), modtype.clone(), m.clone());
                    emit(action, vec![i], vec![modified]);
                }
                CapOp::Cleave { target } => {
                    if g.inhibitors.contains(target) {
                        continue;
                    }
                    for (j, other) in ms.iter().enumerate() {
                        if j == i || names[j] != *target {
                            continue;
                        }
                        match &other.body {
                            Inner::CovalentBond(a, b) => emit(
                                Action::CleaveBond(names[i].clone(), target.clone()),
                                vec![i, j],
                                vec![m.clone(), (**a).clone(), (**b).clone()],
                            ),
                            Inner::CovalentMod(_, a) => emit(
                                Action::CleaveMod(names[i].clone(), target.clone()),
                                vec![i, j],
                                vec![m.clone(), (**a).clone()],
                            ),
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    out
}

/// Promoters discharged and no inhibitor present among the molecules of the
/// context, i.e. those not taking part in the reaction.
fn fires(promoters: &NameSet, inhibitors: &NameSet, reactants: &[usize], names: &[Name]) -> bool {
    let mut residual = promoters.clone();
    for (k, n) in names.iter().enumerate() {
        if reactants.contains(&k) {
            continue;
        }
        if inhibitors.contains(n) {
            return false;
        }
        residual.remove(n);
    }
    residual.is_empty()
}

/// `ms` is canonical, so only the added molecules need canonicalizing.
fn rebuild(ms: &[Species], removed: &[usize], added: Vec<Species>) -> Process {
    let mut out: Vec<Species> = ms
        .iter()
        .enumerate()
        .filter(|(k, _)| !removed.contains(k))
        .map(|(_, s)| s.clone())
        .chain(added.iter().map(canonical_species))
        .collect();
    out.sort();
    Process::new(out)
}

/// The transitions `p →α p'` with all promoters present and no inhibitor
/// present, merged up to congruence of targets and sorted.
pub fn enabled_transitions(p: &Process) -> Vec<Transition> {
    keyed_transitions(&canonicalize(p))
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

fn keyed_transitions(p: &Process) -> Vec<(Transition, Fingerprint)> {
    let fired = redexes(p, true)
        .into_iter()
        .map(|r| Transition {
            action: r.action,
            target: r.target,
        })
        .collect();
    merge_keyed(fired)
}

/// Sorts and removes transitions whose action and target coincide with an
/// earlier one up to congruence.
pub fn merge_transitions(ts: Vec<Transition>) -> Vec<Transition> {
    merge_keyed(ts).into_iter().map(|(t, _)| t).collect()
}

fn merge_keyed(mut ts: Vec<Transition>) -> Vec<(Transition, Fingerprint)> {
    ts.sort();
    ts.dedup();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let key = fingerprint(&t.target);
        if seen.insert((t.action.clone(), key.clone())) {
            out.push((t, key));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_depth: 16,
            max_states: 10_000,
        }
    }
}

impl Bounds {
    pub fn new(max_depth: usize, max_states: usize) -> Self {
        Bounds {
            max_depth,
            max_states: max_states.max(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub action: Action,
    pub to: usize,
}

/// A bounded labelled transition system over congruence classes of processes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    /// Canonical representatives, in breadth-first discovery order.
    pub states: Vec<Process>,
    pub edges: Vec<Edge>,
    pub initial: usize,
    /// Set when some reachable behaviour was cut off by a bound.
    pub truncated: bool,
    /// Number of breadth-first layers whose successors were all computed.
    pub depth: usize,
}

impl Lts {
    pub fn find_state(&self, p: &Process) -> Option<usize> {
        let key = fingerprint(p);
        self.states.iter().position(|s| fingerprint(s) == key)
    }

    pub fn successors(&self, state: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == state)
    }
}

/// Breadth-first closure of [`enabled_transitions`] from `p`.
///
/// Frontier layers are expanded in parallel and merged in order, so the
/// result depends only on `p` and the bounds.
pub fn explore(p: &Process, bounds: Bounds) -> Lts {
    explore_with(p, bounds, |_, _| true).0
}

/// Like [`explore`], calling `visit` on each newly discovered state. When
/// `visit` returns `false` the exploration stops and the second component is
/// `true`.
pub fn explore_with<F>(p: &Process, bounds: Bounds, mut visit: F) -> (Lts, bool)
where
    F: FnMut(usize, &Process) -> bool,
{
    let init = canonicalize(p);
    let mut index: HashMap<Fingerprint, usize> = HashMap::new();
    index.insert(fingerprint(&init), 0);
    let mut lts = Lts {
        states: vec![init],
        edges: Vec::new(),
        initial: 0,
        truncated: false,
        depth: 0,
    };
    if !visit(0, &lts.states[0]) {
        lts.truncated = true;
        return (lts, true);
    }

    let mut frontier = vec![0];
    while !frontier.is_empty() {
        if lts.depth >= bounds.max_depth {
            lts.truncated = frontier
                .par_iter()
                .any(|&s| !redexes(&lts.states[s], true).is_empty());
            break;
        }
        let succs: Vec<Vec<(Transition, Fingerprint)>> = frontier
            .par_iter()
            .map(|&s| keyed_transitions(&lts.states[s]))
            .collect();
        let mut next = Vec::new();
        for (&from, ts) in frontier.iter().zip(succs) {
            for (t, key) in ts {
                let to = match index.get(&key) {
                    Some(&j) => j,
                    None if lts.states.len() < bounds.max_states => {
                        let j = lts.states.len();
                        index.insert(key, j);
                        lts.states.push(t.target);
                        next.push(j);
                        if !visit(j, &lts.states[j]) {
                            lts.edges.push(Edge {
                                from,
                                action: t.action,
                                to: j,
                            });
                            lts.truncated = true;
                            return (lts, true);
                        }
                        j
                    }
                    None => {
                        lts.truncated = true;
                        continue;
                    }
                };
                lts.edges.push(Edge {
                    from,
                    action: t.action,
                    to,
                });
            }
        }
        frontier = next;
        lts.depth += 1;
    }
    (lts, false)
}
