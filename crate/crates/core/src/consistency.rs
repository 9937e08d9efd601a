//! Capability positions and the three consistency checks.
//!
//! A position is a hole of a context `C` with `C[μ] ≡ P`. [`enumerate_positions`]
//! walks a term the way `name`/`name'` do: the capability of every molecule
//! and nested sub-species, the continuation of every `bind`, `cbind` and
//! `mod` summand (named after the compound it would create), and every
//! position inside conversion and production payloads. The body of each
//! `rec` is walked once with its variable bound to the closed recursive
//! capability, so all reported capabilities are closed.

use std::collections::{BTreeMap, HashSet};

use serde_json::{json, Value};

use crate::congruence::{canonicalize, capability_fingerprint, caps_equal, Fingerprint};
use crate::semantics::{explore_with, Bounds};
use crate::terms::{substitute, BasicCap, CapOp, Capability, Ident, Inner, Name, Process, Species};

pub mod proposition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionEntry {
    pub name: Name,
    pub caps: Capability,
    /// Where the hole sits, e.g. `m0.1/bind#0`.
    pub path: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub first: PositionEntry,
    pub second: PositionEntry,
    /// For strong consistency: the reciprocal summand `second` lacks.
    pub missing: Option<BasicCap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Consistent,
    Inconsistent(Box<Witness>),
    /// No clash within an exploration that was cut off by its bounds.
    ConsistentUpToDepth(usize),
}

impl ConsistencyVerdict {
    pub fn is_inconsistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::Inconsistent(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ConsistencyVerdict::Inconsistent(w) => Some(w),
            _ => None,
        }
    }

    /// `{"verdict": ..., "depth": d, "witness": {...}}`; `depth` and `witness`
    /// appear only when they apply.
    pub fn to_json(&self) -> Value {
        match self {
            ConsistencyVerdict::Consistent => json!({"verdict": "consistent"}),
            ConsistencyVerdict::ConsistentUpToDepth(d) => {
                json!({"verdict": "consistent-up-to-depth", "depth": d})
            }
            ConsistencyVerdict::Inconsistent(w) => {
                let entry = |e: &PositionEntry| json!({"name": e.name.to_string(), "caps": e.caps.to_string(), "path": e.path});
                let mut witness = json!({
                    "first": entry(&w.first),
                    "second": entry(&w.second),
                });
                if let Some(g) = &w.missing {
                    witness["missing"] = Value::String(g.to_string());
                }
                json!({"verdict": "inconsistent", "witness": witness})
            }
        }
    }
}

/// One entry per capability position of `p`, in a deterministic order.
pub fn enumerate_positions(p: &Process) -> Vec<PositionEntry> {
    let mut walk = Walk::default();
    walk.process(&canonicalize(p), "m");
    walk.out
}

#[derive(Default)]
struct Walk {
    env: Vec<(Ident, Capability)>,
    out: Vec<PositionEntry>,
}

impl Walk {
    fn close(&self, c: &Capability) -> Capability {
        // canonical binder names are unique along a path, so order is irrelevant
        self.env
            .iter()
            .rev()
            .fold(c.clone(), |acc, (x, r)| substitute(&acc, x, r))
    }

    fn record(&mut self, name: Name, caps: &Capability, path: String) {
        let caps = self.close(caps);
        self.out.push(PositionEntry { name, caps, path });
    }

    fn process(&mut self, p: &Process, prefix: &str) {
        for (k, s) in p.molecules().iter().enumerate() {
            self.species(s, format!("{prefix}{k}"));
        }
    }

    fn species(&mut self, s: &Species, path: String) {
        let name = s.name();
        self.record(name.clone(), &s.caps, path.clone());
        self.caps(&s.caps, &name, &path);
        match &s.body {
            Inner::Elementary(_) => {}
            Inner::NonCovalent(a, b) | Inner::CovalentBond(a, b) => {
                self.species(a, format!("{path}.0"));
                self.species(b, format!("{path}.1"));
            }
            Inner::CovalentMod(_, a) => self.species(a, format!("{path}.0")),
        }
    }

    fn caps(&mut self, c: &Capability, owner: &Name, path: &str) {
        match c {
            Capability::Var(_) => {}
            Capability::Rec(x, body) => {
                let closed = self.close(c);
                self.env.push((x.clone(), closed));
                self.caps(body, owner, path);
                self.env.pop();
            }
            Capability::Sum(gs) => {
                for (k, g) in gs.iter().enumerate() {
                    let (compound, cont, tag) = match &g.op {
                        CapOp::NonCovBind { partner, cont } => (
                            Name::non_covalent(owner.clone(), partner.clone()),
                            cont,
                            "bind",
                        ),
                        CapOp::CovBind { partner, cont } => (
                            Name::covalent_bond(owner.clone(), partner.clone()),
                            cont,
                            "cbind",
                        ),
                        CapOp::CovMod { modtype, cont } => (
                            Name::covalent_mod(modtype.clone(), owner.clone()),
                            cont,
                            "mod",
                        ),
                        CapOp::Cleave { .. } => continue,
                        CapOp::Convert(q) => {
                            self.process(q, &format!("{path}/conv#{k}/m"));
                            continue;
                        }
                        CapOp::Produce(q) => {
                            self.process(q, &format!("{path}/prod#{k}/m"));
                            continue;
                        }
                    };
                    let sub = format!("{path}/{tag}#{k}");
                    self.record(compound.clone(), cont, sub.clone());
                    self.caps(cont, &compound, &sub);
                }
            }
        }
    }
}

/// Weak syntactic consistency: positions with congruent names carry
/// congruent capabilities.
pub fn check_weak(p: &Process) -> ConsistencyVerdict {
    match first_clash(&enumerate_positions(p)) {
        Some(w) => ConsistencyVerdict::Inconsistent(Box::new(w)),
        None => ConsistencyVerdict::Consistent,
    }
}

fn first_clash(entries: &[PositionEntry]) -> Option<Witness> {
    let mut reps: BTreeMap<&Name, &PositionEntry> = BTreeMap::new();
    for e in entries {
        match reps.get(&e.name) {
            Some(first) if !caps_equal(&first.caps, &e.caps) => {
                return Some(Witness {
                    first: (*first).clone(),
                    second: e.clone(),
                    missing: None,
                })
            }
            Some(_) => {}
            None => {
                reps.insert(&e.name, e);
            }
        }
    }
    None
}

/// Strong syntactic consistency: weak consistency, plus every `bind(N2) μ`
/// (resp. `cbind`) in the capability of a position named `N1` is matched by
/// `bind(N1) μ` in the capability of every position named `N2`.
///
/// Contingencies of the matched summands are not compared.
pub fn check_strong(p: &Process) -> ConsistencyVerdict {
    let entries = enumerate_positions(p);
    if let Some(w) = first_clash(&entries) {
        return ConsistencyVerdict::Inconsistent(Box::new(w));
    }
    let mut reps: BTreeMap<&Name, &PositionEntry> = BTreeMap::new();
    for e in &entries {
        reps.entry(&e.name).or_insert(e);
    }
    for (n1, e1) in &reps {
        for g in e1.caps.summands().iter() {
            let (partner, cont, covalent) = match &g.op {
                CapOp::NonCovBind { partner, cont } => (partner, cont, false),
                CapOp::CovBind { partner, cont } => (partner, cont, true),
                _ => continue,
            };
            let Some(e2) = reps.get(partner) else {
                continue;
            };
            let reciprocal = e2.caps.summands().iter().any(|h| match &h.op {
                CapOp::NonCovBind {
                    partner: back,
                    cont: c,
                } if !covalent => back == *n1 && caps_equal(c, cont),
                CapOp::CovBind {
                    partner: back,
                    cont: c,
                } if covalent => back == *n1 && caps_equal(c, cont),
                _ => false,
            });
            if !reciprocal {
                let missing = if covalent {
                    BasicCap::cbind((*n1).clone(), cont.clone())
                } else {
                    BasicCap::bind((*n1).clone(), cont.clone())
                };
                return ConsistencyVerdict::Inconsistent(Box::new(Witness {
                    first: (*e1).clone(),
                    second: (*e2).clone(),
                    missing: Some(missing),
                }));
            }
        }
    }
    ConsistencyVerdict::Consistent
}

/// Semantic consistency over the bounded reachable state space: all
/// top-level molecules with the same name, in any reached state, carry
/// congruent capabilities.
pub fn check_semantic(p: &Process, bounds: Bounds) -> ConsistencyVerdict {
    let mut seen: BTreeMap<Name, (PositionEntry, Fingerprint)> = BTreeMap::new();
    let mut checked: HashSet<(Name, Capability)> = HashSet::new();
    let mut clash = None;
    let (lts, stopped) = explore_with(p, bounds, |state, proc| {
        for (k, s) in proc.molecules().iter().enumerate() {
            let key = (s.name(), s.caps.clone());
            if checked.contains(&key) {
                continue;
            }
            let entry = PositionEntry {
                name: key.0.clone(),
                caps: key.1.clone(),
                path: format!("state{state}/m{k}"),
            };
            let fp = capability_fingerprint(&entry.caps);
            match seen.get(&entry.name) {
                Some((_, first)) if *first == fp => {}
                Some((first, _)) => {
                    clash = Some(Witness {
                        first: first.clone(),
                        second: entry,
                        missing: None,
                    });
                    return false;
                }
                None => {
                    seen.insert(entry.name.clone(), (entry.clone(), fp));
                }
            }
            checked.insert(key);
        }
        true
    });
    match clash {
        Some(w) => ConsistencyVerdict::Inconsistent(Box::new(w)),
        None if lts.truncated || stopped => ConsistencyVerdict::ConsistentUpToDepth(lts.depth),
        None => ConsistencyVerdict::Consistent,
    }
}
