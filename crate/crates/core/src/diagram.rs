//! Compilation of explicit-interpretation interaction diagrams into terms.
//!
//! Every species name gets one capability, a sum with one summand per
//! reaction it takes part in. Binding reactions install the summand on both
//! partners with the same continuation, the capability of the compound they
//! form, so compiled terms are strongly consistent. Cyclic references between
//! names become `rec` binders.
//!
//! ```json
//! {
//!   "species": [{"id": "E", "kind": "elementary", "count": 1},
//!               {"id": "A", "kind": "elementary", "count": 1}],
//!   "reactions": [{"kind": "ncb", "participants": ["E", "A"]},
//!                 {"kind": "conv", "participants": ["E:A"], "products": ["C", "E"]}]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::canonicalize;
use crate::syntax::{parse_name, ParseError};
use crate::terms::{BasicCap, CapOp, Capability, Inner, Name, NameSet, Process, Species};

pub mod synth;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    /// Only `"explicit"` is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<String>,
    #[serde(default)]
    pub species: Vec<SpeciesDecl>,
    #[serde(default)]
    pub reactions: Vec<ReactionDecl>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesDecl {
    pub id: String,
    pub kind: SpeciesKind,
    #[serde(default)]
    pub count: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesKind {
    Elementary,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionDecl {
    pub kind: ReactionKind,
    pub participants: Vec<String>,
    /// Modification type for `mod` reactions, with or without the leading `'`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modtype: Option<String>,
    /// Compound whose capability continues a `ncb`, `cb` or `mod` reaction.
    /// It must name the reaction's own product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_caps_ref: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub promoters: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inhibitors: Vec<String>,
    /// Rate-level contingencies; rejected.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stimulators: Vec<String>,
    /// Rate-level contingencies; rejected.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub catalysts: Vec<String>,
    /// Products of `conv` and `prod` reactions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<Product>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReactionKind {
    Ncb,
    Cb,
    Mod,
    Cleave,
    Conv,
    Prod,
    Degrade,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Product {
    Name(String),
    Counted { name: String, count: u32 },
}

impl Product {
    fn parts(&self) -> (&str, u32) {
        match self {
            Product::Name(n) => (n, 1),
            Product::Counted { name, count } => (name, *count),
        }
    }
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("invalid diagram JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid species name `{text}`: {source}")]
    BadName { text: String, source: ParseError },
    #[error("species `{0}` is declared twice")]
    DuplicateSpecies(String),
    #[error("species `{id}` is declared {declared:?} but its name says otherwise")]
    KindMismatch { id: String, declared: SpeciesKind },
    #[error("{kind:?} reaction takes {expected} participant(s), found {found}")]
    Arity {
        kind: ReactionKind,
        expected: usize,
        found: usize,
    },
    #[error("mod reaction on `{0}` has no modtype")]
    MissingModtype(String),
    #[error("`{0}` is neither declared nor formed by any reaction")]
    UnresolvedName(String),
    #[error("cleave target must be a covalent bond or modification, found `{0}`")]
    BadCleaveTarget(Name),
    #[error("product_caps_ref `{found}` does not name the reaction product `{expected}`")]
    ProductCapsRef { expected: Name, found: Name },
    #[error("{0} contingencies have no counterpart in the calculus")]
    UnsupportedContingency(&'static str),
    #[error("only the explicit interpretation is supported, not `{0}`")]
    UnsupportedInterpretation(String),
    #[error("products are only allowed on conv and prod reactions")]
    UnexpectedProducts,
    #[error("unknown species `{0}`")]
    UnknownSpecies(Name),
}

impl DiagramSpec {
    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Initial molecule counts declared on the species.
    pub fn counts(&self) -> Result<BTreeMap<Name, u32>, DiagramError> {
        let mut out = BTreeMap::new();
        for s in &self.species {
            *out.entry(name(&s.id)?).or_insert(0) += s.count;
        }
        Ok(out)
    }
}

fn name(text: &str) -> Result<Name, DiagramError> {
    parse_name(text).map_err(|source| DiagramError::BadName {
        text: text.to_string(),
        source,
    })
}

/// A capability for every species name reachable in a diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpeciesTable {
    entries: BTreeMap<Name, Capability>,
}

impl SpeciesTable {
    pub fn get(&self, n: &Name) -> Option<&Capability> {
        self.entries.get(n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Capability)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The molecule `t(N).N`, with every sub-species carrying its own entry.
    pub fn species(&self, n: &Name) -> Option<Species> {
        let caps = self.entries.get(n)?.clone();
        let body = match n.inner() {
            Inner::Elementary(a) => Inner::Elementary(a.clone()),
            Inner::NonCovalent(a, b) => Inner::NonCovalent(
                Box::new(self.species(&a.name())?),
                Box::new(self.species(&b.name())?),
            ),
            Inner::CovalentMod(q, a) => {
                Inner::CovalentMod(q.clone(), Box::new(self.species(&a.name())?))
            }
            Inner::CovalentBond(a, b) => Inner::CovalentBond(
                Box::new(self.species(&a.name())?),
                Box::new(self.species(&b.name())?),
            ),
        };
        Some(Species::new(caps, body))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum OpDef {
    Bind { partner: Name, cont: Name },
    CBind { partner: Name, cont: Name },
    Mod { modtype: String, cont: Name },
    Cleave(Name),
    Conv(Vec<Name>),
    Prod(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct SummandDef {
    op: OpDef,
    promoters: NameSet,
    inhibitors: NameSet,
}

struct Reaction {
    kind: ReactionKind,
    participants: Vec<Name>,
    modtype: Option<String>,
    caps_ref: Option<Name>,
    promoters: NameSet,
    inhibitors: NameSet,
    products: Vec<Name>,
}

impl Reaction {
    fn parse(r: &ReactionDecl) -> Result<Self, DiagramError> {
        if !r.stimulators.is_empty() {
            return Err(DiagramError::UnsupportedContingency("stimulation"));
        }
        if !r.catalysts.is_empty() {
            return Err(DiagramError::UnsupportedContingency("catalysis"));
        }
        let expected = match r.kind {
            ReactionKind::Ncb | ReactionKind::Cb | ReactionKind::Cleave => 2,
            _ => 1,
        };
        if r.participants.len() != expected {
            return Err(DiagramError::Arity {
                kind: r.kind,
                expected,
                found: r.participants.len(),
            });
        }
        if !r.products.is_empty() && !matches!(r.kind, ReactionKind::Conv | ReactionKind::Prod) {
            return Err(DiagramError::UnexpectedProducts);
        }
        let participants = r
            .participants
            .iter()
            .map(|p| name(p))
            .collect::<Result<Vec<_>, _>>()?;
        let modtype = match (r.kind, &r.modtype) {
            (ReactionKind::Mod, None) => {
                return Err(DiagramError::MissingModtype(r.participants[0].clone()))
            }
            (_, m) => m.as_ref().map(|q| q.trim_start_matches('\'').to_string()),
        };
        if r.kind == ReactionKind::Cleave && !participants[1].is_cleavable() {
            return Err(DiagramError::BadCleaveTarget(participants[1].clone()));
        }
        let mut products = Vec::new();
        for p in &r.products {
            let (text, count) = p.parts();
            let n = name(text)?;
            products.extend(std::iter::repeat_n(n, count as usize));
        }
        let reaction = Reaction {
            kind: r.kind,
            participants,
            modtype,
            caps_ref: r.product_caps_ref.as_deref().map(name).transpose()?,
            promoters: r
                .promoters
                .iter()
                .map(|n| name(n))
                .collect::<Result<_, _>>()?,
            inhibitors: r
                .inhibitors
                .iter()
                .map(|n| name(n))
                .collect::<Result<_, _>>()?,
            products,
        };
        if let (Some(found), Some(expected)) = (&reaction.caps_ref, reaction.compound()) {
            if *found != expected {
                return Err(DiagramError::ProductCapsRef {
                    expected,
                    found: found.clone(),
                });
            }
        }
        Ok(reaction)
    }

    /// The compound formed by a binding or modification.
    fn compound(&self) -> Option<Name> {
        let p = &self.participants;
        match self.kind {
            ReactionKind::Ncb => Some(Name::non_covalent(p[0].clone(), p[1].clone())),
            ReactionKind::Cb => Some(Name::covalent_bond(p[0].clone(), p[1].clone())),
            ReactionKind::Mod => Some(Name::covalent_mod(
                self.modtype.clone().unwrap_or_default(),
                p[0].clone(),
            )),
            _ => None,
        }
    }

    /// Names that appear once the reaction has fired.
    fn outputs(&self) -> Vec<Name> {
        match self.kind {
            ReactionKind::Ncb | ReactionKind::Cb | ReactionKind::Mod => {
                self.compound().into_iter().collect()
            }
            ReactionKind::Cleave => self.participants[1].children(),
            ReactionKind::Conv | ReactionKind::Prod => self.products.clone(),
            ReactionKind::Degrade => Vec::new(),
        }
    }

    fn summand(&self, op: OpDef) -> SummandDef {
        SummandDef {
            op,
            promoters: self.promoters.clone(),
            inhibitors: self.inhibitors.clone(),
        }
    }
}

fn with_subnames(n: &Name, into: &mut BTreeSet<Name>) -> bool {
    let fresh = into.insert(n.clone());
    for c in n.children() {
        with_subnames(&c, into);
    }
    fresh
}

/// Compiles a diagram into a capability per species name.
pub fn compile_table(d: &DiagramSpec) -> Result<SpeciesTable, DiagramError> {
    if let Some(i) = &d.interpretation {
        if i != "explicit" {
            return Err(DiagramError::UnsupportedInterpretation(i.clone()));
        }
    }
    let mut known = BTreeSet::new();
    let mut declared = BTreeSet::new();
    for s in &d.species {
        let n = name(&s.id)?;
        let elementary = matches!(n.inner(), Inner::Elementary(_));
        if elementary != (s.kind == SpeciesKind::Elementary) {
            return Err(DiagramError::KindMismatch {
                id: s.id.clone(),
                declared: s.kind,
            });
        }
        if !declared.insert(n.clone()) {
            return Err(DiagramError::DuplicateSpecies(s.id.clone()));
        }
        with_subnames(&n, &mut known);
    }
    let reactions = d
        .reactions
        .iter()
        .map(Reaction::parse)
        .collect::<Result<Vec<_>, _>>()?;

    // names formed by reactions whose participants are themselves available
    loop {
        let mut changed = false;
        for r in &reactions {
            if r.participants.iter().all(|p| known.contains(p)) {
                for out in r.outputs() {
                    changed |= with_subnames(&out, &mut known);
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (r, decl) in reactions.iter().zip(&d.reactions) {
        if let Some(k) = r.participants.iter().position(|p| !known.contains(p)) {
            return Err(DiagramError::UnresolvedName(decl.participants[k].clone()));
        }
    }

    let mut defs: BTreeMap<Name, Vec<SummandDef>> =
        known.iter().map(|n| (n.clone(), Vec::new())).collect();
    for r in &reactions {
        let p = &r.participants;
        let mut add = |holder: &Name, op: OpDef| {
            if let Some(v) = defs.get_mut(holder) {
                v.push(r.summand(op));
            }
        };
        match r.kind {
            ReactionKind::Ncb | ReactionKind::Cb => {
                let cont = r.compound().expect("binding has a compound");
                let op = |partner: &Name| match r.kind {
                    ReactionKind::Ncb => OpDef::Bind {
                        partner: partner.clone(),
                        cont: cont.clone(),
                    },
                    _ => OpDef::CBind {
                        partner: partner.clone(),
                        cont: cont.clone(),
                    },
                };
                add(&p[0], op(&p[1]));
                if p[0] != p[1] {
                    add(&p[1], op(&p[0]));
                }
            }
            ReactionKind::Mod => {
                let cont = r.compound().expect("modification has a compound");
                add(
                    &p[0],
                    OpDef::Mod {
                        modtype: r.modtype.clone().unwrap_or_default(),
                        cont,
                    },
                );
            }
            ReactionKind::Cleave => add(&p[0], OpDef::Cleave(p[1].clone())),
            ReactionKind::Conv => add(&p[0], OpDef::Conv(r.products.clone())),
            ReactionKind::Prod => add(&p[0], OpDef::Prod(r.products.clone())),
            ReactionKind::Degrade => add(&p[0], OpDef::Conv(Vec::new())),
        }
    }
    for v in defs.values_mut() {
        v.sort();
        v.dedup();
    }

    let vars: BTreeMap<Name, String> = defs
        .keys()
        .enumerate()
        .map(|(i, n)| (n.clone(), format!("x{i}")))
        .collect();
    let mut ex = Expander {
        defs: &defs,
        vars: &vars,
        stack: Vec::new(),
        memo: HashMap::new(),
    };
    let entries = defs
        .keys()
        .map(|n| {
            let (c, free) = ex.cap(n);
            debug_assert!(free.is_empty());
            (n.clone(), c)
        })
        .collect();
    Ok(SpeciesTable { entries })
}

/// Unfolds name references into closed capabilities. A reference back to a
/// name still being expanded becomes a variable bound by that name's `rec`.
struct Expander<'a> {
    defs: &'a BTreeMap<Name, Vec<SummandDef>>,
    vars: &'a BTreeMap<Name, String>,
    stack: Vec<Name>,
    memo: HashMap<Name, Capability>,
}

impl Expander<'_> {
    fn cap(&mut self, n: &Name) -> (Capability, BTreeSet<Name>) {
        if self.stack.contains(n) {
            return (
                Capability::var(self.vars[n].clone()),
                BTreeSet::from([n.clone()]),
            );
        }
        if let Some(c) = self.memo.get(n) {
            return (c.clone(), BTreeSet::new());
        }
        self.stack.push(n.clone());
        let mut free = BTreeSet::new();
        let defs = self.defs;
        let summands = defs[n]
            .iter()
            .map(|d| {
                let op = match &d.op {
                    OpDef::Bind { partner, cont } => CapOp::NonCovBind {
                        partner: partner.clone(),
                        cont: self.cap_into(cont, &mut free),
                    },
                    OpDef::CBind { partner, cont } => CapOp::CovBind {
                        partner: partner.clone(),
                        cont: self.cap_into(cont, &mut free),
                    },
                    OpDef::Mod { modtype, cont } => CapOp::CovMod {
                        modtype: modtype.clone(),
                        cont: self.cap_into(cont, &mut free),
                    },
                    OpDef::Cleave(t) => CapOp::Cleave { target: t.clone() },
                    OpDef::Conv(ps) => CapOp::Convert(self.products(ps, &mut free)),
                    OpDef::Prod(ps) => CapOp::Produce(self.products(ps, &mut free)),
                };
                BasicCap::with_contingencies(op, d.promoters.clone(), d.inhibitors.clone())
            })
            .collect::<Vec<_>>();
        self.stack.pop();
        let body = Capability::Sum(summands);
        let c = if free.remove(n) {
            Capability::rec(self.vars[n].clone(), body)
        } else {
            body
        };
        if free.is_empty() {
            self.memo.insert(n.clone(), c.clone());
        }
        (c, free)
    }

    fn cap_into(&mut self, n: &Name, free: &mut BTreeSet<Name>) -> Capability {
        let (c, f) = self.cap(n);
        free.extend(f);
        c
    }

    fn products(&mut self, ps: &[Name], free: &mut BTreeSet<Name>) -> Process {
        ps.iter().map(|p| self.species(p, free)).collect()
    }

    fn species(&mut self, n: &Name, free: &mut BTreeSet<Name>) -> Species {
        let caps = self.cap_into(n, free);
        let body = match n.inner() {
            Inner::Elementary(a) => Inner::Elementary(a.clone()),
            Inner::NonCovalent(a, b) => Inner::NonCovalent(
                Box::new(self.species(&a.name(), free)),
                Box::new(self.species(&b.name(), free)),
            ),
            Inner::CovalentMod(q, a) => {
                Inner::CovalentMod(q.clone(), Box::new(self.species(&a.name(), free)))
            }
            Inner::CovalentBond(a, b) => Inner::CovalentBond(
                Box::new(self.species(&a.name(), free)),
                Box::new(self.species(&b.name(), free)),
            ),
        };
        Species::new(caps, body)
    }
}

/// `counts[N]` copies of `t(N).N` for every counted name, canonicalized.
pub fn instantiate(
    t: &SpeciesTable,
    counts: &BTreeMap<Name, u32>,
) -> Result<Process, DiagramError> {
    let mut molecules = Vec::new();
    for (n, &c) in counts {
        let s = t
            .species(n)
            .ok_or_else(|| DiagramError::UnknownSpecies(n.clone()))?;
        molecules.extend(std::iter::repeat_n(s, c as usize));
    }
    Ok(canonicalize(&Process::new(molecules)))
}

/// Compiles `d` and instantiates it with its declared counts.
pub fn import(d: &DiagramSpec) -> Result<(SpeciesTable, Process), DiagramError> {
    let table = compile_table(d)?;
    let p = instantiate(&table, &d.counts()?)?;
    Ok((table, p))
}
