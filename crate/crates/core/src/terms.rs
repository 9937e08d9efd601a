//! The term algebra: processes, species, capabilities and names.
//!
//! Values are plain immutable trees. Structural congruence lives in
//! [`crate::congruence`]; this module only provides construction, capability
//! stripping, substitution and well-formedness validation.

use std::borrow::Cow;
use std::collections::BTreeSet;

use thiserror::Error;

pub type Ident = String;

/// A finite set of species names, used for promoter and inhibitor sets.
pub type NameSet = BTreeSet<Name>;

/// A parallel composition of molecules. The empty composition is `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Process {
    molecules: Vec<Species>,
}

/// A molecule `μ.IS`: a structure together with its interaction capabilities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Species {
    pub body: Inner,
    pub caps: Capability,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inner {
    Elementary(Ident),
    /// Non-covalent complex `S1 : S2`.
    NonCovalent(Box<Species>, Box<Species>),
    /// Covalent modification `[q S]`.
    CovalentMod(Ident, Box<Species>),
    /// Covalent bond `[S1 S2]`.
    CovalentBond(Box<Species>, Box<Species>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capability {
    /// A sum of basic capabilities; the empty sum is `∅`.
    Sum(Vec<BasicCap>),
    Rec(Ident, Box<Capability>),
    Var(Ident),
}

/// A basic capability `(ν, ι) op`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicCap {
    pub op: CapOp,
    pub promoters: NameSet,
    pub inhibitors: NameSet,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CapOp {
    NonCovBind { partner: Name, cont: Capability },
    CovBind { partner: Name, cont: Capability },
    CovMod { modtype: Ident, cont: Capability },
    Cleave { target: Name },
    Convert(Process),
    Produce(Process),
}

/// A species with every embedded capability empty.
///
/// Names are kept canonical: children of `:` and `[S S]` compounds are sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Inner);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unbound capability variable `{0}`")]
    FreeVariable(Ident),
    #[error("cleave target must be a covalent bond or modification, found `{0}`")]
    BadCleaveTarget(Name),
    #[error("non-contractive recursion `rec {0}`")]
    NonContractive(Ident),
}

impl Process {
    pub fn empty() -> Self {
        Process::default()
    }

    pub fn new(molecules: Vec<Species>) -> Self {
        Process { molecules }
    }

    pub fn molecule(s: Species) -> Self {
        Process { molecules: vec![s] }
    }

    pub fn molecules(&self) -> &[Species] {
        &self.molecules
    }

    pub fn into_molecules(self) -> Vec<Species> {
        self.molecules
    }

    pub fn is_empty(&self) -> bool {
        self.molecules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.molecules.len()
    }

    /// `self | other`, without canonicalizing.
    pub fn par(mut self, other: Process) -> Process {
        self.molecules.extend(other.molecules);
        self
    }
}

impl FromIterator<Species> for Process {
    fn from_iter<T: IntoIterator<Item = Species>>(iter: T) -> Self {
        Process::new(iter.into_iter().collect())
    }
}

impl Species {
    pub fn new(caps: Capability, body: Inner) -> Self {
        Species { body, caps }
    }

    pub fn elementary(caps: Capability, id: impl Into<Ident>) -> Self {
        Species::new(caps, Inner::Elementary(id.into()))
    }

    pub fn non_covalent(caps: Capability, a: Species, b: Species) -> Self {
        Species::new(caps, Inner::NonCovalent(Box::new(a), Box::new(b)))
    }

    pub fn covalent_mod(caps: Capability, modtype: impl Into<Ident>, s: Species) -> Self {
        Species::new(caps, Inner::CovalentMod(modtype.into(), Box::new(s)))
    }

    pub fn covalent_bond(caps: Capability, a: Species, b: Species) -> Self {
        Species::new(caps, Inner::CovalentBond(Box::new(a), Box::new(b)))
    }

    /// The name of this species, ignoring whether its capabilities are closed.
    pub fn name(&self) -> Name {
        Name::from_inner(&self.body)
    }
}

impl Capability {
    pub fn empty() -> Self {
        Capability::Sum(Vec::new())
    }

    pub fn sum(summands: impl IntoIterator<Item = BasicCap>) -> Self {
        Capability::Sum(summands.into_iter().collect())
    }

    pub fn rec(var: impl Into<Ident>, body: Capability) -> Self {
        Capability::Rec(var.into(), Box::new(body))
    }

    pub fn var(var: impl Into<Ident>) -> Self {
        Capability::Var(var.into())
    }

    pub fn is_empty_sum(&self) -> bool {
        matches!(self, Capability::Sum(s) if s.is_empty())
    }

    /// Unfolds leading `rec` binders and returns the summands of the resulting sum.
    ///
    /// For a closed, contractive capability this is the set `M` with
    /// `μ ≡ {M}`. A variable head (only possible for open or non-contractive
    /// terms) has no summands.
    pub fn summands(&self) -> Cow<'_, [BasicCap]> {
        let mut cur = match self {
            Capability::Sum(s) => return Cow::Borrowed(s),
            Capability::Var(_) => return Cow::Borrowed(&[]),
            Capability::Rec(..) => self.clone(),
        };
        loop {
            match cur {
                Capability::Sum(s) => return Cow::Owned(s),
                Capability::Var(_) => return Cow::Borrowed(&[]),
                Capability::Rec(ref x, ref body) => {
                    let next = substitute(body, x, &cur);
                    cur = next;
                }
            }
        }
    }

    /// One step of `rec x.μ ≡ μ[rec x.μ / x]`; other capabilities are returned unchanged.
    pub fn unfold_once(&self) -> Capability {
        match self {
            Capability::Rec(x, body) => substitute(body, x, self),
            other => other.clone(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        free_vars_cap(self, &mut bound, &mut out);
        out
    }
}

impl BasicCap {
    pub fn new(op: CapOp) -> Self {
        BasicCap {
            op,
            promoters: NameSet::new(),
            inhibitors: NameSet::new(),
        }
    }

    pub fn with_contingencies(op: CapOp, promoters: NameSet, inhibitors: NameSet) -> Self {
        BasicCap {
            op,
            promoters,
            inhibitors,
        }
    }

    pub fn bind(partner: Name, cont: Capability) -> Self {
        BasicCap::new(CapOp::NonCovBind { partner, cont })
    }

    pub fn cbind(partner: Name, cont: Capability) -> Self {
        BasicCap::new(CapOp::CovBind { partner, cont })
    }

    pub fn modify(modtype: impl Into<Ident>, cont: Capability) -> Self {
        BasicCap::new(CapOp::CovMod {
            modtype: modtype.into(),
            cont,
        })
    }

    pub fn cleave(target: Name) -> Self {
        BasicCap::new(CapOp::Cleave { target })
    }

    pub fn convert(p: Process) -> Self {
        BasicCap::new(CapOp::Convert(p))
    }

    pub fn produce(p: Process) -> Self {
        BasicCap::new(CapOp::Produce(p))
    }
}

impl Name {
    pub fn elementary(id: impl Into<Ident>) -> Self {
        Name(Inner::Elementary(id.into()))
    }

    pub fn non_covalent(a: Name, b: Name) -> Self {
        let (a, b) = ordered(a, b);
        Name(Inner::NonCovalent(
            Box::new(a.into_species()),
            Box::new(b.into_species()),
        ))
    }

    pub fn covalent_mod(modtype: impl Into<Ident>, n: Name) -> Self {
        Name(Inner::CovalentMod(
            modtype.into(),
            Box::new(n.into_species()),
        ))
    }

    pub fn covalent_bond(a: Name, b: Name) -> Self {
        let (a, b) = ordered(a, b);
        Name(Inner::CovalentBond(
            Box::new(a.into_species()),
            Box::new(b.into_species()),
        ))
    }

    /// Strips every capability below `inner` and re-sorts compound children.
    pub fn from_inner(inner: &Inner) -> Self {
        match inner {
            Inner::Elementary(a) => Name::elementary(a.clone()),
            Inner::NonCovalent(a, b) => Name::non_covalent(a.name(), b.name()),
            Inner::CovalentMod(q, s) => Name::covalent_mod(q.clone(), s.name()),
            Inner::CovalentBond(a, b) => Name::covalent_bond(a.name(), b.name()),
        }
    }

    pub fn inner(&self) -> &Inner {
        &self.0
    }

    pub fn as_species(&self) -> Species {
        Species::new(Capability::empty(), self.0.clone())
    }

    pub fn into_species(self) -> Species {
        Species::new(Capability::empty(), self.0)
    }

    /// Direct components of a compound name.
    pub fn children(&self) -> Vec<Name> {
        match &self.0 {
            Inner::Elementary(_) => Vec::new(),
            Inner::NonCovalent(a, b) | Inner::CovalentBond(a, b) => vec![a.name(), b.name()],
            Inner::CovalentMod(_, s) => vec![s.name()],
        }
    }

    pub fn is_cleavable(&self) -> bool {
        matches!(self.0, Inner::CovalentBond(..) | Inner::CovalentMod(..))
    }
}

fn ordered(a: Name, b: Name) -> (Name, Name) {
    if b < a {
        (b, a)
    } else {
        (a, b)
    }
}

/// `τ̂(S)`: the name of a closed species.
pub fn strip_species(s: &Species) -> Result<Name, TermError> {
    check_closed_species(s, &mut Vec::new())?;
    Ok(s.name())
}

/// `τ̂(P)`: the set of names of the top-level molecules of a closed process.
pub fn strip_process(p: &Process) -> Result<NameSet, TermError> {
    p.molecules().iter().map(strip_species).collect()
}

/// Names of the top-level molecules, without a closedness check.
pub(crate) fn names_of(p: &Process) -> NameSet {
    p.molecules().iter().map(Species::name).collect()
}

/// Capture-avoiding substitution `body[repl / var]`, reaching into the
/// process payloads of conversions and productions.
pub fn substitute(body: &Capability, var: &str, repl: &Capability) -> Capability {
    let fv = repl.free_vars();
    subst_cap(body, var, repl, &fv)
}

pub fn substitute_process(p: &Process, var: &str, repl: &Capability) -> Process {
    let fv = repl.free_vars();
    subst_process(p, var, repl, &fv)
}

fn subst_cap(c: &Capability, var: &str, repl: &Capability, fv: &BTreeSet<Ident>) -> Capability {
    match c {
        Capability::Var(x) if x == var => repl.clone(),
        Capability::Var(_) => c.clone(),
        Capability::Rec(x, _) if x == var => c.clone(),
        Capability::Rec(x, b) => {
            if fv.contains(x) && b.free_vars().contains(var) {
                let fresh = fresh_var(x, |cand| {
                    fv.contains(cand) || b.free_vars().contains(cand) || cand == var
                });
                let fresh_fv = BTreeSet::from([fresh.clone()]);
                let renamed = subst_cap(b, x, &Capability::Var(fresh.clone()), &fresh_fv);
                Capability::rec(fresh, subst_cap(&renamed, var, repl, fv))
            } else {
                Capability::rec(x.clone(), subst_cap(b, var, repl, fv))
            }
        }
        Capability::Sum(s) => Capability::Sum(
            s.iter()
                .map(|g| BasicCap {
                    op: subst_op(&g.op, var, repl, fv),
                    promoters: g.promoters.clone(),
                    inhibitors: g.inhibitors.clone(),
                })
                .collect(),
        ),
    }
}

fn subst_op(op: &CapOp, var: &str, repl: &Capability, fv: &BTreeSet<Ident>) -> CapOp {
    match op {
        CapOp::NonCovBind { partner, cont } => CapOp::NonCovBind {
            partner: partner.clone(),
            cont: subst_cap(cont, var, repl, fv),
        },
        CapOp::CovBind { partner, cont } => CapOp::CovBind {
            partner: partner.clone(),
            cont: subst_cap(cont, var, repl, fv),
        },
        CapOp::CovMod { modtype, cont } => CapOp::CovMod {
            modtype: modtype.clone(),
            cont: subst_cap(cont, var, repl, fv),
        },
        CapOp::Cleave { .. } => op.clone(),
        CapOp::Convert(p) => CapOp::Convert(subst_process(p, var, repl, fv)),
        CapOp::Produce(p) => CapOp::Produce(subst_process(p, var, repl, fv)),
    }
}

fn subst_process(p: &Process, var: &str, repl: &Capability, fv: &BTreeSet<Ident>) -> Process {
    p.molecules()
        .iter()
        .map(|s| subst_species(s, var, repl, fv))
        .collect()
}

fn subst_species(s: &Species, var: &str, repl: &Capability, fv: &BTreeSet<Ident>) -> Species {
    let body = match &s.body {
        Inner::Elementary(a) => Inner::Elementary(a.clone()),
        Inner::NonCovalent(a, b) => Inner::NonCovalent(
            Box::new(subst_species(a, var, repl, fv)),
            Box::new(subst_species(b, var, repl, fv)),
        ),
        Inner::CovalentMod(q, a) => {
            Inner::CovalentMod(q.clone(), Box::new(subst_species(a, var, repl, fv)))
        }
        Inner::CovalentBond(a, b) => Inner::CovalentBond(
            Box::new(subst_species(a, var, repl, fv)),
            Box::new(subst_species(b, var, repl, fv)),
        ),
    };
    Species {
        body,
        caps: subst_cap(&s.caps, var, repl, fv),
    }
}

fn fresh_var(base: &str, taken: impl Fn(&str) -> bool) -> Ident {
    (0..)
        .map(|i| format!("{base}_{i}"))
        .find(|cand| !taken(cand))
        .expect("unbounded supply of names")
}

fn free_vars_cap(c: &Capability, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match c {
        Capability::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Capability::Rec(x, b) => {
            bound.push(x.clone());
            free_vars_cap(b, bound, out);
            bound.pop();
        }
        Capability::Sum(s) => {
            for g in s {
                match &g.op {
                    CapOp::NonCovBind { cont, .. }
                    | CapOp::CovBind { cont, .. }
                    | CapOp::CovMod { cont, .. } => free_vars_cap(cont, bound, out),
                    CapOp::Cleave { .. } => {}
                    CapOp::Convert(p) | CapOp::Produce(p) => {
                        for s in p.molecules() {
                            free_vars_species(s, bound, out);
                        }
                    }
                }
            }
        }
    }
}

fn free_vars_species(s: &Species, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    free_vars_cap(&s.caps, bound, out);
    match &s.body {
        Inner::Elementary(_) => {}
        Inner::NonCovalent(a, b) | Inner::CovalentBond(a, b) => {
            free_vars_species(a, bound, out);
            free_vars_species(b, bound, out);
        }
        Inner::CovalentMod(_, a) => free_vars_species(a, bound, out),
    }
}

/// Checks that a process is closed, has only covalent cleave targets and
/// contains no non-contractive recursion such as `rec x.x`.
pub fn validate_process(p: &Process) -> Result<(), TermError> {
    let mut bound = Vec::new();
    p.molecules()
        .iter()
        .try_for_each(|s| validate_species(s, &mut bound))
}

pub fn validate_capability(c: &Capability) -> Result<(), TermError> {
    validate_cap(c, &mut Vec::new())
}

fn check_closed_species(s: &Species, bound: &mut Vec<Ident>) -> Result<(), TermError> {
    let mut fv = BTreeSet::new();
    free_vars_species(s, bound, &mut fv);
    match fv.into_iter().next() {
        Some(x) => Err(TermError::FreeVariable(x)),
        None => Ok(()),
    }
}

fn validate_species(s: &Species, bound: &mut Vec<Ident>) -> Result<(), TermError> {
    validate_cap(&s.caps, bound)?;
    match &s.body {
        Inner::Elementary(_) => Ok(()),
        Inner::NonCovalent(a, b) | Inner::CovalentBond(a, b) => {
            validate_species(a, bound)?;
            validate_species(b, bound)
        }
        Inner::CovalentMod(_, a) => validate_species(a, bound),
    }
}

fn validate_cap(c: &Capability, bound: &mut Vec<Ident>) -> Result<(), TermError> {
    match c {
        Capability::Var(x) if bound.contains(x) => Ok(()),
        Capability::Var(x) => Err(TermError::FreeVariable(x.clone())),
        Capability::Rec(x, b) => {
            // rec x1. ... rec xn. y is only meaningful when y is bound further out
            let mut chain = vec![x];
            let mut head = b.as_ref();
            while let Capability::Rec(y, inner) = head {
                chain.push(y);
                head = inner;
            }
            if let Capability::Var(y) = head {
                if chain.contains(&y) {
                    return Err(TermError::NonContractive(x.clone()));
                }
            }
            bound.push(x.clone());
            let r = validate_cap(b, bound);
            bound.pop();
            r
        }
        Capability::Sum(s) => s.iter().try_for_each(|g| match &g.op {
            CapOp::NonCovBind { cont, .. }
            | CapOp::CovBind { cont, .. }
            | CapOp::CovMod { cont, .. } => validate_cap(cont, bound),
            CapOp::Cleave { target } if target.is_cleavable() => Ok(()),
            CapOp::Cleave { target } => Err(TermError::BadCleaveTarget(target.clone())),
            CapOp::Convert(p) | CapOp::Produce(p) => p
                .molecules()
                .iter()
                .try_for_each(|s| validate_species(s, bound)),
        }),
    }
}
