//! Structural congruence.
//!
//! [`canonicalize`] picks a representative for laws 1-4: parallel composition
//! and sums are sorted and deduplicated, compound children are ordered and
//! bound variables are renamed by binding depth (`x0`, `x1`, ...).
//!
//! Law 5 (`rec x.μ ≡ μ[rec x.μ/x]`) is not a rewriting step. Equality up to
//! unfolding is decided by [`caps_equal`], which minimizes the finite graph of
//! a term. [`fingerprint`] gives a hashable key for congruence classes.

mod quotient;

pub use quotient::{capability_fingerprint, fingerprint, Fingerprint};

use crate::terms::{BasicCap, CapOp, Capability, Ident, Inner, Process, Species};
use quotient::Graph;

/// Canonical representative of `p` under laws 1-4.
pub fn canonicalize(p: &Process) -> Process {
    Canon::default().process(p)
}

pub fn canonical_species(s: &Species) -> Species {
    Canon::default().species(s)
}

pub fn canonical_capability(c: &Capability) -> Capability {
    Canon::default().cap(c)
}

#[derive(Default)]
struct Canon {
    scope: Vec<(Ident, Ident)>,
}

impl Canon {
    fn process(&mut self, p: &Process) -> Process {
        let mut ms: Vec<Species> = p.molecules().iter().map(|s| self.species(s)).collect();
        ms.sort();
        Process::new(ms)
    }

    fn species(&mut self, s: &Species) -> Species {
        let body = match &s.body {
            Inner::Elementary(a) => Inner::Elementary(a.clone()),
            Inner::NonCovalent(a, b) => {
                let (a, b) = sorted(self.species(a), self.species(b));
                Inner::NonCovalent(Box::new(a), Box::new(b))
            }
            Inner::CovalentMod(q, a) => Inner::CovalentMod(q.clone(), Box::new(self.species(a))),
            Inner::CovalentBond(a, b) => {
                let (a, b) = sorted(self.species(a), self.species(b));
                Inner::CovalentBond(Box::new(a), Box::new(b))
            }
        };
        Species {
            body,
            caps: self.cap(&s.caps),
        }
    }

    fn cap(&mut self, c: &Capability) -> Capability {
        match c {
            Capability::Var(x) => match self.scope.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Capability::Var(new.clone()),
                None => c.clone(),
            },
            Capability::Rec(x, b) => {
                let fresh = format!("x{}", self.scope.len());
                self.scope.push((x.clone(), fresh.clone()));
                let body = self.cap(b);
                self.scope.pop();
                Capability::Rec(fresh, Box::new(body))
            }
            Capability::Sum(s) => {
                let mut out: Vec<BasicCap> = s.iter().map(|g| self.basic(g)).collect();
                out.sort();
                out.dedup();
                Capability::Sum(out)
            }
        }
    }

    fn basic(&mut self, g: &BasicCap) -> BasicCap {
        let op = match &g.op {
            CapOp::NonCovBind { partner, cont } => CapOp::NonCovBind {
                partner: partner.clone(),
                cont: self.cap(cont),
            },
            CapOp::CovBind { partner, cont } => CapOp::CovBind {
                partner: partner.clone(),
                cont: self.cap(cont),
            },
            CapOp::CovMod { modtype, cont } => CapOp::CovMod {
                modtype: modtype.clone(),
                cont: self.cap(cont),
            },
            CapOp::Cleave { target } => CapOp::Cleave {
                target: target.clone(),
            },
            CapOp::Convert(p) => CapOp::Convert(self.process(p)),
            CapOp::Produce(p) => CapOp::Produce(self.process(p)),
        };
        BasicCap {
            op,
            promoters: g.promoters.clone(),
            inhibitors: g.inhibitors.clone(),
        }
    }
}

fn sorted<T: Ord>(a: T, b: T) -> (T, T) {
    if b < a {
        (b, a)
    } else {
        (a, b)
    }
}

/// `a ≡ b` for closed capabilities, under laws 3-5.
pub fn caps_equal(a: &Capability, b: &Capability) -> bool {
    if a == b {
        return true;
    }
    let mut g = Graph::default();
    let (x, y) = (g.cap(a), g.cap(b));
    let r = g.refine();
    r.ids[x] == r.ids[y]
}

/// `p ≡ q` for closed processes.
pub fn process_equal(p: &Process, q: &Process) -> bool {
    if p.len() != q.len() {
        return false;
    }
    if canonicalize(p) == canonicalize(q) {
        return true;
    }
    let mut g = Graph::default();
    let (x, y) = (g.process(p), g.process(q));
    let r = g.refine();
    r.multiset(&x) == r.multiset(&y)
}

pub fn species_equal(s: &Species, t: &Species) -> bool {
    let mut g = Graph::default();
    let (x, y) = (g.species(s), g.species(t));
    let r = g.refine();
    r.ids[x] == r.ids[y]
}
