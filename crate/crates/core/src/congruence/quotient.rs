//! Terms as finite graphs, minimized by partition refinement.
//!
//! Every capability and species subterm becomes a node; a `rec` variable is
//! an edge back to its binder. Signatures are refined until the partition is
//! stable, which yields the largest bisimulation, i.e. congruence under all
//! five laws. Class numbers are ranks of signatures, so the quotient reachable
//! from a root is numbered the same way for every congruent term and can be
//! used as a hash key.

use std::collections::{BTreeMap, HashMap};

use crate::terms::{CapOp, Capability, Ident, Inner, Name, NameSet, Process, Species};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Label {
    Bind(Name, NameSet, NameSet),
    CBind(Name, NameSet, NameSet),
    Mod(Ident, NameSet, NameSet),
    Cleave(Name, NameSet, NameSet),
    Conv(NameSet, NameSet),
    Prod(NameSet, NameSet),
    Elementary(Ident),
    NonCovalent,
    CovalentMod(Ident),
    CovalentBond,
}

#[derive(Clone, Debug)]
enum Child {
    None,
    Cap(usize),
    Proc(Vec<usize>),
}

#[derive(Clone, Debug)]
enum Node {
    Cap(Vec<(usize, Child)>),
    Species {
        label: usize,
        children: Vec<usize>,
        caps: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum ChildSig {
    None,
    Cap(u32),
    Proc(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Sig {
    Cap(u32, Vec<(u32, ChildSig)>),
    Species(u32, u32, Vec<u32>, u32),
}

/// Canonical description of a process up to structural congruence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    labels: Vec<Label>,
    classes: Vec<Sig>,
    roots: Vec<u32>,
}

#[derive(Default)]
pub(crate) struct Graph {
    nodes: Vec<Node>,
    labels: Vec<Label>,
    label_ids: HashMap<Label, usize>,
    env: Vec<(Ident, usize)>,
}

impl Graph {
    fn label(&mut self, l: Label) -> usize {
        if let Some(&i) = self.label_ids.get(&l) {
            return i;
        }
        self.labels.push(l.clone());
        self.label_ids.insert(l, self.labels.len() - 1);
        self.labels.len() - 1
    }

    pub(crate) fn cap(&mut self, c: &Capability) -> usize {
        match c {
            Capability::Var(x) => self
                .env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|&(_, n)| n)
                .unwrap_or_else(|| panic!("free capability variable `{x}`")),
            Capability::Rec(x, body) => {
                let n = self.nodes.len();
                self.nodes.push(Node::Cap(Vec::new()));
                self.env.push((x.clone(), n));
                let m = self.cap(body);
                self.env.pop();
                self.nodes[n] = self.nodes[m].clone();
                n
            }
            Capability::Sum(gs) => {
                let summands = gs
                    .iter()
                    .map(|g| {
                        let (p, i) = (g.promoters.clone(), g.inhibitors.clone());
                        let (label, child) = match &g.op {
                            CapOp::NonCovBind { partner, cont } => (
                                Label::Bind(partner.clone(), p, i),
                                Child::Cap(self.cap(cont)),
                            ),
                            CapOp::CovBind { partner, cont } => (
                                Label::CBind(partner.clone(), p, i),
                                Child::Cap(self.cap(cont)),
                            ),
                            CapOp::CovMod { modtype, cont } => (
                                Label::Mod(modtype.clone(), p, i),
                                Child::Cap(self.cap(cont)),
                            ),
                            CapOp::Cleave { target } => {
                                (Label::Cleave(target.clone(), p, i), Child::None)
                            }
                            CapOp::Convert(q) => (Label::Conv(p, i), Child::Proc(self.process(q))),
                            CapOp::Produce(q) => (Label::Prod(p, i), Child::Proc(self.process(q))),
                        };
                        (self.label(label), child)
                    })
                    .collect();
                self.nodes.push(Node::Cap(summands));
                self.nodes.len() - 1
            }
        }
    }

    pub(crate) fn species(&mut self, s: &Species) -> usize {
        let (label, children) = match &s.body {
            Inner::Elementary(a) => (Label::Elementary(a.clone()), vec![]),
            Inner::NonCovalent(a, b) => {
                (Label::NonCovalent, vec![self.species(a), self.species(b)])
            }
            Inner::CovalentMod(q, a) => (Label::CovalentMod(q.clone()), vec![self.species(a)]),
            Inner::CovalentBond(a, b) => {
                (Label::CovalentBond, vec![self.species(a), self.species(b)])
            }
        };
        let label = self.label(label);
        let caps = self.cap(&s.caps);
        self.nodes.push(Node::Species {
            label,
            children,
            caps,
        });
        self.nodes.len() - 1
    }

    pub(crate) fn process(&mut self, p: &Process) -> Vec<usize> {
        p.molecules().iter().map(|s| self.species(s)).collect()
    }

    /// Stable class of every node; classes are ranks of final signatures.
    pub(crate) fn refine(&self) -> Refined {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut label_rank = vec![0u32; self.labels.len()];
        for (r, &l) in order.iter().enumerate() {
            label_rank[l] = r as u32;
        }

        let mut ids: Vec<u32> = self
            .nodes
            .iter()
            .map(|n| matches!(n, Node::Species { .. }) as u32)
            .collect();
        let mut count = ids.iter().copied().max().map_or(0, |m| m as usize + 1);
        loop {
            let sigs: Vec<Sig> = (0..self.nodes.len())
                .map(|k| self.sig(k, &ids, &label_rank))
                .collect();
            let mut distinct: Vec<&Sig> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let rank: HashMap<&Sig, u32> = distinct
                .iter()
                .enumerate()
                .map(|(r, s)| (*s, r as u32))
                .collect();
            let next: Vec<u32> = sigs.iter().map(|s| rank[s]).collect();
            let stable = distinct.len() == count;
            count = distinct.len();
            ids = next;
            if stable {
                break;
            }
        }
        let mut classes: BTreeMap<u32, Sig> = BTreeMap::new();
        for k in 0..self.nodes.len() {
            classes
                .entry(ids[k])
                .or_insert_with(|| self.sig(k, &ids, &label_rank));
        }
        let mut labels = self.labels.clone();
        labels.sort();
        Refined {
            ids,
            labels,
            classes: classes.into_values().collect(),
        }
    }

    fn sig(&self, k: usize, ids: &[u32], label_rank: &[u32]) -> Sig {
        match &self.nodes[k] {
            Node::Cap(summands) => {
                let mut v: Vec<(u32, ChildSig)> = summands
                    .iter()
                    .map(|(l, c)| {
                        let c = match c {
                            Child::None => ChildSig::None,
                            Child::Cap(n) => ChildSig::Cap(ids[*n]),
                            Child::Proc(ms) => ChildSig::Proc(multiset(ms, ids)),
                        };
                        (label_rank[*l], c)
                    })
                    .collect();
                v.sort();
                v.dedup();
                Sig::Cap(ids[k], v)
            }
            Node::Species {
                label,
                children,
                caps,
            } => Sig::Species(
                ids[k],
                label_rank[*label],
                multiset(children, ids),
                ids[*caps],
            ),
        }
    }
}

fn multiset(ms: &[usize], ids: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = ms.iter().map(|&m| ids[m]).collect();
    v.sort_unstable();
    v
}

pub(crate) struct Refined {
    pub(crate) ids: Vec<u32>,
    labels: Vec<Label>,
    classes: Vec<Sig>,
}

impl Refined {
    pub(crate) fn multiset(&self, ms: &[usize]) -> Vec<u32> {
        multiset(ms, &self.ids)
    }
}

pub fn fingerprint(p: &Process) -> Fingerprint {
    let mut g = Graph::default();
    let roots = g.process(p);
    let r = g.refine();
    let roots = r.multiset(&roots);
    Fingerprint {
        labels: r.labels,
        classes: r.classes,
        roots,
    }
}

pub fn capability_fingerprint(c: &Capability) -> Fingerprint {
    let mut g = Graph::default();
    let root = g.cap(c);
    let r = g.refine();
    Fingerprint {
        roots: vec![r.ids[root]],
        labels: r.labels,
        classes: r.classes,
    }
}
