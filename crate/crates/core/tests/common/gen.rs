//! Seeded generators of closed, well-formed terms.

use rand::seq::SliceRandom;
use rand::Rng;

use mimc::terms::{BasicCap, CapOp, Capability, Inner, Name, NameSet, Process, Species};

use super::n;

pub fn pool() -> Vec<Name> {
    ["A", "B", "C", "A:B", "[A B]", "['p A]", "['p B]"]
        .iter()
        .map(|s| n(s))
        .collect()
}

fn cleavable() -> Vec<Name> {
    ["[A B]", "['p A]", "['p B]"].iter().map(|s| n(s)).collect()
}

pub struct TermGen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub max_depth: usize,
    vars: Vec<String>,
}

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R, max_depth: usize) -> Self {
        TermGen {
            rng,
            max_depth,
            vars: Vec::new(),
        }
    }

    pub fn process(&mut self, max_molecules: usize) -> Process {
        let k = self.rng.gen_range(0..=max_molecules);
        let mut pool = pool();
        pool.truncate(if self.rng.gen_bool(0.7) {
            3
        } else {
            pool.len()
        });
        Process::new(
            (0..k)
                .map(|_| {
                    let name = pool.choose(self.rng).unwrap().clone();
                    self.species(&name, self.max_depth)
                })
                .collect(),
        )
    }

    pub fn species(&mut self, name: &Name, depth: usize) -> Species {
        let body = match name.inner() {
            Inner::Elementary(a) => Inner::Elementary(a.clone()),
            Inner::NonCovalent(a, b) => Inner::NonCovalent(
                Box::new(self.species(&a.name(), depth.saturating_sub(1))),
                Box::new(self.species(&b.name(), depth.saturating_sub(1))),
            ),
            Inner::CovalentMod(q, a) => Inner::CovalentMod(
                q.clone(),
                Box::new(self.species(&a.name(), depth.saturating_sub(1))),
            ),
            Inner::CovalentBond(a, b) => Inner::CovalentBond(
                Box::new(self.species(&a.name(), depth.saturating_sub(1))),
                Box::new(self.species(&b.name(), depth.saturating_sub(1))),
            ),
        };
        let caps = self.cap(depth);
        Species::new(caps, body)
    }

    /// Bodies of `rec` are always sums, so every recursion is contractive.
    fn cap(&mut self, depth: usize) -> Capability {
        if !self.vars.is_empty() && self.rng.gen_bool(0.2) {
            return Capability::var(self.vars.choose(self.rng).unwrap().clone());
        }
        if depth > 0 && self.rng.gen_bool(0.2) {
            let x = ["x", "y", "z"].choose(self.rng).unwrap().to_string();
            self.vars.push(x.clone());
            let body = self.sum(depth);
            self.vars.pop();
            return Capability::rec(x, body);
        }
        self.sum(depth)
    }

    fn sum(&mut self, depth: usize) -> Capability {
        let k = self.rng.gen_range(0..=if depth == 0 { 1 } else { 3 });
        Capability::Sum((0..k).map(|_| self.basic(depth)).collect())
    }

    fn basic(&mut self, depth: usize) -> BasicCap {
        let d = depth.saturating_sub(1);
        let names = pool();
        let op = match self.rng.gen_range(0..6) {
            0 => CapOp::NonCovBind {
                partner: names[..3].choose(self.rng).unwrap().clone(),
                cont: self.cap(d),
            },
            1 => CapOp::CovBind {
                partner: names[..3].choose(self.rng).unwrap().clone(),
                cont: self.cap(d),
            },
            2 => CapOp::CovMod {
                modtype: "p".into(),
                cont: self.cap(d),
            },
            3 => CapOp::Cleave {
                target: cleavable().choose(self.rng).unwrap().clone(),
            },
            4 => CapOp::Convert(self.payload(d)),
            _ => CapOp::Produce(self.payload(d)),
        };
        let promoters = self.contingency(&names);
        let inhibitors = self.contingency(&names);
        BasicCap::with_contingencies(op, promoters, inhibitors)
    }

    fn payload(&mut self, depth: usize) -> Process {
        let k = self.rng.gen_range(0..=2);
        let names = pool();
        Process::new(
            (0..k)
                .map(|_| {
                    let name = names[..3].choose(self.rng).unwrap().clone();
                    self.species(&name, depth)
                })
                .collect(),
        )
    }

    fn contingency(&mut self, names: &[Name]) -> NameSet {
        if self.rng.gen_bool(0.25) {
            NameSet::from([names.choose(self.rng).unwrap().clone()])
        } else {
            NameSet::new()
        }
    }
}

pub fn process<R: Rng>(rng: &mut R, max_molecules: usize, depth: usize) -> Process {
    TermGen::new(rng, depth).process(max_molecules)
}
