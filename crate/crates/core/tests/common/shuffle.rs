//! Random rewrites by the structural congruence laws.

use rand::seq::SliceRandom;
use rand::Rng;

use mimc::terms::{substitute, BasicCap, CapOp, Capability, Inner, Process, Species};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shuffle {
    ParOrder,
    SumOrder,
    ChildSwap,
    SumDup,
    Unfold,
    Alpha,
}

pub const ALL: [Shuffle; 6] = [
    Shuffle::ParOrder,
    Shuffle::SumOrder,
    Shuffle::ChildSwap,
    Shuffle::SumDup,
    Shuffle::Unfold,
    Shuffle::Alpha,
];

pub fn apply<R: Rng>(rng: &mut R, p: &Process, how: Shuffle) -> Process {
    let mut ms: Vec<Species> = p
        .molecules()
        .iter()
        .map(|s| {
            Rewriter {
                rng: &mut *rng,
                how,
                fresh: 0,
            }
            .species(s)
        })
        .collect();
    if how == Shuffle::ParOrder {
        ms.shuffle(rng);
        if rng.gen_bool(0.5) {
            return Process::new(ms).par(Process::empty());
        }
    }
    Process::new(ms)
}

struct Rewriter<'r, R: Rng> {
    rng: &'r mut R,
    how: Shuffle,
    fresh: usize,
}

impl<R: Rng> Rewriter<'_, R> {
    fn species(&mut self, s: &Species) -> Species {
        let body = match &s.body {
            Inner::Elementary(a) => Inner::Elementary(a.clone()),
            Inner::NonCovalent(a, b) => {
                let (a, b) = self.pair(a, b);
                Inner::NonCovalent(Box::new(a), Box::new(b))
            }
            Inner::CovalentMod(q, a) => Inner::CovalentMod(q.clone(), Box::new(self.species(a))),
            Inner::CovalentBond(a, b) => {
                let (a, b) = self.pair(a, b);
                Inner::CovalentBond(Box::new(a), Box::new(b))
            }
        };
        Species::new(self.cap(&s.caps), body)
    }

    fn pair(&mut self, a: &Species, b: &Species) -> (Species, Species) {
        let (a, b) = (self.species(a), self.species(b));
        if self.how == Shuffle::ChildSwap && self.rng.gen_bool(0.5) {
            (b, a)
        } else {
            (a, b)
        }
    }

    fn cap(&mut self, c: &Capability) -> Capability {
        match c {
            Capability::Var(_) => c.clone(),
            Capability::Rec(x, body) => {
                if self.how == Shuffle::Unfold && self.rng.gen_bool(0.5) {
                    return c.unfold_once();
                }
                let body = self.cap(body);
                if self.how == Shuffle::Alpha && self.rng.gen_bool(0.7) {
                    self.fresh += 1;
                    let y = format!("r{}", self.fresh);
                    let renamed = substitute(&body, x, &Capability::var(y.clone()));
                    return Capability::rec(y, renamed);
                }
                Capability::rec(x.clone(), body)
            }
            Capability::Sum(gs) => {
                let mut out: Vec<BasicCap> = gs.iter().map(|g| self.basic(g)).collect();
                match self.how {
                    Shuffle::SumOrder => out.shuffle(self.rng),
                    Shuffle::SumDup if !out.is_empty() => {
                        let g = out.choose(self.rng).unwrap().clone();
                        let at = self.rng.gen_range(0..=out.len());
                        out.insert(at, g);
                    }
                    _ => {}
                }
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
        BasicCap::with_contingencies(op, g.promoters.clone(), g.inhibitors.clone())
    }

    fn process(&mut self, p: &Process) -> Process {
        let mut ms: Vec<Species> = p.molecules().iter().map(|s| self.species(s)).collect();
        if self.how == Shuffle::ParOrder {
            ms.shuffle(self.rng);
        }
        Process::new(ms)
    }
}
