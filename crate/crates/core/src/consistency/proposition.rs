//! Randomised check that weak syntactic consistency entails semantic
//! consistency on bounded state spaces.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

use super::{check_semantic, check_weak, ConsistencyVerdict};
use crate::diagram::synth::{random_diagram, SynthLimits};
use crate::diagram::{import, DiagramError, DiagramSpec};
use crate::semantics::Bounds;
use crate::syntax::print_process;
use crate::terms::Process;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("generated diagram failed to compile: {0}")]
    Diagram(#[from] DiagramError),
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trial: usize,
    pub diagram: DiagramSpec,
    pub process: Process,
    pub weak: ConsistencyVerdict,
    pub semantic: ConsistencyVerdict,
}

#[derive(Clone, Debug, Default)]
pub struct Prop1Report {
    pub trials: usize,
    /// Trials whose semantic check covered the whole state space.
    pub complete: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl Prop1Report {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "trials": self.trials,
            "complete": self.complete,
            "passed": self.passed(),
            "counterexamples": self.counterexamples.iter().map(|c| serde_json::json!({
                "trial": c.trial,
                "process": print_process(&c.process),
                "weak": c.weak.to_json(),
                "semantic": c.semantic.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs one trial per seed derived from `seed`, each on a fresh random diagram.
pub fn proposition1_harness(
    seed: u64,
    trials: usize,
    depth: usize,
) -> Result<Prop1Report, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(
                seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    .wrapping_add(i as u64),
            );
            let d = random_diagram(&mut rng, SynthLimits::default());
            run_trial(i, d, depth)
        })
        .collect::<Vec<_>>();
    let mut report = Prop1Report {
        trials,
        ..Default::default()
    };
    for o in outcomes {
        let (complete, cex) = o?;
        report.complete += usize::from(complete);
        report.counterexamples.extend(cex);
    }
    Ok(report)
}

/// Checks one diagram; returns whether exploration finished and any counterexample.
pub fn run_trial(
    trial: usize,
    diagram: DiagramSpec,
    depth: usize,
) -> Result<(bool, Option<Counterexample>), HarnessError> {
    let (_, process) = import(&diagram)?;
    let weak = check_weak(&process);
    let semantic = if weak.is_inconsistent() {
        ConsistencyVerdict::ConsistentUpToDepth(0)
    } else {
        check_semantic(&process, Bounds::new(depth, Bounds::default().max_states))
    };
    let complete = semantic == ConsistencyVerdict::Consistent;
    let failed = weak.is_inconsistent() || semantic.is_inconsistent();
    let cex = failed.then_some(Counterexample {
        trial,
        diagram,
        process,
        weak,
        semantic,
    });
    Ok((complete, cex))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_rejected() {
        assert!(matches!(
            proposition1_harness(0, 0, 4),
            Err(HarnessError::NoTrials)
        ));
    }

    #[test]
    fn small_run_passes() {
        let r = proposition1_harness(1, 20, 3).unwrap();
        assert_eq!(r.trials, 20);
        assert!(r.passed(), "{}", r.to_json());
    }
}
