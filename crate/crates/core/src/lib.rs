//! An executable MIM calculus.
//!
//! Molecules carry their interaction capabilities (`bind`, `cbind`, `mod`,
//! `cleave`, `conv`, `prod`), optionally gated by promoter and inhibitor
//! species. This crate parses and prints terms, decides structural
//! congruence, computes labelled reductions, explores bounded state spaces
//! and checks the semantic, weak syntactic and strong syntactic consistency
//! of terms. Explicit-interpretation interaction diagrams can be compiled to
//! terms with [`diagram::compile_table`].

pub mod congruence;
pub mod consistency;
pub mod diagram;
pub mod lts;
pub mod semantics;
pub mod syntax;
pub mod terms;

pub use congruence::{canonicalize, caps_equal, process_equal};
pub use consistency::{check_semantic, check_strong, check_weak, ConsistencyVerdict};
pub use semantics::{enabled_transitions, explore, Action, Bounds, Lts, Transition};
pub use syntax::{parse_name, parse_process, print_action, print_process, ParseError};
pub use terms::{BasicCap, CapOp, Capability, Inner, Name, NameSet, Process, Species};
