//! DOT and JSON export of explored state spaces.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::semantics::Lts;
use crate::syntax::{print_action, print_process};

/// `{"states":[...], "edges":[{"from":i,"action":s,"to":j}], "initial":0, "truncated":bool}`
pub fn to_json(lts: &Lts) -> Value {
    json!({
        "states": lts.states.iter().map(print_process).collect::<Vec<_>>(),
        "edges": lts
            .edges
            .iter()
            .map(|e| json!({"from": e.from, "action": print_action(&e.action), "to": e.to}))
            .collect::<Vec<_>>(),
        "initial": lts.initial,
        "truncated": lts.truncated,
    })
}

pub fn to_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  node [shape=box];\n");
    for (i, s) in lts.states.iter().enumerate() {
        let style = if i == lts.initial { ", penwidth=2" } else { "" };
        let _ = writeln!(
            out,
            "  s{i} [label=\"{}\"{style}];",
            escape(&print_process(s))
        );
    }
    for e in &lts.edges {
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{}\"];",
            e.from,
            e.to,
            escape(&print_action(&e.action))
        );
    }
    out.push_str("}\n");
    out
}

/// Human-readable listing; no stability guarantee.
pub fn to_text(lts: &Lts) -> String {
    let mut out = String::new();
    for (i, s) in lts.states.iter().enumerate() {
        let _ = writeln!(out, "s{i}: {}", print_process(s));
    }
    for e in &lts.edges {
        let _ = writeln!(
            out,
            "s{} --{}--> s{}",
            e.from,
            print_action(&e.action),
            e.to
        );
    }
    if lts.truncated {
        out.push_str("(truncated)\n");
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
