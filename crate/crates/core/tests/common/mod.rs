#![allow(dead_code)]

pub mod gen;
pub mod oracle;
pub mod shuffle;

use mimc::terms::Name;
use mimc::{parse_process, Process};

pub fn p(src: &str) -> Process {
    parse_process(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn n(src: &str) -> Name {
    mimc::parse_name(src).unwrap()
}

pub fn model(file: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/");
    std::fs::read_to_string(format!("{path}{file}")).unwrap()
}
