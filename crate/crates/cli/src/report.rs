//! The structured report every command prints: flat `key: value` lines with
//! dotted keys, one document per run. Field names are part of the CLI
//! contract (golden tests parse them); `timing.*` fields are the only ones
//! allowed to vary between runs on identical inputs.

use std::fmt::Display;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { lines: Vec::new() };
        r.push("schema", SCHEMA_VERSION);
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn push_graph(&mut self, file: &str, g: &evenodd::Graph) {
        self.push("graph.file", file);
        self.push("graph.vertices", g.n());
        self.push("graph.edges", g.edge_count());
    }

    pub fn finish(mut self, elapsed_ms: u128) {
        self.push("timing.elapsed_ms", elapsed_ms);
        for (k, v) in &self.lines {
            println!("{k}: {v}");
        }
    }
}
