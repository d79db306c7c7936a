//! DOT and JSON renderings of an SSBN.
//!
//! JSON schema (`format` = `"mebn-ssbn"`, `version` = 1):
//!
//! ```text
//! {
//!   "format": "mebn-ssbn",
//!   "version": 1,
//!   "query": "<canonical name>",
//!   "nodes": [                      // topological order
//!     {
//!       "name": "SpreadSpeed(spill_1)",
//!       "functor": "SpreadSpeed",
//!       "args": ["spill_1"],
//!       "states": ["Fast", "Slow"],
//!       "parents": ["Weather(region_1)", "Currents(region_1)"],
//!       "cpt": [[0.6, 0.4], ...],   // one row per parent configuration, last parent fastest
//!       "evidence": "Fast" | null
//!     }
//!   ],
//!   "edges": [{"from": "...", "to": "..."}],
//!   "evidence": {"<name>": "<state>"}   // sorted by name
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::Ssbn;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsbnDocument {
    pub format: String,
    pub version: u32,
    pub query: String,
    pub nodes: Vec<NodeDocument>,
    pub edges: Vec<EdgeDocument>,
    pub evidence: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub name: String,
    pub functor: String,
    pub args: Vec<String>,
    pub states: Vec<String>,
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
    pub evidence: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub from: String,
    pub to: String,
}

impl SsbnDocument {
    pub fn from_ssbn(ssbn: &Ssbn) -> Self {
        let name = |i: usize| ssbn.node(i).instance.to_string();
        let nodes = ssbn
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| NodeDocument {
                name: name(i),
                functor: n.instance.functor.clone(),
                args: n.instance.args.clone(),
                states: n.states.clone(),
                parents: n.parents.iter().map(|&p| name(p)).collect(),
                cpt: n.cpt.rows().map(<[f64]>::to_vec).collect(),
                evidence: ssbn.evidence_state(i).map(str::to_string),
            })
            .collect();
        let edges = ssbn
            .edges()
            .into_iter()
            .map(|(p, c)| EdgeDocument { from: name(p), to: name(c) })
            .collect();
        let evidence = ssbn
            .evidence()
            .keys()
            .map(|&i| (name(i), ssbn.evidence_state(i).unwrap().to_string()))
            .collect();
        SsbnDocument {
            format: "mebn-ssbn".into(),
            version: 1,
            query: name(ssbn.query()),
            nodes,
            edges,
            evidence,
        }
    }
}

pub fn to_json(ssbn: &Ssbn) -> String {
    let mut s = serde_json::to_string_pretty(&SsbnDocument::from_ssbn(ssbn)).expect("document serializes");
    s.push('\n');
    s
}

/// One node statement per node, then one edge statement per edge. Evidence nodes are filled
/// and labeled with their observed state; the query node is double-outlined.
pub fn to_dot(ssbn: &Ssbn) -> String {
    let mut out = String::from("digraph ssbn {\n");
    for (i, n) in ssbn.nodes().iter().enumerate() {
        let name = n.instance.to_string();
        let mut attrs = Vec::new();
        match ssbn.evidence_state(i) {
            Some(state) => {
                attrs.push(format!("label=\"{}\\n= {}\"", name, state));
                attrs.push("style=filled".to_string());
                attrs.push("fillcolor=lightgrey".to_string());
            }
            None => attrs.push(format!("label=\"{}\"", name)),
        }
        if i == ssbn.query() {
            attrs.push("peripheries=2".to_string());
        }
        writeln!(out, "  \"{}\" [{}];", name, attrs.join(", ")).unwrap();
    }
    for (p, c) in ssbn.edges() {
        writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            ssbn.node(p).instance,
            ssbn.node(c).instance
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
