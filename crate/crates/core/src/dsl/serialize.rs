use std::fmt::Write;

use crate::model::{ContextNode, LocalDistribution, MTheory, NodeRef, Range};

fn probvec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|p| format!("{}", p)).collect();
    format!("[{}]", parts.join(", "))
}

fn node_list(nodes: &[NodeRef]) -> String {
    let parts: Vec<String> = nodes.iter().map(NodeRef::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text for a theory: declarations first, then MFrags, each MFrag listing ordinary
/// variables, context, input and resident nodes in that order. Deterministic byte for byte.
pub fn serialize_model(theory: &MTheory) -> String {
    let mut out = String::new();
    for t in &theory.entity_types {
        writeln!(out, "entity {}", t).unwrap();
    }
    if !theory.state_spaces.is_empty() {
        out.push('\n');
    }
    for s in &theory.state_spaces {
        writeln!(out, "states {} {{ {} }}", s.name, s.states.join(", ")).unwrap();
    }
    if !theory.signatures.is_empty() {
        out.push('\n');
    }
    for sig in &theory.signatures {
        let range = match &sig.range {
            Range::States(s) => s.clone(),
            Range::Entity(t) => format!("entity {}", t),
        };
        writeln!(out, "random {}({}) -> {}", sig.functor, sig.arg_types.join(", "), range).unwrap();
    }

    for m in &theory.mfrags {
        writeln!(out, "\nmfrag {} {{", m.name).unwrap();
        for v in &m.ovars {
            writeln!(out, "  ovar {} : {}", v.name, v.ty).unwrap();
        }
        for c in &m.context {
            match c {
                ContextNode::IsA { var, ty } => writeln!(out, "  context isA({}, {})", var, ty).unwrap(),
                ContextNode::Equals { node, value } => writeln!(out, "  context {} = {}", node, value).unwrap(),
            }
        }
        for i in &m.inputs {
            writeln!(out, "  input {}", i.node).unwrap();
        }
        for r in &m.residents {
            match &r.distribution {
                LocalDistribution::Relation => {
                    writeln!(out, "  resident {} {{ }}", r.node).unwrap();
                }
                LocalDistribution::Table(t) if t.parents.is_empty() => {
                    let probs = t.rows.first().map(|r| r.probs.as_slice()).unwrap_or(&[]);
                    writeln!(out, "  resident {} {{ prior {} }}", r.node, probvec(probs)).unwrap();
                }
                LocalDistribution::Table(t) => {
                    writeln!(out, "  resident {} {{", r.node).unwrap();
                    writeln!(out, "    table {} {{", node_list(&t.parents)).unwrap();
                    for row in &t.rows {
                        writeln!(out, "      ({}): {}", row.config.join(", "), probvec(&row.probs)).unwrap();
                    }
                    writeln!(out, "    }}\n  }}").unwrap();
                }
                LocalDistribution::Rules(rules) => {
                    writeln!(out, "  resident {} {{", r.node).unwrap();
                    if rules.parents.is_empty() {
                        writeln!(out, "    rules {{").unwrap();
                    } else {
                        writeln!(out, "    rules {} {{", node_list(&rules.parents)).unwrap();
                    }
                    for rule in &rules.rules {
                        writeln!(out, "      if {}: {}", rule.condition, probvec(&rule.probs)).unwrap();
                    }
                    if let Some(d) = &rules.default {
                        writeln!(out, "      else: {}", probvec(d)).unwrap();
                    }
                    writeln!(out, "    }}\n  }}").unwrap();
                }
            }
        }
        writeln!(out, "}}").unwrap();
    }
    out
}
