use std::collections::BTreeMap;
use std::fmt;

use crate::model::{ContextNode, FindingSet, MFrag, MTheory, Range, RvInstance};

/// Assignment of ordinary variables to entity instances.
pub type Binding = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextValue {
    True,
    False,
    Absurd,
}

/// A context node that no finding resolves; it is treated as False.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ContextWarning {
    pub mfrag: String,
    pub context: String,
    pub variable: RvInstance,
}

impl fmt::Display for ContextWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unresolved context '{}' in MFrag {}: no finding for {}; treated as False",
            self.context, self.mfrag, self.variable
        )
    }
}

fn resolve<'a>(binding: &'a Binding, term: &'a str) -> &'a str {
    binding.get(term).map_or(term, String::as_str)
}

/// Evaluates a context node. Returns the value and, when no finding resolves it, the grounded
/// variable that was missing.
pub(crate) fn evaluate(
    theory: &MTheory,
    spec: &ContextNode,
    binding: &Binding,
    findings: &FindingSet,
) -> (ContextValue, Option<RvInstance>) {
    let pool = findings.pool();
    match spec {
        ContextNode::IsA { var, ty } => {
            let instance = resolve(binding, var);
            let holds = pool.type_of(instance) == Some(ty.as_str());
            (if holds { ContextValue::True } else { ContextValue::False }, None)
        }
        ContextNode::Equals { node, value } => {
            let Some(sig) = theory.signature(&node.functor) else {
                return (ContextValue::Absurd, None);
            };
            if sig.arg_types.len() != node.args.len() {
                return (ContextValue::Absurd, None);
            }
            let mut args = Vec::with_capacity(node.args.len());
            for (arg, expected) in node.args.iter().zip(&sig.arg_types) {
                let instance = resolve(binding, arg);
                if pool.type_of(instance) != Some(expected.as_str()) {
                    return (ContextValue::Absurd, None);
                }
                args.push(instance.to_string());
            }
            let value = resolve(binding, value);
            let well_typed = match &sig.range {
                Range::Entity(ty) => pool.type_of(value) == Some(ty.as_str()),
                Range::States(_) => theory
                    .states_of(&node.functor)
                    .is_some_and(|s| s.index_of(value).is_some()),
            };
            if !well_typed {
                return (ContextValue::Absurd, None);
            }
            let variable = RvInstance::new(node.functor.clone(), args);
            match findings.value_of(&variable) {
                Some(observed) if observed == value => (ContextValue::True, None),
                Some(_) => (ContextValue::False, None),
                None => (ContextValue::False, Some(variable)),
            }
        }
    }
}

/// Three-valued evaluation of a context node under a complete binding.
///
/// `isA` nodes are True or False. An equality `F(x) = y` is Absurd when an argument or the value
/// has the wrong type for `F`, True or False when a finding records `F(x)`, and False when no
/// finding does.
pub fn evaluate_context_node(
    theory: &MTheory,
    spec: &ContextNode,
    binding: &Binding,
    findings: &FindingSet,
) -> ContextValue {
    evaluate(theory, spec, binding, findings).0
}

/// All completions of `fixed` over the entity pool under which every context node is True.
///
/// Variables are enumerated in declaration order, instances in name order.
pub fn enumerate_bindings(theory: &MTheory, mfrag: &MFrag, fixed: &Binding, findings: &FindingSet) -> Vec<Binding> {
    enumerate_bindings_traced(theory, mfrag, fixed, findings, &mut Vec::new())
}

pub(crate) fn enumerate_bindings_traced(
    theory: &MTheory,
    mfrag: &MFrag,
    fixed: &Binding,
    findings: &FindingSet,
    warnings: &mut Vec<ContextWarning>,
) -> Vec<Binding> {
    let pool = findings.pool();
    for (var, instance) in fixed {
        match mfrag.ovar(var) {
            Some(ov) if pool.type_of(instance) == Some(ov.ty.as_str()) => {}
            _ => return Vec::new(),
        }
    }

    // Each context node is checked at the depth where its last ordinary variable is bound.
    let depth_of = |var: &str| mfrag.ovars.iter().position(|o| o.name == var);
    let mut checks: Vec<Vec<&ContextNode>> = vec![Vec::new(); mfrag.ovars.len() + 1];
    for ctx in &mfrag.context {
        let depth = ctx
            .mentioned_terms()
            .into_iter()
            .filter_map(depth_of)
            .map(|d| d + 1)
            .max()
            .unwrap_or(0);
        checks[depth].push(ctx);
    }

    let mut out = Vec::new();
    let mut current = fixed.clone();
    let ctx = Search {
        theory,
        mfrag,
        findings,
        checks: &checks,
    };
    if ctx.passes(0, &current, warnings) {
        ctx.descend(0, &mut current, &mut out, warnings);
    }
    out
}

struct Search<'a> {
    theory: &'a MTheory,
    mfrag: &'a MFrag,
    findings: &'a FindingSet,
    checks: &'a [Vec<&'a ContextNode>],
}

impl Search<'_> {
    fn passes(&self, depth: usize, binding: &Binding, warnings: &mut Vec<ContextWarning>) -> bool {
        for spec in &self.checks[depth] {
            let (value, unresolved) = evaluate(self.theory, spec, binding, self.findings);
            if let Some(variable) = unresolved {
                let w = ContextWarning {
                    mfrag: self.mfrag.name.clone(),
                    context: spec.to_string(),
                    variable,
                };
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            if value != ContextValue::True {
                return false;
            }
        }
        true
    }

    fn descend(&self, i: usize, binding: &mut Binding, out: &mut Vec<Binding>, warnings: &mut Vec<ContextWarning>) {
        let Some(ov) = self.mfrag.ovars.get(i) else {
            out.push(binding.clone());
            return;
        };
        if binding.contains_key(&ov.name) {
            if self.passes(i + 1, binding, warnings) {
                self.descend(i + 1, binding, out, warnings);
            }
            return;
        }
        for instance in self.findings.pool().instances_of(&ov.ty) {
            binding.insert(ov.name.clone(), instance.to_string());
            if self.passes(i + 1, binding, warnings) {
                self.descend(i + 1, binding, out, warnings);
            }
        }
        binding.remove(&ov.name);
    }
}
