use std::collections::{BTreeMap, HashSet};

use super::context::{enumerate_bindings_traced, Binding, ContextWarning};
use super::ssbn::{prune_barren, NodeSpec, Ssbn};
use super::GroundingError;
use crate::lpd::{synthesize_cpt, Cpt, GroundParent};
use crate::model::{FindingSet, LocalDistribution, MTheory, Query, Range, RvInstance};

pub const DEFAULT_NODE_CAP: usize = 10_000;

#[derive(Debug, Clone)]
pub struct GroundingOptions {
    /// Grounding fails once the network would exceed this many nodes.
    pub node_cap: usize,
    /// Remove barren nodes after construction.
    pub prune: bool,
}

impl Default for GroundingOptions {
    fn default() -> Self {
        GroundingOptions {
            node_cap: DEFAULT_NODE_CAP,
            prune: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grounding {
    pub ssbn: Ssbn,
    pub warnings: Vec<ContextWarning>,
}

/// Grounds `theory` for `query` with default options.
pub fn build_ssbn(theory: &MTheory, findings: &FindingSet, query: &Query) -> Result<Ssbn, GroundingError> {
    ground(theory, findings, query, &GroundingOptions::default()).map(|g| g.ssbn)
}

/// Backward-chaining construction of the situation-specific network.
///
/// Starting from the query and every evidenced chance variable, each instance is matched to
/// its home MFrag, the remaining ordinary variables are enumerated under the context
/// constraints, and the resulting parent instances are grounded in turn. CPTs are synthesized
/// once a node's parents are known.
pub fn ground(
    theory: &MTheory,
    findings: &FindingSet,
    query: &Query,
    options: &GroundingOptions,
) -> Result<Grounding, GroundingError> {
    let target = query.target();
    check_query(theory, findings, target)?;

    let mut grounder = Grounder {
        theory,
        findings,
        warnings: Vec::new(),
    };

    let evidence: BTreeMap<RvInstance, String> = findings
        .values()
        .filter(|(v, _)| matches!(theory.signature(&v.functor).map(|s| &s.range), Some(Range::States(_))))
        .map(|(v, s)| (v.clone(), s.to_string()))
        .collect();

    let mut roots = vec![target.clone()];
    roots.extend(evidence.keys().cloned());

    struct Frame {
        instance: RvInstance,
        parents: Vec<RvInstance>,
        next: usize,
    }

    let mut done: BTreeMap<RvInstance, (Vec<RvInstance>, Cpt)> = BTreeMap::new();
    let mut on_stack: HashSet<RvInstance> = HashSet::new();
    let mut stack: Vec<Frame> = Vec::new();

    for root in roots {
        if done.contains_key(&root) {
            continue;
        }
        if done.len() + 1 > options.node_cap {
            return Err(GroundingError::Explosion { cap: options.node_cap });
        }
        let parents = grounder.parents_of(&root)?;
        on_stack.insert(root.clone());
        stack.push(Frame {
            instance: root,
            parents,
            next: 0,
        });

        while let Some(top) = stack.last_mut() {
            if top.next < top.parents.len() {
                let p = top.parents[top.next].clone();
                top.next += 1;
                if done.contains_key(&p) {
                    continue;
                }
                if on_stack.contains(&p) {
                    let start = stack.iter().position(|f| f.instance == p).unwrap_or(0);
                    let mut cycle: Vec<String> = stack[start..].iter().map(|f| f.instance.to_string()).collect();
                    cycle.push(p.to_string());
                    return Err(GroundingError::Cycle(cycle));
                }
                if done.len() + stack.len() + 1 > options.node_cap {
                    return Err(GroundingError::Explosion { cap: options.node_cap });
                }
                let parents = grounder.parents_of(&p)?;
                on_stack.insert(p.clone());
                stack.push(Frame {
                    instance: p,
                    parents,
                    next: 0,
                });
            } else {
                let frame = stack.pop().expect("non-empty");
                on_stack.remove(&frame.instance);
                let cpt = grounder.cpt_of(&frame.instance, &frame.parents)?;
                done.insert(frame.instance, (frame.parents, cpt));
            }
        }
    }

    let specs = done
        .into_iter()
        .map(|(instance, (parents, cpt))| {
            let states = theory
                .states_of(&instance.functor)
                .expect("grounded nodes are chance variables")
                .states
                .clone();
            NodeSpec {
                instance,
                states,
                parents,
                cpt,
            }
        })
        .collect();
    let ssbn = Ssbn::new(specs, evidence, target.clone())?;
    let ssbn = if options.prune { prune_barren(&ssbn) } else { ssbn };
    Ok(Grounding {
        ssbn,
        warnings: grounder.warnings,
    })
}

fn check_query(theory: &MTheory, findings: &FindingSet, target: &RvInstance) -> Result<(), GroundingError> {
    let unresolved = |reason: String| GroundingError::UnresolvedQuery {
        query: target.to_string(),
        reason,
    };
    let sig = theory
        .signature(&target.functor)
        .ok_or_else(|| unresolved(format!("unknown functor '{}'", target.functor)))?;
    if !matches!(sig.range, Range::States(_)) {
        return Err(unresolved(format!("'{}' is a finding-resolved relation", target.functor)));
    }
    if sig.arg_types.len() != target.args.len() {
        return Err(unresolved(format!(
            "'{}' takes {} argument(s)",
            target.functor,
            sig.arg_types.len()
        )));
    }
    for (arg, ty) in target.args.iter().zip(&sig.arg_types) {
        match findings.pool().type_of(arg) {
            None => return Err(unresolved(format!("unknown entity instance '{}'", arg))),
            Some(t) if t != ty => return Err(unresolved(format!("'{}' is a {}, expected {}", arg, t, ty))),
            Some(_) => {}
        }
    }
    Ok(())
}

struct Grounder<'a> {
    theory: &'a MTheory,
    findings: &'a FindingSet,
    warnings: Vec<ContextWarning>,
}

impl Grounder<'_> {
    /// Grounded parents in CPT order: declared parent major, binding order minor.
    fn parents_of(&mut self, instance: &RvInstance) -> Result<Vec<RvInstance>, GroundingError> {
        let (mfrag, resident) = self
            .theory
            .resident(&instance.functor)
            .map_err(|_| GroundingError::NoHome(instance.functor.clone()))?;
        if matches!(resident.distribution, LocalDistribution::Relation) {
            return Err(GroundingError::NotAChanceNode(instance.to_string()));
        }
        let declared = resident.parents();
        if declared.is_empty() {
            return Ok(Vec::new());
        }

        let mut fixed = Binding::new();
        for (var, value) in resident.node.args.iter().zip(&instance.args) {
            if let Some(prev) = fixed.insert(var.clone(), value.clone()) {
                if &prev != value {
                    return Err(GroundingError::ContextUnsatisfied {
                        instance: instance.to_string(),
                        mfrag: mfrag.name.clone(),
                    });
                }
            }
        }
        let bindings = enumerate_bindings_traced(self.theory, mfrag, &fixed, self.findings, &mut self.warnings);
        if bindings.is_empty() && matches!(resident.distribution, LocalDistribution::Table(_)) {
            return Err(GroundingError::ContextUnsatisfied {
                instance: instance.to_string(),
                mfrag: mfrag.name.clone(),
            });
        }

        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for parent in declared {
            for b in &bindings {
                let args = parent.args.iter().map(|a| b.get(a).cloned().unwrap_or_else(|| a.clone()));
                let p = RvInstance::new(parent.functor.clone(), args);
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    fn cpt_of(&self, instance: &RvInstance, parents: &[RvInstance]) -> Result<Cpt, GroundingError> {
        let (_, resident) = self
            .theory
            .resident(&instance.functor)
            .map_err(|_| GroundingError::NoHome(instance.functor.clone()))?;
        let mut ground = Vec::with_capacity(parents.len());
        for p in parents {
            let space = self
                .theory
                .states_of(&p.functor)
                .ok_or_else(|| GroundingError::NotAChanceNode(p.to_string()))?;
            ground.push(GroundParent {
                instance: p,
                states: &space.states,
            });
        }
        let states = self
            .theory
            .states_of(&instance.functor)
            .ok_or_else(|| GroundingError::NotAChanceNode(instance.to_string()))?;
        synthesize_cpt(resident, &ground, states.states.len()).map_err(|source| GroundingError::Lpd {
            instance: instance.to_string(),
            source,
        })
    }
}
