use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use super::{is_identifier, ContextNode, LocalDistribution, MFrag, MTheory, NodeRef, Range, StateSpace};
use crate::lpd;

/// Formats a probability sum without float noise (`1.1`, not `1.1000000000000001`).
pub(crate) fn fmt_sum(x: f64) -> String {
    let s = format!("{:.9}", x);
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    InvalidIdentifier(String),
    DuplicateEntityType(String),
    DuplicateStateSpace(String),
    TooFewStates { space: String, count: usize },
    DuplicateState { space: String, state: String },
    DuplicateSignature(String),
    NullaryFunctor(String),
    UnknownEntityType(String),
    UnknownStateSpace(String),
    UnknownFunctor(String),
    DuplicateMFrag(String),
    DuplicateOrdinaryVariable(String),
    UndeclaredOrdinaryVariable(String),
    ArityMismatch { functor: String, expected: usize, found: usize },
    ArgumentType { functor: String, position: usize, expected: String, found: String },
    UnknownContextValue { functor: String, value: String },
    DuplicateHome { functor: String, mfrags: Vec<String> },
    NoHome(String),
    OrphanInput(String),
    InputHomedLocally(String),
    ParentNotInMFrag(String),
    RelationAsParent(String),
    CyclicParents(Vec<String>),
    DistributionOnRelation(String),
    MissingDistribution(String),
    RowSum { sum: f64 },
    NegativeProbability { value: f64 },
    VectorLength { expected: usize, found: usize },
    RowArity { expected: usize, found: usize },
    UnknownRowState { parent: String, state: String },
    MissingRow(Vec<String>),
    DuplicateRow(Vec<String>),
    MissingElse,
    ConditionNonParent(String),
    UnknownConditionState { functor: String, state: String },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ViolationKind::*;
        match self {
            InvalidIdentifier(s) => write!(f, "'{}' is not a valid identifier", s),
            DuplicateEntityType(s) => write!(f, "duplicate entity type '{}'", s),
            DuplicateStateSpace(s) => write!(f, "duplicate state space '{}'", s),
            TooFewStates { space, count } => {
                write!(f, "state space '{}' has {} state(s), at least 2 required", space, count)
            }
            DuplicateState { space, state } => write!(f, "duplicate state '{}' in '{}'", state, space),
            DuplicateSignature(s) => write!(f, "duplicate random variable '{}'", s),
            NullaryFunctor(s) => write!(f, "random variable '{}' has no arguments", s),
            UnknownEntityType(s) => write!(f, "unknown entity type '{}'", s),
            UnknownStateSpace(s) => write!(f, "unknown state space '{}'", s),
            UnknownFunctor(s) => write!(f, "unknown functor '{}'", s),
            DuplicateMFrag(s) => write!(f, "duplicate MFrag '{}'", s),
            DuplicateOrdinaryVariable(s) => write!(f, "duplicate ordinary variable '{}'", s),
            UndeclaredOrdinaryVariable(s) => write!(f, "undeclared ordinary variable '{}'", s),
            ArityMismatch { functor, expected, found } => {
                write!(f, "'{}' takes {} argument(s), found {}", functor, expected, found)
            }
            ArgumentType { functor, position, expected, found } => write!(
                f,
                "argument {} of '{}' must be {}, found {}",
                position + 1,
                functor,
                expected,
                found
            ),
            UnknownContextValue { functor, value } => {
                write!(f, "'{}' is not a valid value of '{}'", value, functor)
            }
            DuplicateHome { functor, mfrags } => write!(
                f,
                "duplicate home MFrag for '{}': {}",
                functor,
                mfrags.join(", ")
            ),
            NoHome(s) => write!(f, "'{}' has no home MFrag", s),
            OrphanInput(s) => write!(f, "input '{}' is not resident in any MFrag", s),
            InputHomedLocally(s) => write!(f, "input '{}' is resident in the same MFrag", s),
            ParentNotInMFrag(s) => write!(f, "parent {} is not an input or resident node of this MFrag", s),
            RelationAsParent(s) => write!(f, "'{}' is a finding-resolved relation and cannot be a parent", s),
            CyclicParents(nodes) => write!(f, "cyclic parent structure: {}", nodes.join(" -> ")),
            DistributionOnRelation(s) => write!(f, "relation '{}' must not carry a distribution", s),
            MissingDistribution(s) => write!(f, "resident '{}' has no distribution", s),
            RowSum { sum } => write!(f, "row sums to {}", fmt_sum(*sum)),
            NegativeProbability { value } => write!(f, "negative probability {}", value),
            VectorLength { expected, found } => {
                write!(f, "vector length {} does not match {} states", found, expected)
            }
            RowArity { expected, found } => {
                write!(f, "row names {} parent state(s), expected {}", found, expected)
            }
            UnknownRowState { parent, state } => write!(f, "unknown state '{}' for parent {}", state, parent),
            MissingRow(cfg) => write!(f, "missing row ({})", cfg.join(", ")),
            DuplicateRow(cfg) => write!(f, "duplicate row ({})", cfg.join(", ")),
            MissingElse => write!(f, "missing ELSE rule"),
            ConditionNonParent(s) => write!(f, "condition references '{}', which is not a parent", s),
            UnknownConditionState { functor, state } => {
                write!(f, "unknown state '{}' for '{}' in condition", state, functor)
            }
        }
    }
}

/// A violation with a logical location such as `mfrag SpreadSpeed / resident SpreadSpeed(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub location: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }

    fn push(&mut self, location: impl Into<String>, kind: ViolationKind) {
        self.violations.push(Violation {
            location: location.into(),
            kind,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Checks structural well-formedness. Never fails; an empty report means valid.
pub fn validate_mtheory(theory: &MTheory) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_declarations(theory, &mut report);

    let mut seen_mfrags = HashSet::new();
    for mfrag in &theory.mfrags {
        if !seen_mfrags.insert(mfrag.name.as_str()) {
            report.push(format!("mfrag {}", mfrag.name), ViolationKind::DuplicateMFrag(mfrag.name.clone()));
        }
        check_mfrag(theory, mfrag, &mut report);
    }

    let mut homes: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for mfrag in &theory.mfrags {
        for r in &mfrag.residents {
            homes.entry(&r.node.functor).or_default().push(mfrag.name.clone());
        }
    }
    for (functor, mfrags) in &homes {
        if mfrags.len() > 1 {
            report.push(
                format!("random {}", functor),
                ViolationKind::DuplicateHome {
                    functor: functor.to_string(),
                    mfrags: mfrags.clone(),
                },
            );
        }
    }
    for sig in &theory.signatures {
        if !homes.contains_key(sig.functor.as_str()) {
            report.push(format!("random {}", sig.functor), ViolationKind::NoHome(sig.functor.clone()));
        }
    }
    report
}

fn check_declarations(theory: &MTheory, report: &mut ValidationReport) {
    let mut seen = HashSet::new();
    for t in &theory.entity_types {
        let loc = format!("entity {}", t);
        if !is_identifier(t) {
            report.push(&loc, ViolationKind::InvalidIdentifier(t.clone()));
        }
        if !seen.insert(t.as_str()) {
            report.push(&loc, ViolationKind::DuplicateEntityType(t.clone()));
        }
    }

    let mut seen = HashSet::new();
    for space in &theory.state_spaces {
        let loc = format!("states {}", space.name);
        if !is_identifier(&space.name) {
            report.push(&loc, ViolationKind::InvalidIdentifier(space.name.clone()));
        }
        if !seen.insert(space.name.as_str()) {
            report.push(&loc, ViolationKind::DuplicateStateSpace(space.name.clone()));
        }
        if space.states.len() < 2 {
            report.push(
                &loc,
                ViolationKind::TooFewStates {
                    space: space.name.clone(),
                    count: space.states.len(),
                },
            );
        }
        let mut states = HashSet::new();
        for s in &space.states {
            if !is_identifier(s) {
                report.push(&loc, ViolationKind::InvalidIdentifier(s.clone()));
            }
            if !states.insert(s.as_str()) {
                report.push(
                    &loc,
                    ViolationKind::DuplicateState {
                        space: space.name.clone(),
                        state: s.clone(),
                    },
                );
            }
        }
    }

    let mut seen = HashSet::new();
    for sig in &theory.signatures {
        let loc = format!("random {}", sig.functor);
        if !is_identifier(&sig.functor) {
            report.push(&loc, ViolationKind::InvalidIdentifier(sig.functor.clone()));
        }
        if !seen.insert(sig.functor.as_str()) {
            report.push(&loc, ViolationKind::DuplicateSignature(sig.functor.clone()));
        }
        if sig.arg_types.is_empty() {
            report.push(&loc, ViolationKind::NullaryFunctor(sig.functor.clone()));
        }
        for t in &sig.arg_types {
            if !theory.has_entity_type(t) {
                report.push(&loc, ViolationKind::UnknownEntityType(t.clone()));
            }
        }
        match &sig.range {
            Range::States(s) if theory.state_space(s).is_none() => {
                report.push(&loc, ViolationKind::UnknownStateSpace(s.clone()))
            }
            Range::Entity(t) if !theory.has_entity_type(t) => {
                report.push(&loc, ViolationKind::UnknownEntityType(t.clone()))
            }
            _ => {}
        }
    }
}

/// Checks a node reference against its signature and the MFrag's ordinary variables.
fn check_node_ref(theory: &MTheory, mfrag: &MFrag, node: &NodeRef, loc: &str, report: &mut ValidationReport) {
    for arg in &node.args {
        if mfrag.ovar(arg).is_none() {
            report.push(loc, ViolationKind::UndeclaredOrdinaryVariable(arg.clone()));
        }
    }
    let Some(sig) = theory.signature(&node.functor) else {
        report.push(loc, ViolationKind::UnknownFunctor(node.functor.clone()));
        return;
    };
    if sig.arg_types.len() != node.args.len() {
        report.push(
            loc,
            ViolationKind::ArityMismatch {
                functor: node.functor.clone(),
                expected: sig.arg_types.len(),
                found: node.args.len(),
            },
        );
        return;
    }
    for (i, (arg, expected)) in node.args.iter().zip(&sig.arg_types).enumerate() {
        if let Some(ov) = mfrag.ovar(arg) {
            if &ov.ty != expected {
                report.push(
                    loc,
                    ViolationKind::ArgumentType {
                        functor: node.functor.clone(),
                        position: i,
                        expected: expected.clone(),
                        found: ov.ty.clone(),
                    },
                );
            }
        }
    }
}

fn check_mfrag(theory: &MTheory, mfrag: &MFrag, report: &mut ValidationReport) {
    let base = format!("mfrag {}", mfrag.name);

    let mut seen = HashSet::new();
    for ov in &mfrag.ovars {
        let loc = format!("{} / ovar {}", base, ov.name);
        if !seen.insert(ov.name.as_str()) {
            report.push(&loc, ViolationKind::DuplicateOrdinaryVariable(ov.name.clone()));
        }
        if !theory.has_entity_type(&ov.ty) {
            report.push(&loc, ViolationKind::UnknownEntityType(ov.ty.clone()));
        }
    }

    for ctx in &mfrag.context {
        let loc = format!("{} / context {}", base, ctx);
        match ctx {
            ContextNode::IsA { var, ty } => {
                if mfrag.ovar(var).is_none() {
                    report.push(&loc, ViolationKind::UndeclaredOrdinaryVariable(var.clone()));
                }
                if !theory.has_entity_type(ty) {
                    report.push(&loc, ViolationKind::UnknownEntityType(ty.clone()));
                }
            }
            ContextNode::Equals { node, value } => {
                check_node_ref(theory, mfrag, node, &loc, report);
                if let Some(sig) = theory.signature(&node.functor) {
                    match &sig.range {
                        Range::States(_) => {
                            let known = theory
                                .states_of(&node.functor)
                                .is_none_or(|s| s.index_of(value).is_some());
                            if !known {
                                report.push(
                                    &loc,
                                    ViolationKind::UnknownContextValue {
                                        functor: node.functor.clone(),
                                        value: value.clone(),
                                    },
                                );
                            }
                        }
                        Range::Entity(ty) => {
                            if let Some(ov) = mfrag.ovar(value) {
                                if &ov.ty != ty {
                                    report.push(
                                        &loc,
                                        ViolationKind::ArgumentType {
                                            functor: node.functor.clone(),
                                            position: node.args.len(),
                                            expected: ty.clone(),
                                            found: ov.ty.clone(),
                                        },
                                    );
                                }
                            } else if !is_identifier(value) {
                                report.push(&loc, ViolationKind::InvalidIdentifier(value.clone()));
                            }
                        }
                    }
                }
            }
        }
    }

    for input in &mfrag.inputs {
        let loc = format!("{} / input {}", base, input.node);
        check_node_ref(theory, mfrag, &input.node, &loc, report);
        let functor = &input.node.functor;
        if mfrag.resident(functor).is_some() {
            report.push(&loc, ViolationKind::InputHomedLocally(functor.clone()));
        } else if theory.home_mfrag(functor).is_err() {
            report.push(&loc, ViolationKind::OrphanInput(functor.clone()));
        }
        if matches!(theory.signature(functor).map(|s| &s.range), Some(Range::Entity(_))) {
            report.push(&loc, ViolationKind::RelationAsParent(functor.clone()));
        }
    }

    for resident in &mfrag.residents {
        let loc = format!("{} / resident {}", base, resident.node);
        check_node_ref(theory, mfrag, &resident.node, &loc, report);
        let Some(sig) = theory.signature(&resident.node.functor) else {
            continue;
        };
        match (&sig.range, &resident.distribution) {
            (Range::Entity(_), LocalDistribution::Relation) => continue,
            (Range::Entity(_), _) => {
                report.push(&loc, ViolationKind::DistributionOnRelation(sig.functor.clone()));
                continue;
            }
            (Range::States(_), LocalDistribution::Relation) => {
                report.push(&loc, ViolationKind::MissingDistribution(sig.functor.clone()));
                continue;
            }
            _ => {}
        }

        let mut domains: Vec<Option<&StateSpace>> = Vec::new();
        for parent in resident.parents() {
            let declared = mfrag.inputs.iter().any(|i| &i.node == parent)
                || mfrag.residents.iter().any(|r| &r.node == parent);
            if !declared {
                report.push(&loc, ViolationKind::ParentNotInMFrag(parent.to_string()));
            }
            if matches!(theory.signature(&parent.functor).map(|s| &s.range), Some(Range::Entity(_))) {
                report.push(&loc, ViolationKind::RelationAsParent(parent.functor.clone()));
            }
            domains.push(theory.states_of(&parent.functor));
        }

        if let Some(space) = theory.states_of(&resident.node.functor) {
            for kind in lpd::validate_distribution(&resident.distribution, space.states.len(), &domains) {
                report.push(&loc, kind);
            }
        }
    }

    if let Some(cycle) = find_parent_cycle(mfrag) {
        report.push(&base, ViolationKind::CyclicParents(cycle));
    }
}

/// Detects a cycle among the MFrag's resident/input nodes along parent edges.
fn find_parent_cycle(mfrag: &MFrag) -> Option<Vec<String>> {
    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in &mfrag.residents {
        let child = r.node.to_string();
        for p in r.parents() {
            edges.entry(p.to_string()).or_default().insert(child.clone());
        }
        edges.entry(child).or_default();
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit(
        node: &str,
        edges: &BTreeMap<String, BTreeSet<String>>,
        marks: &mut BTreeMap<String, Mark>,
        path: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        match marks.get(node) {
            Some(Mark::Done) => return None,
            Some(Mark::Open) => {
                let start = path.iter().position(|p| p == node).unwrap_or(0);
                let mut cycle = path[start..].to_vec();
                cycle.push(node.to_string());
                return Some(cycle);
            }
            None => {}
        }
        marks.insert(node.to_string(), Mark::Open);
        path.push(node.to_string());
        if let Some(next) = edges.get(node) {
            for n in next {
                if let Some(c) = visit(n, edges, marks, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        marks.insert(node.to_string(), Mark::Done);
        None
    }

    let mut marks = BTreeMap::new();
    for node in edges.keys() {
        let mut path = Vec::new();
        if let Some(c) = visit(node, &edges, &mut marks, &mut path) {
            return Some(c);
        }
    }
    None
}
