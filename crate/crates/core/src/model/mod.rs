//! The MEBN object model: entity types, state spaces, random-variable signatures, MFrags and
//! MTheories, plus the ground-level findings and queries that instantiate them.
//!
//! Every object here is immutable once constructed. Structural well-formedness of a theory is
//! checked by [`validate_mtheory`], which reports violations as data rather than failing.

mod findings;
mod validate;

use std::fmt;

use thiserror::Error;

pub use findings::{entity_pool, EntityPool, Finding, FindingSet, Query, RvInstance};
pub use validate::{validate_mtheory, ValidationReport, Violation, ViolationKind};

/// Tolerance used for every "sums to one" check.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown functor '{0}'")]
    UnknownFunctor(String),
    #[error("entity instance '{instance}' declared as both {first} and {second}")]
    ConflictingType {
        instance: String,
        first: String,
        second: String,
    },
    #[error("duplicate finding for {0}")]
    DuplicateFinding(String),
    #[error("unknown entity instance '{0}'")]
    UnknownInstance(String),
}

/// Returns true if `s` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    pub name: String,
    pub states: Vec<String>,
}

impl StateSpace {
    pub fn new(name: impl Into<String>, states: impl IntoIterator<Item = impl Into<String>>) -> Self {
        StateSpace {
            name: name.into(),
            states: states.into_iter().map(Into::into).collect(),
        }
    }

    pub fn index_of(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

/// What a functor ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Range {
    /// A named state space; the functor is a chance variable.
    States(String),
    /// An entity type; the functor is a relation resolved from findings (e.g. `Location`).
    Entity(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub functor: String,
    pub arg_types: Vec<String>,
    pub range: Range,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryVariable {
    pub name: String,
    pub ty: String,
}

impl OrdinaryVariable {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        OrdinaryVariable {
            name: name.into(),
            ty: ty.into(),
        }
    }
}

/// A templated node reference such as `SpreadSpeed(s)`.
///
/// Arguments are usually ordinary variables of the enclosing MFrag; an argument that is not a
/// declared ordinary variable is read as an entity literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    pub functor: String,
    pub args: Vec<String>,
}

impl NodeRef {
    pub fn new(functor: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        NodeRef {
            functor: functor.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.functor, self.args.join(", "))
    }
}

/// A context constraint. Evaluates to True, False or Absurd under a binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextNode {
    /// `isA(var, Type)`
    IsA { var: String, ty: String },
    /// `Functor(args) = value`, where `value` is an ordinary variable, an entity literal or
    /// (for state-valued functors) a state name.
    Equals { node: NodeRef, value: String },
}

impl ContextNode {
    /// Every identifier in argument position; used for ordinary-variable checks.
    pub fn mentioned_terms(&self) -> Vec<&str> {
        match self {
            ContextNode::IsA { var, .. } => vec![var.as_str()],
            ContextNode::Equals { node, value } => node
                .args
                .iter()
                .map(String::as_str)
                .chain(std::iter::once(value.as_str()))
                .collect(),
        }
    }
}

impl fmt::Display for ContextNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextNode::IsA { var, ty } => write!(f, "isA({}, {})", var, ty),
            ContextNode::Equals { node, value } => write!(f, "{} = {}", node, value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputNode {
    pub node: NodeRef,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidentNode {
    pub node: NodeRef,
    pub distribution: LocalDistribution,
}

impl ResidentNode {
    pub fn parents(&self) -> &[NodeRef] {
        self.distribution.parents()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalDistribution {
    Table(Table),
    Rules(RuleList),
    /// No probabilistic content: the value is read from findings. Only meaningful for
    /// entity-valued functors.
    Relation,
}

impl LocalDistribution {
    pub fn parents(&self) -> &[NodeRef] {
        match self {
            LocalDistribution::Table(t) => &t.parents,
            LocalDistribution::Rules(r) => &r.parents,
            LocalDistribution::Relation => &[],
        }
    }
}

/// An explicit conditional probability table. A table with no parents is a prior.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub parents: Vec<NodeRef>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn prior(probs: Vec<f64>) -> Self {
        Table {
            parents: Vec::new(),
            rows: vec![TableRow {
                config: Vec::new(),
                probs,
            }],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    /// One parent state per declared parent, in declared order.
    pub config: Vec<String>,
    pub probs: Vec<f64>,
}

/// First-match quantified rules over a variable number of grounded parents.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleList {
    pub parents: Vec<NodeRef>,
    pub rules: Vec<Rule>,
    /// The terminal `else` vector. Always present in parsed models.
    pub default: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub condition: Condition,
    pub probs: Vec<f64>,
}

/// Quantified atoms range over every grounded parent instance of `functor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Any { functor: String, state: String },
    All { functor: String, state: String },
    CountAtLeast { functor: String, state: String, min: u32 },
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    /// Visits every atom as `(functor, state)`.
    pub fn atoms(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        match self {
            Condition::Any { functor, state }
            | Condition::All { functor, state }
            | Condition::CountAtLeast { functor, state, .. } => out.push((functor, state)),
            Condition::And(cs) | Condition::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Condition) -> fmt::Result {
            match c {
                Condition::And(_) | Condition::Or(_) => write!(f, "({})", c),
                _ => write!(f, "{}", c),
            }
        }
        fn join(f: &mut fmt::Formatter<'_>, cs: &[Condition], op: &str) -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {} ", op)?;
                }
                child(f, c)?;
            }
            Ok(())
        }
        match self {
            Condition::Any { functor, state } => write!(f, "ANY({}, {})", functor, state),
            Condition::All { functor, state } => write!(f, "ALL({}, {})", functor, state),
            Condition::CountAtLeast { functor, state, min } => {
                write!(f, "COUNT({}, {}) >= {}", functor, state, min)
            }
            Condition::And(cs) => join(f, cs, "AND"),
            Condition::Or(cs) => join(f, cs, "OR"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MFrag {
    pub name: String,
    pub ovars: Vec<OrdinaryVariable>,
    pub context: Vec<ContextNode>,
    pub inputs: Vec<InputNode>,
    pub residents: Vec<ResidentNode>,
}

impl MFrag {
    pub fn new(name: impl Into<String>) -> Self {
        MFrag {
            name: name.into(),
            ovars: Vec::new(),
            context: Vec::new(),
            inputs: Vec::new(),
            residents: Vec::new(),
        }
    }

    pub fn ovar(&self, name: &str) -> Option<&OrdinaryVariable> {
        self.ovars.iter().find(|v| v.name == name)
    }

    pub fn resident(&self, functor: &str) -> Option<&ResidentNode> {
        self.residents.iter().find(|r| r.node.functor == functor)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MTheory {
    pub entity_types: Vec<String>,
    pub state_spaces: Vec<StateSpace>,
    pub signatures: Vec<Signature>,
    pub mfrags: Vec<MFrag>,
}

impl MTheory {
    pub fn has_entity_type(&self, name: &str) -> bool {
        self.entity_types.iter().any(|t| t == name)
    }

    pub fn state_space(&self, name: &str) -> Option<&StateSpace> {
        self.state_spaces.iter().find(|s| s.name == name)
    }

    pub fn signature(&self, functor: &str) -> Option<&Signature> {
        self.signatures.iter().find(|s| s.functor == functor)
    }

    /// States of a state-valued functor; `None` for unknown or entity-valued functors.
    pub fn states_of(&self, functor: &str) -> Option<&StateSpace> {
        match &self.signature(functor)?.range {
            Range::States(space) => self.state_space(space),
            Range::Entity(_) => None,
        }
    }

    pub fn mfrag(&self, name: &str) -> Option<&MFrag> {
        self.mfrags.iter().find(|m| m.name == name)
    }

    /// The unique MFrag declaring `functor` as resident. On an invalid theory with several
    /// homes, the first in declaration order is returned.
    pub fn home_mfrag(&self, functor: &str) -> Result<&MFrag, ModelError> {
        self.mfrags
            .iter()
            .find(|m| m.resident(functor).is_some())
            .ok_or_else(|| ModelError::UnknownFunctor(functor.to_string()))
    }

    /// The home MFrag together with the resident node itself.
    pub fn resident(&self, functor: &str) -> Result<(&MFrag, &ResidentNode), ModelError> {
        let home = self.home_mfrag(functor)?;
        let node = home.resident(functor).expect("home MFrag declares the resident");
        Ok((home, node))
    }
}

/// Free-function form of [`MTheory::home_mfrag`].
pub fn home_mfrag<'a>(theory: &'a MTheory, functor: &str) -> Result<&'a MFrag, ModelError> {
    theory.home_mfrag(functor)
}
