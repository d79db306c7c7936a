use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ModelError;

/// A grounded random variable such as `Thickness(spill_1)`.
///
/// Ordering follows the canonical text form `Functor(a,b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RvInstance {
    pub functor: String,
    pub args: Vec<String>,
}

impl RvInstance {
    pub fn new(functor: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        RvInstance {
            functor: functor.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RvInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.functor, self.args.join(","))
    }
}

impl Ord for RvInstance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical().cmp(&other.canonical())
    }
}

impl PartialOrd for RvInstance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A query names one grounded random variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query(pub RvInstance);

impl Query {
    pub fn target(&self) -> &RvInstance {
        &self.0
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}?", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// `isA(instance, Type)=True`: declares an entity instance.
    IsA { instance: String, ty: String },
    /// `Functor(args)=value`: a state for chance variables, an entity instance for relations.
    Value { variable: RvInstance, value: String },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::IsA { instance, ty } => write!(f, "isA({}, {})=True", instance, ty),
            Finding::Value { variable, value } => {
                write!(f, "{}({})={}", variable.functor, variable.args.join(", "), value)
            }
        }
    }
}

/// Entity instances grouped by type. Closed world: nothing else exists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntityPool {
    types: BTreeMap<String, String>,
    by_type: BTreeMap<String, BTreeSet<String>>,
}

impl EntityPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, instance: &str, ty: &str) -> Result<(), ModelError> {
        if let Some(existing) = self.types.get(instance) {
            if existing != ty {
                return Err(ModelError::ConflictingType {
                    instance: instance.to_string(),
                    first: existing.clone(),
                    second: ty.to_string(),
                });
            }
            return Ok(());
        }
        self.types.insert(instance.to_string(), ty.to_string());
        self.by_type
            .entry(ty.to_string())
            .or_default()
            .insert(instance.to_string());
        Ok(())
    }

    pub fn type_of(&self, instance: &str) -> Option<&str> {
        self.types.get(instance).map(String::as_str)
    }

    pub fn contains(&self, instance: &str) -> bool {
        self.types.contains_key(instance)
    }

    /// Instances of `ty` in name order.
    pub fn instances_of(&self, ty: &str) -> impl Iterator<Item = &str> {
        self.by_type
            .get(ty)
            .into_iter()
            .flat_map(|s| s.iter().map(String::as_str))
    }

    pub fn by_type(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.by_type
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn union(&self, other: &EntityPool) -> Result<EntityPool, ModelError> {
        let mut out = self.clone();
        for (instance, ty) in &other.types {
            out.insert(instance, ty)?;
        }
        Ok(out)
    }
}

/// Collects the instances declared by `isA` findings.
pub fn entity_pool<'a>(findings: impl IntoIterator<Item = &'a Finding>) -> Result<EntityPool, ModelError> {
    let mut pool = EntityPool::new();
    for f in findings {
        if let Finding::IsA { instance, ty } = f {
            pool.insert(instance, ty)?;
        }
    }
    Ok(pool)
}

/// An ordered set of findings with its derived entity pool and value index.
///
/// Type and state checks against a theory happen in the findings parser; this type enforces
/// the theory-independent rules: consistent typing and one finding per grounded variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FindingSet {
    findings: Vec<Finding>,
    pool: EntityPool,
    values: BTreeMap<RvInstance, String>,
}

impl FindingSet {
    pub fn new(findings: Vec<Finding>) -> Result<Self, ModelError> {
        let pool = entity_pool(&findings)?;
        let mut values = BTreeMap::new();
        for f in &findings {
            if let Finding::Value { variable, value } = f {
                if values.insert(variable.clone(), value.clone()).is_some() {
                    return Err(ModelError::DuplicateFinding(variable.to_string()));
                }
            }
        }
        Ok(FindingSet {
            findings,
            pool,
            values,
        })
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn pool(&self) -> &EntityPool {
        &self.pool
    }

    pub fn value_of(&self, variable: &RvInstance) -> Option<&str> {
        self.values.get(variable).map(String::as_str)
    }

    /// Value findings in canonical variable order.
    pub fn values(&self) -> impl Iterator<Item = (&RvInstance, &str)> {
        self.values.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}
