use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::lpd::Cpt;
use crate::model::RvInstance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SsbnError {
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("{node}: unknown parent {parent}")]
    UnknownParent { node: String, parent: String },
    #[error("{0}: CPT shape does not match its parents and states")]
    CptShape(String),
    #[error("directed cycle through {0}")]
    Cycle(String),
    #[error("evidence on unknown node {0}")]
    UnknownEvidenceNode(String),
    #[error("evidence {node}={state}: not a state of the node")]
    InvalidEvidenceState { node: String, state: String },
    #[error("query node {0} is not in the network")]
    MissingQuery(String),
}

/// Input description of one node for [`Ssbn::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub instance: RvInstance,
    pub states: Vec<String>,
    pub parents: Vec<RvInstance>,
    pub cpt: Cpt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsbnNode {
    pub instance: RvInstance,
    pub states: Vec<String>,
    /// Parent node indices in CPT order.
    pub parents: Vec<usize>,
    pub cpt: Cpt,
}

/// A situation-specific Bayesian network.
///
/// Nodes are stored in a topological order that breaks ties by canonical name, so node indices
/// are deterministic for a given network.
#[derive(Debug, Clone, PartialEq)]
pub struct Ssbn {
    nodes: Vec<SsbnNode>,
    index: BTreeMap<RvInstance, usize>,
    evidence: BTreeMap<usize, usize>,
    query: usize,
}

impl Ssbn {
    pub fn new(
        specs: Vec<NodeSpec>,
        evidence: BTreeMap<RvInstance, String>,
        query: RvInstance,
    ) -> Result<Ssbn, SsbnError> {
        let mut by_name: BTreeMap<RvInstance, NodeSpec> = BTreeMap::new();
        for spec in specs {
            if by_name.contains_key(&spec.instance) {
                return Err(SsbnError::DuplicateNode(spec.instance.to_string()));
            }
            by_name.insert(spec.instance.clone(), spec);
        }
        for spec in by_name.values() {
            for p in &spec.parents {
                if !by_name.contains_key(p) {
                    return Err(SsbnError::UnknownParent {
                        node: spec.instance.to_string(),
                        parent: p.to_string(),
                    });
                }
            }
            let cards: Vec<usize> = spec.parents.iter().map(|p| by_name[p].states.len()).collect();
            if spec.cpt.parent_cards() != cards.as_slice() || spec.cpt.state_count() != spec.states.len() {
                return Err(SsbnError::CptShape(spec.instance.to_string()));
            }
        }

        // Kahn's algorithm, smallest canonical name first.
        let names: Vec<RvInstance> = by_name.keys().cloned().collect();
        let pos: BTreeMap<&RvInstance, usize> = names.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut indegree = vec![0usize; names.len()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        for (i, name) in names.iter().enumerate() {
            for p in &by_name[name].parents {
                indegree[i] += 1;
                children[pos[p]].push(i);
            }
        }
        let mut ready: BTreeSet<usize> = (0..names.len()).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(names.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &c in &children[i] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() != names.len() {
            let stuck = (0..names.len()).find(|&i| indegree[i] > 0).expect("some node is on a cycle");
            return Err(SsbnError::Cycle(names[stuck].to_string()));
        }

        let index: BTreeMap<RvInstance, usize> = order
            .iter()
            .enumerate()
            .map(|(new, &old)| (names[old].clone(), new))
            .collect();
        let mut nodes = Vec::with_capacity(order.len());
        for &old in &order {
            let spec = by_name.remove(&names[old]).expect("each node placed once");
            nodes.push(SsbnNode {
                parents: spec.parents.iter().map(|p| index[p]).collect(),
                instance: spec.instance,
                states: spec.states,
                cpt: spec.cpt,
            });
        }

        let mut ev = BTreeMap::new();
        for (var, state) in evidence {
            let &i = index
                .get(&var)
                .ok_or_else(|| SsbnError::UnknownEvidenceNode(var.to_string()))?;
            let s = nodes[i]
                .states
                .iter()
                .position(|x| x == &state)
                .ok_or_else(|| SsbnError::InvalidEvidenceState {
                    node: var.to_string(),
                    state: state.clone(),
                })?;
            ev.insert(i, s);
        }
        let query = *index
            .get(&query)
            .ok_or_else(|| SsbnError::MissingQuery(query.to_string()))?;

        Ok(Ssbn {
            nodes,
            index,
            evidence: ev,
            query,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in topological order.
    pub fn nodes(&self) -> &[SsbnNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &SsbnNode {
        &self.nodes[i]
    }

    pub fn index_of(&self, instance: &RvInstance) -> Option<usize> {
        self.index.get(instance).copied()
    }

    pub fn query(&self) -> usize {
        self.query
    }

    pub fn query_node(&self) -> &SsbnNode {
        &self.nodes[self.query]
    }

    /// Observed state index per evidenced node.
    pub fn evidence(&self) -> &BTreeMap<usize, usize> {
        &self.evidence
    }

    pub fn evidence_state(&self, node: usize) -> Option<&str> {
        self.evidence.get(&node).map(|&s| self.nodes[node].states[s].as_str())
    }

    /// `(parent, child)` pairs, grouped by child in topological order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(c, n)| n.parents.iter().map(move |&p| (p, c)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.parents.len()).sum()
    }

    /// Canonical node names in topological order.
    pub fn topological_order(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.instance.to_string()).collect()
    }

    /// Indices of `roots` and all their ancestors.
    pub fn ancestors_of(&self, roots: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = roots.into_iter().collect();
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(self.nodes[i].parents.iter().copied());
            }
        }
        seen
    }

    /// Rebuilds the network restricted to `keep`, which must be closed under parents.
    pub(crate) fn restrict(&self, keep: &BTreeSet<usize>) -> Ssbn {
        let specs = keep
            .iter()
            .map(|&i| {
                let n = &self.nodes[i];
                NodeSpec {
                    instance: n.instance.clone(),
                    states: n.states.clone(),
                    parents: n.parents.iter().map(|&p| self.nodes[p].instance.clone()).collect(),
                    cpt: n.cpt.clone(),
                }
            })
            .collect();
        let evidence = self
            .evidence
            .iter()
            .filter(|(i, _)| keep.contains(i))
            .map(|(&i, &s)| (self.nodes[i].instance.clone(), self.nodes[i].states[s].clone()))
            .collect();
        Ssbn::new(specs, evidence, self.nodes[self.query].instance.clone())
            .expect("a parent-closed subnetwork of a valid network is valid")
    }
}

/// Removes every node that is neither the query, evidence, nor an ancestor of either.
pub fn prune_barren(ssbn: &Ssbn) -> Ssbn {
    let keep = ssbn.ancestors_of(std::iter::once(ssbn.query).chain(ssbn.evidence.keys().copied()));
    if keep.len() == ssbn.len() {
        return ssbn.clone();
    }
    ssbn.restrict(&keep)
}
