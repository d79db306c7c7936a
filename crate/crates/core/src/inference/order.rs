use std::collections::{BTreeMap, BTreeSet};

use crate::grounding::Ssbn;
use crate::model::RvInstance;

/// Tie-breaking rule among candidates with equal fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest canonical name first.
    #[default]
    Name,
    /// Largest canonical name first.
    ReverseName,
}

/// Undirected moral graph over the unobserved nodes: parents married, evidence removed.
fn moral_graph(ssbn: &Ssbn) -> BTreeMap<usize, BTreeSet<usize>> {
    let observed = ssbn.evidence();
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = (0..ssbn.len())
        .filter(|i| !observed.contains_key(i))
        .map(|i| (i, BTreeSet::new()))
        .collect();
    for (child, node) in ssbn.nodes().iter().enumerate() {
        let mut family: Vec<usize> = node.parents.clone();
        family.push(child);
        family.retain(|v| !observed.contains_key(v));
        for (k, &a) in family.iter().enumerate() {
            for &b in &family[k + 1..] {
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
    }
    adj
}

fn fill_in(adj: &BTreeMap<usize, BTreeSet<usize>>, v: usize) -> usize {
    let nbrs: Vec<usize> = adj[&v].iter().copied().collect();
    let mut fill = 0;
    for (k, a) in nbrs.iter().enumerate() {
        for b in &nbrs[k + 1..] {
            if !adj[a].contains(b) {
                fill += 1;
            }
        }
    }
    fill
}

/// Greedy min-fill order over the unobserved nodes not in `keep`, as node indices.
pub fn elimination_order_indices(ssbn: &Ssbn, keep: &BTreeSet<usize>, tie: TieBreak) -> Vec<usize> {
    let mut adj = moral_graph(ssbn);
    let mut candidates: BTreeSet<usize> = adj.keys().copied().filter(|v| !keep.contains(v)).collect();
    let mut order = Vec::with_capacity(candidates.len());
    while !candidates.is_empty() {
        let name = |v: usize| ssbn.node(v).instance.canonical();
        let best = candidates
            .iter()
            .copied()
            .min_by(|&a, &b| {
                fill_in(&adj, a).cmp(&fill_in(&adj, b)).then_with(|| match tie {
                    TieBreak::Name => name(a).cmp(&name(b)),
                    TieBreak::ReverseName => name(b).cmp(&name(a)),
                })
            })
            .expect("non-empty");
        let nbrs: Vec<usize> = adj[&best].iter().copied().collect();
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
        for n in &nbrs {
            adj.get_mut(n).unwrap().remove(&best);
        }
        adj.remove(&best);
        candidates.remove(&best);
        order.push(best);
    }
    order
}

/// Min-fill elimination order over the moral graph, ties broken by canonical name.
///
/// Evidence nodes are never eliminated; `keep` names further nodes to retain.
pub fn elimination_order(ssbn: &Ssbn, keep: &BTreeSet<RvInstance>) -> Vec<RvInstance> {
    let keep: BTreeSet<usize> = keep.iter().filter_map(|k| ssbn.index_of(k)).collect();
    elimination_order_indices(ssbn, &keep, TieBreak::Name)
        .into_iter()
        .map(|i| ssbn.node(i).instance.clone())
        .collect()
}
