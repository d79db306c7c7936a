//! Exact inference on a situation-specific network.
//!
//! [`posterior_ve`] runs sum-product variable elimination with a min-fill order.
//! [`posterior_enumerate`] sums the full joint and serves as a reference.

mod factor;
mod order;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::grounding::Ssbn;
use crate::model::RvInstance;

pub use factor::{apply_evidence, Factor};
pub use order::{elimination_order, elimination_order_indices, TieBreak};

/// Normalizers at or below this value are treated as zero.
pub const IMPOSSIBLE_EVIDENCE_THRESHOLD: f64 = 1e-300;

/// Largest joint state space [`posterior_enumerate`] will visit.
pub const ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("impossible evidence: probability of the evidence is {normalizer:e}")]
    ImpossibleEvidence { normalizer: f64 },
    #[error("joint state space of {configurations} configurations exceeds the enumeration cap of {cap}")]
    TooLarge { configurations: u128, cap: u128 },
    #[error("invalid elimination order: {0}")]
    InvalidOrder(String),
}

/// A normalized distribution over the states of one variable, in declared state order.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    pub target: RvInstance,
    pub states: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl Posterior {
    fn normalized(ssbn: &Ssbn, unnormalized: Vec<f64>) -> Result<Posterior, InferenceError> {
        let z: f64 = unnormalized.iter().sum();
        if z.is_nan() || z <= IMPOSSIBLE_EVIDENCE_THRESHOLD {
            return Err(InferenceError::ImpossibleEvidence { normalizer: z });
        }
        let node = ssbn.query_node();
        Ok(Posterior {
            target: node.instance.clone(),
            states: node.states.clone(),
            probabilities: unnormalized.into_iter().map(|p| p / z).collect(),
        })
    }

    pub fn probability(&self, state: &str) -> Option<f64> {
        self.states.iter().position(|s| s == state).map(|i| self.probabilities[i])
    }

    /// The most probable state; the first in declared order on ties.
    pub fn argmax(&self) -> &str {
        let mut best = 0;
        for (i, p) in self.probabilities.iter().enumerate() {
            if *p > self.probabilities[best] {
                best = i;
            }
        }
        &self.states[best]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.states.iter().map(String::as_str).zip(self.probabilities.iter().copied())
    }
}

impl fmt::Display for Posterior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (state, p) in self.iter() {
            writeln!(f, "{} {:.6}", state, p)?;
        }
        Ok(())
    }
}

fn kept(ssbn: &Ssbn) -> BTreeSet<usize> {
    let mut keep: BTreeSet<usize> = ssbn.evidence().keys().copied().collect();
    keep.insert(ssbn.query());
    keep
}

/// Query posterior by variable elimination with the default min-fill order.
pub fn posterior_ve(ssbn: &Ssbn) -> Result<Posterior, InferenceError> {
    posterior_ve_with_tiebreak(ssbn, TieBreak::Name)
}

pub fn posterior_ve_with_tiebreak(ssbn: &Ssbn, tie: TieBreak) -> Result<Posterior, InferenceError> {
    let order = elimination_order_indices(ssbn, &kept(ssbn), tie);
    eliminate(ssbn, &order)
}

/// Variable elimination along `order`, which must list every unobserved non-query node once.
pub fn posterior_ve_with_order(ssbn: &Ssbn, order: &[usize]) -> Result<Posterior, InferenceError> {
    let keep = kept(ssbn);
    let expected: BTreeSet<usize> = (0..ssbn.len()).filter(|i| !keep.contains(i)).collect();
    let given: BTreeSet<usize> = order.iter().copied().collect();
    if given.len() != order.len() || given != expected {
        return Err(InferenceError::InvalidOrder(format!(
            "expected a permutation of {} eliminable nodes",
            expected.len()
        )));
    }
    eliminate(ssbn, order)
}

fn eliminate(ssbn: &Ssbn, order: &[usize]) -> Result<Posterior, InferenceError> {
    let evidence = ssbn.evidence();
    let mut factors: Vec<Factor> = (0..ssbn.len())
        .map(|i| apply_evidence(&Factor::from_cpt(ssbn, i), evidence))
        .collect();
    for &var in order {
        let (involved, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.contains(var));
        factors = rest;
        if let Some(product) = involved.into_iter().reduce(|a, b| a.product(&b)) {
            factors.push(product.sum_out(var));
        }
    }
    let joint = factors
        .into_iter()
        .reduce(|a, b| a.product(&b))
        .unwrap_or_else(|| Factor::scalar(1.0));

    let q = ssbn.query();
    let card = ssbn.query_node().states.len();
    let unnormalized = match evidence.get(&q) {
        Some(&observed) => {
            let z: f64 = joint.values().iter().sum();
            (0..card).map(|s| if s == observed { z } else { 0.0 }).collect()
        }
        None => {
            debug_assert_eq!(joint.scope(), &[q]);
            joint.values().to_vec()
        }
    };
    Posterior::normalized(ssbn, unnormalized)
}

/// Query posterior by summing the full joint over every configuration consistent with the
/// evidence. Refuses networks with more than [`ENUMERATION_CAP`] such configurations.
pub fn posterior_enumerate(ssbn: &Ssbn) -> Result<Posterior, InferenceError> {
    let n = ssbn.len();
    let evidence = ssbn.evidence();
    let free: Vec<usize> = (0..n).filter(|i| !evidence.contains_key(i)).collect();
    let configurations = free
        .iter()
        .try_fold(1u128, |acc, &i| acc.checked_mul(ssbn.node(i).states.len() as u128))
        .unwrap_or(u128::MAX);
    if configurations > ENUMERATION_CAP {
        return Err(InferenceError::TooLarge {
            configurations,
            cap: ENUMERATION_CAP,
        });
    }

    let mut assignment = vec![0usize; n];
    for (&i, &s) in evidence {
        assignment[i] = s;
    }
    let q = ssbn.query();
    let mut totals = vec![0.0; ssbn.query_node().states.len()];
    let mut parent_states = Vec::new();
    'outer: loop {
        let mut joint = 1.0;
        for (i, node) in ssbn.nodes().iter().enumerate() {
            parent_states.clear();
            parent_states.extend(node.parents.iter().map(|&p| assignment[p]));
            joint *= node.cpt.row(node.cpt.row_index(&parent_states))[assignment[i]];
            if joint == 0.0 {
                break;
            }
        }
        totals[assignment[q]] += joint;

        for &i in free.iter().rev() {
            assignment[i] += 1;
            if assignment[i] < ssbn.node(i).states.len() {
                continue 'outer;
            }
            assignment[i] = 0;
        }
        break;
    }
    Posterior::normalized(ssbn, totals)
}
