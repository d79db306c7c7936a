use std::collections::BTreeMap;

use crate::grounding::Ssbn;

/// A nonnegative table over the joint states of `scope`, stored row-major (last variable
/// fastest). Variables are SSBN node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    scope: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<usize>, cards: Vec<usize>, values: Vec<f64>) -> Self {
        assert_eq!(scope.len(), cards.len(), "one cardinality per scope variable");
        assert_eq!(values.len(), cards.iter().product::<usize>(), "table size");
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        Factor { scope, cards, values }
    }

    pub fn scalar(value: f64) -> Self {
        Factor::new(Vec::new(), Vec::new(), vec![value])
    }

    /// The CPT of `node` as a factor over its parents followed by the node itself.
    pub fn from_cpt(ssbn: &Ssbn, node: usize) -> Self {
        let n = ssbn.node(node);
        let mut scope = n.parents.clone();
        scope.push(node);
        let cards = scope.iter().map(|&v| ssbn.node(v).states.len()).collect();
        Factor::new(scope, cards, n.cpt.values().to_vec())
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, var: usize) -> bool {
        self.scope.contains(&var)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.cards.len()];
        for i in (0..self.cards.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.cards[i + 1];
        }
        strides
    }

    /// Pointwise product over the union of both scopes (`self`'s variables first).
    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        for (&v, &c) in other.scope.iter().zip(&other.cards) {
            if !scope.contains(&v) {
                scope.push(v);
                cards.push(c);
            }
        }
        let project = |f: &Factor| -> Vec<usize> {
            let strides = f.strides();
            scope
                .iter()
                .map(|v| f.scope.iter().position(|x| x == v).map_or(0, |i| strides[i]))
                .collect()
        };
        let sa = project(self);
        let sb = project(other);
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut assignment = vec![0usize; scope.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        for _ in 0..size {
            values.push(self.values[ia] * other.values[ib]);
            for d in (0..scope.len()).rev() {
                assignment[d] += 1;
                ia += sa[d];
                ib += sb[d];
                if assignment[d] < cards[d] {
                    break;
                }
                ia -= sa[d] * cards[d];
                ib -= sb[d] * cards[d];
                assignment[d] = 0;
            }
        }
        Factor { scope, cards, values }
    }

    /// Marginalizes `var` out. A factor without `var` is returned unchanged.
    pub fn sum_out(&self, var: usize) -> Factor {
        let Some(pos) = self.scope.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let card = self.cards[pos];
        let inner: usize = self.cards[pos + 1..].iter().product();
        let outer: usize = self.cards[..pos].iter().product();
        let mut values = vec![0.0; outer * inner];
        for o in 0..outer {
            for s in 0..card {
                let base = (o * card + s) * inner;
                for i in 0..inner {
                    values[o * inner + i] += self.values[base + i];
                }
            }
        }
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        Factor { scope, cards, values }
    }

    /// Fixes `var` to `state` and drops it from the scope.
    pub fn slice(&self, var: usize, state: usize) -> Factor {
        let Some(pos) = self.scope.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let card = self.cards[pos];
        assert!(state < card, "state index out of range");
        let inner: usize = self.cards[pos + 1..].iter().product();
        let outer: usize = self.cards[..pos].iter().product();
        let mut values = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * card + state) * inner;
            values.extend_from_slice(&self.values[base..base + inner]);
        }
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        Factor { scope, cards, values }
    }
}

/// Slices `factor` at every evidenced variable in its scope.
pub fn apply_evidence(factor: &Factor, evidence: &BTreeMap<usize, usize>) -> Factor {
    let mut out = factor.clone();
    for (&var, &state) in evidence {
        if out.contains(var) {
            out = out.slice(var, state);
        }
    }
    out
}
