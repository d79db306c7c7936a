//! Local probability distributions: turning a resident node's TABLE or RULES into a concrete
//! conditional probability table once its grounded parents are known.
//!
//! RULES are first-match lists of quantified conditions. An atom such as `ANY(Thickness, Thick)`
//! ranges over every grounded parent instance of `Thickness`, so one rule list defines a CPT for
//! any number of parent instances. Over an empty instance set `ANY` is false, `ALL` is true and
//! `COUNT` is zero.
//!
//! CPT rows are ordered with the last parent varying fastest.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::model::{
    Condition, LocalDistribution, ResidentNode, RuleList, RvInstance, StateSpace, Table, ViolationKind,
    NORMALIZATION_TOLERANCE,
};

/// Upper bound on synthesized CPT rows.
pub const MAX_CPT_ROWS: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpdError {
    #[error("{node}: table declares {expected} parent(s) but {found} grounded parent(s) were supplied")]
    ArityMismatch { node: String, expected: usize, found: usize },
    #[error("{node}: grounded parent {found} does not match declared parent {expected}")]
    ParentMismatch { node: String, expected: String, found: String },
    #[error("{node}: no table row for configuration ({config})")]
    RowCoverage { node: String, config: String },
    #[error("{node}: probability vector has length {found}, expected {expected}")]
    VectorLength { node: String, expected: usize, found: usize },
    #[error("{node}: no rule matches and the rule list has no ELSE")]
    MissingElse { node: String },
    #[error("{node}: finding-resolved relation has no distribution")]
    NotAChanceNode { node: String },
    #[error("{node}: {rows} CPT rows exceed the limit of {limit}")]
    TooManyRows { node: String, rows: usize, limit: usize },
    #[error("CPT has {found} values, expected {expected}")]
    Shape { expected: usize, found: usize },
}

/// A dense conditional probability table.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    parent_cards: Vec<usize>,
    state_count: usize,
    values: Vec<f64>,
}

impl Cpt {
    pub fn new(parent_cards: Vec<usize>, state_count: usize, values: Vec<f64>) -> Result<Self, LpdError> {
        let expected = parent_cards.iter().product::<usize>() * state_count;
        if values.len() != expected {
            return Err(LpdError::Shape {
                expected,
                found: values.len(),
            });
        }
        Ok(Cpt {
            parent_cards,
            state_count,
            values,
        })
    }

    pub fn prior(probs: Vec<f64>) -> Self {
        Cpt {
            parent_cards: Vec::new(),
            state_count: probs.len(),
            values: probs,
        }
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn row_count(&self) -> usize {
        self.parent_cards.iter().product()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.state_count..(i + 1) * self.state_count]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.state_count.max(1))
    }

    /// Flat values: rows in order, each row over the node's states.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_index(&self, parent_states: &[usize]) -> usize {
        parent_states
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&s, &c)| acc * c + s)
    }
}

/// A grounded parent instance with the states of its functor.
#[derive(Debug, Clone, Copy)]
pub struct GroundParent<'a> {
    pub instance: &'a RvInstance,
    pub states: &'a [String],
}

/// Iterates all joint configurations, last position fastest.
pub(crate) struct Configurations {
    cards: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Configurations {
    pub(crate) fn new(cards: &[usize]) -> Self {
        Configurations {
            cards: cards.to_vec(),
            current: vec![0; cards.len()],
            done: cards.contains(&0),
        }
    }
}

impl Iterator for Configurations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = true;
        for i in (0..self.cards.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.cards[i] {
                self.done = false;
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// Evaluates a condition against `(functor, state)` pairs, one per grounded parent instance.
pub fn condition_holds(condition: &Condition, config: &[(&str, &str)]) -> bool {
    let matching = |f: &str, s: &str| config.iter().filter(|(pf, ps)| *pf == f && *ps == s).count();
    let total = |f: &str| config.iter().filter(|(pf, _)| *pf == f).count();
    match condition {
        Condition::Any { functor, state } => matching(functor, state) > 0,
        Condition::All { functor, state } => matching(functor, state) == total(functor),
        Condition::CountAtLeast { functor, state, min } => matching(functor, state) >= *min as usize,
        Condition::And(cs) => cs.iter().all(|c| condition_holds(c, config)),
        Condition::Or(cs) => cs.iter().any(|c| condition_holds(c, config)),
    }
}

/// First-match rule selection. `None` only when nothing matches and the list has no ELSE.
pub fn match_rule<'a>(rules: &'a RuleList, config: &[(&str, &str)]) -> Option<&'a [f64]> {
    rules
        .rules
        .iter()
        .find(|r| condition_holds(&r.condition, config))
        .map(|r| r.probs.as_slice())
        .or(rules.default.as_deref())
}

/// Builds the CPT of a resident node instance over its grounded parents (in CPT order).
pub fn synthesize_cpt(node: &ResidentNode, parents: &[GroundParent<'_>], state_count: usize) -> Result<Cpt, LpdError> {
    let name = node.node.to_string();
    let cards: Vec<usize> = parents.iter().map(|p| p.states.len()).collect();
    let rows = cards
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c))
        .filter(|&r| r <= MAX_CPT_ROWS)
        .ok_or_else(|| LpdError::TooManyRows {
            node: name.clone(),
            rows: cards.iter().fold(1usize, |a, &c| a.saturating_mul(c)),
            limit: MAX_CPT_ROWS,
        })?;

    let check_len = |v: &[f64]| {
        if v.len() != state_count {
            Err(LpdError::VectorLength {
                node: name.clone(),
                expected: state_count,
                found: v.len(),
            })
        } else {
            Ok(())
        }
    };

    let mut values = Vec::with_capacity(rows * state_count);
    match &node.distribution {
        LocalDistribution::Relation => return Err(LpdError::NotAChanceNode { node: name }),
        LocalDistribution::Table(table) => {
            check_table_parents(&name, table, parents)?;
            let lookup: HashMap<&[String], &[f64]> = table
                .rows
                .iter()
                .map(|r| (r.config.as_slice(), r.probs.as_slice()))
                .collect();
            for cfg in Configurations::new(&cards) {
                let key: Vec<String> = cfg
                    .iter()
                    .zip(parents)
                    .map(|(&s, p)| p.states[s].clone())
                    .collect();
                let probs = lookup.get(key.as_slice()).ok_or_else(|| LpdError::RowCoverage {
                    node: name.clone(),
                    config: key.join(", "),
                })?;
                check_len(probs)?;
                values.extend_from_slice(probs);
            }
        }
        LocalDistribution::Rules(rules) => {
            let tally = RuleTally::new(parents);
            let default = rules.default.as_deref();
            let pick = |chosen: Option<usize>| -> Result<&[f64], LpdError> {
                let probs = match chosen {
                    Some(i) => rules.rules[i].probs.as_slice(),
                    None => default.ok_or_else(|| LpdError::MissingElse { node: name.clone() })?,
                };
                check_len(probs)?;
                Ok(probs)
            };
            match tally.radix() {
                Some((radix, space)) if space <= DENSE_MEMO_LIMIT => {
                    // Odometer over parent states with incrementally maintained counts and key.
                    const UNSET: u32 = u32::MAX;
                    let mut memo = vec![UNSET; space];
                    let mut counts = vec![0u32; tally.width];
                    let mut key = 0usize;
                    for &slot in &tally.slot {
                        counts[slot] += 1;
                        key += radix[slot];
                    }
                    let mut cfg = vec![0usize; cards.len()];
                    for _ in 0..rows {
                        if memo[key] == UNSET {
                            memo[key] = tally.select(rules, &counts).map_or(u32::MAX - 1, |i| i as u32);
                        }
                        let chosen = match memo[key] {
                            c if c == u32::MAX - 1 => None,
                            c => Some(c as usize),
                        };
                        values.extend_from_slice(pick(chosen)?);
                        for p in (0..cards.len()).rev() {
                            let from = tally.slot[p] + cfg[p];
                            counts[from] -= 1;
                            key -= radix[from];
                            cfg[p] += 1;
                            if cfg[p] < cards[p] {
                                counts[from + 1] += 1;
                                key += radix[from + 1];
                                break;
                            }
                            cfg[p] = 0;
                            counts[tally.slot[p]] += 1;
                            key += radix[tally.slot[p]];
                        }
                    }
                }
                _ => {
                    let mut memo: HashMap<Vec<u32>, Option<usize>> = HashMap::new();
                    let mut counts = vec![0u32; tally.width];
                    for cfg in Configurations::new(&cards) {
                        counts.iter_mut().for_each(|c| *c = 0);
                        for (p, &s) in cfg.iter().enumerate() {
                            counts[tally.slot[p] + s] += 1;
                        }
                        let chosen = match memo.get(&counts) {
                            Some(&c) => c,
                            None => {
                                let c = tally.select(rules, &counts);
                                memo.insert(counts.clone(), c);
                                c
                            }
                        };
                        values.extend_from_slice(pick(chosen)?);
                    }
                }
            }
        }
    }
    Ok(Cpt {
        parent_cards: cards,
        state_count,
        values,
    })
}

fn check_table_parents(name: &str, table: &Table, parents: &[GroundParent<'_>]) -> Result<(), LpdError> {
    if table.parents.len() != parents.len() {
        return Err(LpdError::ArityMismatch {
            node: name.to_string(),
            expected: table.parents.len(),
            found: parents.len(),
        });
    }
    for (declared, grounded) in table.parents.iter().zip(parents) {
        if declared.functor != grounded.instance.functor {
            return Err(LpdError::ParentMismatch {
                node: name.to_string(),
                expected: declared.to_string(),
                found: grounded.instance.to_string(),
            });
        }
    }
    Ok(())
}

const DENSE_MEMO_LIMIT: usize = 1 << 22;

/// Per-(functor, state) counters for fast rule evaluation during synthesis.
struct RuleTally<'a> {
    /// Counter offset of each grounded parent's functor group.
    slot: Vec<usize>,
    width: usize,
    groups: HashMap<&'a str, (usize, &'a [String], u32)>,
}

impl<'a> RuleTally<'a> {
    fn new(parents: &[GroundParent<'a>]) -> Self {
        let mut groups: HashMap<&'a str, (usize, &'a [String], u32)> = HashMap::new();
        let mut width = 0;
        let mut slot = Vec::with_capacity(parents.len());
        for p in parents {
            let entry = groups.entry(p.instance.functor.as_str()).or_insert_with(|| {
                let e = (width, p.states, 0);
                width += p.states.len();
                e
            });
            entry.2 += 1;
            slot.push(entry.0);
        }
        RuleTally { slot, width, groups }
    }

    /// Mixed-radix weights turning a count vector into a dense key, and the key space size.
    fn radix(&self) -> Option<(Vec<usize>, usize)> {
        let mut radix = vec![0; self.width];
        let mut space = 1usize;
        for &(offset, states, total) in self.groups.values() {
            for i in 0..states.len() {
                radix[offset + i] = space;
                space = space.checked_mul(total as usize + 1)?;
            }
        }
        Some((radix, space))
    }

    fn count(&self, counts: &[u32], functor: &str, state: &str) -> (u32, u32) {
        match self.groups.get(functor) {
            Some(&(offset, states, total)) => {
                let n = states
                    .iter()
                    .position(|s| s == state)
                    .map_or(0, |i| counts[offset + i]);
                (n, total)
            }
            None => (0, 0),
        }
    }

    fn holds(&self, c: &Condition, counts: &[u32]) -> bool {
        match c {
            Condition::Any { functor, state } => self.count(counts, functor, state).0 > 0,
            Condition::All { functor, state } => {
                let (n, total) = self.count(counts, functor, state);
                n == total
            }
            Condition::CountAtLeast { functor, state, min } => self.count(counts, functor, state).0 >= *min,
            Condition::And(cs) => cs.iter().all(|c| self.holds(c, counts)),
            Condition::Or(cs) => cs.iter().any(|c| self.holds(c, counts)),
        }
    }

    fn select(&self, rules: &RuleList, counts: &[u32]) -> Option<usize> {
        rules.rules.iter().position(|r| self.holds(&r.condition, counts))
    }
}

fn check_vector(v: &[f64], state_count: usize, out: &mut Vec<ViolationKind>) {
    if v.len() != state_count {
        out.push(ViolationKind::VectorLength {
            expected: state_count,
            found: v.len(),
        });
    }
    if let Some(&neg) = v.iter().find(|&&p| p < 0.0 || p.is_nan()) {
        out.push(ViolationKind::NegativeProbability { value: neg });
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        out.push(ViolationKind::RowSum { sum });
    }
}

/// Shape and normalization checks for one distribution.
///
/// `parent_domains` aligns with the distribution's declared parents; `None` marks a parent whose
/// state space is unknown, for which state-name checks are skipped.
pub fn validate_distribution(
    dist: &LocalDistribution,
    state_count: usize,
    parent_domains: &[Option<&StateSpace>],
) -> Vec<ViolationKind> {
    let mut out = Vec::new();
    match dist {
        LocalDistribution::Relation => {}
        LocalDistribution::Table(table) => {
            let mut seen: HashSet<&[String]> = HashSet::new();
            let mut well_formed = true;
            for row in &table.rows {
                check_vector(&row.probs, state_count, &mut out);
                if row.config.len() != table.parents.len() {
                    out.push(ViolationKind::RowArity {
                        expected: table.parents.len(),
                        found: row.config.len(),
                    });
                    well_formed = false;
                    continue;
                }
                for ((state, parent), domain) in row.config.iter().zip(&table.parents).zip(parent_domains) {
                    match domain {
                        Some(space) if space.index_of(state).is_none() => {
                            out.push(ViolationKind::UnknownRowState {
                                parent: parent.to_string(),
                                state: state.clone(),
                            });
                            well_formed = false;
                        }
                        None => well_formed = false,
                        _ => {}
                    }
                }
                if !seen.insert(row.config.as_slice()) {
                    out.push(ViolationKind::DuplicateRow(row.config.clone()));
                }
            }
            if well_formed && parent_domains.len() == table.parents.len() {
                let cards: Vec<usize> = parent_domains
                    .iter()
                    .map(|d| d.map_or(0, |s| s.states.len()))
                    .collect();
                let rows: usize = cards.iter().product();
                if rows <= MAX_CPT_ROWS {
                    for cfg in Configurations::new(&cards) {
                        let key: Vec<String> = cfg
                            .iter()
                            .zip(parent_domains)
                            .map(|(&s, d)| d.expect("checked above").states[s].clone())
                            .collect();
                        if !seen.contains(key.as_slice()) {
                            out.push(ViolationKind::MissingRow(key));
                        }
                    }
                }
            }
        }
        LocalDistribution::Rules(rules) => {
            for rule in &rules.rules {
                check_vector(&rule.probs, state_count, &mut out);
                for (functor, state) in rule.condition.atoms() {
                    let positions: Vec<usize> = rules
                        .parents
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.functor == functor)
                        .map(|(i, _)| i)
                        .collect();
                    if positions.is_empty() {
                        out.push(ViolationKind::ConditionNonParent(functor.to_string()));
                        continue;
                    }
                    let unknown = positions
                        .iter()
                        .filter_map(|&i| parent_domains.get(i).copied().flatten())
                        .any(|space| space.index_of(state).is_none());
                    if unknown {
                        out.push(ViolationKind::UnknownConditionState {
                            functor: functor.to_string(),
                            state: state.to_string(),
                        });
                    }
                }
            }
            match &rules.default {
                Some(v) => check_vector(v, state_count, &mut out),
                None => out.push(ViolationKind::MissingElse),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeRef, Rule, TableRow};

    fn any(f: &str, s: &str) -> Condition {
        Condition::Any {
            functor: f.into(),
            state: s.into(),
        }
    }

    fn all(f: &str, s: &str) -> Condition {
        Condition::All {
            functor: f.into(),
            state: s.into(),
        }
    }

    const V1: [f64; 3] = [0.9, 0.08, 0.02];
    const V0: [f64; 3] = [0.1, 0.3, 0.6];

    fn thick_and_large() -> RuleList {
        RuleList {
            parents: vec![NodeRef::new("Thickness", ["s"]), NodeRef::new("EstimatedSize", ["s"])],
            rules: vec![Rule {
                condition: Condition::And(vec![any("Thickness", "Thick"), any("EstimatedSize", "Large")]),
                probs: V1.to_vec(),
            }],
            default: Some(V0.to_vec()),
        }
    }

    #[test]
    fn first_match_on_two_spill_configuration() {
        let config = [
            ("Thickness", "Thick"),
            ("EstimatedSize", "Large"),
            ("Thickness", "Thin"),
            ("EstimatedSize", "Small"),
            ("SpreadSpeed", "Fast"),
            ("SpreadSpeed", "Fast"),
        ];
        assert_eq!(match_rule(&thick_and_large(), &config), Some(&V1[..]));
    }

    #[test]
    fn vacuous_any_is_false() {
        assert_eq!(match_rule(&thick_and_large(), &[]), Some(&V0[..]));
    }

    #[test]
    fn vacuous_all_is_true() {
        let rules = RuleList {
            parents: vec![NodeRef::new("Thickness", ["s"])],
            rules: vec![Rule {
                condition: all("Thickness", "Thick"),
                probs: V1.to_vec(),
            }],
            default: Some(V0.to_vec()),
        };
        assert_eq!(match_rule(&rules, &[]), Some(&V1[..]));
        assert_eq!(match_rule(&rules, &[("Thickness", "Thin")]), Some(&V0[..]));
    }

    #[test]
    fn count_atom() {
        let c = Condition::CountAtLeast {
            functor: "T".into(),
            state: "a".into(),
            min: 2,
        };
        assert!(!condition_holds(&c, &[("T", "a"), ("T", "b")]));
        assert!(condition_holds(&c, &[("T", "a"), ("T", "a")]));
        let zero = Condition::CountAtLeast {
            functor: "T".into(),
            state: "a".into(),
            min: 0,
        };
        assert!(condition_holds(&zero, &[]));
    }

    fn tf() -> Vec<String> {
        vec!["t".into(), "f".into()]
    }

    fn spread_table() -> ResidentNode {
        let ws = ["Clement", "Inclement"];
        let cs = ["Strong", "Weak"];
        let mut rows = Vec::new();
        let mut p = 0.1;
        for w in ws {
            for c in cs {
                rows.push(TableRow {
                    config: vec![w.into(), c.into()],
                    probs: vec![p, 1.0 - p],
                });
                p += 0.2;
            }
        }
        ResidentNode {
            node: NodeRef::new("SpreadSpeed", ["s"]),
            distribution: LocalDistribution::Table(Table {
                parents: vec![NodeRef::new("Weather", ["r"]), NodeRef::new("Currents", ["r"])],
                rows,
            }),
        }
    }

    #[test]
    fn table_passthrough() {
        let w = RvInstance::new("Weather", ["region_1"]);
        let c = RvInstance::new("Currents", ["region_1"]);
        let ws = vec!["Clement".to_string(), "Inclement".to_string()];
        let cs = vec!["Strong".to_string(), "Weak".to_string()];
        let node = spread_table();
        let cpt = synthesize_cpt(
            &node,
            &[
                GroundParent { instance: &w, states: &ws },
                GroundParent { instance: &c, states: &cs },
            ],
            2,
        )
        .unwrap();
        assert_eq!(cpt.row_count(), 4);
        let LocalDistribution::Table(t) = &node.distribution else { unreachable!() };
        for (i, row) in t.rows.iter().enumerate() {
            assert_eq!(cpt.row(i), row.probs.as_slice());
        }
    }

    #[test]
    fn table_arity_mismatch() {
        let w = RvInstance::new("Weather", ["region_1"]);
        let states = tf();
        let gp = GroundParent { instance: &w, states: &states };
        let err = synthesize_cpt(&spread_table(), &[gp, gp, gp], 2).unwrap_err();
        assert!(matches!(err, LpdError::ArityMismatch { expected: 2, found: 3, .. }));
    }

    #[test]
    fn table_row_coverage() {
        let mut node = spread_table();
        if let LocalDistribution::Table(t) = &mut node.distribution {
            t.rows.pop();
        }
        let w = RvInstance::new("Weather", ["region_1"]);
        let c = RvInstance::new("Currents", ["region_1"]);
        let ws = vec!["Clement".to_string(), "Inclement".to_string()];
        let cs = vec!["Strong".to_string(), "Weak".to_string()];
        let err = synthesize_cpt(
            &node,
            &[
                GroundParent { instance: &w, states: &ws },
                GroundParent { instance: &c, states: &cs },
            ],
            2,
        )
        .unwrap_err();
        assert!(matches!(err, LpdError::RowCoverage { .. }));
    }

    #[test]
    fn validate_well_formed_table() {
        let ws = StateSpace::new("W", ["Clement", "Inclement"]);
        let cs = StateSpace::new("C", ["Strong", "Weak"]);
        let v = validate_distribution(&spread_table().distribution, 2, &[Some(&ws), Some(&cs)]);
        assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn validate_missing_else_and_length() {
        let mut rules = thick_and_large();
        rules.default = None;
        let v = validate_distribution(&LocalDistribution::Rules(rules), 3, &[None, None]);
        assert_eq!(v, vec![ViolationKind::MissingElse]);

        let v = validate_distribution(&LocalDistribution::Table(Table::prior(vec![0.5, 0.5])), 3, &[]);
        assert_eq!(v, vec![ViolationKind::VectorLength { expected: 3, found: 2 }]);
    }

    #[test]
    fn validate_condition_non_parent() {
        let mut rules = thick_and_large();
        rules.parents.pop();
        let v = validate_distribution(&LocalDistribution::Rules(rules), 3, &[None]);
        assert_eq!(v, vec![ViolationKind::ConditionNonParent("EstimatedSize".into())]);
    }

    #[test]
    fn fast_path_agrees_with_match_rule() {
        let rules = RuleList {
            parents: vec![NodeRef::new("A", ["x"]), NodeRef::new("B", ["x"])],
            rules: vec![
                Rule {
                    condition: Condition::And(vec![
                        Condition::CountAtLeast {
                            functor: "A".into(),
                            state: "t".into(),
                            min: 2,
                        },
                        all("B", "f"),
                    ]),
                    probs: vec![0.9, 0.1],
                },
                Rule {
                    condition: Condition::Or(vec![any("A", "t"), all("B", "t")]),
                    probs: vec![0.6, 0.4],
                },
            ],
            default: Some(vec![0.2, 0.8]),
        };
        let node = ResidentNode {
            node: NodeRef::new("C", ["y"]),
            distribution: LocalDistribution::Rules(rules.clone()),
        };
        let insts: Vec<RvInstance> = ["A", "B", "A", "B", "A"]
            .iter()
            .enumerate()
            .map(|(i, f)| RvInstance::new(*f, [format!("e{}", i)]))
            .collect();
        let states = tf();
        let parents: Vec<GroundParent> = insts.iter().map(|i| GroundParent { instance: i, states: &states }).collect();
        let cpt = synthesize_cpt(&node, &parents, 2).unwrap();
        for (row, cfg) in Configurations::new(&[2; 5]).enumerate() {
            let pairs: Vec<(&str, &str)> = cfg
                .iter()
                .zip(&insts)
                .map(|(&s, i)| (i.functor.as_str(), states[s].as_str()))
                .collect();
            assert_eq!(cpt.row(row), match_rule(&rules, &pairs).unwrap());
        }
    }

    #[test]
    fn configurations_last_fastest() {
        let v: Vec<_> = Configurations::new(&[2, 3]).collect();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], vec![0, 0]);
        assert_eq!(v[1], vec![0, 1]);
        assert_eq!(v[3], vec![1, 0]);
        assert_eq!(Configurations::new(&[]).count(), 1);
    }
}
