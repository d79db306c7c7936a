#![allow(dead_code)]

use std::collections::BTreeMap;

use mebn::dsl;
use mebn::grounding::{NodeSpec, Ssbn};
use mebn::lpd::Cpt;
use mebn::model::{
    Condition, ContextNode, FindingSet, InputNode, LocalDistribution, MFrag, MTheory, NodeRef, OrdinaryVariable,
    Query, Range, ResidentNode, Rule, RuleList, Signature, StateSpace, Table, TableRow,
};
use mebn::RvInstance;
use proptest::prelude::*;

/// A finite stream of random choices, replayed cyclically.
pub struct Tape<'a> {
    data: &'a [u32],
    pos: usize,
}

impl<'a> Tape<'a> {
    pub fn new(data: &'a [u32]) -> Self {
        assert!(!data.is_empty());
        Tape { data, pos: 0 }
    }

    /// A value in `0..n`.
    pub fn pick(&mut self, n: usize) -> usize {
        let v = self.data[self.pos % self.data.len()] as usize;
        self.pos += 1;
        v % n.max(1)
    }

    pub fn coin(&mut self) -> bool {
        self.pick(2) == 0
    }

    /// A probability vector of length `n` with all entries positive.
    pub fn probs(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n).map(|_| 1.0 + self.pick(9) as f64).collect();
        normalize(w)
    }

    /// A probability vector of length `n` that may contain zeros.
    pub fn sparse_probs(&mut self, n: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n).map(|_| self.pick(10) as f64).collect();
        if w.iter().all(|x| *x == 0.0) {
            w[self.pick(n)] = 1.0;
        }
        normalize(w)
    }
}

fn normalize(w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Proptest settings without on-disk regression files.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn tape() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 32..128)
}

/// A deterministic tape for seed `seed`, for use outside proptest.
pub fn seeded_tape(seed: u64, len: usize) -> Vec<u32> {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    (0..len)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 32) as u32
        })
        .collect()
}

fn configurations(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in cards {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..c).map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn condition(t: &mut Tape, atoms: &[(String, Vec<String>)], depth: usize) -> Condition {
    if depth == 0 || t.pick(3) != 0 {
        let (functor, states) = &atoms[t.pick(atoms.len())];
        let state = states[t.pick(states.len())].clone();
        let functor = functor.clone();
        return match t.pick(3) {
            0 => Condition::Any { functor, state },
            1 => Condition::All { functor, state },
            _ => Condition::CountAtLeast {
                functor,
                state,
                min: t.pick(4) as u32,
            },
        };
    }
    let children = (0..2 + t.pick(2)).map(|_| condition(t, atoms, depth - 1)).collect();
    if t.coin() {
        Condition::And(children)
    } else {
        Condition::Or(children)
    }
}

/// A random, valid MTheory.
///
/// Functors `F0..Fn` each take one argument and live in their own MFrag. Parents are earlier
/// functors: sharing the resident's ordinary variable, reached through the `Rel` relation, or
/// bound by a free ordinary variable. Nodes whose parent count depends on the entity pool use
/// rules; the rest use priors, tables or rules.
pub fn generated_model(data: &[u32]) -> MTheory {
    let mut t = Tape::new(data);
    let mut theory = MTheory::default();
    let n_types = 1 + t.pick(2);
    for i in 0..n_types {
        theory.entity_types.push(format!("Ent{}", i));
    }
    let n_spaces = 1 + t.pick(3);
    for i in 0..n_spaces {
        let n = 2 + t.pick(2);
        theory
            .state_spaces
            .push(StateSpace::new(format!("Sp{}", i), (0..n).map(|j| format!("s{}", j))));
    }
    let relation = n_types == 2 && t.coin();
    if relation {
        theory.signatures.push(Signature {
            functor: "Rel".into(),
            arg_types: vec!["Ent1".into()],
            range: Range::Entity("Ent0".into()),
        });
        let mut m = MFrag::new("MRel");
        m.ovars.push(OrdinaryVariable::new("y", "Ent1"));
        m.residents.push(ResidentNode {
            node: NodeRef::new("Rel", ["y"]),
            distribution: LocalDistribution::Relation,
        });
        theory.mfrags.push(m);
    }

    let n_fun = 1 + t.pick(5);
    let mut fun: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_fun {
        let ty = t.pick(n_types);
        let space = t.pick(n_spaces);
        fun.push((ty, space));
        theory.signatures.push(Signature {
            functor: format!("F{}", i),
            arg_types: vec![format!("Ent{}", ty)],
            range: Range::States(format!("Sp{}", space)),
        });
    }

    let states_of = |space: usize| -> Vec<String> { theory_states(space, &theory) };
    let mut mfrags = Vec::new();
    for (i, &(ty, space)) in fun.iter().enumerate() {
        let mut m = MFrag::new(format!("M{}", i));
        m.ovars.push(OrdinaryVariable::new("x", format!("Ent{}", ty)));
        if t.pick(3) == 0 {
            m.context.push(ContextNode::IsA {
                var: "x".into(),
                ty: format!("Ent{}", ty),
            });
        }
        let mut parents = Vec::new();
        let mut bound = true;
        for (j, &(pty, _)) in fun.iter().enumerate().take(i) {
            if parents.len() == 3 || t.pick(3) != 0 {
                continue;
            }
            let arg = if pty == ty {
                "x".to_string()
            } else if relation && ty == 0 && pty == 1 {
                if m.ovar("y").is_none() {
                    m.ovars.push(OrdinaryVariable::new("y", "Ent1"));
                    m.context.push(ContextNode::Equals {
                        node: NodeRef::new("Rel", ["y"]),
                        value: "x".into(),
                    });
                }
                bound = false;
                "y".to_string()
            } else {
                let z = format!("z{}", j);
                m.ovars.push(OrdinaryVariable::new(z.clone(), format!("Ent{}", pty)));
                if t.coin() {
                    m.context.push(ContextNode::IsA {
                        var: z.clone(),
                        ty: format!("Ent{}", pty),
                    });
                }
                bound = false;
                z
            };
            let node = NodeRef::new(format!("F{}", j), [arg]);
            m.inputs.push(InputNode { node: node.clone() });
            parents.push((j, node));
        }

        let n_states = states_of(space).len();
        let distribution = if parents.is_empty() {
            LocalDistribution::Table(Table::prior(t.probs(n_states)))
        } else if bound && t.coin() {
            let cards: Vec<usize> = parents.iter().map(|(j, _)| states_of(fun[*j].1).len()).collect();
            let rows = configurations(&cards)
                .into_iter()
                .map(|config| TableRow {
                    config: config
                        .iter()
                        .zip(&parents)
                        .map(|(&s, (j, _))| states_of(fun[*j].1)[s].clone())
                        .collect(),
                    probs: t.probs(n_states),
                })
                .collect();
            LocalDistribution::Table(Table {
                parents: parents.iter().map(|(_, n)| n.clone()).collect(),
                rows,
            })
        } else {
            let atoms: Vec<(String, Vec<String>)> = parents
                .iter()
                .map(|(j, _)| (format!("F{}", j), states_of(fun[*j].1)))
                .collect();
            let rules = (0..t.pick(4))
                .map(|_| Rule {
                    condition: condition(&mut t, &atoms, 2),
                    probs: t.probs(n_states),
                })
                .collect();
            LocalDistribution::Rules(RuleList {
                parents: parents.iter().map(|(_, n)| n.clone()).collect(),
                rules,
                default: Some(t.probs(n_states)),
            })
        };
        m.residents.push(ResidentNode {
            node: NodeRef::new(format!("F{}", i), ["x"]),
            distribution,
        });
        mfrags.push(m);
    }
    theory.mfrags.extend(mfrags);
    theory
}

fn theory_states(space: usize, theory: &MTheory) -> Vec<String> {
    theory.state_spaces[space].states.clone()
}

/// Findings text for a generated model: one or two instances per entity type, a `Rel` value
/// for every `Ent1` instance, and evidence on some chance variables.
pub fn generated_findings(theory: &MTheory, data: &[u32]) -> String {
    let mut t = Tape::new(data);
    let mut out = String::new();
    let mut pool: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for ty in &theory.entity_types {
        let n = 1 + t.pick(2);
        for k in 0..n {
            let name = format!("{}_{}", ty.to_lowercase(), k);
            out.push_str(&format!("isA({}, {})=True\n", name, ty));
            pool.entry(ty.clone()).or_default().push(name);
        }
    }
    for sig in &theory.signatures {
        let instances = pool[&sig.arg_types[0]].clone();
        match &sig.range {
            Range::Entity(target) => {
                for inst in instances {
                    let targets = &pool[target];
                    out.push_str(&format!("{}({})={}\n", sig.functor, inst, targets[t.pick(targets.len())]));
                }
            }
            Range::States(space) => {
                let states = &theory.state_space(space).unwrap().states;
                for inst in instances {
                    if t.pick(3) == 0 {
                        out.push_str(&format!("{}({})={}\n", sig.functor, inst, states[t.pick(states.len())]));
                    }
                }
            }
        }
    }
    out
}

/// A query on the last chance functor of a generated model, on its first instance.
pub fn generated_query(theory: &MTheory) -> String {
    let sig = theory
        .signatures
        .iter()
        .rev()
        .find(|s| matches!(s.range, Range::States(_)))
        .expect("generated models have a chance functor");
    format!("{}({}_0)?", sig.functor, sig.arg_types[0].to_lowercase())
}

/// A random DAG with up to `max_nodes` nodes, random CPTs (possibly with zeros), random
/// evidence and a random query.
pub fn random_ssbn(data: &[u32], max_nodes: usize) -> Ssbn {
    let mut t = Tape::new(data);
    let n = 1 + t.pick(max_nodes);
    let names: Vec<RvInstance> = (0..n).map(|i| RvInstance::new(format!("N{}", i), ["e"])).collect();
    let mut cards = Vec::new();
    let mut specs = Vec::new();
    for i in 0..n {
        let card = 2 + t.pick(2);
        cards.push(card);
        let parents: Vec<usize> = (0..i).filter(|_| t.pick(3) == 0).take(3).collect();
        let pcards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
        let rows: usize = pcards.iter().product();
        let sparse = t.pick(4) == 0;
        let values: Vec<f64> = (0..rows)
            .flat_map(|_| if sparse { t.sparse_probs(card) } else { t.probs(card) })
            .collect();
        specs.push(NodeSpec {
            instance: names[i].clone(),
            states: (0..card).map(|s| format!("v{}", s)).collect(),
            parents: parents.iter().map(|&p| names[p].clone()).collect(),
            cpt: Cpt::new(pcards, card, values).unwrap(),
        });
    }
    let mut evidence = BTreeMap::new();
    for i in 0..n {
        if t.pick(4) == 0 {
            evidence.insert(names[i].clone(), format!("v{}", t.pick(cards[i])));
        }
    }
    let query = names[t.pick(n)].clone();
    Ssbn::new(specs, evidence, query).unwrap()
}

/// Parses a model, findings and query, panicking on any error.
pub fn load(model: &str, findings: &str, query: &str) -> (MTheory, FindingSet, Query) {
    let theory = dsl::parse_model(model).unwrap_or_else(|e| panic!("model: {}", e)).value;
    let findings = dsl::parse_findings(findings, &theory)
        .unwrap_or_else(|e| panic!("findings: {}", e))
        .value;
    let query = dsl::parse_query(query.trim(), &theory, findings.pool()).unwrap_or_else(|e| panic!("query: {}", e));
    (theory, findings, query)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Node names and `(parent, child)` name pairs, for structural comparison.
pub fn structure(ssbn: &Ssbn) -> (Vec<String>, Vec<(String, String)>) {
    let name = |i: usize| ssbn.node(i).instance.to_string();
    let mut nodes = ssbn.topological_order();
    nodes.sort();
    let mut edges: Vec<(String, String)> = ssbn.edges().into_iter().map(|(p, c)| (name(p), name(c))).collect();
    edges.sort();
    (nodes, edges)
}
