//! Exact posterior marginals by variable elimination.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::BbnNetwork;

use super::factor::Factor;
use super::{BbnError, Compiled};

#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub node: String,
    pub states: Vec<String>,
    pub probs: Vec<f64>,
}

impl Marginal {
    pub fn prob(&self, state: &str) -> Option<f64> {
        self.states.iter().position(|s| s == state).map(|i| self.probs[i])
    }
}

/// Posterior distribution of `query` given `evidence` (node id to state
/// label). Hidden nodes are eliminated in min-fill order, ties broken by id.
pub fn infer_marginal(
    net: &BbnNetwork,
    query: &str,
    evidence: &BTreeMap<String, String>,
) -> Result<Marginal, BbnError> {
    run(net, query, evidence, None)
}

/// As [`infer_marginal`], eliminating hidden nodes in the given order. The
/// order must list every node that is neither the query nor observed.
pub fn infer_marginal_with_order(
    net: &BbnNetwork,
    query: &str,
    evidence: &BTreeMap<String, String>,
    order: &[&str],
) -> Result<Marginal, BbnError> {
    run(net, query, evidence, Some(order))
}

fn run(
    net: &BbnNetwork,
    query: &str,
    evidence: &BTreeMap<String, String>,
    order: Option<&[&str]>,
) -> Result<Marginal, BbnError> {
    let c = Compiled::new(net)?;
    let q = c.index(query)?;
    let mut observed = BTreeMap::new();
    for (node, state) in evidence {
        let i = c.index(node)?;
        observed.insert(i, c.state(i, state)?);
    }

    let mut factors: Vec<Factor> = (0..c.ids.len())
        .map(|i| {
            let mut scope = c.parents[i].clone();
            scope.push(i);
            let cards: Vec<usize> = scope.iter().map(|&v| c.states[v].len()).collect();
            let k = c.states[i].len();
            Factor::from_fn(&scope, &cards, |a| {
                let (own, parents) = a.split_last().unwrap();
                let row = parents.iter().zip(&cards).fold(0, |r, (s, n)| r * n + s);
                c.cpts[i][row * k + own]
            })
        })
        .collect();
    for f in &mut factors {
        for (&v, &s) in &observed {
            *f = f.reduce(v, s);
        }
    }

    let query_observed = observed.contains_key(&q);
    let hidden: BTreeSet<usize> = (0..c.ids.len())
        .filter(|v| !observed.contains_key(v) && *v != q)
        .collect();
    let order: Vec<usize> = match order {
        Some(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for n in names {
                idx.push(c.index(n)?);
            }
            let as_set: BTreeSet<usize> = idx.iter().copied().collect();
            if as_set != hidden || idx.len() != hidden.len() {
                return Err(BbnError::InvalidOrder);
            }
            idx
        }
        None => min_fill_order(&c, &factors, &hidden),
    };

    for v in order {
        let (with, without): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = without;
        let merged = with.iter().fold(Factor::scalar(1.0), |acc, f| acc.product(f));
        factors.push(merged.sum_out(v));
    }
    let result = factors.iter().fold(Factor::scalar(1.0), |acc, f| acc.product(f));

    let z: f64 = result.values.iter().sum();
    if z.is_nan() || z <= 0.0 {
        return Err(BbnError::ZeroProbabilityEvidence);
    }
    let probs = if query_observed {
        let mut p = vec![0.0; c.states[q].len()];
        p[observed[&q]] = 1.0;
        p
    } else {
        result.values.iter().map(|v| v / z).collect()
    };
    Ok(Marginal { node: query.to_string(), states: c.states[q].clone(), probs })
}

/// Greedy min-fill ordering over the factor interaction graph.
fn min_fill_order(c: &Compiled, factors: &[Factor], hidden: &BTreeSet<usize>) -> Vec<usize> {
    let n = c.ids.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for f in factors {
        for &a in &f.vars {
            for &b in &f.vars {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    let mut left: BTreeSet<usize> = hidden.clone();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let fill = |v: usize| {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        missing += 1;
                    }
                }
            }
            missing
        };
        let v = *left
            .iter()
            .min_by(|&&a, &&b| fill(a).cmp(&fill(b)).then_with(|| c.ids[a].cmp(&c.ids[b])))
            .unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        left.remove(&v);
        order.push(v);
    }
    order
}
