//! Every single-agent, single-atom model up to a state bound.
//!
//! Plausibility orders are enumerated only on the epistemic class of their
//! evaluation state and are the identity elsewhere: no truth condition looks
//! at `<=_w` outside `[w]`, and cutting every order down this way keeps
//! uniformity and local connectedness intact, so this covers all models up
//! to truth-equivalence.

use std::collections::BTreeMap;

use plausikit::model::Relation;
use plausikit::{Model, StateSet};

/// Which orders to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orders {
    Any,
    Uniform,
    UniformConnected,
}

/// All set partitions of `0..n`, as class labels in restricted-growth form.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == n {
            out.push(labels.clone());
            return;
        }
        let next = labels.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            labels.push(l);
            go(k + 1, n, labels, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// All preorders on `0..k` as adjacency matrices, optionally only total ones.
pub fn preorders(k: usize, total: bool) -> Vec<Vec<Vec<bool>>> {
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|(x, y)| x != y).collect();
    let mut out = Vec::new();
    for bits in 0u32..(1 << cells.len()) {
        let mut adj = vec![vec![false; k]; k];
        for (x, row) in adj.iter_mut().enumerate() {
            row[x] = true;
        }
        for (b, &(x, y)) in cells.iter().enumerate() {
            adj[x][y] = bits >> b & 1 == 1;
        }
        let transitive = (0..k).all(|x| (0..k).all(|y| (0..k).all(|z| !(adj[x][y] && adj[y][z]) || adj[x][z])));
        let connected = (0..k).all(|x| (0..k).all(|y| adj[x][y] || adj[y][x]));
        if transitive && (!total || connected) {
            out.push(adj);
        }
    }
    out
}

fn classes(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    (0..count).map(|c| (0..labels.len()).filter(|&w| labels[w] == c).collect()).collect()
}

/// Every model with `1..=max_states` states, agent `a` and atom `p`, whose
/// orders match `orders`.
pub fn models(max_states: usize, orders: Orders) -> Vec<Model> {
    (1..=max_states).flat_map(|n| models_of_size(n, &["p"], orders)).collect()
}

/// Every model with exactly `n` states, agent `a` and the given atoms.
pub fn models_of_size(n: usize, atoms: &[&str], orders: Orders) -> Vec<Model> {
    let mut out = Vec::new();
    visit_models(n, atoms, orders, |m| out.push(m));
    out
}

/// Calls `visit` on each model [`models_of_size`] would return, in the same
/// order, without holding them all.
pub fn visit_models(n: usize, atoms: &[&str], orders: Orders, mut visit: impl FnMut(Model)) {
    let states: Vec<String> = (0..n).map(|k| format!("w{k}")).collect();
    for labels in partitions(n) {
        let classes = classes(&labels);
        let total = orders == Orders::UniformConnected;
        // one order slot per class (uniform) or per state
        let slots: Vec<&Vec<usize>> = match orders {
            Orders::Any => (0..n).map(|w| &classes[labels[w]]).collect(),
            _ => classes.iter().collect(),
        };
        let choices: Vec<Vec<Vec<Vec<bool>>>> = slots.iter().map(|c| preorders(c.len(), total)).collect();
        let mut pick = vec![0; slots.len()];
        loop {
            let order_of = |slot: usize| {
                let class = slots[slot];
                let adj = &choices[slot][pick[slot]];
                Relation::from_pairs(
                    n,
                    (0..class.len())
                        .flat_map(|x| (0..class.len()).map(move |y| (x, y)))
                        .filter(|&(x, y)| adj[x][y])
                        .map(|(x, y)| (class[x], class[y]))
                        .chain((0..n).map(|x| (x, x))),
                )
            };
            let plaus: Vec<Relation> = (0..n)
                .map(|w| order_of(if orders == Orders::Any { w } else { labels[w] }))
                .collect();
            let epist = Relation::from_pairs(
                n,
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| labels[x] == labels[y]),
            );
            for val in 0u64..(1 << (n * atoms.len())) {
                let valuation: BTreeMap<String, StateSet> = atoms
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        let mut ext = StateSet::with_capacity(n);
                        for w in 0..n {
                            if val >> (k * n + w) & 1 == 1 {
                                ext.insert(w);
                            }
                        }
                        (p.to_string(), ext)
                    })
                    .collect();
                let m = Model::from_parts(states.clone(), vec!["a".into()], vec![epist.clone()], vec![plaus.clone()], valuation)
                    .expect("enumerated models are valid");
                visit(m);
            }
            // odometer over the slot choices
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        assert_eq!(partitions(3).len(), 5);
        assert_eq!(partitions(4).len(), 15);
        assert_eq!(preorders(3, false).len(), 29);
        assert_eq!(preorders(3, true).len(), 13);
        assert_eq!(preorders(2, false).len(), 4);
        assert_eq!(preorders(2, true).len(), 3);
    }

    #[test]
    fn model_counts_and_constraints() {
        // uniform: n=1: 1 order; n=2: 4 + 1; n=3: 29 + 3*4 + 1. Times 2^n valuations.
        let uniform = models(3, Orders::Uniform);
        assert_eq!(uniform.len(), 2 + 5 * 4 + 42 * 8);
        assert!(uniform.iter().all(|m| m.is_uniform()));
        let connected = models(3, Orders::UniformConnected);
        assert_eq!(connected.len(), 2 + 4 * 4 + (13 + 3 * 3 + 1) * 8);
        assert!(connected.iter().all(|m| m.is_uniform() && m.is_locally_connected()));
        let any = models(2, Orders::Any);
        assert_eq!(any.len(), 2 + (16 + 1) * 4);
    }
}
