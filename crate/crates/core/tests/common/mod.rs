#![allow(dead_code)]

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use plausikit::model::Relation;
use plausikit::{Formula, Fragment, Model, Op};
use proptest::prelude::*;

pub const ATOMS: [&str; 2] = ["p", "q"];

#[derive(Clone, Copy, Debug, Default)]
pub struct Shape {
    pub max_states: usize,
    pub agents: usize,
    pub uniform: bool,
    pub connected: bool,
}

fn closure(n: usize, mut adj: Vec<Vec<bool>>) -> Relation {
    for x in 0..n {
        adj[x][x] = true;
    }
    for k in 0..n {
        for x in 0..n {
            if adj[x][k] {
                for y in 0..n {
                    if adj[k][y] {
                        adj[x][y] = true;
                    }
                }
            }
        }
    }
    Relation::from_pairs(n, (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| adj[x][y]))
}

#[derive(Clone, Debug)]
struct Raw {
    n: usize,
    classes: Vec<Vec<usize>>,
    // per agent, per state: rank per state and extra edge bits
    ranks: Vec<Vec<Vec<u8>>>,
    edges: Vec<Vec<Vec<bool>>>,
    valuation: Vec<Vec<bool>>,
}

fn build(shape: Shape, raw: Raw) -> Model {
    let n = raw.n;
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let agents: Vec<String> = (0..shape.agents).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut epist = Vec::new();
    let mut plaus = Vec::new();
    for i in 0..shape.agents {
        let label = &raw.classes[i];
        epist.push(Relation::from_pairs(
            n,
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| label[x] == label[y]),
        ));
        let order_for = |w: usize| {
            let rank = &raw.ranks[i][w];
            let mut adj = vec![vec![false; n]; n];
            for x in 0..n {
                for y in 0..n {
                    if shape.connected {
                        adj[x][y] = rank[x] <= rank[y];
                    } else {
                        adj[x][y] = rank[x] <= rank[y] && raw.edges[i][w][x * n + y];
                    }
                }
            }
            closure(n, adj)
        };
        let per_state: Vec<Relation> = (0..n)
            .map(|w| {
                if shape.uniform {
                    let rep = (0..n).find(|&v| label[v] == label[w]).unwrap();
                    order_for(rep)
                } else {
                    order_for(w)
                }
            })
            .collect();
        plaus.push(per_state);
    }
    let mut valuation = BTreeMap::new();
    for (k, p) in ATOMS.iter().enumerate() {
        let mut set = FixedBitSet::with_capacity(n);
        for w in 0..n {
            if raw.valuation[k][w] {
                set.insert(w);
            }
        }
        valuation.insert(p.to_string(), set);
    }
    Model::from_parts(states, agents, epist, plaus, valuation).expect("generated model is valid")
}

pub fn model(shape: Shape) -> impl Strategy<Value = Model> {
    (1..=shape.max_states)
        .prop_flat_map(move |n| {
            let a = shape.agents;
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(0..n, n), a),
                prop::collection::vec(prop::collection::vec(prop::collection::vec(0u8..3, n), n), a),
                prop::collection::vec(prop::collection::vec(prop::collection::vec(any::<bool>(), n * n), n), a),
                prop::collection::vec(prop::collection::vec(any::<bool>(), n), ATOMS.len()),
            )
        })
        .prop_map(move |(n, classes, ranks, edges, valuation)| {
            build(shape, Raw { n, classes, ranks, edges, valuation })
        })
}

pub fn any_model() -> impl Strategy<Value = Model> {
    model(Shape { max_states: 4, agents: 2, ..Shape::default() })
}

pub fn formula(fragment: Fragment, agents: usize, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
    ];
    let names: Vec<String> = (0..agents).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        let agent = prop::sample::select(names.clone());
        let mut options: Vec<BoxedStrategy<Formula>> = vec![
            inner.clone().prop_map(Formula::not).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)).boxed(),
        ];
        if fragment.contains(Op::K) {
            options.push((agent.clone(), inner.clone()).prop_map(|(i, a)| Formula::know(i, a)).boxed());
        }
        if fragment.contains(Op::Bplus) {
            options.push((agent.clone(), inner.clone()).prop_map(|(i, a)| Formula::safe(i, a)).boxed());
        }
        if fragment.contains(Op::Gt) {
            options.push((agent.clone(), inner.clone()).prop_map(|(i, a)| Formula::gt(i, a)).boxed());
        }
        if fragment.contains(Op::Bc) {
            options.push(
                (agent.clone(), inner.clone(), inner.clone()).prop_map(|(i, c, a)| Formula::cond(i, c, a)).boxed(),
            );
        }
        if fragment.contains(Op::Ann) {
            options.push((inner.clone(), inner.clone()).prop_map(|(p, a)| Formula::announce(p, a)).boxed());
        }
        if fragment.contains(Op::Up) {
            options.push((inner.clone(), inner.clone()).prop_map(|(p, a)| Formula::upgrade(p, a)).boxed());
        }
        prop::strategy::Union::new(options)
    })
    .boxed()
}

pub fn full() -> Fragment {
    Fragment::of(&Op::ALL)
}

pub fn static_full() -> Fragment {
    Fragment::of(&[Op::K, Op::Bc, Op::Bplus, Op::Gt])
}
