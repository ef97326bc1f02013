//! Seeded random models under structural constraints.

use std::collections::BTreeMap;

use plausikit::model::Relation;
use plausikit::{Model, StateSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// Parameters of [`generate`]. Read from JSON with camel-case keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GenSpec {
    /// Inclusive range of the state count.
    pub states: (usize, usize),
    pub agents: usize,
    pub atoms: usize,
    #[serde(default)]
    pub uniform: bool,
    #[serde(default)]
    pub locally_connected: bool,
    #[serde(default)]
    pub total_preorders: bool,
    #[serde(default)]
    pub discrete_preorders: bool,
    #[serde(default)]
    pub seed: u64,
}

impl GenSpec {
    pub fn new(states: (usize, usize), agents: usize, atoms: usize) -> Self {
        GenSpec {
            states,
            agents,
            atoms,
            uniform: false,
            locally_connected: false,
            total_preorders: false,
            discrete_preorders: false,
            seed: 0,
        }
    }

    pub fn uniform(mut self, on: bool) -> Self {
        self.uniform = on;
        self
    }

    pub fn locally_connected(mut self, on: bool) -> Self {
        self.locally_connected = on;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("state range {0}..={1} is empty")]
    EmptyRange(usize, usize),
    #[error("at least one agent is required")]
    NoAgents,
    #[error("at most {} atoms are supported", ATOM_NAMES.len())]
    TooManyAtoms,
    #[error("discrete preorders cannot also be {0} on more than one state")]
    Unsatisfiable(&'static str),
}

fn check(spec: &GenSpec) -> Result<(), GenError> {
    let (lo, hi) = spec.states;
    if lo == 0 || lo > hi {
        return Err(GenError::EmptyRange(lo, hi));
    }
    if spec.agents == 0 {
        return Err(GenError::NoAgents);
    }
    if spec.atoms > ATOM_NAMES.len() {
        return Err(GenError::TooManyAtoms);
    }
    if spec.discrete_preorders && hi > 1 {
        if spec.total_preorders {
            return Err(GenError::Unsatisfiable("total"));
        }
        if spec.locally_connected {
            return Err(GenError::Unsatisfiable("locally connected"));
        }
    }
    Ok(())
}

/// Deterministic in `spec` (including its seed).
pub fn generate(spec: &GenSpec) -> Result<Model, GenError> {
    check(spec)?;
    Ok(generate_with(&mut ChaCha8Rng::seed_from_u64(spec.seed), spec))
}

/// Draws from `rng`, ignoring `spec.seed`. Panics on a spec rejected by
/// [`generate`].
pub fn generate_with(rng: &mut impl Rng, spec: &GenSpec) -> Model {
    check(spec).expect("valid generator spec");
    let n = rng.random_range(spec.states.0..=spec.states.1);
    let width = (n - 1).to_string().len();
    let states: Vec<String> = (0..n).map(|k| format!("w{k:0width$}")).collect();
    let agents: Vec<String> = (0..spec.agents).map(|k| ((b'a' + k as u8) as char).to_string()).collect();

    let mut epist = Vec::new();
    let mut plaus = Vec::new();
    for _ in 0..spec.agents {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let same = |x: usize, y: usize| labels[x] == labels[y];
        epist.push(Relation::from_pairs(n, pairs(n).filter(|&(x, y)| same(x, y))));
        let mut orders: Vec<Option<Relation>> = vec![None; n];
        for w in 0..n {
            let shared = if spec.uniform { (0..w).find(|&v| same(v, w)) } else { None };
            let order = match shared {
                Some(v) => orders[v].clone().expect("earlier state"),
                None => preorder(rng, n, spec, &labels),
            };
            orders[w] = Some(order);
        }
        plaus.push(orders.into_iter().map(|o| o.expect("filled")).collect());
    }

    let mut valuation = BTreeMap::new();
    for p in &ATOM_NAMES[..spec.atoms] {
        let mut set = StateSet::with_capacity(n);
        for w in 0..n {
            if rng.random_bool(0.5) {
                set.insert(w);
            }
        }
        valuation.insert(p.to_string(), set);
    }
    Model::from_parts(states, agents, epist, plaus, valuation).expect("generated models are valid")
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

/// A random preorder from a ranking with ties. Unless totality is requested,
/// comparabilities are thinned at random and the result transitively closed.
fn preorder(rng: &mut impl Rng, n: usize, spec: &GenSpec, labels: &[usize]) -> Relation {
    if spec.discrete_preorders {
        return Relation::identity(n);
    }
    let levels = rng.random_range(1..=n);
    let rank: Vec<usize> = (0..n).map(|_| rng.random_range(0..levels)).collect();
    let mut adj = vec![vec![false; n]; n];
    for (x, y) in pairs(n) {
        let forced = x == y || spec.total_preorders || (spec.locally_connected && labels[x] == labels[y]);
        adj[x][y] = rank[x] <= rank[y] && (forced || rng.random_bool(0.5));
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
    Relation::from_pairs(n, pairs(n).filter(|&(x, y)| adj[x][y]))
}

/// A copy of `m` with one state duplicated (tied with its original in every
/// order) and the states renamed by a random permutation. The duplicate
/// relation is a bisimulation for every fragment and preserves uniformity
/// and local connectedness.
pub fn bisimilar_copy(rng: &mut impl Rng, m: &Model) -> (Model, Vec<(usize, usize)>) {
    let n = m.num_states();
    let dup = rng.random_range(0..n);
    // origin[j] is the state of `m` that new state j copies, before renaming
    let mut origin: Vec<usize> = (0..n).collect();
    origin.push(dup);
    let mut perm: Vec<usize> = (0..=n).collect();
    perm.shuffle(rng);
    // new index perm[j] copies origin[j]
    let mut source = vec![0; n + 1];
    for j in 0..=n {
        source[perm[j]] = origin[j];
    }
    let width = n.to_string().len();
    let states: Vec<String> = (0..=n).map(|k| format!("x{k:0width$}")).collect();
    let lift = |r: &Relation| Relation::from_pairs(n + 1, pairs(n + 1).filter(|&(x, y)| r.contains(source[x], source[y])));
    let agents = m.agents().to_vec();
    let epist = (0..agents.len()).map(|i| lift(m.epist(i))).collect();
    let plaus = (0..agents.len())
        .map(|i| (0..=n).map(|w| lift(m.plaus(i, source[w]))).collect())
        .collect();
    let valuation = m
        .atoms()
        .map(|p| {
            let ext = m.valuation(p);
            let mut set = StateSet::with_capacity(n + 1);
            for w in 0..=n {
                if ext.contains(source[w]) {
                    set.insert(w);
                }
            }
            (p.to_string(), set)
        })
        .collect();
    let copy = Model::from_parts(states, agents, epist, plaus, valuation).expect("copies are valid");
    let link = (0..=n).map(|w| (source[w], w)).collect();
    (copy, link)
}
