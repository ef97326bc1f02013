//! Finite epistemic plausibility models.
//!
//! A model has a finite set of states, a set of agents, an epistemic
//! equivalence relation `~_i` per agent, a plausibility preorder `<=_{i,w}`
//! per agent *and* state, and a valuation. States and agents are kept in
//! lexicographic order and referred to by their index in that order, so index
//! order and name order agree everywhere (witness selection, serialization).
//!
//! Pair `(x, y)` in a plausibility relation reads "x is at least as plausible
//! as y".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of states, by index.
pub type StateSet = FixedBitSet;

/// Returns true for nonempty `[A-Za-z0-9_]+` strings.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A binary relation over `0..n`, stored as successor rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    rows: Vec<FixedBitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.insert(x, x);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for row in &mut r.rows {
            row.insert_range(..);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    /// Number of elements of the carrier.
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x].set(y, false);
    }

    /// `{y | (x, y) in self}`.
    pub fn successors(&self, x: usize) -> &FixedBitSet {
        &self.rows[x]
    }

    /// `{x | (x, y) in self}`.
    pub fn predecessors(&self, y: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for (x, row) in self.rows.iter().enumerate() {
            if row.contains(y) {
                out.insert(x);
            }
        }
        out
    }

    /// All pairs in lexicographic (index) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    pub fn inverse(&self) -> Relation {
        Relation::from_pairs(self.size(), self.pairs().map(|(x, y)| (y, x)))
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
        out
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.difference_with(b);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        out
    }

    /// Restriction to `keep`, reindexed so that the i-th kept element becomes `i`.
    pub fn restrict(&self, keep: &[usize]) -> Relation {
        let n = keep.len();
        let mut out = Relation::empty(n);
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.contains(x, y) {
                    out.insert(i, j);
                }
            }
        }
        out
    }

    fn first_irreflexive(&self) -> Option<usize> {
        (0..self.size()).find(|&x| !self.contains(x, x))
    }

    fn first_asymmetric(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !self.contains(y, x))
    }

    fn first_intransitive(&self) -> Option<(usize, usize, usize)> {
        for (x, y) in self.pairs() {
            let mut missing = self.rows[y].clone();
            missing.difference_with(&self.rows[x]);
            if let Some(z) = missing.ones().next() {
                return Some((x, y, z));
            }
        }
        None
    }
}

/// Which relation of a model a violation is about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationName {
    Epist { agent: String },
    Plaus { agent: String, at: String },
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationName::Epist { agent } => write!(f, "epist({agent})"),
            RelationName::Plaus { agent, at } => write!(f, "plaus({agent}, {at})"),
        }
    }
}

/// A violated model invariant, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    NoAgents,
    BadIdentifier { kind: &'static str, name: String },
    Duplicate { kind: &'static str, name: String },
    UnknownState { context: String, state: String },
    UnknownAgent { context: String, agent: String },
    MissingPlaus { agent: String, state: String },
    NotReflexive { relation: RelationName, state: String },
    NotSymmetric { relation: RelationName, pair: (String, String) },
    NotTransitive { relation: RelationName, chain: (String, String, String) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "model has no states"),
            Violation::NoAgents => write!(f, "model has no agents"),
            Violation::BadIdentifier { kind, name } => {
                write!(f, "{kind} name `{name}` is not an identifier")
            }
            Violation::Duplicate { kind, name } => write!(f, "duplicate {kind} `{name}`"),
            Violation::UnknownState { context, state } => {
                write!(f, "{context} mentions unknown state `{state}`")
            }
            Violation::UnknownAgent { context, agent } => {
                write!(f, "{context} mentions unknown agent `{agent}`")
            }
            Violation::MissingPlaus { agent, state } => {
                write!(f, "no plausibility order for agent {agent} at {state}")
            }
            Violation::NotReflexive { relation, state } => {
                write!(f, "{relation} not reflexive at {state}")
            }
            Violation::NotSymmetric { relation, pair } => {
                write!(f, "{relation} not symmetric: ({}, {}) without converse", pair.0, pair.1)
            }
            Violation::NotTransitive { relation, chain } => write!(
                f,
                "{relation} not transitive: ({a}, {b}) and ({b}, {c}) but not ({a}, {c})",
                a = chain.0,
                b = chain.1,
                c = chain.2
            ),
        }
    }
}

/// On-disk form of a model. Field and element order is lexicographic when
/// produced by [`Model::to_doc`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub states: Vec<String>,
    pub agents: Vec<String>,
    #[serde(default)]
    pub epist: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub plaus: BTreeMap<String, BTreeMap<String, Vec<(String, String)>>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Every invariant `doc` violates; empty iff it describes a legal model.
pub fn validate(doc: &ModelDoc) -> Vec<Violation> {
    let mut out = Vec::new();
    if doc.states.is_empty() {
        out.push(Violation::NoStates);
    }
    if doc.agents.is_empty() {
        out.push(Violation::NoAgents);
    }
    let mut states = BTreeSet::new();
    for s in &doc.states {
        if !is_identifier(s) {
            out.push(Violation::BadIdentifier { kind: "state", name: s.clone() });
        }
        if !states.insert(s.as_str()) {
            out.push(Violation::Duplicate { kind: "state", name: s.clone() });
        }
    }
    let mut agents = BTreeSet::new();
    for a in &doc.agents {
        if !is_identifier(a) {
            out.push(Violation::BadIdentifier { kind: "agent", name: a.clone() });
        }
        if !agents.insert(a.as_str()) {
            out.push(Violation::Duplicate { kind: "agent", name: a.clone() });
        }
    }
    let check_state = |out: &mut Vec<Violation>, context: &dyn Fn() -> String, s: &str| {
        if !states.contains(s) {
            out.push(Violation::UnknownState { context: context(), state: s.to_string() });
        }
    };
    for (agent, pairs) in &doc.epist {
        if !agents.contains(agent.as_str()) {
            out.push(Violation::UnknownAgent { context: "epist".into(), agent: agent.clone() });
        }
        for (x, y) in pairs {
            let ctx = || format!("epist({agent})");
            check_state(&mut out, &ctx, x);
            check_state(&mut out, &ctx, y);
        }
    }
    for (agent, per_state) in &doc.plaus {
        if !agents.contains(agent.as_str()) {
            out.push(Violation::UnknownAgent { context: "plaus".into(), agent: agent.clone() });
        }
        for (at, pairs) in per_state {
            check_state(&mut out, &|| format!("plaus({agent}) key"), at);
            for (x, y) in pairs {
                let ctx = || format!("plaus({agent}, {at})");
                check_state(&mut out, &ctx, x);
                check_state(&mut out, &ctx, y);
            }
        }
    }
    for (atom, ext) in &doc.valuation {
        if !is_identifier(atom) {
            out.push(Violation::BadIdentifier { kind: "atom", name: atom.clone() });
        }
        for s in ext {
            check_state(&mut out, &|| format!("valuation({atom})"), s);
        }
    }
    for a in &agents {
        for s in &states {
            let present = doc
                .plaus
                .get(*a)
                .is_some_and(|m| m.contains_key(*s));
            if !present {
                out.push(Violation::MissingPlaus { agent: a.to_string(), state: s.to_string() });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    Model::index_doc(doc).axiom_violations()
}

/// A validated finite epistemic plausibility model.
///
/// Immutable once built; every operation is a pure function of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    states: Vec<String>,
    agents: Vec<String>,
    epist: Vec<Relation>,
    /// `plaus[agent][state]`
    plaus: Vec<Vec<Relation>>,
    valuation: BTreeMap<String, StateSet>,
}

impl Model {
    /// Validates `doc` and builds the model.
    pub fn from_doc(doc: &ModelDoc) -> Result<Model> {
        let violations = validate(doc);
        if !violations.is_empty() {
            return Err(Error::InvalidModel(violations));
        }
        Ok(Self::index_doc(doc))
    }

    pub fn from_json(text: &str) -> Result<Model> {
        Self::from_doc(&ModelDoc::from_json(text)?)
    }

    /// Builds from index-level parts.
    ///
    /// # Panics
    ///
    /// If `states` or `agents` is not strictly increasing, or a relation or
    /// valuation does not have exactly one entry per agent, state and atom
    /// position.
    pub fn from_parts(
        states: Vec<String>,
        agents: Vec<String>,
        epist: Vec<Relation>,
        plaus: Vec<Vec<Relation>>,
        valuation: BTreeMap<String, StateSet>,
    ) -> Result<Model> {
        let n = states.len();
        assert!(states.windows(2).all(|w| w[0] < w[1]), "states must be strictly increasing");
        assert!(agents.windows(2).all(|w| w[0] < w[1]), "agents must be strictly increasing");
        assert!(epist.len() == agents.len() && plaus.len() == agents.len(), "one relation per agent");
        assert!(
            epist.iter().all(|r| r.size() == n)
                && plaus.iter().all(|per| per.len() == n && per.iter().all(|r| r.size() == n))
                && valuation.values().all(|ext| ext.len() == n),
            "carriers must have one entry per state"
        );
        let mut v = Vec::new();
        if states.is_empty() {
            v.push(Violation::NoStates);
        }
        if agents.is_empty() {
            v.push(Violation::NoAgents);
        }
        for (kind, names) in [("state", &states), ("agent", &agents)] {
            for name in names.iter().filter(|s| !is_identifier(s)) {
                v.push(Violation::BadIdentifier { kind, name: name.clone() });
            }
        }
        for atom in valuation.keys().filter(|p| !is_identifier(p)) {
            v.push(Violation::BadIdentifier { kind: "atom", name: atom.clone() });
        }
        let m = Model { states, agents, epist, plaus, valuation };
        v.extend(m.axiom_violations());
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    /// Index-level constructor for transformations whose output is valid by
    /// construction.
    pub(crate) fn from_parts_unchecked(
        states: Vec<String>,
        agents: Vec<String>,
        epist: Vec<Relation>,
        plaus: Vec<Vec<Relation>>,
        valuation: BTreeMap<String, StateSet>,
    ) -> Model {
        let m = Model { states, agents, epist, plaus, valuation };
        debug_assert!(m.axiom_violations().is_empty(), "{:?}", m.axiom_violations());
        m
    }

    // Assumes referential integrity has been checked.
    fn index_doc(doc: &ModelDoc) -> Model {
        let states: Vec<String> = doc.states.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let agents: Vec<String> = doc.agents.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let n = states.len();
        let idx = |s: &str| states.binary_search_by(|x| x.as_str().cmp(s)).expect("checked state");
        let rel = |pairs: &[(String, String)]| {
            Relation::from_pairs(n, pairs.iter().map(|(x, y)| (idx(x), idx(y))))
        };
        let epist = agents
            .iter()
            .map(|a| doc.epist.get(a).map(|p| rel(p)).unwrap_or_else(|| Relation::empty(n)))
            .collect();
        let plaus = agents
            .iter()
            .map(|a| {
                states
                    .iter()
                    .map(|s| rel(&doc.plaus[a][s]))
                    .collect()
            })
            .collect();
        let valuation = doc
            .valuation
            .iter()
            .map(|(p, ext)| {
                let mut set = StateSet::with_capacity(n);
                for s in ext {
                    set.insert(idx(s));
                }
                (p.clone(), set)
            })
            .collect();
        Model { states, agents, epist, plaus, valuation }
    }

    fn axiom_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let name = |x: usize| self.states[x].clone();
        let mut check = |rel: &Relation, relation: RelationName, symmetric: bool| {
            if let Some(x) = rel.first_irreflexive() {
                out.push(Violation::NotReflexive { relation: relation.clone(), state: name(x) });
            }
            if symmetric {
                if let Some((x, y)) = rel.first_asymmetric() {
                    out.push(Violation::NotSymmetric {
                        relation: relation.clone(),
                        pair: (name(x), name(y)),
                    });
                }
            }
            if let Some((x, y, z)) = rel.first_intransitive() {
                out.push(Violation::NotTransitive { relation, chain: (name(x), name(y), name(z)) });
            }
        };
        for (i, agent) in self.agents.iter().enumerate() {
            check(&self.epist[i], RelationName::Epist { agent: agent.clone() }, true);
            for (w, at) in self.states.iter().enumerate() {
                let relation = RelationName::Plaus { agent: agent.clone(), at: at.clone() };
                check(&self.plaus[i][w], relation, false);
            }
        }
        out
    }

    /// Re-checks the relational axioms; empty for every constructed model.
    pub fn violations(&self) -> Vec<Violation> {
        validate(&self.to_doc())
    }

    pub fn to_doc(&self) -> ModelDoc {
        let pairs = |r: &Relation| -> Vec<(String, String)> {
            let mut v: Vec<_> = r
                .pairs()
                .map(|(x, y)| (self.states[x].clone(), self.states[y].clone()))
                .collect();
            v.sort();
            v
        };
        ModelDoc {
            states: self.states.clone(),
            agents: self.agents.clone(),
            epist: self
                .agents
                .iter()
                .zip(&self.epist)
                .map(|(a, r)| (a.clone(), pairs(r)))
                .collect(),
            plaus: self
                .agents
                .iter()
                .zip(&self.plaus)
                .map(|(a, per)| {
                    let inner = self
                        .states
                        .iter()
                        .zip(per)
                        .map(|(s, r)| (s.clone(), pairs(r)))
                        .collect();
                    (a.clone(), inner)
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, set)| (p.clone(), set.ones().map(|x| self.states[x].clone()).collect()))
                .collect(),
        }
    }

    /// Canonical pretty-printed JSON (keys and arrays in lexicographic order).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model documents always serialize")
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn state_name(&self, w: usize) -> &str {
        &self.states[w]
    }

    pub fn state_id(&self, name: &str) -> Result<usize> {
        self.states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownState(name.to_string()))
    }

    pub fn agent_id(&self, name: &str) -> Result<usize> {
        self.agents
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownAgent(name.to_string()))
    }

    pub fn epist(&self, agent: usize) -> &Relation {
        &self.epist[agent]
    }

    pub fn plaus(&self, agent: usize, at: usize) -> &Relation {
        &self.plaus[agent][at]
    }

    /// Atoms with an explicit valuation entry, in order.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    /// `V(p)`; atoms without an entry denote the empty set.
    pub fn valuation(&self, atom: &str) -> StateSet {
        self.valuation
            .get(atom)
            .cloned()
            .unwrap_or_else(|| StateSet::with_capacity(self.num_states()))
    }

    pub fn all_states(&self) -> StateSet {
        let mut s = StateSet::with_capacity(self.num_states());
        s.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::with_capacity(self.num_states())
    }

    /// Converts state names to a set; unknown names are an error.
    pub fn set_of<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<StateSet> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.state_id(n)?);
        }
        Ok(s)
    }

    pub fn names_of(&self, set: &StateSet) -> Vec<String> {
        set.ones().map(|x| self.states[x].clone()).collect()
    }

    /// `[w]_{~i}`
    pub fn eq_class(&self, agent: usize, w: usize) -> StateSet {
        self.epist[agent].successors(w).clone()
    }

    /// `x <=_{i,w} y`
    #[inline]
    pub fn le(&self, agent: usize, at: usize, x: usize, y: usize) -> bool {
        self.plaus[agent][at].contains(x, y)
    }

    /// `x <_{i,w} y`
    #[inline]
    pub fn lt(&self, agent: usize, at: usize, x: usize, y: usize) -> bool {
        self.le(agent, at, x, y) && !self.le(agent, at, y, x)
    }

    /// `Min_{<=_{i,w}}(X) = {x in X | for all y in X: y <= x implies x <= y}`.
    pub fn min_set(&self, agent: usize, at: usize, x: &StateSet) -> StateSet {
        let order = &self.plaus[agent][at];
        let mut out = self.empty_set();
        for c in x.ones() {
            if x.ones().all(|y| !order.contains(y, c) || order.contains(c, y)) {
                out.insert(c);
            }
        }
        out
    }

    /// Strict and indifference parts of every plausibility order.
    pub fn strict(&self) -> StrictOrders {
        let split = |r: &Relation| {
            let inv = r.inverse();
            (r.difference(&inv), r.intersection(&inv))
        };
        let mut lt = Vec::new();
        let mut eqv = Vec::new();
        for per in &self.plaus {
            let (l, e): (Vec<_>, Vec<_>) = per.iter().map(split).unzip();
            lt.push(l);
            eqv.push(e);
        }
        StrictOrders { lt, eqv }
    }

    /// Checks that `<=_{i,w} = <=_{i,v}` whenever `w ~i v`; reports the
    /// lexicographically least failure.
    pub fn uniformity(&self) -> std::result::Result<(), UniformityWitness> {
        for i in 0..self.agents.len() {
            for (w, v) in self.epist[i].pairs() {
                if w == v {
                    continue;
                }
                let a = &self.plaus[i][w];
                let b = &self.plaus[i][v];
                if a != b {
                    let diff = a.difference(b).union(&b.difference(a));
                    let (x, y) = diff.pairs().next().expect("relations differ");
                    return Err(UniformityWitness {
                        agent: self.agents[i].clone(),
                        w: self.states[w].clone(),
                        v: self.states[v].clone(),
                        pair: (self.states[x].clone(), self.states[y].clone()),
                        in_w_order: a.contains(x, y),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.uniformity().is_ok()
    }

    /// Checks that `w ~i v` implies `w <=_{i,w} v` or `v <=_{i,w} w`.
    pub fn local_connectedness(&self) -> std::result::Result<(), ConnectednessWitness> {
        for i in 0..self.agents.len() {
            for (w, v) in self.epist[i].pairs() {
                if !self.le(i, w, w, v) && !self.le(i, w, v, w) {
                    return Err(ConnectednessWitness {
                        agent: self.agents[i].clone(),
                        w: self.states[w].clone(),
                        v: self.states[v].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_locally_connected(&self) -> bool {
        self.local_connectedness().is_ok()
    }

    /// Every epistemic class is finite. Vacuously true here since models
    /// are finite; kept so callers can state the hypothesis explicitly.
    pub fn is_image_finite(&self) -> bool {
        true
    }
}

/// `<_{i,w}` and `≅_{i,w}` for every agent and state, indexed like `plaus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOrders {
    pub lt: Vec<Vec<Relation>>,
    pub eqv: Vec<Vec<Relation>>,
}

impl StrictOrders {
    /// Minimal elements via the strict order: `x in X` with no `y in X`, `y < x`.
    pub fn min_set(&self, agent: usize, at: usize, x: &StateSet) -> StateSet {
        let lt = &self.lt[agent][at];
        let mut out = StateSet::with_capacity(x.len());
        for c in x.ones() {
            if !x.ones().any(|y| lt.contains(y, c)) {
                out.insert(c);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityWitness {
    pub agent: String,
    pub w: String,
    pub v: String,
    /// Least pair in the symmetric difference of the two orders.
    pub pair: (String, String),
    /// Whether `pair` belongs to the order at `w` (otherwise to the one at `v`).
    pub in_w_order: bool,
}

impl fmt::Display for UniformityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (has, lacks) = if self.in_w_order { (&self.w, &self.v) } else { (&self.v, &self.w) };
        write!(
            f,
            "agent {}: {} ~ {} but ({}, {}) is in the order at {} and not at {}",
            self.agent, self.w, self.v, self.pair.0, self.pair.1, has, lacks
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectednessWitness {
    pub agent: String,
    pub w: String,
    pub v: String,
}

impl fmt::Display for ConnectednessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "agent {}: {} ~ {} but they are incomparable at {}",
            self.agent, self.w, self.v, self.w
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    fn doc(states: &[&str], epist: &[(&str, &str)], plaus: &[(&str, &[(&str, &str)])]) -> ModelDoc {
        ModelDoc {
            states: states.iter().map(|s| s.to_string()).collect(),
            agents: vec!["a".into()],
            epist: [("a".to_string(), epist.iter().map(|(x, y)| pair(x, y)).collect())].into(),
            plaus: [(
                "a".to_string(),
                plaus
                    .iter()
                    .map(|(w, ps)| (w.to_string(), ps.iter().map(|(x, y)| pair(x, y)).collect()))
                    .collect(),
            )]
            .into(),
            valuation: BTreeMap::new(),
        }
    }

    #[test]
    fn minimal_reflexive_model_is_valid() {
        let d = doc(&["w"], &[("w", "w")], &[("w", &[("w", "w")])]);
        assert!(validate(&d).is_empty());
    }

    #[test]
    fn empty_epistemic_relation_is_not_reflexive() {
        let d = doc(&["w"], &[], &[("w", &[("w", "w")])]);
        let v = validate(&d);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "epist(a) not reflexive at w");
    }

    #[test]
    fn unknown_state_is_named() {
        let d = doc(
            &["w", "v"],
            &[("w", "w"), ("v", "v")],
            &[
                ("w", &[("w", "w"), ("v", "v"), ("w", "v"), ("v", "u")]),
                ("v", &[("w", "w"), ("v", "v")]),
            ],
        );
        let v = validate(&d);
        assert!(v.contains(&Violation::UnknownState {
            context: "plaus(a, w)".into(),
            state: "u".into()
        }));
    }

    #[test]
    fn missing_plausibility_entry_and_intransitivity() {
        let d = doc(
            &["u", "v", "w"],
            &[("u", "u"), ("v", "v"), ("w", "w")],
            &[
                ("u", &[("u", "u"), ("v", "v"), ("w", "w"), ("u", "v"), ("v", "w")]),
                ("v", &[("u", "u"), ("v", "v"), ("w", "w")]),
            ],
        );
        let v = validate(&d);
        assert!(v.contains(&Violation::MissingPlaus { agent: "a".into(), state: "w".into() }));
        let d2 = {
            let mut d = d.clone();
            d.plaus.get_mut("a").unwrap().insert("w".into(), vec![pair("u", "u"), pair("v", "v"), pair("w", "w")]);
            d
        };
        let v2 = validate(&d2);
        assert_eq!(v2.len(), 1);
        assert!(matches!(&v2[0], Violation::NotTransitive { chain, .. } if chain == &("u".to_string(), "v".to_string(), "w".to_string())));
    }

    fn two_state(epist_total: bool, le_w: &[(&str, &str)], le_v: &[(&str, &str)]) -> Model {
        let mut e = vec![("v", "v"), ("w", "w")];
        if epist_total {
            e.extend([("v", "w"), ("w", "v")]);
        }
        Model::from_doc(&doc(&["v", "w"], &e, &[("w", le_w), ("v", le_v)])).unwrap()
    }

    const ID: &[(&str, &str)] = &[("v", "v"), ("w", "w")];

    #[test]
    fn equivalence_classes() {
        let m = two_state(true, ID, ID);
        let (w, v) = (m.state_id("w").unwrap(), m.state_id("v").unwrap());
        assert_eq!(m.names_of(&m.eq_class(0, w)), ["v", "w"]);
        let m = two_state(false, ID, ID);
        assert_eq!(m.names_of(&m.eq_class(0, w)), ["w"]);
        assert_eq!(m.names_of(&m.eq_class(0, v)), ["v"]);

        let d = doc(
            &["u", "v", "w"],
            &[("u", "u"), ("v", "v"), ("w", "w"), ("v", "w"), ("w", "v")],
            &[("u", &[("u", "u"), ("v", "v"), ("w", "w")]), ("v", &[("u", "u"), ("v", "v"), ("w", "w")]), ("w", &[("u", "u"), ("v", "v"), ("w", "w")])],
        );
        let m = Model::from_doc(&d).unwrap();
        assert_eq!(m.names_of(&m.eq_class(0, m.state_id("u").unwrap())), ["u"]);
        assert!(matches!(m.state_id("x"), Err(Error::UnknownState(_))));
        assert!(matches!(m.agent_id("b"), Err(Error::UnknownAgent(_))));
    }

    #[test]
    fn min_sets() {
        let m = two_state(true, ID, ID);
        let w = m.state_id("w").unwrap();
        let single = m.set_of(["w"]).unwrap();
        assert_eq!(m.min_set(0, w, &single), single);
        let both = m.all_states();
        // incomparable
        assert_eq!(m.names_of(&m.min_set(0, w, &both)), ["v", "w"]);
        // chain v < w
        let m = two_state(true, &[("v", "v"), ("w", "w"), ("v", "w")], ID);
        assert_eq!(m.names_of(&m.min_set(0, w, &both)), ["v"]);
    }

    #[test]
    fn strict_parts() {
        let m = two_state(true, ID, ID);
        let s = m.strict();
        assert!(s.lt.iter().flatten().all(Relation::is_empty));

        let total = &[("v", "v"), ("w", "w"), ("v", "w"), ("w", "v")];
        let m = two_state(true, total, total);
        let s = m.strict();
        assert!(s.lt.iter().flatten().all(Relation::is_empty));
        assert_eq!(s.eqv[0][0], Relation::full(2));

        let m = two_state(true, &[("v", "v"), ("w", "w"), ("v", "w")], ID);
        let s = m.strict();
        let w = m.state_id("w").unwrap();
        let (vi, wi) = (m.state_id("v").unwrap(), w);
        assert_eq!(s.lt[0][w].pairs().collect::<Vec<_>>(), vec![(vi, wi)]);
    }

    #[test]
    fn uniformity_and_connectedness() {
        let m = two_state(true, ID, ID);
        assert!(m.is_uniform());
        assert_eq!(
            m.local_connectedness(),
            Err(ConnectednessWitness { agent: "a".into(), w: "v".into(), v: "w".into() })
        );

        let m = two_state(true, &[("v", "v"), ("w", "w"), ("v", "w")], ID);
        let wit = m.uniformity().unwrap_err();
        assert_eq!((wit.w.as_str(), wit.v.as_str()), ("v", "w"));
        assert_eq!(wit.pair, pair("v", "w"));
        assert!(!wit.in_w_order);

        // identity ~ makes both conditions vacuous
        let m = two_state(false, &[("v", "v"), ("w", "w"), ("v", "w")], ID);
        assert!(m.is_uniform());
        assert!(m.is_locally_connected());
        assert!(m.is_image_finite());
    }

    #[test]
    fn doc_roundtrip_is_canonical() {
        let m = two_state(true, &[("w", "w"), ("v", "v"), ("v", "w")], ID);
        let text = m.to_json();
        let back = Model::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), text);
    }
}
