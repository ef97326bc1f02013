//! Named property suites. Each runs a number of seeded trials and reports
//! every failure with enough data to reproduce it.
//!
//! Trial `t` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `t`, so any single trial can be replayed on its own.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use plausikit::bisim::{
    check, check_bc, definable_pairs, greatest, greatest_structural, hennessy_milner, Relation, DEFAULT_CAP,
};
use plausikit::dynamics::{announce, upgrade};
use plausikit::reference;
use plausikit::semantics::{is_valid_on, truth_set, Evaluator};
use plausikit::syntax::enumerate_all;
use plausikit::translate::{reduce_dynamic, translate_gt, translate_safe};
use plausikit::{Formula, Fragment, Model, ModelDoc, Op, StateSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{counterexamples, Translation};
use crate::exhaustive::{models as all_models, Orders};
use crate::generate::{bisimilar_copy, generate_with, GenSpec};
use crate::sample;

pub const ATOMS: [&str; 2] = ["p", "q"];
pub const AGENTS: [&str; 2] = ["a", "b"];

/// Size limits of a run. Exhaustive suites ignore `trials` and
/// `max_states`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub trials: usize,
    pub max_states: usize,
    /// Sampled formulas (or formula pairs) per trial.
    pub formulas: usize,
    pub depth: usize,
}

pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    pub budget: Budget,
}

const fn budget(trials: usize, max_states: usize, formulas: usize, depth: usize) -> Budget {
    Budget { trials, max_states, formulas, depth }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "thm9-K", summary: "K-bisimilar states agree on L(K)", budget: budget(500, 5, 200, 3) },
    Suite { name: "thm9-Bplus", summary: "Bplus-bisimilar states agree on L(Bplus)", budget: budget(500, 5, 200, 3) },
    Suite { name: "thm9-Bc", summary: "Bc-bisimilar states agree on L(Bc)", budget: budget(500, 5, 200, 3) },
    Suite { name: "thm11-KBc", summary: "{K, Bc}-bisimilar states agree on L(K, Bc)", budget: budget(500, 5, 200, 3) },
    Suite {
        name: "thm11-KBplus",
        summary: "{K, Bplus}-bisimilar states agree on L(K, Bplus)",
        budget: budget(500, 5, 200, 3),
    },
    Suite { name: "thm13", summary: "{K, Bc}-equivalence is a {K, Bc}-bisimulation", budget: budget(200, 4, 0, 0) },
    Suite {
        name: "thm17",
        summary: "on uniform models B^a f -> K B^a f is valid, before and after updates",
        budget: budget(500, 5, 10, 2),
    },
    Suite { name: "thm18", summary: "announcement and upgrade preserve uniformity", budget: budget(500, 5, 10, 2) },
    Suite {
        name: "thm22",
        summary: "exhaustive: conditional belief equals its strict-plausibility definition on uniform models",
        budget: budget(0, 3, 0, 2),
    },
    Suite { name: "thm24-1", summary: "Gt-bisimilar states agree on L(Gt)", budget: budget(500, 5, 200, 3) },
    Suite { name: "thm24-2", summary: "{K, Gt}-bisimilar states agree on L(K, Gt)", budget: budget(500, 5, 200, 3) },
    Suite {
        name: "thm24-3",
        summary: "on uniform models {K, Gt}-bisimilar states agree on L(K, Bc)",
        budget: budget(500, 5, 200, 3),
    },
    Suite {
        name: "thm24-4",
        summary: "on uniform models every {K, Gt}-bisimulation is a {K, Bc}-bisimulation",
        budget: budget(300, 4, 0, 0),
    },
    Suite {
        name: "thm26",
        summary: "announcement and upgrade preserve local connectedness",
        budget: budget(500, 5, 10, 2),
    },
    Suite {
        name: "thm27",
        summary: "exhaustive: conditional belief equals its safe-belief definition on uniform, locally connected models",
        budget: budget(0, 3, 0, 2),
    },
    Suite {
        name: "thm28-1",
        summary: "on uniform, locally connected models {K, Bplus}-bisimilar states agree on L(K, Bplus, Bc)",
        budget: budget(500, 5, 200, 3),
    },
    Suite {
        name: "thm28-2",
        summary: "on uniform, locally connected models every {K, Bplus}-bisimulation is a {K, Bc}-bisimulation",
        budget: budget(300, 4, 0, 0),
    },
    Suite {
        name: "thm29",
        summary: "{K, Bplus}-bisimilar states stay equivalent after announcements, upgrades and sequences of both",
        budget: budget(200, 4, 0, 2),
    },
    Suite {
        name: "facts",
        summary: "reduction of dynamic formulas is sound and every reduction axiom instance is valid",
        budget: budget(500, 4, 100, 3),
    },
    Suite {
        name: "pairfamily",
        summary: "definable pairs equal the closure of formula truth-set pairs under the reference semantics",
        budget: budget(100, 3, 0, 0),
    },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

/// `PLAUSIKIT_SEED` if set to an integer, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("PLAUSIKIT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub budget: Budget,
    pub trials: usize,
    /// Individual comparisons or validity checks performed.
    pub checks: u64,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} trials, {} checks, {} failures (seed {}, {:.1}s)",
            self.suite,
            self.trials,
            self.checks,
            self.failures.len(),
            self.seed,
            self.elapsed.as_secs_f64()
        )?;
        for fail in &self.failures {
            write!(f, "\n  trial {}: {}", fail.trial, fail.detail)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Outcome {
    checks: u64,
    failure: Option<Value>,
}

impl Outcome {
    fn fail(checks: u64, detail: Value) -> Self {
        Outcome { checks, failure: Some(detail) }
    }
}

/// One trial: its index and its own generator.
type Trial = Box<dyn Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync>;

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs `name` with the given budget and seed.
pub fn run(name: &str, budget: Budget, seed: u64) -> Result<Report, UnknownSuite> {
    run_trials(name, budget, seed, None)
}

/// Runs only trial `trial` of a run, for reproducing a reported failure.
pub fn run_one(name: &str, budget: Budget, seed: u64, trial: usize) -> Result<Report, UnknownSuite> {
    run_trials(name, budget, seed, Some(trial))
}

fn run_trials(name: &str, budget: Budget, seed: u64, only: Option<usize>) -> Result<Report, UnknownSuite> {
    let suite = find(name).ok_or_else(|| UnknownSuite(name.to_string()))?;
    let start = Instant::now();
    let trial: Trial = match suite.name {
        "thm9-K" => bisim_suite(budget, BisimCase::new(&[Op::K], &[Op::K])),
        "thm9-Bplus" => bisim_suite(budget, BisimCase::new(&[Op::Bplus], &[Op::Bplus])),
        "thm9-Bc" => bisim_suite(budget, BisimCase::new(&[Op::Bc], &[Op::Bc])),
        "thm11-KBc" => bisim_suite(budget, BisimCase::new(&[Op::K, Op::Bc], &[Op::K, Op::Bc])),
        "thm11-KBplus" => bisim_suite(budget, BisimCase::new(&[Op::K, Op::Bplus], &[Op::K, Op::Bplus])),
        "thm24-1" => bisim_suite(budget, BisimCase::new(&[Op::Gt], &[Op::Gt])),
        "thm24-2" => bisim_suite(budget, BisimCase::new(&[Op::K, Op::Gt], &[Op::K, Op::Gt])),
        "thm24-3" => bisim_suite(budget, BisimCase { uniform: true, ..BisimCase::new(&[Op::K, Op::Gt], &[Op::K, Op::Bc]) }),
        "thm28-1" => bisim_suite(
            budget,
            BisimCase {
                uniform: true,
                connected: true,
                ..BisimCase::new(&[Op::K, Op::Bplus], &[Op::K, Op::Bplus, Op::Bc])
            },
        ),
        "thm24-4" => containment_suite(budget, Fragment::of(&[Op::K, Op::Gt]), false),
        "thm28-2" => containment_suite(budget, Fragment::of(&[Op::K, Op::Bplus]), true),
        "thm13" => Box::new(move |_, rng| hennessy_milner_trial(rng, budget)),
        "thm17" => Box::new(move |_, rng| introspection_trial(rng, budget)),
        "thm18" => Box::new(move |_, rng| preservation_trial(rng, budget, true)),
        "thm26" => Box::new(move |_, rng| preservation_trial(rng, budget, false)),
        "facts" => {
            let instances = axiom_instances(seed, budget.formulas);
            Box::new(move |_, rng| reduction_trial(rng, budget, &instances))
        }
        "pairfamily" => Box::new(move |t, rng| pair_family_trial(t, rng, budget)),
        "thm29" => {
            let formulas = enumerate_all(&ATOMS, &AGENTS, Fragment::of(&[Op::K, Op::Bplus, Op::Bc]), budget.depth);
            Box::new(move |_, rng| future_trial(rng, budget, &formulas))
        }
        "thm22" => definability_suite(budget, Translation::Gt),
        "thm27" => definability_suite(budget, Translation::Safe),
        _ => unreachable!("every listed suite is dispatched"),
    };
    let trials = match suite.name {
        "thm22" => all_models(budget.max_states, Orders::Uniform).len() + 1,
        "thm27" => all_models(budget.max_states, Orders::UniformConnected).len() + 1,
        _ => budget.trials,
    };
    let indices: Vec<usize> = match only {
        Some(t) => vec![t],
        None => (0..trials).collect(),
    };
    let outcomes: Vec<(usize, Outcome)> =
        indices.into_par_iter().map(|t| (t, trial(t, &mut trial_rng(seed, t)))).collect();
    let mut report = Report {
        suite: suite.name.to_string(),
        seed,
        budget,
        trials: outcomes.len(),
        checks: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (t, o) in outcomes {
        report.checks += o.checks;
        if let Some(detail) = o.failure {
            report.failures.push(Failure { trial: t, seed, detail });
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn model_json(m: &Model) -> Value {
    serde_json::to_value(m.to_doc()).expect("models serialize")
}

fn pairs_json(z: &Relation, l: &Model, r: &Model) -> Value {
    json!(z.to_names(l, r))
}

/// How the right model of a pair relates to the left one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
enum PairKind {
    Copy,
    PerturbedCopy,
    Independent,
}

struct Pair {
    left: Model,
    right: Model,
    kind: PairKind,
    /// For copies: each right state with the left state it copies.
    links: Vec<(usize, usize)>,
}

fn spec(max_states: usize, agents: usize, uniform: bool, connected: bool) -> GenSpec {
    GenSpec::new((1, max_states.max(1)), agents, ATOMS.len()).uniform(uniform).locally_connected(connected)
}

/// A pair of models: a bisimilar copy, a copy with one atom flipped at one
/// state, or two independent models, with equal odds. Copies have one more
/// state than their original, so originals stay below `max_states`.
fn model_pair(rng: &mut impl Rng, max_states: usize, agents: usize, uniform: bool, connected: bool) -> Pair {
    let kind = match rng.random_range(0..3) {
        0 => PairKind::Copy,
        1 => PairKind::PerturbedCopy,
        _ => PairKind::Independent,
    };
    if kind == PairKind::Independent || max_states < 2 {
        let left = generate_with(rng, &spec(max_states, agents, uniform, connected));
        let right = generate_with(rng, &spec(max_states, agents, uniform, connected));
        return Pair { left, right, kind: PairKind::Independent, links: Vec::new() };
    }
    let left = generate_with(rng, &spec(max_states - 1, agents, uniform, connected));
    let (mut right, links) = bisimilar_copy(rng, &left);
    if kind == PairKind::PerturbedCopy {
        let state = rng.random_range(0..right.num_states());
        let atom = ATOMS[rng.random_range(0..ATOMS.len())];
        right = flip_atom(&right, atom, state);
    }
    Pair { left, right, kind, links }
}

fn flip_atom(m: &Model, atom: &str, w: usize) -> Model {
    let mut doc: ModelDoc = m.to_doc();
    let name = m.state_name(w).to_string();
    let ext = doc.valuation.entry(atom.to_string()).or_default();
    if let Some(k) = ext.iter().position(|s| *s == name) {
        ext.remove(k);
    } else {
        ext.push(name);
    }
    Model::from_doc(&doc).expect("flipping an atom keeps a model valid")
}

/// A bisimilarity-implies-equivalence property.
#[derive(Clone, Copy)]
struct BisimCase {
    relation: Fragment,
    formulas: Fragment,
    uniform: bool,
    connected: bool,
}

impl BisimCase {
    fn new(relation: &[Op], formulas: &[Op]) -> Self {
        BisimCase { relation: Fragment::of(relation), formulas: Fragment::of(formulas), uniform: false, connected: false }
    }
}

fn bisim_suite(budget: Budget, case: BisimCase) -> Trial {
    let enumerated = enumerate_all(&ATOMS, &AGENTS, case.formulas, 1);
    Box::new(move |_, rng| bisim_trial(rng, budget, case, &enumerated))
}

/// Largest bisimulation for the case's relation fragment, then agreement of
/// every related pair on the enumerated and sampled formulas.
fn bisim_trial(rng: &mut ChaCha8Rng, budget: Budget, case: BisimCase, enumerated: &[Formula]) -> Outcome {
    let pair = model_pair(rng, budget.max_states, AGENTS.len(), case.uniform, case.connected);
    let (l, r) = (&pair.left, &pair.right);
    let z = if case.relation.contains(Op::Bc) {
        greatest(l, r, case.relation, DEFAULT_CAP)
    } else {
        greatest_structural(l, r, case.relation)
    };
    let context = || json!({"kind": pair.kind, "left": model_json(l), "right": model_json(r)});
    let z = match z {
        Ok(z) => z,
        Err(e) => return Outcome::fail(0, json!({"error": e.to_string(), "models": context()})),
    };
    let verdict = check(l, r, &z, case.relation, DEFAULT_CAP).expect("same inputs as greatest");
    if let Some(w) = verdict.witness() {
        return Outcome::fail(1, json!({"greatestFailsCheck": w.to_string(), "models": context()}));
    }
    let sampled = (0..budget.formulas).map(|_| sample::formula(rng, case.formulas, &ATOMS, &AGENTS, budget.depth));
    let formulas: Vec<Formula> = enumerated.iter().cloned().chain(sampled).collect();
    let (mut el, mut er) = (Evaluator::new(l), Evaluator::new(r));
    let mut checks = 1;
    for f in &formulas {
        let (tl, tr) = (el.truth_set(f).expect("agents exist"), er.truth_set(f).expect("agents exist"));
        for (w, v) in z.pairs() {
            checks += 1;
            if tl.contains(w) != tr.contains(v) {
                return Outcome::fail(
                    checks,
                    json!({
                        "formula": f.to_string(),
                        "pair": [l.state_name(w), r.state_name(v)],
                        "relation": pairs_json(&z, l, r),
                        "models": context(),
                    }),
                );
            }
        }
    }
    Outcome { checks, failure: None }
}

fn containment_suite(
    budget: Budget,
    structural: Fragment,
    connected: bool,
) -> Trial {
    Box::new(move |_, rng| {
        let pair = model_pair(rng, budget.max_states, AGENTS.len(), true, connected);
        let (l, r) = (&pair.left, &pair.right);
        let z = greatest_structural(l, r, structural).expect("same agents");
        let verdict = check_bc(l, r, &z, Fragment::of(&[Op::K, Op::Bc]), DEFAULT_CAP);
        match verdict {
            Ok(v) if v.holds() => Outcome { checks: 1, failure: None },
            other => Outcome::fail(
                1,
                json!({
                    "verdict": other.map(|v| v.witness().map(|w| w.to_string())).map_err(|e| e.to_string()).ok(),
                    "relation": pairs_json(&z, l, r),
                    "left": model_json(l),
                    "right": model_json(r),
                }),
            ),
        }
    })
}

fn hennessy_milner_trial(rng: &mut ChaCha8Rng, budget: Budget) -> Outcome {
    let pair = model_pair(rng, budget.max_states, AGENTS.len(), false, false);
    let (l, r) = (&pair.left, &pair.right);
    let context = || json!({"kind": pair.kind, "left": model_json(l), "right": model_json(r)});
    let report = match hennessy_milner(l, r, DEFAULT_CAP) {
        Ok(report) => report,
        Err(e) => return Outcome::fail(0, json!({"error": e.to_string(), "models": context()})),
    };
    if let Some(w) = report.verdict.witness() {
        return Outcome::fail(1, json!({"witness": w.to_string(), "relation": pairs_json(&report.relation, l, r), "models": context()}));
    }
    // bisimilar copies must come out equivalent
    if pair.kind == PairKind::Copy {
        for &(w, v) in &pair.links {
            if !report.relation.contains(w, v) {
                return Outcome::fail(
                    2,
                    json!({"copyNotEquivalent": [l.state_name(w), r.state_name(v)], "models": context()}),
                );
            }
        }
    }
    Outcome { checks: 2, failure: None }
}

fn introspection_trial(rng: &mut ChaCha8Rng, budget: Budget) -> Outcome {
    let m = generate_with(rng, &spec(budget.max_states, AGENTS.len(), true, false));
    let all = Fragment::of(&Op::ALL);
    let statics = Fragment::of(&[Op::K, Op::Bc, Op::Bplus, Op::Gt]);
    let update = sample::formula(rng, all, &ATOMS, &AGENTS, budget.depth);
    let mut models = vec![("initial", m.clone()), ("upgraded", upgrade(&m, &update).expect("agents exist"))];
    if let Ok(a) = announce(&m, &update) {
        models.push(("announced", a));
    }
    let mut checks = 0;
    for _ in 0..budget.formulas {
        let agent = AGENTS[rng.random_range(0..AGENTS.len())];
        let alpha = sample::formula(rng, statics, &ATOMS, &AGENTS, budget.depth);
        let body = sample::formula(rng, statics, &ATOMS, &AGENTS, budget.depth);
        let belief = Formula::cond(agent, alpha, body);
        let f = Formula::implies(belief.clone(), Formula::know(agent, belief));
        for (stage, model) in &models {
            checks += 1;
            if !is_valid_on(model, &f).expect("agents exist") {
                return Outcome::fail(
                    checks,
                    json!({"formula": f.to_string(), "stage": stage, "update": update.to_string(), "model": model_json(&m)}),
                );
            }
        }
    }
    Outcome { checks, failure: None }
}

/// Uniformity (`uniform`) or local connectedness survives updates.
fn preservation_trial(rng: &mut ChaCha8Rng, budget: Budget, uniform: bool) -> Outcome {
    let m = generate_with(rng, &spec(budget.max_states, AGENTS.len(), uniform, !uniform));
    let holds = |x: &Model| if uniform { x.is_uniform() } else { x.is_locally_connected() };
    let mut checks = 0;
    for _ in 0..budget.formulas {
        let f = sample::formula(rng, Fragment::of(&Op::ALL), &ATOMS, &AGENTS, budget.depth);
        let mut outputs = vec![("upgrade", upgrade(&m, &f).expect("agents exist"))];
        if let Ok(a) = announce(&m, &f) {
            outputs.push(("announce", a));
        }
        for (op, out) in outputs {
            checks += 1;
            if !holds(&out) {
                return Outcome::fail(checks, json!({"operation": op, "formula": f.to_string(), "model": model_json(&m)}));
            }
        }
    }
    Outcome { checks, failure: None }
}

/// The eight operator reduction biconditionals for announcement and upgrade,
/// for agent `a`.
pub fn reduction_axioms(phi: &Formula, alpha: &Formula, psi: &Formula) -> Vec<Formula> {
    let a = "a";
    let ann = |x: Formula| Formula::announce(phi.clone(), x);
    let up = |x: Formula| Formula::upgrade(phi.clone(), x);
    let (imp, and, not) = (Formula::implies, Formula::and, Formula::not);
    let up_box = |boxed: fn(&str, Formula) -> Formula| {
        Formula::iff(
            up(boxed(a, psi.clone())),
            and(
                imp(phi.clone(), boxed(a, imp(phi.clone(), up(psi.clone())))),
                imp(
                    not(phi.clone()),
                    and(boxed(a, imp(not(phi.clone()), up(psi.clone()))), Formula::know(a, imp(phi.clone(), up(psi.clone())))),
                ),
            ),
        )
    };
    let cond = and(phi.clone(), up(alpha.clone()));
    vec![
        Formula::iff(ann(Formula::know(a, psi.clone())), imp(phi.clone(), Formula::know(a, ann(psi.clone())))),
        Formula::iff(
            ann(Formula::cond(a, alpha.clone(), psi.clone())),
            imp(phi.clone(), Formula::cond(a, and(phi.clone(), ann(alpha.clone())), ann(psi.clone()))),
        ),
        Formula::iff(ann(Formula::safe(a, psi.clone())), imp(phi.clone(), Formula::safe(a, ann(psi.clone())))),
        Formula::iff(up(Formula::know(a, psi.clone())), Formula::know(a, up(psi.clone()))),
        Formula::iff(
            up(Formula::cond(a, alpha.clone(), psi.clone())),
            Formula::or(
                and(Formula::khat(a, cond.clone()), Formula::cond(a, cond.clone(), up(psi.clone()))),
                and(not(Formula::khat(a, cond)), Formula::cond(a, up(alpha.clone()), up(psi.clone()))),
            ),
        ),
        up_box(|a, x| Formula::safe(a, x)),
        Formula::iff(ann(Formula::gt(a, psi.clone())), imp(phi.clone(), Formula::gt(a, ann(psi.clone())))),
        up_box(|a, x| Formula::gt(a, x)),
    ]
}

/// `count` instantiations of every reduction axiom with random static
/// formulas of depth at most 1, drawn from a stream no trial uses.
fn axiom_instances(seed: u64, count: usize) -> Vec<Formula> {
    let mut rng = trial_rng(seed, usize::MAX);
    let statics = Fragment::of(&[Op::K, Op::Bc, Op::Bplus, Op::Gt]);
    let draw = |rng: &mut ChaCha8Rng| sample::formula(rng, statics, &ATOMS, &AGENTS, 1);
    (0..count)
        .flat_map(|_| {
            let (phi, alpha, psi) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            reduction_axioms(&phi, &alpha, &psi)
        })
        .collect()
}

fn reduction_trial(rng: &mut ChaCha8Rng, budget: Budget, instances: &[Formula]) -> Outcome {
    let m = generate_with(rng, &spec(budget.max_states, AGENTS.len(), false, false));
    let f = sample::dynamic_formula(rng, Fragment::of(&Op::ALL), &ATOMS, &AGENTS, budget.depth);
    let (g, trace) = reduce_dynamic(&f);
    let context = |what: &str| json!({"failure": what, "formula": f.to_string(), "reduced": g.to_string(), "model": model_json(&m)});
    if !g.is_static() || trace.replay(&f).as_ref() != Some(&g) {
        return Outcome::fail(1, context("trace"));
    }
    let direct = truth_set(&m, &f).expect("agents exist");
    let reduced = truth_set(&m, &g).expect("agents exist");
    let naive: StateSet = reference::truth_states(&m, &f).into_iter().collect();
    let mut checks = 3 * m.num_states() as u64;
    if direct != reduced {
        return Outcome::fail(checks, context("reduced formula differs"));
    }
    let mut naive_sized = m.empty_set();
    naive_sized.union_with(&naive);
    if direct != naive_sized {
        return Outcome::fail(checks, context("evaluator differs from reference"));
    }
    for ax in instances {
        checks += 1;
        if !is_valid_on(&m, ax).expect("agents exist") {
            return Outcome::fail(checks, json!({"failure": "axiom instance", "axiom": ax.to_string(), "model": model_json(&m)}));
        }
    }
    Outcome { checks, failure: None }
}

/// Exhaustive check of a belief definition on every small model of its
/// class; the last trial re-checks the stored counterexamples.
fn definability_suite(budget: Budget, which: Translation) -> Trial {
    let orders = if which == Translation::Gt { Orders::Uniform } else { Orders::UniformConnected };
    let models = all_models(budget.max_states, orders);
    let statics = Fragment::of(&[Op::K, Op::Bc, Op::Bplus, Op::Gt]);
    let formulas = enumerate_all(&["p"], &["a"], statics, budget.depth);
    let translatable = match which {
        Translation::Gt => Fragment::of(&[Op::K, Op::Bc]),
        Translation::Safe => Fragment::of(&[Op::K, Op::Bc, Op::Bplus]),
    };
    let inputs = enumerate_all(&["p"], &["a"], translatable, budget.depth);
    Box::new(move |t, _| match models.get(t) {
        Some(m) => definability_trial(m, which, &formulas, &inputs),
        None => {
            let mut checks = 0;
            for c in counterexamples().into_iter().filter(|c| c.translation == which) {
                checks += 1;
                if let Err(e) = c.verify() {
                    return Outcome::fail(checks, json!({"counterexample": c.name, "mismatch": e}));
                }
            }
            Outcome { checks, failure: None }
        }
    })
}

/// The definition `B^α φ <-> ...` instantiated with every pair of enumerated
/// formulas; pairs are grouped by truth sets, since the instance's truth set
/// depends only on those of `α` and `φ`. Then every translatable input
/// against its recursive translation.
fn definability_trial(m: &Model, which: Translation, formulas: &[Formula], inputs: &[Formula]) -> Outcome {
    let mut reps: Vec<(StateSet, &Formula, u64)> = Vec::new();
    for f in formulas {
        let t = truth_set(m, f).expect("agent a exists");
        match reps.iter_mut().find(|(s, ..)| *s == t) {
            Some(entry) => entry.2 += 1,
            None => reps.push((t, f, 1)),
        }
    }
    let definition = |alpha: &Formula, phi: &Formula| {
        let a = "a";
        let rhs = match which {
            Translation::Gt => Formula::know(
                a,
                Formula::implies(Formula::and(alpha.clone(), Formula::not(Formula::gt_dia(a, alpha.clone()))), phi.clone()),
            ),
            Translation::Safe => Formula::implies(
                Formula::khat(a, alpha.clone()),
                Formula::khat(a, Formula::and(alpha.clone(), Formula::safe(a, Formula::implies(alpha.clone(), phi.clone())))),
            ),
        };
        Formula::iff(Formula::cond(a, alpha.clone(), phi.clone()), rhs)
    };
    let mut checks = 0;
    for (_, alpha, na) in &reps {
        for (_, phi, nf) in &reps {
            checks += na * nf;
            let f = definition(alpha, phi);
            if !is_valid_on(m, &f).expect("agent a exists") {
                return Outcome::fail(checks, json!({"instance": f.to_string(), "model": model_json(m)}));
            }
        }
    }
    for f in inputs {
        let image = match which {
            Translation::Gt => translate_gt(f),
            Translation::Safe => translate_safe(f),
        }
        .expect("inputs are in the translation's fragment");
        checks += 1;
        if truth_set(m, f).expect("agent a exists") != truth_set(m, &image).expect("agent a exists") {
            return Outcome::fail(checks, json!({"input": f.to_string(), "translation": image.to_string(), "model": model_json(m)}));
        }
    }
    Outcome { checks, failure: None }
}

/// `m` with extra atoms `x0, x1, ...` true exactly on the given sets.
fn with_atoms(m: &Model, sets: &[&StateSet]) -> Model {
    let n = m.num_states();
    let mut valuation: std::collections::BTreeMap<String, StateSet> =
        m.atoms().map(|p| (p.to_string(), m.valuation(p))).collect();
    for (k, s) in sets.iter().enumerate() {
        valuation.insert(format!("x{k}"), (*s).clone());
    }
    let agents = m.agents().len();
    Model::from_parts(
        m.states().to_vec(),
        m.agents().to_vec(),
        (0..agents).map(|i| m.epist(i).clone()).collect(),
        (0..agents).map(|i| (0..n).map(|w| m.plaus(i, w).clone()).collect()).collect(),
        valuation,
    )
    .expect("adding atoms keeps a model valid")
}

/// Truth-set pairs of all formulas of `fragment`, closed under its
/// operators. Each candidate applies one operator to earlier members; the
/// operands are stood in for by fresh atoms carrying their truth sets, and
/// the candidate is evaluated with the reference semantics.
pub fn formula_pair_closure(left: &Model, right: &Model, fragment: Fragment) -> HashSet<(StateSet, StateSet)> {
    let agents: Vec<String> = left.agents().to_vec();
    let mut members: Vec<(StateSet, StateSet)> = Vec::new();
    let mut seen = HashSet::new();
    let mut add = |pair: (StateSet, StateSet), members: &mut Vec<_>| {
        if seen.insert(pair.clone()) {
            members.push(pair);
        }
    };
    let set = |m: &Model, f: &Formula| -> StateSet {
        let mut s = m.empty_set();
        s.extend(reference::truth_states(m, f));
        s
    };
    add((set(left, &Formula::Top), set(right, &Formula::Top)), &mut members);
    let atoms: std::collections::BTreeSet<&str> = left.atoms().chain(right.atoms()).collect();
    for p in atoms {
        let f = Formula::atom(p);
        add((set(left, &f), set(right, &f)), &mut members);
    }
    let (x0, x1) = (Formula::atom("x0"), Formula::atom("x1"));
    let mut unary = vec![Formula::not(x0.clone())];
    let mut binary = vec![Formula::and(x0.clone(), x1.clone())];
    for a in &agents {
        if fragment.contains(Op::K) {
            unary.push(Formula::know(a.clone(), x0.clone()));
        }
        if fragment.contains(Op::Bplus) {
            unary.push(Formula::safe(a.clone(), x0.clone()));
        }
        if fragment.contains(Op::Gt) {
            unary.push(Formula::gt(a.clone(), x0.clone()));
        }
        if fragment.contains(Op::Bc) {
            binary.push(Formula::cond(a.clone(), x0.clone(), x1.clone()));
        }
    }
    let mut done = 0;
    while done < members.len() {
        let end = members.len();
        for j in done..end {
            let (l, r) = members[j].clone();
            let (ml, mr) = (with_atoms(left, &[&l]), with_atoms(right, &[&r]));
            for f in &unary {
                add((set(&ml, f), set(&mr, f)), &mut members);
            }
            // binary operators with at least one new operand, both orders
            for k in 0..end {
                if k >= done && k < j {
                    continue;
                }
                let (l2, r2) = members[k].clone();
                for (a, b) in [((&l, &r), (&l2, &r2)), ((&l2, &r2), (&l, &r))] {
                    let (ml, mr) = (with_atoms(left, &[a.0, b.0]), with_atoms(right, &[a.1, b.1]));
                    for f in &binary {
                        add((set(&ml, f), set(&mr, f)), &mut members);
                    }
                }
            }
        }
        done = end;
    }
    seen
}

fn pair_family_trial(t: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Outcome {
    let fragments = [
        Fragment::of(&[Op::K, Op::Bc]),
        Fragment::of(&[Op::Bc]),
        Fragment::of(&[Op::K, Op::Bplus, Op::Bc]),
        Fragment::of(&[Op::K, Op::Bc, Op::Bplus, Op::Gt]),
    ];
    let fragment = fragments[t % fragments.len()];
    let agents = 1 + t / fragments.len() % 2;
    let pair = model_pair(rng, budget.max_states, agents, false, false);
    let (l, r) = (&pair.left, &pair.right);
    let context = || json!({"fragment": fragment.to_string(), "left": model_json(l), "right": model_json(r)});
    let family = match definable_pairs(l, r, fragment, DEFAULT_CAP) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(0, json!({"error": e.to_string(), "models": context()})),
    };
    let computed: HashSet<(StateSet, StateSet)> = family.members().iter().cloned().collect();
    let oracle = formula_pair_closure(l, r, fragment);
    let checks = oracle.len().max(computed.len()) as u64;
    if computed != oracle {
        let show = |s: &HashSet<(StateSet, StateSet)>| -> Vec<(Vec<String>, Vec<String>)> {
            s.iter().map(|(x, y)| (l.names_of(x), r.names_of(y))).collect()
        };
        let missing: HashSet<_> = oracle.difference(&computed).cloned().collect();
        let extra: HashSet<_> = computed.difference(&oracle).cloned().collect();
        return Outcome::fail(checks, json!({"missing": show(&missing), "extra": show(&extra), "models": context()}));
    }
    Outcome { checks, failure: None }
}

/// One step of an update sequence.
#[derive(Clone, Debug)]
enum Step {
    Announce(Formula),
    Upgrade(Formula),
}

impl Step {
    fn apply(&self, m: &Model) -> Option<Model> {
        match self {
            Step::Announce(f) => announce(m, f).ok(),
            Step::Upgrade(f) => Some(upgrade(m, f).expect("agents exist")),
        }
    }

    fn json(&self) -> Value {
        match self {
            Step::Announce(f) => json!({"announce": f.to_string()}),
            Step::Upgrade(f) => json!({"upgrade": f.to_string()}),
        }
    }
}

/// Bisimilar pairs stay equivalent on `formulas` after one announcement,
/// one upgrade, and a random sequence of three updates.
fn future_trial(rng: &mut ChaCha8Rng, budget: Budget, formulas: &[Formula]) -> Outcome {
    let statics = Fragment::of(&[Op::K, Op::Bplus, Op::Bc]);
    let kbplus = Fragment::of(&[Op::K, Op::Bplus]);
    let mut pair = model_pair(rng, budget.max_states, AGENTS.len(), true, true);
    let mut z = greatest_structural(&pair.left, &pair.right, kbplus).expect("same agents");
    if z.is_empty() {
        let (right, _) = bisimilar_copy(rng, &pair.left);
        pair.right = right;
        z = greatest_structural(&pair.left, &pair.right, kbplus).expect("same agents");
    }
    let (l, r) = (&pair.left, &pair.right);
    let names = z.to_names(l, r);
    let phi = sample::formula(rng, statics, &ATOMS, &AGENTS, budget.depth);
    let mut sequences = vec![vec![Step::Announce(phi.clone())], vec![Step::Upgrade(phi.clone())]];
    sequences.push(
        (0..3)
            .map(|_| {
                let f = sample::formula(rng, statics, &ATOMS, &AGENTS, budget.depth);
                if rng.random_bool(0.5) { Step::Announce(f) } else { Step::Upgrade(f) }
            })
            .collect(),
    );
    let mut checks = 0;
    for steps in &sequences {
        let context = |extra: Value| {
            json!({
                "steps": steps.iter().map(Step::json).collect::<Vec<_>>(),
                "relation": names,
                "left": model_json(l),
                "right": model_json(r),
                "detail": extra,
            })
        };
        let (mut ml, mut mr) = (l.clone(), r.clone());
        let mut alive = names.clone();
        let mut survived = true;
        for step in steps {
            if let Step::Announce(f) = step {
                // related states must agree on what is announced
                let (tl, tr) = (truth_set(&ml, f).expect("agents exist"), truth_set(&mr, f).expect("agents exist"));
                for (x, y) in &alive {
                    checks += 1;
                    let (a, b) = (tl.contains(ml.state_id(x).unwrap()), tr.contains(mr.state_id(y).unwrap()));
                    if a != b {
                        return Outcome::fail(checks, context(json!({"announcementSplits": [x, y]})));
                    }
                }
            }
            match (step.apply(&ml), step.apply(&mr)) {
                (Some(a), Some(b)) => {
                    alive.retain(|(x, y)| a.state_id(x).is_ok() && b.state_id(y).is_ok());
                    ml = a;
                    mr = b;
                }
                _ => {
                    survived = false;
                    break;
                }
            }
        }
        if !survived || alive.is_empty() {
            continue;
        }
        let (mut el, mut er) = (Evaluator::new(&ml), Evaluator::new(&mr));
        for f in formulas {
            let (tl, tr) = (el.truth_set(f).expect("agents exist"), er.truth_set(f).expect("agents exist"));
            for (x, y) in &alive {
                checks += 1;
                if tl.contains(ml.state_id(x).unwrap()) != tr.contains(mr.state_id(y).unwrap()) {
                    return Outcome::fail(checks, context(json!({"formula": f.to_string(), "pair": [x, y]})));
                }
            }
        }
    }
    Outcome { checks, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: &str) -> Budget {
        let mut b = find(name).unwrap().budget;
        b.trials = 20;
        b
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for suite in SUITES {
            if matches!(suite.name, "thm22" | "thm27") {
                continue;
            }
            let report = run(suite.name, small(suite.name), 7).unwrap();
            assert!(report.passed(), "{report}");
            assert_eq!(report.trials, 20);
        }
    }

    #[test]
    fn single_trials_replay() {
        let b = small("thm9-K");
        let all = run("thm9-K", b, 3).unwrap();
        let one = run_one("thm9-K", b, 3, 5).unwrap();
        assert_eq!(one.trials, 1);
        assert!(one.checks <= all.checks);
    }

    fn failures_without_precondition(case: BisimCase) -> usize {
        let budget = find("thm24-3").unwrap().budget;
        let enumerated = enumerate_all(&ATOMS, &AGENTS, case.formulas, 1);
        (0..300).filter(|&t| bisim_trial(&mut trial_rng(1, t), budget, case, &enumerated).failure.is_some()).count()
    }

    #[test]
    fn dropping_class_constraints_produces_failures() {
        let gt = BisimCase::new(&[Op::K, Op::Gt], &[Op::K, Op::Bc]);
        assert!(failures_without_precondition(gt) > 0);
        let safe = BisimCase::new(&[Op::K, Op::Bplus], &[Op::K, Op::Bplus, Op::Bc]);
        assert!(failures_without_precondition(safe) > 0);
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run("thm99", small("thm9-K"), 0).unwrap_err(), UnknownSuite("thm99".into()));
    }

    #[test]
    fn closure_oracle_on_one_state() {
        let m = Model::from_json(
            r#"{"states":["w"],"agents":["a"],"epist":{"a":[["w","w"]]},
                "plaus":{"a":{"w":[["w","w"]]}},"valuation":{"p":["w"]}}"#,
        )
        .unwrap();
        assert_eq!(formula_pair_closure(&m, &m, Fragment::of(&[Op::K, Op::Bc])).len(), 2);
    }
}
