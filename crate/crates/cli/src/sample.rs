//! Random formulas.

use plausikit::{Formula, Fragment, Op};
use rand::seq::IndexedRandom;
use rand::Rng;

/// Draws a formula of depth at most `depth` over `fragment`, `atoms` and
/// `agents`. Connectives and leaves are chosen uniformly; each level stops
/// early with probability 1/4.
pub fn formula(rng: &mut impl Rng, fragment: Fragment, atoms: &[&str], agents: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return leaf(rng, atoms);
    }
    let mut choices = vec!["not", "and", "or", "implies"];
    for (op, name) in [
        (Op::K, "K"),
        (Op::Bplus, "Bplus"),
        (Op::Gt, "Gt"),
        (Op::Bc, "Bc"),
        (Op::Ann, "Ann"),
        (Op::Up, "Up"),
    ] {
        if fragment.contains(op) {
            choices.push(name);
        }
    }
    let sub = |rng: &mut _| formula(rng, fragment, atoms, agents, depth - 1);
    let agent = |rng: &mut _| agents.choose(rng).expect("at least one agent").to_string();
    match *choices.choose(rng).expect("nonempty") {
        "not" => Formula::not(sub(rng)),
        "and" => Formula::and(sub(rng), sub(rng)),
        "or" => Formula::or(sub(rng), sub(rng)),
        "implies" => Formula::implies(sub(rng), sub(rng)),
        "K" => Formula::know(agent(rng), sub(rng)),
        "Bplus" => Formula::safe(agent(rng), sub(rng)),
        "Gt" => Formula::gt(agent(rng), sub(rng)),
        "Bc" => {
            let i = agent(rng);
            Formula::cond(i, sub(rng), sub(rng))
        }
        "Ann" => Formula::announce(sub(rng), sub(rng)),
        _ => Formula::upgrade(sub(rng), sub(rng)),
    }
}

/// Like [`formula`] but the root is a dynamic operator.
pub fn dynamic_formula(rng: &mut impl Rng, fragment: Fragment, atoms: &[&str], agents: &[&str], depth: usize) -> Formula {
    let depth = depth.max(1);
    let pre = formula(rng, fragment, atoms, agents, depth - 1);
    let body = formula(rng, fragment, atoms, agents, depth - 1);
    if rng.random_bool(0.5) {
        Formula::announce(pre, body)
    } else {
        Formula::upgrade(pre, body)
    }
}

fn leaf(rng: &mut impl Rng, atoms: &[&str]) -> Formula {
    let k = rng.random_range(0..atoms.len() + 2);
    match k {
        0 => Formula::Top,
        1 => Formula::Bot,
        _ => Formula::atom(atoms[k - 2]),
    }
}
