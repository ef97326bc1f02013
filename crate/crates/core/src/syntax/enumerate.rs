//! Exhaustive enumeration of formulas up to a depth bound.
//!
//! Boolean basis: `~` and `&` only. Leaves are `true` followed by the atoms in
//! the given order. Formulas are produced by increasing depth; within one
//! depth the order is `~x`, `x & y`, then per agent `K`, `Bplus`, `Gt`, then
//! per agent `B[i | x] y`, then `[! x] y`, `[up x] y`. Unary operators range
//! over the previous depth, binary ones over all pairs of lower formulas in
//! which at least one side has the previous depth, ordered by the position of
//! the left then the right operand.

use std::rc::Rc;

use super::{Formula, Fragment, Op};

/// All formulas of depth at most `depth`, lazily for the top layer.
pub fn enumerate(
    atoms: &[&str],
    agents: &[&str],
    fragment: Fragment,
    depth: usize,
) -> impl Iterator<Item = Formula> {
    let leaves: Vec<Formula> = std::iter::once(Formula::Top)
        .chain(atoms.iter().map(|p| Formula::atom(*p)))
        .collect();
    let agents: Rc<Vec<String>> = Rc::new(agents.iter().map(|a| a.to_string()).collect());

    // lower[k] holds formulas of depth exactly k, for k < depth
    let mut lower: Vec<Formula> = leaves.clone();
    let mut last_start = 0;
    for _ in 1..depth {
        let layer: Vec<Formula> = layer(Rc::new(lower.clone()), last_start, agents.clone(), fragment).collect();
        last_start = lower.len();
        lower.extend(layer);
    }
    let top: Box<dyn Iterator<Item = Formula>> = if depth == 0 {
        Box::new(std::iter::empty())
    } else {
        Box::new(layer(Rc::new(lower.clone()), last_start, agents, fragment))
    };
    lower.into_iter().chain(top)
}

/// Collects [`enumerate`].
pub fn enumerate_all(atoms: &[&str], agents: &[&str], fragment: Fragment, depth: usize) -> Vec<Formula> {
    enumerate(atoms, agents, fragment, depth).collect()
}

/// Formulas of depth exactly one more than `lower[last_start..]`.
fn layer(
    lower: Rc<Vec<Formula>>,
    last_start: usize,
    agents: Rc<Vec<String>>,
    fragment: Fragment,
) -> impl Iterator<Item = Formula> {
    let n = lower.len();
    let newest = move |l: Rc<Vec<Formula>>| (last_start..n).map(move |i| l[i].clone());
    let pairs = move |l: Rc<Vec<Formula>>| {
        (0..n)
            .flat_map(move |i| (0..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| i >= last_start || j >= last_start)
            .map(move |(i, j)| (l[i].clone(), l[j].clone()))
    };

    let negations = newest(lower.clone()).map(Formula::not);
    let conjunctions = pairs(lower.clone()).map(|(a, b)| Formula::and(a, b));

    let unary_ops: Vec<Op> = [Op::K, Op::Bplus, Op::Gt]
        .into_iter()
        .filter(|op| fragment.contains(*op))
        .collect();
    let l = lower.clone();
    let modal = {
        let agents = agents.clone();
        (0..agents.len()).flat_map(move |ai| {
            let agent = agents[ai].clone();
            let l = l.clone();
            unary_ops.clone().into_iter().flat_map(move |op| {
                let agent = agent.clone();
                newest(l.clone()).map(move |x| match op {
                    Op::K => Formula::know(agent.clone(), x),
                    Op::Bplus => Formula::safe(agent.clone(), x),
                    _ => Formula::gt(agent.clone(), x),
                })
            })
        })
    };

    let l = lower.clone();
    let conditional = (0..agents.len())
        .filter(move |_| fragment.contains(Op::Bc))
        .flat_map(move |ai| {
            let agent = agents[ai].clone();
            pairs(l.clone()).map(move |(c, x)| Formula::cond(agent.clone(), c, x))
        });

    let dynamic = [Op::Ann, Op::Up]
        .into_iter()
        .filter(move |op| fragment.contains(*op))
        .flat_map(move |op| {
            pairs(lower.clone()).map(move |(p, x)| match op {
                Op::Ann => Formula::announce(p, x),
                _ => Formula::upgrade(p, x),
            })
        });

    negations.chain(conjunctions).chain(modal).chain(conditional).chain(dynamic)
}
