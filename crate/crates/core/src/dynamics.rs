//! Public announcement and radical upgrade.

use crate::error::{Error, Result};
use crate::model::{Model, Relation, StateSet};
use crate::semantics::truth_set;
use crate::syntax::Formula;

/// `m!f`: keeps exactly the `f`-states.
pub fn announce(m: &Model, f: &Formula) -> Result<Model> {
    let keep = truth_set(m, f)?;
    announce_set(m, &keep)
        .map(|(model, _)| model)
        .ok_or_else(|| Error::EmptyAnnouncement(f.to_string()))
}

/// Restricts `m` to `keep`. Also returns the original index of each surviving
/// state. `None` if `keep` is empty.
pub fn announce_set(m: &Model, keep: &StateSet) -> Option<(Model, Vec<usize>)> {
    let kept: Vec<usize> = keep.ones().collect();
    if kept.is_empty() {
        return None;
    }
    let states = kept.iter().map(|&w| m.state_name(w).to_string()).collect();
    let n = m.agents().len();
    let epist = (0..n).map(|i| m.epist(i).restrict(&kept)).collect();
    let plaus = (0..n)
        .map(|i| kept.iter().map(|&w| m.plaus(i, w).restrict(&kept)).collect())
        .collect();
    let valuation = m
        .atoms()
        .map(|p| {
            let ext = m.valuation(p);
            let mut set = StateSet::with_capacity(kept.len());
            for (j, &w) in kept.iter().enumerate() {
                if ext.contains(w) {
                    set.insert(j);
                }
            }
            (p.to_string(), set)
        })
        .collect();
    let model = Model::from_parts_unchecked(states, m.agents().to_vec(), epist, plaus, valuation);
    Some((model, kept))
}

/// `m↑f`: every `f`-state becomes strictly more plausible than every
/// `~f`-state, order within each zone unchanged.
pub fn upgrade(m: &Model, f: &Formula) -> Result<Model> {
    Ok(upgrade_set(m, &truth_set(m, f)?))
}

/// Upgrade with the zone `good` given as a state set.
pub fn upgrade_set(m: &Model, good: &StateSet) -> Model {
    let size = m.num_states();
    let mut bad = m.all_states();
    bad.difference_with(good);
    let rebuild = |r: &Relation| {
        let mut out = Relation::empty(size);
        for (x, y) in r.pairs() {
            if good.contains(x) == good.contains(y) {
                out.insert(x, y);
            }
        }
        for x in good.ones() {
            for y in bad.ones() {
                out.insert(x, y);
            }
        }
        out
    };
    let n = m.agents().len();
    let epist = (0..n).map(|i| m.epist(i).clone()).collect();
    let plaus = (0..n)
        .map(|i| (0..size).map(|w| rebuild(m.plaus(i, w))).collect())
        .collect();
    let valuation = m.atoms().map(|p| (p.to_string(), m.valuation(p))).collect();
    Model::from_parts_unchecked(m.states().to_vec(), m.agents().to_vec(), epist, plaus, valuation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn two_total() -> Model {
        Model::from_json(
            r#"{"states":["v","w"],"agents":["a"],
                "epist":{"a":[["v","v"],["v","w"],["w","v"],["w","w"]]},
                "plaus":{"a":{"v":[["v","v"],["v","w"],["w","v"],["w","w"]],
                              "w":[["v","v"],["v","w"],["w","v"],["w","w"]]}},
                "valuation":{"p":["w"]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn trivial_announcements() {
        let m = two_total();
        assert_eq!(announce(&m, &Formula::Top).unwrap(), m);
        assert!(matches!(announce(&m, &Formula::Bot), Err(Error::EmptyAnnouncement(_))));
    }

    #[test]
    fn announcement_restricts() {
        let m = two_total();
        let r = announce(&m, &parse("p").unwrap()).unwrap();
        assert_eq!(r.states(), ["w"]);
        assert_eq!(r.epist(0).pairs().collect::<Vec<_>>(), [(0, 0)]);
        assert_eq!(r.plaus(0, 0).pairs().collect::<Vec<_>>(), [(0, 0)]);
        assert_eq!(r.names_of(&r.valuation("p")), ["w"]);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn upgrade_promotes_zone() {
        let m = two_total();
        assert_eq!(upgrade(&m, &Formula::Top).unwrap(), m);
        assert_eq!(upgrade(&m, &Formula::Bot).unwrap(), m);
        let u = upgrade(&m, &parse("p").unwrap()).unwrap();
        let (v, w) = (0, 1);
        // {(w,w),(v,v),(w,v)}
        let mut pairs: Vec<_> = u.plaus(0, w).pairs().collect();
        pairs.sort();
        assert_eq!(pairs, [(v, v), (w, v), (w, w)]);
        assert!(u.lt(0, w, w, v));
        assert!(u.violations().is_empty());
    }
}
