//! Search for reachable cycles whose inf-set satisfies, or violates, a
//! condition. Conditions refer to step-graph nodes, except Muller families,
//! which refer to projected positions via `origin`.

use std::collections::HashSet;

use super::graph::StepGraph;
use crate::condition::{Condition, PosSet};
use crate::error::{Error, Result};

/// Upper bound on the components visited by the Muller violation search.
pub(crate) const MULLER_SEARCH_LIMIT: usize = 200_000;

/// A strongly connected node set together with nodes a cycle through it
/// must visit. Any cycle inside `component` visiting `must` is a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Found {
    pub component: Vec<usize>,
    pub must: Vec<usize>,
}

impl Found {
    fn visiting(component: &[usize], must: Vec<usize>) -> Found {
        Found { component: component.to_vec(), must }
    }

    fn whole(component: &[usize]) -> Found {
        Found { component: component.to_vec(), must: component.to_vec() }
    }
}

fn mask_of(g: &StepGraph, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    (0..g.len()).map(keep).collect()
}

/// A reachable cycle whose inf-set satisfies `cond`.
pub(crate) fn accepting_cycle(g: &StepGraph, cond: &Condition, origin: &[usize]) -> Option<Found> {
    let reach = g.reachable();
    let within = |keep: &dyn Fn(usize) -> bool| g.cyclic_sccs(&mask_of(g, |v| reach[v] && keep(v)));
    match cond {
        Condition::Safety => within(&|_| true).first().map(|c| Found::visiting(c, vec![c[0]])),
        Condition::Buchi(f) => within(&|_| true)
            .iter()
            .find_map(|c| c.iter().find(|v| f.contains(v)).map(|&v| Found::visiting(c, vec![v]))),
        Condition::CoBuchi(f) => within(&|v| !f.contains(&v)).first().map(|c| Found::visiting(c, vec![c[0]])),
        Condition::GenBuchi(sets) => within(&|_| true).iter().find_map(|c| {
            let mut must = Vec::new();
            for set in sets {
                must.push(*c.iter().find(|v| set.contains(v))?);
            }
            must.sort_unstable();
            must.dedup();
            Some(Found::visiting(c, must))
        }),
        Condition::Parity(_) => {
            let mut colours: Vec<u32> = (0..g.len()).filter(|&v| reach[v]).map(|v| cond.colour(v)).collect();
            colours.sort_unstable();
            colours.dedup();
            colours.into_iter().filter(|d| d % 2 == 0).find_map(|d| {
                within(&|v| cond.colour(v) <= d).iter().find_map(|c| {
                    c.iter().find(|&&v| cond.colour(v) == d).map(|&v| Found::visiting(c, vec![v]))
                })
            })
        }
        Condition::Rabin(pairs) => pairs.iter().find_map(|(f, gs)| {
            within(&|v| f.contains(&v))
                .iter()
                .find_map(|c| c.iter().find(|v| gs.contains(v)).map(|&v| Found::visiting(c, vec![v])))
        }),
        Condition::Streett(pairs) => streett(g, pairs, mask_of(g, |v| reach[v])),
        Condition::Muller(family) => family.iter().find_map(|set| {
            within(&|v| set.contains(&origin[v]))
                .into_iter()
                .find(|c| c.iter().map(|&v| origin[v]).collect::<PosSet>() == *set)
                .map(|c| Found::whole(&c))
        }),
    }
}

/// Refines components until one satisfies every pair: a pair whose `F`
/// contains the component while its `G` meets it forces `G` out.
fn streett(g: &StepGraph, pairs: &[(PosSet, PosSet)], mask: Vec<bool>) -> Option<Found> {
    for c in g.cyclic_sccs(&mask) {
        let bad: Vec<&PosSet> = pairs
            .iter()
            .filter(|(f, gs)| c.iter().all(|v| f.contains(v)) && c.iter().any(|v| gs.contains(v)))
            .map(|(_, gs)| gs)
            .collect();
        if bad.is_empty() {
            return Some(Found::whole(&c));
        }
        let inner = mask_of(g, |v| c.binary_search(&v).is_ok() && !bad.iter().any(|gs| gs.contains(&v)));
        if let Some(found) = streett(g, pairs, inner) {
            return Some(found);
        }
    }
    None
}

/// A reachable cycle whose inf-set violates `cond`. Stuck positions are not
/// considered here.
pub(crate) fn violating_cycle(g: &StepGraph, cond: &Condition, origin: &[usize]) -> Result<Option<Found>> {
    match cond {
        Condition::Safety => Ok(None),
        Condition::Muller(family) => muller_violation(g, family, origin),
        other => {
            let dual = other.dual(g.len()).expect("every remaining condition has a dual");
            Ok(accepting_cycle(g, &dual, origin))
        }
    }
}

/// Every cycle's node set lies in a cyclic component, and every proper
/// subset of a component misses some node; removing nodes one at a time and
/// recomputing components therefore reaches every realizable inf-set.
fn muller_violation(g: &StepGraph, family: &[PosSet], origin: &[usize]) -> Result<Option<Found>> {
    let reach = g.reachable();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut stack: Vec<Vec<usize>> = g.cyclic_sccs(&reach);
    stack.reverse();
    while let Some(c) = stack.pop() {
        if !seen.insert(c.clone()) {
            continue;
        }
        if seen.len() > MULLER_SEARCH_LIMIT {
            return Err(Error::SizeLimit(format!(
                "muller check visited more than {MULLER_SEARCH_LIMIT} components"
            )));
        }
        let projection: PosSet = c.iter().map(|&v| origin[v]).collect();
        if !family.contains(&projection) {
            return Ok(Some(Found::whole(&c)));
        }
        let mut children = Vec::new();
        for &drop in &c {
            let mask = mask_of(g, |v| v != drop && c.binary_search(&v).is_ok());
            children.extend(g.cyclic_sccs(&mask));
        }
        children.reverse();
        stack.extend(children);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;

    fn id(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn loop_buchi_and_cobuchi() {
        let g = StepGraph::from_automaton(&a_loop(Condition::Safety));
        assert!(accepting_cycle(&g, &Condition::buchi([0]), &id(1)).is_some());
        assert!(accepting_cycle(&g, &Condition::cobuchi([0]), &id(1)).is_none());
    }

    #[test]
    fn rabin_pair_inside_q1() {
        let g = StepGraph::from_automaton(&a_rabin(Condition::Safety));
        let found = accepting_cycle(&g, &Condition::Rabin(vec![([1].into(), [1].into())]), &id(3)).unwrap();
        assert_eq!(found.component, vec![1]);
        assert!(accepting_cycle(&g, &Condition::Rabin(vec![([2].into(), [1].into())]), &id(3)).is_none());
    }

    #[test]
    fn streett_refines_past_bad_pairs() {
        // On A_two every non-empty subset of {q0, q1} is realizable.
        let g = StepGraph::from_automaton(&a_two(Condition::Safety));
        let pairs = vec![([0, 1].into(), [0].into())];
        let found = accepting_cycle(&g, &Condition::Streett(pairs), &id(2)).unwrap();
        assert_eq!(found.component, vec![1]);
    }

    #[test]
    fn muller_violation_finds_proper_subset() {
        let g = StepGraph::from_automaton(&a_two(Condition::Safety));
        let family = vec![[0, 1].into(), [0].into()];
        let found = violating_cycle(&g, &Condition::Muller(family), &id(2)).unwrap().unwrap();
        assert_eq!(found.component, vec![1]);
    }
}
