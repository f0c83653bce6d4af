//! The round graph of an arena: player-0 positions connected by complete
//! rounds `(a, b)`. Plays that cycle forever are cycles of this graph.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::NodeFiltered;

use crate::arena::{Arena, Automaton, Step};

#[derive(Debug, Clone)]
pub(crate) struct StepGraph {
    pub init: usize,
    /// Outgoing rounds of each node, sorted by step.
    pub succ: Vec<Vec<(Step, usize)>>,
    /// Nodes where player 0 has no move at all.
    pub stuck: Vec<bool>,
    topology: DiGraph<(), ()>,
}

impl StepGraph {
    fn build(init: usize, succ: Vec<Vec<(Step, usize)>>, stuck: Vec<bool>) -> StepGraph {
        let mut topology = DiGraph::with_capacity(succ.len(), 0);
        for _ in 0..succ.len() {
            topology.add_node(());
        }
        for (v, out) in succ.iter().enumerate() {
            let mut targets: Vec<usize> = out.iter().map(|&(_, t)| t).collect();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                topology.add_edge(NodeIndex::new(v), NodeIndex::new(t), ());
            }
        }
        StepGraph { init, succ, stuck, topology }
    }

    pub fn from_arena(arena: &Arena) -> StepGraph {
        let succ = (0..arena.v0_count())
            .map(|v| {
                arena
                    .moves0(v)
                    .flat_map(|(a, w)| arena.moves1(w).map(move |(b, t)| ((a, b), t)))
                    .collect()
            })
            .collect();
        let stuck = (0..arena.v0_count()).map(|v| arena.moves0(v).next().is_none()).collect();
        StepGraph::build(arena.init(), succ, stuck)
    }

    pub fn from_automaton(aut: &Automaton) -> StepGraph {
        let mut succ = vec![Vec::new(); aut.states()];
        for (q, a, r) in aut.transitions() {
            succ[q].push(((a, 0), r));
        }
        let stuck = succ.iter().map(Vec::is_empty).collect();
        StepGraph::build(aut.init(), succ, stuck)
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if self.init >= self.len() {
            return seen;
        }
        seen[self.init] = true;
        let mut stack = vec![self.init];
        while let Some(v) = stack.pop() {
            for &(_, t) in &self.succ[v] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Strongly connected components of the subgraph induced by `mask` that
    /// contain a cycle. Each component is sorted; components are ordered by
    /// their least node.
    pub fn cyclic_sccs(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let filtered = NodeFiltered::from_fn(&self.topology, |n: NodeIndex| mask[n.index()]);
        let mut out: Vec<Vec<usize>> = tarjan_scc(&filtered)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
                c.sort_unstable();
                c
            })
            .filter(|c| c.len() > 1 || self.succ[c[0]].iter().any(|&(_, t)| t == c[0]))
            .collect();
        out.sort();
        out
    }

    /// Shortest path from `from` to a node satisfying `target`, staying in
    /// `mask` after the first node. With `nonempty`, the path takes at least
    /// one step even if `from` is a target. Edges are explored in step order.
    pub fn path(
        &self,
        from: usize,
        target: impl Fn(usize) -> bool,
        mask: Option<&[bool]>,
        nonempty: bool,
    ) -> Option<(Vec<Step>, usize)> {
        if !nonempty && target(from) {
            return Some((Vec::new(), from));
        }
        let allowed = |v: usize| mask.is_none_or(|m| m[v]);
        let mut parent: Vec<Option<(usize, Step)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        let unwind = |parent: &[Option<(usize, Step)>], mut v: usize| {
            let mut steps = Vec::new();
            while v != from {
                let (p, s) = parent[v].expect("on the search tree");
                steps.push(s);
                v = p;
            }
            steps.reverse();
            steps
        };
        while let Some(u) = queue.pop_front() {
            for &(s, t) in &self.succ[u] {
                if !allowed(t) {
                    continue;
                }
                if t == from && target(t) {
                    let mut steps = unwind(&parent, u);
                    steps.push(s);
                    return Some((steps, t));
                }
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((u, s));
                    if target(t) {
                        return Some((unwind(&parent, t), t));
                    }
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A stem to the nearest node of `must` and a cycle inside `component`
    /// that visits every node of `must`. `component` must be strongly
    /// connected, contain `must`, and be reachable.
    pub fn lasso_through(&self, component: &[usize], must: &[usize]) -> (Vec<Step>, Vec<Step>) {
        let mut mask = vec![false; self.len()];
        component.iter().for_each(|&v| mask[v] = true);
        let (stem, start) = self.path(self.init, |v| must.contains(&v), None, false).expect("component is reachable");
        let mut cycle = Vec::new();
        let mut at = start;
        for &m in must.iter().filter(|&&m| m != start) {
            let (steps, _) = self.path(at, |v| v == m, Some(&mask), false).expect("strongly connected");
            cycle.extend(steps);
            at = m;
        }
        let (back, _) = self.path(at, |v| v == start, Some(&mask), cycle.is_empty()).expect("strongly connected");
        cycle.extend(back);
        (stem, cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::condition::Condition;

    #[test]
    fn a_rabin_has_two_cyclic_components() {
        let g = StepGraph::from_automaton(&a_rabin(Condition::Safety));
        let all = vec![true; 3];
        assert_eq!(g.cyclic_sccs(&all), vec![vec![0, 1], vec![2]]);
        assert_eq!(g.cyclic_sccs(&[true, false, false]), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn lasso_visits_every_required_node() {
        let g = StepGraph::from_automaton(&a_gb());
        let (stem, cycle) = g.lasso_through(&[0, 1, 2], &[1, 2]);
        assert_eq!(stem.len(), 1);
        assert_eq!(cycle.len(), 3);
    }

    #[test]
    fn self_loop_cycle_is_nonempty() {
        let g = StepGraph::from_automaton(&a_loop(Condition::Safety));
        assert_eq!(g.lasso_through(&[0], &[0]), (vec![], vec![(0, 0)]));
    }
}
