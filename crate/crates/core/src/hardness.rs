//! Vertex cover games: a k-uniform hypergraph becomes a safety or Muller
//! game whose smallest positional winning strategies correspond to its
//! smallest vertex covers.
//!
//! Player 1 picks an edge, player 0 answers with a vertex of that edge, and
//! a slide of `|E| + 1` positions for that vertex leads to the absorbing
//! pair `⊥0`, `⊥1`. Every distinct vertex player 0 ever answers costs a
//! whole slide.

use std::collections::BTreeSet;

use crate::analysis::check_strategy_winning;
use crate::arena::{Arena, Game, Player};
use crate::condition::{Condition, ConditionKind};
use crate::error::{Error, Result};
use crate::strategy::{PositionalStrategy, Strategy};

/// Largest vertex count accepted by [`vc_brute_force`].
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 20;

/// A k-uniform hypergraph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    pub vertex_count: usize,
    pub edges: Vec<BTreeSet<usize>>,
    pub k: usize,
}

/// A set of vertices.
pub type VertexCover = BTreeSet<usize>;

impl Hypergraph {
    pub fn new(vertex_count: usize, k: usize, edges: impl IntoIterator<Item = BTreeSet<usize>>) -> Self {
        Hypergraph { vertex_count, edges: edges.into_iter().collect(), k }
    }

    /// Problems with the hypergraph, empty when it is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.len() != self.k {
                problems.push(format!("edge {} has {} vertices, expected {}", i + 1, e.len(), self.k));
            }
            if let Some(v) = e.iter().find(|&&v| v >= self.vertex_count) {
                problems.push(format!("edge {} mentions vertex {} of {}", i + 1, v + 1, self.vertex_count));
            }
            if !seen.insert(e) {
                problems.push(format!("edge {} is repeated", i + 1));
            }
        }
        problems
    }

    /// The first edge missed by `cover`.
    pub fn uncovered_edge(&self, cover: &VertexCover) -> Option<usize> {
        self.edges.iter().position(|e| e.is_disjoint(cover))
    }

    fn slide_length(&self) -> usize {
        self.edges.len() + 1
    }

    fn edge_position(&self, e: usize) -> usize {
        2 + e
    }

    fn slide0(&self, v: usize, j: usize) -> usize {
        2 + self.edges.len() + v * self.slide_length() + j
    }

    fn slide1(&self, v: usize, j: usize) -> usize {
        2 + v * self.slide_length() + j
    }
}

const V0: usize = 0;
const BOTTOM0: usize = 1;
const V1: usize = 0;
const BOTTOM1: usize = 1;
const IDLE: usize = 0;

/// A smallest vertex cover, the lexicographically least among those of
/// least size.
pub fn vc_brute_force(h: &Hypergraph) -> Result<VertexCover> {
    if h.vertex_count > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::SizeLimit(format!(
            "{} vertices exceed the brute-force limit of {}",
            h.vertex_count, BRUTE_FORCE_VERTEX_LIMIT
        )));
    }
    fn pick(h: &Hypergraph, from: usize, left: usize, chosen: &mut Vec<usize>) -> bool {
        if left == 0 {
            let cover: VertexCover = chosen.iter().copied().collect();
            return h.uncovered_edge(&cover).is_none();
        }
        for v in from..h.vertex_count {
            chosen.push(v);
            if pick(h, v + 1, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for size in 0..=h.vertex_count {
        let mut chosen = Vec::new();
        if pick(h, 0, size, &mut chosen) {
            return Ok(chosen.into_iter().collect());
        }
    }
    Err(Error::Invalid("hypergraph has an edge outside its vertex range".into()))
}

/// The vertex cover game of `h` with a safety or Muller condition.
///
/// Player-0 positions are `v0`, `⊥0`, the edges in input order, then the
/// slide positions `(v, j)` row-major. Player-1 positions are `v1`, `⊥1`,
/// then `(v, j)` row-major. Action 0 of either player is the idle action
/// `_`; player 0's action `i + 1` answers vertex `i` and player 1's action
/// `i + 1` picks edge `i`.
pub fn build_vc_game(h: &Hypergraph, kind: ConditionKind) -> Result<Game> {
    let condition = match kind {
        ConditionKind::Safety => Condition::Safety,
        ConditionKind::Muller => Condition::Muller(vec![[BOTTOM0].into()]),
        other => return Err(Error::Invalid(format!("vertex cover games use safety or muller, not {}", other))),
    };
    if let Some(problem) = h.validate().into_iter().next() {
        return Err(Error::Invalid(problem));
    }
    let n = h.vertex_count;
    let m = h.edges.len();
    let slide = h.slide_length();
    let actions0 = std::iter::once("_".to_string()).chain((1..=n).map(|i| format!("v{i}"))).collect();
    let actions1 = std::iter::once("_".to_string()).chain((1..=m).map(|i| format!("e{i}"))).collect();
    let mut arena = Arena::new(2 + m + n * slide, 2 + n * slide, actions0, actions1, V0);

    arena.set_e0(V0, IDLE, V1);
    for (i, e) in h.edges.iter().enumerate() {
        arena.set_e1(V1, i + 1, h.edge_position(i));
        for &v in e {
            arena.set_e0(h.edge_position(i), v + 1, h.slide1(v, 0));
        }
    }
    for v in 0..n {
        for j in 0..slide {
            arena.set_e1(h.slide1(v, j), IDLE, h.slide0(v, j));
            let next = if j + 1 < slide { h.slide1(v, j + 1) } else { BOTTOM1 };
            arena.set_e0(h.slide0(v, j), IDLE, next);
        }
    }
    arena.set_e0(BOTTOM0, IDLE, BOTTOM1);
    arena.set_e1(BOTTOM1, IDLE, BOTTOM0);
    Ok(Game::new(arena, condition))
}

/// The positional strategy answering each edge with its least cover vertex,
/// restricted to the positions it reaches.
pub fn cover_to_strategy(h: &Hypergraph, cover: &VertexCover) -> Result<PositionalStrategy> {
    if let Some(edge) = h.uncovered_edge(cover) {
        return Err(Error::NotACover { edge: edge + 1 });
    }
    let mut choice = vec![(V0, IDLE), (BOTTOM0, IDLE)];
    let mut used = BTreeSet::new();
    for (i, e) in h.edges.iter().enumerate() {
        let v = *e.iter().find(|v| cover.contains(v)).expect("edge is covered");
        choice.push((h.edge_position(i), v + 1));
        used.insert(v);
    }
    for v in used {
        choice.extend((0..h.slide_length()).map(|j| (h.slide0(v, j), IDLE)));
    }
    Ok(PositionalStrategy::new(Player::Zero, choice))
}

/// The vertices a winning strategy answers at the edge positions.
pub fn strategy_to_cover(h: &Hypergraph, s: &PositionalStrategy) -> Result<VertexCover> {
    let game = build_vc_game(h, ConditionKind::Safety)?;
    match check_strategy_winning(&game, &Strategy::Positional(s.clone())) {
        Ok(verdict) if verdict.holds() => {}
        Ok(_) | Err(Error::Undefined(_) | Error::MalformedStrategy(_)) => return Err(Error::NotWinning),
        Err(e) => return Err(e),
    }
    Ok((0..h.edges.len())
        .map(|i| s.choice[&h.edge_position(i)] - 1)
        .collect())
}

/// Reachable player-0 positions of the strategy built from a cover of `j`
/// vertices in a hypergraph with `edge_count` edges.
pub fn size_formula(edge_count: usize, j: usize) -> usize {
    (edge_count + 1) * j + edge_count + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::strategy_size;

    fn h1() -> Hypergraph {
        Hypergraph::new(3, 2, [[0, 1].into(), [1, 2].into()])
    }

    #[test]
    fn brute_force_reference_covers() {
        assert_eq!(vc_brute_force(&h1()).unwrap(), VertexCover::from([1]));
        assert_eq!(vc_brute_force(&Hypergraph::new(3, 2, [])).unwrap(), VertexCover::new());
        let k3 = Hypergraph::new(3, 2, [[0, 1].into(), [0, 2].into(), [1, 2].into()]);
        assert_eq!(vc_brute_force(&k3).unwrap(), VertexCover::from([0, 1]));
        assert!(matches!(vc_brute_force(&Hypergraph::new(21, 2, [])), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn h1_game_shape() {
        let g = build_vc_game(&h1(), ConditionKind::Safety).unwrap();
        assert!(g.validate().is_empty());
        assert_eq!((g.arena.v0_count(), g.arena.v1_count()), (13, 11));
        let first_edge: Vec<usize> = g.arena.moves0(2).map(|(a, _)| a).collect();
        assert_eq!(first_edge, vec![1, 2]);
        // the last slide position of vertex 1 leads into the absorbing pair
        assert_eq!(g.arena.e0(2 + 2 + 2, IDLE), Some(BOTTOM1));
        assert_eq!(g.arena.e1(BOTTOM1, IDLE), Some(BOTTOM0));
        assert_eq!(g.arena.e0(BOTTOM0, IDLE), Some(BOTTOM1));
    }

    #[test]
    fn covers_become_strategies_of_formula_size() {
        let h = h1();
        for kind in [ConditionKind::Safety, ConditionKind::Muller] {
            let g = build_vc_game(&h, kind).unwrap();
            for (cover, size) in [(VertexCover::from([1]), 7), (VertexCover::from([0, 2]), 10)] {
                let s = cover_to_strategy(&h, &cover).unwrap();
                let wrapped = Strategy::Positional(s.clone());
                assert_eq!(strategy_size(&g, &wrapped).unwrap(), size);
                assert_eq!(size_formula(2, cover.len()), size);
                assert!(check_strategy_winning(&g, &wrapped).unwrap().holds());
                assert_eq!(strategy_to_cover(&h, &s).unwrap(), cover);
            }
        }
        assert_eq!(cover_to_strategy(&h, &[0].into()).unwrap_err(), Error::NotACover { edge: 2 });
    }

    #[test]
    fn incomplete_strategy_is_not_winning() {
        let h = h1();
        let mut s = cover_to_strategy(&h, &[1].into()).unwrap();
        s.choice.remove(&3);
        assert_eq!(strategy_to_cover(&h, &s).unwrap_err(), Error::NotWinning);
    }

    #[test]
    fn formula_forms_agree() {
        assert_eq!(size_formula(0, 0), 2);
        for m in 0..=100 {
            for j in 0..=100 {
                assert_eq!(size_formula(m, j), 1 + (m + 1) * (j + 1));
            }
        }
    }
}
