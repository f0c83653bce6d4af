//! Game arenas, games, plays and the automaton view of one-player games.
//!
//! Positions are dense indices, separately numbered for each player. Actions
//! are interned names; everything below the parser works on their indices.

use std::fmt;

use crate::condition::{Condition, PosSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Zero => 0,
            Player::One => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::Zero),
            1 => Some(Player::One),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A position together with its owner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    V0(usize),
    V1(usize),
}

/// One round of a decision sequence: a player-0 action followed by a
/// player-1 action.
pub type Step = (usize, usize);

/// The arena `(V0, V1, A0, A1, E0, E1, v0)`.
///
/// Edge targets are stored unchecked so that malformed input can be reported
/// by [`Game::validate`] instead of rejected on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arena {
    v0_count: usize,
    v1_count: usize,
    actions0: Vec<String>,
    actions1: Vec<String>,
    e0: Vec<Option<usize>>,
    e1: Vec<Option<usize>>,
    init: usize,
}

impl Arena {
    pub fn new(
        v0_count: usize,
        v1_count: usize,
        actions0: Vec<String>,
        actions1: Vec<String>,
        init: usize,
    ) -> Self {
        Arena {
            e0: vec![None; v0_count * actions0.len()],
            e1: vec![None; v1_count * actions1.len()],
            v0_count,
            v1_count,
            actions0,
            actions1,
            init,
        }
    }

    pub fn v0_count(&self) -> usize {
        self.v0_count
    }

    pub fn v1_count(&self) -> usize {
        self.v1_count
    }

    pub fn actions0(&self) -> &[String] {
        &self.actions0
    }

    pub fn actions1(&self) -> &[String] {
        &self.actions1
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn set_init(&mut self, init: usize) {
        self.init = init;
    }

    /// Sets `E0(v, a) = w`. Panics if `v` or `a` is out of range.
    pub fn set_e0(&mut self, v: usize, a: usize, w: usize) {
        assert!(v < self.v0_count && a < self.actions0.len(), "e0 source out of range");
        self.e0[v * self.actions0.len() + a] = Some(w);
    }

    /// Sets `E1(w, b) = v`. Panics if `w` or `b` is out of range.
    pub fn set_e1(&mut self, w: usize, b: usize, v: usize) {
        assert!(w < self.v1_count && b < self.actions1.len(), "e1 source out of range");
        self.e1[w * self.actions1.len() + b] = Some(v);
    }

    pub fn clear_e0(&mut self, v: usize, a: usize) {
        self.e0[v * self.actions0.len() + a] = None;
    }

    pub fn e0(&self, v: usize, a: usize) -> Option<usize> {
        if v >= self.v0_count || a >= self.actions0.len() {
            return None;
        }
        self.e0[v * self.actions0.len() + a]
    }

    pub fn e1(&self, w: usize, b: usize) -> Option<usize> {
        if w >= self.v1_count || b >= self.actions1.len() {
            return None;
        }
        self.e1[w * self.actions1.len() + b]
    }

    /// Defined player-0 moves `(action, target)` at `v`, in action order.
    pub fn moves0(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.actions0.len()).filter_map(move |a| self.e0(v, a).map(|w| (a, w)))
    }

    /// Defined player-1 moves `(action, target)` at `w`, in action order.
    pub fn moves1(&self, w: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.actions1.len()).filter_map(move |b| self.e1(w, b).map(|v| (b, v)))
    }

    pub fn e0_entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.v0_count).flat_map(move |v| self.moves0(v).map(move |(a, w)| (v, a, w)))
    }

    pub fn e1_entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.v1_count).flat_map(move |w| self.moves1(w).map(move |(b, v)| (w, b, v)))
    }

    /// `|V0| + |V1| + |A0| + |A1|` plus the number of defined edges of each player.
    pub fn size(&self) -> usize {
        self.v0_count
            + self.v1_count
            + self.actions0.len()
            + self.actions1.len()
            + self.e0.iter().flatten().count()
            + self.e1.iter().flatten().count()
    }

    pub fn action0_index(&self, name: &str) -> Option<usize> {
        self.actions0.iter().position(|a| a == name)
    }

    pub fn action1_index(&self, name: &str) -> Option<usize> {
        self.actions1.iter().position(|a| a == name)
    }

    /// Follows one round from `v`: `E1(E0(v, a), b)`.
    pub fn step(&self, v: usize, (a, b): Step) -> Option<usize> {
        self.e0(v, a).and_then(|w| self.e1(w, b))
    }

    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.init >= self.v0_count {
            out.push(format!("init {} out of range (v0 has {} positions)", self.init, self.v0_count));
        }
        for (name, actions) in [("a0", &self.actions0), ("a1", &self.actions1)] {
            for (i, a) in actions.iter().enumerate() {
                if actions[..i].contains(a) {
                    out.push(format!("{name} action {a:?} is listed twice"));
                }
            }
        }
        for (v, a, w) in self.e0_entries() {
            if w >= self.v1_count {
                out.push(format!(
                    "e0 target out of range at ({v}, {}): {w} >= v1 count {}",
                    self.actions0[a], self.v1_count
                ));
            }
        }
        for (w, b, v) in self.e1_entries() {
            if v >= self.v0_count {
                out.push(format!(
                    "e1 target out of range at ({w}, {}): {v} >= v0 count {}",
                    self.actions1[b], self.v0_count
                ));
            }
        }
        out
    }
}

/// An arena with a winning condition for player 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    pub arena: Arena,
    pub condition: Condition,
}

/// What a finite decision sequence does to a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// Every required edge was defined; the induced play prefix.
    Play(Vec<Node>),
    /// The play ended because the next edge is undefined at the last node.
    /// The owner of that node loses.
    Stuck { play: Vec<Node>, at: Node },
}

impl RunOutcome {
    /// The winner of a finite play, if the play got stuck.
    pub fn finite_winner(&self) -> Option<Player> {
        match self {
            RunOutcome::Play(_) => None,
            RunOutcome::Stuck { at: Node::V0(_), .. } => Some(Player::One),
            RunOutcome::Stuck { at: Node::V1(_), .. } => Some(Player::Zero),
        }
    }
}

impl Game {
    pub fn new(arena: Arena, condition: Condition) -> Self {
        Game { arena, condition }
    }

    /// Lists every invariant violation; an empty list means the game is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut out = self.arena.violations();
        out.extend(self.condition.violations(self.arena.v0_count));
        out
    }

    pub fn size(&self) -> usize {
        self.arena.size()
    }

    /// Runs a finite decision sequence from the initial position.
    pub fn run_decisions(&self, decisions: &[Step]) -> Result<RunOutcome> {
        let arena = &self.arena;
        let mut v = arena.init;
        let mut play = vec![Node::V0(v)];
        for &(a, b) in decisions {
            if a >= arena.actions0.len() {
                return Err(Error::ActionUnknown { player: Player::Zero, index: a });
            }
            if b >= arena.actions1.len() {
                return Err(Error::ActionUnknown { player: Player::One, index: b });
            }
            let Some(w) = arena.e0(v, a) else {
                return Ok(RunOutcome::Stuck { play, at: Node::V0(v) });
            };
            play.push(Node::V1(w));
            let Some(next) = arena.e1(w, b) else {
                return Ok(RunOutcome::Stuck { play, at: Node::V1(w) });
            };
            play.push(Node::V0(next));
            v = next;
        }
        Ok(RunOutcome::Play(play))
    }

    /// Collapses a one-player game for player 0 into an automaton with
    /// `δ(q, a) = E1(E0(q, a), a′)` for the single player-1 action `a′`.
    pub fn as_automaton(&self) -> Result<Automaton> {
        let arena = &self.arena;
        if arena.actions1.len() != 1 {
            return Err(Error::NotOnePlayer(format!(
                "player 1 has {} actions, expected exactly one",
                arena.actions1.len()
            )));
        }
        if let Some(w) = (0..arena.v1_count).find(|&w| arena.e1(w, 0).is_none()) {
            return Err(Error::NotOnePlayer(format!("e1 is undefined at player-1 position {w}")));
        }
        let mut aut = Automaton::new(
            arena.v0_count,
            arena.actions0.clone(),
            arena.init,
            self.condition.clone(),
        );
        for (v, a, _) in arena.e0_entries() {
            if let Some(q) = arena.step(v, (a, 0)) {
                aut.set(v, a, q);
            }
        }
        Ok(aut)
    }
}

/// Name of the single player-1 action in the game encoding of an automaton.
pub const AUTOMATON_ACTION1: &str = "_";

/// A deterministic ω-automaton `(Q, Σ, δ, q0, F)`; `δ` may be partial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    states: usize,
    alphabet: Vec<String>,
    init: usize,
    delta: Vec<Option<usize>>,
    pub condition: Condition,
}

impl Automaton {
    pub fn new(states: usize, alphabet: Vec<String>, init: usize, condition: Condition) -> Self {
        Automaton {
            delta: vec![None; states * alphabet.len()],
            states,
            alphabet,
            init,
            condition,
        }
    }

    /// Builds an automaton from a letter-name list and `(q, letter, q')` triples.
    pub fn from_transitions(
        states: usize,
        alphabet: &[&str],
        init: usize,
        transitions: &[(usize, usize, usize)],
        condition: Condition,
    ) -> Self {
        let mut aut = Automaton::new(states, alphabet.iter().map(|s| s.to_string()).collect(), init, condition);
        for &(q, a, r) in transitions {
            aut.set(q, a, r);
        }
        aut
    }

    pub fn with_condition(&self, condition: Condition) -> Automaton {
        Automaton { condition, ..self.clone() }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn set(&mut self, q: usize, a: usize, r: usize) {
        assert!(q < self.states && a < self.alphabet.len(), "transition source out of range");
        self.delta[q * self.alphabet.len() + a] = Some(r);
    }

    pub fn next(&self, q: usize, a: usize) -> Option<usize> {
        if q >= self.states || a >= self.alphabet.len() {
            return None;
        }
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.states).flat_map(move |q| {
            (0..self.alphabet.len()).filter_map(move |a| self.next(q, a).map(|r| (q, a, r)))
        })
    }

    /// Runs a finite word; `None` if the run dies.
    pub fn run(&self, from: usize, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(from, |q, &a| self.next(q, a))
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.init >= self.states {
            out.push(format!("init {} out of range ({} states)", self.init, self.states));
        }
        for (i, a) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(a) {
                out.push(format!("alphabet letter {a:?} is listed twice"));
            }
        }
        for (q, a, r) in self.transitions() {
            if r >= self.states {
                out.push(format!("d target out of range at ({q}, {}): {r}", self.alphabet[a]));
            }
        }
        out.extend(self.condition.violations(self.states));
        out
    }

    /// Encodes the automaton as a one-player game: one player-1 position per
    /// defined transition, and a single player-1 action.
    pub fn to_game(&self) -> Game {
        let transitions: Vec<_> = self.transitions().collect();
        let mut arena = Arena::new(
            self.states,
            transitions.len(),
            self.alphabet.clone(),
            vec![AUTOMATON_ACTION1.to_string()],
            self.init,
        );
        for (w, &(q, a, r)) in transitions.iter().enumerate() {
            arena.set_e0(q, a, w);
            arena.set_e1(w, 0, r);
        }
        Game::new(arena, self.condition.clone())
    }

    /// Builds the lasso reading `stem` and then `cycle` from the initial state.
    pub fn lasso(&self, stem: &[usize], cycle: &[usize]) -> Result<Lasso> {
        let steps = |w: &[usize]| w.iter().map(|&a| (a, 0)).collect::<Vec<_>>();
        Lasso::from_steps(|q, (a, _)| self.next(q, a), self.init, steps(stem), steps(cycle))
    }
}

/// A stem followed by a cycle of decision rounds.
///
/// `trace0` lists the player-0 positions visited: the stem positions, the
/// cycle positions, and finally the first cycle position again.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<Step>,
    pub cycle: Vec<Step>,
    pub trace0: Vec<usize>,
}

impl Lasso {
    /// Builds a lasso on an arena, checking that all edges exist and that
    /// the cycle closes.
    pub fn on_arena(arena: &Arena, stem: Vec<Step>, cycle: Vec<Step>) -> Result<Lasso> {
        Lasso::from_steps(|v, s| arena.step(v, s), arena.init, stem, cycle)
    }

    pub(crate) fn from_steps(
        next: impl Fn(usize, Step) -> Option<usize>,
        init: usize,
        stem: Vec<Step>,
        cycle: Vec<Step>,
    ) -> Result<Lasso> {
        if cycle.is_empty() {
            return Err(Error::Invalid("lasso cycle must be non-empty".into()));
        }
        let mut trace0 = vec![init];
        let mut v = init;
        for (i, &s) in stem.iter().chain(&cycle).enumerate() {
            v = next(v, s).ok_or_else(|| {
                Error::Invalid(format!("lasso step {i} {s:?} is undefined at position {v}"))
            })?;
            trace0.push(v);
        }
        if trace0[stem.len()] != v {
            return Err(Error::Invalid(format!(
                "lasso cycle ends at {v}, not at its start {}",
                trace0[stem.len()]
            )));
        }
        Ok(Lasso { stem, cycle, trace0 })
    }

    pub fn size(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    /// Player-0 positions on the cycle: the positions seen infinitely often.
    pub fn inf_set(&self) -> PosSet {
        self.trace0[self.stem.len()..self.size()].iter().copied().collect()
    }

    pub fn accepted(&self, condition: &Condition) -> bool {
        condition.accepts(&self.inf_set())
    }

    /// Checks that the lasso is a play of `arena`.
    pub fn is_valid_for(&self, arena: &Arena) -> bool {
        Lasso::on_arena(arena, self.stem.clone(), self.cycle.clone()).is_ok_and(|l| l == *self)
    }
}

/// An ultimately periodic word `u v^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl Witness {
    pub fn new(u: Vec<usize>, v: Vec<usize>) -> Result<Witness> {
        if v.is_empty() {
            return Err(Error::Invalid("witness period must be non-empty".into()));
        }
        Ok(Witness { u, v })
    }

    pub fn size(&self) -> usize {
        self.u.len() + self.v.len()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// One position per player, one action each, self-loop.
    pub fn g_triv(condition: Condition) -> Game {
        let mut arena = Arena::new(1, 1, vec!["a".into()], vec!["x".into()], 0);
        arena.set_e0(0, 0, 0);
        arena.set_e1(0, 0, 0);
        Game::new(arena, condition)
    }

    /// `G_triv` without player-0 edges.
    pub fn g_stuck() -> Game {
        let mut arena = Arena::new(1, 1, vec!["a".into()], vec!["x".into()], 0);
        arena.set_e1(0, 0, 0);
        Game::new(arena, Condition::Safety)
    }

    pub fn a_loop(condition: Condition) -> Automaton {
        Automaton::from_transitions(1, &["a"], 0, &[(0, 0, 0)], condition)
    }

    pub fn a_two(condition: Condition) -> Automaton {
        Automaton::from_transitions(2, &["a", "b"], 0, &[(0, 0, 1), (0, 1, 0), (1, 0, 1), (1, 1, 0)], condition)
    }

    pub fn a_rabin(condition: Condition) -> Automaton {
        Automaton::from_transitions(
            3,
            &["a", "b"],
            0,
            &[(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 1, 2)],
            condition,
        )
    }

    pub fn a_gb() -> Automaton {
        Automaton::from_transitions(
            3,
            &["a"],
            0,
            &[(0, 0, 1), (1, 0, 2), (2, 0, 0)],
            Condition::GenBuchi(vec![[1].into(), [2].into()]),
        )
    }
}
