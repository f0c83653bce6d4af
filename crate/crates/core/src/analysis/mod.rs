//! Deciding games, checking that all plays of a one-player game are
//! accepted, and emptiness of deterministic automata.

pub(crate) mod emptiness;
pub(crate) mod graph;
pub(crate) mod parity;
mod solve;

pub use solve::{solve, winner, Solution, SOLVER_NODE_LIMIT};

use crate::arena::{Arena, Automaton, Game, Lasso, Player, Step, Witness};
use crate::condition::{Condition, PosSet};
use crate::error::{Error, Result};
use crate::product::{finite_memory_arena, moore_arena, restrict_by_positional};
use crate::strategy::Strategy;
use graph::StepGraph;

/// A play that is lost by player 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// An infinite play whose inf-set violates the condition.
    Lasso(Lasso),
    /// A finite play from the initial position ending at player-0 position
    /// `at`, where player 0 has no move.
    Stuck { stem: Vec<Step>, at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Counterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Checks every play of `arena`, whoever resolves the choices. The plays
/// must never get stuck at a player-0 position, and every infinite play must
/// satisfy `cond`. `cond` refers to arena positions except for Muller
/// families, which refer to the projections `origin`.
fn plays_satisfy(arena: &Arena, cond: &Condition, origin: &[usize]) -> Result<Verdict> {
    let g = StepGraph::from_arena(arena);
    if let Some((stem, at)) = g.path(g.init, |v| g.stuck[v], None, false) {
        return Ok(Verdict::Violated(Counterexample::Stuck { stem, at }));
    }
    let Some(found) = emptiness::violating_cycle(&g, cond, origin)? else {
        return Ok(Verdict::Holds);
    };
    let (stem, cycle) = g.lasso_through(&found.component, &found.must);
    Ok(Verdict::Violated(Counterexample::Lasso(Lasso::on_arena(arena, stem, cycle)?)))
}

/// Whether every play of `game` is won by player 0: no reachable finite
/// play ends at a player-0 position and every infinite play satisfies the
/// condition. Meant for one-player games for player 1, such as products
/// with a player-0 strategy; in general it quantifies over both players'
/// choices.
pub fn all_plays_satisfy(game: &Game) -> Result<Verdict> {
    let origin: Vec<usize> = (0..game.arena.v0_count()).collect();
    plays_satisfy(&game.arena, &game.condition, &origin)
}

/// Some accepting lasso of `aut`, or `None` if its language is empty.
pub fn nonempty(aut: &Automaton) -> Option<Lasso> {
    let g = StepGraph::from_automaton(aut);
    let origin: Vec<usize> = (0..aut.states()).collect();
    let found = emptiness::accepting_cycle(&g, &aut.condition, &origin)?;
    let (stem, cycle) = g.lasso_through(&found.component, &found.must);
    let letters = |steps: Vec<Step>| steps.into_iter().map(|(a, _)| a).collect::<Vec<_>>();
    Some(aut.lasso(&letters(stem), &letters(cycle)).expect("lasso follows the automaton"))
}

/// States visited infinitely often on the run over `u v^ω`, or `None` if
/// the run dies.
pub fn run_inf_set(aut: &Automaton, w: &Witness) -> Option<PosSet> {
    let mut q = aut.run(aut.init(), &w.u)?;
    let mut entries = Vec::new();
    let start = loop {
        if let Some(i) = entries.iter().position(|&e| e == q) {
            break i;
        }
        entries.push(q);
        q = aut.run(q, &w.v)?;
    };
    let mut inf = PosSet::new();
    for &e in &entries[start..] {
        let mut q = e;
        for &a in &w.v {
            inf.insert(q);
            q = aut.next(q, a)?;
        }
    }
    Some(inf)
}

/// Whether `aut` accepts the word `u v^ω`.
pub fn accepts_ultimately_periodic(aut: &Automaton, w: &Witness) -> bool {
    !w.v.is_empty() && run_inf_set(aut, w).is_some_and(|inf| aut.condition.accepts(&inf))
}

/// Checks a player-0 strategy through the matching product. Counterexamples
/// are plays of the original game.
pub fn check_strategy_winning(game: &Game, s: &Strategy) -> Result<Verdict> {
    if s.player() != Player::Zero {
        return Err(Error::WrongPlayer { expected: Player::Zero, found: s.player() });
    }
    let (arena, origin) = match s {
        Strategy::Positional(p) => {
            let restricted = restrict_by_positional(game, p)?;
            (restricted.game.arena, restricted.origin0)
        }
        Strategy::FiniteMemory(f) => {
            let p = finite_memory_arena(game, f)?;
            (p.arena, p.origin0)
        }
        Strategy::StandAlone(m) => {
            let p = moore_arena(game, m)?;
            (p.arena, p.origin0)
        }
    };
    let cond = match &game.condition {
        Condition::Muller(_) => game.condition.clone(),
        other => other.lift(&origin)?,
    };
    Ok(match plays_satisfy(&arena, &cond, &origin)? {
        Verdict::Holds => Verdict::Holds,
        Verdict::Violated(Counterexample::Stuck { stem, at }) => {
            Verdict::Violated(Counterexample::Stuck { stem, at: origin[at] })
        }
        Verdict::Violated(Counterexample::Lasso(l)) => {
            Verdict::Violated(Counterexample::Lasso(Lasso::on_arena(&game.arena, l.stem, l.cycle)?))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::strategy::{PositionalStrategy, StandAloneStrategy};

    #[test]
    fn triv_safety_holds() {
        assert!(all_plays_satisfy(&g_triv(Condition::Safety)).unwrap().holds());
    }

    #[test]
    fn triv_empty_buchi_gives_the_self_loop() {
        let v = all_plays_satisfy(&g_triv(Condition::buchi([]))).unwrap();
        let Verdict::Violated(Counterexample::Lasso(l)) = v else { panic!("{v:?}") };
        assert_eq!((l.stem, l.cycle), (vec![], vec![(0, 0)]));
    }

    #[test]
    fn stuck_position_is_reported() {
        let v = all_plays_satisfy(&g_stuck()).unwrap();
        assert_eq!(v, Verdict::Violated(Counterexample::Stuck { stem: vec![], at: 0 }));
    }

    #[test]
    fn loop_emptiness() {
        assert!(nonempty(&a_loop(Condition::buchi([0]))).is_some());
        assert!(nonempty(&a_loop(Condition::cobuchi([0]))).is_none());
        let l = nonempty(&a_rabin(Condition::Rabin(vec![([1].into(), [1].into())]))).unwrap();
        assert_eq!(l.inf_set(), PosSet::from([1]));
    }

    #[test]
    fn ultimately_periodic_runs() {
        let w = |u: &[usize], v: &[usize]| Witness::new(u.to_vec(), v.to_vec()).unwrap();
        assert!(accepts_ultimately_periodic(&a_loop(Condition::buchi([0])), &w(&[], &[0])));
        let two = a_two(Condition::buchi([1]));
        assert!(accepts_ultimately_periodic(&two, &w(&[], &[0])));
        assert!(!accepts_ultimately_periodic(&two, &w(&[], &[1])));
    }

    #[test]
    fn solve_reference_games() {
        let s = solve(&g_triv(Condition::Safety)).unwrap();
        assert_eq!(s.winner, Player::Zero);
        assert_eq!(s.strategy, Strategy::Positional(PositionalStrategy::new(Player::Zero, [(0, 0)])));
        assert_eq!(solve(&g_stuck()).unwrap().winner, Player::One);
    }

    #[test]
    fn constant_moore_strategy_on_rabin_game_loses() {
        let game = a_rabin(Condition::Rabin(vec![([1].into(), [1].into())])).to_game();
        let m = StandAloneStrategy { init: 0, inputs: 1, labels: vec![1], trans: vec![0] };
        let v = check_strategy_winning(&game, &Strategy::StandAlone(m)).unwrap();
        let Verdict::Violated(Counterexample::Lasso(l)) = v else { panic!("{v:?}") };
        assert!(!l.accepted(&game.condition));
        let good = StandAloneStrategy { init: 0, inputs: 1, labels: vec![0], trans: vec![0] };
        assert!(check_strategy_winning(&game, &Strategy::StandAlone(good)).unwrap().holds());
    }

    #[test]
    fn genbuchi_needs_memory_and_gets_it() {
        // Player 0 at position 0 chooses between 1 and 2; both return to 0.
        let aut = Automaton::from_transitions(
            3,
            &["l", "r"],
            0,
            &[(0, 0, 1), (0, 1, 2), (1, 0, 0), (2, 0, 0)],
            Condition::GenBuchi(vec![[1].into(), [2].into()]),
        );
        let game = aut.to_game();
        let s = solve(&game).unwrap();
        assert_eq!(s.winner, Player::Zero);
        assert!(check_strategy_winning(&game, &s.strategy).unwrap().holds());
        assert!(matches!(s.strategy, Strategy::FiniteMemory(_)));
    }
}
