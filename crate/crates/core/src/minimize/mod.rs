//! Smallest winning strategies: exact search over canonical candidates,
//! and the two-phase approximation that starts from a greedy strategy.

mod enumerate;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{check_strategy_winning, solve, winner};
use crate::arena::{Game, Player};
use crate::certificates::ceil_log;
use crate::error::{Error, Result};
use crate::strategy::{strategy_size, PositionalStrategy, Strategy, StrategyKind};
use enumerate::{Budget, Flow};

/// Default number of candidate search nodes before giving up.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Minimum {
    /// A smallest winning strategy of the requested kind, with its size.
    Found { strategy: Strategy, size: usize },
    NoneWithinBound,
}

fn require_player_zero_wins(game: &Game) -> Result<()> {
    match winner(game)? {
        Player::Zero => Ok(()),
        Player::One => Err(Error::PlayerZeroLoses),
    }
}

/// A winning strategy obtained by deleting player-0 edges in a seeded random
/// order, keeping each deletion after which player 0 still wins.
///
/// The result is positional when every reachable position is left with one
/// move; otherwise it is the solver's strategy on the thinned game.
pub fn initial_strategy(game: &Game, seed: u64) -> Result<Strategy> {
    require_player_zero_wins(game)?;
    let mut edges: Vec<(usize, usize)> = game.arena.e0_entries().map(|(v, a, _)| (v, a)).collect();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut current = game.clone();
    for (v, a) in edges {
        if current.arena.moves0(v).nth(1).is_none() {
            continue;
        }
        let mut trial = current.clone();
        trial.arena.clear_e0(v, a);
        if winner(&trial)? == Player::Zero {
            current = trial;
        }
    }
    let choice = (0..current.arena.v0_count()).filter_map(|v| current.arena.moves0(v).next().map(|(a, _)| (v, a)));
    let positional = PositionalStrategy::new(Player::Zero, choice).pruned(&game.arena);
    let single = positional.choice.keys().all(|&v| current.arena.moves0(v).nth(1).is_none());
    let strategy = if single {
        Strategy::Positional(positional)
    } else {
        solve(&current)?.strategy
    };
    debug_assert!(check_strategy_winning(game, &strategy)?.holds());
    Ok(strategy)
}

/// The smallest winning strategy of `kind` with size at most `bound`, the
/// lexicographically least canonical one among equals. `budget` bounds the
/// number of candidate search nodes.
pub fn min_strategy_exact(game: &Game, kind: StrategyKind, bound: usize, budget: u64) -> Result<Minimum> {
    let mut budget = Budget::new(budget);
    let mut best: Option<(Strategy, usize)> = None;
    let arena = &game.arena;
    let keep = |s: Strategy, size: usize, best: &mut Option<(Strategy, usize)>| -> Result<Flow> {
        if check_strategy_winning(game, &s)?.holds() {
            *best = Some((s, size));
            return Ok(Flow::Shrink(size));
        }
        Ok(Flow::Continue)
    };
    match kind {
        StrategyKind::Positional => enumerate::positional(arena, bound, &mut budget, &mut |s, size| {
            keep(Strategy::Positional(s.clone()), size, &mut best)
        })?,
        StrategyKind::FiniteMemory => enumerate::finite_memory(arena, bound, &mut budget, &mut |s, size| {
            keep(Strategy::FiniteMemory(s.clone()), size, &mut best)
        })?,
        StrategyKind::StandAlone => {
            for states in 1..=bound {
                enumerate::moore(arena, states, &mut budget, &mut |m| {
                    Ok(match keep(Strategy::StandAlone(m.clone()), states, &mut best)? {
                        Flow::Continue => Flow::Continue,
                        _ => Flow::Stop,
                    })
                })?;
                if best.is_some() {
                    break;
                }
            }
        }
    }
    Ok(match best {
        Some((strategy, size)) => Minimum::Found { strategy, size },
        None => Minimum::NoneWithinBound,
    })
}

/// A smallest winning strategy of `kind`, or `NoneWithinBound` if no
/// strategy of that kind wins (positional strategies can lose where memory
/// wins). The search is capped by the number of player-0 positions for
/// positional strategies and by the size of the solver's strategy otherwise.
pub fn min_strategy(game: &Game, kind: StrategyKind, budget: u64) -> Result<Minimum> {
    let solution = solve(game)?;
    if solution.winner != Player::Zero {
        return Err(Error::PlayerZeroLoses);
    }
    let cap = match kind {
        StrategyKind::Positional => game.arena.v0_count(),
        other => strategy_size(game, &solution.strategy.convert(game, other)?)?,
    };
    min_strategy_exact(game, kind, cap, budget)
}

/// Size of a smallest winning strategy of `kind`; see [`min_strategy`].
pub fn min_strategy_size(game: &Game, kind: StrategyKind, budget: u64) -> Result<Option<usize>> {
    Ok(match min_strategy(game, kind, budget)? {
        Minimum::Found { size, .. } => Some(size),
        Minimum::NoneWithinBound => None,
    })
}

/// A winning strategy of size at most `c^n` for the optimum `n`. Phase one
/// takes the greedy strategy of size `m`; phase two searches all sizes up to
/// `⌈log_c m⌉` exactly.
pub fn strategy_approx(game: &Game, kind: StrategyKind, c: &Ratio<u64>, seed: u64, budget: u64) -> Result<Strategy> {
    ceil_log(c, 1)?;
    let initial = initial_strategy(game, seed)?.convert(game, kind)?;
    let m = strategy_size(game, &initial)?;
    let horizon = (ceil_log(c, m)? as usize).min(m.saturating_sub(1));
    if horizon > 0 {
        if let Minimum::Found { strategy, .. } = min_strategy_exact(game, kind, horizon, budget)? {
            return Ok(strategy);
        }
    }
    Ok(initial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::condition::Condition;
    use crate::strategy::StandAloneStrategy;

    #[test]
    fn triv_minimum_is_one() {
        let g = g_triv(Condition::Safety);
        let expected = Strategy::Positional(PositionalStrategy::new(Player::Zero, [(0, 0)]));
        assert_eq!(initial_strategy(&g, 7).unwrap(), expected);
        assert_eq!(
            min_strategy_exact(&g, StrategyKind::Positional, 1, DEFAULT_BUDGET).unwrap(),
            Minimum::Found { strategy: expected.clone(), size: 1 }
        );
        for kind in [StrategyKind::Positional, StrategyKind::FiniteMemory, StrategyKind::StandAlone] {
            assert_eq!(min_strategy_size(&g, kind, DEFAULT_BUDGET).unwrap(), Some(1));
        }
        assert_eq!(strategy_approx(&g, StrategyKind::Positional, &Ratio::new(2, 1), 0, DEFAULT_BUDGET).unwrap(), expected);
    }

    #[test]
    fn losing_game_is_rejected() {
        assert_eq!(initial_strategy(&g_stuck(), 0).unwrap_err(), Error::PlayerZeroLoses);
    }

    #[test]
    fn a_two_moore_minimum_plays_a() {
        let g = a_two(Condition::buchi([1])).to_game();
        let found = min_strategy_exact(&g, StrategyKind::StandAlone, 1, DEFAULT_BUDGET).unwrap();
        let expected = StandAloneStrategy { init: 0, inputs: 1, labels: vec![0], trans: vec![0] };
        assert_eq!(found, Minimum::Found { strategy: Strategy::StandAlone(expected), size: 1 });
    }

    #[test]
    fn genbuchi_needs_memory() {
        let aut = crate::arena::Automaton::from_transitions(
            3,
            &["l", "r"],
            0,
            &[(0, 0, 1), (0, 1, 2), (1, 0, 0), (2, 0, 0)],
            Condition::GenBuchi(vec![[1].into(), [2].into()]),
        );
        let g = aut.to_game();
        assert_eq!(min_strategy_size(&g, StrategyKind::Positional, DEFAULT_BUDGET).unwrap(), None);
        // (0,0) -> 1 -> (1,0) -> 2 -> back: four configurations.
        assert_eq!(min_strategy_size(&g, StrategyKind::FiniteMemory, DEFAULT_BUDGET).unwrap(), Some(4));
        // Outputs l l r l repeat with period four.
        assert_eq!(min_strategy_size(&g, StrategyKind::StandAlone, DEFAULT_BUDGET).unwrap(), Some(4));
    }
}
