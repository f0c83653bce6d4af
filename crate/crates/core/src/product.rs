//! Products of a game with a player-0 strategy. The result is a one-player
//! game for player 1 whose plays are exactly the plays that agree with the
//! strategy.

use std::collections::{HashMap, VecDeque};

use crate::arena::{Arena, Game, Player};
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::strategy::{
    finite_memory_well_formed, positional_well_formed, FiniteMemoryStrategy, PositionalStrategy, StandAloneStrategy,
};

/// A game in which one player has at most one move at every reachable
/// position, with the projection back to the original game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePlayerGame {
    pub game: Game,
    /// The player who still has choices.
    pub chooser: Player,
    /// Original player-0 position of each product player-0 position.
    pub origin0: Vec<usize>,
    /// Original player-1 position of each product player-1 position.
    pub origin1: Vec<usize>,
    /// Memory or Moore state of each product player-0 position.
    pub memory0: Vec<usize>,
}

/// The reachable part of a product arena before its condition is lifted.
#[derive(Debug, Clone)]
pub(crate) struct ProductArena {
    pub arena: Arena,
    pub origin0: Vec<usize>,
    pub origin1: Vec<usize>,
    pub memory0: Vec<usize>,
}

impl ProductArena {
    fn into_one_player(self, condition: &Condition) -> Result<OnePlayerGame> {
        let lifted = condition.lift(&self.origin0)?;
        Ok(OnePlayerGame {
            game: Game::new(self.arena, lifted),
            chooser: Player::One,
            origin0: self.origin0,
            origin1: self.origin1,
            memory0: self.memory0,
        })
    }
}

/// Breadth-first construction of a product with configurations `(m, v)`.
///
/// `choose(m, v)` gives the player-0 action and the coordinate carried to
/// the player-1 position; `answer(m, w, b)` gives the coordinate after
/// player 1 plays `b` at `w`.
fn explore(
    arena: &Arena,
    init_memory: usize,
    choose: impl Fn(usize, usize) -> Option<(usize, usize)>,
    answer: impl Fn(usize, usize, usize) -> usize,
) -> ProductArena {
    enum Key {
        Zero(usize),
        One(usize),
    }
    let mut index0: HashMap<(usize, usize), usize> = HashMap::new();
    let mut index1: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys0 = Vec::new();
    let mut keys1 = Vec::new();
    let mut e0 = Vec::new();
    let mut e1 = Vec::new();
    let mut queue = VecDeque::new();

    index0.insert((init_memory, arena.init()), 0);
    keys0.push((init_memory, arena.init()));
    queue.push_back(Key::Zero(0));
    while let Some(key) = queue.pop_front() {
        match key {
            Key::Zero(i) => {
                let (m, v) = keys0[i];
                let Some((a, m1)) = choose(m, v) else { continue };
                let Some(w) = arena.e0(v, a) else { continue };
                let j = *index1.entry((m1, w)).or_insert_with(|| {
                    keys1.push((m1, w));
                    queue.push_back(Key::One(keys1.len() - 1));
                    keys1.len() - 1
                });
                e0.push((i, a, j));
            }
            Key::One(j) => {
                let (m, w) = keys1[j];
                for (b, v) in arena.moves1(w) {
                    let next = (answer(m, w, b), v);
                    let i = *index0.entry(next).or_insert_with(|| {
                        keys0.push(next);
                        queue.push_back(Key::Zero(keys0.len() - 1));
                        keys0.len() - 1
                    });
                    e1.push((j, b, i));
                }
            }
        }
    }

    let mut out = Arena::new(keys0.len(), keys1.len(), arena.actions0().to_vec(), arena.actions1().to_vec(), 0);
    for (i, a, j) in e0 {
        out.set_e0(i, a, j);
    }
    for (j, b, i) in e1 {
        out.set_e1(j, b, i);
    }
    ProductArena {
        arena: out,
        origin0: keys0.iter().map(|&(_, v)| v).collect(),
        origin1: keys1.iter().map(|&(_, w)| w).collect(),
        memory0: keys0.iter().map(|&(m, _)| m).collect(),
    }
}

fn require_player_zero(player: Player) -> Result<()> {
    match player {
        Player::Zero => Ok(()),
        found => Err(Error::WrongPlayer { expected: Player::Zero, found }),
    }
}

/// Keeps only the strategy's edge at every player-0 position. Positions keep
/// their indices; positions outside the domain lose all their edges.
pub fn restrict_by_positional(game: &Game, s: &PositionalStrategy) -> Result<OnePlayerGame> {
    require_player_zero(s.player)?;
    if !positional_well_formed(game, s) {
        return Err(Error::MalformedStrategy("positional strategy is not closed under opponent moves".into()));
    }
    let mut arena = game.arena.clone();
    for v in 0..arena.v0_count() {
        for a in 0..arena.actions0().len() {
            if s.choice.get(&v) != Some(&a) {
                arena.clear_e0(v, a);
            }
        }
    }
    Ok(OnePlayerGame {
        origin0: (0..arena.v0_count()).collect(),
        origin1: (0..arena.v1_count()).collect(),
        memory0: vec![0; arena.v0_count()],
        game: Game::new(arena, game.condition.clone()),
        chooser: Player::One,
    })
}

pub(crate) fn finite_memory_arena(game: &Game, s: &FiniteMemoryStrategy) -> Result<ProductArena> {
    require_player_zero(s.player)?;
    if !finite_memory_well_formed(game, s) {
        return Err(Error::MalformedStrategy("finite-memory strategy is not closed under opponent moves".into()));
    }
    let crate::strategy::InitMemory::Single(init) = s.init else {
        return Err(Error::MalformedStrategy("player-0 strategy needs a single initial memory".into()));
    };
    Ok(explore(&game.arena, init, |m, v| s.table.get(&(m, v)).copied(), |m, _, _| m))
}

/// Product of the arena with the memory of a player-0 strategy. Player-0
/// positions are reachable `(memory, position)` pairs.
pub fn product_finite_memory(game: &Game, s: &FiniteMemoryStrategy) -> Result<OnePlayerGame> {
    finite_memory_arena(game, s)?.into_one_player(&game.condition)
}

pub(crate) fn moore_arena(game: &Game, m: &StandAloneStrategy) -> Result<ProductArena> {
    if !m.well_formed(&game.arena) {
        return Err(Error::MalformedStrategy("Moore machine is not total over the game's actions".into()));
    }
    Ok(explore(&game.arena, m.init, |q, _| Some((m.labels[q], q)), |q, _, b| m.next(q, b)))
}

/// Product of the arena with a Moore machine: at `(q, v)` only the label of
/// `q` may be played, and player-1 moves advance the machine.
pub fn product_moore(game: &Game, m: &StandAloneStrategy) -> Result<OnePlayerGame> {
    moore_arena(game, m)?.into_one_player(&game.condition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::condition::PosSet;
    use crate::strategy::InitMemory;

    #[test]
    fn restricting_triv_is_identity() {
        let g = g_triv(Condition::Safety);
        let p = restrict_by_positional(&g, &PositionalStrategy::new(Player::Zero, [(0, 0)])).unwrap();
        assert_eq!(p.game, g);
    }

    #[test]
    fn restricting_with_missing_position_fails() {
        let g = g_triv(Condition::Safety);
        let err = restrict_by_positional(&g, &PositionalStrategy::new(Player::Zero, [])).unwrap_err();
        assert!(matches!(err, Error::MalformedStrategy(_)));
    }

    #[test]
    fn unit_moore_product_is_triv() {
        let g = g_triv(Condition::buchi([0]));
        let m = StandAloneStrategy { init: 0, inputs: 1, labels: vec![0], trans: vec![0] };
        assert_eq!(product_moore(&g, &m).unwrap().game, g);
    }

    #[test]
    fn alternating_memory_doubles_triv() {
        let g = g_triv(Condition::Safety);
        let s = FiniteMemoryStrategy {
            player: Player::Zero,
            memory_count: 2,
            init: InitMemory::Single(0),
            table: [((0, 0), (0, 1)), ((1, 0), (0, 0))].into_iter().collect(),
        };
        let p = product_finite_memory(&g, &s).unwrap();
        assert_eq!(p.game.arena.v0_count(), 2);
        assert_eq!(p.game.arena.v1_count(), 2);
        assert_eq!(p.memory0, vec![0, 1]);
    }

    #[test]
    fn rabin_pair_lifts_to_every_copy() {
        let g = a_rabin(Condition::Rabin(vec![([1].into(), [1].into())])).to_game();
        // Two states that swap on every input; both see every position.
        let m = StandAloneStrategy { init: 0, inputs: 1, labels: vec![0, 0], trans: vec![1, 0] };
        let p = product_moore(&g, &m).unwrap();
        let copies: PosSet = (0..p.origin0.len()).filter(|&i| p.origin0[i] == 1).collect();
        assert_eq!(copies.len(), 2);
        assert_eq!(p.game.condition, Condition::Rabin(vec![(copies.clone(), copies)]));
    }
}
