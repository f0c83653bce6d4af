//! Positional, finite-memory and stand-alone strategies, the strategy
//! functions they induce, and their size measures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::arena::{Arena, Game, Player};
use crate::error::{Error, Result};

/// A partial map from the player's positions to actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    pub player: Player,
    pub choice: BTreeMap<usize, usize>,
}

/// Initial memory content. Player 0 starts in a fixed memory state; player 1
/// picks it from the first player-1 position reached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InitMemory {
    Single(usize),
    PerV1(Vec<usize>),
}

/// A finite-memory strategy `(S, s0, f′, f′_M)`.
///
/// `table[(m, v)] = (a, m′)` means: at position `v` with memory `m`, play `a`
/// and continue with memory `m′` at the next position of this player. The
/// move and update functions therefore share one domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMemoryStrategy {
    pub player: Player,
    pub memory_count: usize,
    pub init: InitMemory,
    pub table: BTreeMap<(usize, usize), (usize, usize)>,
}

/// A Moore machine for player 0 reading player-1 actions and emitting
/// player-0 actions. `trans[q * inputs + b]` is the successor of `q` on `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandAloneStrategy {
    pub init: usize,
    pub inputs: usize,
    pub labels: Vec<usize>,
    pub trans: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Positional,
    FiniteMemory,
    StandAlone,
}

impl StrategyKind {
    pub fn keyword(self) -> &'static str {
        match self {
            StrategyKind::Positional => "positional",
            StrategyKind::FiniteMemory => "memory",
            StrategyKind::StandAlone => "moore",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    Positional(PositionalStrategy),
    FiniteMemory(FiniteMemoryStrategy),
    StandAlone(StandAloneStrategy),
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Positional(_) => StrategyKind::Positional,
            Strategy::FiniteMemory(_) => StrategyKind::FiniteMemory,
            Strategy::StandAlone(_) => StrategyKind::StandAlone,
        }
    }

    pub fn player(&self) -> Player {
        match self {
            Strategy::Positional(s) => s.player,
            Strategy::FiniteMemory(s) => s.player,
            Strategy::StandAlone(_) => Player::Zero,
        }
    }

    pub fn well_formed(&self, game: &Game) -> bool {
        match self {
            Strategy::Positional(s) => positional_well_formed(game, s),
            Strategy::FiniteMemory(s) => finite_memory_well_formed(game, s),
            Strategy::StandAlone(m) => m.well_formed(&game.arena),
        }
    }

    /// Converts to the requested representation. Positional strategies need
    /// one memory state; a finite-memory strategy becomes positional only if
    /// its memory is trivial. Moore conversions track the reached position.
    pub fn convert(&self, game: &Game, kind: StrategyKind) -> Result<Strategy> {
        Ok(match (self, kind) {
            (s, k) if s.kind() == k => s.clone(),
            (Strategy::Positional(p), StrategyKind::FiniteMemory) => Strategy::FiniteMemory(p.to_finite_memory()),
            (Strategy::Positional(p), StrategyKind::StandAlone) => {
                Strategy::StandAlone(p.to_finite_memory().to_moore(game)?)
            }
            (Strategy::FiniteMemory(f), StrategyKind::StandAlone) => Strategy::StandAlone(f.to_moore(game)?),
            (Strategy::FiniteMemory(f), StrategyKind::Positional) => f
                .as_positional()
                .map(Strategy::Positional)
                .ok_or_else(|| Error::Invalid("strategy uses more than one memory state".into()))?,
            _ => return Err(Error::Invalid(format!("cannot convert to a {} strategy", kind.keyword()))),
        })
    }
}

impl PositionalStrategy {
    pub fn new(player: Player, choice: impl IntoIterator<Item = (usize, usize)>) -> Self {
        PositionalStrategy { player, choice: choice.into_iter().collect() }
    }

    /// The same strategy with a single memory state.
    pub fn to_finite_memory(&self) -> FiniteMemoryStrategy {
        FiniteMemoryStrategy {
            player: self.player,
            memory_count: 1,
            init: match self.player {
                Player::Zero => InitMemory::Single(0),
                Player::One => InitMemory::PerV1(Vec::new()),
            },
            table: self.choice.iter().map(|(&v, &a)| ((0, v), (a, 0))).collect(),
        }
    }

    /// Drops every entry that cannot be reached when following the strategy.
    pub fn pruned(&self, arena: &Arena) -> PositionalStrategy {
        let keep = positional_reachable(arena, self);
        PositionalStrategy {
            player: self.player,
            choice: self.choice.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, &a)| (v, a)).collect(),
        }
    }
}

/// Positions of the strategy's player that are reachable when following it.
fn positional_reachable(arena: &Arena, s: &PositionalStrategy) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let visit = |p: usize, seen: &mut BTreeSet<usize>, queue: &mut VecDeque<usize>| {
        if s.choice.contains_key(&p) && seen.insert(p) {
            queue.push_back(p);
        }
    };
    match s.player {
        Player::Zero => visit(arena.init(), &mut seen, &mut queue),
        Player::One => {
            for (_, w) in arena.moves0(arena.init()) {
                visit(w, &mut seen, &mut queue);
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        let a = s.choice[&p];
        match s.player {
            Player::Zero => {
                if let Some(w) = arena.e0(p, a) {
                    for (_, v) in arena.moves1(w) {
                        visit(v, &mut seen, &mut queue);
                    }
                }
            }
            Player::One => {
                if let Some(v) = arena.e1(p, a) {
                    for (_, w) in arena.moves0(v) {
                        visit(w, &mut seen, &mut queue);
                    }
                }
            }
        }
    }
    seen
}

/// Closure check: every domain position has an available chosen action, and
/// every position the opponent can answer with is again in the domain. For
/// player 0 the initial position must be covered; for player 1, every
/// position player 0 can reach in the first move.
pub fn positional_well_formed(game: &Game, s: &PositionalStrategy) -> bool {
    let arena = &game.arena;
    let own = match s.player {
        Player::Zero => arena.v0_count(),
        Player::One => arena.v1_count(),
    };
    if s.choice.keys().any(|&p| p >= own) {
        return false;
    }
    let covered = |p: usize| s.choice.contains_key(&p);
    match s.player {
        Player::Zero => {
            if !covered(arena.init()) {
                return false;
            }
            s.choice.iter().all(|(&v, &a)| match arena.e0(v, a) {
                Some(w) => arena.moves1(w).all(|(_, next)| covered(next)),
                None => false,
            })
        }
        Player::One => {
            if !arena.moves0(arena.init()).all(|(_, w)| covered(w)) {
                return false;
            }
            s.choice.iter().all(|(&w, &b)| match arena.e1(w, b) {
                Some(v) => arena.moves0(v).all(|(_, next)| covered(next)),
                None => false,
            })
        }
    }
}

impl FiniteMemoryStrategy {
    /// Initial memory for the first configuration at `p`.
    fn initial_memory(&self, p: usize) -> Option<usize> {
        match &self.init {
            InitMemory::Single(m) => Some(*m),
            InitMemory::PerV1(map) => map.get(p).copied(),
        }
    }

    /// First configurations `(memory, position)` of the strategy's player.
    fn start_configs(&self, arena: &Arena) -> Vec<(usize, usize)> {
        match self.player {
            Player::Zero => self.initial_memory(arena.init()).map(|m| (m, arena.init())).into_iter().collect(),
            Player::One => arena
                .moves0(arena.init())
                .map(|(_, w)| (self.initial_memory(w).unwrap_or(usize::MAX), w))
                .collect(),
        }
    }

    /// Configurations that follow `(m, p)` after one round, or `None` if the
    /// table is undefined there or the chosen action is unavailable.
    fn successors(&self, arena: &Arena, (m, p): (usize, usize)) -> Option<Vec<(usize, usize)>> {
        let &(a, next) = self.table.get(&(m, p))?;
        Some(match self.player {
            Player::Zero => arena.moves1(arena.e0(p, a)?).map(|(_, v)| (next, v)).collect(),
            Player::One => arena.moves0(arena.e1(p, a)?).map(|(_, w)| (next, w)).collect(),
        })
    }

    /// Reachable configurations in breadth-first order.
    pub fn reachable(&self, arena: &Arena) -> Vec<(usize, usize)> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue: VecDeque<_> = self.start_configs(arena).into();
        while let Some(c) = queue.pop_front() {
            if !seen.insert(c) {
                continue;
            }
            order.push(c);
            if let Some(next) = self.successors(arena, c) {
                queue.extend(next);
            }
        }
        order
    }

    /// The positional strategy obtained by dropping a trivial memory.
    pub fn as_positional(&self) -> Option<PositionalStrategy> {
        if self.table.keys().any(|&(m, _)| m != 0) || self.table.values().any(|&(_, m)| m != 0) {
            return None;
        }
        Some(PositionalStrategy::new(self.player, self.table.iter().map(|(&(_, p), &(a, _))| (p, a))))
    }

    /// A Moore machine whose states are the reachable configurations.
    pub fn to_moore(&self, game: &Game) -> Result<StandAloneStrategy> {
        if self.player != Player::Zero {
            return Err(Error::WrongPlayer { expected: Player::Zero, found: self.player });
        }
        if !finite_memory_well_formed(game, self) {
            return Err(Error::MalformedStrategy("finite-memory strategy is not closed".into()));
        }
        let arena = &game.arena;
        let configs = self.reachable(arena);
        let index: BTreeMap<_, _> = configs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let inputs = arena.actions1().len();
        let mut labels = Vec::with_capacity(configs.len());
        let mut trans = Vec::with_capacity(configs.len() * inputs);
        for (i, &(m, v)) in configs.iter().enumerate() {
            let (a, next) = self.table[&(m, v)];
            labels.push(a);
            let w = arena.e0(v, a).expect("well formed");
            for b in 0..inputs {
                // Inputs the arena cannot produce here are never read.
                trans.push(arena.e1(w, b).map_or(i, |v2| index[&(next, v2)]));
            }
        }
        Ok(StandAloneStrategy { init: 0, inputs, labels, trans })
    }
}

/// Closure check for finite-memory strategies, analogous to
/// [`positional_well_formed`] over `(memory, position)` configurations.
pub fn finite_memory_well_formed(game: &Game, s: &FiniteMemoryStrategy) -> bool {
    let arena = &game.arena;
    let own = match s.player {
        Player::Zero => arena.v0_count(),
        Player::One => arena.v1_count(),
    };
    match (&s.init, s.player) {
        (InitMemory::Single(m), Player::Zero) if *m < s.memory_count => {}
        (InitMemory::PerV1(map), Player::One)
            if map.len() == arena.v1_count() && map.iter().all(|&m| m < s.memory_count) => {}
        _ => return false,
    }
    let in_range = s
        .table
        .iter()
        .all(|(&(m, p), &(_, next))| m < s.memory_count && p < own && next < s.memory_count);
    if !in_range {
        return false;
    }
    let covered = |c: &(usize, usize)| s.table.contains_key(c);
    s.start_configs(arena).iter().all(covered)
        && s.table
            .keys()
            .all(|&c| s.successors(arena, c).is_some_and(|next| next.iter().all(covered)))
}

impl StandAloneStrategy {
    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn next(&self, q: usize, b: usize) -> usize {
        self.trans[q * self.inputs + b]
    }

    pub fn well_formed(&self, arena: &Arena) -> bool {
        let n = self.labels.len();
        n > 0
            && self.init < n
            && self.inputs == arena.actions1().len()
            && self.trans.len() == n * self.inputs
            && self.trans.iter().all(|&q| q < n)
            && self.labels.iter().all(|&a| a < arena.actions0().len())
    }
}

fn check_player(expected: Player, found: Player) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::WrongPlayer { expected, found })
    }
}

/// Size of a strategy: reachable domain positions (positional), reachable
/// memory/position combinations (finite memory) or Moore states.
pub fn strategy_size(game: &Game, s: &Strategy) -> Result<usize> {
    if !s.well_formed(game) {
        return Err(Error::MalformedStrategy(format!("{} strategy is not well formed", s.kind().keyword())));
    }
    Ok(match s {
        Strategy::Positional(p) => positional_reachable(&game.arena, p).len(),
        Strategy::FiniteMemory(f) => f.reachable(&game.arena).len(),
        Strategy::StandAlone(m) => m.state_count(),
    })
}

/// The action a strategy plays after `history`.
///
/// `history` alternates player-0 and player-1 actions starting with player
/// 0. It has even length for player-0 strategies and odd length for player-1
/// strategies.
pub fn induced_action(game: &Game, s: &Strategy, history: &[usize]) -> Result<usize> {
    let arena = &game.arena;
    let player = s.player();
    let expected_parity = player.index();
    if history.len() % 2 != expected_parity {
        return Err(Error::Invalid(format!(
            "history of length {} does not end before a move of player {player}",
            history.len()
        )));
    }
    // Positions of the strategy's player along the history, in order.
    let mut own_positions = Vec::new();
    let mut v = arena.init();
    if player == Player::Zero {
        own_positions.push(v);
    }
    for (i, pair) in history.chunks(2).enumerate() {
        let w = arena
            .e0(v, pair[0])
            .ok_or_else(|| Error::Undefined(format!("history move {} unavailable at position {v}", 2 * i)))?;
        if player == Player::One {
            own_positions.push(w);
        }
        if let Some(&b) = pair.get(1) {
            v = arena
                .e1(w, b)
                .ok_or_else(|| Error::Undefined(format!("history move {} unavailable at position {w}", 2 * i + 1)))?;
            if player == Player::Zero {
                own_positions.push(v);
            }
        }
    }
    let current = *own_positions.last().expect("non-empty");
    match s {
        Strategy::Positional(p) => p
            .choice
            .get(&current)
            .copied()
            .ok_or_else(|| Error::Undefined(format!("no choice at position {current}"))),
        Strategy::FiniteMemory(f) => {
            let mut m = f
                .initial_memory(own_positions[0])
                .ok_or_else(|| Error::Undefined("no initial memory".into()))?;
            for &p in &own_positions[..own_positions.len() - 1] {
                m = f
                    .table
                    .get(&(m, p))
                    .map(|&(_, next)| next)
                    .ok_or_else(|| Error::Undefined(format!("no entry for memory {m} at position {p}")))?;
            }
            f.table
                .get(&(m, current))
                .map(|&(a, _)| a)
                .ok_or_else(|| Error::Undefined(format!("no entry for memory {m} at position {current}")))
        }
        Strategy::StandAlone(machine) => {
            check_player(Player::Zero, player)?;
            let q = history
                .iter()
                .skip(1)
                .step_by(2)
                .try_fold(machine.init, |q, &b| (b < machine.inputs).then(|| machine.next(q, b)))
                .ok_or(Error::ActionUnknown { player: Player::One, index: machine.inputs })?;
            Ok(machine.labels[q])
        }
    }
}
