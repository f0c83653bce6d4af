//! Winner determination. Safety, Büchi, co-Büchi and parity games become
//! parity games on the arena itself; the other conditions go through a
//! latest appearance record over classes of positions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::parity::{ParityGame, ParitySolution, NONE};
use crate::arena::{Game, Player};
use crate::condition::{Condition, ConditionKind, PosSet};
use crate::error::{Error, Result};
use crate::strategy::{FiniteMemoryStrategy, InitMemory, PositionalStrategy, Strategy};

/// Upper bound on the nodes of a reduced parity game.
pub const SOLVER_NODE_LIMIT: usize = 4_000_000;

/// The winner of a game and a winning strategy for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Player,
    pub strategy: Strategy,
}

/// Decides who wins `game` and returns a winning strategy. Player 0 gets a
/// positional strategy for safety, Büchi, co-Büchi, parity and Rabin
/// conditions; otherwise strategies may use memory.
pub fn solve(game: &Game) -> Result<Solution> {
    let solution = match game.condition.kind() {
        ConditionKind::Safety | ConditionKind::Buchi | ConditionKind::CoBuchi | ConditionKind::Parity => {
            solve_direct(game)
        }
        _ => solve_lar(game)?,
    };
    if solution.winner == Player::Zero && game.condition.kind() == ConditionKind::Rabin {
        if let Strategy::FiniteMemory(_) = solution.strategy {
            return Ok(Solution { winner: Player::Zero, strategy: Strategy::Positional(positionalize(game)?) });
        }
    }
    Ok(solution)
}

pub fn winner(game: &Game) -> Result<Player> {
    Ok(match game.condition.kind() {
        ConditionKind::Safety | ConditionKind::Buchi | ConditionKind::CoBuchi | ConditionKind::Parity => {
            solve_direct(game).winner
        }
        _ => {
            let lar = Lar::build(game)?;
            if lar.solution.win0[LAR_ROOT] {
                Player::Zero
            } else {
                Player::One
            }
        }
    })
}

/// Fixes one player-0 move at a time, keeping the first that still wins.
/// Sound for conditions where player 0 wins positionally whenever she wins.
fn positionalize(game: &Game) -> Result<PositionalStrategy> {
    let mut current = game.clone();
    let arena = &game.arena;
    for v in 0..arena.v0_count() {
        let moves: Vec<usize> = arena.moves0(v).map(|(a, _)| a).collect();
        if moves.len() < 2 {
            continue;
        }
        let mut fixed = false;
        for &keep in &moves {
            let mut trial = current.clone();
            for &a in moves.iter().filter(|&&a| a != keep) {
                trial.arena.clear_e0(v, a);
            }
            if winner(&trial)? == Player::Zero {
                current = trial;
                fixed = true;
                break;
            }
        }
        debug_assert!(fixed, "no single move keeps player 0 winning at {v}");
    }
    let choice = (0..arena.v0_count()).filter_map(|v| current.arena.moves0(v).next().map(|(a, _)| (v, a)));
    Ok(PositionalStrategy::new(Player::Zero, choice).pruned(arena))
}

/// Layout of the direct reduction: player-0 positions, player-1 positions,
/// then the two sinks.
fn solve_direct(game: &Game) -> Solution {
    let arena = &game.arena;
    let (n0, n1) = (arena.v0_count(), arena.v1_count());
    let cond = &game.condition;
    let prio0 = |v: usize| -> u32 {
        match cond {
            Condition::Buchi(f) => 1 + f.contains(&v) as u32,
            Condition::CoBuchi(f) => f.contains(&v) as u32,
            Condition::Parity(_) => cond.colour(v),
            _ => 0,
        }
    };
    let mut pg = ParityGame::default();
    for v in 0..n0 {
        pg.add_node(Player::Zero, prio0(v));
    }
    for _ in 0..n1 {
        pg.add_node(Player::One, 0);
    }
    let sink0 = pg.add_node(Player::Zero, 0);
    let sink1 = pg.add_node(Player::One, 1);
    pg.add_edge(sink0, sink0);
    pg.add_edge(sink1, sink1);
    for v in 0..n0 {
        for (_, w) in arena.moves0(v) {
            pg.add_edge(v, n0 + w);
        }
        if pg.succ[v].is_empty() {
            pg.add_edge(v, sink1);
        }
    }
    for w in 0..n1 {
        for (_, v) in arena.moves1(w) {
            pg.add_edge(n0 + w, v);
        }
        if pg.succ[n0 + w].is_empty() {
            pg.add_edge(n0 + w, sink0);
        }
    }
    let sol = pg.solve();
    let winner = if sol.win0[arena.init()] { Player::Zero } else { Player::One };
    let choice: BTreeMap<usize, usize> = match winner {
        Player::Zero => (0..n0)
            .filter(|&v| sol.win0[v] && sol.strategy[v] != NONE)
            .filter_map(|v| arena.moves0(v).find(|&(_, w)| n0 + w == sol.strategy[v]).map(|(a, _)| (v, a)))
            .collect(),
        Player::One => (0..n1)
            .filter(|&w| !sol.win0[n0 + w] && sol.strategy[n0 + w] != NONE)
            .filter_map(|w| arena.moves1(w).find(|&(_, v)| v == sol.strategy[n0 + w]).map(|(b, _)| (w, b)))
            .collect(),
    };
    let strategy = PositionalStrategy { player: winner, choice }.pruned(arena);
    Solution { winner, strategy: Strategy::Positional(strategy) }
}

/// Groups player-0 positions so that the condition only depends on which
/// groups are visited infinitely often. Returns the group of each position
/// and one representative per group.
fn position_classes(cond: &Condition, n0: usize) -> (Vec<usize>, Vec<usize>) {
    let signature = |v: usize| -> Vec<bool> {
        match cond {
            Condition::GenBuchi(sets) => sets.iter().map(|s| s.contains(&v)).collect(),
            Condition::Rabin(pairs) | Condition::Streett(pairs) => {
                pairs.iter().flat_map(|(f, g)| [f.contains(&v), g.contains(&v)]).collect()
            }
            // Muller sets need exact identity: every mentioned position is
            // its own class, the rest share one.
            Condition::Muller(_) if cond.mentioned().contains(&v) => vec![true; v + 1],
            _ => Vec::new(),
        }
    };
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut reps = Vec::new();
    let class = (0..n0)
        .map(|v| {
            *index.entry(signature(v)).or_insert_with(|| {
                reps.push(v);
                reps.len() - 1
            })
        })
        .collect();
    (class, reps)
}

const LAR_ROOT: usize = 2;

/// The latest appearance record product and its solution.
struct Lar {
    /// `(position, record)` of each node; positions of player-1 nodes are
    /// offset by `v0_count`. Sinks carry `NONE`.
    nodes: Vec<(usize, usize)>,
    records: Vec<Vec<u8>>,
    class: Vec<usize>,
    solution: ParitySolution,
}

impl Lar {
    fn build(game: &Game) -> Result<Lar> {
        let arena = &game.arena;
        let n0 = arena.v0_count();
        let (class, reps) = position_classes(&game.condition, n0);
        let h = reps.len().max(1);
        if h > 64 {
            return Err(Error::SizeLimit(format!("{h} position classes exceed the record limit")));
        }
        let mut accept_cache: HashMap<u64, bool> = HashMap::new();
        let mut accepts = |mask: u64| -> bool {
            *accept_cache.entry(mask).or_insert_with(|| {
                let set: PosSet = (0..h).filter(|c| mask >> c & 1 == 1).map(|c| reps[c]).collect();
                game.condition.accepts(&set)
            })
        };

        let mut pg = ParityGame::default();
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        let mut records: Vec<Vec<u8>> = vec![(0..h as u8).collect()];
        let mut record_ids: HashMap<Vec<u8>, usize> = HashMap::from([(records[0].clone(), 0)]);
        let mut node_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();

        // Sinks first, so the initial node is always `LAR_ROOT`.
        let sink0 = pg.add_node(Player::Zero, 0);
        let sink1 = pg.add_node(Player::One, 1);
        pg.add_edge(sink0, sink0);
        pg.add_edge(sink1, sink1);
        nodes.push((NONE, NONE));
        nodes.push((NONE, NONE));

        let mut intern = |pg: &mut ParityGame,
                          nodes: &mut Vec<(usize, usize)>,
                          queue: &mut VecDeque<usize>,
                          key: (usize, usize),
                          owner: Player,
                          prio: u32|
         -> Result<usize> {
            if let Some(&id) = node_ids.get(&key) {
                return Ok(id);
            }
            if pg.len() >= SOLVER_NODE_LIMIT {
                return Err(Error::SizeLimit(format!("reduced game exceeds {SOLVER_NODE_LIMIT} nodes")));
            }
            let id = pg.add_node(owner, prio);
            nodes.push(key);
            node_ids.insert(key, id);
            queue.push_back(id);
            Ok(id)
        };

        let prio_of = |record: &[u8], v: usize, accepts: &mut dyn FnMut(u64) -> bool| -> (u32, Vec<u8>) {
            let c = class[v] as u8;
            let hit = record.iter().position(|&x| x == c).expect("record is a permutation");
            let mut next = Vec::with_capacity(record.len());
            next.push(c);
            next.extend(record.iter().copied().filter(|&x| x != c));
            let mask = next[..=hit].iter().fold(0u64, |m, &x| m | 1 << x);
            let prio = 2 * hit as u32 + if accepts(mask) { 2 } else { 1 };
            (prio, next)
        };

        let (p, _) = prio_of(&records[0], arena.init(), &mut accepts);
        let root = intern(&mut pg, &mut nodes, &mut queue, (arena.init(), 0), Player::Zero, p)?;
        while let Some(id) = queue.pop_front() {
            let (pos, rec) = nodes[id];
            if pg.owner[id] == Player::Zero {
                let (_, next) = prio_of(&records[rec].clone(), pos, &mut accepts);
                let next_id = *record_ids.entry(next.clone()).or_insert_with(|| {
                    records.push(next);
                    records.len() - 1
                });
                for (_, w) in arena.moves0(pos) {
                    let t = intern(&mut pg, &mut nodes, &mut queue, (n0 + w, next_id), Player::One, 0)?;
                    pg.add_edge(id, t);
                }
                if pg.succ[id].is_empty() {
                    pg.add_edge(id, sink1);
                }
            } else {
                for (_, v) in arena.moves1(pos - n0) {
                    let (p, _) = prio_of(&records[rec].clone(), v, &mut accepts);
                    let t = intern(&mut pg, &mut nodes, &mut queue, (v, rec), Player::Zero, p)?;
                    pg.add_edge(id, t);
                }
                if pg.succ[id].is_empty() {
                    pg.add_edge(id, sink0);
                }
            }
        }
        debug_assert_eq!(root, LAR_ROOT);
        let solution = pg.solve();
        Ok(Lar { nodes, records, class, solution })
    }

    fn update(&self, rec: usize, v: usize) -> Vec<u8> {
        let c = self.class[v] as u8;
        let mut next = vec![c];
        next.extend(self.records[rec].iter().copied().filter(|&x| x != c));
        next
    }
}

fn solve_lar(game: &Game) -> Result<Solution> {
    let lar = Lar::build(game)?;
    let arena = &game.arena;
    let n0 = arena.v0_count();
    let root = LAR_ROOT;
    let index: HashMap<(usize, usize), usize> = lar.nodes.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let node = |key: (usize, usize)| index[&key];
    let record_index: HashMap<&[u8], usize> =
        lar.records.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();

    let mut memory_ids: HashMap<usize, usize> = HashMap::new();
    let mut memory = |rec: usize| -> usize {
        let n = memory_ids.len();
        *memory_ids.entry(rec).or_insert(n)
    };
    let mut table = BTreeMap::new();
    let mut seen = std::collections::HashSet::new();

    if lar.solution.win0[root] {
        // Configurations are player-0 nodes `(v, record)`.
        let mut queue = VecDeque::from([root]);
        seen.insert(root);
        while let Some(id) = queue.pop_front() {
            let (v, rec) = lar.nodes[id];
            let target = lar.solution.strategy[id];
            let (w_pos, next_rec) = lar.nodes[target];
            let a = arena.moves0(v).find(|&(_, w)| n0 + w == w_pos).map(|(a, _)| a).expect("strategy edge");
            table.insert((memory(rec), v), (a, memory(next_rec)));
            for (_, v2) in arena.moves1(w_pos - n0) {
                let t = node((v2, next_rec));
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        let init = memory(0);
        debug_assert_eq!(init, 0);
        let strategy = FiniteMemoryStrategy {
            player: Player::Zero,
            memory_count: memory_ids.len(),
            init: InitMemory::Single(0),
            table,
        };
        return Ok(Solution { winner: Player::Zero, strategy: Strategy::FiniteMemory(strategy) });
    }

    // Player 1: configurations are player-1 nodes `(w, record)`.
    let first_rec = record_index[lar.update(0, arena.init()).as_slice()];
    let first_memory = memory(first_rec);
    let mut queue = VecDeque::new();
    for (_, w) in arena.moves0(arena.init()) {
        let t = node((n0 + w, first_rec));
        if seen.insert(t) {
            queue.push_back(t);
        }
    }
    while let Some(id) = queue.pop_front() {
        let (w_pos, rec) = lar.nodes[id];
        let target = lar.solution.strategy[id];
        let (v, _) = lar.nodes[target];
        let b = arena.moves1(w_pos - n0).find(|&(_, x)| x == v).map(|(b, _)| b).expect("strategy edge");
        let next_rec = record_index[lar.update(rec, v).as_slice()];
        table.insert((memory(rec), w_pos - n0), (b, memory(next_rec)));
        for (_, w2) in arena.moves0(v) {
            let t = node((n0 + w2, next_rec));
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    let strategy = FiniteMemoryStrategy {
        player: Player::One,
        memory_count: memory_ids.len().max(1),
        init: InitMemory::PerV1(vec![first_memory; arena.v1_count()]),
        table,
    };
    Ok(Solution { winner: Player::One, strategy: Strategy::FiniteMemory(strategy) })
}
