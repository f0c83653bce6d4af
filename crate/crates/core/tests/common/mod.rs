//! Independent reference implementations for the integration tests.
//!
//! Nothing here calls the crate's analysis, solver or search code: winners
//! come from a recursive Muller game solver on the raw arena, and "every
//! play wins" is decided by enumerating the strongly connected position
//! sets a play can visit infinitely often.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use omegacert::{Arena, Automaton, Condition, Game, Hypergraph, Player, PosSet, StandAloneStrategy};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ------------------------------------------------------------ conditions

/// Acceptance of an inf-set, written from the definitions.
pub fn accepts(c: &Condition, inf: &PosSet) -> bool {
    let meets = |s: &PosSet| inf.iter().any(|v| s.contains(v));
    let inside = |s: &PosSet| inf.iter().all(|v| s.contains(v));
    match c {
        Condition::Safety => true,
        Condition::Buchi(f) => meets(f),
        Condition::CoBuchi(f) => !meets(f),
        Condition::GenBuchi(sets) => sets.iter().all(meets),
        Condition::Parity(col) => inf.iter().map(|v| col.get(v).copied().unwrap_or(0)).max().is_some_and(|m| m % 2 == 0),
        Condition::Rabin(pairs) => pairs.iter().any(|(f, g)| inside(f) && meets(g)),
        Condition::Streett(pairs) => pairs.iter().all(|(f, g)| !inside(f) || !meets(g)),
        Condition::Muller(family) => family.contains(inf),
    }
}

// ------------------------------------------------------------ generators

pub const KINDS: [&str; 8] = ["safety", "buchi", "cobuchi", "genbuchi", "parity", "rabin", "streett", "muller"];

fn subset(rng: &mut ChaCha8Rng, n: usize) -> PosSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

fn nonempty_subset(rng: &mut ChaCha8Rng, n: usize) -> PosSet {
    loop {
        let s = subset(rng, n);
        if !s.is_empty() || n == 0 {
            return s;
        }
    }
}

/// A random condition over `n` positions. Parity uses colours `0..colours`.
pub fn random_condition(rng: &mut ChaCha8Rng, kind: &str, n: usize, colours: u32) -> Condition {
    match kind {
        "safety" => Condition::Safety,
        "buchi" => Condition::Buchi(subset(rng, n)),
        "cobuchi" => Condition::CoBuchi(subset(rng, n)),
        "genbuchi" => Condition::GenBuchi((0..rng.gen_range(1..=2)).map(|_| nonempty_subset(rng, n)).collect()),
        "parity" => Condition::Parity((0..n).map(|v| (v, rng.gen_range(0..colours))).collect()),
        "rabin" => Condition::Rabin((0..rng.gen_range(1..=2)).map(|_| (subset(rng, n), nonempty_subset(rng, n))).collect()),
        "streett" => Condition::Streett((0..rng.gen_range(1..=2)).map(|_| (subset(rng, n), nonempty_subset(rng, n))).collect()),
        "muller" => {
            let mut family: Vec<PosSet> = (0..rng.gen_range(1..=3)).map(|_| nonempty_subset(rng, n)).collect();
            family.sort();
            family.dedup();
            Condition::Muller(family)
        }
        other => panic!("unknown kind {other}"),
    }
}

/// A random game with at most `max_pos` positions per player and at most
/// `max_act` actions per player. Edges are present with probability 0.7.
pub fn random_game(rng: &mut ChaCha8Rng, kind: &str, max_pos: usize, max_act: usize, colours: u32) -> Game {
    let v0 = rng.gen_range(1..=max_pos);
    let v1 = rng.gen_range(1..=max_pos);
    let a0 = rng.gen_range(1..=max_act);
    let a1 = rng.gen_range(1..=max_act);
    let names = |p: &str, k: usize| (0..k).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    let mut arena = Arena::new(v0, v1, names("a", a0), names("b", a1), 0);
    for v in 0..v0 {
        for a in 0..a0 {
            if rng.gen_bool(0.7) {
                arena.set_e0(v, a, rng.gen_range(0..v1));
            }
        }
    }
    for w in 0..v1 {
        for b in 0..a1 {
            if rng.gen_bool(0.7) {
                arena.set_e1(w, b, rng.gen_range(0..v0));
            }
        }
    }
    let condition = random_condition(rng, kind, v0, colours);
    Game::new(arena, condition)
}

/// A random deterministic automaton; every transition is present with
/// probability `density`.
pub fn random_automaton(rng: &mut ChaCha8Rng, kind: &str, max_states: usize, letters: usize, density: f64) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let alphabet: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut aut = Automaton::new(n, alphabet, 0, random_condition(rng, kind, n, 4));
    for q in 0..n {
        for a in 0..letters {
            if rng.gen_bool(density) {
                aut.set(q, a, rng.gen_range(0..n));
            }
        }
    }
    aut
}

pub fn random_moore(rng: &mut ChaCha8Rng, arena: &Arena, max_states: usize) -> StandAloneStrategy {
    let states = rng.gen_range(1..=max_states);
    let inputs = arena.actions1().len();
    StandAloneStrategy {
        init: 0,
        inputs,
        labels: (0..states).map(|_| rng.gen_range(0..arena.actions0().len())).collect(),
        trans: (0..states * inputs).map(|_| rng.gen_range(0..states)).collect(),
    }
}

/// All 2-uniform hypergraphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Hypergraph> {
    let pairs: Vec<BTreeSet<usize>> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| BTreeSet::from([i, j]))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone());
            Hypergraph::new(n, 2, edges)
        })
        .collect()
}

/// A random k-uniform hypergraph with at least one edge.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Hypergraph {
    let mut all: Vec<BTreeSet<usize>> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        all.push(combo.iter().copied().collect());
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else { break };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    all.shuffle(rng);
    let m = rng.gen_range(1..=all.len());
    all.truncate(m);
    Hypergraph::new(n, k, all)
}

/// Smallest vertex cover size by bitmask enumeration.
pub fn min_cover_size(h: &Hypergraph) -> usize {
    let masks: Vec<u32> = h.edges.iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0u32..1 << h.vertex_count)
        .filter(|c| masks.iter().all(|e| e & c != 0))
        .map(|c| c.count_ones() as usize)
        .min()
        .expect("the full vertex set covers")
}

// ------------------------------------------------------------ explicit graphs

/// A finite graph whose nodes carry an optional player-0 position (the
/// colour) and an owner. Used for products and for the raw arena.
#[derive(Debug, Clone)]
pub struct Graph {
    pub succ: Vec<Vec<usize>>,
    pub colour: Vec<Option<usize>>,
    pub owner: Vec<Player>,
}

/// The raw arena: player-0 positions are nodes `0..|V0|`, player-1 positions
/// follow.
pub fn arena_graph(arena: &Arena) -> Graph {
    let n0 = arena.v0_count();
    let mut succ = vec![Vec::new(); n0 + arena.v1_count()];
    for v in 0..n0 {
        for a in 0..arena.actions0().len() {
            if let Some(w) = arena.e0(v, a) {
                succ[v].push(n0 + w);
            }
        }
    }
    for w in 0..arena.v1_count() {
        for b in 0..arena.actions1().len() {
            if let Some(v) = arena.e1(w, b) {
                succ[n0 + w].push(v);
            }
        }
    }
    let colour = (0..succ.len()).map(|i| (i < n0).then_some(i)).collect();
    let owner = (0..succ.len()).map(|i| if i < n0 { Player::Zero } else { Player::One }).collect();
    Graph { succ, colour, owner }
}

fn reachable_from(g: &Graph, start: usize) -> Vec<bool> {
    let mut seen = vec![false; g.succ.len()];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(u) = q.pop_front() {
        for &t in &g.succ[u] {
            if !seen[t] {
                seen[t] = true;
                q.push_back(t);
            }
        }
    }
    seen
}

/// The colour sets (player-0 positions) that some play from `start` sees
/// infinitely often. A colour set `C` qualifies when, among reachable nodes
/// coloured inside `C` or uncoloured, some cyclic strongly connected
/// component carries every colour of `C`.
pub fn inf_colour_sets(g: &Graph, start: usize) -> Vec<PosSet> {
    let reach = reachable_from(g, start);
    let colours: Vec<usize> = (0..g.succ.len()).filter(|&v| reach[v]).filter_map(|v| g.colour[v]).collect::<BTreeSet<_>>().into_iter().collect();
    assert!(colours.len() <= 16, "too many colours for subset enumeration");
    let mut out = Vec::new();
    for mask in 1u32..1 << colours.len() {
        let c: PosSet = colours.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        let alive: Vec<bool> = (0..g.succ.len()).map(|v| reach[v] && g.colour[v].is_none_or(|x| c.contains(&x))).collect();
        if components(g, &alive).iter().any(|comp| {
            let seen: PosSet = comp.iter().filter_map(|&v| g.colour[v]).collect();
            seen == c
        }) {
            out.push(c);
        }
    }
    out
}

/// Cyclic strongly connected components of the subgraph `alive`, by mutual
/// reachability.
pub fn components(g: &Graph, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = g.succ.len();
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|s| {
            // nodes reachable from s in one or more steps inside `alive`
            let mut seen = vec![false; n];
            if !alive[s] {
                return seen;
            }
            let mut stack: Vec<usize> = g.succ[s].iter().copied().filter(|&t| alive[t]).collect();
            while let Some(u) = stack.pop() {
                if !seen[u] {
                    seen[u] = true;
                    stack.extend(g.succ[u].iter().copied().filter(|&t| alive[t]));
                }
            }
            seen
        })
        .collect();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !alive[s] || done[s] || !reach[s][s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&t| t == s || (reach[s][t] && reach[t][s])).collect();
        comp.iter().for_each(|&t| done[t] = true);
        out.push(comp);
    }
    out
}

fn stuck_reachable(g: &Graph, start: usize, owner: Player) -> bool {
    let reach = reachable_from(g, start);
    (0..g.succ.len()).any(|v| reach[v] && g.succ[v].is_empty() && g.owner[v] == owner)
}

/// Whether every play from `start` satisfies `condition`, where a node with
/// no successors loses for its owner.
pub fn every_play_wins(g: &Graph, start: usize, condition: &Condition) -> bool {
    !stuck_reachable(g, start, Player::Zero) && inf_colour_sets(g, start).iter().all(|c| accepts(condition, c))
}

/// Whether every play from `start` violates `condition`.
pub fn every_play_loses(g: &Graph, start: usize, condition: &Condition) -> bool {
    !stuck_reachable(g, start, Player::One) && inf_colour_sets(g, start).iter().all(|c| !accepts(condition, c))
}

// ------------------------------------------------------------ Muller games

fn attractor(g: &Graph, alive: &[bool], player: Player, target: &[bool]) -> Vec<bool> {
    let mut attr: Vec<bool> = (0..alive.len()).map(|v| alive[v] && target[v]).collect();
    loop {
        let mut changed = false;
        for v in 0..alive.len() {
            if !alive[v] || attr[v] {
                continue;
            }
            let live: Vec<usize> = g.succ[v].iter().copied().filter(|&t| alive[t]).collect();
            let pulled = if g.owner[v] == player {
                live.iter().any(|&t| attr[t])
            } else {
                !live.is_empty() && live.iter().all(|&t| attr[t])
            };
            if pulled {
                attr[v] = true;
                changed = true;
            }
        }
        if !changed {
            return attr;
        }
    }
}

fn minus(alive: &[bool], removed: &[bool]) -> Vec<bool> {
    alive.iter().zip(removed).map(|(&a, &r)| a && !r).collect()
}

/// Winning region of player 0 in the subgame `alive`, in which every node
/// has a successor. The recursion follows the classical Muller game
/// algorithm: the player favoured by the full colour set wins everywhere
/// unless the opponent wins a subgame that avoids one colour.
fn muller_region(g: &Graph, alive: &[bool], condition: &Condition) -> Vec<bool> {
    if !alive.iter().any(|&a| a) {
        return alive.to_vec();
    }
    let colours: PosSet = (0..alive.len()).filter(|&v| alive[v]).filter_map(|v| g.colour[v]).collect();
    let favoured = if accepts(condition, &colours) { Player::Zero } else { Player::One };
    let other = favoured.opponent();
    for &c in &colours {
        let target: Vec<bool> = (0..alive.len()).map(|v| g.colour[v] == Some(c)).collect();
        let sub = minus(alive, &attractor(g, alive, favoured, &target));
        let sub_win0 = muller_region(g, &sub, condition);
        let sub_other: Vec<bool> =
            (0..alive.len()).map(|v| sub[v] && (sub_win0[v] == (other == Player::Zero))).collect();
        if sub_other.iter().any(|&x| x) {
            let b = attractor(g, alive, other, &sub_other);
            let rest = muller_region(g, &minus(alive, &b), condition);
            return (0..alive.len())
                .map(|v| if b[v] { other == Player::Zero } else { rest[v] })
                .collect();
        }
    }
    alive.iter().map(|&a| a && favoured == Player::Zero).collect()
}

/// The winner from the initial position, by the Muller game recursion on
/// the raw arena with dead ends handled first.
pub fn muller_winner(game: &Game) -> Player {
    let g = arena_graph(&game.arena);
    let all = vec![true; g.succ.len()];
    let dead0: Vec<bool> = (0..all.len()).map(|v| g.owner[v] == Player::Zero && g.succ[v].is_empty()).collect();
    let dead1: Vec<bool> = (0..all.len()).map(|v| g.owner[v] == Player::One && g.succ[v].is_empty()).collect();
    let lose0 = attractor(&g, &all, Player::One, &dead0);
    let win0 = attractor(&g, &minus(&all, &lose0), Player::Zero, &dead1);
    let init = game.arena.init();
    if lose0[init] {
        return Player::One;
    }
    if win0[init] {
        return Player::Zero;
    }
    let rest = minus(&minus(&all, &lose0), &win0);
    if muller_region(&g, &rest, &game.condition)[init] {
        Player::Zero
    } else {
        Player::One
    }
}

// ------------------------------------------------------------ strategies

/// The raw arena with player `p` restricted to `choice` (a full map on the
/// positions where `p` has a move).
pub fn restrict(arena: &Arena, p: Player, choice: &BTreeMap<usize, usize>) -> Graph {
    let mut g = arena_graph(arena);
    let n0 = arena.v0_count();
    for (&v, &a) in choice {
        match p {
            Player::Zero => g.succ[v] = vec![n0 + arena.e0(v, a).expect("defined")],
            Player::One => g.succ[n0 + v] = vec![arena.e1(v, a).expect("defined")],
        }
    }
    g
}

/// Every total positional strategy of `p`: one defined action at each
/// position that has one.
pub fn positional_strategies(arena: &Arena, p: Player) -> Vec<BTreeMap<usize, usize>> {
    let (count, acts) = match p {
        Player::Zero => (arena.v0_count(), arena.actions0().len()),
        Player::One => (arena.v1_count(), arena.actions1().len()),
    };
    let options: Vec<(usize, Vec<usize>)> = (0..count)
        .map(|v| {
            let moves = (0..acts)
                .filter(|&a| match p {
                    Player::Zero => arena.e0(v, a).is_some(),
                    Player::One => arena.e1(v, a).is_some(),
                })
                .collect();
            (v, moves)
        })
        .filter(|(_, m): &(usize, Vec<usize>)| !m.is_empty())
        .collect();
    let mut out = vec![BTreeMap::new()];
    for (v, moves) in options {
        out = out
            .into_iter()
            .flat_map(|c| {
                moves.iter().map(move |&a| {
                    let mut c = c.clone();
                    c.insert(v, a);
                    c
                })
            })
            .collect();
    }
    out
}

/// Player-0 positions reachable under a positional strategy.
pub fn positional_reach_size(arena: &Arena, choice: &BTreeMap<usize, usize>) -> usize {
    let g = restrict(arena, Player::Zero, choice);
    let reach = reachable_from(&g, arena.init());
    (0..arena.v0_count()).filter(|&v| reach[v]).count()
}

/// Whether some positional strategy of `p` wins outright.
pub fn positional_win(game: &Game, p: Player) -> bool {
    positional_strategies(&game.arena, p).iter().any(|c| {
        let g = restrict(&game.arena, p, c);
        match p {
            Player::Zero => every_play_wins(&g, game.arena.init(), &game.condition),
            Player::One => every_play_loses(&g, game.arena.init(), &game.condition),
        }
    })
}

/// Smallest winning positional strategy size, by enumeration.
pub fn min_positional_size(game: &Game) -> Option<usize> {
    positional_strategies(&game.arena, Player::Zero)
        .iter()
        .filter(|c| every_play_wins(&restrict(&game.arena, Player::Zero, c), game.arena.init(), &game.condition))
        .map(|c| positional_reach_size(&game.arena, c))
        .min()
}

/// The product of the raw arena with a Moore machine for player 0. Nodes are
/// `(state, position)` pairs for both players, coloured by the player-0
/// position.
pub fn moore_product(arena: &Arena, m: &StandAloneStrategy) -> (Graph, usize) {
    let mut index: BTreeMap<(usize, Player, usize), usize> = BTreeMap::new();
    let mut g = Graph { succ: Vec::new(), colour: Vec::new(), owner: Vec::new() };
    let mut queue = VecDeque::new();
    let mut node = |key: (usize, Player, usize), g: &mut Graph, queue: &mut VecDeque<(usize, Player, usize)>| {
        *index.entry(key).or_insert_with(|| {
            g.succ.push(Vec::new());
            g.colour.push((key.1 == Player::Zero).then_some(key.2));
            g.owner.push(key.1);
            queue.push_back(key);
            g.succ.len() - 1
        })
    };
    let start = node((m.init, Player::Zero, arena.init()), &mut g, &mut queue);
    while let Some(key @ (q, p, v)) = queue.pop_front() {
        let from = node(key, &mut g, &mut queue);
        let targets: Vec<(usize, Player, usize)> = match p {
            Player::Zero => arena.e0(v, m.labels[q]).map(|w| (q, Player::One, w)).into_iter().collect(),
            Player::One => (0..arena.actions1().len())
                .filter_map(|b| arena.e1(v, b).map(|t| (m.trans[q * m.inputs + b], Player::Zero, t)))
                .collect(),
        };
        for t in targets {
            let to = node(t, &mut g, &mut queue);
            g.succ[from].push(to);
        }
    }
    (g, start)
}
