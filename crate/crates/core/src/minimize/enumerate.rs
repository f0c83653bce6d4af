//! Canonical strategy candidates. Positions (or memory/position
//! configurations, or Moore states) are numbered in breadth-first discovery
//! order, so each strategy is generated once up to renaming.

use std::collections::{BTreeMap, HashSet};

use crate::arena::{Arena, Player};
use crate::error::{Error, Result};
use crate::strategy::{FiniteMemoryStrategy, InitMemory, PositionalStrategy, StandAloneStrategy};

/// Counts search nodes against a budget.
pub(crate) struct Budget {
    pub limit: u64,
    pub spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, spent: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.limit {
            return Err(Error::SizeLimit(format!("candidate budget of {} exhausted", self.limit)));
        }
        Ok(())
    }
}

/// What a visitor wants after seeing a candidate.
pub(crate) enum Flow {
    Continue,
    /// Only candidates strictly smaller than this are of further interest.
    Shrink(usize),
    Stop,
}

/// Every pruned positional player-0 strategy with at most `*limit` reachable
/// positions, in lexicographic order of (discovery index, action). The
/// visitor receives the candidate and its size.
pub(crate) fn positional(
    arena: &Arena,
    limit: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&PositionalStrategy, usize) -> Result<Flow>,
) -> Result<()> {
    struct Search<'a> {
        arena: &'a Arena,
        limit: usize,
        order: Vec<usize>,
        seen: Vec<bool>,
        choice: BTreeMap<usize, usize>,
        stopped: bool,
    }
    fn go(
        s: &mut Search,
        i: usize,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&PositionalStrategy, usize) -> Result<Flow>,
    ) -> Result<()> {
        budget.tick()?;
        if i == s.order.len() {
            let candidate = PositionalStrategy { player: Player::Zero, choice: s.choice.clone() };
            match visit(&candidate, i)? {
                Flow::Continue => {}
                Flow::Shrink(n) => s.limit = s.limit.min(n.saturating_sub(1)),
                Flow::Stop => s.stopped = true,
            }
            return Ok(());
        }
        let v = s.order[i];
        let moves: Vec<(usize, usize)> = s.arena.moves0(v).collect();
        for (a, w) in moves {
            if s.stopped || s.order.len() > s.limit {
                break;
            }
            let before = s.order.len();
            for (_, next) in s.arena.moves1(w) {
                if !s.seen[next] {
                    s.seen[next] = true;
                    s.order.push(next);
                }
            }
            if s.order.len() <= s.limit {
                s.choice.insert(v, a);
                go(s, i + 1, budget, visit)?;
                s.choice.remove(&v);
            }
            for p in s.order.drain(before..) {
                s.seen[p] = false;
            }
        }
        Ok(())
    }
    if limit == 0 {
        return Ok(());
    }
    let mut seen = vec![false; arena.v0_count()];
    seen[arena.init()] = true;
    let mut s = Search { arena, limit, order: vec![arena.init()], seen, choice: BTreeMap::new(), stopped: false };
    go(&mut s, 0, budget, visit)
}

/// Every finite-memory player-0 strategy with at most `limit` reachable
/// configurations, memory labels introduced in discovery order. After a
/// move into a player-1 position without moves the memory is irrelevant
/// and kept unchanged.
pub(crate) fn finite_memory(
    arena: &Arena,
    limit: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&FiniteMemoryStrategy, usize) -> Result<Flow>,
) -> Result<()> {
    struct Search<'a> {
        arena: &'a Arena,
        limit: usize,
        order: Vec<(usize, usize)>,
        seen: HashSet<(usize, usize)>,
        labels: usize,
        table: BTreeMap<(usize, usize), (usize, usize)>,
        stopped: bool,
    }
    fn go(
        s: &mut Search,
        i: usize,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&FiniteMemoryStrategy, usize) -> Result<Flow>,
    ) -> Result<()> {
        budget.tick()?;
        if i == s.order.len() {
            let candidate = FiniteMemoryStrategy {
                player: Player::Zero,
                memory_count: s.labels,
                init: InitMemory::Single(0),
                table: s.table.clone(),
            };
            match visit(&candidate, i)? {
                Flow::Continue => {}
                Flow::Shrink(n) => s.limit = s.limit.min(n.saturating_sub(1)),
                Flow::Stop => s.stopped = true,
            }
            return Ok(());
        }
        let (m, v) = s.order[i];
        let moves: Vec<(usize, usize)> = s.arena.moves0(v).collect();
        for (a, w) in moves {
            let targets: Vec<usize> = s.arena.moves1(w).map(|(_, t)| t).collect();
            let options: Vec<usize> = if targets.is_empty() { vec![m] } else { (0..=s.labels).collect() };
            for next in options {
                if s.stopped || s.order.len() > s.limit {
                    return Ok(());
                }
                let fresh = next == s.labels;
                if fresh {
                    s.labels += 1;
                }
                let before = s.order.len();
                for &t in &targets {
                    if s.seen.insert((next, t)) {
                        s.order.push((next, t));
                    }
                }
                if s.order.len() <= s.limit {
                    s.table.insert((m, v), (a, next));
                    go(s, i + 1, budget, visit)?;
                    s.table.remove(&(m, v));
                }
                for c in s.order.drain(before..) {
                    s.seen.remove(&c);
                }
                if fresh {
                    s.labels -= 1;
                }
            }
        }
        Ok(())
    }
    if limit == 0 {
        return Ok(());
    }
    let root = (0, arena.init());
    let mut s = Search {
        arena,
        limit,
        order: vec![root],
        seen: HashSet::from([root]),
        labels: 1,
        table: BTreeMap::new(),
        stopped: false,
    };
    go(&mut s, 0, budget, visit)
}

/// Every Moore machine with exactly `states` states over the arena's
/// actions whose states are all reachable, numbered in breadth-first order.
pub(crate) fn moore(
    arena: &Arena,
    states: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&StandAloneStrategy) -> Result<Flow>,
) -> Result<()> {
    let inputs = arena.actions1().len();
    let outputs = arena.actions0().len();
    if states == 0 || outputs == 0 {
        return Ok(());
    }
    let slots = states * inputs;
    let mut trans = vec![0; slots];
    let mut stop = false;

    fn labels(
        trans: &[usize],
        states: usize,
        inputs: usize,
        outputs: usize,
        budget: &mut Budget,
        stop: &mut bool,
        visit: &mut dyn FnMut(&StandAloneStrategy) -> Result<Flow>,
    ) -> Result<()> {
        let mut label = vec![0; states];
        loop {
            budget.tick()?;
            let m = StandAloneStrategy { init: 0, inputs, labels: label.clone(), trans: trans.to_vec() };
            if let Flow::Stop = visit(&m)? {
                *stop = true;
                return Ok(());
            }
            // Odometer over labels, last state fastest.
            let mut k = states;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                label[k] += 1;
                if label[k] < outputs {
                    break;
                }
                label[k] = 0;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        slot: usize,
        discovered: usize,
        trans: &mut [usize],
        states: usize,
        inputs: usize,
        outputs: usize,
        budget: &mut Budget,
        stop: &mut bool,
        visit: &mut dyn FnMut(&StandAloneStrategy) -> Result<Flow>,
    ) -> Result<()> {
        if *stop {
            return Ok(());
        }
        budget.tick()?;
        if slot == trans.len() {
            if discovered == states {
                labels(trans, states, inputs, outputs, budget, stop, visit)?;
            }
            return Ok(());
        }
        // A state must be discovered before its own transitions are chosen.
        if inputs > 0 && slot / inputs >= discovered {
            return Ok(());
        }
        let top = if discovered < states { discovered } else { states - 1 };
        for t in 0..=top {
            trans[slot] = t;
            let next = if t == discovered { discovered + 1 } else { discovered };
            go(slot + 1, next, trans, states, inputs, outputs, budget, stop, visit)?;
        }
        Ok(())
    }

    if inputs == 0 {
        // Without opponent actions only the initial state matters.
        if states == 1 {
            labels(&trans, 1, 0, outputs, budget, &mut stop, visit)?;
        }
        return Ok(());
    }
    go(0, 1, &mut trans, states, inputs, outputs, budget, &mut stop, visit)
}
