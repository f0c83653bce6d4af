//! Max-parity games on explicit graphs, solved by Zielonka's recursive
//! algorithm with strategy extraction.

use std::collections::VecDeque;

use crate::arena::Player;

pub(crate) const NONE: usize = usize::MAX;

/// Every node must have at least one successor. Player 0 wins a play when
/// the largest priority seen infinitely often is even.
#[derive(Debug, Clone, Default)]
pub(crate) struct ParityGame {
    pub owner: Vec<Player>,
    pub prio: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub(crate) struct ParitySolution {
    /// Whether player 0 wins from each node.
    pub win0: Vec<bool>,
    /// For every node in its owner's winning region, a successor that keeps
    /// the owner winning; `NONE` elsewhere.
    pub strategy: Vec<usize>,
}

impl ParityGame {
    pub fn add_node(&mut self, owner: Player, prio: u32) -> usize {
        self.owner.push(owner);
        self.prio.push(prio);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn solve(&mut self) -> ParitySolution {
        self.pred = vec![Vec::new(); self.len()];
        for (v, out) in self.succ.iter().enumerate() {
            debug_assert!(!out.is_empty(), "node {v} has no successor");
            for &t in out {
                self.pred[t].push(v);
            }
        }
        let (win0, strategy) = self.zielonka(&vec![true; self.len()]);
        ParitySolution { win0, strategy }
    }

    /// Attractor of `target` for `player` inside `mask`, with the moves that
    /// pull the player's nodes towards `target`.
    fn attractor(&self, player: Player, target: &[usize], mask: &[bool]) -> (Vec<bool>, Vec<(usize, usize)>) {
        let mut attr = vec![false; self.len()];
        let mut moves = Vec::new();
        let mut remaining: Vec<usize> =
            (0..self.len()).map(|v| self.succ[v].iter().filter(|&&t| mask[t]).count()).collect();
        let mut queue = VecDeque::new();
        for &t in target {
            attr[t] = true;
            queue.push_back(t);
        }
        while let Some(t) = queue.pop_front() {
            for &p in &self.pred[t] {
                if !mask[p] || attr[p] {
                    continue;
                }
                if self.owner[p] == player {
                    attr[p] = true;
                    moves.push((p, t));
                    queue.push_back(p);
                } else {
                    remaining[p] -= 1;
                    if remaining[p] == 0 {
                        attr[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        (attr, moves)
    }

    fn zielonka(&self, mask: &[bool]) -> (Vec<bool>, Vec<usize>) {
        let n = self.len();
        let mut win0 = vec![false; n];
        let mut strategy = vec![NONE; n];
        let Some(d) = (0..n).filter(|&v| mask[v]).map(|v| self.prio[v]).max() else {
            return (win0, strategy);
        };
        let p = if d % 2 == 0 { Player::Zero } else { Player::One };
        let top: Vec<usize> = (0..n).filter(|&v| mask[v] && self.prio[v] == d).collect();
        let (attr, attr_moves) = self.attractor(p, &top, mask);
        let rest: Vec<bool> = (0..n).map(|v| mask[v] && !attr[v]).collect();
        let (sub_win0, sub_strategy) = self.zielonka(&rest);
        let opponent_region: Vec<usize> =
            (0..n).filter(|&v| rest[v] && (sub_win0[v] != (p == Player::Zero))).collect();

        if opponent_region.is_empty() {
            for v in (0..n).filter(|&v| mask[v]) {
                win0[v] = p == Player::Zero;
                if rest[v] {
                    strategy[v] = sub_strategy[v];
                }
            }
            for (v, t) in attr_moves {
                strategy[v] = t;
            }
            for &v in &top {
                if self.owner[v] == p {
                    strategy[v] = *self.succ[v].iter().find(|&&t| mask[t]).expect("subgame is total");
                }
            }
            return (win0, strategy);
        }

        let (lost, lost_moves) = self.attractor(p.opponent(), &opponent_region, mask);
        let keep: Vec<bool> = (0..n).map(|v| mask[v] && !lost[v]).collect();
        let (keep_win0, keep_strategy) = self.zielonka(&keep);
        for v in (0..n).filter(|&v| mask[v]) {
            if keep[v] {
                win0[v] = keep_win0[v];
                strategy[v] = keep_strategy[v];
            } else {
                win0[v] = p == Player::One;
            }
        }
        for &v in &opponent_region {
            strategy[v] = sub_strategy[v];
        }
        for (v, t) in lost_moves {
            strategy[v] = t;
        }
        (win0, strategy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn player_zero_escapes_to_even_loop() {
        let mut g = ParityGame::default();
        let a = g.add_node(Player::Zero, 1);
        let b = g.add_node(Player::Zero, 2);
        let c = g.add_node(Player::One, 3);
        g.add_edge(a, c);
        g.add_edge(a, b);
        g.add_edge(b, b);
        g.add_edge(c, c);
        let s = g.solve();
        assert_eq!(s.win0, vec![true, true, false]);
        assert_eq!(s.strategy[a], b);
        assert_eq!(s.strategy[c], c);
    }

    #[test]
    fn player_one_forces_odd_cycle() {
        let mut g = ParityGame::default();
        let a = g.add_node(Player::One, 0);
        let b = g.add_node(Player::Zero, 1);
        let c = g.add_node(Player::Zero, 2);
        g.add_edge(a, b);
        g.add_edge(a, c);
        g.add_edge(b, a);
        g.add_edge(c, a);
        let s = g.solve();
        assert_eq!(s.win0, vec![false, false, false]);
        assert_eq!(s.strategy[a], b);
    }
}
