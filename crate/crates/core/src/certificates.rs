//! Shortest and approximately shortest accepting lassos and witnesses of
//! deterministic automata.
//!
//! Ties between certificates of equal size are broken by comparing the stem
//! (or `u`) lexicographically as an action-index sequence, then the cycle
//! (or `v`).

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::analysis::{accepts_ultimately_periodic, nonempty};
use crate::arena::{Automaton, Lasso, Witness};
use crate::condition::{Condition, PosSet};
use crate::error::{Error, Result};

/// Bounds on the brute-force searches.
#[derive(Debug, Clone)]
pub struct SearchLimits {
    /// Largest automaton the exact searches accept.
    pub state_cap: usize,
    /// Maximum number of search nodes; `None` for no limit.
    pub budget: Option<u64>,
    /// Set to `true` from another thread to stop a running search.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { state_cap: 14, budget: Some(200_000_000), cancel: None }
    }
}

struct Meter<'a> {
    limits: &'a SearchLimits,
    spent: u64,
}

impl Meter<'_> {
    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.limits.budget.is_some_and(|b| self.spent > b) {
            return Err(Error::SizeLimit(format!("search budget of {} nodes exhausted", self.spent - 1)));
        }
        if self.spent % 4096 == 1 && self.limits.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Err(Error::Cancelled);
        }
        Ok(())
    }
}

/// Breadth-first distances to `target` along transitions whose source lies
/// in `inside` (every state when `None`); `usize::MAX` if unreachable.
fn distances_to(aut: &Automaton, target: usize, inside: Option<&PosSet>) -> Vec<usize> {
    let n = aut.states();
    let mut pred = vec![Vec::new(); n];
    for (q, _, r) in aut.transitions() {
        if inside.is_none_or(|s| s.contains(&q) && s.contains(&r)) {
            pred[r].push(q);
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(r) = queue.pop_front() {
        for &q in &pred[r] {
            if dist[q] == usize::MAX {
                dist[q] = dist[r] + 1;
                queue.push_back(q);
            }
        }
    }
    dist
}

/// The lexicographically least shortest word from the initial state to `v`.
fn least_path(aut: &Automaton, v: usize) -> Option<Vec<usize>> {
    let dist = distances_to(aut, v, None);
    let mut q = aut.init();
    if dist[q] == usize::MAX {
        return None;
    }
    let mut word = Vec::new();
    while q != v {
        let (a, r) = (0..aut.alphabet().len())
            .filter_map(|a| aut.next(q, a).map(|r| (a, r)))
            .find(|&(_, r)| dist[r].checked_add(1) == Some(dist[q]))
            .expect("distance decreases along some letter");
        word.push(a);
        q = r;
    }
    Some(word)
}

/// The lexicographically least closed walk from `v` of exactly `len` steps
/// that stays inside `inside` and visits `good`.
fn least_cycle(aut: &Automaton, v: usize, len: usize, inside: &PosSet, good: &PosSet) -> Option<Vec<usize>> {
    let n = aut.states();
    let sigma = aut.alphabet().len();
    // ok[r][q][seen]: from q with `seen`, some r-step walk ends at v having seen good.
    let mut ok = vec![vec![[false; 2]; n]; len + 1];
    ok[0][v][1] = true;
    for r in 1..=len {
        for q in inside.iter().copied() {
            for seen in 0..2 {
                ok[r][q][seen] = (0..sigma).any(|a| {
                    aut.next(q, a)
                        .is_some_and(|t| inside.contains(&t) && ok[r - 1][t][(seen == 1 || good.contains(&t)) as usize])
                });
            }
        }
    }
    let mut seen = good.contains(&v) as usize;
    if !inside.contains(&v) || !ok[len][v][seen] {
        return None;
    }
    let mut q = v;
    let mut word = Vec::with_capacity(len);
    for r in (0..len).rev() {
        let (a, t) = (0..sigma)
            .filter_map(|a| aut.next(q, a).map(|t| (a, t)))
            .find(|&(_, t)| inside.contains(&t) && ok[r][t][(seen == 1 || good.contains(&t)) as usize])
            .expect("feasible continuation");
        word.push(a);
        seen = (seen == 1 || good.contains(&t)) as usize;
        q = t;
    }
    Some(word)
}

/// Shortest accepting lasso under the Rabin pairs.
///
/// For a pair `(F, G)`, a state `g ∈ G ∩ F` and an entry `v ∈ F`, the best
/// lasso through them costs `d(q0, v) + d_F(v, g) + d_F(g, v)`, where `d_F`
/// only uses states of `F` (a non-empty closed walk when `v = g`).
pub fn shortest_lasso_rabin(aut: &Automaton, pairs: &[(PosSet, PosSet)]) -> Option<Lasso> {
    let n = aut.states();
    let from_init = {
        let mut d = vec![usize::MAX; n];
        for (v, dv) in d.iter_mut().enumerate() {
            *dv = distances_to(aut, v, None)[aut.init()];
        }
        d
    };
    // best[v]: cheapest accepting cycle through v over all pairs, with the
    // pairs achieving it.
    let mut best: Vec<(usize, Vec<usize>)> = vec![(usize::MAX, Vec::new()); n];
    for (i, (f, g)) in pairs.iter().enumerate() {
        for &target in g.intersection(f) {
            let to_target = distances_to(aut, target, Some(f));
            // Shortest non-empty closed walk through `target` inside F.
            let loop_len = (0..aut.alphabet().len())
                .filter_map(|a| aut.next(target, a))
                .filter(|t| f.contains(t) && to_target[*t] != usize::MAX)
                .map(|t| to_target[t] + 1)
                .min();
            for &v in f {
                let cost = if v == target {
                    loop_len
                } else {
                    let back = distances_to(aut, v, Some(f))[target];
                    (to_target[v] != usize::MAX && back != usize::MAX).then(|| to_target[v] + back)
                };
                let Some(cost) = cost else { continue };
                let slot = &mut best[v];
                if cost < slot.0 {
                    *slot = (cost, vec![i]);
                } else if cost == slot.0 && !slot.1.contains(&i) {
                    slot.1.push(i);
                }
            }
        }
    }
    let total = |v: usize| from_init[v].checked_add(best[v].0).filter(|_| best[v].0 != usize::MAX);
    let optimum = (0..n).filter_map(total).min()?;
    let mut choice: Option<(Vec<usize>, Vec<usize>)> = None;
    for v in (0..n).filter(|&v| total(v) == Some(optimum)) {
        let stem = least_path(aut, v).expect("reachable");
        let cycle = best[v]
            .1
            .iter()
            .filter_map(|&i| least_cycle(aut, v, best[v].0, &pairs[i].0, &pairs[i].1))
            .min()
            .expect("cycle of the computed length exists");
        let candidate = (stem, cycle);
        if choice.as_ref().is_none_or(|c| candidate < *c) {
            choice = Some(candidate);
        }
    }
    let (stem, cycle) = choice?;
    Some(aut.lasso(&stem, &cycle).expect("lasso follows the automaton"))
}

/// Shortest lasso visiting `f` infinitely often.
pub fn shortest_lasso_buechi(aut: &Automaton, f: &PosSet) -> Option<Lasso> {
    let all: PosSet = (0..aut.states()).collect();
    shortest_lasso_rabin(aut, &[(all, f.clone())])
}

/// Rabin pairs equivalent to the condition, when it has a polynomial
/// shortest-lasso algorithm.
fn as_rabin_pairs(cond: &Condition, states: usize) -> Option<Vec<(PosSet, PosSet)>> {
    let all: PosSet = (0..states).collect();
    Some(match cond {
        Condition::Safety => vec![(all.clone(), all)],
        Condition::Buchi(f) => vec![(all, f.clone())],
        Condition::CoBuchi(f) => {
            let rest: PosSet = all.difference(f).copied().collect();
            vec![(rest.clone(), rest)]
        }
        Condition::Parity(_) => {
            let mut colours: Vec<u32> = (0..states).map(|v| cond.colour(v)).collect();
            colours.sort_unstable();
            colours.dedup();
            colours
                .into_iter()
                .filter(|d| d % 2 == 0)
                .map(|d| {
                    let below = (0..states).filter(|&v| cond.colour(v) <= d).collect();
                    let top = (0..states).filter(|&v| cond.colour(v) == d).collect();
                    (below, top)
                })
                .collect()
        }
        Condition::Rabin(pairs) => pairs.clone(),
        _ => return None,
    })
}

/// Shortest accepting lasso: polynomial for conditions expressible as Rabin
/// pairs, brute force otherwise.
pub fn shortest_lasso(aut: &Automaton, limits: &SearchLimits) -> Result<Option<Lasso>> {
    match as_rabin_pairs(&aut.condition, aut.states()) {
        Some(pairs) => Ok(shortest_lasso_rabin(aut, &pairs)),
        None => shortest_lasso_exact(aut, limits),
    }
}

/// Whether some reachable, strongly connected set of states with at least
/// one internal transition satisfies the condition. Enumerates every subset.
fn language_nonempty_by_subsets(aut: &Automaton) -> bool {
    let n = aut.states();
    let reach = reachable(aut);
    (1u64..1 << n).any(|mask| {
        let set: PosSet = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        set.iter().all(|&v| reach[v]) && strongly_connected_cycle(aut, &set) && aut.condition.accepts(&set)
    })
}

fn reachable(aut: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; aut.states()];
    seen[aut.init()] = true;
    let mut stack = vec![aut.init()];
    while let Some(q) = stack.pop() {
        for a in 0..aut.alphabet().len() {
            if let Some(r) = aut.next(q, a) {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    seen
}

fn strongly_connected_cycle(aut: &Automaton, set: &PosSet) -> bool {
    let Some(&start) = set.iter().next() else { return false };
    let sigma = aut.alphabet().len();
    let inner = |q: usize| (0..sigma).filter_map(move |a| aut.next(q, a)).filter(|r| set.contains(r));
    let closes = |forward: bool| {
        let mut seen = PosSet::from([start]);
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            let next: Vec<usize> = if forward {
                inner(q).collect()
            } else {
                set.iter().copied().filter(|&p| inner(p).any(|r| r == q)).collect()
            };
            for r in next {
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        seen.len() == set.len()
    };
    set.iter().any(|&q| inner(q).next().is_some()) && closes(true) && closes(false)
}

fn check_cap(aut: &Automaton, limits: &SearchLimits) -> Result<()> {
    if aut.states() > limits.state_cap || aut.states() > 63 {
        return Err(Error::SizeLimit(format!(
            "{} states exceed the exact-search cap of {}",
            aut.states(),
            limits.state_cap
        )));
    }
    Ok(())
}

/// Calls `visit(word, states)` for every word of length `len` on which the
/// run is defined, in lexicographic order. `states[i]` is the state before
/// letter `i`; `states[len]` is the final state.
fn for_each_run(
    aut: &Automaton,
    len: usize,
    meter: &mut Meter,
    visit: &mut dyn FnMut(&[usize], &[usize]),
) -> Result<()> {
    fn go(
        aut: &Automaton,
        len: usize,
        word: &mut Vec<usize>,
        states: &mut Vec<usize>,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[usize], &[usize]),
    ) -> Result<()> {
        meter.tick()?;
        if word.len() == len {
            visit(word, states);
            return Ok(());
        }
        let q = *states.last().expect("non-empty");
        for a in 0..aut.alphabet().len() {
            if let Some(r) = aut.next(q, a) {
                word.push(a);
                states.push(r);
                go(aut, len, word, states, meter, visit)?;
                word.pop();
                states.pop();
            }
        }
        Ok(())
    }
    go(aut, len, &mut Vec::with_capacity(len), &mut vec![aut.init()], meter, visit)
}

/// Shortest accepting lasso by iterative deepening over words. The language
/// is first checked for emptiness by subset enumeration, so the deepening
/// always terminates.
pub fn shortest_lasso_exact(aut: &Automaton, limits: &SearchLimits) -> Result<Option<Lasso>> {
    check_cap(aut, limits)?;
    if !language_nonempty_by_subsets(aut) {
        return Ok(None);
    }
    let n = aut.states();
    let mut meter = Meter { limits, spent: 0 };
    for len in 1..=n + n * n {
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        for_each_run(aut, len, &mut meter, &mut |word, states| {
            for split in 0..len {
                if states[split] != states[len] {
                    continue;
                }
                let inf: PosSet = states[split..len].iter().copied().collect();
                if !aut.condition.accepts(&inf) {
                    continue;
                }
                let candidate = (word[..split].to_vec(), word[split..].to_vec());
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        })?;
        if let Some((stem, cycle)) = best {
            return Ok(Some(aut.lasso(&stem, &cycle).expect("found on a run")));
        }
    }
    unreachable!("a non-empty language has a lasso of size at most n + n^2")
}

/// Reads the player-0 actions along a lasso.
pub fn lasso_to_witness(lasso: &Lasso) -> Witness {
    Witness {
        u: lasso.stem.iter().map(|&(a, _)| a).collect(),
        v: lasso.cycle.iter().map(|&(a, _)| a).collect(),
    }
}

/// The least accepted witness of total size `len`, if any.
fn least_witness_of_size(aut: &Automaton, len: usize, meter: &mut Meter) -> Result<Option<Witness>> {
    let mut best: Option<Witness> = None;
    for_each_run(aut, len, meter, &mut |word, _| {
        for split in 0..len {
            let w = Witness { u: word[..split].to_vec(), v: word[split..].to_vec() };
            if best.as_ref().is_some_and(|b| w >= *b) {
                continue;
            }
            if accepts_ultimately_periodic(aut, &w) {
                best = Some(w);
            }
        }
    })?;
    Ok(best)
}

/// Shortest accepted word `u v^ω`, searched in increasing `|u| + |v|`.
pub fn shortest_witness_exact(aut: &Automaton, limits: &SearchLimits) -> Result<Option<Witness>> {
    check_cap(aut, limits)?;
    if !language_nonempty_by_subsets(aut) {
        return Ok(None);
    }
    let n = aut.states();
    let mut meter = Meter { limits, spent: 0 };
    for len in 1..=n + n * n {
        if let Some(w) = least_witness_of_size(aut, len, &mut meter)? {
            return Ok(Some(w));
        }
    }
    unreachable!("every accepting lasso yields a witness of the same size")
}

/// Smallest `k ≥ 0` with `c^k ≥ n`. Requires `c > 1`.
pub fn ceil_log(c: &Ratio<u64>, n: usize) -> Result<u32> {
    if *c.numer() <= *c.denom() {
        return Err(Error::Invalid(format!("approximation factor {c} must exceed 1")));
    }
    let (p, q) = (BigUint::from(*c.numer()), BigUint::from(*c.denom()));
    let n = BigUint::from(n);
    let (mut lhs, mut rhs) = (BigUint::from(1u32), n);
    let mut k = 0;
    while lhs < rhs {
        lhs *= &p;
        rhs *= &q;
        k += 1;
    }
    Ok(k)
}

/// A witness of size at most `c^n` for the optimum `n`: any accepting lasso
/// gives a witness of size `m`, then every size up to `⌈log_c m⌉` is tried
/// exhaustively.
pub fn witness_approx(aut: &Automaton, c: &Ratio<u64>, limits: &SearchLimits) -> Result<Option<Witness>> {
    // Rejects factors c <= 1 even when the language is empty.
    ceil_log(c, 1)?;
    let Some(lasso) = nonempty(aut) else { return Ok(None) };
    let fallback = lasso_to_witness(&lasso);
    let m = fallback.size();
    let horizon = (ceil_log(c, m)? as usize).min(m - 1);
    let mut meter = Meter { limits, spent: 0 };
    for len in 1..=horizon {
        if let Some(w) = least_witness_of_size(aut, len, &mut meter)? {
            return Ok(Some(w));
        }
    }
    Ok(Some(fallback))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;

    fn sizes(l: Option<Lasso>) -> Option<usize> {
        l.map(|l| l.size())
    }

    #[test]
    fn buechi_reference_instances() {
        let l = shortest_lasso_buechi(&a_loop(Condition::Safety), &[0].into()).unwrap();
        assert_eq!((l.stem, l.cycle), (vec![], vec![(0, 0)]));
        // Two lassos of size 2; the empty stem wins the tie.
        let l = shortest_lasso_buechi(&a_two(Condition::Safety), &[1].into()).unwrap();
        assert_eq!((l.stem, l.cycle), (vec![], vec![(0, 0), (1, 0)]));
        assert!(shortest_lasso_buechi(&a_two(Condition::Safety), &PosSet::new()).is_none());
    }

    #[test]
    fn rabin_reference_instances() {
        let aut = a_rabin(Condition::Safety);
        assert_eq!(sizes(shortest_lasso_rabin(&aut, &[([1].into(), [1].into())])), Some(2));
        assert_eq!(sizes(shortest_lasso_rabin(&aut, &[([2].into(), [1].into())])), None);
        assert_eq!(sizes(shortest_lasso_rabin(&a_loop(Condition::Safety), &[([0].into(), [0].into())])), Some(1));
    }

    #[test]
    fn exact_reference_instances() {
        let limits = SearchLimits::default();
        let gb = shortest_lasso_exact(&a_gb(), &limits).unwrap().unwrap();
        assert_eq!(gb.size(), 3);
        assert_eq!(lasso_to_witness(&gb), Witness { u: vec![], v: vec![0, 0, 0] });
        assert_eq!(sizes(shortest_lasso_exact(&a_loop(Condition::Safety), &limits).unwrap()), Some(1));
        let muller = a_two(Condition::Muller(vec![[1].into()]));
        assert_eq!(sizes(shortest_lasso_exact(&muller, &limits).unwrap()), Some(2));
    }

    #[test]
    fn a_two_witness_beats_lasso() {
        let limits = SearchLimits::default();
        let aut = a_two(Condition::buchi([1]));
        let w = shortest_witness_exact(&aut, &limits).unwrap().unwrap();
        assert_eq!(w, Witness { u: vec![], v: vec![0] });
        assert!(shortest_witness_exact(&a_two(Condition::buchi([])), &limits).unwrap().is_none());
        let approx = witness_approx(&aut, &Ratio::new(2, 1), &limits).unwrap().unwrap();
        assert_eq!(approx.size(), 1);
    }

    #[test]
    fn ceil_log_is_exact() {
        let two = Ratio::new(2u64, 1);
        assert_eq!(ceil_log(&two, 1).unwrap(), 0);
        assert_eq!(ceil_log(&two, 2).unwrap(), 1);
        assert_eq!(ceil_log(&two, 7).unwrap(), 3);
        assert_eq!(ceil_log(&two, 8).unwrap(), 3);
        assert_eq!(ceil_log(&two, 9).unwrap(), 4);
        assert_eq!(ceil_log(&Ratio::new(3, 2), 3).unwrap(), 3);
        assert!(ceil_log(&Ratio::new(1, 1), 3).is_err());
    }

    #[test]
    fn cancelled_search_stops() {
        let flag = Arc::new(AtomicBool::new(true));
        let limits = SearchLimits { cancel: Some(flag), ..SearchLimits::default() };
        let big = Automaton::from_transitions(
            8,
            &["a", "b"],
            0,
            &(0..8).flat_map(|q| [(q, 0, (q + 1) % 8), (q, 1, 0)]).collect::<Vec<_>>(),
            Condition::GenBuchi(vec![[7].into(), [6].into()]),
        );
        assert_eq!(shortest_lasso_exact(&big, &limits).unwrap_err(), Error::Cancelled);
    }
}
