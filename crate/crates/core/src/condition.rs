//! Winning conditions over the player-0 positions of an arena.
//!
//! Every condition is evaluated on the set of player-0 positions that occur
//! infinitely often along a play (its inf-set). Finite plays are decided by
//! who is stuck and never reach this module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A set of player-0 positions.
pub type PosSet = BTreeSet<usize>;

/// Upper bound on the size of a lifted Muller family.
pub const MULLER_LIFT_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionKind {
    Safety,
    Buchi,
    CoBuchi,
    GenBuchi,
    Parity,
    Rabin,
    Streett,
    Muller,
}

impl ConditionKind {
    pub const ALL: [ConditionKind; 8] = [
        ConditionKind::Safety,
        ConditionKind::Buchi,
        ConditionKind::CoBuchi,
        ConditionKind::GenBuchi,
        ConditionKind::Parity,
        ConditionKind::Rabin,
        ConditionKind::Streett,
        ConditionKind::Muller,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ConditionKind::Safety => "safety",
            ConditionKind::Buchi => "buchi",
            ConditionKind::CoBuchi => "cobuchi",
            ConditionKind::GenBuchi => "genbuchi",
            ConditionKind::Parity => "parity",
            ConditionKind::Rabin => "rabin",
            ConditionKind::Streett => "streett",
            ConditionKind::Muller => "muller",
        }
    }

    /// Whether player 0 always has a positional winning strategy when she
    /// wins a game with this kind of condition.
    pub fn positional_for_player0(self) -> bool {
        matches!(
            self,
            ConditionKind::Safety
                | ConditionKind::Buchi
                | ConditionKind::CoBuchi
                | ConditionKind::Parity
                | ConditionKind::Rabin
        )
    }

    /// Whether player 1 always has a positional winning strategy when he wins.
    pub fn positional_for_player1(self) -> bool {
        matches!(
            self,
            ConditionKind::Safety
                | ConditionKind::Buchi
                | ConditionKind::CoBuchi
                | ConditionKind::Parity
                | ConditionKind::Streett
                | ConditionKind::GenBuchi
        )
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The acceptance component of a game or automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Every infinite play is winning.
    Safety,
    /// Some position of the set is visited infinitely often.
    Buchi(PosSet),
    /// No position of the set is visited infinitely often.
    CoBuchi(PosSet),
    /// Every set is visited infinitely often.
    GenBuchi(Vec<PosSet>),
    /// The largest colour seen infinitely often is even.
    Parity(BTreeMap<usize, u32>),
    /// Some pair `(F, G)` has `inf ⊆ F` and `inf ∩ G ≠ ∅`.
    Rabin(Vec<(PosSet, PosSet)>),
    /// Every pair `(F, G)` has `inf ⊄ F` or `inf ∩ G = ∅`.
    Streett(Vec<(PosSet, PosSet)>),
    /// The inf-set is a member of the family.
    Muller(Vec<PosSet>),
}

impl Condition {
    pub fn kind(&self) -> ConditionKind {
        match self {
            Condition::Safety => ConditionKind::Safety,
            Condition::Buchi(_) => ConditionKind::Buchi,
            Condition::CoBuchi(_) => ConditionKind::CoBuchi,
            Condition::GenBuchi(_) => ConditionKind::GenBuchi,
            Condition::Parity(_) => ConditionKind::Parity,
            Condition::Rabin(_) => ConditionKind::Rabin,
            Condition::Streett(_) => ConditionKind::Streett,
            Condition::Muller(_) => ConditionKind::Muller,
        }
    }

    pub fn buchi(set: impl IntoIterator<Item = usize>) -> Self {
        Condition::Buchi(set.into_iter().collect())
    }

    pub fn cobuchi(set: impl IntoIterator<Item = usize>) -> Self {
        Condition::CoBuchi(set.into_iter().collect())
    }

    /// Colour of a position under a parity condition; missing entries read as 0.
    pub fn colour(&self, v: usize) -> u32 {
        match self {
            Condition::Parity(colours) => colours.get(&v).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// Evaluates the condition on an inf-set.
    pub fn accepts(&self, inf: &PosSet) -> bool {
        self.accepts_with(|v| inf.contains(&v), || inf.iter().copied())
    }

    /// Evaluates the condition on an inf-set given as a membership test and
    /// an enumeration. Both must describe the same non-empty set.
    pub fn accepts_with<I>(&self, contains: impl Fn(usize) -> bool, members: impl Fn() -> I) -> bool
    where
        I: Iterator<Item = usize>,
    {
        let meets = |set: &PosSet| set.iter().any(|&v| contains(v));
        let within = |set: &PosSet| members().all(|v| set.contains(&v));
        match self {
            Condition::Safety => true,
            Condition::Buchi(f) => meets(f),
            Condition::CoBuchi(f) => !meets(f),
            Condition::GenBuchi(sets) => sets.iter().all(meets),
            Condition::Parity(_) => match members().map(|v| self.colour(v)).max() {
                Some(c) => c % 2 == 0,
                None => false,
            },
            Condition::Rabin(pairs) => pairs.iter().any(|(f, g)| within(f) && meets(g)),
            Condition::Streett(pairs) => pairs.iter().all(|(f, g)| !within(f) || !meets(g)),
            Condition::Muller(family) => {
                let inf: PosSet = members().collect();
                family.iter().any(|set| *set == inf)
            }
        }
    }

    /// Every position index the condition mentions.
    pub fn mentioned(&self) -> PosSet {
        let mut out = PosSet::new();
        match self {
            Condition::Safety => {}
            Condition::Buchi(f) | Condition::CoBuchi(f) => out.extend(f),
            Condition::GenBuchi(sets) | Condition::Muller(sets) => {
                sets.iter().for_each(|s| out.extend(s))
            }
            Condition::Parity(colours) => out.extend(colours.keys()),
            Condition::Rabin(pairs) | Condition::Streett(pairs) => pairs.iter().for_each(|(f, g)| {
                out.extend(f);
                out.extend(g);
            }),
        }
        out
    }

    /// Describes every invariant violation against an arena with `v0_count`
    /// player-0 positions.
    pub fn violations(&self, v0_count: usize) -> Vec<String> {
        let mut out = Vec::new();
        for v in self.mentioned() {
            if v >= v0_count {
                out.push(format!(
                    "cond references position {v} out of range (v0 has {v0_count} positions)"
                ));
            }
        }
        match self {
            Condition::Parity(colours) => {
                let missing: Vec<usize> = (0..v0_count).filter(|v| !colours.contains_key(v)).collect();
                if !missing.is_empty() {
                    out.push(format!("parity map not total: no colour for positions {missing:?}"));
                }
            }
            Condition::GenBuchi(sets) if sets.is_empty() => {
                out.push("genbuchi condition has no acceptance sets".into())
            }
            Condition::Rabin(pairs) if pairs.is_empty() => {
                out.push("rabin condition has no pairs".into())
            }
            Condition::Streett(pairs) if pairs.is_empty() => {
                out.push("streett condition has no pairs".into())
            }
            _ => {}
        }
        out
    }

    /// The condition that accepts exactly the inf-sets this one rejects, when
    /// it has a compact representation. Safety and Muller have none here.
    pub fn dual(&self, v0_count: usize) -> Option<Condition> {
        Some(match self {
            Condition::Safety | Condition::Muller(_) => return None,
            Condition::Buchi(f) => Condition::CoBuchi(f.clone()),
            Condition::CoBuchi(f) => Condition::Buchi(f.clone()),
            Condition::GenBuchi(sets) => {
                let all: PosSet = (0..v0_count).collect();
                Condition::Rabin(
                    sets.iter()
                        .map(|s| (all.difference(s).copied().collect(), all.clone()))
                        .collect(),
                )
            }
            Condition::Parity(colours) => {
                Condition::Parity((0..v0_count).map(|v| (v, colours.get(&v).copied().unwrap_or(0) + 1)).collect())
            }
            Condition::Rabin(pairs) => Condition::Streett(pairs.clone()),
            Condition::Streett(pairs) => Condition::Rabin(pairs.clone()),
        })
    }

    /// Lifts the condition to a product whose player-0 position `i` projects
    /// to original position `origin[i]`. A product inf-set is accepted by the
    /// lifted condition exactly when its projection is accepted by `self`.
    pub fn lift(&self, origin: &[usize]) -> Result<Condition> {
        let preimage = |set: &PosSet| -> PosSet {
            origin
                .iter()
                .enumerate()
                .filter(|(_, v)| set.contains(v))
                .map(|(i, _)| i)
                .collect()
        };
        Ok(match self {
            Condition::Safety => Condition::Safety,
            Condition::Buchi(f) => Condition::Buchi(preimage(f)),
            Condition::CoBuchi(f) => Condition::CoBuchi(preimage(f)),
            Condition::GenBuchi(sets) => Condition::GenBuchi(sets.iter().map(preimage).collect()),
            Condition::Parity(_) => {
                Condition::Parity(origin.iter().enumerate().map(|(i, &v)| (i, self.colour(v))).collect())
            }
            Condition::Rabin(pairs) => {
                Condition::Rabin(pairs.iter().map(|(f, g)| (preimage(f), preimage(g))).collect())
            }
            Condition::Streett(pairs) => {
                Condition::Streett(pairs.iter().map(|(f, g)| (preimage(f), preimage(g))).collect())
            }
            Condition::Muller(family) => Condition::Muller(lift_muller(family, origin)?),
        })
    }
}

/// All product sets whose projection is a member of `family`: for each
/// member `F`, every choice of a non-empty set of copies per position of `F`.
fn lift_muller(family: &[PosSet], origin: &[usize]) -> Result<Vec<PosSet>> {
    let mut lifted = Vec::new();
    for set in family {
        let copies: Vec<Vec<usize>> = set
            .iter()
            .map(|&v| (0..origin.len()).filter(|&i| origin[i] == v).collect())
            .collect();
        if copies.iter().any(Vec::is_empty) {
            // Some position has no reachable copy; no product set projects onto `set`.
            continue;
        }
        let mut partial = vec![PosSet::new()];
        for group in &copies {
            let mut next = Vec::new();
            for mask in 1u64..(1u64 << group.len()) {
                for base in &partial {
                    let mut s = base.clone();
                    s.extend(group.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i));
                    next.push(s);
                }
                if lifted.len() + next.len() > MULLER_LIFT_LIMIT {
                    return Err(Error::SizeLimit(format!(
                        "lifted muller family exceeds {MULLER_LIFT_LIMIT} sets"
                    )));
                }
            }
            partial = next;
        }
        lifted.extend(partial);
    }
    lifted.sort();
    lifted.dedup();
    Ok(lifted)
}
