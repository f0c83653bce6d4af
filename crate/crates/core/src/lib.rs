//! Certificates for ω-automata and infinite games on finite arenas.
//!
//! The crate covers three kinds of certificates: accepting lassos,
//! ultimately periodic witnesses `uv^ω`, and winning strategies (positional,
//! finite-memory and stand-alone Moore machines). It computes them exactly
//! by brute force, approximates them, checks them, and generates the vertex
//! cover game family used to benchmark strategy minimization.

pub mod analysis;
pub mod arena;
pub mod certificates;
pub mod condition;
pub mod error;
pub mod format;
pub mod hardness;
pub mod minimize;
pub mod product;
pub mod strategy;

pub use analysis::{
    accepts_ultimately_periodic, all_plays_satisfy, check_strategy_winning, nonempty, solve, winner,
    Counterexample, Solution, Verdict,
};
pub use arena::{Arena, Automaton, Game, Lasso, Node, Player, RunOutcome, Step, Witness};
pub use certificates::{
    lasso_to_witness, shortest_lasso, shortest_lasso_buechi, shortest_lasso_exact, shortest_lasso_rabin, shortest_witness_exact,
    witness_approx, SearchLimits,
};
pub use condition::{Condition, ConditionKind, PosSet};
pub use error::{Error, ParseError, Result};
pub use format::Model;
pub use hardness::{build_vc_game, cover_to_strategy, size_formula, strategy_to_cover, vc_brute_force, Hypergraph, VertexCover};
pub use minimize::{initial_strategy, min_strategy, min_strategy_exact, min_strategy_size, strategy_approx, Minimum};
pub use product::{product_finite_memory, product_moore, restrict_by_positional, OnePlayerGame};
pub use strategy::{
    induced_action, strategy_size, FiniteMemoryStrategy, InitMemory, PositionalStrategy, StandAloneStrategy, Strategy,
    StrategyKind,
};
