use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use omegacert::analysis::{accepts_ultimately_periodic, check_strategy_winning, Counterexample, Verdict};
use omegacert::certificates::{shortest_lasso, shortest_lasso_exact, shortest_witness_exact, witness_approx, SearchLimits};
use omegacert::format::{self, Model};
use omegacert::minimize::{min_strategy, min_strategy_exact, strategy_approx, Minimum, DEFAULT_BUDGET};
use omegacert::{
    build_vc_game, solve, strategy_size, vc_brute_force, size_formula, Automaton, ConditionKind, Error, Game, Player,
    Strategy, StrategyKind,
};

#[derive(Parser)]
#[command(name = "omegacert", version, about = "Certificates for omega-automata and infinite games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Positional,
    Memory,
    Moore,
}

impl From<Kind> for StrategyKind {
    fn from(k: Kind) -> StrategyKind {
        match k {
            Kind::Positional => StrategyKind::Positional,
            Kind::Memory => StrategyKind::FiniteMemory,
            Kind::Moore => StrategyKind::StandAlone,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactOrApprox {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum LassoMode {
    Shortest,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum VcCondition {
    Safety,
    Muller,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the winner of a game and emit a winning strategy for player 0.
    Solve {
        game: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check whether a player-0 strategy wins a game.
    Check { game: PathBuf, strategy: PathBuf },
    /// Find a small winning strategy.
    Minimize {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "positional")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ExactOrApprox,
        #[arg(long, default_value = "2", value_parser = parse_ratio)]
        c: Ratio<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Find an accepting lasso of an automaton.
    Lasso {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value = "shortest")]
        mode: LassoMode,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Find an accepted ultimately periodic word of an automaton.
    Witness {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ExactOrApprox,
        #[arg(long, default_value = "2", value_parser = parse_ratio)]
        c: Ratio<u64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Build the vertex cover game of a hypergraph.
    GenVc {
        hypergraph: PathBuf,
        #[arg(long = "cond", value_enum, default_value = "safety")]
        cond: VcCondition,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compare the fast algorithms with the brute-force searches on one input.
    Oracle {
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Parses `2`, `3/2` or `1.5`.
fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let bad = || format!("`{s}` is not a positive rational");
    let r = if let Some((int, frac)) = s.split_once('.') {
        let scale = 10u64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let whole: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let part: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Ratio::new(whole.checked_mul(scale).and_then(|w| w.checked_add(part)).ok_or_else(bad)?, scale)
    } else {
        s.parse::<Ratio<u64>>().map_err(|_| bad())?
    };
    if *r.numer() == 0 {
        return Err(bad());
    }
    Ok(r)
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::SizeLimit(_) | Error::Cancelled => 3,
            Error::PlayerZeroLoses => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn parse_error(path: &Path, e: omegacert::ParseError) -> Failure {
    fail(2, format!("{}: {e}", path.display()))
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    let model = format::parse_model(&read(path)?).map_err(|e| parse_error(path, e))?;
    let problems = match &model {
        Model::Game(g) => g.validate(),
        Model::Automaton(a) => a.validate(),
    };
    if !problems.is_empty() {
        return Err(fail(2, format!("{}: {}", path.display(), problems.join("; "))));
    }
    Ok(model)
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    Ok(load_model(path)?.into_game())
}

fn load_automaton(path: &Path) -> Result<Automaton, Failure> {
    match load_model(path)? {
        Model::Automaton(a) => Ok(a),
        Model::Game(g) => g
            .as_automaton()
            .map_err(|e| fail(2, format!("{}: {e}", path.display()))),
    }
}

/// Writes a certificate to `output`, or to standard output.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| fail(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify_strategy(game: &Game, s: &Strategy) -> Result<(), Failure> {
    if check_strategy_winning(game, s)?.holds() {
        Ok(())
    } else {
        Err(fail(2, "internal error: produced strategy failed verification"))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve { game, output } => {
            let g = load_game(&game)?;
            let solution = solve(&g)?;
            println!("winner: player {}", solution.winner.index());
            if solution.winner == Player::One {
                return Ok(1);
            }
            verify_strategy(&g, &solution.strategy)?;
            println!("strategy: {} of size {}", solution.strategy.kind().keyword(), strategy_size(&g, &solution.strategy)?);
            emit(output.as_deref(), &format::serialize_strategy(&solution.strategy, &g.arena))?;
            Ok(0)
        }
        Command::Check { game, strategy } => {
            let g = load_game(&game)?;
            let s = format::parse_strategy(&read(&strategy)?, &g.arena).map_err(|e| parse_error(&strategy, e))?;
            match check_strategy_winning(&g, &s)? {
                Verdict::Holds => {
                    println!("winning");
                    Ok(0)
                }
                Verdict::Violated(Counterexample::Lasso(l)) => {
                    println!("not winning: the play below violates the condition");
                    print!("{}", format::serialize_lasso(&l, &g.arena));
                    Ok(1)
                }
                Verdict::Violated(Counterexample::Stuck { stem, at }) => {
                    let stem = stem.iter().map(|&(a, b)| format!("{}/{}", g.arena.actions0()[a], g.arena.actions1()[b]));
                    println!(
                        "not winning: player 0 is stuck at position {at} after {}",
                        if stem.len() == 0 { "no steps".to_string() } else { stem.collect::<Vec<_>>().join(",") }
                    );
                    Ok(1)
                }
            }
        }
        Command::Minimize { game, kind, mode, c, seed, budget, output } => {
            let g = load_game(&game)?;
            let kind = StrategyKind::from(kind);
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            let strategy = match mode {
                ExactOrApprox::Exact => match min_strategy(&g, kind, budget)? {
                    Minimum::Found { strategy, .. } => strategy,
                    Minimum::NoneWithinBound => {
                        println!("no winning {} strategy", kind.keyword());
                        return Ok(1);
                    }
                },
                ExactOrApprox::Approx => strategy_approx(&g, kind, &c, seed, budget)?,
            };
            verify_strategy(&g, &strategy)?;
            println!("size: {}", strategy_size(&g, &strategy)?);
            emit(output.as_deref(), &format::serialize_strategy(&strategy, &g.arena))?;
            Ok(0)
        }
        Command::Lasso { automaton, mode, budget, output } => {
            let aut = load_automaton(&automaton)?;
            let limits = limits(budget);
            let lasso = match mode {
                LassoMode::Shortest => shortest_lasso(&aut, &limits)?,
                LassoMode::Exact => shortest_lasso_exact(&aut, &limits)?,
            };
            let Some(lasso) = lasso else {
                println!("language empty");
                return Ok(1);
            };
            let arena = aut.to_game().arena;
            if !lasso.is_valid_for(&arena) || !lasso.accepted(&aut.condition) {
                return Err(fail(2, "internal error: produced lasso failed verification"));
            }
            println!("size: {}", lasso.size());
            emit(output.as_deref(), &format::serialize_lasso(&lasso, &arena))?;
            Ok(0)
        }
        Command::Witness { automaton, mode, c, budget, output } => {
            let aut = load_automaton(&automaton)?;
            let limits = limits(budget);
            let witness = match mode {
                ExactOrApprox::Exact => shortest_witness_exact(&aut, &limits)?,
                ExactOrApprox::Approx => witness_approx(&aut, &c, &limits)?,
            };
            let Some(witness) = witness else {
                println!("language empty");
                return Ok(1);
            };
            if !accepts_ultimately_periodic(&aut, &witness) {
                return Err(fail(2, "internal error: produced witness failed verification"));
            }
            println!("size: {}", witness.size());
            emit(output.as_deref(), &format::serialize_witness(&witness, aut.alphabet()))?;
            Ok(0)
        }
        Command::GenVc { hypergraph, cond, output } => {
            let h = format::parse_hypergraph(&read(&hypergraph)?).map_err(|e| parse_error(&hypergraph, e))?;
            let kind = match cond {
                VcCondition::Safety => ConditionKind::Safety,
                VcCondition::Muller => ConditionKind::Muller,
            };
            let g = build_vc_game(&h, kind)?;
            emit(output.as_deref(), &format::serialize_game(&g))?;
            Ok(0)
        }
        Command::Oracle { input, budget } => oracle(&input, budget),
    }
}

fn limits(budget: Option<u64>) -> SearchLimits {
    let mut limits = SearchLimits::default();
    if budget.is_some() {
        limits.budget = budget;
    }
    limits
}

/// Runs the fast algorithm and its brute-force counterpart and reports
/// whether they agree. Hypergraphs compare the vertex cover optimum with
/// the smallest positional strategy of the generated game.
fn oracle(input: &Path, budget: Option<u64>) -> Outcome {
    let text = read(input)?;
    let is_hypergraph = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l == "hypergraph");
    let mut rows: Vec<(String, String, String)> = Vec::new();
    if is_hypergraph {
        let h = format::parse_hypergraph(&text).map_err(|e| parse_error(input, e))?;
        let cover = vc_brute_force(&h)?;
        let expected = size_formula(h.edges.len(), cover.len());
        for kind in [ConditionKind::Safety, ConditionKind::Muller] {
            let g = build_vc_game(&h, kind)?;
            let found = match min_strategy(&g, StrategyKind::Positional, budget.unwrap_or(DEFAULT_BUDGET))? {
                Minimum::Found { size, .. } => size.to_string(),
                Minimum::NoneWithinBound => "none".into(),
            };
            rows.push((format!("{kind} game: smallest positional strategy"), found, expected.to_string()));
        }
    } else {
        match load_model(input)? {
            Model::Automaton(aut) => {
                let limits = limits(budget);
                let size = |l: Option<omegacert::Lasso>| l.map_or("empty".to_string(), |l| l.size().to_string());
                rows.push((
                    "shortest lasso".into(),
                    size(shortest_lasso(&aut, &limits)?),
                    size(shortest_lasso_exact(&aut, &limits)?),
                ));
            }
            Model::Game(g) => {
                // The solver's strategy is re-checked on the product; a
                // player-1 win is confirmed by finding no positional winner
                // where positional strategies suffice.
                let solved = solve(&g)?;
                let fast = format!("player {}", solved.winner.index());
                let slow = match solved.winner {
                    Player::Zero if check_strategy_winning(&g, &solved.strategy)?.holds() => "player 0".to_string(),
                    Player::Zero => "player 1".to_string(),
                    Player::One if g.condition.kind().positional_for_player0() => {
                        let bound = g.arena.v0_count();
                        match min_strategy_exact(&g, StrategyKind::Positional, bound, budget.unwrap_or(DEFAULT_BUDGET))? {
                            Minimum::Found { .. } => "player 0".to_string(),
                            Minimum::NoneWithinBound => "player 1".to_string(),
                        }
                    }
                    Player::One => "player 1".to_string(),
                };
                rows.push(("winner".into(), fast, slow));
            }
        }
    }
    let mut ok = true;
    for (what, fast, slow) in rows {
        let same = fast == slow;
        ok &= same;
        println!("{what}: {fast} vs {slow} {}", if same { "agree" } else { "DISAGREE" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
