//! Line-based text formats for every artifact the crate reads or writes.
//!
//! A file starts with a header line naming the section (`game`,
//! `automaton`, `hypergraph`, `strategy <kind>`) followed by `key: value`
//! facts, one per line. Lassos and witnesses are single lines. `#` starts a
//! comment. Positions and states are 0-based indices; hypergraph vertices
//! are 1-based. Actions and letters are referred to by name.
//!
//! ```text
//! game
//! v0: 2
//! v1: 1
//! a0: go stay
//! a1: _
//! init: 0
//! e0: 0 go 0
//! e1: 0 _ 1
//! cond: buchi 1
//! ```
//!
//! Serializers emit facts in a fixed order and edges sorted by source and
//! action, so equal values always produce identical text.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::arena::{Arena, Automaton, Game, Lasso, Player, Step, Witness};
use crate::condition::{Condition, PosSet};
use crate::error::ParseError;
use crate::hardness::Hypergraph;
use crate::strategy::{FiniteMemoryStrategy, InitMemory, PositionalStrategy, StandAloneStrategy, Strategy};

type PResult<T> = std::result::Result<T, ParseError>;

/// A parsed game or automaton file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Game(Game),
    Automaton(Automaton),
}

impl Model {
    pub fn into_game(self) -> Game {
        match self {
            Model::Game(g) => g,
            Model::Automaton(a) => a.to_game(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

impl<'a> Token<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col, message)
    }

    fn natural(&self, what: &str) -> PResult<usize> {
        self.text
            .parse()
            .map_err(|_| self.err(format!("expected {what} (a natural number), found `{}`", self.text)))
    }
}

/// One `key: value` line.
#[derive(Debug)]
struct Fact<'a> {
    key: Token<'a>,
    /// Text after the colon and its column.
    rest: &'a str,
    rest_col: usize,
}

impl<'a> Fact<'a> {
    fn words(&self) -> Vec<Token<'a>> {
        words(self.key.line, self.rest_col, self.rest)
    }

    fn end(&self) -> ParseError {
        ParseError::new(self.key.line, self.rest_col + self.rest.len(), format!("`{}` is incomplete", self.key.text))
    }

    fn exactly<const N: usize>(&self, what: &str) -> PResult<[Token<'a>; N]> {
        let w = self.words();
        if w.len() != N {
            let at = w.get(N).map_or_else(|| self.end(), |t| t.err(""));
            return Err(ParseError::new(
                at.line,
                at.column,
                format!("`{}` expects {what}, found {} item(s)", self.key.text, w.len()),
            ));
        }
        Ok(w.try_into().expect("length checked"))
    }
}

fn words(line: usize, col: usize, text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { line, col: col + text[..s].chars().count(), text: &text[s..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(l, _)| l)
}

/// Splits a document into its header and facts.
fn sections(text: &str) -> PResult<(Vec<Token<'_>>, Vec<Fact<'_>>)> {
    let mut header = None;
    let mut facts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(words(line, 1, body));
            continue;
        }
        let Some((key, rest)) = body.split_once(':') else {
            let w = words(line, 1, body);
            return Err(w[0].err(format!("expected `key: value`, found `{}`", body.trim())));
        };
        let key_col = key.len() - key.trim_start().len() + 1;
        let key = Token { line, col: key_col, text: key.trim() };
        if key.text.is_empty() || key.text.contains(char::is_whitespace) {
            return Err(key.err(format!("malformed key `{}`", key.text)));
        }
        facts.push(Fact { key, rest, rest_col: key_col + body[key_col - 1..].find(':').unwrap() + 1 });
    }
    let header = header.ok_or_else(|| ParseError::new(1, 1, "empty document"))?;
    Ok((header, facts))
}

fn expect_header(header: &[Token], expected: &[&str]) -> PResult<()> {
    let found: Vec<&str> = header.iter().map(|t| t.text).collect();
    if found != expected {
        return Err(header[0].err(format!("expected section `{}`, found `{}`", expected.join(" "), found.join(" "))));
    }
    Ok(())
}

/// Facts grouped by key, with checks for unknown, repeated and missing keys.
struct Facts<'a> {
    section: String,
    header_line: usize,
    by_key: BTreeMap<&'a str, Vec<Fact<'a>>>,
}

impl<'a> Facts<'a> {
    fn new(section: &str, header: &[Token], facts: Vec<Fact<'a>>, single: &[&str], multi: &[&str]) -> PResult<Self> {
        let mut by_key: BTreeMap<&str, Vec<Fact>> = BTreeMap::new();
        for f in facts {
            if !single.contains(&f.key.text) && !multi.contains(&f.key.text) {
                return Err(f.key.err(format!("unknown key `{}` in {section} section", f.key.text)));
            }
            if single.contains(&f.key.text) && by_key.contains_key(f.key.text) {
                return Err(f.key.err(format!("`{}` given twice", f.key.text)));
            }
            by_key.entry(f.key.text).or_default().push(f);
        }
        Ok(Facts { section: section.to_string(), header_line: header[0].line, by_key })
    }

    fn one(&self, key: &str) -> PResult<&Fact<'a>> {
        self.by_key.get(key).map(|v| &v[0]).ok_or_else(|| {
            ParseError::new(self.header_line, 1, format!("{} section is missing `{key}:`", self.section))
        })
    }

    fn all(&self, key: &str) -> &[Fact<'a>] {
        self.by_key.get(key).map_or(&[], Vec::as_slice)
    }
}

fn natural_fact(facts: &Facts, key: &str, what: &str) -> PResult<usize> {
    let [t] = facts.one(key)?.exactly::<1>(what)?;
    t.natural(what)
}

fn index_below(t: &Token, bound: usize, what: &str) -> PResult<usize> {
    let i = t.natural(what)?;
    if i >= bound {
        return Err(t.err(format!("{what} {i} out of range (there are {bound})")));
    }
    Ok(i)
}

fn names(fact: &Fact, what: &str) -> PResult<Vec<String>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in fact.words() {
        if t.text.contains([',', '/', '=', '{', '}', '(', ')', ':']) {
            return Err(t.err(format!("{what} name `{}` contains a reserved character", t.text)));
        }
        if !seen.insert(t.text) {
            return Err(t.err(format!("{what} `{}` declared twice", t.text)));
        }
        out.push(t.text.to_string());
    }
    if out.is_empty() {
        return Err(fact.end());
    }
    Ok(out)
}

fn lookup(t: &Token, names: &[String], what: &str) -> PResult<usize> {
    names.iter().position(|n| n == t.text).ok_or_else(|| t.err(format!("unknown {what} `{}`", t.text)))
}

// ---------------------------------------------------------------- conditions

fn cond_tokens<'a>(fact: &Fact<'a>) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    let line = fact.key.line;
    let text = fact.rest;
    let mut start: Option<usize> = None;
    let col = |i: usize| fact.rest_col + text[..i].chars().count();
    for (i, c) in text.char_indices() {
        let punct = matches!(c, '{' | '}' | '(' | ')' | ',');
        if c.is_whitespace() || punct {
            if let Some(s) = start.take() {
                out.push(Token { line, col: col(s), text: &text[s..i] });
            }
            if punct {
                out.push(Token { line, col: col(i), text: &text[i..i + 1] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { line, col: col(s), text: &text[s..] });
    }
    out
}

struct CondParser<'a, 'f> {
    fact: &'f Fact<'a>,
    tokens: Vec<Token<'a>>,
    at: usize,
}

impl<'a> CondParser<'a, '_> {
    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.at).copied()
    }

    fn next(&mut self, what: &str) -> PResult<Token<'a>> {
        let t = self.peek().ok_or_else(|| {
            let e = self.fact.end();
            ParseError::new(e.line, e.column, format!("expected {what} at end of `cond:`"))
        })?;
        self.at += 1;
        Ok(t)
    }

    fn punct(&mut self, p: &str) -> PResult<()> {
        let t = self.next(&format!("`{p}`"))?;
        if t.text != p {
            return Err(t.err(format!("expected `{p}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn positions(&mut self) -> PResult<PosSet> {
        let mut set = PosSet::new();
        while let Some(t) = self.peek() {
            if !t.text.starts_with(|c: char| c.is_ascii_digit()) {
                break;
            }
            self.at += 1;
            set.insert(t.natural("position")?);
        }
        Ok(set)
    }

    fn braced(&mut self) -> PResult<PosSet> {
        self.punct("{")?;
        let set = self.positions()?;
        self.punct("}")?;
        Ok(set)
    }

    fn sets(&mut self) -> PResult<Vec<PosSet>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.braced()?);
        }
        Ok(out)
    }

    fn pairs(&mut self) -> PResult<Vec<(PosSet, PosSet)>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            self.punct("(")?;
            let f = self.braced()?;
            self.punct(",")?;
            let g = self.braced()?;
            self.punct(")")?;
            out.push((f, g));
        }
        Ok(out)
    }

    fn parity(&mut self) -> PResult<BTreeMap<usize, u32>> {
        let mut colours = BTreeMap::new();
        while let Some(t) = self.peek() {
            self.at += 1;
            let (v, c) = t.text.split_once(':').ok_or_else(|| t.err(format!("expected `position:colour`, found `{}`", t.text)))?;
            let v: usize = v.parse().map_err(|_| t.err(format!("bad position in `{}`", t.text)))?;
            let c: u32 = c.parse().map_err(|_| t.err(format!("bad colour in `{}`", t.text)))?;
            if colours.insert(v, c).is_some() {
                return Err(t.err(format!("position {v} coloured twice")));
            }
        }
        Ok(colours)
    }

    fn parse(&mut self) -> PResult<Condition> {
        let kind = self.next("a condition keyword")?;
        let cond = match kind.text {
            "safety" => Condition::Safety,
            "buchi" => Condition::Buchi(self.positions()?),
            "cobuchi" => Condition::CoBuchi(self.positions()?),
            "genbuchi" => Condition::GenBuchi(self.sets()?),
            "parity" => Condition::Parity(self.parity()?),
            "rabin" => Condition::Rabin(self.pairs()?),
            "streett" => Condition::Streett(self.pairs()?),
            "muller" => Condition::Muller(self.sets()?),
            other => return Err(kind.err(format!("unknown condition `{other}`"))),
        };
        if let Some(t) = self.peek() {
            return Err(t.err(format!("unexpected `{}` in {} condition", t.text, kind.text)));
        }
        Ok(cond)
    }
}

fn parse_condition(fact: &Fact) -> PResult<Condition> {
    CondParser { fact, tokens: cond_tokens(fact), at: 0 }.parse()
}

fn join(set: &PosSet) -> String {
    set.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Canonical text of a condition, without the `cond:` key.
pub fn serialize_condition(c: &Condition) -> String {
    let braced = |s: &PosSet| format!("{{{}}}", join(s));
    let pairs = |ps: &[(PosSet, PosSet)]| {
        ps.iter().map(|(f, g)| format!(" ({},{})", braced(f), braced(g))).collect::<String>()
    };
    let sets = |ss: &[PosSet]| ss.iter().map(|s| format!(" {}", braced(s))).collect::<String>();
    let list = |s: &PosSet| if s.is_empty() { String::new() } else { format!(" {}", join(s)) };
    match c {
        Condition::Safety => "safety".into(),
        Condition::Buchi(f) => format!("buchi{}", list(f)),
        Condition::CoBuchi(f) => format!("cobuchi{}", list(f)),
        Condition::GenBuchi(ss) => format!("genbuchi{}", sets(ss)),
        Condition::Parity(m) => format!("parity{}", m.iter().map(|(v, c)| format!(" {v}:{c}")).collect::<String>()),
        Condition::Rabin(ps) => format!("rabin{}", pairs(ps)),
        Condition::Streett(ps) => format!("streett{}", pairs(ps)),
        Condition::Muller(ss) => format!("muller{}", sets(ss)),
    }
}

// ---------------------------------------------------------------- games

fn game_from_facts(facts: &Facts) -> PResult<Game> {
    let v0 = natural_fact(facts, "v0", "a position count")?;
    let v1 = natural_fact(facts, "v1", "a position count")?;
    let a0 = names(facts.one("a0")?, "action")?;
    let a1 = names(facts.one("a1")?, "action")?;
    let [init] = facts.one("init")?.exactly::<1>("one position")?;
    let init = index_below(&init, v0.max(1), "player-0 position")?;
    let condition = parse_condition(facts.one("cond")?)?;
    let mut arena = Arena::new(v0, v1, a0, a1, init);
    for f in facts.all("e0") {
        let [v, a, w] = f.exactly::<3>("`position action target`")?;
        let (v, a) = (index_below(&v, v0, "player-0 position")?, lookup(&a, arena.actions0(), "player-0 action")?);
        if arena.e0(v, a).is_some() {
            return Err(f.key.err(format!("e0 edge from {v} on `{}` given twice", arena.actions0()[a])));
        }
        arena.set_e0(v, a, w.natural("target position")?);
    }
    for f in facts.all("e1") {
        let [w, b, v] = f.exactly::<3>("`position action target`")?;
        let (w, b) = (index_below(&w, v1, "player-1 position")?, lookup(&b, arena.actions1(), "player-1 action")?);
        if arena.e1(w, b).is_some() {
            return Err(f.key.err(format!("e1 edge from {w} on `{}` given twice", arena.actions1()[b])));
        }
        arena.set_e1(w, b, v.natural("target position")?);
    }
    Ok(Game::new(arena, condition))
}

fn automaton_from_facts(facts: &Facts) -> PResult<Automaton> {
    let states = natural_fact(facts, "states", "a state count")?;
    let alphabet = names(facts.one("alphabet")?, "letter")?;
    let [init] = facts.one("init")?.exactly::<1>("one state")?;
    let init = index_below(&init, states.max(1), "state")?;
    let condition = parse_condition(facts.one("cond")?)?;
    let mut aut = Automaton::new(states, alphabet, init, condition);
    for f in facts.all("d") {
        let [q, a, r] = f.exactly::<3>("`state letter state`")?;
        let (q, a) = (index_below(&q, states, "state")?, lookup(&a, aut.alphabet(), "letter")?);
        if aut.next(q, a).is_some() {
            return Err(f.key.err(format!("transition from {q} on `{}` given twice", aut.alphabet()[a])));
        }
        aut.set(q, a, r.natural("target state")?);
    }
    Ok(aut)
}

const GAME_KEYS: [&str; 6] = ["v0", "v1", "a0", "a1", "init", "cond"];
const AUTOMATON_KEYS: [&str; 4] = ["states", "alphabet", "init", "cond"];

/// Parses a `game` or `automaton` document.
pub fn parse_model(text: &str) -> PResult<Model> {
    let (header, facts) = sections(text)?;
    match header[0].text {
        "game" => {
            expect_header(&header, &["game"])?;
            Ok(Model::Game(game_from_facts(&Facts::new("game", &header, facts, &GAME_KEYS, &["e0", "e1"])?)?))
        }
        "automaton" => {
            expect_header(&header, &["automaton"])?;
            Ok(Model::Automaton(automaton_from_facts(&Facts::new("automaton", &header, facts, &AUTOMATON_KEYS, &["d"])?)?))
        }
        other => Err(header[0].err(format!("expected section `game` or `automaton`, found `{other}`"))),
    }
}

pub fn parse_game(text: &str) -> PResult<Game> {
    let (header, facts) = sections(text)?;
    expect_header(&header, &["game"])?;
    game_from_facts(&Facts::new("game", &header, facts, &GAME_KEYS, &["e0", "e1"])?)
}

pub fn parse_automaton(text: &str) -> PResult<Automaton> {
    let (header, facts) = sections(text)?;
    expect_header(&header, &["automaton"])?;
    automaton_from_facts(&Facts::new("automaton", &header, facts, &AUTOMATON_KEYS, &["d"])?)
}

pub fn serialize_game(g: &Game) -> String {
    let a = &g.arena;
    let mut out = String::from("game\n");
    let _ = writeln!(out, "v0: {}", a.v0_count());
    let _ = writeln!(out, "v1: {}", a.v1_count());
    let _ = writeln!(out, "a0: {}", a.actions0().join(" "));
    let _ = writeln!(out, "a1: {}", a.actions1().join(" "));
    let _ = writeln!(out, "init: {}", a.init());
    for (v, x, w) in a.e0_entries() {
        let _ = writeln!(out, "e0: {v} {} {w}", a.actions0()[x]);
    }
    for (w, y, v) in a.e1_entries() {
        let _ = writeln!(out, "e1: {w} {} {v}", a.actions1()[y]);
    }
    let _ = writeln!(out, "cond: {}", serialize_condition(&g.condition));
    out
}

pub fn serialize_automaton(aut: &Automaton) -> String {
    let mut out = String::from("automaton\n");
    let _ = writeln!(out, "states: {}", aut.states());
    let _ = writeln!(out, "alphabet: {}", aut.alphabet().join(" "));
    let _ = writeln!(out, "init: {}", aut.init());
    for (q, a, r) in aut.transitions() {
        let _ = writeln!(out, "d: {q} {} {r}", aut.alphabet()[a]);
    }
    let _ = writeln!(out, "cond: {}", serialize_condition(&aut.condition));
    out
}

pub fn serialize_model(m: &Model) -> String {
    match m {
        Model::Game(g) => serialize_game(g),
        Model::Automaton(a) => serialize_automaton(a),
    }
}

// ---------------------------------------------------------------- hypergraphs

pub fn parse_hypergraph(text: &str) -> PResult<Hypergraph> {
    let (header, facts) = sections(text)?;
    expect_header(&header, &["hypergraph"])?;
    let facts = Facts::new("hypergraph", &header, facts, &["vertices", "k"], &["edge"])?;
    let n = natural_fact(&facts, "vertices", "a vertex count")?;
    let k = natural_fact(&facts, "k", "an edge size")?;
    let mut edges = Vec::new();
    for f in facts.all("edge") {
        let mut edge = BTreeSet::new();
        let ws = f.words();
        for t in &ws {
            let v = t.natural("vertex")?;
            if v == 0 || v > n {
                return Err(t.err(format!("vertex {v} out of range 1..={n}")));
            }
            if !edge.insert(v - 1) {
                return Err(t.err(format!("vertex {v} repeated in edge")));
            }
        }
        if edge.len() != k {
            return Err(ParseError::new(f.key.line, f.key.col, format!("edge has {} vertices, expected k = {k}", edge.len())));
        }
        if edges.contains(&edge) {
            return Err(f.key.err("edge repeated"));
        }
        edges.push(edge);
    }
    Ok(Hypergraph::new(n, k, edges))
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::from("hypergraph\n");
    let _ = writeln!(out, "vertices: {}", h.vertex_count);
    let _ = writeln!(out, "k: {}", h.k);
    for e in &h.edges {
        let vs: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "edge: {}", vs.join(" "));
    }
    out
}

// ---------------------------------------------------------------- strategies

fn player_fact(facts: &Facts) -> PResult<Player> {
    let [t] = facts.one("player")?.exactly::<1>("`0` or `1`")?;
    match t.text {
        "0" => Ok(Player::Zero),
        "1" => Ok(Player::One),
        other => Err(t.err(format!("expected player `0` or `1`, found `{other}`"))),
    }
}

fn side(arena: &Arena, player: Player) -> (usize, &[String]) {
    match player {
        Player::Zero => (arena.v0_count(), arena.actions0()),
        Player::One => (arena.v1_count(), arena.actions1()),
    }
}

/// Parses a strategy for a game on `arena`; action names are resolved
/// against the arena.
pub fn parse_strategy(text: &str, arena: &Arena) -> PResult<Strategy> {
    let (header, facts) = sections(text)?;
    let kind = header.get(1).map(|t| t.text);
    if header[0].text != "strategy" || header.len() != 2 {
        return Err(header[0].err("expected section `strategy positional|memory|moore`"));
    }
    match kind {
        Some("positional") => {
            let facts = Facts::new("strategy", &header, facts, &["player"], &["at"])?;
            let player = player_fact(&facts)?;
            let (positions, actions) = side(arena, player);
            let mut choice = BTreeMap::new();
            for f in facts.all("at") {
                let [v, a] = f.exactly::<2>("`position action`")?;
                let (v, a) = (index_below(&v, positions, "position")?, lookup(&a, actions, "action")?);
                if choice.insert(v, a).is_some() {
                    return Err(f.key.err(format!("position {v} chosen twice")));
                }
            }
            Ok(Strategy::Positional(PositionalStrategy { player, choice }))
        }
        Some("memory") => {
            let facts = Facts::new("strategy", &header, facts, &["player", "memory", "init"], &["move"])?;
            let player = player_fact(&facts)?;
            let (positions, actions) = side(arena, player);
            let memory_count = natural_fact(&facts, "memory", "a memory size")?;
            let init_words = facts.one("init")?.words();
            let init = match init_words.as_slice() {
                [m] => InitMemory::Single(index_below(m, memory_count, "memory state")?),
                [tag, rest @ ..] if tag.text == "per-v1" => InitMemory::PerV1(
                    rest.iter().map(|t| index_below(t, memory_count, "memory state")).collect::<PResult<_>>()?,
                ),
                _ => return Err(facts.one("init")?.end()),
            };
            let mut table = BTreeMap::new();
            for f in facts.all("move") {
                let [m, v, a, m2] = f.exactly::<4>("`memory position action memory`")?;
                let key = (index_below(&m, memory_count, "memory state")?, index_below(&v, positions, "position")?);
                let value = (lookup(&a, actions, "action")?, index_below(&m2, memory_count, "memory state")?);
                if table.insert(key, value).is_some() {
                    return Err(f.key.err(format!("configuration {key:?} given twice")));
                }
            }
            Ok(Strategy::FiniteMemory(FiniteMemoryStrategy { player, memory_count, init, table }))
        }
        Some("moore") => {
            let facts = Facts::new("strategy", &header, facts, &["states", "init"], &["out", "next"])?;
            let states = natural_fact(&facts, "states", "a state count")?;
            let [init] = facts.one("init")?.exactly::<1>("one state")?;
            let init = index_below(&init, states, "state")?;
            let inputs = arena.actions1().len();
            let mut labels = vec![None; states];
            let mut trans = vec![None; states * inputs];
            for f in facts.all("out") {
                let [q, a] = f.exactly::<2>("`state action`")?;
                let q = index_below(&q, states, "state")?;
                if labels[q].replace(lookup(&a, arena.actions0(), "player-0 action")?).is_some() {
                    return Err(f.key.err(format!("state {q} labelled twice")));
                }
            }
            for f in facts.all("next") {
                let [q, b, r] = f.exactly::<3>("`state input state`")?;
                let slot = index_below(&q, states, "state")? * inputs + lookup(&b, arena.actions1(), "player-1 action")?;
                if trans[slot].replace(index_below(&r, states, "state")?).is_some() {
                    return Err(f.key.err("transition given twice"));
                }
            }
            let missing = |what: &str, i: usize| {
                ParseError::new(header[0].line, 1, format!("moore strategy has no `{what}` line for {i}"))
            };
            let labels = labels.iter().enumerate().map(|(q, l)| l.ok_or_else(|| missing("out", q))).collect::<PResult<_>>()?;
            let trans = trans.iter().enumerate().map(|(s, t)| t.ok_or_else(|| missing("next", s))).collect::<PResult<_>>()?;
            Ok(Strategy::StandAlone(StandAloneStrategy { init, inputs, labels, trans }))
        }
        _ => Err(header[1].err("strategy kind must be `positional`, `memory` or `moore`")),
    }
}

pub fn serialize_strategy(s: &Strategy, arena: &Arena) -> String {
    let mut out = String::new();
    match s {
        Strategy::Positional(p) => {
            let (_, actions) = side(arena, p.player);
            let _ = writeln!(out, "strategy positional\nplayer: {}", p.player.index());
            for (v, a) in &p.choice {
                let _ = writeln!(out, "at: {v} {}", actions[*a]);
            }
        }
        Strategy::FiniteMemory(f) => {
            let (_, actions) = side(arena, f.player);
            let _ = writeln!(out, "strategy memory\nplayer: {}\nmemory: {}", f.player.index(), f.memory_count);
            match &f.init {
                InitMemory::Single(m) => {
                    let _ = writeln!(out, "init: {m}");
                }
                InitMemory::PerV1(ms) => {
                    let ms: String = ms.iter().map(|m| format!(" {m}")).collect();
                    let _ = writeln!(out, "init: per-v1{ms}");
                }
            }
            for ((m, v), (a, m2)) in &f.table {
                let _ = writeln!(out, "move: {m} {v} {} {m2}", actions[*a]);
            }
        }
        Strategy::StandAlone(m) => {
            let _ = writeln!(out, "strategy moore\nstates: {}\ninit: {}", m.state_count(), m.init);
            for (q, a) in m.labels.iter().enumerate() {
                let _ = writeln!(out, "out: {q} {}", arena.actions0()[*a]);
            }
            for (slot, r) in m.trans.iter().enumerate() {
                let _ = writeln!(out, "next: {} {} {r}", slot / m.inputs, arena.actions1()[slot % m.inputs]);
            }
        }
    }
    out
}

// ---------------------------------------------------------------- lassos and witnesses

fn single_line(text: &str) -> PResult<(usize, &str)> {
    let mut found = None;
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        if found.is_some() {
            return Err(ParseError::new(i + 1, 1, "expected a single line"));
        }
        found = Some((i + 1, body));
    }
    found.ok_or_else(|| ParseError::new(1, 1, "empty document"))
}

/// Splits `head k1=… k2=…` into the value tokens of the two keys.
fn keyed<'a>(text: &'a str, head: &str, keys: [&str; 2]) -> PResult<[Token<'a>; 2]> {
    let (line, body) = single_line(text)?;
    let ws = words(line, 1, body);
    if ws.len() != 3 || ws[0].text != head {
        return Err(ws[0].err(format!("expected `{head} {}=… {}=…`", keys[0], keys[1])));
    }
    let mut out = [ws[1], ws[2]];
    for (slot, key) in out.iter_mut().zip(keys) {
        let prefix = format!("{key}=");
        let value = slot.text.strip_prefix(&prefix).ok_or_else(|| slot.err(format!("expected `{prefix}…`")))?;
        *slot = Token { line, col: slot.col + prefix.len(), text: value };
    }
    Ok(out)
}

fn items<'a>(t: &Token<'a>) -> Vec<Token<'a>> {
    if t.text.is_empty() {
        return Vec::new();
    }
    let mut col = t.col;
    t.text
        .split(',')
        .map(|s| {
            let tok = Token { line: t.line, col, text: s };
            col += s.chars().count() + 1;
            tok
        })
        .collect()
}

/// Parses `witness u=a,b v=c` over `alphabet`.
pub fn parse_witness(text: &str, alphabet: &[String]) -> PResult<Witness> {
    let [u, v] = keyed(text, "witness", ["u", "v"])?;
    let letters = |t: &Token| items(t).iter().map(|x| lookup(x, alphabet, "letter")).collect::<PResult<Vec<_>>>();
    let (u_word, v_word) = (letters(&u)?, letters(&v)?);
    if v_word.is_empty() {
        return Err(v.err("witness period `v` must be non-empty"));
    }
    Ok(Witness { u: u_word, v: v_word })
}

pub fn serialize_witness(w: &Witness, alphabet: &[String]) -> String {
    let word = |x: &[usize]| x.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join(",");
    format!("witness u={} v={}\n", word(&w.u), word(&w.v))
}

/// Whether steps print as the player-0 action alone.
fn bare_steps(arena: &Arena) -> bool {
    arena.actions1().len() == 1
}

fn step_text(arena: &Arena, (a, b): Step) -> String {
    if bare_steps(arena) {
        arena.actions0()[a].clone()
    } else {
        format!("{}/{}", arena.actions0()[a], arena.actions1()[b])
    }
}

/// Parses `lasso stem=… cycle=…` on `arena`. Steps are `a/b`; when player 1
/// has a single action they may be written `a`.
pub fn parse_lasso(text: &str, arena: &Arena) -> PResult<Lasso> {
    let [stem, cycle] = keyed(text, "lasso", ["stem", "cycle"])?;
    let steps = |t: &Token| {
        items(t)
            .iter()
            .map(|x| match x.text.split_once('/') {
                Some((a, b)) => {
                    let a_tok = Token { text: a, ..*x };
                    let b_tok = Token { text: b, col: x.col + a.chars().count() + 1, ..*x };
                    Ok((lookup(&a_tok, arena.actions0(), "player-0 action")?, lookup(&b_tok, arena.actions1(), "player-1 action")?))
                }
                None if bare_steps(arena) => Ok((lookup(x, arena.actions0(), "player-0 action")?, 0)),
                None => Err(x.err("expected a step `a/b`")),
            })
            .collect::<PResult<Vec<Step>>>()
    };
    let (stem_steps, cycle_steps) = (steps(&stem)?, steps(&cycle)?);
    Lasso::on_arena(arena, stem_steps, cycle_steps).map_err(|e| stem.err(e.to_string()))
}

pub fn serialize_lasso(l: &Lasso, arena: &Arena) -> String {
    let steps = |x: &[Step]| x.iter().map(|&s| step_text(arena, s)).collect::<Vec<_>>().join(",");
    format!("lasso stem={} cycle={}\n", steps(&l.stem), steps(&l.cycle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::condition::ConditionKind;
    use crate::hardness::{build_vc_game, cover_to_strategy};

    fn h1() -> Hypergraph {
        Hypergraph::new(3, 2, [[0, 1].into(), [1, 2].into()])
    }

    #[test]
    fn games_round_trip() {
        let conditions = [
            Condition::Safety,
            Condition::buchi([0]),
            Condition::cobuchi([]),
            Condition::GenBuchi(vec![[0].into(), PosSet::new()]),
            Condition::Parity([(0, 3)].into()),
            Condition::Rabin(vec![([0].into(), [0].into()), (PosSet::new(), [0].into())]),
            Condition::Streett(vec![([0].into(), PosSet::new())]),
            Condition::Muller(vec![[0].into(), PosSet::new()]),
        ];
        for c in conditions {
            let g = g_triv(c);
            let text = serialize_game(&g);
            assert_eq!(parse_game(&text).unwrap(), g, "{text}");
            assert_eq!(serialize_game(&parse_game(&text).unwrap()), text);
        }
        let vc = build_vc_game(&h1(), ConditionKind::Muller).unwrap();
        assert_eq!(parse_game(&serialize_game(&vc)).unwrap(), vc);
    }

    #[test]
    fn missing_condition_is_named() {
        let text = "game\nv0: 1\nv1: 1\na0: a\na1: b\ninit: 0\n";
        let err = parse_game(text).unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert!(err.message.contains("cond:"), "{err}");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_game("game\nv0: 1\nv1: 1\na0: a\na1: b\ninit: 0\ne0: 0 zz 0\ncond: safety\n").unwrap_err();
        assert_eq!((err.line, err.column), (7, 7));
        let err = parse_game("# header\ngame\nv0: 1\nv1: 1\na0: a\na1: b\ninit: 0\ncond: rabin ({0},{0}) ({0} {0})\n").unwrap_err();
        assert_eq!((err.line, err.column), (8, 28));
    }

    #[test]
    fn automata_round_trip() {
        let aut = a_rabin(Condition::Rabin(vec![([0, 1].into(), [1].into())]));
        let text = serialize_automaton(&aut);
        assert_eq!(parse_automaton(&text).unwrap(), aut);
        assert_eq!(parse_model(&text).unwrap(), Model::Automaton(aut));
    }

    #[test]
    fn hypergraph_transcription() {
        let text = "hypergraph\nvertices: 3\nk: 2\nedge: 1 2\nedge: 2 3";
        assert_eq!(parse_hypergraph(text).unwrap(), h1());
        assert_eq!(serialize_hypergraph(&h1()), format!("{text}\n"));
    }

    #[test]
    fn witnesses_and_lassos() {
        let aut = a_two(Condition::buchi([1]));
        let w = parse_witness("witness u= v=a", aut.alphabet()).unwrap();
        assert_eq!(w, Witness { u: vec![], v: vec![0] });
        assert_eq!(serialize_witness(&w, aut.alphabet()), "witness u= v=a\n");
        let game = aut.to_game();
        let l = parse_lasso("lasso stem=a cycle=b,a", &game.arena).unwrap();
        assert_eq!(l.trace0, vec![0, 1, 0, 1]);
        assert_eq!(serialize_lasso(&l, &game.arena), "lasso stem=a cycle=b,a\n");
        assert!(parse_lasso("lasso stem= cycle=a", &game.arena).is_err());
    }

    #[test]
    fn strategies_round_trip() {
        let h = h1();
        let g = build_vc_game(&h, ConditionKind::Safety).unwrap();
        let s = Strategy::Positional(cover_to_strategy(&h, &[1].into()).unwrap());
        let text = serialize_strategy(&s, &g.arena);
        assert_eq!(parse_strategy(&text, &g.arena).unwrap(), s);

        let f = Strategy::FiniteMemory(FiniteMemoryStrategy {
            player: Player::One,
            memory_count: 2,
            init: InitMemory::PerV1(vec![1; g.arena.v1_count()]),
            table: [((1, 0), (1, 0))].into(),
        });
        assert_eq!(parse_strategy(&serialize_strategy(&f, &g.arena), &g.arena).unwrap(), f);

        let m = Strategy::StandAlone(StandAloneStrategy { init: 0, inputs: 3, labels: vec![0, 2], trans: vec![1, 0, 1, 1, 1, 0] });
        assert_eq!(parse_strategy(&serialize_strategy(&m, &g.arena), &g.arena).unwrap(), m);
    }
}
