//! Text config files: tokenizer and parser for the batch front door.
//!
//! Grammar (statements in any order, separated by newlines or `;`, comments
//! from `#` to end of line):
//!
//! ```text
//! space nat | finite(N)
//! map identity | shift(d) | constant(c) | table[a, b, ..] | override{k: v, ..; tail}
//! partition { <set>, <set>, .. }
//! chain builtin <name> [u <set>] depth <N>
//! chain explicit { partition {..}; partition {..}; .. } [poset { a <= b, .. }]
//! points 1 2 3        (or: point 5)
//! depth N
//! format text | machine
//! set      := term (('∪' | '|') term)*
//! term     := finite{a, b, ..} | ap(first, stride) | all
//! ```
//!
//! Builtin chain names: `initial_segments` (alias `example2`) and
//! `filter_family` (requires `u <set>`, an infinite set with infinite
//! complement). Integer literals are capped at one million to keep every
//! exact-set operation desk-scale.

use std::fmt;

use crate::chains::{
    builtin_chain, ChainError, ExplicitPoset, IndexPoset, Provenance, RefinementChain,
};
use crate::partitions::{Partition, PartitionError};
use crate::report::OutputFormat;
use crate::set_algebra::{FiniteSet, StateSet, UPSet};
use crate::state_space::{MapDescriptor, StateSpace, TailMap};
use crate::State;

const MAX_LITERAL: u64 = 1_000_000;
const MAX_FINITE_SPACE: u64 = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigErrorKind {
    /// Malformed text; maps to exit code 2.
    Syntax,
    /// Well-formed text describing an invalid object; maps to exit code 3.
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub kind: ConfigErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ConfigErrorKind::Syntax => "syntax error",
            ConfigErrorKind::Semantic => "semantic error",
        };
        write!(
            f,
            "{kind} at line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ConfigError {}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        kind: ConfigErrorKind::Syntax,
        line,
        col,
        message: message.into(),
    }
}

fn semantic(line: usize, col: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        kind: ConfigErrorKind::Semantic,
        line,
        col,
        message: message.into(),
    }
}

/// The chain portion of a config. Builtin chains are materialized at parse
/// time; explicit chains keep their parts so the `validate` command can
/// report monotonicity violations instead of refusing to load.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainSpec {
    Ready(RefinementChain),
    Explicit {
        index: IndexPoset,
        partitions: Vec<Partition>,
    },
}

impl ChainSpec {
    pub fn materialize(&self) -> Result<RefinementChain, ChainError> {
        match self {
            ChainSpec::Ready(chain) => Ok(chain.clone()),
            ChainSpec::Explicit { index, partitions } => {
                RefinementChain::try_new(index.clone(), partitions.clone(), Provenance::Explicit)
            }
        }
    }

    pub fn parts(&self) -> (&IndexPoset, &[Partition]) {
        match self {
            ChainSpec::Ready(chain) => (chain.index(), chain.partitions()),
            ChainSpec::Explicit { index, partitions } => (index, partitions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    pub space: Option<StateSpace>,
    pub map: Option<MapDescriptor>,
    pub partition: Option<Partition>,
    pub chain: Option<ChainSpec>,
    pub points: Vec<State>,
    pub depth: Option<usize>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
    Leq,
    Union,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Leq => write!(f, "`<=`"),
            Tok::Union => write!(f, "`∪`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ConfigError> {
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '{' => {
                    out.push(Token {
                        tok: Tok::LBrace,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                '}' => {
                    out.push(Token {
                        tok: Tok::RBrace,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                '(' => {
                    out.push(Token {
                        tok: Tok::LParen,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                ')' => {
                    out.push(Token {
                        tok: Tok::RParen,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                '[' => {
                    out.push(Token {
                        tok: Tok::LBracket,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                ']' => {
                    out.push(Token {
                        tok: Tok::RBracket,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                ',' => {
                    out.push(Token {
                        tok: Tok::Comma,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                ':' => {
                    out.push(Token {
                        tok: Tok::Colon,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                ';' => {
                    out.push(Token {
                        tok: Tok::Semi,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                '|' | '∪' => {
                    out.push(Token {
                        tok: Tok::Union,
                        line: line_no,
                        col,
                    });
                    i += 1;
                }
                '<' => {
                    if chars.get(i + 1) == Some(&'=') {
                        out.push(Token {
                            tok: Tok::Leq,
                            line: line_no,
                            col,
                        });
                        i += 2;
                    } else {
                        return Err(syntax(line_no, col, "expected `<=`"));
                    }
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let literal: String = chars[start..i].iter().collect();
                    let value: u64 = literal.parse().map_err(|_| {
                        syntax(
                            line_no,
                            col,
                            format!("integer literal `{literal}` is too large"),
                        )
                    })?;
                    if value > MAX_LITERAL {
                        return Err(semantic(
                            line_no,
                            col,
                            format!(
                                "integer literal {value} exceeds the supported bound {MAX_LITERAL}"
                            ),
                        ));
                    }
                    out.push(Token {
                        tok: Tok::Int(value),
                        line: line_no,
                        col,
                    });
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    out.push(Token {
                        tok: Tok::Ident(word),
                        line: line_no,
                        col,
                    });
                }
                other => {
                    return Err(syntax(
                        line_no,
                        col,
                        format!("unexpected character `{other}`"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    config: Config,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self.tokens.last().map_or((1, 1), |t| (t.line, t.col + 1)),
        }
    }

    fn next(&mut self, context: &str) -> Result<Token, ConfigError> {
        let (line, col) = self.here();
        let token =
            self.tokens.get(self.pos).cloned().ok_or_else(|| {
                syntax(line, col, format!("unexpected end of input in {context}"))
            })?;
        self.pos += 1;
        Ok(token)
    }

    fn expect(&mut self, tok: Tok, context: &str) -> Result<Token, ConfigError> {
        let token = self.next(context)?;
        if token.tok != tok {
            return Err(syntax(
                token.line,
                token.col,
                format!("expected {tok} in {context}, found {}", token.tok),
            ));
        }
        Ok(token)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_int(&mut self, context: &str) -> Result<(u64, usize, usize), ConfigError> {
        let token = self.next(context)?;
        match token.tok {
            Tok::Int(v) => Ok((v, token.line, token.col)),
            other => Err(syntax(
                token.line,
                token.col,
                format!("expected an integer in {context}, found {other}"),
            )),
        }
    }

    fn expect_ident(&mut self, context: &str) -> Result<(String, usize, usize), ConfigError> {
        let token = self.next(context)?;
        match token.tok {
            Tok::Ident(word) => Ok((word, token.line, token.col)),
            other => Err(syntax(
                token.line,
                token.col,
                format!("expected a name in {context}, found {other}"),
            )),
        }
    }

    fn space_or_error(&self, line: usize, col: usize) -> Result<StateSpace, ConfigError> {
        self.config
            .space
            .ok_or_else(|| semantic(line, col, "declare `space` before this statement"))
    }

    /// `finite{..}` | `ap(f, s)` | `all`, as a set of the declared space.
    fn parse_set_term(&mut self, space: StateSpace) -> Result<StateSet, ConfigError> {
        let (word, line, col) = self.expect_ident("a set expression")?;
        match (word.as_str(), space) {
            ("finite", _) => {
                self.expect(Tok::LBrace, "finite{..}")?;
                let mut members = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        let (v, vline, vcol) = self.expect_int("finite{..}")?;
                        if let StateSpace::Finite { size } = space {
                            if v >= size as u64 {
                                return Err(semantic(
                                    vline,
                                    vcol,
                                    format!("element {v} is outside the space of size {size}"),
                                ));
                            }
                        }
                        members.push(v);
                        if self.eat(&Tok::RBrace) {
                            break;
                        }
                        self.expect(Tok::Comma, "finite{..}")?;
                    }
                }
                Ok(match space {
                    StateSpace::Nat => StateSet::Nat(UPSet::finite(members)),
                    StateSpace::Finite { size } => StateSet::Finite(
                        FiniteSet::from_members(size, members).expect("members checked in range"),
                    ),
                })
            }
            ("ap", StateSpace::Nat) => {
                self.expect(Tok::LParen, "ap(first, stride)")?;
                let (first, ..) = self.expect_int("ap(first, stride)")?;
                self.expect(Tok::Comma, "ap(first, stride)")?;
                let (stride, sline, scol) = self.expect_int("ap(first, stride)")?;
                self.expect(Tok::RParen, "ap(first, stride)")?;
                if stride == 0 {
                    return Err(semantic(
                        sline,
                        scol,
                        "arithmetic progression stride must be positive",
                    ));
                }
                Ok(StateSet::Nat(UPSet::arithmetic(first, stride)))
            }
            ("ap", StateSpace::Finite { .. }) => {
                Err(semantic(line, col, "`ap` sets need the nat space"))
            }
            ("all", _) => Ok(space.full_set()),
            (other, _) => Err(syntax(
                line,
                col,
                format!("expected `finite`, `ap`, or `all`, found `{other}`"),
            )),
        }
    }

    fn parse_set_expr(&mut self, space: StateSpace) -> Result<StateSet, ConfigError> {
        let (line, col) = self.here();
        let mut set = self.parse_set_term(space)?;
        while self.eat(&Tok::Union) {
            let term = self.parse_set_term(space)?;
            set = set
                .union(&term)
                .map_err(|e| semantic(line, col, e.to_string()))?;
        }
        Ok(set)
    }

    /// `{ <set>, <set>, .. }` validated against the declared space.
    fn parse_partition(&mut self) -> Result<Partition, ConfigError> {
        let open = self.expect(Tok::LBrace, "partition {..}")?;
        let space = self.space_or_error(open.line, open.col)?;
        let mut blocks = Vec::new();
        loop {
            blocks.push(self.parse_set_expr(space)?);
            if self.eat(&Tok::RBrace) {
                break;
            }
            self.expect(Tok::Comma, "partition {..}")?;
        }
        Partition::new(space, blocks)
            .map_err(|e: PartitionError| semantic(open.line, open.col, e.to_string()))
    }

    fn parse_tail(&mut self) -> Result<TailMap, ConfigError> {
        let (word, line, col) = self.expect_ident("the override tail")?;
        match word.as_str() {
            "identity" => Ok(TailMap::Identity),
            "shift" => {
                self.expect(Tok::LParen, "shift(d)")?;
                let (d, dline, dcol) = self.expect_int("shift(d)")?;
                self.expect(Tok::RParen, "shift(d)")?;
                if d == 0 {
                    return Err(semantic(dline, dcol, "shift stride must be positive"));
                }
                Ok(TailMap::Shift(d))
            }
            "constant" => {
                self.expect(Tok::LParen, "constant(c)")?;
                let (c, ..) = self.expect_int("constant(c)")?;
                self.expect(Tok::RParen, "constant(c)")?;
                Ok(TailMap::Constant(c))
            }
            other => Err(syntax(
                line,
                col,
                format!("expected a tail map, found `{other}`"),
            )),
        }
    }

    fn parse_map(&mut self) -> Result<MapDescriptor, ConfigError> {
        let (word, line, col) = self.expect_ident("the map statement")?;
        let space = self.space_or_error(line, col)?;
        let require_nat = |map: MapDescriptor| -> Result<MapDescriptor, ConfigError> {
            match space {
                StateSpace::Nat => Ok(map),
                StateSpace::Finite { .. } => Err(semantic(
                    line,
                    col,
                    format!("`{word}` maps act on the nat space; finite spaces use `table[..]`"),
                )),
            }
        };
        match word.as_str() {
            "identity" => require_nat(MapDescriptor::Identity),
            "shift" => {
                self.expect(Tok::LParen, "shift(d)")?;
                let (d, dline, dcol) = self.expect_int("shift(d)")?;
                self.expect(Tok::RParen, "shift(d)")?;
                if d == 0 {
                    return Err(semantic(dline, dcol, "shift stride must be positive"));
                }
                require_nat(MapDescriptor::Shift(d))
            }
            "constant" => {
                self.expect(Tok::LParen, "constant(c)")?;
                let (c, ..) = self.expect_int("constant(c)")?;
                self.expect(Tok::RParen, "constant(c)")?;
                require_nat(MapDescriptor::Constant(c))
            }
            "override" => {
                self.expect(Tok::LBrace, "override{..; tail}")?;
                let mut overrides = std::collections::BTreeMap::new();
                if self.peek().map(|t| &t.tok) != Some(&Tok::Semi) {
                    loop {
                        let (k, ..) = self.expect_int("override{k: v, ..}")?;
                        self.expect(Tok::Colon, "override{k: v, ..}")?;
                        let (v, ..) = self.expect_int("override{k: v, ..}")?;
                        overrides.insert(k, v);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::Semi, "override{..; tail}")?;
                let tail = self.parse_tail()?;
                self.expect(Tok::RBrace, "override{..; tail}")?;
                require_nat(MapDescriptor::FiniteOverride { overrides, tail })
            }
            "table" => {
                let StateSpace::Finite { size } = space else {
                    return Err(semantic(line, col, "`table` maps need a finite space"));
                };
                self.expect(Tok::LBracket, "table[..]")?;
                let mut images = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    loop {
                        let (v, vline, vcol) = self.expect_int("table[..]")?;
                        if v >= size as u64 {
                            return Err(semantic(
                                vline,
                                vcol,
                                format!("image {v} is outside the space of size {size}"),
                            ));
                        }
                        images.push(v);
                        if self.eat(&Tok::RBracket) {
                            break;
                        }
                        self.expect(Tok::Comma, "table[..]")?;
                    }
                }
                if images.len() != size {
                    return Err(semantic(
                        line,
                        col,
                        format!(
                            "table has {} images for a space of size {size}",
                            images.len()
                        ),
                    ));
                }
                Ok(MapDescriptor::Table(images))
            }
            other => Err(syntax(line, col, format!("unknown map kind `{other}`"))),
        }
    }

    fn parse_chain(&mut self) -> Result<ChainSpec, ConfigError> {
        let (word, line, col) = self.expect_ident("the chain statement")?;
        match word.as_str() {
            "builtin" => {
                let space = self.space_or_error(line, col)?;
                if space != StateSpace::Nat {
                    return Err(semantic(line, col, "builtin chains live on the nat space"));
                }
                let (name, nline, ncol) = self.expect_ident("the builtin chain name")?;
                let mut set: Option<UPSet> = None;
                let mut depth: Option<u64> = None;
                while let Some(token) = self.peek() {
                    match &token.tok {
                        Tok::Ident(key) if key == "u" => {
                            self.pos += 1;
                            match self.parse_set_expr(StateSpace::Nat)? {
                                StateSet::Nat(u) => set = Some(u),
                                StateSet::Finite(_) => unreachable!("nat space yields nat sets"),
                            }
                        }
                        Tok::Ident(key) if key == "depth" => {
                            self.pos += 1;
                            let (d, ..) = self.expect_int("the builtin chain depth")?;
                            depth = Some(d);
                        }
                        _ => break,
                    }
                }
                let depth =
                    depth.ok_or_else(|| syntax(nline, ncol, "builtin chains need `depth <n>`"))?;
                if depth > 64 {
                    return Err(semantic(nline, ncol, "builtin chain depth is capped at 64"));
                }
                let chain = builtin_chain(&name, set.as_ref(), depth as usize)
                    .map_err(|e| semantic(nline, ncol, e.to_string()))?;
                Ok(ChainSpec::Ready(chain))
            }
            "explicit" => {
                self.expect(Tok::LBrace, "chain explicit {..}")?;
                let mut partitions = Vec::new();
                loop {
                    while self.eat(&Tok::Semi) {}
                    if self.eat(&Tok::RBrace) {
                        break;
                    }
                    let (word, wline, wcol) = self.expect_ident("chain explicit {..}")?;
                    if word != "partition" {
                        return Err(syntax(
                            wline,
                            wcol,
                            format!("expected `partition` inside the chain block, found `{word}`"),
                        ));
                    }
                    partitions.push(self.parse_partition()?);
                }
                if partitions.is_empty() {
                    return Err(semantic(
                        line,
                        col,
                        "an explicit chain needs at least one partition",
                    ));
                }
                let index = if self.peek().map(|t| &t.tok) == Some(&Tok::Ident("poset".into())) {
                    let poset_tok = self.next("poset {..}")?;
                    self.expect(Tok::LBrace, "poset {..}")?;
                    let mut pairs = Vec::new();
                    if !self.eat(&Tok::RBrace) {
                        loop {
                            let (a, aline, acol) = self.expect_int("poset {a <= b, ..}")?;
                            self.expect(Tok::Leq, "poset {a <= b, ..}")?;
                            let (b, ..) = self.expect_int("poset {a <= b, ..}")?;
                            for e in [a, b] {
                                if e as usize >= partitions.len() {
                                    return Err(semantic(
                                        aline,
                                        acol,
                                        format!(
                                            "poset element {e} is outside 0..{}",
                                            partitions.len()
                                        ),
                                    ));
                                }
                            }
                            pairs.push((a as usize, b as usize));
                            if self.eat(&Tok::RBrace) {
                                break;
                            }
                            self.expect(Tok::Comma, "poset {a <= b, ..}")?;
                        }
                    }
                    let labels = (0..partitions.len()).map(|i| i.to_string()).collect();
                    IndexPoset::Explicit(
                        ExplicitPoset::new(labels, &pairs)
                            .map_err(|e| semantic(poset_tok.line, poset_tok.col, e.to_string()))?,
                    )
                } else {
                    IndexPoset::total(partitions.len() - 1)
                };
                Ok(ChainSpec::Explicit { index, partitions })
            }
            other => Err(syntax(
                line,
                col,
                format!("expected `builtin` or `explicit`, found `{other}`"),
            )),
        }
    }

    fn parse_statement(&mut self) -> Result<(), ConfigError> {
        let (word, line, col) = self.expect_ident("a statement")?;
        let duplicate = |what: &str| semantic(line, col, format!("duplicate `{what}` statement"));
        match word.as_str() {
            "space" => {
                if self.config.space.is_some() {
                    return Err(duplicate("space"));
                }
                let (kind, kline, kcol) = self.expect_ident("the space statement")?;
                let space = match kind.as_str() {
                    "nat" => StateSpace::Nat,
                    "finite" => {
                        self.expect(Tok::LParen, "finite(n)")?;
                        let (n, nline, ncol) = self.expect_int("finite(n)")?;
                        self.expect(Tok::RParen, "finite(n)")?;
                        if n == 0 {
                            return Err(semantic(
                                nline,
                                ncol,
                                "finite spaces need at least one state",
                            ));
                        }
                        if n > MAX_FINITE_SPACE {
                            return Err(semantic(
                                nline,
                                ncol,
                                format!("finite space size is capped at {MAX_FINITE_SPACE}"),
                            ));
                        }
                        StateSpace::Finite { size: n as usize }
                    }
                    other => {
                        return Err(syntax(
                            kline,
                            kcol,
                            format!("expected `nat` or `finite(n)`, found `{other}`"),
                        ))
                    }
                };
                self.config.space = Some(space);
            }
            "map" => {
                if self.config.map.is_some() {
                    return Err(duplicate("map"));
                }
                self.config.map = Some(self.parse_map()?);
            }
            "partition" => {
                if self.config.partition.is_some() {
                    return Err(duplicate("partition"));
                }
                self.config.partition = Some(self.parse_partition()?);
            }
            "chain" => {
                if self.config.chain.is_some() {
                    return Err(duplicate("chain"));
                }
                self.config.chain = Some(self.parse_chain()?);
            }
            "point" | "points" => {
                let (first, fline, fcol) = self.expect_int("the points statement")?;
                self.check_point(first, fline, fcol)?;
                self.config.points.push(first);
                loop {
                    self.eat(&Tok::Comma);
                    match self.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Int(v)) => {
                            let token = self.next("the points statement")?;
                            self.check_point(v, token.line, token.col)?;
                            self.config.points.push(v);
                        }
                        _ => break,
                    }
                }
            }
            "depth" => {
                if self.config.depth.is_some() {
                    return Err(duplicate("depth"));
                }
                let (d, dline, dcol) = self.expect_int("the depth statement")?;
                if d > 4096 {
                    return Err(semantic(dline, dcol, "depth is capped at 4096"));
                }
                self.config.depth = Some(d as usize);
            }
            "format" => {
                if self.config.format.is_some() {
                    return Err(duplicate("format"));
                }
                let (kind, kline, kcol) = self.expect_ident("the format statement")?;
                self.config.format = Some(match kind.as_str() {
                    "text" => OutputFormat::Text,
                    "machine" => OutputFormat::Machine,
                    other => {
                        return Err(syntax(
                            kline,
                            kcol,
                            format!("expected `text` or `machine`, found `{other}`"),
                        ))
                    }
                });
            }
            other => {
                return Err(syntax(line, col, format!("unknown statement `{other}`")));
            }
        }
        Ok(())
    }

    fn check_point(&self, v: u64, line: usize, col: usize) -> Result<(), ConfigError> {
        if let Some(space) = self.config.space {
            if !space.contains(v) {
                return Err(semantic(
                    line,
                    col,
                    format!("point {v} lies outside the space {space}"),
                ));
            }
        }
        Ok(())
    }
}

/// Parses a config document, reporting the first error with its position.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        config: Config::default(),
    };
    loop {
        while parser.eat(&Tok::Semi) {}
        if parser.at_end() {
            break;
        }
        parser.parse_statement()?;
    }
    // cross-statement consistency
    if let (Some(space), Some(map)) = (parser.config.space, parser.config.map.as_ref()) {
        if map.space() != space {
            return Err(semantic(
                1,
                1,
                format!("map acts on {} but the space is {space}", map.space()),
            ));
        }
    }
    Ok(parser.config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_chain_config() {
        let config =
            parse_config("space nat; map shift(1); chain builtin initial_segments depth 4")
                .unwrap();
        assert_eq!(config.space, Some(StateSpace::Nat));
        assert_eq!(config.map, Some(MapDescriptor::Shift(1)));
        let chain = config.chain.unwrap().materialize().unwrap();
        assert_eq!(chain.len(), 5);
    }

    #[test]
    fn accepts_the_builtin_alias() {
        let config = parse_config("space nat\nchain builtin example2 depth 4").unwrap();
        let chain = config.chain.unwrap().materialize().unwrap();
        assert_eq!(chain.len(), 5);
    }

    #[test]
    fn parses_finite_table_config() {
        let config = parse_config("space finite(3)\nmap table[1, 2, 0]\npoints 0, 1").unwrap();
        assert_eq!(config.space, Some(StateSpace::Finite { size: 3 }));
        assert_eq!(config.map, Some(MapDescriptor::Table(vec![1, 2, 0])));
        assert_eq!(config.points, vec![0, 1]);
    }

    #[test]
    fn parses_partitions_and_set_unions() {
        let config =
            parse_config("space nat\npartition { ap(0, 2), finite{1} ∪ ap(3, 2) }").unwrap();
        let p = config.partition.unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.block(0), &StateSet::Nat(UPSet::residue_class(0, 2)));
    }

    #[test]
    fn ascii_union_alias_works() {
        let a = parse_config("space nat\npartition { ap(0, 2), finite{1} | ap(3, 2) }").unwrap();
        let b = parse_config("space nat\npartition { ap(0, 2), finite{1} ∪ ap(3, 2) }").unwrap();
        assert_eq!(a.partition, b.partition);
    }

    #[test]
    fn overlapping_partition_is_a_semantic_error_with_witness() {
        let err = parse_config("space nat\npartition { ap(0, 2), ap(4, 1) }").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
        assert_eq!(err.line, 2);
        assert!(err.message.contains("witness element 4"), "{}", err.message);
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_config("space nat\nmap shift(").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Syntax);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unknown_statement_is_syntax() {
        let err = parse_config("shift(1)").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Syntax);
        assert_eq!((err.line, err.col), (1, 1));
    }

    #[test]
    fn map_before_space_is_semantic() {
        let err = parse_config("map shift(1)").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
    }

    #[test]
    fn symbolic_map_on_finite_space_is_semantic() {
        let err = parse_config("space finite(4)\nmap shift(1)").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
    }

    #[test]
    fn table_arity_is_checked() {
        let err = parse_config("space finite(3)\nmap table[0, 1]").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
        assert!(err.message.contains("2 images"));
    }

    #[test]
    fn explicit_chain_with_poset_clause() {
        let text = "space finite(2)\nchain explicit {\n  partition { all };\n  partition { finite{0}, finite{1} };\n  partition { finite{0}, finite{1} }\n} poset { 0 <= 1, 0 <= 2 }";
        let config = parse_config(text).unwrap();
        let (index, partitions) = config.chain.as_ref().unwrap().parts();
        assert_eq!(partitions.len(), 3);
        assert!(index.leq(0, 1));
        assert!(!index.leq(1, 2));
    }

    #[test]
    fn explicit_chain_defaults_to_total_order() {
        let text =
            "space nat\nchain explicit { partition { all }; partition { finite{0}, ap(1, 1) } }";
        let config = parse_config(text).unwrap();
        let chain = config.chain.unwrap().materialize().unwrap();
        assert!(chain.index().is_total());
        assert_eq!(chain.len(), 2);
    }

    #[test]
    fn non_monotone_explicit_chain_parses_but_fails_materialization() {
        let text =
            "space nat\nchain explicit { partition { ap(0, 2), ap(1, 2) }; partition { all } }";
        let config = parse_config(text).unwrap();
        let err = config.chain.unwrap().materialize().unwrap_err();
        assert!(matches!(err, ChainError::NotMonotone { lo: 0, hi: 1, .. }));
    }

    #[test]
    fn filter_family_requires_proxy_set() {
        let err = parse_config("space nat\nchain builtin filter_family depth 2").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
        let ok = parse_config("space nat\nchain builtin filter_family u ap(0, 2) depth 2");
        assert!(ok.is_ok());
    }

    #[test]
    fn finite_space_points_are_range_checked() {
        let err = parse_config("space finite(3)\npoints 0 5").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
        assert!(err.message.contains("point 5"));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# system under study\nspace nat  # the naturals\n\nmap identity\n";
        let config = parse_config(text).unwrap();
        assert_eq!(config.map, Some(MapDescriptor::Identity));
    }

    #[test]
    fn literal_bound_is_enforced() {
        let err = parse_config("space nat\npoints 10000000").unwrap_err();
        assert_eq!(err.kind, ConfigErrorKind::Semantic);
    }

    #[test]
    fn override_map_round_trips_through_display() {
        let text = "space nat\nmap override{0: 5, 7: 0; shift(2)}";
        let config = parse_config(text).unwrap();
        let rendered = format!("space nat\nmap {}", config.map.as_ref().unwrap());
        let reparsed = parse_config(&rendered).unwrap();
        assert_eq!(config.map, reparsed.map);
    }
}
