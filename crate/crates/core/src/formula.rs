//! Propositional sentences in reverse Polish form.
//!
//! A [`Formula`] is a flat token sequence over a [`ConnectiveTable`]. The
//! formula does not own its table; operations that need connective symbols
//! or truth functions take the table as an argument.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("malformed RPN: {0}")]
    MalformedRpn(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("variable p{index} out of range for {n} variables")]
    VariableOutOfRange { index: u32, n: u32 },
    #[error("connective table line {line}: {reason}")]
    BadTable { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
}

pub type ConnId = u16;

/// A named Boolean function of fixed arity.
///
/// `truth[t]` is the output for the input tuple whose binary value is `t`,
/// with the first argument as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connective {
    pub id: ConnId,
    pub arity: usize,
    pub symbol: String,
    truth: Vec<bool>,
}

impl Connective {
    pub fn new(
        id: ConnId,
        arity: usize,
        symbol: impl Into<String>,
        truth: Vec<bool>,
    ) -> Result<Self, FormulaError> {
        let symbol = symbol.into();
        if truth.len() != 1 << arity {
            return Err(FormulaError::BadTable {
                line: id as usize + 1,
                reason: format!(
                    "`{symbol}` has {} truth bits, expected {}",
                    truth.len(),
                    1 << arity
                ),
            });
        }
        Ok(Self {
            id,
            arity,
            symbol,
            truth,
        })
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    /// Applies the truth function; `args[0]` is the first argument.
    pub fn apply(&self, args: &[bool]) -> bool {
        debug_assert_eq!(args.len(), self.arity);
        let t = args.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.truth[t]
    }

    /// Word-parallel application over assignment bitsets.
    fn apply_words(&self, args: &[&[u64]], out: &mut [u64]) {
        for (w, slot) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (t, &hit) in self.truth.iter().enumerate() {
                if !hit {
                    continue;
                }
                let mut term = !0u64;
                for (j, arg) in args.iter().enumerate() {
                    let bit = (t >> (self.arity - 1 - j)) & 1;
                    term &= if bit == 1 { arg[w] } else { !arg[w] };
                }
                acc |= term;
            }
            *slot = acc;
        }
    }

    fn truth_bits(&self) -> String {
        self.truth.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// An ordered set of connectives; a connective's id is its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveTable {
    connectives: Vec<Connective>,
    by_symbol: HashMap<String, ConnId>,
}

const BINARY_SYMBOLS: [&str; 16] = [
    "⊥", "∧", "↛", "⊣", "↚", "⊢", "⊕", "∨", "↓", "↔", "∼", "←", "⌐", "→", "↑", "⊤",
];
const UNARY_SYMBOLS: [&str; 4] = ["∅", "ι", "¬", "Ω"];

fn bits_of(value: usize, width: usize) -> Vec<bool> {
    // Character k of the truth string is the output for tuple k, so the
    // leftmost character corresponds to the most significant bit of `value`.
    (0..width).map(|k| (value >> (width - 1 - k)) & 1 == 1).collect()
}

impl ConnectiveTable {
    pub fn new(entries: Vec<(String, usize, Vec<bool>)>) -> Result<Self, FormulaError> {
        let mut connectives = Vec::with_capacity(entries.len());
        let mut by_symbol = HashMap::new();
        let mut seen_truth = HashSet::new();
        for (i, (symbol, arity, truth)) in entries.into_iter().enumerate() {
            if symbol.is_empty() || symbol.chars().any(char::is_whitespace) {
                return Err(FormulaError::BadTable {
                    line: i + 1,
                    reason: format!("invalid symbol `{symbol}`"),
                });
            }
            if parse_var(&symbol).is_some() {
                return Err(FormulaError::BadTable {
                    line: i + 1,
                    reason: format!("symbol `{symbol}` collides with variable syntax"),
                });
            }
            let id = ConnId::try_from(i).map_err(|_| FormulaError::BadTable {
                line: i + 1,
                reason: "too many connectives".into(),
            })?;
            let conn = Connective::new(id, arity, symbol.clone(), truth)?;
            if !seen_truth.insert((arity, conn.truth.clone())) {
                return Err(FormulaError::BadTable {
                    line: i + 1,
                    reason: format!("`{symbol}` duplicates an earlier truth function"),
                });
            }
            if by_symbol.insert(symbol.clone(), id).is_some() {
                return Err(FormulaError::BadTable {
                    line: i + 1,
                    reason: format!("duplicate symbol `{symbol}`"),
                });
            }
            connectives.push(conn);
        }
        Ok(Self {
            connectives,
            by_symbol,
        })
    }

    /// `¬`, `∧`, `∨`.
    pub fn standard() -> Self {
        Self::new(vec![
            ("¬".into(), 1, vec![true, false]),
            ("∧".into(), 2, bits_of(0b0001, 4)),
            ("∨".into(), 2, bits_of(0b0111, 4)),
        ])
        .expect("standard table is well formed")
    }

    /// The sixteen binary Boolean functions, ordered by truth-table value.
    pub fn all_binary() -> Self {
        let entries = BINARY_SYMBOLS
            .iter()
            .enumerate()
            .map(|(v, s)| (s.to_string(), 2, bits_of(v, 4)))
            .collect();
        Self::new(entries).expect("binary table is well formed")
    }

    /// Every truth function of every arity `1..=k` (`k <= 3`).
    pub fn all_up_to(k: usize) -> Self {
        assert!((1..=3).contains(&k), "all_up_to supports arities 1..=3");
        let mut entries = Vec::new();
        for (v, sym) in UNARY_SYMBOLS.iter().enumerate() {
            entries.push((sym.to_string(), 1, bits_of(v, 2)));
        }
        if k >= 2 {
            for (v, sym) in BINARY_SYMBOLS.iter().enumerate() {
                entries.push((sym.to_string(), 2, bits_of(v, 4)));
            }
        }
        if k >= 3 {
            for v in 0..256u32 {
                let sym = char::from_u32(0x3400 + v).expect("CJK ext A codepoint");
                entries.push((sym.to_string(), 3, bits_of(v as usize, 8)));
            }
        }
        Self::new(entries).expect("generated table is well formed")
    }

    /// Parses `symbol arity truth-bits` lines. Blank lines and `#` comments
    /// are ignored.
    pub fn from_text(text: &str) -> Result<Self, FormulaError> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| FormulaError::BadTable {
                line: lineno + 1,
                reason,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [symbol, arity, bits] = fields[..] else {
                return Err(bad(format!("expected 3 fields, got {}", fields.len())));
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| bad(format!("bad arity `{arity}`")))?;
            if arity > 8 {
                return Err(bad(format!("arity {arity} too large")));
            }
            if bits.len() != 1 << arity {
                return Err(bad(format!(
                    "expected {} truth bits, got {}",
                    1 << arity,
                    bits.len()
                )));
            }
            let truth = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(bad(format!("bad truth bit `{other}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            entries.push((symbol.to_string(), arity, truth));
        }
        // line numbers in errors from `new` are entry positions
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FormulaError> {
        let text = std::fs::read_to_string(path).map_err(|e| FormulaError::Io(e.to_string()))?;
        Self::from_text(&text)
    }

    pub fn to_text(&self) -> String {
        self.connectives
            .iter()
            .map(|c| format!("{} {} {}\n", c.symbol, c.arity, c.truth_bits()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn get(&self, id: ConnId) -> &Connective {
        &self.connectives[id as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Connective> {
        self.connectives.iter()
    }

    pub fn lookup(&self, symbol: &str) -> Option<ConnId> {
        self.by_symbol.get(symbol).copied()
    }

    pub fn max_arity(&self) -> usize {
        self.connectives.iter().map(|c| c.arity).max().unwrap_or(0)
    }

    /// The unary negation, if the table has one.
    pub fn negation(&self) -> Option<ConnId> {
        self.connectives
            .iter()
            .find(|c| c.arity == 1 && c.truth == [true, false])
            .map(|c| c.id)
    }

    /// A binary connective whose output is the negation of its first
    /// argument, usable as `x x ⌐`.
    pub fn binary_negation(&self) -> Option<ConnId> {
        self.connectives
            .iter()
            .find(|c| c.arity == 2 && c.truth == bits_of(0b1100, 4))
            .or_else(|| {
                // NAND and NOR negate when both arguments coincide.
                self.connectives.iter().find(|c| {
                    c.arity == 2 && c.truth[0] && !c.truth[3]
                })
            })
            .map(|c| c.id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Var(u32),
    Conn(ConnId),
}

fn parse_var(tok: &str) -> Option<u32> {
    let digits = tok.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

/// A well-formed RPN sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula {
    tokens: Vec<Token>,
}

impl Formula {
    pub fn new(tokens: Vec<Token>, table: &ConnectiveTable) -> Result<Self, FormulaError> {
        let mut depth = 0usize;
        for (pos, tok) in tokens.iter().enumerate() {
            match *tok {
                Token::Var(_) => depth += 1,
                Token::Conn(id) => {
                    if id as usize >= table.len() {
                        return Err(FormulaError::UnknownSymbol(format!("#{id}")));
                    }
                    let arity = table.get(id).arity;
                    if depth < arity {
                        return Err(FormulaError::MalformedRpn(format!(
                            "stack underflow at token {pos}"
                        )));
                    }
                    depth = depth - arity + 1;
                }
            }
        }
        if depth != 1 {
            return Err(FormulaError::MalformedRpn(format!(
                "final stack depth {depth}, expected 1"
            )));
        }
        Ok(Self { tokens })
    }

    /// Builds a formula known to be well formed.
    pub(crate) fn from_tokens_unchecked(tokens: Vec<Token>) -> Self {
        Self { tokens }
    }

    pub fn var(index: u32) -> Self {
        Self {
            tokens: vec![Token::Var(index)],
        }
    }

    pub fn parse(text: &str, table: &ConnectiveTable) -> Result<Self, FormulaError> {
        let tokens = text
            .split_whitespace()
            .map(|tok| match parse_var(tok) {
                Some(i) => Ok(Token::Var(i)),
                None => table
                    .lookup(tok)
                    .map(Token::Conn)
                    .ok_or_else(|| FormulaError::UnknownSymbol(tok.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(tokens, table)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn render(&self, table: &ConnectiveTable) -> String {
        let mut out = String::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            match *tok {
                Token::Var(v) => {
                    out.push('p');
                    out.push_str(&v.to_string());
                }
                Token::Conn(id) => out.push_str(&table.get(id).symbol),
            }
        }
        out
    }

    /// Encoded length in bits: eight per character of the canonical rendering.
    pub fn size_bits(&self, table: &ConnectiveTable) -> u64 {
        let mut chars = self.tokens.len().saturating_sub(1) as u64;
        for tok in &self.tokens {
            chars += match *tok {
                Token::Var(v) => 1 + decimal_len(v),
                Token::Conn(id) => table.get(id).symbol.chars().count() as u64,
            };
        }
        8 * chars
    }

    /// Number of distinct variables.
    pub fn alpha(&self) -> usize {
        let mut seen: Vec<u32> = self
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Var(v) => Some(*v),
                Token::Conn(_) => None,
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn connective_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| matches!(t, Token::Conn(_)))
            .count()
    }

    /// Variable indices in order of first appearance.
    pub fn variables_by_first_use(&self) -> Vec<u32> {
        let mut order = Vec::new();
        for tok in &self.tokens {
            if let Token::Var(v) = *tok {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        order
    }

    /// Renames variables to `0..alpha` in order of first appearance.
    pub fn compacted(&self) -> Formula {
        let order = self.variables_by_first_use();
        let map: BTreeMap<u32, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let tokens = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::Var(v) => Token::Var(map[&v]),
                c => c,
            })
            .collect();
        Formula { tokens }
    }

    /// Appends a top-level connective of arity one, or `x x c` for a
    /// binary connective.
    pub fn wrapped(&self, conn: ConnId, table: &ConnectiveTable) -> Formula {
        let mut tokens = self.tokens.clone();
        match table.get(conn).arity {
            1 => {}
            2 => tokens.extend_from_slice(&self.tokens),
            a => panic!("cannot wrap with arity-{a} connective"),
        }
        tokens.push(Token::Conn(conn));
        Formula { tokens }
    }

    fn check_range(&self, n: u32) -> Result<(), FormulaError> {
        for tok in &self.tokens {
            if let Token::Var(v) = *tok {
                if v >= n {
                    return Err(FormulaError::VariableOutOfRange { index: v, n });
                }
            }
        }
        Ok(())
    }

    /// Truth value under assignment `m`, where `p_i` reads bit `i` of `m`.
    pub fn evaluate(&self, table: &ConnectiveTable, m: u64, n: u32) -> Result<bool, FormulaError> {
        self.check_range(n)?;
        if n < 64 && m >> n != 0 {
            return Err(FormulaError::VariableOutOfRange { index: n, n });
        }
        Ok(self.eval_unchecked(table, m))
    }

    pub(crate) fn eval_unchecked(&self, table: &ConnectiveTable, m: u64) -> bool {
        let mut stack: Vec<bool> = Vec::with_capacity(self.tokens.len());
        for tok in &self.tokens {
            match *tok {
                Token::Var(v) => stack.push((m >> v) & 1 == 1),
                Token::Conn(id) => {
                    let c = table.get(id);
                    let at = stack.len() - c.arity;
                    let out = c.apply(&stack[at..]);
                    stack.truncate(at);
                    stack.push(out);
                }
            }
        }
        stack[0]
    }

    /// All satisfying assignments over `n` variables, computed word-parallel.
    pub fn model_set(&self, table: &ConnectiveTable, n: u32) -> Result<ModelSet, FormulaError> {
        self.check_range(n)?;
        assert!(n <= 30, "model sets are limited to 30 variables");
        let words = ModelSet::word_count(n);
        let mut stack: Vec<Vec<u64>> = Vec::new();
        for tok in &self.tokens {
            match *tok {
                Token::Var(v) => stack.push(variable_pattern(v, words)),
                Token::Conn(id) => {
                    let c = table.get(id);
                    let at = stack.len() - c.arity;
                    let mut out = vec![0u64; words];
                    {
                        let args: Vec<&[u64]> = stack[at..].iter().map(|a| a.as_slice()).collect();
                        c.apply_words(&args, &mut out);
                    }
                    stack.truncate(at);
                    stack.push(out);
                }
            }
        }
        let mut bits = stack.pop().expect("well-formed formula leaves one value");
        ModelSet::mask_tail(n, &mut bits);
        Ok(ModelSet { n, bits })
    }
}

fn decimal_len(mut v: u32) -> u64 {
    let mut len = 1;
    while v >= 10 {
        v /= 10;
        len += 1;
    }
    len
}

fn variable_pattern(v: u32, words: usize) -> Vec<u64> {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..words)
        .map(|w| {
            if v < 6 {
                LOW[v as usize]
            } else if (w >> (v - 6)) & 1 == 1 {
                !0
            } else {
                0
            }
        })
        .collect()
}

/// The set of satisfying assignments, as a `2^n`-bit set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelSet {
    n: u32,
    bits: Vec<u64>,
}

impl ModelSet {
    fn word_count(n: u32) -> usize {
        if n <= 6 {
            1
        } else {
            1 << (n - 6)
        }
    }

    fn mask_tail(n: u32, bits: &mut [u64]) {
        if n < 6 {
            bits[0] &= (1u64 << (1u32 << n)) - 1;
        }
    }

    pub fn empty(n: u32) -> Self {
        Self {
            n,
            bits: vec![0; Self::word_count(n)],
        }
    }

    pub fn from_members(n: u32, members: impl IntoIterator<Item = u64>) -> Self {
        let mut set = Self::empty(n);
        for m in members {
            assert!(m < 1u64 << n, "assignment {m} out of range");
            set.bits[(m / 64) as usize] |= 1 << (m % 64);
        }
        set
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn universe(&self) -> u64 {
        1u64 << self.n
    }

    pub fn contains(&self, m: u64) -> bool {
        m < self.universe() && (self.bits[(m / 64) as usize] >> (m % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn smallest(&self) -> Option<u64> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i as u64 * 64 + w.trailing_zeros() as u64)
    }

    pub fn complement(&self) -> Self {
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        Self::mask_tail(self.n, &mut bits);
        Self { n: self.n, bits }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.universe()).filter(move |&m| self.contains(m))
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// How far [`enumerate_formulas`] goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumLimit {
    MaxTokens(usize),
    MaxConnectives(usize),
    ExactConnectives(usize),
}

/// Every well-formed formula over `p_0..p_{n-1}` within `limit`, each once,
/// in shortlex order on token sequences (shorter first, then by token
/// order with variables before connectives).
pub fn enumerate_formulas(table: &ConnectiveTable, n: u32, limit: EnumLimit) -> FormulaIter {
    FormulaIter::new(table, n, limit)
}

pub struct FormulaIter {
    alphabet: Vec<(Token, usize)>,
    limit: EnumLimit,
    max_len: usize,
    max_conns: usize,
    len: usize,
    reach: Vec<Vec<bool>>,
    // DFS state: choice index per position, with depth/connectives after it
    choice: Vec<usize>,
    depth: Vec<usize>,
    conns: Vec<usize>,
    started: bool,
    alpha_filter: Option<usize>,
}

impl FormulaIter {
    fn new(table: &ConnectiveTable, n: u32, limit: EnumLimit) -> Self {
        let mut alphabet: Vec<(Token, usize)> = (0..n).map(|v| (Token::Var(v), 0)).collect();
        alphabet.extend(table.iter().map(|c| (Token::Conn(c.id), c.arity)));
        let amax = table.max_arity().max(1);
        let (max_len, max_conns) = match limit {
            EnumLimit::MaxTokens(t) => (t, usize::MAX),
            EnumLimit::MaxConnectives(c) | EnumLimit::ExactConnectives(c) => {
                (c + 1 + c * (amax - 1), c)
            }
        };
        Self {
            alphabet,
            limit,
            max_len,
            max_conns,
            len: 0,
            reach: Vec::new(),
            choice: Vec::new(),
            depth: Vec::new(),
            conns: Vec::new(),
            started: false,
            alpha_filter: None,
        }
    }

    /// Restricts the stream to formulas with exactly `alpha` distinct variables.
    pub fn with_alpha(mut self, alpha: usize) -> Self {
        self.alpha_filter = Some(alpha);
        self
    }

    // reach[r][d]: from stack depth d, exactly r more tokens can end at depth 1
    fn build_reach(&mut self) {
        let l = self.len;
        let mut reach = vec![vec![false; l + 2]; l + 1];
        reach[0][1] = true;
        for r in 1..=l {
            for d in 0..=l {
                reach[r][d] = self.alphabet.iter().any(|&(tok, arity)| match tok {
                    Token::Var(_) => d < l && reach[r - 1][d + 1],
                    Token::Conn(_) => d >= arity && reach[r - 1][d + 1 - arity],
                });
            }
        }
        self.reach = reach;
    }

    fn step(&self, pos: usize, idx: usize) -> Option<(usize, usize)> {
        let (d, c) = if pos == 0 {
            (0, 0)
        } else {
            (self.depth[pos - 1], self.conns[pos - 1])
        };
        let (tok, arity) = self.alphabet[idx];
        let (nd, nc) = match tok {
            Token::Var(_) => (d + 1, c),
            Token::Conn(_) => {
                if d < arity {
                    return None;
                }
                (d + 1 - arity, c + 1)
            }
        };
        let remaining = self.len - pos - 1;
        if nc > self.max_conns || nd > self.len || !self.reach[remaining][nd] {
            return None;
        }
        Some((nd, nc))
    }

    // Fill positions from `pos` onward with the smallest feasible choices.
    fn descend(&mut self, mut pos: usize, mut start: usize) -> bool {
        loop {
            let mut found = None;
            for idx in start..self.alphabet.len() {
                if let Some(s) = self.step(pos, idx) {
                    found = Some((idx, s));
                    break;
                }
            }
            match found {
                Some((idx, (d, c))) => {
                    self.choice.truncate(pos);
                    self.depth.truncate(pos);
                    self.conns.truncate(pos);
                    self.choice.push(idx);
                    self.depth.push(d);
                    self.conns.push(c);
                    if pos + 1 == self.len {
                        return true;
                    }
                    pos += 1;
                    start = 0;
                }
                None => {
                    if pos == 0 {
                        return false;
                    }
                    pos -= 1;
                    start = self.choice[pos] + 1;
                }
            }
        }
    }

    fn advance(&mut self) -> bool {
        if self.started {
            let last = self.len - 1;
            let start = self.choice[last] + 1;
            if self.descend(last, start) {
                return true;
            }
        }
        self.started = true;
        loop {
            self.len += 1;
            if self.len > self.max_len {
                return false;
            }
            self.build_reach();
            self.choice.clear();
            self.depth.clear();
            self.conns.clear();
            if self.descend(0, 0) {
                return true;
            }
        }
    }

    fn accept(&self) -> bool {
        let conns = *self.conns.last().unwrap_or(&0);
        if let EnumLimit::ExactConnectives(c) = self.limit {
            if conns != c {
                return false;
            }
        }
        true
    }
}

impl Iterator for FormulaIter {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        while self.advance() {
            if !self.accept() {
                continue;
            }
            let tokens: Vec<Token> = self.choice.iter().map(|&i| self.alphabet[i].0).collect();
            let f = Formula::from_tokens_unchecked(tokens);
            let alpha = f.alpha();
            if alpha == 0 {
                continue;
            }
            if self.alpha_filter.is_some_and(|a| a != alpha) {
                continue;
            }
            return Some(f);
        }
        None
    }
}

/// Splits a formula set into successive minimal-representative layers.
///
/// Formulas are grouped by model set over `n` variables. Layer `i` takes
/// the `i`-th shortest member of each group (shortest by encoded size, ties
/// by shortlex on the rendering). Returns indices into `formulas`.
pub fn stratify_min_layers(
    table: &ConnectiveTable,
    formulas: &[Formula],
    n: u32,
) -> Result<Vec<Vec<usize>>, FormulaError> {
    let mut groups: BTreeMap<ModelSet, Vec<usize>> = BTreeMap::new();
    for (i, f) in formulas.iter().enumerate() {
        groups.entry(f.model_set(table, n)?).or_default().push(i);
    }
    let rendered: Vec<String> = formulas.iter().map(|f| f.render(table)).collect();
    let key = |i: usize| {
        (
            formulas[i].size_bits(table),
            rendered[i].chars().count(),
            rendered[i].clone(),
        )
    };
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for members in groups.values_mut() {
        members.sort_by_cached_key(|&i| key(i));
        for (depth, &i) in members.iter().enumerate() {
            if layers.len() <= depth {
                layers.push(Vec::new());
            }
            layers[depth].push(i);
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }
    Ok(layers)
}
