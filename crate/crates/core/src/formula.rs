//! Quantifier-free formulas over the distance predicates `D_k(x, a_i)`.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := disj
//! disj    := conj ('|' conj)*
//! conj    := lit ('&' lit)*
//! lit     := '!'? (atom | '(' formula ')')
//! atom    := 'D' INT '(' 'x' ',' 'a' INT ')'
//! ```
//!
//! Whitespace between tokens is ignored. `!` binds tighter than `&`, which
//! binds tighter than `|`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at line {line}, column {column}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

/// `D_k(x, a_param)`: the object variable is at distance exactly `k` from
/// parameter `param` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub param: u32,
    pub k: u32,
}

impl Atom {
    pub fn new(k: u32, param: u32) -> Self {
        assert!(param >= 1, "parameters are numbered from 1");
        Atom { param, k }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}(x,a{})", self.k, self.param)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn atom(k: u32, param: u32) -> Self {
        Formula::Atom(Atom::new(k, param))
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0, end: end_position(text) };
        let f = parser.disjunction()?;
        if let Some(tok) = parser.peek() {
            return Err(tok.error(format!("unexpected {}", tok.kind)));
        }
        Ok(f)
    }

    /// Visits every atom occurrence, left to right.
    pub fn for_each_atom(&self, visit: &mut impl FnMut(Atom)) {
        match self {
            Formula::Atom(a) => visit(*a),
            Formula::Not(inner) => inner.for_each_atom(visit),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.for_each_atom(visit)),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.for_each_atom(&mut |a| out.push(a));
        out
    }

    pub fn params(&self) -> BTreeSet<u32> {
        self.atoms().into_iter().map(|a| a.param).collect()
    }

    /// Highest parameter index mentioned.
    pub fn param_count(&self) -> u32 {
        self.params().into_iter().max().unwrap_or(0)
    }

    /// Largest distance constant used with each parameter.
    pub fn max_constants(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for a in self.atoms() {
            let slot = out.entry(a.param).or_insert(0);
            *slot = (*slot).max(a.k);
        }
        out
    }

    /// Sum of `k + 1` over all atom occurrences.
    pub fn interaction_radius(&self) -> u64 {
        self.atoms().iter().map(|a| u64::from(a.k) + 1).sum()
    }

    /// Evaluates the formula given the truth value of each atom.
    pub fn eval(&self, truth: &impl Fn(Atom) -> bool) -> bool {
        match self {
            Formula::Atom(a) => truth(*a),
            Formula::Not(inner) => !inner.eval(truth),
            Formula::And(cs) => cs.iter().all(|c| c.eval(truth)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval(truth)),
        }
    }

    /// Disjunctive normal form. Inconsistent disjuncts are dropped and
    /// duplicate disjuncts removed; the remaining disjuncts may overlap.
    pub fn to_dnf(&self) -> Dnf {
        let mut disjuncts = Vec::new();
        for c in dnf_of(self, false) {
            if !disjuncts.contains(&c) {
                disjuncts.push(c);
            }
        }
        Dnf { disjuncts, params: self.params() }
    }

    fn fmt_primary(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(_) | Formula::Not(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                f.write_str("!")?;
                match **inner {
                    Formula::Atom(_) => write!(f, "{inner}"),
                    _ => write!(f, "({inner})"),
                }
            }
            Formula::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    c.fmt_primary(f)?;
                }
                Ok(())
            }
            Formula::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    match c {
                        Formula::Or(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

/// A conjunction of atoms and negated atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LiteralConjunction {
    pub positives: BTreeSet<Atom>,
    pub negatives: BTreeSet<Atom>,
}

impl LiteralConjunction {
    /// `None` when the literals are syntactically contradictory: two
    /// positive atoms on one parameter with different constants, or an atom
    /// in both polarities.
    pub fn new(
        positives: impl IntoIterator<Item = Atom>,
        negatives: impl IntoIterator<Item = Atom>,
    ) -> Option<Self> {
        let conj = LiteralConjunction {
            positives: positives.into_iter().collect(),
            negatives: negatives.into_iter().collect(),
        };
        conj.is_consistent().then_some(conj)
    }

    fn is_consistent(&self) -> bool {
        let mut by_param = BTreeMap::new();
        for a in &self.positives {
            if *by_param.entry(a.param).or_insert(a.k) != a.k {
                return false;
            }
        }
        self.positives.is_disjoint(&self.negatives)
    }

    /// The conjunction of `self` and `other`, or `None` on contradiction.
    pub fn merge(&self, other: &LiteralConjunction) -> Option<Self> {
        LiteralConjunction::new(
            self.positives.iter().chain(&other.positives).copied(),
            self.negatives.iter().chain(&other.negatives).copied(),
        )
    }

    pub fn params(&self) -> BTreeSet<u32> {
        self.positives.iter().chain(&self.negatives).map(|a| a.param).collect()
    }

    pub fn to_formula(&self) -> Formula {
        let mut lits: Vec<Formula> = self.positives.iter().map(|&a| Formula::Atom(a)).collect();
        lits.extend(self.negatives.iter().map(|&a| Formula::Atom(a).negate()));
        if lits.len() == 1 {
            lits.pop().unwrap()
        } else {
            Formula::And(lits)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dnf {
    pub disjuncts: Vec<LiteralConjunction>,
    pub params: BTreeSet<u32>,
}

impl Dnf {
    /// The DNF as a formula. An empty DNF renders as `D0(x,a) & !D0(x,a)`
    /// for its first parameter.
    pub fn to_formula(&self) -> Formula {
        if self.disjuncts.is_empty() {
            let p = self.params.first().copied().unwrap_or(1);
            return Formula::And(vec![Formula::atom(0, p), Formula::atom(0, p).negate()]);
        }
        let mut parts: Vec<Formula> = self.disjuncts.iter().map(|c| c.to_formula()).collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    }
}

fn dnf_of(f: &Formula, negated: bool) -> Vec<LiteralConjunction> {
    let product = |children: &[Formula]| {
        let mut acc = vec![LiteralConjunction::default()];
        for c in children {
            let part = dnf_of(c, negated);
            acc = acc.iter().flat_map(|x| part.iter().filter_map(move |y| x.merge(y))).collect();
            if acc.is_empty() {
                break;
            }
        }
        acc
    };
    let union = |children: &[Formula]| children.iter().flat_map(|c| dnf_of(c, negated)).collect();
    match f {
        Formula::Atom(a) if negated => vec![LiteralConjunction::new([], [*a]).unwrap()],
        Formula::Atom(a) => vec![LiteralConjunction::new([*a], []).unwrap()],
        Formula::Not(inner) => dnf_of(inner, !negated),
        Formula::And(cs) if negated => union(cs),
        Formula::And(cs) => product(cs),
        Formula::Or(cs) if negated => product(cs),
        Formula::Or(cs) => union(cs),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    D,
    X,
    A,
    Int(u32),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::D => f.write_str("'D'"),
            TokenKind::X => f.write_str("'x'"),
            TokenKind::A => f.write_str("'a'"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::LParen => f.write_str("'('"),
            TokenKind::RParen => f.write_str("')'"),
            TokenKind::Comma => f.write_str("','"),
            TokenKind::Not => f.write_str("'!'"),
            TokenKind::And => f.write_str("'&'"),
            TokenKind::Or => f.write_str("'|'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, msg: String) -> ParseError {
        ParseError { line: self.line, column: self.column, msg }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let (line, column) = (line_idx + 1, i + 1);
            let c = chars[i];
            let kind = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                'D' => TokenKind::D,
                'x' => TokenKind::X,
                'a' => TokenKind::A,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ',' => TokenKind::Comma,
                '!' => TokenKind::Not,
                '&' => TokenKind::And,
                '|' => TokenKind::Or,
                '0'..='9' => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    let value = digits.parse().map_err(|_| ParseError {
                        line,
                        column,
                        msg: format!("integer {digits} is too large"),
                    })?;
                    tokens.push(Token { kind: TokenKind::Int(value), line, column });
                    continue;
                }
                other => {
                    return Err(ParseError { line, column, msg: format!("unexpected character {other:?}") })
                }
            };
            tokens.push(Token { kind, line, column });
            i += 1;
        }
    }
    Ok(tokens)
}

fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(last) => (lines.len(), last.chars().count() + 1),
        None => (1, 1),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eof_error(&self, expected: &str) -> ParseError {
        ParseError { line: self.end.0, column: self.end.1, msg: format!("expected {expected}, found end of input") }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(tok.error(format!("expected {kind}, found {}", tok.kind))),
            None => Err(self.eof_error(&kind.to_string())),
        }
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Token { kind: TokenKind::Int(n), .. }) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            Some(tok) => Err(tok.error(format!("expected a non-negative integer, found {}", tok.kind))),
            None => Err(self.eof_error("a non-negative integer")),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Or) {
            self.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.literal()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::And) {
            self.pos += 1;
            parts.push(self.literal()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn literal(&mut self) -> Result<Formula, ParseError> {
        let negated = self.peek().is_some_and(|t| t.kind == TokenKind::Not);
        if negated {
            self.pos += 1;
        }
        let inner = match self.peek() {
            Some(Token { kind: TokenKind::LParen, .. }) => {
                self.pos += 1;
                let f = self.disjunction()?;
                self.expect(TokenKind::RParen)?;
                f
            }
            Some(Token { kind: TokenKind::D, .. }) => self.atom()?,
            Some(tok) => return Err(tok.error(format!("expected an atom or '(', found {}", tok.kind))),
            None => return Err(self.eof_error("an atom or '('")),
        };
        Ok(if negated { inner.negate() } else { inner })
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.expect(TokenKind::D)?;
        let k = self.integer()?;
        self.expect(TokenKind::LParen)?;
        self.expect(TokenKind::X)?;
        self.expect(TokenKind::Comma)?;
        self.expect(TokenKind::A)?;
        let param_token = self.peek().cloned();
        let param = self.integer()?;
        if param == 0 {
            return Err(param_token.unwrap().error("parameters are numbered from a1".into()));
        }
        self.expect(TokenKind::RParen)?;
        Ok(Formula::atom(k, param))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(k: u32, p: u32) -> Formula {
        Formula::atom(k, p)
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            Formula::parse("D3(x,a1) & !D2(x,a2)").unwrap(),
            Formula::And(vec![atom(3, 1), atom(2, 2).negate()])
        );
        assert_eq!(
            Formula::parse("D1(x,a1) | D0(x,a1)").unwrap(),
            Formula::Or(vec![atom(1, 1), atom(0, 1)])
        );
        assert_eq!(Formula::parse(" D 12 ( x , a 3 ) ").unwrap(), atom(12, 3));
    }

    #[test]
    fn precedence() {
        let f = Formula::parse("D1(x,a1) & D2(x,a1) | !D3(x,a2) & D0(x,a1)").unwrap();
        assert_eq!(
            f,
            Formula::Or(vec![
                Formula::And(vec![atom(1, 1), atom(2, 1)]),
                Formula::And(vec![atom(3, 2).negate(), atom(0, 1)]),
            ])
        );
    }

    #[test]
    fn syntax_errors() {
        let err = Formula::parse("D-1(x,a1)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 2));
        let err = Formula::parse("D1(x,a1) &\n  D2(y,a1)").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        assert!(Formula::parse("D1.5(x,a1)").is_err());
        assert!(Formula::parse("D1(x,a0)").is_err());
        assert!(Formula::parse("").is_err());
        assert!(Formula::parse("D1(x,a1) D2(x,a1)").is_err());
        assert!(Formula::parse("!!D1(x,a1)").is_err());
        assert!(Formula::parse("(D1(x,a1)").is_err());
        assert!(Formula::parse("D99999999999(x,a1)").is_err());
    }

    #[test]
    fn render_round_trip() {
        for text in [
            "D3(x,a1) & !D2(x,a2)",
            "(D1(x,a1) & D2(x,a1)) & D3(x,a2)",
            "(D1(x,a1) | D2(x,a1)) | D3(x,a2)",
            "!(D1(x,a1) | D2(x,a2)) & (D0(x,a1) | !D1(x,a3))",
            "D1(x,a1) & D2(x,a2) | D3(x,a3)",
        ] {
            let f = Formula::parse(text).unwrap();
            assert_eq!(Formula::parse(&f.to_string()).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn interaction_radius_examples() {
        assert_eq!(Formula::parse("D3(x,a1)").unwrap().interaction_radius(), 4);
        assert_eq!(Formula::parse("D1(x,a1) & !D2(x,a2)").unwrap().interaction_radius(), 5);
    }

    #[test]
    fn dnf_examples() {
        let single = Formula::parse("D2(x,a1)").unwrap().to_dnf();
        assert_eq!(single.disjuncts.len(), 1);
        assert_eq!(single.disjuncts[0].positives.len(), 1);
        assert!(single.disjuncts[0].negatives.is_empty());

        assert!(Formula::parse("D1(x,a1) & !D1(x,a1)").unwrap().to_dnf().disjuncts.is_empty());
        assert!(Formula::parse("D1(x,a1) & D2(x,a1)").unwrap().to_dnf().disjuncts.is_empty());

        let dist = Formula::parse("(D1(x,a1) | D2(x,a1)) & D1(x,a2)").unwrap().to_dnf();
        assert_eq!(dist.disjuncts.len(), 2);
        assert!(dist.disjuncts.iter().all(|c| c.positives.len() == 2 && c.negatives.is_empty()));

        let dup = Formula::parse("D1(x,a1) | D1(x,a1)").unwrap().to_dnf();
        assert_eq!(dup.disjuncts.len(), 1);
    }

    #[test]
    fn dnf_de_morgan() {
        let dnf = Formula::parse("!(D1(x,a1) & D2(x,a2))").unwrap().to_dnf();
        assert_eq!(
            dnf.disjuncts,
            vec![
                LiteralConjunction::new([], [Atom::new(1, 1)]).unwrap(),
                LiteralConjunction::new([], [Atom::new(2, 2)]).unwrap(),
            ]
        );
    }

    #[test]
    fn conjunction_consistency() {
        assert!(LiteralConjunction::new([Atom::new(1, 1), Atom::new(2, 1)], []).is_none());
        assert!(LiteralConjunction::new([Atom::new(1, 1)], [Atom::new(1, 1)]).is_none());
        let c = LiteralConjunction::new([Atom::new(1, 1), Atom::new(1, 1)], [Atom::new(2, 1)]).unwrap();
        assert_eq!(c.positives.len(), 1);
        assert_eq!(c.params(), BTreeSet::from([1]));
    }

    #[test]
    fn eval_truth_table() {
        let f = Formula::parse("D1(x,a1) & !D2(x,a2)").unwrap();
        assert!(f.eval(&|a: Atom| a.k == 1));
        assert!(!f.eval(&|_| true));
        assert!(!f.eval(&|_| false));
    }
}
