//! Concrete syntax: a parser and printer for terms, permutations, freshness
//! contexts and fixed-point constraints, and the line-oriented problem file
//! format.
//!
//! Terms:
//!
//! ```text
//! a  c1            atoms (lowercase, not a declared symbol)
//! X  Y2            unknowns (uppercase)
//! f(t1, t2)        application of a declared symbol
//! h  h()           constant
//! [a]t             abstraction
//! (a b)(c d).X     suspension; cycles compose right to left
//! ```
//!
//! Problem files have one declaration per line; `#` at the start of a line
//! or after whitespace starts a comment.
//!
//! ```text
//! sig plus/2 comm
//! sig s/1
//! sig zero/0
//! prec plus > s > zero
//! status plus mul
//! rule plus_zero: plus(X, zero) -> X
//! rule eta: [a#X] |- lam([a]app(X, a)) -> X
//! term two: s(s(zero))
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::constraint::{FreshnessContext, QuantifiedFixpoint};
use crate::error::{Error, ParseErrorKind, Result};
use crate::ordering::{CrpoConfig, Precedence, Status, StatusMap};
use crate::perm::Perm;
use crate::rewrite::{RewriteRule, RewriteSystem};
use crate::term::{Atom, Signature, Symbol, Term, Var};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Susp(p, x) if p.is_identity() => write!(f, "{x}"),
            Term::Susp(p, x) => write!(f, "{p}.{x}"),
            Term::App(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Term::Abs(a, body) => write!(f, "[{a}]{body}"),
        }
    }
}

/// The canonical text of a term; [`parse_term`] reads it back unchanged.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Number(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Hash,
    Colon,
    Slash,
    Gt,
    Arrow,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Hash => f.write_str("`#`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Turnstile => f.write_str("`|-`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(kind: ParseErrorKind, line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse { kind, line, col, message: message.into() }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits one line into tokens. With `comments`, a `#` at the start or
/// after whitespace ends the line.
fn lex(text: &str, line: usize, comments: bool) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, col });
        match c {
            _ if c.is_whitespace() => {}
            '#' if comments && (i == 0 || chars[i - 1].is_whitespace()) => break,
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '[' => push(&mut out, Tok::LBracket),
            ']' => push(&mut out, Tok::RBracket),
            ',' => push(&mut out, Tok::Comma),
            '.' => push(&mut out, Tok::Dot),
            '#' => push(&mut out, Tok::Hash),
            ':' => push(&mut out, Tok::Colon),
            '/' => push(&mut out, Tok::Slash),
            '>' => push(&mut out, Tok::Gt),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Arrow);
                i += 1;
            }
            '|' if chars.get(i + 1) == Some(&'-') => {
                push(&mut out, Tok::Turnstile);
                i += 1;
            }
            _ if is_word_char(c) => {
                let start = i;
                while i + 1 < chars.len() && is_word_char(chars[i + 1]) {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                let tok = if c.is_ascii_digit() {
                    match word.parse() {
                        Ok(n) if word.chars().all(|d| d.is_ascii_digit()) => Tok::Number(n),
                        _ => return Err(err(ParseErrorKind::Syntax, line, col, format!("malformed number `{word}`"))),
                    }
                } else if c.is_ascii_uppercase() {
                    Tok::Upper(word)
                } else {
                    Tok::Lower(word)
                };
                push(&mut out, tok);
            }
            _ => return Err(err(ParseErrorKind::Syntax, line, col, format!("unexpected character `{c}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_col: usize,
    sig: Option<&'s Signature>,
}

impl<'s> Parser<'s> {
    fn new(text: &str, line: usize, sig: Option<&'s Signature>, comments: bool) -> Result<Self> {
        Ok(Parser { toks: lex(text, line, comments)?, pos: 0, line, end_col: text.chars().count() + 1, sig })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or((self.line, self.end_col), |t| (t.line, t.col))
    }

    fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> Error {
        let (line, col) = self.here();
        err(kind, line, col, message)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::Syntax, format!("expected {wanted}, found {t}")),
            None => self.error(ParseErrorKind::Syntax, format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn is_symbol(&self, name: &str) -> bool {
        self.sig.is_some_and(|s| s.contains(name))
    }

    fn lower_word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Lower(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek() {
            Some(Tok::Lower(w)) if self.is_symbol(w) => {
                Err(self.error(ParseErrorKind::Namespace, format!("`{w}` is a function symbol, not an atom")))
            }
            Some(Tok::Lower(w)) => {
                let a = Atom::new(w);
                self.pos += 1;
                Ok(a)
            }
            Some(Tok::Upper(w)) => {
                Err(self.error(ParseErrorKind::Namespace, format!("`{w}` is an unknown, not an atom")))
            }
            _ => Err(self.unexpected("an atom")),
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek() {
            Some(Tok::Upper(w)) => {
                let x = Var::new(w);
                self.pos += 1;
                Ok(x)
            }
            Some(Tok::Lower(w)) => {
                Err(self.error(ParseErrorKind::Namespace, format!("`{w}` is not an unknown; unknowns are uppercase")))
            }
            _ => Err(self.unexpected("an unknown")),
        }
    }

    /// One or more parenthesised cycles, composed right to left.
    fn cycles(&mut self) -> Result<Perm> {
        let (line, col) = self.here();
        let mut cycles = Vec::new();
        while self.eat(&Tok::LParen) {
            let mut cycle = vec![self.atom()?];
            while !self.eat(&Tok::RParen) {
                cycle.push(self.atom()?);
            }
            cycles.push(cycle);
        }
        if cycles.is_empty() {
            return Err(self.unexpected("`(`"));
        }
        Perm::from_cycles(&cycles).map_err(|e| err(ParseErrorKind::Syntax, line, col, e.to_string()))
    }

    fn perm(&mut self) -> Result<Perm> {
        if matches!(self.peek(), Some(Tok::Lower(w)) if w == "id") {
            self.pos += 1;
            return Ok(Perm::identity());
        }
        self.cycles()
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::LBracket) => {
                self.pos += 1;
                let a = self.atom()?;
                self.expect(&Tok::RBracket)?;
                Ok(Term::Abs(a, Box::new(self.term()?)))
            }
            Some(Tok::LParen) => {
                let p = self.cycles()?;
                self.expect(&Tok::Dot)?;
                Ok(Term::Susp(p, self.var()?))
            }
            Some(Tok::Upper(_)) => Ok(Term::Susp(Perm::identity(), self.var()?)),
            Some(Tok::Lower(w)) => {
                let w = w.clone();
                let (line, col) = self.here();
                self.pos += 1;
                let info = self.sig.and_then(|s| s.get(&w));
                let has_args = self.peek() == Some(&Tok::LParen);
                let Some(info) = info else {
                    if has_args {
                        return Err(err(ParseErrorKind::UnknownSymbol, line, col, format!("unknown symbol `{w}`")));
                    }
                    return Ok(Term::Atom(Atom::new(&w)));
                };
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        if !self.eat(&Tok::Comma) {
                            return Err(self.unexpected("`,` or `)`"));
                        }
                    }
                }
                if args.len() != info.arity {
                    return Err(err(
                        ParseErrorKind::ArityMismatch,
                        line,
                        col,
                        format!("symbol `{w}` expects {} argument(s), found {}", info.arity, args.len()),
                    ));
                }
                Ok(Term::App(Symbol::new(&w), args))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// `a#X, b#Y`, optionally inside brackets.
    fn ctx(&mut self) -> Result<FreshnessContext> {
        let bracketed = self.eat(&Tok::LBracket);
        let mut ctx = FreshnessContext::new();
        let closes = |p: &Self| if bracketed { p.peek() == Some(&Tok::RBracket) } else { p.peek().is_none() };
        if !closes(self) {
            loop {
                let a = self.atom()?;
                self.expect(&Tok::Hash)?;
                let x = self.var()?;
                ctx.insert(a, x);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if bracketed {
            self.expect(&Tok::RBracket)?;
        }
        Ok(ctx)
    }

    fn starts_ctx(&self) -> bool {
        self.peek() == Some(&Tok::LBracket)
            && match self.peek_at(1) {
                Some(Tok::RBracket) => true,
                Some(Tok::Lower(_)) => self.peek_at(2) == Some(&Tok::Hash),
                _ => false,
            }
    }
}

pub fn parse_term(input: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(input, 1, Some(sig), false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// A permutation written as cycles, e.g. `(a c1 d)(e f)`, or `id`.
pub fn parse_perm(input: &str) -> Result<Perm> {
    let mut p = Parser::new(input, 1, None, false)?;
    let perm = p.perm()?;
    p.finish()?;
    Ok(perm)
}

pub fn parse_atom(input: &str) -> Result<Atom> {
    let mut p = Parser::new(input, 1, None, false)?;
    let a = p.atom()?;
    p.finish()?;
    Ok(a)
}

/// Atoms separated by commas or whitespace.
pub fn parse_atoms(input: &str) -> Result<Vec<Atom>> {
    let mut p = Parser::new(input, 1, None, false)?;
    let mut atoms = Vec::new();
    while p.peek().is_some() {
        atoms.push(p.atom()?);
        p.eat(&Tok::Comma);
    }
    Ok(atoms)
}

/// A freshness context such as `a#X, b#Y` or `[a#X]`.
pub fn parse_ctx(input: &str) -> Result<FreshnessContext> {
    let mut p = Parser::new(input, 1, None, false)?;
    let ctx = p.ctx()?;
    p.finish()?;
    Ok(ctx)
}

/// `new c1 c2 in PERM fix TERM`, or `PERM fix TERM` without quantified
/// atoms.
pub fn parse_fixpoint(input: &str, sig: &Signature) -> Result<QuantifiedFixpoint> {
    let mut p = Parser::new(input, 1, Some(sig), false)?;
    let mut quantified = Vec::new();
    if matches!(p.peek(), Some(Tok::Lower(w)) if w == "new") {
        p.pos += 1;
        while !matches!(p.peek(), Some(Tok::Lower(w)) if w == "in") {
            quantified.push(p.atom()?);
        }
        p.pos += 1;
    }
    let perm = p.perm()?;
    match p.bump() {
        Some(Tok::Lower(w)) if w == "fix" => {}
        _ => {
            p.pos -= 1;
            return Err(p.unexpected("`fix`"));
        }
    }
    let (line, col) = p.here();
    let target = p.term()?;
    p.finish()?;
    QuantifiedFixpoint::new(quantified, perm, target).map_err(|e| err(ParseErrorKind::Syntax, line, col, e.to_string()))
}

/// The contents of a problem file.
#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub sig: Signature,
    pub prec: Precedence,
    pub status: StatusMap,
    pub rules: Vec<RewriteRule>,
    pub terms: Vec<(String, Term)>,
}

impl ProblemFile {
    pub fn system(&self) -> Result<RewriteSystem> {
        RewriteSystem::new(self.sig.clone(), self.rules.clone())
    }

    pub fn crpo_config(&self) -> Result<CrpoConfig> {
        CrpoConfig::new(self.sig.clone(), self.prec.clone(), self.status.clone())
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

pub fn parse_problem(input: &str) -> Result<ProblemFile> {
    let mut file = ProblemFile::default();
    let mut rule_names: BTreeSet<String> = BTreeSet::new();
    for (i, text) in input.lines().enumerate() {
        let mut p = Parser::new(text, i + 1, None, true)?;
        let Some(Tok::Lower(keyword)) = p.peek().cloned() else {
            if p.peek().is_none() {
                continue;
            }
            return Err(p.unexpected("a declaration keyword"));
        };
        p.pos += 1;
        match keyword.as_str() {
            "sig" => {
                let (line, col) = p.here();
                let name = p.lower_word("a symbol name")?;
                p.expect(&Tok::Slash)?;
                let arity = match p.bump() {
                    Some(Tok::Number(n)) => n,
                    _ => {
                        p.pos -= 1;
                        return Err(p.unexpected("an arity"));
                    }
                };
                let commutative = match p.peek() {
                    Some(Tok::Lower(w)) if w == "comm" => {
                        p.pos += 1;
                        true
                    }
                    _ => false,
                };
                p.finish()?;
                file.sig
                    .declare(&name, arity, commutative)
                    .map_err(|e| err(ParseErrorKind::Syntax, line, col, e.to_string()))?;
            }
            "prec" => {
                p.sig = Some(&file.sig);
                let mut chain = vec![declared(&mut p)?];
                while p.eat(&Tok::Gt) {
                    chain.push(declared(&mut p)?);
                }
                p.finish()?;
                let (line, col) = (i + 1, 1);
                file.prec.add_chain(&chain).map_err(|e| err(ParseErrorKind::Syntax, line, col, e.to_string()))?;
            }
            "status" => {
                p.sig = Some(&file.sig);
                let f = declared(&mut p)?;
                let status = match p.lower_word("`lex` or `mul`")?.as_str() {
                    "lex" => Status::Lex,
                    "mul" => Status::Mul,
                    _ => {
                        p.pos -= 1;
                        return Err(p.unexpected("`lex` or `mul`"));
                    }
                };
                p.finish()?;
                file.status.insert(f, status);
            }
            "rule" => {
                let (line, col) = p.here();
                let name = p.lower_word("a rule name")?;
                p.expect(&Tok::Colon)?;
                if !rule_names.insert(name.clone()) {
                    return Err(err(ParseErrorKind::Syntax, line, col, format!("duplicate rule `{name}`")));
                }
                p.sig = Some(&file.sig);
                let ctx = if p.starts_ctx() {
                    let ctx = p.ctx()?;
                    p.expect(&Tok::Turnstile)?;
                    ctx
                } else {
                    FreshnessContext::new()
                };
                let lhs = p.term()?;
                p.expect(&Tok::Arrow)?;
                let rhs = p.term()?;
                p.finish()?;
                let rule = RewriteRule::new(name, ctx, lhs, rhs)
                    .map_err(|e| err(ParseErrorKind::Syntax, line, col, e.to_string()))?;
                file.rules.push(rule);
            }
            "term" => {
                let (line, col) = p.here();
                let name = p.lower_word("a term name")?;
                p.expect(&Tok::Colon)?;
                if file.term(&name).is_some() {
                    return Err(err(ParseErrorKind::Syntax, line, col, format!("duplicate term `{name}`")));
                }
                p.sig = Some(&file.sig);
                let t = p.term()?;
                p.finish()?;
                file.terms.push((name, t));
            }
            other => {
                p.pos -= 1;
                return Err(p.error(ParseErrorKind::Syntax, format!("unknown declaration `{other}`")));
            }
        }
    }
    Ok(file)
}

fn declared(p: &mut Parser<'_>) -> Result<Symbol> {
    let name = p.lower_word("a symbol")?;
    if !p.is_symbol(&name) {
        p.pos -= 1;
        return Err(p.error(ParseErrorKind::UnknownSymbol, format!("symbol `{name}` is not declared")));
    }
    Ok(Symbol::new(name))
}
