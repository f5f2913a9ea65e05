//! Atoms, unknowns, signatures and nominal terms.
//!
//! A term is an atom `a`, a suspension `π·X` (a permutation waiting to act on
//! whatever `X` is instantiated to), an application `f(t1, …, tn)` or an
//! atom abstraction `[a]t`. Terms are plain immutable values; equality is
//! structural. α-equivalence lives in [`crate::equiv`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// An object-level name. Atoms can be bound by abstractions but never
/// instantiated.
///
/// Atoms are ordered shortlex (shorter names first, then lexicographically),
/// which is the order canonical permutation cycles are written in.
#[derive(Clone, Eq)]
pub struct Atom(Arc<str>);

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Atom {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Self {
        Atom(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The first generated atom not in `avoid`.
    pub fn fresh(avoid: &BTreeSet<Atom>) -> Atom {
        FreshAtoms::new(avoid).next().expect("atom supply is infinite")
    }

    /// `n` pairwise distinct atoms, none of them in `avoid`.
    pub fn fresh_many(avoid: &BTreeSet<Atom>, n: usize) -> Vec<Atom> {
        FreshAtoms::new(avoid).take(n).collect()
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Infinite supply of atoms `n0, n1, …` skipping an avoid-set.
pub struct FreshAtoms<'a> {
    avoid: &'a BTreeSet<Atom>,
    next: usize,
}

impl<'a> FreshAtoms<'a> {
    pub fn new(avoid: &'a BTreeSet<Atom>) -> Self {
        FreshAtoms { avoid, next: 0 }
    }
}

impl Iterator for FreshAtoms<'_> {
    type Item = Atom;

    fn next(&mut self) -> Option<Atom> {
        loop {
            let candidate = generated_atom(self.next);
            self.next += 1;
            if !self.avoid.contains(&candidate) {
                return Some(candidate);
            }
        }
    }
}

const CACHED_NAMES: usize = 64;

thread_local! {
    static GENERATED: Vec<Atom> = (0..CACHED_NAMES).map(|i| Atom::new(format!("n{i}"))).collect();
}

/// The `i`-th generated atom `n{i}`.
fn generated_atom(i: usize) -> Atom {
    if i < CACHED_NAMES {
        GENERATED.with(|names| names[i].clone())
    } else {
        Atom::new(format!("n{i}"))
    }
}

/// The index `i` when `a` is the generated atom `n{i}`.
fn generated_index(a: &Atom) -> Option<usize> {
    let digits = a.name().strip_prefix('n')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0'))
    {
        return None;
    }
    digits.parse().ok()
}

fn mark(used: &mut u64, a: &Atom) {
    if let Some(i) = generated_index(a).filter(|&i| i < 64) {
        *used |= 1 << i;
    }
}

/// A meta-level unknown. Unknowns can be instantiated but never bound.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A function symbol name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolInfo {
    pub arity: usize,
    pub commutative: bool,
}

/// Declared function symbols. A commutative symbol must be binary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<Symbol, SymbolInfo>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature from `(name, arity, commutative)` triples.
    pub fn from_decls(decls: &[(&str, usize, bool)]) -> Result<Self> {
        let mut sig = Signature::new();
        for &(name, arity, comm) in decls {
            sig.declare(name, arity, comm)?;
        }
        Ok(sig)
    }

    pub fn declare(&mut self, name: &str, arity: usize, commutative: bool) -> Result<()> {
        if commutative && arity != 2 {
            return Err(Error::Signature(format!("commutative symbol `{name}` must be binary, not {arity}-ary")));
        }
        let sym = Symbol::new(name);
        if self.symbols.contains_key(&sym) {
            return Err(Error::Signature(format!("symbol `{name}` declared twice")));
        }
        self.symbols.insert(sym, SymbolInfo { arity, commutative });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<SymbolInfo> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn is_commutative(&self, sym: &Symbol) -> bool {
        self.symbols.get(sym).is_some_and(|i| i.commutative)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, SymbolInfo)> {
        self.symbols.iter().map(|(s, i)| (s, *i))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Checks that every application in `t` uses a declared symbol at its
    /// declared arity.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Atom(_) | Term::Susp(..) => Ok(()),
            Term::Abs(_, body) => self.check_term(body),
            Term::App(f, args) => {
                let info = self.symbols.get(f).ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
                if info.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.to_string(),
                        expected: info.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A path of child indices. `App` children are numbered from 0; an
/// abstraction has its body at index 0.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut path = self.0.clone();
        path.push(i);
        Position(path)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(Atom),
    /// `π·X`; the bare unknown `X` is `Susp(id, X)`.
    Susp(Perm, Var),
    App(Symbol, Vec<Term>),
    Abs(Atom, Box<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Susp(Perm::identity(), Var::new(name))
    }

    pub fn susp(perm: Perm, var: Var) -> Term {
        Term::Susp(perm, var)
    }

    pub fn app(sym: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(sym), args)
    }

    pub fn constant(sym: &str) -> Term {
        Term::App(Symbol::new(sym), Vec::new())
    }

    pub fn abs(atom: &str, body: Term) -> Term {
        Term::Abs(Atom::new(atom), Box::new(body))
    }

    /// Atoms occurring unbound. For a suspension every atom moved by its
    /// permutation is counted, so the result over-approximates the free
    /// atoms of every instance; it is exact on ground terms.
    pub fn free_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'t>(&'t self, bound: &mut Vec<&'t Atom>, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                if !bound.contains(&a) {
                    out.insert(a.clone());
                }
            }
            Term::Susp(p, _) => {
                for (a, _) in p.mapping() {
                    if !bound.contains(&a) {
                        out.insert(a.clone());
                    }
                }
            }
            Term::App(_, args) => {
                for arg in args {
                    arg.collect_free(bound, out);
                }
            }
            Term::Abs(a, body) => {
                bound.push(a);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// The first generated atom that occurs nowhere in the term, neither
    /// free nor bound, and differs from every atom in `extra`. Cheaper than
    /// building an avoid-set for small terms.
    pub fn fresh_atom(&self, extra: &[&Atom]) -> Atom {
        let mut used = 0u64;
        self.mark_generated(&mut used);
        self.fresh_atom_from(used, extra)
    }

    /// [`Term::fresh_atom`] for ground terms, in the same traversal as the
    /// groundness check. `None` when the term contains an unknown.
    pub fn ground_fresh_atom(&self, extra: &[&Atom]) -> Option<Atom> {
        let mut used = 0u64;
        self.mark_generated(&mut used).then(|| self.fresh_atom_from(used, extra))
    }

    fn fresh_atom_from(&self, mut used: u64, extra: &[&Atom]) -> Atom {
        for a in extra {
            mark(&mut used, a);
        }
        if used != u64::MAX {
            return generated_atom(used.trailing_ones() as usize);
        }
        let mut avoid = self.all_atoms();
        avoid.extend(extra.iter().map(|a| (*a).clone()));
        Atom::fresh(&avoid)
    }

    /// Sets bit `i` of `used` for every generated atom `n{i}` with `i < 64`
    /// and returns whether the term is ground.
    fn mark_generated(&self, used: &mut u64) -> bool {
        match self {
            Term::Atom(a) => {
                mark(used, a);
                true
            }
            Term::Susp(p, _) => {
                p.mapping().for_each(|(a, _)| mark(used, a));
                false
            }
            Term::App(_, args) => {
                // every argument must be visited, so no short-circuiting
                let mut ground = true;
                for t in args {
                    ground &= t.mark_generated(used);
                }
                ground
            }
            Term::Abs(a, body) => {
                mark(used, a);
                body.mark_generated(used)
            }
        }
    }

    /// Every atom mentioned anywhere, bound or free, including the atoms of
    /// suspension permutations. Useful as an avoid-set.
    pub fn all_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_all_atoms(&mut out);
        out
    }

    fn collect_all_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                out.insert(a.clone());
            }
            Term::Susp(p, _) => out.extend(p.support()),
            Term::App(_, args) => args.iter().for_each(|t| t.collect_all_atoms(out)),
            Term::Abs(a, body) => {
                out.insert(a.clone());
                body.collect_all_atoms(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Atom(_) => {}
            Term::Susp(_, x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Term::Abs(_, body) => body.collect_vars(out),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Atom(_) => true,
            Term::Susp(..) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
            Term::Abs(_, body) => body.is_ground(),
        }
    }

    /// Atoms, suspensions and constants have depth 0; every other node adds
    /// one to the deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
            Term::Abs(_, body) => body.depth() + 1,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Abs(_, body) => 1 + body.size(),
        }
    }

    fn child(&self, i: usize) -> Option<&Term> {
        match self {
            Term::App(_, args) => args.get(i),
            Term::Abs(_, body) if i == 0 => Some(body),
            _ => None,
        }
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Result<&Term> {
        let mut cur = self;
        for (depth, &i) in pos.iter().enumerate() {
            cur = cur.child(i).ok_or_else(|| Error::InvalidPosition(Position(pos[..=depth].to_vec()).to_string()))?;
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &[usize], replacement: Term) -> Result<Term> {
        let Some((&i, rest)) = pos.split_first() else {
            return Ok(replacement);
        };
        let invalid = || Error::InvalidPosition(Position(pos.to_vec()).to_string());
        match self {
            Term::App(f, args) if i < args.len() => {
                let mut args = args.clone();
                args[i] = args[i].replace_at(rest, replacement).map_err(|_| invalid())?;
                Ok(Term::App(f.clone(), args))
            }
            Term::Abs(a, body) if i == 0 => {
                let body = body.replace_at(rest, replacement).map_err(|_| invalid())?;
                Ok(Term::Abs(a.clone(), Box::new(body)))
            }
            _ => Err(invalid()),
        }
    }

    /// All positions in pre-order: a node before its children, children
    /// left to right.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        match self {
            Term::App(_, args) => {
                for (i, arg) in args.iter().enumerate() {
                    path.push(i);
                    arg.collect_positions(path, out);
                    path.pop();
                }
            }
            Term::Abs(_, body) => {
                path.push(0);
                body.collect_positions(path, out);
                path.pop();
            }
            _ => {}
        }
    }

    /// Proper subterms, pre-order.
    pub fn proper_subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn walk<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
            match t {
                Term::App(_, args) => {
                    for a in args {
                        out.push(a);
                        walk(a, out);
                    }
                }
                Term::Abs(_, body) => {
                    out.push(body);
                    walk(body, out);
                }
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite map from unknowns to terms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: Var, t: Term) -> Option<Term> {
        self.0.insert(x, t)
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    /// Instantiates `t`. `π·X` becomes `π·σ(X)`; no renaming happens under
    /// binders, so atoms in images may be captured.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Atom(_) => t.clone(),
            Term::Susp(p, x) => match self.0.get(x) {
                Some(img) => p.act(img),
                None => t.clone(),
            },
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
            Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(self.apply(body))),
        }
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
