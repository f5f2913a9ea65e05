//! Finite permutations of atoms.
//!
//! A [`Perm`] is stored as the sorted list of atoms it moves together with
//! their images, so two equal permutations always have identical
//! representations. Cycles are derived on demand in canonical form: each
//! cycle starts at its least atom and cycles are sorted by that atom.
//!
//! Composition is function composition: `p.compose(&q)` applies `q` first.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::term::{Atom, Term};

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    // (a, π(a)) for every moved atom, sorted by a
    map: Vec<(Atom, Atom)>,
}

impl Perm {
    pub fn identity() -> Self {
        Perm { map: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// The transposition `(a b)`; the identity when `a == b`.
    pub fn swap(a: Atom, b: Atom) -> Self {
        if a == b {
            return Perm::identity();
        }
        Perm::from_pairs(vec![(a.clone(), b.clone()), (b, a)])
    }

    /// The cycle `(a1 a2 … an)` sending each atom to the next one.
    pub fn cycle(atoms: &[Atom]) -> Result<Self> {
        let distinct: BTreeSet<&Atom> = atoms.iter().collect();
        if distinct.len() != atoms.len() {
            let shown: Vec<&str> = atoms.iter().map(Atom::name).collect();
            return Err(Error::Permutation(format!("cycle ({}) repeats an atom", shown.join(" "))));
        }
        let n = atoms.len();
        Ok(Perm::from_pairs((0..n).map(|i| (atoms[i].clone(), atoms[(i + 1) % n].clone())).collect()))
    }

    /// Product of cycles read as a composition, rightmost applied first.
    /// The cycles need not be disjoint.
    pub fn from_cycles(cycles: &[Vec<Atom>]) -> Result<Self> {
        cycles.iter().try_fold(Perm::identity(), |acc, c| Ok(acc.compose(&Perm::cycle(c)?)))
    }

    /// The permutation sending each `a` to `b` for `(a, b)` in `pairs` and
    /// fixing every other atom. Fails unless the pairs describe a bijection
    /// of their domain.
    pub fn from_mapping(pairs: Vec<(Atom, Atom)>) -> Result<Self> {
        let domain: BTreeSet<&Atom> = pairs.iter().map(|(a, _)| a).collect();
        let range: BTreeSet<&Atom> = pairs.iter().map(|(_, b)| b).collect();
        if domain.len() != pairs.len() || domain != range {
            return Err(Error::Permutation("mapping is not a bijection of its domain".into()));
        }
        Ok(Perm::from_pairs(pairs))
    }

    fn from_pairs(mut pairs: Vec<(Atom, Atom)>) -> Self {
        pairs.retain(|(a, b)| a != b);
        pairs.sort_by(|x, y| x.0.cmp(&y.0));
        Perm { map: pairs }
    }

    /// `(a, π(a))` for every atom moved by the permutation, in atom order.
    pub fn mapping(&self) -> impl Iterator<Item = (&Atom, &Atom)> {
        self.map.iter().map(|(a, b)| (a, b))
    }

    pub fn apply<'a>(&'a self, a: &'a Atom) -> &'a Atom {
        match self.map.binary_search_by(|(k, _)| k.cmp(a)) {
            Ok(i) => &self.map[i].1,
            Err(_) => a,
        }
    }

    /// `π⁻¹(a)` without building the inverse.
    pub fn apply_inverse<'a>(&'a self, a: &'a Atom) -> &'a Atom {
        self.map.iter().find(|(_, b)| b == a).map_or(a, |(k, _)| k)
    }

    pub fn moves(&self, a: &Atom) -> bool {
        self.map.binary_search_by(|(k, _)| k.cmp(a)).is_ok()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        // both key lists are sorted, so their merge is the sorted domain
        let domain = self.map.iter().map(|(a, _)| a).merge(other.map.iter().map(|(a, _)| a)).dedup();
        let map: Vec<(Atom, Atom)> = domain
            .filter_map(|a| {
                let b = self.apply(other.apply(a));
                (a != b).then(|| (a.clone(), b.clone()))
            })
            .collect();
        Perm { map }
    }

    pub fn inverse(&self) -> Perm {
        Perm::from_pairs(self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect())
    }

    /// The atoms moved by the permutation.
    pub fn support(&self) -> BTreeSet<Atom> {
        self.map.iter().map(|(a, _)| a.clone()).collect()
    }

    /// Canonical disjoint-cycle decomposition.
    pub fn cycles(&self) -> Vec<Vec<Atom>> {
        let mut seen: BTreeSet<&Atom> = BTreeSet::new();
        let mut cycles = Vec::new();
        // keys are sorted, so each new cycle starts at its least atom and
        // cycles come out sorted by their first atom
        for (start, _) in &self.map {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            seen.insert(start);
            let mut cur = self.apply(start);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur.clone());
                cur = self.apply(cur);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Splits the permutation into the cycles that meet `quantified` and
    /// the cycles that do not. The two parts have disjoint supports and
    /// their composition (in either order) is `self`.
    pub fn factorize(&self, quantified: &BTreeSet<Atom>) -> (Perm, Perm) {
        let mut meeting = Vec::new();
        let mut rest = Vec::new();
        for cycle in self.cycles() {
            let target = if cycle.iter().any(|a| quantified.contains(a)) { &mut meeting } else { &mut rest };
            let n = cycle.len();
            target.extend((0..n).map(|i| (cycle[i].clone(), cycle[(i + 1) % n].clone())));
        }
        (Perm::from_pairs(meeting), Perm::from_pairs(rest))
    }

    /// `rho ∘ self ∘ rho⁻¹`: the same cycle structure with every atom
    /// renamed by `rho`.
    pub fn conjugate(&self, rho: &Perm) -> Perm {
        Perm::from_pairs(self.map.iter().map(|(a, b)| (rho.apply(a).clone(), rho.apply(b).clone())).collect())
    }

    /// The permutation action on terms. It renames binders as well as free
    /// atoms, and composes onto suspensions: `π·(π'·X) = (π∘π')·X`.
    pub fn act(&self, t: &Term) -> Term {
        if self.is_identity() {
            return t.clone();
        }
        self.act_nonidentity(t)
    }

    fn act_nonidentity(&self, t: &Term) -> Term {
        match t {
            Term::Atom(a) => Term::Atom(self.apply(a).clone()),
            Term::Susp(p, x) => Term::Susp(self.compose(p), x.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.act_nonidentity(a)).collect()),
            Term::Abs(a, body) => Term::Abs(self.apply(a).clone(), Box::new(self.act_nonidentity(body))),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (i, a) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
