//! Freshness judgments and N-quantified permutation fixed-point constraints.
//!
//! Freshness `a # t` is decided by the usual syntax-directed rules against a
//! context of primitive constraints `a # X`. A fixed-point constraint
//! `π ∧ t` holds when `π·t` is α-equivalent to `t` modulo commutativity; its
//! quantified form `new c̄ in π fix t` asks this for all but finitely many
//! choices of the atoms `c̄`.
//!
//! The quantified check instantiates `c̄` with one tuple of fresh witnesses.
//! The checked predicate is equivariant, so every witness tuple outside the
//! atoms in play gives the same answer and one tuple decides the cofinite
//! quantifier. Fixed points of open terms are not decided; they can be
//! split symbolically and checked once the target is ground.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::term::{Atom, Signature, Term, Var};

/// A finite set of primitive constraints `a # X`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreshnessContext(BTreeSet<(Atom, Var)>);

impl FreshnessContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Atom, x: Var) -> bool {
        self.0.insert((a, x))
    }

    pub fn contains(&self, a: &Atom, x: &Var) -> bool {
        self.0.contains(&(a.clone(), x.clone()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Atom, Var)> {
        self.0.iter()
    }

    pub fn extend(&mut self, other: FreshnessContext) {
        self.0.extend(other.0);
    }

    /// Every primitive of `self` is also in `other`.
    pub fn is_entailed_by(&self, other: &FreshnessContext) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().map(|(_, x)| x.clone()).collect()
    }
}

impl FromIterator<(Atom, Var)> for FreshnessContext {
    fn from_iter<I: IntoIterator<Item = (Atom, Var)>>(iter: I) -> Self {
        FreshnessContext(iter.into_iter().collect())
    }
}

impl fmt::Display for FreshnessContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (a, x)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}#{x}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FreshnessContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Decides `ctx ⊢ a # t`.
pub fn derive_fresh(ctx: &FreshnessContext, a: &Atom, t: &Term) -> bool {
    match t {
        Term::Atom(b) => a != b,
        Term::Abs(b, body) => a == b || derive_fresh(ctx, a, body),
        Term::App(_, args) => args.iter().all(|u| derive_fresh(ctx, a, u)),
        Term::Susp(p, x) => ctx.contains(p.apply_inverse(a), x),
    }
}

/// Reduces `a # t` to the primitive constraints it needs, or `None` when it
/// can never hold (it reaches `a # a`).
pub fn fresh_constraints(a: &Atom, t: &Term) -> Option<FreshnessContext> {
    let mut out = FreshnessContext::new();
    reduce_fresh(a, t, &mut out).then_some(out)
}

fn reduce_fresh(a: &Atom, t: &Term, out: &mut FreshnessContext) -> bool {
    match t {
        Term::Atom(b) => a != b,
        Term::Abs(b, body) => a == b || reduce_fresh(a, body, out),
        Term::App(_, args) => args.iter().all(|u| reduce_fresh(a, u, out)),
        Term::Susp(p, x) => {
            out.insert(p.apply_inverse(a).clone(), x.clone());
            true
        }
    }
}

/// `new c̄ in π fix target`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuantifiedFixpoint {
    quantified: Vec<Atom>,
    perm: Perm,
    target: Term,
}

impl QuantifiedFixpoint {
    pub fn new(quantified: Vec<Atom>, perm: Perm, target: Term) -> Result<Self> {
        let distinct: BTreeSet<&Atom> = quantified.iter().collect();
        if distinct.len() != quantified.len() {
            return Err(Error::Constraint("quantified atoms must be pairwise distinct".into()));
        }
        Ok(QuantifiedFixpoint { quantified, perm, target })
    }

    /// An unquantified fixed-point constraint `π ∧ target`.
    pub fn plain(perm: Perm, target: Term) -> Self {
        QuantifiedFixpoint { quantified: Vec::new(), perm, target }
    }

    pub fn quantified(&self) -> &[Atom] {
        &self.quantified
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn target(&self) -> &Term {
        &self.target
    }

    fn quantified_set(&self) -> BTreeSet<Atom> {
        self.quantified.iter().cloned().collect()
    }

    /// Atoms a witness tuple must avoid.
    fn witness_avoid(&self) -> BTreeSet<Atom> {
        let mut avoid = self.target.free_atoms();
        avoid.extend(self.perm.support());
        avoid.extend(self.quantified.iter().cloned());
        avoid
    }
}

impl fmt::Display for QuantifiedFixpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.quantified.is_empty() {
            f.write_str("new")?;
            for c in &self.quantified {
                write!(f, " {c}")?;
            }
            f.write_str(" in ")?;
        }
        write!(f, "{} fix {}", self.perm, self.target)
    }
}

impl fmt::Debug for QuantifiedFixpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn require_ground(t: &Term) -> Result<()> {
    if t.is_ground() {
        Ok(())
    } else {
        Err(Error::OpenTerm(t.to_string()))
    }
}

/// `π ∧ t` on a ground term: `π·t ≈α,C t`.
pub fn check_fixpoint_ground(p: &Perm, t: &Term, sig: &Signature) -> Result<bool> {
    require_ground(t)?;
    Ok(p.is_identity() || permuted_eq(p, t, t, sig))
}

/// `π·t ≈α,C u` for ground terms, without building `π·t`.
fn permuted_eq(p: &Perm, t: &Term, u: &Term, sig: &Signature) -> bool {
    match (t, u) {
        (Term::Atom(a), Term::Atom(b)) => p.apply(a) == b,
        (Term::App(f, ts), Term::App(g, us)) => {
            if f != g || ts.len() != us.len() {
                return false;
            }
            ts.iter().zip(us).all(|(t, u)| permuted_eq(p, t, u, sig))
                || (sig.is_commutative(f) && permuted_eq(p, &ts[0], &us[1], sig) && permuted_eq(p, &ts[1], &us[0], sig))
        }
        (Term::Abs(a, t1), Term::Abs(b, u1)) => {
            let a2 = p.apply(a);
            if a2 == b {
                permuted_eq(p, t1, u1, sig)
            } else {
                derive_fresh(&FreshnessContext::new(), a2, u1)
                    && permuted_eq(&Perm::swap(a2.clone(), b.clone()).compose(p), t1, u1, sig)
            }
        }
        _ => false,
    }
}

/// Decides a quantified fixed-point constraint on a ground target using
/// generated witnesses.
pub fn check_quantified_fixpoint(c: &QuantifiedFixpoint, sig: &Signature) -> Result<bool> {
    require_ground(&c.target)?;
    let witnesses = Atom::fresh_many(&c.witness_avoid(), c.quantified.len());
    check_quantified_fixpoint_with(c, &witnesses, sig)
}

/// Same as [`check_quantified_fixpoint`] with caller-chosen witnesses, one
/// per quantified atom. Witnesses must be pairwise distinct and avoid the
/// free atoms of the target, the support of the permutation and the
/// quantified atoms themselves.
pub fn check_quantified_fixpoint_with(c: &QuantifiedFixpoint, witnesses: &[Atom], sig: &Signature) -> Result<bool> {
    require_ground(&c.target)?;
    if witnesses.len() != c.quantified.len() {
        return Err(Error::Constraint(format!("expected {} witness(es), got {}", c.quantified.len(), witnesses.len())));
    }
    let avoid = c.witness_avoid();
    let distinct: BTreeSet<&Atom> = witnesses.iter().collect();
    if distinct.len() != witnesses.len() || witnesses.iter().any(|w| avoid.contains(w)) {
        return Err(Error::Constraint("witnesses must be distinct fresh atoms".into()));
    }
    // rename each quantified atom to its witness inside the permutation
    let rho = c
        .quantified
        .iter()
        .zip(witnesses)
        .fold(Perm::identity(), |acc, (q, w)| Perm::swap(q.clone(), w.clone()).compose(&acc));
    let instantiated = c.perm.conjugate(&rho);
    check_fixpoint_ground(&instantiated, &c.target, sig)
}

/// `new c̄ in π fix X` into `new c̄ in π_c̄ fix X` and `π_¬c̄ fix X`, where
/// `π_c̄` collects the cycles of `π` that meet `c̄`.
pub fn split_fixpoint(c: &QuantifiedFixpoint) -> (QuantifiedFixpoint, QuantifiedFixpoint) {
    let (meeting, rest) = c.perm.factorize(&c.quantified_set());
    (
        QuantifiedFixpoint { quantified: c.quantified.clone(), perm: meeting, target: c.target.clone() },
        QuantifiedFixpoint::plain(rest, c.target.clone()),
    )
}

/// Semantic freshness of `a` for a ground term: `new c in (a c) fix t`.
pub fn fresh_as_fixpoint(a: &Atom, t: &Term, sig: &Signature) -> Result<bool> {
    // any atom outside fa(t) ∪ {a} is a valid witness for `c`, and
    // instantiating `(a c)` with it gives a single swap
    let w = t.ground_fresh_atom(&[a]).ok_or_else(|| Error::OpenTerm(t.to_string()))?;
    Ok(permuted_eq(&Perm::swap(a.clone(), w), t, t, sig))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(n: &str) -> Atom {
        Atom::new(n)
    }

    fn a(n: &str) -> Term {
        Term::atom(n)
    }

    fn cyc(names: &str) -> Perm {
        let atoms: Vec<Atom> = names.split_whitespace().map(Atom::new).collect();
        Perm::cycle(&atoms).unwrap()
    }

    fn sig() -> Signature {
        Signature::from_decls(&[("plus", 2, true), ("f", 2, false), ("g", 1, false)]).unwrap()
    }

    #[test]
    fn derive_fresh_examples() {
        let empty = FreshnessContext::new();
        assert!(derive_fresh(&empty, &at("a"), &Term::app("f", vec![a("b"), a("d")])));
        assert!(!derive_fresh(&empty, &at("a"), &a("a")));
        let ctx: FreshnessContext = [(at("b"), Var::new("X"))].into_iter().collect();
        assert!(derive_fresh(&ctx, &at("a"), &Term::susp(cyc("a b"), Var::new("X"))));
        assert!(!derive_fresh(&ctx, &at("a"), &Term::var("X")));
        assert!(derive_fresh(&empty, &at("a"), &Term::abs("a", Term::var("X"))));
    }

    #[test]
    fn fresh_constraints_reduce_to_primitives() {
        let t = Term::app("f", vec![Term::susp(cyc("a b"), Var::new("X")), Term::abs("c", Term::var("Y"))]);
        let got = fresh_constraints(&at("a"), &t).unwrap();
        let want: FreshnessContext = [(at("b"), Var::new("X")), (at("a"), Var::new("Y"))].into_iter().collect();
        assert_eq!(got, want);
        assert_eq!(fresh_constraints(&at("a"), &Term::app("g", vec![a("a")])), None);
        assert_eq!(fresh_constraints(&at("a"), &Term::abs("a", a("a"))), Some(FreshnessContext::new()));
    }

    #[test]
    fn ground_fixpoint_examples() {
        let s = sig();
        let plus_ab = Term::app("plus", vec![a("a"), a("b")]);
        assert!(check_fixpoint_ground(&cyc("a b"), &plus_ab, &s).unwrap());
        assert!(check_fixpoint_ground(&Perm::identity(), &Term::app("g", vec![a("c")]), &s).unwrap());
        assert!(!check_fixpoint_ground(&cyc("a b"), &Term::app("g", vec![a("a")]), &s).unwrap());
        assert!(matches!(check_fixpoint_ground(&cyc("a b"), &Term::var("X"), &s), Err(Error::OpenTerm(_))));
    }

    #[test]
    fn quantified_fixpoint_examples() {
        let s = sig();
        let fbd = Term::app("f", vec![a("b"), a("d")]);
        let c = QuantifiedFixpoint::new(vec![at("c")], cyc("a c"), fbd).unwrap();
        assert!(check_quantified_fixpoint(&c, &s).unwrap());
        let c = QuantifiedFixpoint::new(vec![at("c")], cyc("a c"), a("a")).unwrap();
        assert!(!check_quantified_fixpoint(&c, &s).unwrap());
        let open = QuantifiedFixpoint::new(vec![at("c")], cyc("a c"), Term::var("X")).unwrap();
        assert!(check_quantified_fixpoint(&open, &s).is_err());
    }

    #[test]
    fn worked_example_is_the_conjunction_of_its_split() {
        let s = sig();
        let p = cyc("a c1 d").compose(&cyc("e f")).compose(&cyc("g c2"));
        let targets = [
            Term::app("f", vec![a("e"), a("f")]),
            Term::app("plus", vec![a("e"), a("f")]),
            Term::app("g", vec![a("a")]),
            Term::app("g", vec![a("b")]),
            Term::abs("a", Term::app("plus", vec![a("e"), a("f")])),
        ];
        for t in targets {
            let c = QuantifiedFixpoint::new(vec![at("c1"), at("c2")], p.clone(), t).unwrap();
            let (first, second) = split_fixpoint(&c);
            let whole = check_quantified_fixpoint(&c, &s).unwrap();
            let parts =
                check_quantified_fixpoint(&first, &s).unwrap() && check_quantified_fixpoint(&second, &s).unwrap();
            assert_eq!(whole, parts, "{c}");
        }
    }

    #[test]
    fn split_examples() {
        let p = cyc("a c1 d").compose(&cyc("e f")).compose(&cyc("g c2"));
        let c = QuantifiedFixpoint::new(vec![at("c1"), at("c2")], p, Term::var("X")).unwrap();
        let (first, second) = split_fixpoint(&c);
        assert_eq!(first.quantified(), &[at("c1"), at("c2")]);
        assert_eq!(first.perm().to_string(), "(a c1 d)(g c2)");
        assert!(second.quantified().is_empty());
        assert_eq!(second.perm().to_string(), "(e f)");

        let c = QuantifiedFixpoint::plain(cyc("a b"), Term::var("X"));
        let (first, second) = split_fixpoint(&c);
        assert!(first.perm().is_identity());
        assert_eq!(second.perm(), &cyc("a b"));

        let c = QuantifiedFixpoint::new(vec![at("c")], cyc("a c"), Term::var("X")).unwrap();
        let (first, second) = split_fixpoint(&c);
        assert_eq!(first.perm(), &cyc("a c"));
        assert_eq!(first.quantified(), &[at("c")]);
        assert!(second.perm().is_identity());
    }

    #[test]
    fn fresh_as_fixpoint_examples() {
        let s = sig();
        assert!(fresh_as_fixpoint(&at("a"), &Term::app("f", vec![a("b"), a("d")]), &s).unwrap());
        assert!(!fresh_as_fixpoint(&at("a"), &a("a"), &s).unwrap());
        assert!(fresh_as_fixpoint(&at("a"), &Term::abs("a", a("a")), &s).unwrap());
    }

    #[test]
    fn commutativity_counterexample() {
        let s = sig();
        let plus_ab = Term::app("plus", vec![a("a"), a("b")]);
        assert!(check_fixpoint_ground(&cyc("a b"), &plus_ab, &s).unwrap());
        assert!(!fresh_as_fixpoint(&at("a"), &plus_ab, &s).unwrap());
        assert!(!fresh_as_fixpoint(&at("b"), &plus_ab, &s).unwrap());
    }

    #[test]
    fn witnesses_are_validated() {
        let s = sig();
        let c = QuantifiedFixpoint::new(vec![at("c")], cyc("a c"), Term::app("g", vec![a("b")])).unwrap();
        assert!(check_quantified_fixpoint_with(&c, &[at("z")], &s).unwrap());
        assert!(check_quantified_fixpoint_with(&c, &[at("b")], &s).is_err());
        assert!(check_quantified_fixpoint_with(&c, &[at("a")], &s).is_err());
        assert!(check_quantified_fixpoint_with(&c, &[], &s).is_err());
        assert!(QuantifiedFixpoint::new(vec![at("c"), at("c")], Perm::identity(), a("a")).is_err());
    }

    #[test]
    fn lazy_fixpoint_check_matches_explicit_action() {
        use crate::oracle::{enum_ground_terms, enum_perms, EnumConfig};
        let s = sig();
        let terms = enum_ground_terms(&EnumConfig::new(s.clone(), &["a", "b", "c"], 2, true));
        let perms = enum_perms(&["a", "b", "c"].iter().map(Atom::new).collect()).unwrap();
        let empty = FreshnessContext::new();
        for t in terms.iter().step_by(5) {
            for p in &perms {
                let explicit = crate::equiv::c_alpha_eq(&empty, &p.act(t), t, &s);
                assert_eq!(check_fixpoint_ground(p, t, &s).unwrap(), explicit, "{p} fix {t}");
            }
            for a in ["a", "b", "d"].map(Atom::new) {
                let c = Atom::new("c9");
                let q = QuantifiedFixpoint::new(vec![c.clone()], Perm::swap(a.clone(), c), t.clone()).unwrap();
                assert_eq!(fresh_as_fixpoint(&a, t, &s).unwrap(), check_quantified_fixpoint(&q, &s).unwrap());
            }
        }
    }
}
