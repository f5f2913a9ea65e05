//! A recursive path ordering on ground nominal terms that is compatible
//! with `≈α,C`, and a termination check that orients rules on finitely many
//! ground instances.
//!
//! The order, for ground `t` and `u`, with `≥` meaning `>` or `≈α,C`:
//!
//! * atoms are minimal and mutually incomparable; every application and
//!   every abstraction is above every atom;
//! * `f(ts) > u` if some `ti ≥ u`;
//! * `f(ts) > g(us)` if `f ≻ g` and `f(ts) > uj` for all `j`;
//! * `f(ts) > f(us)` if `ts` beats `us` in the status extension of `f` and
//!   `f(ts) > uj` for all `j`;
//! * abstractions sit below every function symbol: `f(ts) > [b]u'` also
//!   holds when `f(ts) > u'` with `b` renamed to a fresh atom;
//! * `[a]t' > u` if `(a x)·t' ≥ u` for some atom `x` not free in `[a]t'`,
//!   which covers the body itself (`x = a`) and every α-variant of it;
//! * `[a]t' > [b]u'` also holds if `(a c)·t' > (b c)·u'` for a common fresh
//!   atom `c`.
//!
//! Commutative symbols must have multiset status, which makes the order
//! blind to argument order there.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::constraint::{derive_fresh, FreshnessContext};
use crate::equiv::c_alpha_eq;
use crate::error::{Error, Result};
use crate::oracle::EnumConfig;
use crate::perm::Perm;
use crate::rewrite::RewriteSystem;
use crate::term::{Atom, Signature, Substitution, Symbol, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Lex,
    Mul,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Lex => "lex",
            Status::Mul => "mul",
        })
    }
}

/// A strict partial order on symbols, kept transitively closed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Precedence {
    gt: BTreeSet<(Symbol, Symbol)>,
}

impl Precedence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a precedence from chains such as `["f", "g", "h"]`, read as
    /// `f ≻ g ≻ h`.
    pub fn from_chains(chains: &[&[&str]]) -> Result<Self> {
        let mut prec = Precedence::new();
        for chain in chains {
            let syms: Vec<Symbol> = chain.iter().map(Symbol::new).collect();
            prec.add_chain(&syms)?;
        }
        Ok(prec)
    }

    pub fn add_chain(&mut self, chain: &[Symbol]) -> Result<()> {
        for w in chain.windows(2) {
            self.add(w[0].clone(), w[1].clone())?;
        }
        Ok(())
    }

    /// Adds `f ≻ g` and closes transitively. Fails on a cycle.
    pub fn add(&mut self, f: Symbol, g: Symbol) -> Result<()> {
        if f == g || self.gt(&g, &f) {
            return Err(Error::Config(format!("precedence `{f} > {g}` creates a cycle")));
        }
        let above: Vec<Symbol> = self.gt.iter().filter(|(_, y)| *y == f).map(|(x, _)| x.clone()).collect();
        let below: Vec<Symbol> = self.gt.iter().filter(|(x, _)| *x == g).map(|(_, y)| y.clone()).collect();
        for x in above.iter().chain(std::iter::once(&f)) {
            for y in below.iter().chain(std::iter::once(&g)) {
                self.gt.insert((x.clone(), y.clone()));
            }
        }
        Ok(())
    }

    pub fn gt(&self, f: &Symbol, g: &Symbol) -> bool {
        self.gt.contains(&(f.clone(), g.clone()))
    }

    pub fn mentions(&self, f: &Symbol) -> bool {
        self.gt.iter().any(|(x, y)| x == f || y == f)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.gt.iter().map(|(x, y)| (x, y))
    }
}

pub type StatusMap = BTreeMap<Symbol, Status>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrpoConfig {
    pub sig: Signature,
    pub prec: Precedence,
    pub status: StatusMap,
}

impl CrpoConfig {
    /// Checks that the precedence and statuses only mention declared
    /// symbols, that every symbol of arity two or more has a status, and
    /// that commutative symbols have multiset status. Symbols of smaller
    /// arity default to lexicographic status, which coincides with
    /// multiset status for them.
    pub fn new(sig: Signature, prec: Precedence, status: StatusMap) -> Result<Self> {
        for (f, g) in prec.pairs() {
            for s in [f, g] {
                if !sig.contains(s.name()) {
                    return Err(Error::Config(format!("precedence mentions undeclared symbol `{s}`")));
                }
            }
        }
        for (f, st) in &status {
            if !sig.contains(f.name()) {
                return Err(Error::Config(format!("status given for undeclared symbol `{f}`")));
            }
            if sig.is_commutative(f) && *st != Status::Mul {
                return Err(Error::Config(format!("commutative symbol `{f}` must have status mul")));
            }
        }
        for (f, info) in sig.symbols() {
            if info.arity >= 2 && !status.contains_key(f) {
                return Err(Error::Config(format!("symbol `{f}` has no status")));
            }
        }
        Ok(CrpoConfig { sig, prec, status })
    }

    pub fn status_of(&self, f: &Symbol) -> Status {
        self.status.get(f).copied().unwrap_or(Status::Lex)
    }
}

/// `t >Crpo u` for ground terms.
pub fn crpo_gt(cfg: &CrpoConfig, t: &Term, u: &Term) -> Result<bool> {
    require_ground(t)?;
    require_ground(u)?;
    Ok(Crpo::new(cfg).gt(t, u))
}

/// `t >Crpo u` or `t ≈α,C u`, for ground terms.
pub fn crpo_ge(cfg: &CrpoConfig, t: &Term, u: &Term) -> Result<bool> {
    require_ground(t)?;
    require_ground(u)?;
    Ok(Crpo::new(cfg).ge(t, u))
}

/// The lexicographic or multiset extension of the order to sequences of
/// ground terms, with element equality taken modulo `≈α,C`.
pub fn ext_compare(cfg: &CrpoConfig, kind: Status, ts: &[Term], us: &[Term]) -> Result<bool> {
    for t in ts.iter().chain(us) {
        require_ground(t)?;
    }
    let ord = Crpo::new(cfg);
    Ok(match kind {
        Status::Lex => ord.lex(ts, us),
        Status::Mul => ord.mul(ts, us),
    })
}

fn require_ground(t: &Term) -> Result<()> {
    if t.is_ground() {
        Ok(())
    } else {
        Err(Error::OpenTerm(t.to_string()))
    }
}

struct Crpo<'c> {
    cfg: &'c CrpoConfig,
    /// Results for compound pairs; the recursion revisits them
    /// exponentially often otherwise. Only used once a query has made
    /// `MEMO_AFTER` calls, since small queries are faster without it.
    memo: RefCell<HashMap<(Term, Term), bool>>,
    calls: Cell<usize>,
}

const MEMO_AFTER: usize = 128;

impl<'c> Crpo<'c> {
    fn new(cfg: &'c CrpoConfig) -> Self {
        Crpo { cfg, memo: RefCell::new(HashMap::new()), calls: Cell::new(0) }
    }

    fn eq(&self, t: &Term, u: &Term) -> bool {
        c_alpha_eq(&FreshnessContext::new(), t, u, &self.cfg.sig)
    }

    fn ge(&self, t: &Term, u: &Term) -> bool {
        self.eq(t, u) || self.gt(t, u)
    }

    fn gt(&self, t: &Term, u: &Term) -> bool {
        match (t, u) {
            (Term::Atom(_), _) => false,
            (_, Term::Atom(_)) => true,
            _ => {
                self.calls.set(self.calls.get() + 1);
                if self.calls.get() < MEMO_AFTER {
                    return self.gt_compound(t, u);
                }
                let key = (t.clone(), u.clone());
                if let Some(&known) = self.memo.borrow().get(&key) {
                    return known;
                }
                let result = self.gt_compound(t, u);
                self.memo.borrow_mut().insert(key, result);
                result
            }
        }
    }

    fn gt_compound(&self, t: &Term, u: &Term) -> bool {
        match (t, u) {
            (Term::Atom(_), _) | (_, Term::Atom(_)) => unreachable!("handled by gt"),
            (Term::App(f, ts), _) => {
                if ts.iter().any(|ti| self.ge(ti, u)) {
                    return true;
                }
                match u {
                    Term::App(g, us) => {
                        let head = if f == g {
                            match self.cfg.status_of(f) {
                                Status::Lex => self.lex(ts, us),
                                Status::Mul => self.mul(ts, us),
                            }
                        } else {
                            self.cfg.prec.gt(f, g)
                        };
                        head && us.iter().all(|uj| self.gt(t, uj))
                    }
                    Term::Abs(b, body) => {
                        let c = fresh_for(&[t, u]);
                        self.gt(t, &rename(b, &c, body))
                    }
                    _ => false,
                }
            }
            (Term::Abs(a, body), _) => {
                if self.some_instance_ge(t, a, body, u) {
                    return true;
                }
                match u {
                    Term::Abs(b, ubody) => {
                        let c = fresh_for(&[t, u]);
                        self.gt(&rename(a, &c, body), &rename(b, &c, ubody))
                    }
                    _ => false,
                }
            }
            (Term::Susp(..), _) => unreachable!("ground terms only"),
        }
    }

    /// Whether `(a x)·body ≥ u` for an atom `x` not free in `t = [a]body`.
    /// Atoms outside `fa(t) ∪ fa(u)` all behave alike, so one fresh
    /// representative suffices.
    fn some_instance_ge(&self, t: &Term, a: &Atom, body: &Term, u: &Term) -> bool {
        let free_t = t.free_atoms();
        let mut candidates: Vec<Atom> = u.free_atoms().difference(&free_t).cloned().collect();
        candidates.push(fresh_for(&[t, u]));
        candidates.iter().any(|x| self.ge(&rename(a, x, body), u))
    }

    fn lex(&self, ts: &[Term], us: &[Term]) -> bool {
        for (t, u) in ts.iter().zip(us) {
            if !self.eq(t, u) {
                return self.gt(t, u);
            }
        }
        ts.len() > us.len()
    }

    fn mul(&self, ts: &[Term], us: &[Term]) -> bool {
        let mut left: Vec<&Term> = ts.iter().collect();
        let mut right: Vec<&Term> = Vec::new();
        for u in us {
            match left.iter().position(|t| self.eq(t, u)) {
                Some(i) => {
                    left.remove(i);
                }
                None => right.push(u),
            }
        }
        !left.is_empty() && right.iter().all(|u| left.iter().any(|t| self.gt(t, u)))
    }
}

fn fresh_for(terms: &[&Term]) -> Atom {
    let avoid: BTreeSet<Atom> = terms.iter().flat_map(|t| t.all_atoms()).collect();
    Atom::fresh(&avoid)
}

fn rename(a: &Atom, x: &Atom, body: &Term) -> Term {
    Perm::swap(a.clone(), x.clone()).act(body)
}

/// How ground instances of rules are generated.
#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub atoms: Vec<Atom>,
    pub max_depth: usize,
    pub include_abstractions: bool,
    /// Upper bound on instances per rule.
    pub max_instances: usize,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            atoms: vec![Atom::new("a")],
            max_depth: 2,
            include_abstractions: false,
            max_instances: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub subst: Substitution,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVerdict {
    pub rule: String,
    pub instances: usize,
    pub counterexample: Option<Counterexample>,
}

impl RuleVerdict {
    pub fn oriented(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminationReport {
    pub rules: Vec<RuleVerdict>,
}

impl TerminationReport {
    pub fn accepted(&self) -> bool {
        self.rules.iter().all(RuleVerdict::oriented)
    }
}

impl fmt::Display for TerminationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.rules {
            match &v.counterexample {
                None => writeln!(f, "rule {}: ORIENTED ({} instances)", v.rule, v.instances)?,
                Some(cex) => writeln!(
                    f,
                    "rule {}: NOT-ORIENTED, instance {} gives {} not above {}",
                    v.rule, cex.subst, cex.lhs, cex.rhs
                )?,
            }
        }
        if self.accepted() {
            write!(f, "verdict: ACCEPTED (oriented on tested instances)")
        } else {
            write!(f, "verdict: NOT-ORIENTED")
        }
    }
}

/// [`check_termination_with`] under the default instance configuration.
pub fn check_termination(sys: &RewriteSystem, cfg: &CrpoConfig) -> Result<TerminationReport> {
    check_termination_with(sys, cfg, &InstanceConfig::default())
}

/// Checks `lhs > rhs` for every rule on every ground instance whose
/// unknowns range over the generated terms and which satisfies the rule's
/// freshness context. Passing this is evidence, not a termination proof.
pub fn check_termination_with(
    sys: &RewriteSystem,
    cfg: &CrpoConfig,
    inst: &InstanceConfig,
) -> Result<TerminationReport> {
    check_coverage(sys, cfg)?;
    let universe = EnumConfig {
        sig: sys.sig.clone(),
        atoms: inst.atoms.clone(),
        max_depth: inst.max_depth,
        include_abstractions: inst.include_abstractions,
        extra_leaves: Vec::new(),
    };
    let size = universe.count();
    let mut terms: Option<Vec<Term>> = None;
    let mut rules = Vec::with_capacity(sys.rules.len());
    for rule in &sys.rules {
        let vars: Vec<Var> = rule.vars().into_iter().collect();
        let total = size.checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
        if total > inst.max_instances as u128 {
            return Err(Error::Config(format!(
                "rule `{}` has {total} ground instances, above the limit of {}",
                rule.name, inst.max_instances
            )));
        }
        let terms = terms.get_or_insert_with(|| crate::oracle::enum_ground_terms(&universe));
        let mut verdict = RuleVerdict { rule: rule.name.clone(), instances: 0, counterexample: None };
        let empty = FreshnessContext::new();
        for choice in itertools::Itertools::multi_cartesian_product(vars.iter().map(|_| terms.iter())) {
            let subst: Substitution = vars.iter().cloned().zip(choice.into_iter().cloned()).collect();
            let ctx_ok = rule
                .ctx
                .iter()
                .all(|(a, x)| derive_fresh(&empty, a, subst.get(x).expect("context unknowns occur in the rule")));
            if !ctx_ok {
                continue;
            }
            verdict.instances += 1;
            let lhs = subst.apply(&rule.lhs);
            let rhs = subst.apply(&rule.rhs);
            if !Crpo::new(cfg).gt(&lhs, &rhs) {
                verdict.counterexample = Some(Counterexample { subst, lhs, rhs });
                break;
            }
        }
        // a rule without unknowns has exactly one instance, the empty product
        rules.push(verdict);
    }
    Ok(TerminationReport { rules })
}

fn check_coverage(sys: &RewriteSystem, cfg: &CrpoConfig) -> Result<()> {
    let mut used: BTreeSet<Symbol> = BTreeSet::new();
    for rule in &sys.rules {
        collect_symbols(&rule.lhs, &mut used);
        collect_symbols(&rule.rhs, &mut used);
    }
    for f in &used {
        let info = cfg
            .sig
            .get(f.name())
            .ok_or_else(|| Error::Config(format!("symbol `{f}` is not in the ordering's signature")))?;
        if info.arity >= 2 && !cfg.status.contains_key(f) {
            return Err(Error::Config(format!("symbol `{f}` has no status")));
        }
        if used.len() > 1 && !cfg.prec.mentions(f) {
            return Err(Error::Config(format!("symbol `{f}` does not occur in the precedence")));
        }
    }
    Ok(())
}

fn collect_symbols(t: &Term, out: &mut BTreeSet<Symbol>) {
    match t {
        Term::App(f, args) => {
            out.insert(f.clone());
            args.iter().for_each(|a| collect_symbols(a, out));
        }
        Term::Abs(_, body) => collect_symbols(body, out),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::RewriteRule;

    fn peano_cfg() -> CrpoConfig {
        let sig = Signature::from_decls(&[("plus", 2, true), ("s", 1, false), ("zero", 0, false)]).unwrap();
        let prec = Precedence::from_chains(&[&["plus", "s", "zero"]]).unwrap();
        let status = StatusMap::from([(Symbol::new("plus"), Status::Mul)]);
        CrpoConfig::new(sig, prec, status).unwrap()
    }

    fn fg_cfg() -> CrpoConfig {
        let sig = Signature::from_decls(&[("f", 2, false), ("g", 1, false)]).unwrap();
        let prec = Precedence::from_chains(&[&["f", "g"]]).unwrap();
        CrpoConfig::new(sig, prec, StatusMap::from([(Symbol::new("f"), Status::Lex)])).unwrap()
    }

    fn zero() -> Term {
        Term::constant("zero")
    }

    fn s(t: Term) -> Term {
        Term::app("s", vec![t])
    }

    #[test]
    fn basic_examples() {
        let cfg = fg_cfg();
        let (a, b) = (Term::atom("a"), Term::atom("b"));
        let fab = Term::app("f", vec![a.clone(), b.clone()]);
        assert!(crpo_gt(&cfg, &fab, &a).unwrap());
        assert!(!crpo_gt(&cfg, &fab, &fab).unwrap());
        let sig = Signature::from_decls(&[("f", 1, false), ("g", 1, false)]).unwrap();
        let cfg = CrpoConfig::new(sig, Precedence::from_chains(&[&["f", "g"]]).unwrap(), StatusMap::new()).unwrap();
        assert!(crpo_gt(&cfg, &Term::app("f", vec![a.clone()]), &Term::app("g", vec![a.clone()])).unwrap());
        assert!(!crpo_gt(&cfg, &Term::app("g", vec![a.clone()]), &Term::app("f", vec![a])).unwrap());
        assert!(crpo_gt(&cfg, &Term::var("X"), &b).is_err());
    }

    #[test]
    fn extension_examples() {
        let cfg = peano_cfg();
        let (a, b) = (Term::atom("a"), Term::atom("b"));
        assert!(ext_compare(&cfg, Status::Mul, &[s(zero()), zero()], &[zero(), zero()]).unwrap());
        assert!(!ext_compare(&cfg, Status::Mul, &[a.clone(), b.clone()], &[b, a.clone()]).unwrap());
        assert!(ext_compare(&cfg, Status::Lex, &[a.clone(), s(zero())], &[a, zero()]).unwrap());
    }

    #[test]
    fn abstractions_and_atoms() {
        let cfg = fg_cfg();
        let g = |t| Term::app("g", vec![t]);
        let a = || Term::atom("a");
        // the body of an abstraction, under any binder name, is below it
        assert!(crpo_gt(&cfg, &Term::abs("a", g(a())), &g(a())).unwrap());
        assert!(crpo_gt(&cfg, &Term::abs("b", g(Term::atom("b"))), &g(a())).unwrap());
        assert!(!crpo_gt(&cfg, &Term::abs("b", g(Term::atom("b"))), &g(g(a()))).unwrap());
        assert!(crpo_gt(&cfg, &Term::abs("b", Term::atom("b")), &a()).unwrap());
        assert!(!crpo_gt(&cfg, &a(), &Term::abs("b", Term::atom("b"))).unwrap());
        assert!(crpo_gt(&cfg, &g(a()), &Term::atom("b")).unwrap());
        // g(a) is above [b]b because g ≻ abs and g(a) is above any atom
        assert!(crpo_gt(&cfg, &g(a()), &Term::abs("b", Term::atom("b"))).unwrap());
        assert!(crpo_gt(&cfg, &Term::abs("a", g(a())), &Term::abs("b", Term::atom("b"))).unwrap());
        assert!(!crpo_gt(&cfg, &Term::abs("a", a()), &Term::abs("b", Term::atom("b"))).unwrap());
    }

    #[test]
    fn config_validation() {
        let sig = Signature::from_decls(&[("plus", 2, true)]).unwrap();
        let lex = StatusMap::from([(Symbol::new("plus"), Status::Lex)]);
        assert!(CrpoConfig::new(sig.clone(), Precedence::new(), lex).is_err());
        assert!(CrpoConfig::new(sig, Precedence::new(), StatusMap::new()).is_err());
        assert!(Precedence::from_chains(&[&["f", "g"], &["g", "f"]]).is_err());
        let p = Precedence::from_chains(&[&["f", "g"], &["g", "h"]]).unwrap();
        assert!(p.gt(&Symbol::new("f"), &Symbol::new("h")));
    }

    fn peano_sys() -> RewriteSystem {
        let cfg = peano_cfg();
        let plus = |x, y| Term::app("plus", vec![x, y]);
        let x = || Term::var("X");
        let y = || Term::var("Y");
        RewriteSystem::new(
            cfg.sig.clone(),
            vec![
                RewriteRule::new("plus_zero", FreshnessContext::new(), plus(x(), zero()), x()).unwrap(),
                RewriteRule::new("plus_succ", FreshnessContext::new(), plus(x(), s(y())), s(plus(x(), y()))).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn termination_examples() {
        let report = check_termination(&peano_sys(), &peano_cfg()).unwrap();
        assert!(report.accepted(), "{report}");
        assert!(report.rules.iter().all(|r| r.instances > 0));

        let empty = RewriteSystem { rules: Vec::new(), ..peano_sys() };
        assert!(check_termination(&empty, &peano_cfg()).unwrap().accepted());

        let sig = Signature::from_decls(&[("f", 1, false), ("g", 1, false)]).unwrap();
        let cfg =
            CrpoConfig::new(sig.clone(), Precedence::from_chains(&[&["g", "f"]]).unwrap(), StatusMap::new()).unwrap();
        let fx = Term::app("f", vec![Term::var("X")]);
        let rule = RewriteRule::new("grow", FreshnessContext::new(), fx.clone(), Term::app("g", vec![fx])).unwrap();
        let sys = RewriteSystem::new(sig, vec![rule]).unwrap();
        let report = check_termination(&sys, &cfg).unwrap();
        assert!(!report.accepted());
        assert!(report.rules[0].counterexample.is_some());
    }

    #[test]
    fn termination_requires_coverage() {
        let cfg =
            CrpoConfig::new(peano_cfg().sig, Precedence::from_chains(&[&["plus", "s"]]).unwrap(), peano_cfg().status)
                .unwrap();
        assert!(matches!(check_termination(&peano_sys(), &cfg), Err(Error::Config(_))));
        let tight = InstanceConfig { max_instances: 10, ..InstanceConfig::default() };
        assert!(matches!(check_termination_with(&peano_sys(), &peano_cfg(), &tight), Err(Error::Config(_))));
    }
}
