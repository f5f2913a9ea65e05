//! Brute-force reference implementations used to cross-check the real
//! algorithms: exhaustive term and permutation enumeration, canonical forms
//! modulo α and C, explicit C-classes and matching by search.
//!
//! Everything here is deliberately naive. Size guards fail with an error
//! instead of truncating.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use itertools::Itertools;

use crate::constraint::{derive_fresh, FreshnessContext};
use crate::equiv::{c_alpha_eq, MatchProblem, MatchSolution};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::term::{Atom, Signature, Substitution, Symbol, Term, Var};

/// The largest atom set [`enum_perms`] accepts.
pub const MAX_PERM_ATOMS: usize = 7;

/// A finite universe of terms.
#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub sig: Signature,
    /// Atoms used as leaves and, when abstractions are on, as binders.
    pub atoms: Vec<Atom>,
    pub max_depth: usize,
    pub include_abstractions: bool,
    /// Additional depth-0 leaves, typically unknowns or suspensions. The
    /// universe is ground only when this is empty.
    pub extra_leaves: Vec<Term>,
}

impl EnumConfig {
    pub fn new(sig: Signature, atoms: &[&str], max_depth: usize, include_abstractions: bool) -> Self {
        EnumConfig {
            sig,
            atoms: atoms.iter().map(Atom::new).collect(),
            max_depth,
            include_abstractions,
            extra_leaves: Vec::new(),
        }
    }

    pub fn with_leaves(mut self, leaves: Vec<Term>) -> Self {
        self.extra_leaves = leaves;
        self
    }

    fn leaves(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.atoms.iter().cloned().map(Term::Atom).collect();
        out.extend(
            self.sig.symbols().filter(|(_, info)| info.arity == 0).map(|(f, _)| Term::App(f.clone(), Vec::new())),
        );
        out.extend(self.extra_leaves.iter().cloned());
        out
    }

    fn compound_symbols(&self) -> Vec<(Symbol, usize)> {
        self.sig.symbols().filter(|(_, info)| info.arity > 0).map(|(f, info)| (f.clone(), info.arity)).collect()
    }

    /// Terms of depth exactly `d`, built from `layers[..d]`, fed to `visit`.
    fn visit_layer(&self, layers: &[Vec<Term>], d: usize, visit: &mut dyn FnMut(&Term)) {
        if d == 0 {
            self.leaves().iter().for_each(visit);
            return;
        }
        let below: Vec<&Term> = layers[..d].iter().flatten().collect();
        let top_start = below.len() - layers[d - 1].len();
        for (f, arity) in self.compound_symbols() {
            // tuples over `below` with at least one component from the last
            // layer; one term is kept and only changed arguments are replaced
            let mut current: Vec<usize> = vec![0; arity];
            let mut term = Term::App(f.clone(), vec![below[0].clone(); arity]);
            for tuple in (0..arity).map(|_| 0..below.len()).multi_cartesian_product() {
                if tuple.iter().all(|&i| i < top_start) {
                    continue;
                }
                if let Term::App(_, args) = &mut term {
                    for (k, &i) in tuple.iter().enumerate() {
                        if current[k] != i {
                            args[k] = below[i].clone();
                            current[k] = i;
                        }
                    }
                }
                visit(&term);
            }
        }
        if self.include_abstractions {
            for a in &self.atoms {
                for body in &layers[d - 1] {
                    visit(&Term::Abs(a.clone(), Box::new(body.clone())));
                }
            }
        }
    }

    /// Calls `visit` on every term of the universe, in the same order as
    /// [`enum_ground_terms`], without storing the deepest layer.
    pub fn for_each_term(&self, mut visit: impl FnMut(&Term)) {
        let mut layers: Vec<Vec<Term>> = Vec::new();
        for d in 0..=self.max_depth {
            if d == self.max_depth {
                self.visit_layer(&layers, d, &mut visit);
            } else {
                let mut layer = Vec::new();
                self.visit_layer(&layers, d, &mut |t| layer.push(t.clone()));
                layer.iter().for_each(&mut visit);
                layers.push(layer);
            }
        }
    }

    /// Number of terms in the universe, computed from layer sizes alone.
    pub fn count(&self) -> u128 {
        let leaves = self.leaves().len() as u128;
        let syms = self.compound_symbols();
        let binders = if self.include_abstractions { self.atoms.len() as u128 } else { 0 };
        let mut exact = vec![leaves];
        let mut upto = leaves;
        for _ in 0..self.max_depth {
            let last = *exact.last().expect("nonempty");
            let below_last = upto - last;
            let n: u128 =
                syms.iter().map(|&(_, k)| upto.pow(k as u32) - below_last.pow(k as u32)).sum::<u128>() + binders * last;
            exact.push(n);
            upto += n;
        }
        upto
    }
}

/// Every term of depth at most `cfg.max_depth`: leaves have depth 0 and a
/// compound term is one deeper than its deepest child. Shallower terms come
/// first; the order is deterministic and there are no duplicates.
pub fn enum_ground_terms(cfg: &EnumConfig) -> Vec<Term> {
    let mut out = Vec::new();
    cfg.for_each_term(|t| out.push(t.clone()));
    out
}

/// All permutations of `atoms`, fixing every other atom.
pub fn enum_perms(atoms: &BTreeSet<Atom>) -> Result<Vec<Perm>> {
    if atoms.len() > MAX_PERM_ATOMS {
        return Err(Error::SizeLimit(atoms.len()));
    }
    let domain: Vec<&Atom> = atoms.iter().collect();
    Ok(domain
        .iter()
        .permutations(domain.len())
        .map(|image| {
            let pairs = domain.iter().zip(image).map(|(a, b)| ((*a).clone(), (**b).clone())).collect();
            Perm::from_mapping(pairs).expect("a permutation of the domain")
        })
        .collect())
}

/// Renames every binder to a canonical name determined by its nesting
/// depth, drawn from the atoms not free in `t`. α-equivalent ground terms
/// have identical canonical forms.
pub fn alpha_canonical(t: &Term) -> Term {
    canonical(t, None)
}

/// Canonical representative of the `≈α,C` class of a ground term: the
/// α-canonical form with the arguments of commutative symbols sorted.
pub fn c_normal_form(t: &Term, sig: &Signature) -> Term {
    canonical(t, Some(sig))
}

fn canonical(t: &Term, sorting: Option<&Signature>) -> Term {
    let names = Atom::fresh_many(&t.free_atoms(), binder_nesting(t));
    let mut env = Vec::new();
    canon(t, &names, &mut env, sorting)
}

fn binder_nesting(t: &Term) -> usize {
    match t {
        Term::Atom(_) | Term::Susp(..) => 0,
        Term::App(_, args) => args.iter().map(binder_nesting).max().unwrap_or(0),
        Term::Abs(_, body) => 1 + binder_nesting(body),
    }
}

/// `env` maps the binders in scope, innermost last, to their canonical
/// names. The names avoid the free atoms of the whole term, so renaming
/// cannot capture.
fn canon<'t>(t: &'t Term, names: &'t [Atom], env: &mut Vec<(&'t Atom, &'t Atom)>, sorting: Option<&Signature>) -> Term {
    let rename = |env: &[(&Atom, &'t Atom)], a: &'t Atom| -> Atom {
        env.iter().rev().find(|(b, _)| *b == a).map_or(a, |(_, c)| *c).clone()
    };
    match t {
        Term::Atom(a) => Term::Atom(rename(env, a)),
        Term::Susp(p, x) => {
            // only meaningful for ground terms; kept total for open ones
            let pairs = p.mapping().map(|(a, b)| (rename(env, a), rename(env, b))).collect();
            Term::Susp(Perm::from_mapping(pairs).unwrap_or_else(|_| p.clone()), x.clone())
        }
        Term::App(f, args) => {
            let mut args: Vec<Term> = args.iter().map(|a| canon(a, names, env, sorting)).collect();
            if sorting.is_some_and(|sig| sig.is_commutative(f)) {
                args.sort();
            }
            Term::App(f.clone(), args)
        }
        Term::Abs(a, body) => {
            let c = &names[env.len()];
            env.push((a, c));
            let body = canon(body, names, env, sorting);
            env.pop();
            Term::Abs(c.clone(), Box::new(body))
        }
    }
}

/// The `≈α,C` class of a ground term, as α-canonical forms closed under
/// swapping the arguments of any commutative subterm. Breadth-first from
/// the canonical form of `t`.
pub fn naive_c_class(t: &Term, sig: &Signature, bound: usize) -> Result<Vec<Term>> {
    if !t.is_ground() {
        return Err(Error::OpenTerm(t.to_string()));
    }
    let start = alpha_canonical(t);
    let mut seen: HashSet<Term> = HashSet::from([start.clone()]);
    let mut class = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for v in single_swaps(&u, sig) {
            if seen.insert(v.clone()) {
                if class.len() == bound {
                    return Err(Error::ClassTooLarge { bound });
                }
                class.push(v.clone());
                queue.push_back(v);
            }
        }
    }
    Ok(class)
}

/// Every term obtained from `t` by swapping the arguments at exactly one
/// commutative position.
pub fn single_swaps(t: &Term, sig: &Signature) -> Vec<Term> {
    let mut out = Vec::new();
    for pos in t.positions() {
        if let Ok(Term::App(f, args)) = t.subterm_at(pos.as_slice()) {
            if sig.is_commutative(f) {
                let swapped = Term::App(f.clone(), vec![args[1].clone(), args[0].clone()]);
                out.push(t.replace_at(pos.as_slice(), swapped).expect("valid position"));
            }
        }
    }
    out
}

/// A match solution with every image replaced by its `≈α,C` normal form,
/// so that solutions can be compared as plain values.
pub type SolutionKey = (BTreeMap<Var, Term>, FreshnessContext);

pub fn solution_key(sol: &MatchSolution, sig: &Signature) -> SolutionKey {
    (sol.subst.iter().map(|(x, t)| (x.clone(), c_normal_form(t, sig))).collect(), sol.obligations.clone())
}

pub fn solution_keys(sols: &[MatchSolution], sig: &Signature) -> BTreeSet<SolutionKey> {
    sols.iter().map(|s| solution_key(s, sig)).collect()
}

/// For each unknown of `pattern`, the universe terms that can stand for it:
/// an image deeper than the universe depth minus the depth at which the
/// unknown occurs would make the instance deeper than any subject in the
/// universe, and `≈α,C` preserves depth.
fn candidates(pattern: &Term, terms: &[Term], max_depth: usize) -> (Vec<Var>, Vec<Vec<usize>>) {
    let mut depth: BTreeMap<Var, usize> = BTreeMap::new();
    var_depths(pattern, 0, &mut depth);
    let vars: Vec<Var> = depth.keys().cloned().collect();
    let pools =
        depth.values().map(|&d| (0..terms.len()).filter(|&i| terms[i].depth() + d <= max_depth).collect()).collect();
    (vars, pools)
}

fn var_depths(t: &Term, d: usize, out: &mut BTreeMap<Var, usize>) {
    match t {
        Term::Atom(_) => {}
        Term::Susp(_, x) => {
            let e = out.entry(x.clone()).or_insert(d);
            *e = (*e).max(d);
        }
        Term::App(_, args) => args.iter().for_each(|a| var_depths(a, d + 1, out)),
        Term::Abs(_, body) => var_depths(body, d + 1, out),
    }
}

/// Matching by search: every substitution from the pattern's unknowns into
/// the universe whose instance is `≈α,C` to the subject and satisfies the
/// rule context. Returns one solution per `≈α,C` class of substitutions.
/// The pattern and subject are expected to lie within the universe depth.
pub fn naive_match(p: &MatchProblem, sig: &Signature, universe: &EnumConfig) -> Vec<MatchSolution> {
    let terms = enum_ground_terms(universe);
    let (vars, pools) = candidates(&p.pattern, &terms, universe.max_depth);
    let mut seen: BTreeSet<SolutionKey> = BTreeSet::new();
    let mut out = Vec::new();
    for choice in pools.iter().map(|pool| pool.iter().copied()).multi_cartesian_product() {
        let subst: Substitution = vars.iter().cloned().zip(choice.iter().map(|&i| terms[i].clone())).collect();
        if !c_alpha_eq(&p.subject_ctx, &subst.apply(&p.pattern), &p.subject, sig) {
            continue;
        }
        if !rule_ctx_holds(&p.rule_ctx, &subst, &p.subject_ctx) {
            continue;
        }
        let sol = MatchSolution { subst, obligations: FreshnessContext::new() };
        if seen.insert(solution_key(&sol, sig)) {
            out.push(sol);
        }
    }
    out
}

fn rule_ctx_holds(rule_ctx: &FreshnessContext, subst: &Substitution, subject_ctx: &FreshnessContext) -> bool {
    rule_ctx.iter().all(|(a, x)| match subst.get(x) {
        Some(t) => derive_fresh(subject_ctx, a, t),
        None => subject_ctx.contains(a, x),
    })
}

/// An enumerated universe with the `≈α,C` normal form of every member,
/// shared by many [`NaiveMatchIndex`] builds.
pub struct Universe {
    cfg: EnumConfig,
    terms: Vec<Term>,
    normal: Vec<Term>,
}

impl Universe {
    pub fn new(cfg: EnumConfig) -> Self {
        let terms = enum_ground_terms(&cfg);
        let normal = terms.iter().map(|t| c_normal_form(t, &cfg.sig)).collect();
        Universe { cfg, terms, normal }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Normal forms, aligned with [`Universe::terms`].
    pub fn normal_forms(&self) -> &[Term] {
        &self.normal
    }

    pub fn index(&self, pattern: &Term, rule_ctx: &FreshnessContext) -> NaiveMatchIndex {
        let sig = &self.cfg.sig;
        let (vars, pools) = candidates(pattern, &self.terms, self.cfg.max_depth);
        let empty = FreshnessContext::new();
        let mut index: HashMap<Term, BTreeSet<SolutionKey>> = HashMap::new();
        for choice in pools.iter().map(|pool| pool.iter().copied()).multi_cartesian_product() {
            let subst: Substitution = vars.iter().cloned().zip(choice.iter().map(|&i| self.terms[i].clone())).collect();
            if !rule_ctx_holds(rule_ctx, &subst, &empty) {
                continue;
            }
            let instance = c_normal_form(&subst.apply(pattern), sig);
            let key = vars.iter().cloned().zip(choice.iter().map(|&i| self.normal[i].clone())).collect();
            index.entry(instance).or_default().insert((key, FreshnessContext::new()));
        }
        NaiveMatchIndex { sig: sig.clone(), index }
    }
}

/// [`naive_match`] for one pattern against many ground subjects: every
/// instance of the pattern over the universe is computed once and indexed
/// by its `≈α,C` normal form.
pub struct NaiveMatchIndex {
    sig: Signature,
    index: HashMap<Term, BTreeSet<SolutionKey>>,
}

impl NaiveMatchIndex {
    pub fn build(pattern: &Term, rule_ctx: &FreshnessContext, universe: &EnumConfig) -> Self {
        Universe::new(universe.clone()).index(pattern, rule_ctx)
    }

    /// Solutions for a ground subject under an empty subject context.
    pub fn lookup(&self, subject: &Term) -> BTreeSet<SolutionKey> {
        self.lookup_normal_form(&c_normal_form(subject, &self.sig))
    }

    /// [`NaiveMatchIndex::lookup`] for a subject already in `≈α,C` normal form.
    pub fn lookup_normal_form(&self, normal_form: &Term) -> BTreeSet<SolutionKey> {
        self.index.get(normal_form).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg() -> Signature {
        Signature::from_decls(&[("h", 0, false), ("g", 1, false)]).unwrap()
    }

    fn sig() -> Signature {
        Signature::from_decls(&[("plus", 2, true), ("s", 1, false), ("zero", 0, false), ("g", 1, false)]).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let cfg = EnumConfig::new(hg(), &["a"], 1, false);
        let got: Vec<String> = enum_ground_terms(&cfg).iter().map(Term::to_string).collect();
        assert_eq!(got, ["a", "h", "g(a)", "g(h)"]);
        assert_eq!(cfg.count(), 4);

        let cfg0 = EnumConfig::new(Signature::from_decls(&[("h", 0, false)]).unwrap(), &["a"], 0, false);
        assert_eq!(enum_ground_terms(&cfg0).len(), 2);

        let cfg = EnumConfig::new(hg(), &["a"], 1, true);
        let got: Vec<String> = enum_ground_terms(&cfg).iter().map(Term::to_string).collect();
        assert_eq!(got, ["a", "h", "g(a)", "g(h)", "[a]a", "[a]h"]);
        assert_eq!(cfg.count(), 6);
    }

    #[test]
    fn enumeration_count_matches_recurrence() {
        for depth in 0..=3 {
            for abs in [false, true] {
                let cfg = EnumConfig::new(sig(), &["a", "b"], depth, abs);
                let terms = enum_ground_terms(&cfg);
                assert_eq!(terms.len() as u128, cfg.count());
                let distinct: HashSet<&Term> = terms.iter().collect();
                assert_eq!(distinct.len(), terms.len());
                assert!(terms.iter().all(|t| t.depth() <= depth && t.is_ground()));
            }
        }
    }

    #[test]
    fn perm_enumeration() {
        let set = |xs: &[&str]| xs.iter().map(Atom::new).collect::<BTreeSet<_>>();
        let two: Vec<String> = enum_perms(&set(&["a", "b"])).unwrap().iter().map(Perm::to_string).collect();
        assert_eq!(two, ["id", "(a b)"]);
        assert_eq!(enum_perms(&set(&["a"])).unwrap(), vec![Perm::identity()]);
        let three: Vec<String> = enum_perms(&set(&["a", "b", "c"])).unwrap().iter().map(Perm::to_string).collect();
        assert_eq!(three.len(), 6);
        assert!(three.contains(&"(a b c)".to_string()) && three.contains(&"(a c b)".to_string()));
        let eight = set(&["a", "b", "c", "d", "e", "f", "g", "h"]);
        assert_eq!(enum_perms(&eight), Err(Error::SizeLimit(8)));
    }

    #[test]
    fn c_class_examples() {
        let a = || Term::atom("a");
        let b = || Term::atom("b");
        let plus = |x, y| Term::app("plus", vec![x, y]);
        let class = naive_c_class(&plus(a(), b()), &sig(), 16).unwrap();
        assert_eq!(class, vec![plus(a(), b()), plus(b(), a())]);
        assert_eq!(naive_c_class(&Term::app("g", vec![a()]), &sig(), 16).unwrap().len(), 1);
        // two commutative nodes give four arrangements
        let nested = plus(plus(a(), b()), Term::atom("c"));
        let class = naive_c_class(&nested, &sig(), 16).unwrap();
        assert_eq!(class.len(), 4);
        for t in &class {
            for u in single_swaps(t, &sig()) {
                assert!(class.contains(&u));
            }
        }
        assert_eq!(naive_c_class(&nested, &sig(), 3), Err(Error::ClassTooLarge { bound: 3 }));
        assert!(matches!(naive_c_class(&Term::var("X"), &sig(), 3), Err(Error::OpenTerm(_))));
    }

    #[test]
    fn canonical_forms() {
        let t = Term::abs("a", Term::app("plus", vec![Term::atom("a"), Term::atom("b")]));
        let u = Term::abs("c", Term::app("plus", vec![Term::atom("b"), Term::atom("c")]));
        assert_ne!(alpha_canonical(&t), alpha_canonical(&u));
        assert_eq!(c_normal_form(&t, &sig()), c_normal_form(&u, &sig()));
        let v = Term::abs("b", Term::app("plus", vec![Term::atom("b"), Term::atom("b")]));
        assert_ne!(c_normal_form(&t, &sig()), c_normal_form(&v, &sig()));
    }

    #[test]
    fn naive_match_examples() {
        let zero = || Term::constant("zero");
        let universe = EnumConfig::new(sig(), &["a"], 2, false);
        let p = MatchProblem::new(
            Term::app("plus", vec![Term::var("X"), zero()]),
            Term::app("plus", vec![zero(), Term::app("s", vec![zero()])]),
        );
        let sols = naive_match(&p, &sig(), &universe);
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].subst.get(&Var::new("X")), Some(&Term::app("s", vec![zero()])));

        let p = MatchProblem::new(Term::app("g", vec![Term::var("X")]), Term::app("s", vec![zero()]));
        assert!(naive_match(&p, &sig(), &universe).is_empty());

        let p = MatchProblem::new(Term::var("X"), Term::atom("a"));
        let sols = naive_match(&p, &sig(), &universe);
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].subst.get(&Var::new("X")), Some(&Term::atom("a")));
    }
}
