//! α-equivalence, α-equivalence modulo commutativity, and nominal matching.
//!
//! Equivalence is judged under a freshness context. Two suspensions of the
//! same unknown are equal when every atom on which their permutations
//! disagree is known fresh for that unknown.
//!
//! Matching solves `σ(pattern) ≈ subject` for the unknowns of the pattern
//! only; unknowns of the subject behave like constants. Freshness side
//! conditions produced along the way, together with the instantiated rule
//! context, are reduced to primitive constraints that the subject context
//! has to contain.

use std::borrow::Cow;

use crate::constraint::{derive_fresh, fresh_constraints, FreshnessContext};
use crate::perm::Perm;
use crate::term::{Signature, Substitution, Term};

/// `ctx ⊢ t ≈α u`.
pub fn alpha_eq(ctx: &FreshnessContext, t: &Term, u: &Term) -> bool {
    eq(ctx, t, u, None)
}

/// `ctx ⊢ t ≈α,C u`: arguments of commutative symbols compare unordered at
/// every depth.
pub fn c_alpha_eq(ctx: &FreshnessContext, t: &Term, u: &Term, sig: &Signature) -> bool {
    eq(ctx, t, u, Some(sig))
}

fn eq(ctx: &FreshnessContext, t: &Term, u: &Term, sig: Option<&Signature>) -> bool {
    match (t, u) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Susp(p, x), Term::Susp(q, y)) => {
            x == y && p.mapping().chain(q.mapping()).all(|(a, _)| p.apply(a) == q.apply(a) || ctx.contains(a, x))
        }
        (Term::App(f, ts), Term::App(g, us)) => {
            if f != g || ts.len() != us.len() {
                return false;
            }
            if sig.is_some_and(|s| s.is_commutative(f)) && ts.len() == 2 {
                (eq(ctx, &ts[0], &us[0], sig) && eq(ctx, &ts[1], &us[1], sig))
                    || (eq(ctx, &ts[0], &us[1], sig) && eq(ctx, &ts[1], &us[0], sig))
            } else {
                ts.iter().zip(us).all(|(t, u)| eq(ctx, t, u, sig))
            }
        }
        (Term::Abs(a, t), Term::Abs(b, u)) => {
            if a == b {
                eq(ctx, t, u, sig)
            } else {
                derive_fresh(ctx, a, u) && eq(ctx, t, &Perm::swap(a.clone(), b.clone()).act(u), sig)
            }
        }
        _ => false,
    }
}

/// `σ(pattern) ≈ subject` under `rule_ctx` (the rule's freshness context,
/// whose instance must hold) and `subject_ctx` (what is known about the
/// subject's unknowns). The unknowns of pattern and subject must be
/// disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchProblem {
    pub rule_ctx: FreshnessContext,
    pub pattern: Term,
    pub subject: Term,
    pub subject_ctx: FreshnessContext,
}

impl MatchProblem {
    /// A problem with empty contexts.
    pub fn new(pattern: Term, subject: Term) -> Self {
        MatchProblem { rule_ctx: FreshnessContext::new(), pattern, subject, subject_ctx: FreshnessContext::new() }
    }

    pub fn with_rule_ctx(mut self, ctx: FreshnessContext) -> Self {
        self.rule_ctx = ctx;
        self
    }

    pub fn with_subject_ctx(mut self, ctx: FreshnessContext) -> Self {
        self.subject_ctx = ctx;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchSolution {
    pub subst: Substitution,
    /// Primitive constraints the match relies on. All of them are in the
    /// subject context.
    pub obligations: FreshnessContext,
}

/// Nominal matching without commutativity. Matching modulo α alone is
/// unitary, so there is at most one solution.
pub fn nominal_match(p: &MatchProblem, sig: &Signature) -> Option<MatchSolution> {
    Matcher::new(p, sig, false, true).run().pop()
}

/// Nominal matching modulo commutativity. Every argument order of each
/// commutative application is explored, unswapped first; solutions are
/// returned in discovery order with duplicates (modulo `≈α,C` of the
/// images) removed.
pub fn c_match(p: &MatchProblem, sig: &Signature) -> Vec<MatchSolution> {
    Matcher::new(p, sig, true, false).run()
}

/// Pattern-side term against subject-side term.
type Equation<'p, 's> = (&'p Term, Cow<'s, Term>);

struct Matcher<'a> {
    problem: &'a MatchProblem,
    sig: &'a Signature,
    modulo_c: bool,
    first_only: bool,
    solutions: Vec<MatchSolution>,
}

impl<'a> Matcher<'a> {
    fn new(problem: &'a MatchProblem, sig: &'a Signature, modulo_c: bool, first_only: bool) -> Self {
        Matcher { problem, sig, modulo_c, first_only, solutions: Vec::new() }
    }

    fn run(mut self) -> Vec<MatchSolution> {
        let work = vec![(&self.problem.pattern, Cow::Borrowed(&self.problem.subject))];
        self.solve(work, Substitution::new(), FreshnessContext::new());
        self.solutions
    }

    fn equal(&self, t: &Term, u: &Term) -> bool {
        let ctx = &self.problem.subject_ctx;
        if self.modulo_c {
            c_alpha_eq(ctx, t, u, self.sig)
        } else {
            alpha_eq(ctx, t, u)
        }
    }

    /// Adds the primitives needed for `a # s` to `obligations`; false when
    /// they cannot hold or are not known in the subject context.
    fn require_fresh(&self, a: &crate::term::Atom, s: &Term, obligations: &mut FreshnessContext) -> bool {
        match fresh_constraints(a, s) {
            Some(prims) if prims.is_entailed_by(&self.problem.subject_ctx) => {
                obligations.extend(prims);
                true
            }
            _ => false,
        }
    }

    // `work` is a stack; the leftmost pending equation is on top.
    fn solve(&mut self, mut work: Vec<Equation<'a, 'a>>, mut subst: Substitution, mut obligations: FreshnessContext) {
        while let Some((pat, subj)) = work.pop() {
            if self.first_only && !self.solutions.is_empty() {
                return;
            }
            match (pat, subj.as_ref()) {
                (Term::Atom(a), Term::Atom(b)) if a == b => {}
                (Term::Susp(p, x), _) => {
                    let image = p.inverse().act(&subj);
                    match subst.get(x) {
                        Some(prev) => {
                            if !self.equal(prev, &image) {
                                return;
                            }
                        }
                        None => {
                            subst.insert(x.clone(), image);
                        }
                    }
                }
                (Term::App(f, ps), Term::App(g, ss)) => {
                    if f != g || ps.len() != ss.len() {
                        return;
                    }
                    let children = children_of(&subj);
                    if self.modulo_c && ps.len() == 2 && self.sig.is_commutative(f) {
                        let mut swapped = work.clone();
                        swapped.push((&ps[1], children[0].clone()));
                        swapped.push((&ps[0], children[1].clone()));
                        let [c0, c1]: [Cow<'a, Term>; 2] = children.try_into().expect("binary");
                        work.push((&ps[1], c1));
                        work.push((&ps[0], c0));
                        // unswapped branch first
                        self.solve(work, subst.clone(), obligations.clone());
                        work = swapped;
                    } else {
                        for (p, s) in ps.iter().zip(children).rev() {
                            work.push((p, s));
                        }
                    }
                }
                (Term::Abs(a, pb), Term::Abs(b, sb)) => {
                    if a == b {
                        work.push((pb, body_of(&subj)));
                    } else {
                        if !self.require_fresh(a, sb, &mut obligations) {
                            return;
                        }
                        let body = Perm::swap(a.clone(), b.clone()).act(sb);
                        work.push((pb, Cow::Owned(body)));
                    }
                }
                _ => return,
            }
        }
        self.finish(subst, obligations);
    }

    fn finish(&mut self, subst: Substitution, mut obligations: FreshnessContext) {
        for (a, x) in self.problem.rule_ctx.iter() {
            if let Some(image) = subst.get(x) {
                if !self.require_fresh(a, image, &mut obligations) {
                    return;
                }
            }
        }
        let duplicate = self.solutions.iter().any(|s| {
            s.obligations == obligations
                && s.subst.len() == subst.len()
                && s.subst.iter().all(|(x, t)| subst.get(x).is_some_and(|u| self.equal(t, u)))
        });
        if !duplicate {
            self.solutions.push(MatchSolution { subst, obligations });
        }
    }
}

fn children_of<'s>(t: &Cow<'s, Term>) -> Vec<Cow<'s, Term>> {
    match t {
        Cow::Borrowed(Term::App(_, args)) => args.iter().map(Cow::Borrowed).collect(),
        Cow::Owned(Term::App(_, args)) => args.iter().map(|a| Cow::Owned(a.clone())).collect(),
        _ => Vec::new(),
    }
}

fn body_of<'s>(t: &Cow<'s, Term>) -> Cow<'s, Term> {
    match t {
        Cow::Borrowed(Term::Abs(_, body)) => Cow::Borrowed(body),
        Cow::Owned(Term::Abs(_, body)) => Cow::Owned(body.as_ref().clone()),
        _ => unreachable!("body_of on a non-abstraction"),
    }
}
