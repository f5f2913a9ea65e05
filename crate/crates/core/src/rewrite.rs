//! Nominal rewrite rules and the R,C and R/C rewrite relations.
//!
//! R,C-rewriting decides rule applicability with C-matching on the term
//! itself. R/C-rewriting applies rules with plain matching to every member
//! of the term's `≈α,C` class; it is only available for ground terms and
//! enumerates the class explicitly, so it is meant as a reference relation
//! on small terms.
//!
//! The strategy is fixed: positions outermost-leftmost (pre-order), rules in
//! declaration order, C-match solutions in the order [`c_match`] returns.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;

use crate::constraint::FreshnessContext;
use crate::equiv::{c_alpha_eq, c_match, nominal_match, MatchProblem, MatchSolution};
use crate::error::{Error, Result};
use crate::oracle::naive_c_class;
use crate::term::{Position, Signature, Substitution, Term, Var};

/// `∇ ⊢ lhs → rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub ctx: FreshnessContext,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn new(name: impl Into<String>, ctx: FreshnessContext, lhs: Term, rhs: Term) -> Result<Self> {
        let name = name.into();
        let fail = |reason: String| Err(Error::Rule { name: name.clone(), reason });
        if matches!(lhs, Term::Susp(..)) {
            return fail("left-hand side is a bare unknown".into());
        }
        let lhs_vars = lhs.vars();
        if let Some(x) = rhs.vars().difference(&lhs_vars).next() {
            return fail(format!("unknown `{x}` of the right-hand side does not occur on the left"));
        }
        if let Some(x) = ctx.vars().difference(&lhs_vars).next() {
            return fail(format!("context mentions `{x}`, which is not an unknown of the rule"));
        }
        Ok(RewriteRule { name, ctx, lhs, rhs })
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs.vars()
    }

    /// A copy whose unknowns avoid `taken`, or `self` when nothing clashes.
    pub fn rename_apart(&self, taken: &BTreeSet<Var>) -> Cow<'_, RewriteRule> {
        let vars = self.vars();
        if vars.is_disjoint(taken) {
            return Cow::Borrowed(self);
        }
        let mut used: BTreeSet<Var> = taken.union(&vars).cloned().collect();
        let mut renaming = Substitution::new();
        for x in vars.iter().filter(|x| taken.contains(*x)) {
            let fresh = (1..)
                .map(|i| Var::new(format!("{x}{i}")))
                .find(|v| !used.contains(v))
                .expect("infinitely many candidates");
            used.insert(fresh.clone());
            renaming.insert(x.clone(), Term::susp(crate::perm::Perm::identity(), fresh));
        }
        let rename_var = |x: &Var| match renaming.get(x) {
            Some(Term::Susp(_, y)) => y.clone(),
            _ => x.clone(),
        };
        Cow::Owned(RewriteRule {
            name: self.name.clone(),
            ctx: self.ctx.iter().map(|(a, x)| (a.clone(), rename_var(x))).collect(),
            lhs: renaming.apply(&self.lhs),
            rhs: renaming.apply(&self.rhs),
        })
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name)?;
        if !self.ctx.is_empty() {
            write!(f, "{} |- ", self.ctx)?;
        }
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    pub sig: Signature,
    pub rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    pub fn new(sig: Signature, rules: Vec<RewriteRule>) -> Result<Self> {
        for rule in &rules {
            for side in [&rule.lhs, &rule.rhs] {
                sig.check_term(side).map_err(|e| Error::Rule { name: rule.name.clone(), reason: e.to_string() })?;
            }
        }
        Ok(RewriteSystem { sig, rules })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: String,
    pub position: Position,
    pub solution: MatchSolution,
    pub result: Term,
}

/// All single R,C steps from `t`, in strategy order.
pub fn step_rc(sys: &RewriteSystem, ctx: &FreshnessContext, t: &Term) -> Vec<RewriteStep> {
    rc_steps(sys, ctx, t, false)
}

/// The first R,C step from `t` in strategy order.
pub fn first_step_rc(sys: &RewriteSystem, ctx: &FreshnessContext, t: &Term) -> Option<RewriteStep> {
    rc_steps(sys, ctx, t, true).pop()
}

fn rc_steps(sys: &RewriteSystem, ctx: &FreshnessContext, t: &Term, first_only: bool) -> Vec<RewriteStep> {
    let mut taken = t.vars();
    taken.extend(ctx.vars());
    let rules: Vec<Cow<'_, RewriteRule>> = sys.rules.iter().map(|r| r.rename_apart(&taken)).collect();
    let mut steps = Vec::new();
    for pos in t.positions() {
        let sub = t.subterm_at(pos.as_slice()).expect("position from positions()");
        for rule in &rules {
            if !same_head(&rule.lhs, sub) {
                continue;
            }
            let problem = MatchProblem {
                rule_ctx: rule.ctx.clone(),
                pattern: rule.lhs.clone(),
                subject: sub.clone(),
                subject_ctx: ctx.clone(),
            };
            for solution in c_match(&problem, &sys.sig) {
                let contractum = solution.subst.apply(&rule.rhs);
                let result = t.replace_at(pos.as_slice(), contractum).expect("valid position");
                steps.push(RewriteStep { rule: rule.name.clone(), position: pos.clone(), solution, result });
                if first_only {
                    return steps;
                }
            }
        }
    }
    steps
}

fn same_head(pattern: &Term, subject: &Term) -> bool {
    match (pattern, subject) {
        (Term::App(f, _), Term::App(g, _)) => f == g,
        (Term::Abs(..), Term::Abs(..)) => true,
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Susp(..), _) => true,
        _ => false,
    }
}

/// One R/C step from a ground term: every result of a plain-matching step
/// from some member of the `≈α,C` class of `t`, up to `≈α,C`. Fails when the
/// class has more than `bound` members.
pub fn step_r_over_c(sys: &RewriteSystem, t: &Term, bound: usize) -> Result<Vec<Term>> {
    let class = naive_c_class(t, &sys.sig, bound)?;
    let empty = FreshnessContext::new();
    let mut results: Vec<Term> = Vec::new();
    for member in &class {
        for pos in member.positions() {
            let sub = member.subterm_at(pos.as_slice()).expect("position from positions()");
            for rule in &sys.rules {
                if !same_head(&rule.lhs, sub) {
                    continue;
                }
                let problem = MatchProblem::new(rule.lhs.clone(), sub.clone()).with_rule_ctx(rule.ctx.clone());
                if let Some(sol) = nominal_match(&problem, &sys.sig) {
                    let result = member.replace_at(pos.as_slice(), sol.subst.apply(&rule.rhs)).expect("valid position");
                    if !results.iter().any(|r| c_alpha_eq(&empty, r, &result, &sys.sig)) {
                        results.push(result);
                    }
                }
            }
        }
    }
    Ok(results)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeStatus {
    NormalForm,
    StepBudgetExhausted,
}

impl fmt::Display for NormalizeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizeStatus::NormalForm => "normal-form",
            NormalizeStatus::StepBudgetExhausted => "step-budget-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub term: Term,
    pub steps: Vec<RewriteStep>,
    pub status: NormalizeStatus,
}

/// Applies the first R,C step until none applies or `max_steps` steps have
/// been taken.
pub fn normalize(sys: &RewriteSystem, ctx: &FreshnessContext, t: &Term, max_steps: usize) -> Normalization {
    let mut term = t.clone();
    let mut steps = Vec::new();
    loop {
        let Some(step) = first_step_rc(sys, ctx, &term) else {
            return Normalization { term, steps, status: NormalizeStatus::NormalForm };
        };
        if steps.len() == max_steps {
            return Normalization { term, steps, status: NormalizeStatus::StepBudgetExhausted };
        }
        term = step.result.clone();
        steps.push(step);
    }
}
