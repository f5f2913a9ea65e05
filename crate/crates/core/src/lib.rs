//! Nominal terms with commutative symbols.
//!
//! The crate covers nominal terms over atoms, unknowns, abstractions and
//! suspended permutations; freshness contexts and quantified fixed-point
//! constraints; α-equivalence and α-equivalence modulo commutativity;
//! nominal matching and C-matching; rewriting modulo commutativity; a
//! commutativity-aware recursive path ordering with a termination check;
//! and brute-force oracles for testing all of the above.

pub mod constraint;
pub mod equiv;
pub mod error;
pub mod oracle;
pub mod ordering;
pub mod perm;
pub mod rewrite;
pub mod syntax;
pub mod term;

pub use constraint::{
    check_fixpoint_ground, check_quantified_fixpoint, check_quantified_fixpoint_with, derive_fresh, fresh_as_fixpoint,
    fresh_constraints, split_fixpoint, FreshnessContext, QuantifiedFixpoint,
};
pub use equiv::{alpha_eq, c_alpha_eq, c_match, nominal_match, MatchProblem, MatchSolution};
pub use error::{Error, ParseErrorKind, Result};
pub use oracle::{enum_ground_terms, enum_perms, naive_c_class, naive_match, EnumConfig};
pub use ordering::{
    check_termination, check_termination_with, crpo_ge, crpo_gt, ext_compare, CrpoConfig, InstanceConfig, Precedence,
    Status, StatusMap, TerminationReport,
};
pub use perm::Perm;
pub use rewrite::{
    first_step_rc, normalize, step_r_over_c, step_rc, Normalization, NormalizeStatus, RewriteRule, RewriteStep,
    RewriteSystem,
};
pub use syntax::{
    parse_atom, parse_atoms, parse_ctx, parse_fixpoint, parse_perm, parse_problem, parse_term, print_term, ProblemFile,
};
pub use term::{Atom, Position, Signature, Substitution, Symbol, SymbolInfo, Term, Var};
