//! Workloads shared by the benchmarks.

use ncrw::{parse_problem, parse_term, ProblemFile, Signature, Term};

pub const PEANO: &str = "\
sig plus/2 comm
sig s/1
sig zero/0
prec plus > s > zero
status plus mul
rule plus_zero: plus(X, zero) -> X
rule plus_succ: plus(X, s(Y)) -> s(plus(X, Y))
";

pub fn peano() -> ProblemFile {
    parse_problem(PEANO).expect("valid problem")
}

/// The numeral `s^n(zero)`.
pub fn numeral(n: usize) -> Term {
    (0..n).fold(Term::constant("zero"), |t, _| Term::app("s", vec![t]))
}

/// `plus(n, m)` on numerals.
pub fn sum(n: usize, m: usize) -> Term {
    Term::app("plus", vec![numeral(n), numeral(m)])
}

/// A balanced tree of `plus` over `2^depth` distinct atoms.
pub fn plus_tree(depth: usize) -> Term {
    fn go(depth: usize, next: &mut usize) -> Term {
        if depth == 0 {
            *next += 1;
            Term::atom(&format!("a{next}"))
        } else {
            Term::app("plus", vec![go(depth - 1, next), go(depth - 1, next)])
        }
    }
    go(depth, &mut 0)
}

/// Mirror image of [`plus_tree`], equal modulo commutativity.
pub fn mirrored(t: &Term) -> Term {
    match t {
        Term::App(f, args) => Term::App(f.clone(), args.iter().rev().map(mirrored).collect()),
        _ => t.clone(),
    }
}

pub fn term(src: &str, sig: &Signature) -> Term {
    parse_term(src, sig).expect("valid term")
}
