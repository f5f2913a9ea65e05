#![allow(dead_code)]

use std::collections::BTreeSet;

use ncrw::{Atom, Perm, Signature, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn sig(decls: &[(&str, usize, bool)]) -> Signature {
    Signature::from_decls(decls).expect("valid signature")
}

/// A random member of the `≈α,C` class of a ground term: arguments of
/// commutative symbols are swapped at random and every binder is renamed to
/// a random atom that keeps the term α-equivalent.
pub fn random_variant<R: Rng>(t: &Term, sig: &Signature, rng: &mut R) -> Term {
    match t {
        Term::Atom(_) | Term::Susp(..) => t.clone(),
        Term::App(f, args) => {
            let mut args: Vec<Term> = args.iter().map(|a| random_variant(a, sig, rng)).collect();
            if sig.is_commutative(f) && rng.gen_bool(0.5) {
                args.swap(0, 1);
            }
            Term::App(f.clone(), args)
        }
        Term::Abs(a, body) => {
            let free = t.free_atoms();
            let mut pool: Vec<Atom> = ["a", "b", "c", "d"].iter().map(Atom::new).collect();
            pool.push(Atom::fresh(&t.all_atoms()));
            pool.retain(|x| !free.contains(x));
            let x = pool.choose(rng).expect("the fresh atom is always available").clone();
            let body = Perm::swap(a.clone(), x.clone()).act(body);
            Term::Abs(x, Box::new(random_variant(&body, sig, rng)))
        }
    }
}

pub fn atoms(names: &[&str]) -> BTreeSet<Atom> {
    names.iter().map(Atom::new).collect()
}

pub const PEANO: &str = "\
sig plus/2 comm
sig s/1
sig zero/0
prec plus > s > zero
status plus mul
rule plus_zero: plus(X, zero) -> X
rule plus_succ: plus(X, s(Y)) -> s(plus(X, Y))
";

/// Ground terms over `f/2`, `g/1`, `k/0` with atoms `a, b, c`.
pub fn small_sig() -> Signature {
    sig(&[("f", 2, false), ("g", 1, false), ("k", 0, false)])
}

pub fn small_c_sig() -> Signature {
    sig(&[("plus", 2, true), ("g", 1, false), ("k", 0, false)])
}
