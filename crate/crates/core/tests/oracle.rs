mod common;

use ncrw::oracle::{alpha_canonical, c_normal_form, single_swaps, solution_keys, Universe};
use ncrw::{
    c_alpha_eq, c_match, enum_ground_terms, naive_c_class, naive_match, parse_ctx, parse_term, EnumConfig,
    FreshnessContext, MatchProblem, Signature,
};

use common::{sig, small_c_sig};

#[test]
fn c_classes_are_closed_under_single_swaps() {
    let s = small_c_sig();
    let empty = FreshnessContext::new();
    let shallow = enum_ground_terms(&EnumConfig::new(s.clone(), &["a", "b"], 2, true));
    let deep = enum_ground_terms(&EnumConfig::new(s.clone(), &["a", "b"], 3, true));
    for t in shallow.into_iter().chain(deep.into_iter().step_by(97)) {
        let class = naive_c_class(&t, &s, 10_000).unwrap();
        assert!(class.contains(&alpha_canonical(&t)));
        for member in &class {
            assert!(c_alpha_eq(&empty, member, &t, &s));
            for next in single_swaps(member, &s) {
                assert!(class.contains(&next), "{next} escapes the class of {t}");
            }
        }
    }
}

#[test]
fn c_class_sizes() {
    let s = sig(&[("plus", 2, true), ("k", 0, false)]);
    let size = |src: &str| naive_c_class(&parse_term(src, &s).unwrap(), &s, 100).unwrap().len();
    assert_eq!(size("plus(a, a)"), 1);
    assert_eq!(size("plus(a, b)"), 2);
    assert_eq!(size("plus(plus(a, b), c)"), 4);
    assert_eq!(size("plus(plus(a, b), plus(c, k))"), 8);
    assert!(naive_c_class(&parse_term("plus(plus(a, b), plus(c, k))", &s).unwrap(), &s, 5).is_err());
    assert!(naive_c_class(&parse_term("plus(X, a)", &s).unwrap(), &s, 5).is_err());
}

#[test]
fn counts_follow_the_recurrence() {
    let s = sig(&[("g", 1, false), ("h", 0, false)]);
    let cfg = EnumConfig::new(s, &["a"], 1, false);
    assert_eq!(cfg.count(), 4);
    assert_eq!(enum_ground_terms(&cfg).len(), 4);
    let s = small_c_sig();
    for depth in 0..=3 {
        for abs in [false, true] {
            let cfg = EnumConfig::new(s.clone(), &["a", "b"], depth, abs);
            assert_eq!(cfg.count(), enum_ground_terms(&cfg).len() as u128);
        }
    }
}

fn matching_universe() -> (Signature, EnumConfig) {
    let s = small_c_sig();
    let cfg = EnumConfig::new(s.clone(), &["a", "b"], 2, true);
    (s, cfg)
}

#[test]
fn naive_match_agrees_with_c_match() {
    let (s, cfg) = matching_universe();
    let universe = Universe::new(cfg.clone());
    let patterns = ["plus(X, Y)", "plus(X, X)", "[a]X", "plus(g(X), (a b).Y)", "[a]plus(a, X)", "g([b]X)"];
    for src in patterns {
        let pattern = parse_term(src, &s).unwrap();
        for ctx in [FreshnessContext::new(), parse_ctx("a#X").unwrap()] {
            let index = universe.index(&pattern, &ctx);
            for (subject, nf) in universe.terms().iter().zip(universe.normal_forms()) {
                let p = MatchProblem::new(pattern.clone(), subject.clone()).with_rule_ctx(ctx.clone());
                let fast = solution_keys(&c_match(&p, &s), &s);
                assert_eq!(fast, index.lookup_normal_form(nf), "{src} vs {subject}");
                assert_eq!(nf, &c_normal_form(subject, &s));
            }
        }
    }
    // The direct enumerator agrees with the index on a sample.
    let pattern = parse_term("plus(X, g(Y))", &s).unwrap();
    for subject in universe.terms().iter().step_by(37) {
        let p = MatchProblem::new(pattern.clone(), subject.clone());
        assert_eq!(solution_keys(&naive_match(&p, &s, &cfg), &s), solution_keys(&c_match(&p, &s), &s));
    }
}
