mod common;

use ncrw::oracle::{alpha_canonical, c_normal_form};
use ncrw::{
    alpha_eq, c_alpha_eq, c_match, enum_ground_terms, enum_perms, nominal_match, parse_ctx, parse_term, EnumConfig,
    FreshnessContext, MatchProblem, Term,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use common::{atoms, random_variant, small_c_sig};

fn ground_terms(depth: usize) -> Vec<Term> {
    enum_ground_terms(&EnumConfig::new(small_c_sig(), &["a", "b", "c"], depth, true))
}

#[test]
fn alpha_eq_is_an_equivalence() {
    let empty = FreshnessContext::new();
    let terms = ground_terms(3);
    for t in &terms {
        assert!(alpha_eq(&empty, t, t));
    }
    let sig = small_c_sig();
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20_000 {
        let t = terms.choose(&mut rng).unwrap();
        let u = if rand::random::<bool>() {
            random_variant(t, &sig, &mut rng)
        } else {
            terms.choose(&mut rng).unwrap().clone()
        };
        let v = terms.choose(&mut rng).unwrap();
        assert_eq!(alpha_eq(&empty, t, &u), alpha_eq(&empty, &u, t));
        if alpha_eq(&empty, t, &u) && alpha_eq(&empty, &u, v) {
            assert!(alpha_eq(&empty, t, v));
        }
    }
}

#[test]
fn alpha_eq_is_equivariant() {
    let empty = FreshnessContext::new();
    let sig = small_c_sig();
    let perms = enum_perms(&atoms(&["a", "b", "c", "d"])).unwrap();
    let terms = ground_terms(2);
    let mut rng = StdRng::seed_from_u64(5);
    for t in &terms {
        let u = random_variant(t, &sig, &mut rng);
        let v = terms.choose(&mut rng).unwrap();
        for p in &perms {
            let (pt, pu, pv) = (p.act(t), p.act(&u), p.act(v));
            assert_eq!(alpha_eq(&empty, t, &u), alpha_eq(&empty, &pt, &pu));
            assert_eq!(alpha_eq(&empty, t, v), alpha_eq(&empty, &pt, &pv));
        }
    }
}

#[test]
fn c_alpha_eq_extends_alpha_eq_and_agrees_with_normal_forms() {
    let empty = FreshnessContext::new();
    let sig = small_c_sig();
    let terms = ground_terms(2);
    let normal: Vec<Term> = terms.iter().map(|t| c_normal_form(t, &sig)).collect();
    let canon: Vec<Term> = terms.iter().map(alpha_canonical).collect();
    for (i, t) in terms.iter().enumerate() {
        for (j, u) in terms.iter().enumerate() {
            let a = alpha_eq(&empty, t, u);
            let c = c_alpha_eq(&empty, t, u, &sig);
            assert!(!a || c);
            assert_eq!(a, canon[i] == canon[j], "{t} ~ {u}");
            assert_eq!(c, normal[i] == normal[j], "{t} ~C {u}");
        }
    }
}

#[test]
fn equivalence_examples() {
    let sig = small_c_sig();
    let empty = FreshnessContext::new();
    let t = |s: &str| parse_term(s, &sig).unwrap();
    assert!(alpha_eq(&empty, &t("[a]g(a)"), &t("[b]g(b)")));
    assert!(!alpha_eq(&empty, &t("[a]g(b)"), &t("[b]g(b)")));
    assert!(!alpha_eq(&empty, &t("plus(a, b)"), &t("plus(b, a)")));
    assert!(c_alpha_eq(&empty, &t("plus(a, b)"), &t("plus(b, a)"), &sig));
    assert!(c_alpha_eq(&empty, &t("[a]plus(a, b)"), &t("[c]plus(b, c)"), &sig));
    let ctx = parse_ctx("a#X, b#X").unwrap();
    assert!(alpha_eq(&ctx, &t("[a]X"), &t("[b]X")));
    assert!(!alpha_eq(&FreshnessContext::new(), &t("[a]X"), &t("[b]X")));
    assert!(alpha_eq(&ctx, &t("(a b).X"), &t("X")));
}

#[test]
fn matching_examples() {
    let sig = small_c_sig();
    let t = |s: &str| parse_term(s, &sig).unwrap();
    let p = MatchProblem::new(t("plus(X, g(Y))"), t("plus(g(a), g(b))"));
    let sols = c_match(&p, &sig);
    assert_eq!(sols.len(), 2);
    assert!(nominal_match(&p, &sig).is_some());
    let p = MatchProblem::new(t("plus(X, X)"), t("plus(a, b)"));
    assert!(c_match(&p, &sig).is_empty());
    let p = MatchProblem::new(t("[a]X"), t("[b]g(b)"));
    let sol = nominal_match(&p, &sig).unwrap();
    assert_eq!(sol.subst.get(&ncrw::Var::new("X")).unwrap(), &t("g(a)"));
    let p = MatchProblem::new(t("[a]X"), t("[b]g(a)")).with_rule_ctx(parse_ctx("a#X").unwrap());
    assert!(c_match(&p, &sig).is_empty());
}

fn arb_ground() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![prop::sample::select(vec!["a", "b", "c"]).prop_map(Term::atom), Just(Term::constant("k")),];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::app("plus", vec![x, y])),
            inner.clone().prop_map(|x| Term::app("g", vec![x])),
            (prop::sample::select(vec!["a", "b", "c"]), inner).prop_map(|(a, x)| Term::abs(a, x)),
        ]
    })
}

fn arb_pattern() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b"]).prop_map(Term::atom),
        Just(Term::constant("k")),
        Just(Term::var("X")),
        Just(Term::var("Y")),
        Just(parse_term("(a b).X", &small_c_sig()).unwrap()),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::app("plus", vec![x, y])),
            inner.clone().prop_map(|x| Term::app("g", vec![x])),
            (prop::sample::select(vec!["a", "b"]), inner).prop_map(|(a, x)| Term::abs(a, x)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn c_match_solutions_are_sound(pattern in arb_pattern(), seed in arb_ground(), use_instance: bool) {
        let sig = small_c_sig();
        let empty = FreshnessContext::new();
        // Half of the subjects are instances of the pattern so that solutions exist.
        let subject = if use_instance {
            let mut s = ncrw::Substitution::new();
            s.insert(ncrw::Var::new("X"), seed.clone());
            s.insert(ncrw::Var::new("Y"), Term::app("g", vec![seed]));
            let mut rng = StdRng::seed_from_u64(1);
            random_variant(&s.apply(&pattern), &sig, &mut rng)
        } else {
            seed
        };
        let sols = c_match(&MatchProblem::new(pattern.clone(), subject.clone()), &sig);
        if use_instance {
            prop_assert!(!sols.is_empty());
        }
        for sol in &sols {
            prop_assert!(c_alpha_eq(&empty, &sol.subst.apply(&pattern), &subject, &sig));
        }
        if let Some(sol) = nominal_match(&MatchProblem::new(pattern.clone(), subject.clone()), &sig) {
            prop_assert!(alpha_eq(&empty, &sol.subst.apply(&pattern), &subject));
        }
    }

    #[test]
    fn normal_form_decides_c_alpha_eq(t in arb_ground(), seed: u64) {
        let sig = small_c_sig();
        let mut rng = StdRng::seed_from_u64(seed);
        let u = random_variant(&t, &sig, &mut rng);
        prop_assert!(c_alpha_eq(&FreshnessContext::new(), &t, &u, &sig));
        prop_assert_eq!(c_normal_form(&t, &sig), c_normal_form(&u, &sig));
    }
}
