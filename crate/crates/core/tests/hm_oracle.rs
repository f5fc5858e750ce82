mod common;

use common::oracle::{compare, gen_term, reference_type, Agreement, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn inference_matches_reference_on_generated_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut typed, mut rejected) = (0, 0);
    let mut disagreements = Vec::new();
    for _ in 0..6000 {
        let t = gen_term(&mut rng, 4, &mut Vec::new());
        match compare(&t) {
            Agreement::BothTyped => typed += 1,
            Agreement::BothRejected => rejected += 1,
            Agreement::Disagree(d) => disagreements.push(d),
        }
    }
    assert!(
        disagreements.is_empty(),
        "{}",
        disagreements[..disagreements.len().min(5)].join("\n")
    );
    assert!(
        typed >= 200,
        "only {typed} well-typed terms generated ({rejected} rejected)"
    );
}

#[test]
fn let_polymorphism_and_value_restriction() {
    use Term::*;
    let id = || Lam("x".into(), Box::new(Var("x".into())));
    let poly = Let(
        "f".into(),
        Box::new(id()),
        Box::new(Pair(
            Box::new(App(Box::new(Var("f".into())), Box::new(Int(1)))),
            Box::new(App(Box::new(Var("f".into())), Box::new(Bool(true)))),
        )),
    );
    assert_eq!(reference_type(&poly).unwrap(), ("(int * bool)".to_string(), false));
    assert!(matches!(compare(&poly), Agreement::BothTyped));

    // `f` is bound to an application, so it stays monomorphic.
    let mono = Let(
        "f".into(),
        Box::new(App(Box::new(id()), Box::new(id()))),
        Box::new(Pair(
            Box::new(App(Box::new(Var("f".into())), Box::new(Int(1)))),
            Box::new(App(Box::new(Var("f".into())), Box::new(Bool(true)))),
        )),
    );
    assert!(reference_type(&mono).is_err());
    assert!(matches!(compare(&mono), Agreement::BothRejected));

    let compose = Lam(
        "f".into(),
        Box::new(Lam(
            "g".into(),
            Box::new(Lam(
                "x".into(),
                Box::new(App(
                    Box::new(Var("f".into())),
                    Box::new(App(Box::new(Var("g".into())), Box::new(Var("x".into())))),
                )),
            )),
        )),
    );
    assert_eq!(
        reference_type(&compose).unwrap().0,
        "((t0 -> t1) -> ((t2 -> t0) -> (t2 -> t1)))"
    );
    assert!(matches!(compare(&compose), Agreement::BothTyped));
}

#[test]
fn occurs_check_rejects_self_application() {
    let t = Term::Lam(
        "x".into(),
        Box::new(Term::App(
            Box::new(Term::Var("x".into())),
            Box::new(Term::Var("x".into())),
        )),
    );
    assert!(matches!(compare(&t), Agreement::BothRejected));
}
