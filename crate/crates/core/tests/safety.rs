use std::time::Instant;

use mml_core::harness::{safety_suite, safety_suite_with, Template, WorldChange, TEMPLATES};

#[test]
fn thousand_trials_without_counterexample() {
    let start = Instant::now();
    let r = safety_suite(1000, 20240601);
    assert!(r.counterexamples.is_empty(), "{r}");
    assert_eq!(r.trials, 1000);
    // The hypothesis must be exercised on both sides.
    assert!(r.hypothesis_held >= 200, "{r}");
    assert!(r.excluded_failures > 0, "{r}");
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn suite_is_reproducible() {
    assert_eq!(safety_suite(100, 3), safety_suite(100, 3));
}

#[test]
fn unchanged_world_always_satisfies_guarded_programs() {
    let r = safety_suite_with(&[Template::OptionalReads], 200, 9, WorldChange::Same);
    assert_eq!(r.hypothesis_held + r.excluded_successes, 200, "{r}");
    assert!(r.counterexamples.is_empty());
}

#[test]
fn each_template_is_covered() {
    for t in TEMPLATES {
        let r = safety_suite_with(&[*t], 100, 77, WorldChange::Perturb);
        assert!(r.counterexamples.is_empty(), "{t:?}: {r}");
        assert!(r.hypothesis_held > 0, "{t:?}: {r}");
    }
}
