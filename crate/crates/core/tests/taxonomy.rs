mod common;

use mml_core::harness::{classify, Expectation, WorldState};
use mml_core::FailureKind;

#[test]
fn mutation_scripts_predict_their_outcome() {
    let expect = [
        ("identity", Expectation::Identity),
        ("rename-cze", Expectation::Rename),
        ("remove-cze", Expectation::Removal),
        ("remove-enrr", Expectation::Removal),
        ("missing-source", Expectation::ProviderFailure),
    ];
    for (name, e) in expect {
        assert_eq!(common::mutation(name).expectation(), e, "{name}");
    }
}

#[test]
fn every_matrix_cell_matches() {
    let cells = common::matrix();
    assert_eq!(cells.len(), 20);
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.matches)
        .map(|c| {
            format!(
                "{} x {}: run {} / recompile {:?}",
                c.program,
                c.mutation,
                c.run,
                c.recompile.as_ref().map(|k| k.name())
            )
        })
        .collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn rename_keeps_the_old_build_running() {
    let base = common::world();
    let WorldState::Available(w1) = common::mutation("rename-cze").apply(&base) else {
        panic!("rename keeps the source");
    };
    let src = common::program("enrollment_sum");
    let old = classify(&src, &WorldState::Available(base.clone()), &w1, common::dts());
    let expected: f64 = common::raw_series("CZE", "SE.TER.ENRR")
        .unwrap()
        .iter()
        .map(|p| p.1)
        .sum();
    assert_eq!(old, FailureKind::Success(mml_core::Value::Float(expected)));
    let FailureKind::RecompilationFailure(ds) = classify(&src, &WorldState::Available(w1.clone()), &w1, common::dts())
    else {
        panic!("recompiling against the renamed world fails");
    };
    assert!(ds.iter().any(|d| d.message.contains("Czech Republic")), "{ds:?}");
}

#[test]
fn removal_fails_on_the_missing_pair() {
    let base = common::world();
    let WorldState::Available(w1) = common::mutation("remove-cze").apply(&base) else {
        panic!()
    };
    let run = classify(
        &common::program("compare"),
        &WorldState::Available(base),
        &w1,
        common::dts(),
    );
    let FailureKind::RuntimeFailure(e) = run else {
        panic!("{run}")
    };
    assert_eq!(
        e,
        mml_core::RuntimeFailure::MissingKey {
            country: "CZE".into(),
            indicator: "SE.TER.ENRR".into()
        }
    );
}

#[test]
fn dropped_data_fails_only_at_run_time() {
    let base = common::world();
    let script = mml_core::MutationScript::parse("drop-pair CZE SE.TER.ENRR").unwrap();
    let cell = mml_core::harness::matrix_cell(
        "enrollment_sum",
        &common::program("enrollment_sum"),
        "drop",
        &script,
        &base,
        common::dts(),
    );
    assert!(cell.matches, "{cell:?}");
}
