//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use mml_core::async_cps::Backend;
use mml_core::diag::codes;
use mml_core::harness::safety_suite;
use mml_core::interp::interpret;
use mml_core::js::emit_module;
use mml_core::pipeline::compile;
use rand::SeedableRng;

type Check = fn() -> Result<String, String>;

fn case_study() -> Result<String, String> {
    let start = Instant::now();
    let c = compile(&common::program("casestudy"), &common::env(), Backend::Interp).map_err(|e| e.to_string())?;
    if !c.core.check_desugared() {
        return Err("core still contains async sugar".into());
    }
    let v = interpret(&c.core, &common::world()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = common::case_study_expected();
    if v.to_string() != expected {
        return Err(format!("got {v}\nexpected {expected}"));
    }
    if elapsed.as_secs_f64() >= 1.0 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("4 series in {elapsed:?}"))
}

fn matrix() -> Result<String, String> {
    let cells = common::matrix();
    let bad: Vec<String> = cells
        .iter()
        .filter(|c| !c.matches)
        .map(|c| format!("{} x {}: {}", c.program, c.mutation, c.run.name()))
        .collect();
    if cells.len() != 20 || !bad.is_empty() {
        return Err(format!("{} cells, mismatches: {}", cells.len(), bad.join(", ")));
    }
    Ok("20/20 cells".into())
}

fn safety() -> Result<String, String> {
    let start = Instant::now();
    let r = safety_suite(1000, 20240601);
    let elapsed = start.elapsed();
    if !r.counterexamples.is_empty() {
        return Err(r.to_string());
    }
    if elapsed.as_secs_f64() >= 10.0 {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "1000 trials, hypothesis held in {}, 0 counterexamples, {elapsed:?}",
        r.hypothesis_held
    ))
}

fn hm_oracle() -> Result<String, String> {
    use common::oracle::{compare, gen_term, Agreement};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (mut typed, mut rejected) = (0, 0);
    for _ in 0..6000 {
        match compare(&gen_term(&mut rng, 4, &mut Vec::new())) {
            Agreement::BothTyped => typed += 1,
            Agreement::BothRejected => rejected += 1,
            Agreement::Disagree(d) => return Err(d),
        }
    }
    if typed < 200 {
        return Err(format!("only {typed} well-typed terms"));
    }
    Ok(format!("{typed} typed and {rejected} rejected terms agree"))
}

fn erasure() -> Result<String, String> {
    let env = common::env();
    let shapes = [
        ("erasure_data", "data.GetCountries().GetCountry(\"CZE\")"),
        ("erasure_data", "cz.AsyncGetIndicator(\"SE.TER.ENRR\")"),
        ("erasure_jquery", "PropertyGetImpl(true,\"jQuery\",[])"),
        (
            "erasure_jquery",
            "CallImpl(false,\"\",[PropertyGetImpl(true,\"jQuery\",[]);command])",
        ),
        (
            "erasure_jquery",
            "CallImpl(false,\"attr\",[jQuery \"<input>\";\"type\";\"checkbox\"])",
        ),
    ];
    for name in ["erasure_data", "erasure_jquery"] {
        let c = compile(&common::program(name), &env, Backend::Js).map_err(|e| e.to_string())?;
        let dump = c.erased.dump();
        common::golden(&format!("{name}.core"), &dump)?;
        for (_, shape) in shapes.iter().filter(|(n, _)| *n == name) {
            if !dump.contains(shape) {
                return Err(format!("{name}: no `{shape}` in\n{dump}"));
            }
        }
    }
    Ok("both displays match their goldens".into())
}

fn async_laws() -> Result<String, String> {
    let r = common::laws::check_laws(2024, 240);
    if let Some(f) = r.failures.first() {
        return Err(f.clone());
    }
    for backend in [Backend::Js, Backend::Interp] {
        for start in ["Async.RunSynchronously", "Async.Start"] {
            let e = compile(&format!("do {start} (async {{ return 1 }})"), &common::env(), backend)
                .err()
                .ok_or(format!("{start} accepted"))?;
            if e.diagnostics().first().map(|d| d.code) != Some(codes::ASYNC_UNSUPPORTED_START) {
                return Err(format!("{start}: {e}"));
            }
        }
    }
    Ok(format!(
        "240 instances ({} with values); blocking starts rejected",
        r.values
    ))
}

fn dts_mapping() -> Result<String, String> {
    let shapes = common::member_shapes(&common::provide_excerpt());
    if shapes != common::EXCERPT_SHAPES {
        return Err(format!("{shapes:#?}"));
    }
    Ok("jQuery, Invoke, two attr overloads".into())
}

fn js_goldens() -> Result<String, String> {
    let env = common::env();
    let mut all = String::new();
    for name in common::GOLDEN_PROGRAMS {
        let c = compile(&common::program(name), &env, Backend::Js).map_err(|e| format!("{name}: {e}"))?;
        let js = emit_module(&c.core).map_err(|d| format!("{name}: {d:?}"))?.source_text;
        common::golden(&format!("{name}.js"), &js)?;
        all.push_str(&js);
    }
    for needle in ["((n/2)|0)", "(k*1.0)"] {
        if !all.contains(needle) {
            return Err(format!("no `{needle}` in the emitted code"));
        }
    }
    Ok(format!("{} programs byte-identical", common::GOLDEN_PROGRAMS.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("case study reproduction", case_study),
        ("failure taxonomy matrix", matrix),
        ("relativized type safety", safety),
        ("algorithm W oracle equivalence", hm_oracle),
        ("erasure fidelity", erasure),
        ("async laws", async_laws),
        ("d.ts mapping", dts_mapping),
        ("golden JS emission", js_goldens),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
