//! Checked-in goldens for the erased core dump and the emitted JavaScript.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p mml-core --test golden`.

mod common;

use mml_core::async_cps::Backend;
use mml_core::js::emit_module;
use mml_core::pipeline::compile;

fn check_all(ext: &str, render: impl Fn(&mml_core::Compiled) -> String) {
    let env = common::env();
    let failures: Vec<String> = common::GOLDEN_PROGRAMS
        .iter()
        .filter_map(|name| {
            let c = compile(&common::program(name), &env, Backend::Js).unwrap_or_else(|e| panic!("{name}: {e}"));
            common::golden(&format!("{name}.{ext}"), &render(&c)).err()
        })
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn erased_core_matches_goldens() {
    check_all("core", |c| c.erased.dump());
}

#[test]
fn emitted_js_matches_goldens() {
    check_all("js", |c| emit_module(&c.core).expect("emits").source_text);
}

#[test]
fn emission_is_deterministic() {
    let env = common::env();
    let src = common::program("casestudy");
    let a = emit_module(&compile(&src, &env, Backend::Js).unwrap().core).unwrap();
    let b = emit_module(&compile(&src, &env, Backend::Js).unwrap().core).unwrap();
    assert_eq!(a, b);
}

fn emitted(name: &str) -> mml_core::JsDocument {
    let c = compile(&common::program(name), &common::env(), Backend::Js).unwrap();
    emit_module(&c.core).unwrap()
}

#[test]
fn runtime_references_are_shim_symbols() {
    for name in common::GOLDEN_PROGRAMS {
        let doc = emitted(name);
        let mut seen = std::collections::BTreeSet::new();
        for (i, _) in doc.source_text.match_indices("MMLRT.") {
            let rest = &doc.source_text[i + "MMLRT.".len()..];
            let sym: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
            assert!(mml_core::shim::is_shim_symbol(&sym), "{name}: MMLRT.{sym}");
            seen.insert(sym);
        }
        assert_eq!(seen, doc.referenced_shim_symbols, "{name}");
    }
}

/// Syntax-checks the emitted code with node when it is installed.
#[test]
fn emitted_js_parses() {
    let Ok(out) = std::process::Command::new("node").arg("--version").output() else {
        eprintln!("node not found; skipping");
        return;
    };
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    for name in common::GOLDEN_PROGRAMS {
        let path = dir.path().join(format!("{name}.js"));
        std::fs::write(&path, emitted(name).source_text).unwrap();
        let o = std::process::Command::new("node")
            .arg("--check")
            .arg(&path)
            .output()
            .unwrap();
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

/// Runs the provider-free arithmetic program under node with a minimal
/// list runtime and compares with the interpreter.
#[test]
fn arithmetic_agrees_with_interpreter_under_node() {
    if std::process::Command::new("node").arg("--version").output().is_err() {
        eprintln!("node not found; skipping");
        return;
    }
    let prelude = "var MMLRT = { nil: {}, cons: function (h, t) { return { h: h, t: t }; } };\n";
    let js = format!(
        "{prelude}{}\nconsole.log(JSON.stringify($result));\n",
        emitted("arith").source_text
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("arith.js");
    std::fs::write(&path, js).unwrap();
    let o = std::process::Command::new("node").arg(&path).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let from_js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();

    let c = compile(&common::program("arith"), &common::env(), Backend::Interp).unwrap();
    let v = mml_core::interp::interpret(&c.core, &common::world()).unwrap();
    let mml_core::Value::Tuple(items) = v else {
        panic!("{v}")
    };
    let js_items = from_js.as_array().unwrap();
    assert_eq!(items.len(), js_items.len());
    for (a, b) in items.iter().zip(js_items) {
        match a {
            mml_core::Value::Int(i) => assert_eq!(b.as_i64(), Some(*i)),
            mml_core::Value::Float(x) => assert!((b.as_f64().unwrap() - x).abs() < 1e-12),
            mml_core::Value::Str(s) => assert_eq!(b.as_str(), Some(s.as_ref())),
            other => panic!("unexpected {other}"),
        }
    }
}
