//! Fixture access shared by the integration tests.
#![allow(dead_code)]

pub mod laws;
pub mod oracle;

use std::path::PathBuf;
use std::sync::Arc;

use mml_core::provider::{DirDts, ProviderEnv};
use mml_core::world::MemoryWorld;
use mml_core::WorldSnapshot;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn world() -> Arc<WorldSnapshot> {
    Arc::new(WorldSnapshot::load(&fixture("world.json")).expect("fixture world loads"))
}

pub fn dts() -> Arc<DirDts> {
    Arc::new(DirDts(fixture("dts")))
}

pub fn env() -> ProviderEnv {
    ProviderEnv::new(Arc::new(MemoryWorld(world())), dts())
}

pub fn program(name: &str) -> String {
    read(&format!("programs/{name}.mml"))
}

/// Programs in the failure-taxonomy matrix; each reads the Czech
/// Republic's tertiary enrollment without guarding against missing data.
pub const MATRIX_PROGRAMS: &[&str] = &["casestudy", "enrollment_sum", "compare", "table"];

pub const MUTATIONS: &[&str] = &["identity", "rename-cze", "remove-cze", "remove-enrr", "missing-source"];

/// Every program with a checked-in golden.
pub const GOLDEN_PROGRAMS: &[&str] = &[
    "casestudy",
    "enrollment_sum",
    "compare",
    "table",
    "erasure_data",
    "erasure_jquery",
    "arith",
];

/// Compares `actual` with `tests/golden/<name>`; `UPDATE_GOLDEN=1`
/// rewrites the file instead.
pub fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let line = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| expected.lines().count().min(actual.lines().count()));
        Err(format!(
            "{name} differs from golden at line {}\n--- expected\n{}\n--- actual\n{}",
            line + 1,
            expected.lines().nth(line).unwrap_or("<eof>"),
            actual.lines().nth(line).unwrap_or("<eof>")
        ))
    }
}

/// The jQuery declaration excerpt: one global, one callable interface,
/// one overloaded method.
pub const JQUERY_EXCERPT: &str = "declare var jQuery: JQueryStatic;
interface JQueryStatic {
    (selector: string, context?: any): JQuery;
}
interface JQuery {
    attr(attributeName: string): string;
    attr(attributeName: string, value: any): JQuery;
}
";

pub fn provide_excerpt() -> mml_core::provider::ProvidedContext {
    use mml_core::provider::{MemoryDts, ProviderRegistry};
    use mml_core::world::OfflineWorld;
    let env = ProviderEnv::new(
        Arc::new(OfflineWorld),
        Arc::new(MemoryDts::default().with("jquery.d.ts", JQUERY_EXCERPT)),
    );
    let src = mml_core::syntax::parse_module("type j = TypeScript<\"jquery.d.ts\">").expect("parses");
    mml_core::pipeline::instantiate_providers(&src, &env, &ProviderRegistry::default()).expect("excerpt provides")
}

/// Every member of every provided type, one line per overload:
/// `<type> <static?> <kind> <name>(<params>) -> <result>`.
pub fn member_shapes(ctx: &mml_core::provider::ProvidedContext) -> Vec<String> {
    use mml_core::provider::MemberKind;
    let mut out = Vec::new();
    for id in ctx.type_ids() {
        for m in ctx.members(id).expect("members").values() {
            let kind = match m.kind {
                MemberKind::Property => "property",
                MemberKind::Method => "method",
                MemberKind::Invoke => "invoke",
            };
            for s in &m.overloads {
                let ps: Vec<String> = s
                    .params
                    .iter()
                    .map(|p| format!("{}{}", p.ty, if p.optional { "?" } else { "" }))
                    .collect();
                out.push(format!(
                    "{id} {}{kind} {}({}) -> {}",
                    if m.is_static { "static " } else { "" },
                    m.name,
                    ps.join(", "),
                    s.result
                ));
            }
        }
    }
    out.sort();
    out
}

/// The expected mapping of [`JQUERY_EXCERPT`].
pub const EXCERPT_SHAPES: &[&str] = &[
    "j static property jQuery() -> j.JQueryStatic",
    "j.JQuery method attr(string) -> string",
    "j.JQuery method attr(string, obj) -> j.JQuery",
    "j.JQueryStatic invoke Invoke(string, obj?) -> j.JQuery",
];

/// Reads a series straight out of the fixture JSON, bypassing the world
/// module.
pub fn raw_series(country: &str, indicator: &str) -> Option<Vec<(i64, f64)>> {
    let v: serde_json::Value = serde_json::from_str(&read("world.json")).expect("json");
    v["values"].as_array()?.iter().find_map(|e| {
        (e["country"] == country && e["indicator"] == indicator).then(|| {
            e["series"]
                .as_array()
                .expect("series array")
                .iter()
                .map(|p| (p[0].as_i64().expect("year"), p[1].as_f64().expect("value")))
                .collect()
        })
    })
}

/// The case study's expected result, rendered as a value.
pub fn case_study_expected() -> String {
    let parts: Vec<String> = [
        ("European Union", "EUU"),
        ("Czech Republic", "CZE"),
        ("United Kingdom", "GBR"),
        ("United States", "USA"),
    ]
    .iter()
    .map(|(name, code)| {
        let s = raw_series(code, "SE.TER.ENRR").expect("fixture has the series");
        let pts: Vec<String> = s.iter().map(|(y, x)| format!("({y}, {x:?})")).collect();
        format!("({name:?}, [{}])", pts.join("; "))
    })
    .collect();
    format!("[{}]", parts.join("; "))
}

pub fn mutation(name: &str) -> mml_core::MutationScript {
    mml_core::MutationScript::parse(&read(&format!("mutations/{name}.mut"))).expect("mutation parses")
}

/// All 20 matrix cells.
pub fn matrix() -> Vec<mml_core::harness::MatrixCell> {
    let base = world();
    let mut cells = Vec::new();
    for p in MATRIX_PROGRAMS {
        let src = program(p);
        for m in MUTATIONS {
            cells.push(mml_core::harness::matrix_cell(p, &src, m, &mutation(m), &base, dts()));
        }
    }
    cells
}
