//! Generated async programs for the monad-law checks.

use rand::Rng;

use mml_core::async_cps::Backend;
use mml_core::interp::{run, InterpOptions};
use mml_core::pipeline::compile;

const COUNTRIES: &[&str] = &["Czech Republic", "United Kingdom", "Germany", "Japan"];
const INDICATORS: &[&str] = &["School enrollment, tertiary (% gross)", "Population, total"];

fn read(rng: &mut impl Rng) -> String {
    format!(
        "data.Countries.`{}`.Indicators.`{}`",
        COUNTRIES[rng.gen_range(0..COUNTRIES.len())],
        INDICATORS[rng.gen_range(0..INDICATORS.len())]
    )
}

/// An `int async` computation.
pub fn gen_comp(rng: &mut impl Rng, depth: u32) -> String {
    let n = rng.gen_range(0..20);
    match if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) } {
        0 => format!("async {{ return {n} }}"),
        1 => format!("async {{ let! s = {} in return List.length s + {n} }}", read(rng)),
        2 => format!(
            "async {{ let! a = {} in let! b = {} in return a * {n} + b }}",
            gen_comp(rng, depth - 1),
            gen_comp(rng, depth - 1)
        ),
        3 => format!(
            "async {{ let k = {n} in if k < 10 then return k else let! c = {} in return c - k }}",
            gen_comp(rng, depth - 1)
        ),
        _ => format!(
            "async {{ let acc = [| |] in (for i in [1; 2] do let! c = {} in acc.push(c + i)); return Array.length acc }}",
            gen_comp(rng, depth - 1)
        ),
    }
}

/// An `int -> int async` function.
pub fn gen_fun(rng: &mut impl Rng, depth: u32) -> String {
    let n = rng.gen_range(0..20);
    match rng.gen_range(0..3) {
        0 => format!("(fun x -> async {{ return x + {n} }})"),
        1 => format!(
            "(fun x -> async {{ let! s = {} in return x * List.length s }})",
            read(rng)
        ),
        _ => format!(
            "(fun x -> async {{ let! y = {} in return x - y }})",
            gen_comp(rng, depth)
        ),
    }
}

/// A law instance. The language has no `return!`, so a computation in
/// tail position is written `let! r = c in return r`.
pub struct Law {
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
}

pub fn gen_law(rng: &mut impl Rng) -> Law {
    let m = gen_comp(rng, 2);
    let f = gen_fun(rng, 1);
    let g = gen_fun(rng, 1);
    let v = rng.gen_range(0..50);
    match rng.gen_range(0..3) {
        0 => Law {
            name: "left unit",
            lhs: format!("async {{ let! x = async {{ return {v} }} in let! r = f x in return r }}"),
            rhs: format!("async {{ let! r = f {v} in return r }}"),
        },
        1 => Law {
            name: "right unit",
            lhs: "async { let! x = m in return x }".into(),
            rhs: "m".into(),
        },
        _ => Law {
            name: "associativity",
            lhs: "async { let! y = async { let! x = m in let! r = f x in return r } in let! z = g y in return z }"
                .into(),
            rhs: "async { let! x = m in let! y = f x in let! z = g y in return z }".into(),
        },
    }
    .with_prelude(&m, &f, &g)
}

impl Law {
    fn with_prelude(self, m: &str, f: &str, g: &str) -> Law {
        let head = format!(
            "type W = WorldBankData<Asynchronous=true>\nlet data = W.GetDataContext()\nlet m = {m}\nlet f = {f}\nlet g = {g}\n"
        );
        Law {
            name: self.name,
            lhs: format!("{head}do {}\n", self.lhs),
            rhs: format!("{head}do {}\n", self.rhs),
        }
    }
}

/// Result and read sequence of a program under the fixture world.
pub fn observe(src: &str, opts: &InterpOptions) -> Result<(String, Vec<String>), String> {
    let c = compile(src, &super::env(), Backend::Interp).map_err(|e| format!("{e}\n{src}"))?;
    let r = run(&c.core, &super::world(), opts);
    let reads = r.trace.into_iter().filter(|t| t.starts_with("read ")).collect();
    Ok((format!("{:?}", r.result.map(|v| v.to_string())), reads))
}

pub struct LawReport {
    pub failures: Vec<String>,
    /// Instances where both sides ran to a value (the rest agree on a
    /// failure, e.g. a missing series).
    pub values: usize,
}

/// Checks `count` generated law instances.
pub fn check_laws(seed: u64, count: usize) -> LawReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut values = 0;
    for _ in 0..count {
        let law = gen_law(&mut rng);
        let lhs = observe(&law.lhs, &InterpOptions::default());
        let rhs = observe(&law.rhs, &InterpOptions::default());
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => values += usize::from(a.0.starts_with("Ok")),
            (a, b) => failures.push(format!("{}:\n{}\n{a:?}\n{b:?}", law.name, law.lhs)),
        }
    }
    LawReport { failures, values }
}
