//! Compile-under-w0 / run-under-w1 experiments.
//!
//! [`classify`] sorts one experiment into the failure taxonomy. World
//! changes are written in a small mutation language (see
//! [`MutationScript::parse`]). [`safety_suite`] checks the relativized
//! safety property on generated programs and snapshots.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::async_cps::Backend;
use crate::diag::Diagnostic;
use crate::interp::{self, InterpOptions, RuntimeFailure, Value};
use crate::pipeline::{compile, CompileError};
use crate::provider::{DtsSource, MemoryDts, ProviderEnv};
use crate::types::CoreType;
use crate::world::{Entity, MemoryWorld, OfflineWorld, ValueEntry, WorldSnapshot, WorldSource};

/// One experiment outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    ProviderFailure(String),
    RecompilationFailure(Vec<Diagnostic>),
    RuntimeFailure(RuntimeFailure),
    Success(Value),
}

impl FailureKind {
    pub fn name(&self) -> &'static str {
        match self {
            FailureKind::ProviderFailure(_) => "ProviderFailure",
            FailureKind::RecompilationFailure(_) => "RecompilationFailure",
            FailureKind::RuntimeFailure(_) => "RuntimeFailure",
            FailureKind::Success(_) => "Success",
        }
    }
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureKind::ProviderFailure(r) => write!(f, "ProviderFailure: {r}"),
            FailureKind::RecompilationFailure(ds) => {
                write!(f, "RecompilationFailure")?;
                for d in ds {
                    write!(f, "\n  {d}")?;
                }
                Ok(())
            }
            FailureKind::RuntimeFailure(e) => write!(f, "RuntimeFailure: {e}"),
            FailureKind::Success(v) => write!(f, "Success: {v}"),
        }
    }
}

/// The compile-time world: a snapshot, or a source that cannot be read.
#[derive(Debug, Clone)]
pub enum WorldState {
    Available(Arc<WorldSnapshot>),
    Unavailable,
}

impl WorldState {
    pub fn snapshot(&self) -> Option<&WorldSnapshot> {
        match self {
            WorldState::Available(w) => Some(w),
            WorldState::Unavailable => None,
        }
    }

    fn source(&self) -> Arc<dyn WorldSource> {
        match self {
            WorldState::Available(w) => Arc::new(MemoryWorld(w.clone())),
            WorldState::Unavailable => Arc::new(OfflineWorld),
        }
    }
}

/// Compiles `source` against `w0` and runs the result against `w1`.
pub fn classify(source: &str, w0: &WorldState, w1: &WorldSnapshot, dts: Arc<dyn DtsSource>) -> FailureKind {
    classify_with(source, w0, w1, dts, &InterpOptions::default())
}

pub fn classify_with(
    source: &str,
    w0: &WorldState,
    w1: &WorldSnapshot,
    dts: Arc<dyn DtsSource>,
    opts: &InterpOptions,
) -> FailureKind {
    let env = ProviderEnv::new(w0.source(), dts);
    match compile(source, &env, Backend::Interp) {
        Err(CompileError::Provider(p)) => FailureKind::ProviderFailure(p.reason),
        Err(CompileError::Diagnostics(d)) => FailureKind::RecompilationFailure(d),
        Ok(c) => match interp::run(&c.core, w1, opts).result {
            Ok(v) => FailureKind::Success(v),
            Err(e) => FailureKind::RuntimeFailure(e),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    RenameCountry {
        code: String,
        name: String,
    },
    RemoveCountry(String),
    RemoveIndicator(String),
    DropPair {
        country: String,
        indicator: String,
    },
    /// The world source becomes unreachable.
    MissingSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct MutationError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MutationScript {
    pub mutations: Vec<Mutation>,
}

impl MutationScript {
    /// One mutation per line; `#` starts a comment; names with spaces are
    /// double-quoted.
    ///
    /// ```text
    /// rename-country CZE "Czechia"
    /// remove-country CZE
    /// remove-indicator SE.TER.ENRR
    /// drop-pair CZE SE.TER.ENRR
    /// missing-source
    /// ```
    pub fn parse(text: &str) -> Result<Self, MutationError> {
        let mut mutations = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| MutationError { line, message };
            let words = split_words(raw).map_err(err)?;
            let Some((cmd, args)) = words.split_first() else {
                continue;
            };
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("`{cmd}` takes {n} argument(s), got {}", args.len())))
                }
            };
            mutations.push(match cmd.as_str() {
                "rename-country" => {
                    arity(2)?;
                    Mutation::RenameCountry {
                        code: args[0].clone(),
                        name: args[1].clone(),
                    }
                }
                "remove-country" => {
                    arity(1)?;
                    Mutation::RemoveCountry(args[0].clone())
                }
                "remove-indicator" => {
                    arity(1)?;
                    Mutation::RemoveIndicator(args[0].clone())
                }
                "drop-pair" => {
                    arity(2)?;
                    Mutation::DropPair {
                        country: args[0].clone(),
                        indicator: args[1].clone(),
                    }
                }
                "missing-source" => {
                    arity(0)?;
                    Mutation::MissingSource
                }
                other => return Err(err(format!("unknown mutation `{other}`"))),
            });
        }
        Ok(MutationScript { mutations })
    }

    pub fn apply(&self, w: &WorldSnapshot) -> WorldState {
        let mut countries = w.countries().to_vec();
        let mut indicators = w.indicators().to_vec();
        let mut values = w.values().to_vec();
        for m in &self.mutations {
            match m {
                Mutation::RenameCountry { code, name } => {
                    for c in countries.iter_mut().filter(|c| &c.code == code) {
                        c.name = name.clone();
                    }
                }
                Mutation::RemoveCountry(code) => {
                    countries.retain(|c| &c.code != code);
                    values.retain(|v| &v.country != code);
                }
                Mutation::RemoveIndicator(code) => {
                    indicators.retain(|c| &c.code != code);
                    values.retain(|v| &v.indicator != code);
                }
                Mutation::DropPair { country, indicator } => {
                    values.retain(|v| !(&v.country == country && &v.indicator == indicator));
                }
                Mutation::MissingSource => return WorldState::Unavailable,
            }
        }
        WorldState::Available(Arc::new(WorldSnapshot::new(countries, indicators, values)))
    }

    /// What the taxonomy predicts for a program that accesses every code
    /// the script touches.
    pub fn expectation(&self) -> Expectation {
        use Mutation::*;
        if self.mutations.contains(&MissingSource) {
            Expectation::ProviderFailure
        } else if self
            .mutations
            .iter()
            .any(|m| matches!(m, RemoveCountry(_) | RemoveIndicator(_)))
        {
            Expectation::Removal
        } else if self.mutations.iter().any(|m| matches!(m, DropPair { .. })) {
            Expectation::DroppedData
        } else if self.mutations.is_empty() {
            Expectation::Identity
        } else {
            Expectation::Rename
        }
    }
}

fn split_words(line: &str) -> Result<Vec<String>, String> {
    let mut words = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut w = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => w.extend(chars.next()),
                    Some(c) => w.push(c),
                    None => return Err("unterminated string".into()),
                }
            }
            words.push(w);
        } else {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '#' {
                    break;
                }
                w.push(c);
                chars.next();
            }
            words.push(w);
        }
    }
    Ok(words)
}

/// Predicted outcomes: running the old build under the new world, and
/// recompiling under the new world.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// Run succeeds, recompile succeeds.
    Identity,
    /// Run succeeds with the unchanged value; recompile fails.
    Rename,
    /// Run fails at run time; recompile fails.
    Removal,
    /// Run fails at run time; recompile succeeds (only data is gone).
    DroppedData,
    /// Compilation cannot start.
    ProviderFailure,
}

#[derive(Debug, Clone)]
pub struct MatrixCell {
    pub program: String,
    pub mutation: String,
    pub expectation: Expectation,
    /// Compiled under w0, run under w1.
    pub run: FailureKind,
    /// Compiled and run under w1; absent when w1 is unavailable.
    pub recompile: Option<FailureKind>,
    pub matches: bool,
}

/// Runs one program against one mutation of `base` and checks the
/// prediction.
pub fn matrix_cell(
    program_name: &str,
    source: &str,
    mutation_name: &str,
    script: &MutationScript,
    base: &Arc<WorldSnapshot>,
    dts: Arc<dyn DtsSource>,
) -> MatrixCell {
    let expectation = script.expectation();
    let mutated = script.apply(base);
    let base_state = WorldState::Available(base.clone());
    let (run, recompile) = match &mutated {
        WorldState::Unavailable => (classify(source, &WorldState::Unavailable, base, dts.clone()), None),
        WorldState::Available(w1) => (
            classify(source, &base_state, w1, dts.clone()),
            Some(classify(source, &mutated, w1, dts.clone())),
        ),
    };
    let reference = || classify(source, &base_state, base, dts.clone());
    let is = |k: &Option<FailureKind>, name: &str| k.as_ref().map(FailureKind::name) == Some(name);
    let matches = match expectation {
        Expectation::Identity => run.name() == "Success" && is(&recompile, "Success"),
        Expectation::Rename => {
            matches!((&run, reference()), (FailureKind::Success(a), FailureKind::Success(b)) if *a == b)
                && is(&recompile, "RecompilationFailure")
        }
        Expectation::Removal => {
            matches!(&run, FailureKind::RuntimeFailure(e) if e.is_missing_key())
                && is(&recompile, "RecompilationFailure")
        }
        Expectation::DroppedData => {
            matches!(&run, FailureKind::RuntimeFailure(e) if e.is_missing_key())
                && matches!(&recompile, Some(FailureKind::RuntimeFailure(_)))
        }
        Expectation::ProviderFailure => run.name() == "ProviderFailure",
    };
    MatrixCell {
        program: program_name.to_string(),
        mutation: mutation_name.to_string(),
        expectation,
        run,
        recompile,
        matches,
    }
}

// ---- relativized safety ----

const COUNTRY_POOL: &[(&str, &str)] = &[
    ("CZE", "Czech Republic"),
    ("GBR", "United Kingdom"),
    ("USA", "United States"),
    ("EUU", "European Union"),
    ("DEU", "Germany"),
    ("FRA", "France"),
];

const INDICATOR_POOL: &[(&str, &str)] = &[
    ("SE.TER.ENRR", "School enrollment, tertiary (% gross)"),
    ("SP.POP.TOTL", "Population, total"),
    ("NY.GDP.PCAP.CD", "GDP per capita (current US$)"),
];

/// Program shapes the generator instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// Synchronous indicator reads folded into a summary.
    SyncSummary,
    /// `let!` chain over asynchronous reads.
    AsyncChain,
    /// An async `for` loop accumulating into an array.
    AsyncLoop,
    /// Optional reads (`AssumeMissingValues=true`).
    OptionalReads,
}

pub const TEMPLATES: &[Template] = &[
    Template::SyncSummary,
    Template::AsyncChain,
    Template::AsyncLoop,
    Template::OptionalReads,
];

/// A random snapshot over the fixed pools: at least four countries, every
/// declared pair present with probability 0.8.
pub fn random_world(rng: &mut impl Rng) -> WorldSnapshot {
    let mut countries: Vec<_> = COUNTRY_POOL.to_vec();
    countries.shuffle(rng);
    countries.truncate(rng.gen_range(4..=COUNTRY_POOL.len()));
    let mut indicators: Vec<_> = INDICATOR_POOL.to_vec();
    indicators.shuffle(rng);
    indicators.truncate(rng.gen_range(1..=INDICATOR_POOL.len()));
    let mut values = Vec::new();
    for (c, _) in &countries {
        for (i, _) in &indicators {
            if rng.gen_bool(0.8) {
                values.push(ValueEntry {
                    country: c.to_string(),
                    indicator: i.to_string(),
                    series: random_series(rng),
                });
            }
        }
    }
    WorldSnapshot::new(
        countries.iter().map(|(c, n)| Entity::new(*c, *n)).collect(),
        indicators.iter().map(|(c, n)| Entity::new(*c, *n)).collect(),
        values,
    )
}

fn random_series(rng: &mut impl Rng) -> Vec<(i64, f64)> {
    let start = rng.gen_range(1995..2010);
    (0..rng.gen_range(0..5))
        .map(|k| (start + k, f64::from(rng.gen_range(0..100_000)) / 100.0))
        .collect()
}

/// A run-time world derived from `w0`: renames, dropped and added pairs,
/// changed series, occasionally a removed country or indicator.
pub fn perturb_world(w0: &WorldSnapshot, rng: &mut impl Rng) -> WorldSnapshot {
    let mut countries = w0.countries().to_vec();
    let mut indicators = w0.indicators().to_vec();
    let mut values = w0.values().to_vec();
    for c in countries.iter_mut() {
        if rng.gen_bool(0.2) {
            c.name = format!("{} (renamed)", c.name);
        }
    }
    let drop_rate = *[0.0, 0.0, 0.1, 0.3].choose(rng).expect("non-empty");
    values.retain(|_| !rng.gen_bool(drop_rate));
    for v in values.iter_mut() {
        if rng.gen_bool(0.3) {
            v.series = random_series(rng);
        }
    }
    for c in &countries {
        for i in &indicators {
            if !values.iter().any(|v| v.country == c.code && v.indicator == i.code) && rng.gen_bool(0.3) {
                values.push(ValueEntry {
                    country: c.code.clone(),
                    indicator: i.code.clone(),
                    series: random_series(rng),
                });
            }
        }
    }
    if rng.gen_bool(0.05) {
        let code = countries.choose(rng).expect("non-empty").code.clone();
        countries.retain(|c| c.code != code);
        values.retain(|v| v.country != code);
    }
    if indicators.len() > 1 && rng.gen_bool(0.05) {
        let code = indicators.choose(rng).expect("non-empty").code.clone();
        indicators.retain(|c| c.code != code);
        values.retain(|v| v.indicator != code);
    }
    WorldSnapshot::new(countries, indicators, values)
}

/// Instantiates a template with up to four countries declared in `w0`.
pub fn random_program(template: Template, w0: &WorldSnapshot, rng: &mut impl Rng) -> String {
    let mut cs: Vec<&Entity> = w0.countries().iter().collect();
    cs.shuffle(rng);
    cs.truncate(rng.gen_range(1..=4));
    let is: Vec<&Entity> = w0.indicators().iter().collect();
    let pick_ind = |rng: &mut dyn rand::RngCore| is[rng.gen_range(0..is.len())].name.clone();

    let params = match template {
        Template::SyncSummary => "Asynchronous=false",
        Template::AsyncChain | Template::AsyncLoop => "Asynchronous=true",
        Template::OptionalReads => "AssumeMissingValues=true",
    };
    let mut out = format!("type W = WorldBankData<{params}>\nlet data = W.GetDataContext()\n");
    for (k, c) in cs.iter().enumerate() {
        out.push_str(&format!("let c{k} = data.Countries.`{}`\n", c.name));
    }
    out.push_str("let total s = List.fold (fun a p -> a +. snd p) 0.0 s\n");
    let reads: Vec<String> = (0..cs.len())
        .map(|k| format!("c{k}.Indicators.`{}`", pick_ind(rng)))
        .collect();
    let reducers = [
        "List.map List.length xs",
        "List.map total xs",
        "(List.length xs, xs)",
        "List.filter (fun s -> List.length s > 1) xs",
        "xs",
    ];
    let reducer = reducers[rng.gen_range(0..reducers.len())];
    match template {
        Template::SyncSummary => {
            out.push_str(&format!("let xs = [{}]\n", reads.join("; ")));
            out.push_str(&format!("do {reducer}\n"));
        }
        Template::AsyncChain => {
            out.push_str("do async {\n");
            for (k, r) in reads.iter().enumerate() {
                out.push_str(&format!("  let! s{k} = {r} in\n"));
            }
            let names: Vec<String> = (0..reads.len()).map(|k| format!("s{k}")).collect();
            out.push_str(&format!(
                "  let xs = [{}] in\n  return {reducer}\n}}\n",
                names.join("; ")
            ));
        }
        Template::AsyncLoop => {
            let ind = pick_ind(rng);
            let names: Vec<String> = (0..cs.len()).map(|k| format!("c{k}")).collect();
            out.push_str(&format!(
                "do async {{\n  let acc = [| |] in\n  (for c in [{}] do\n    let! s = c.Indicators.`{ind}` in\n    acc.push(s));\n  let xs = List.ofArray acc in\n  return {reducer}\n}}\n",
                names.join("; ")
            ));
        }
        Template::OptionalReads => {
            out.push_str(&format!(
                "let xs = [{}] |> List.map (fun o -> Option.defaultValue [] o)\n",
                reads.join("; ")
            ));
            out.push_str(&format!("do {reducer}\n"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: u64,
    pub program: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SafetyReport {
    pub trials: u64,
    /// Trials where every statically accessible pair is in `w1`.
    pub hypothesis_held: u64,
    /// Trials outside the hypothesis that still ran to a value.
    pub excluded_successes: u64,
    /// Trials outside the hypothesis that hit a missing key.
    pub excluded_failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl fmt::Display for SafetyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trials: {}  hypothesis held: {}  excluded: {} ({} succeeded, {} missing key)  counterexamples: {}",
            self.trials,
            self.hypothesis_held,
            self.excluded_successes + self.excluded_failures,
            self.excluded_successes,
            self.excluded_failures,
            self.counterexamples.len()
        )?;
        for c in &self.counterexamples {
            writeln!(f, "trial {}: {}\n{}", c.trial, c.reason, c.program)?;
        }
        Ok(())
    }
}

enum TrialOutcome {
    Held,
    ExcludedSuccess,
    ExcludedFailure,
    Counterexample(Counterexample),
}

/// How `w1` is produced from `w0` in the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldChange {
    Perturb,
    Same,
}

pub fn safety_suite(trials: u64, seed: u64) -> SafetyReport {
    safety_suite_with(TEMPLATES, trials, seed, WorldChange::Perturb)
}

pub fn safety_suite_with(templates: &[Template], trials: u64, seed: u64, change: WorldChange) -> SafetyReport {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(templates, t, seed, change))
        .collect();
    let mut report = SafetyReport {
        trials,
        ..SafetyReport::default()
    };
    for o in outcomes {
        match o {
            TrialOutcome::Held => report.hypothesis_held += 1,
            TrialOutcome::ExcludedSuccess => report.excluded_successes += 1,
            TrialOutcome::ExcludedFailure => report.excluded_failures += 1,
            TrialOutcome::Counterexample(c) => report.counterexamples.push(c),
        }
    }
    report
}

fn run_trial(templates: &[Template], trial: u64, seed: u64, change: WorldChange) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial));
    let w0 = Arc::new(random_world(&mut rng));
    let template = *templates.choose(&mut rng).expect("at least one template");
    let program = random_program(template, &w0, &mut rng);
    let w1 = match change {
        WorldChange::Perturb => perturb_world(&w0, &mut rng),
        WorldChange::Same => (*w0).clone(),
    };
    let fail = |reason: String| {
        TrialOutcome::Counterexample(Counterexample {
            trial,
            program: program.clone(),
            reason,
        })
    };

    let env = ProviderEnv::new(Arc::new(MemoryWorld(w0.clone())), Arc::new(MemoryDts::default()));
    let compiled = match compile(&program, &env, Backend::Interp) {
        Ok(c) => c,
        Err(e) => return fail(format!("generated program does not compile under w0: {e}")),
    };
    let accessed = interp::trace_accessed_pairs(&compiled.core);
    let domain: BTreeSet<(String, String)> = w1.pairs();
    let hypothesis = accessed.is_subset(&domain);

    let before = w1.fingerprint();
    let result = interp::interpret(&compiled.core, &w1);
    if w1.fingerprint() != before {
        return fail("interpretation changed the world".into());
    }

    if !hypothesis {
        return match result {
            Ok(_) => TrialOutcome::ExcludedSuccess,
            Err(RuntimeFailure::MissingKey { country, indicator }) => {
                if domain.contains(&(country.clone(), indicator.clone())) {
                    fail(format!(
                        "missing key ({country}, {indicator}) reported for a pair that exists"
                    ))
                } else {
                    TrialOutcome::ExcludedFailure
                }
            }
            Err(e) => fail(format!("unexpected failure outside the hypothesis: {e}")),
        };
    }
    let ty = match compiled.typed.entry_type() {
        Some(CoreType::Async(t)) => (**t).clone(),
        Some(t) => t.clone(),
        None => CoreType::Unit,
    };
    match result {
        Ok(v) if v.has_type(&ty) => TrialOutcome::Held,
        Ok(v) => fail(format!("value {v} does not have the inferred type {ty}")),
        Err(e) => fail(format!("runtime failure although every accessed pair exists: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutation_scripts_parse() {
        let s = MutationScript::parse(
            "# comment\nrename-country CZE \"Czechia\" # trailing\n\ndrop-pair CZE SE.TER.ENRR\n",
        )
        .unwrap();
        assert_eq!(
            s.mutations,
            vec![
                Mutation::RenameCountry {
                    code: "CZE".into(),
                    name: "Czechia".into()
                },
                Mutation::DropPair {
                    country: "CZE".into(),
                    indicator: "SE.TER.ENRR".into()
                }
            ]
        );
        assert_eq!(MutationScript::parse("remove-country").unwrap_err().line, 1);
        assert!(MutationScript::parse("explode CZE").is_err());
    }

    #[test]
    fn removal_drops_values() {
        let w = random_world(&mut ChaCha8Rng::seed_from_u64(3));
        let code = w.countries()[0].code.clone();
        let s = MutationScript {
            mutations: vec![Mutation::RemoveCountry(code.clone())],
        };
        let WorldState::Available(w1) = s.apply(&w) else {
            panic!()
        };
        assert!(w1.country(&code).is_none());
        assert!(crate::world::validate_world(&w1).is_empty());
    }

    #[test]
    fn generated_programs_compile() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &t in TEMPLATES {
            let w0 = Arc::new(random_world(&mut rng));
            let p = random_program(t, &w0, &mut rng);
            let env = ProviderEnv::new(Arc::new(MemoryWorld(w0)), Arc::new(MemoryDts::default()));
            if let Err(e) = compile(&p, &env, Backend::Interp) {
                panic!("{p}\n{e}");
            }
        }
    }

    #[test]
    fn small_suite_has_no_counterexamples() {
        let r = safety_suite(64, 1);
        assert!(r.counterexamples.is_empty(), "{r}");
        assert!(r.hypothesis_held > 0);
    }
}
