//! The `mml` command line.
//!
//! Exit codes are part of the interface: 0 success, 1 parse or type
//! errors, 2 runtime failure, 3 provider failure. Usage and I/O errors
//! exit with 64.

pub mod inspect;
pub mod serve;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mml_core::async_cps::Backend;
use mml_core::harness::{classify, safety_suite, WorldState};
use mml_core::interp::{run, InterpOptions};
use mml_core::js::{emit_module_with, JsOptions};
use mml_core::pipeline::{compile, CompileError, Compiled};
use mml_core::provider::{DirDts, ProviderEnv};
use mml_core::world::{CachedWorld, FileWorld, OfflineWorld};
use mml_core::{FailureKind, MutationScript, WorldSnapshot, WorldSource};

pub const EXIT_COMPILE: u8 = 1;
pub const EXIT_RUNTIME: u8 = 2;
pub const EXIT_PROVIDER: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

/// Directory for the provider schema cache, if set.
pub const CACHE_DIR_VAR: &str = "MML_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "mml", version, about = "MiniML compiler with type providers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// World snapshot (JSON) the data provider reads at compile time.
    #[arg(long, global = true)]
    pub world: Option<PathBuf>,
    /// Directory searched for `.d.ts` files; defaults to the program's
    /// directory.
    #[arg(long, global = true)]
    pub dts_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check a program and print its top-level types.
    Check {
        program: PathBuf,
        /// Print the erased core IR.
        #[arg(long)]
        dump_core: bool,
    },
    /// Compile a program to JavaScript.
    Compile {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Js)]
        target: Target,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Leave out the entry invocation.
        #[arg(long)]
        no_entry: bool,
        #[arg(long)]
        dump_core: bool,
    },
    /// Interpret a program against the world snapshot.
    Run {
        program: PathBuf,
        /// Evaluate this top-level binding instead of the `do` entry.
        #[arg(long)]
        entry: Option<String>,
        #[arg(long)]
        dump_core: bool,
    },
    /// List provided members at a dotted path, e.g.
    /// `inspect WorldBankData Countries` or
    /// `inspect TypeScript jquery.d.ts j.jQuery`.
    Inspect {
        provider: String,
        /// Static parameters (`name=value` or positional), then the path.
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
    /// Compile/run experiments over changing worlds.
    Harness {
        #[command(subcommand)]
        command: HarnessCommand,
    },
    /// Serve a world snapshot over HTTP for the JavaScript runtime.
    ServeWorld {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum HarnessCommand {
    /// Compile under `--w0`, run under `--w1`, print the outcome's variant.
    Classify {
        #[arg(long)]
        program: PathBuf,
        /// Compile-time world; a missing file means the source is unavailable.
        #[arg(long)]
        w0: PathBuf,
        /// Run-time world.
        #[arg(long, required_unless_present = "mutation")]
        w1: Option<PathBuf>,
        /// Mutation script applied to `--w0` to obtain the run-time world.
        #[arg(long, conflicts_with = "w1")]
        mutation: Option<PathBuf>,
    },
    /// Check relativized type safety on generated programs.
    Safety {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Js,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Exit(pub u8);

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

impl Global {
    pub fn world_source(&self) -> Arc<dyn WorldSource> {
        let base: Arc<dyn WorldSource> = match &self.world {
            Some(p) => match std::env::var_os(CACHE_DIR_VAR) {
                Some(dir) => Arc::new(CachedWorld::new(FileWorld::new(p), PathBuf::from(dir))),
                None => Arc::new(FileWorld::new(p)),
            },
            None => Arc::new(OfflineWorld),
        };
        base
    }

    pub fn env_for(&self, program: Option<&Path>) -> ProviderEnv {
        let dts = self
            .dts_dir
            .clone()
            .or_else(|| program.and_then(Path::parent).map(Path::to_path_buf))
            .unwrap_or_else(|| PathBuf::from("."));
        ProviderEnv::new(self.world_source(), Arc::new(DirDts(dts)))
    }
}

fn report(e: &CompileError) -> Exit {
    match e {
        CompileError::Provider(p) => {
            eprintln!("provider failure: {}", p.reason);
            Exit(EXIT_PROVIDER)
        }
        CompileError::Diagnostics(ds) => {
            for d in ds {
                println!("{d}");
            }
            Exit(EXIT_COMPILE)
        }
    }
}

fn build(global: &Global, program: &Path, backend: Backend, dump_core: bool) -> anyhow::Result<Result<Compiled, Exit>> {
    let src = read(program)?;
    let env = global.env_for(Some(program));
    Ok(match compile(&src, &env, backend) {
        Ok(c) => {
            if dump_core {
                print!("{}", c.erased.dump());
            }
            Ok(c)
        }
        Err(e) => Err(report(&e)),
    })
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> ExitCode {
    match dispatch(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Exit(code))) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<Result<(), Exit>> {
    let g = &cli.global;
    match cli.command {
        Command::Check { program, dump_core } => Ok(build(g, &program, Backend::Js, dump_core)?.map(|c| {
            for (name, s) in &c.typed.schemes {
                println!("val {name} : {}", s.ty.canonical());
            }
            if let Some(t) = c.typed.entry_type() {
                println!("do : {}", t.canonical());
            }
        })),
        Command::Compile {
            program,
            target: Target::Js,
            output,
            no_entry,
            dump_core,
        } => {
            let c = match build(g, &program, Backend::Js, dump_core)? {
                Ok(c) => c,
                Err(e) => return Ok(Err(e)),
            };
            let doc = match emit_module_with(
                &c.core,
                JsOptions {
                    include_entry: !no_entry,
                },
            ) {
                Ok(d) => d,
                Err(ds) => return Ok(Err(report(&CompileError::Diagnostics(ds)))),
            };
            match output {
                Some(p) => {
                    std::fs::write(&p, &doc.source_text).with_context(|| format!("cannot write {}", p.display()))?
                }
                None => print!("{}", doc.source_text),
            }
            Ok(Ok(()))
        }
        Command::Run {
            program,
            entry,
            dump_core,
        } => {
            let c = match build(g, &program, Backend::Interp, dump_core)? {
                Ok(c) => c,
                Err(e) => return Ok(Err(e)),
            };
            let world = match &g.world {
                Some(p) => WorldSnapshot::load(p).with_context(|| format!("cannot load {}", p.display()))?,
                None => WorldSnapshot::empty(),
            };
            let opts = InterpOptions {
                entry,
                ..InterpOptions::default()
            };
            match run(&c.core, &world, &opts).result {
                Ok(v) => {
                    println!("{v}");
                    Ok(Ok(()))
                }
                Err(e) => {
                    eprintln!("runtime failure: {e}");
                    Ok(Err(Exit(EXIT_RUNTIME)))
                }
            }
        }
        Command::Inspect { provider, args } => {
            let env = g.env_for(None);
            match inspect::inspect(&provider, &args, &env) {
                Ok(lines) => {
                    for l in lines {
                        println!("{l}");
                    }
                    Ok(Ok(()))
                }
                Err(inspect::InspectError::Provider(r)) => {
                    eprintln!("provider failure: {r}");
                    Ok(Err(Exit(EXIT_PROVIDER)))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Harness { command } => harness(g, command),
        Command::ServeWorld { port, host } => {
            let path = g.world.as_ref().context("serve-world needs --world")?;
            let snapshot = WorldSnapshot::load(path).with_context(|| format!("cannot load {}", path.display()))?;
            serve::serve(Arc::new(snapshot), &host, port)?;
            Ok(Ok(()))
        }
    }
}

fn harness(g: &Global, command: HarnessCommand) -> anyhow::Result<Result<(), Exit>> {
    match command {
        HarnessCommand::Classify {
            program,
            w0,
            w1,
            mutation,
        } => {
            let src = read(&program)?;
            let w0 = if w0.exists() {
                WorldState::Available(Arc::new(
                    WorldSnapshot::load(&w0).with_context(|| format!("cannot load {}", w0.display()))?,
                ))
            } else {
                WorldState::Unavailable
            };
            let w1 = match (w1, mutation) {
                (Some(p), _) => WorldSnapshot::load(&p).with_context(|| format!("cannot load {}", p.display()))?,
                (None, Some(m)) => {
                    let script = MutationScript::parse(&read(&m)?).with_context(|| m.display().to_string())?;
                    let base = w0.snapshot().context("--mutation needs an available --w0")?;
                    match script.apply(base) {
                        WorldState::Available(w) => (*w).clone(),
                        WorldState::Unavailable => anyhow::bail!("the mutation removes the world source"),
                    }
                }
                (None, None) => unreachable!("clap requires one of --w1 and --mutation"),
            };
            let dts_dir = g
                .dts_dir
                .clone()
                .or_else(|| program.parent().map(Path::to_path_buf))
                .unwrap_or_default();
            let kind = classify(&src, &w0, &w1, Arc::new(DirDts(dts_dir)));
            println!("{}", kind.name());
            match &kind {
                FailureKind::Success(v) => eprintln!("{v}"),
                other => eprintln!("{other}"),
            }
            Ok(Ok(()))
        }
        HarnessCommand::Safety { trials, seed } => {
            let r = safety_suite(trials, seed);
            print!("{r}");
            Ok(if r.counterexamples.is_empty() {
                Ok(())
            } else {
                Err(Exit(EXIT_RUNTIME))
            })
        }
    }
}
