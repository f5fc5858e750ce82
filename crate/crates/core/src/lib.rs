//! Compiler toolchain for MiniML, a small ML dialect with type providers.
//!
//! The pipeline: [`syntax`] parses `.mml` source, [`provider`] projects
//! external information (a world snapshot, TypeScript declarations) into
//! provided types, [`typecheck`] infers types against those, [`erase`]
//! replaces provided members with their erasure plans, [`async_cps`]
//! desugars async blocks, and either [`interp`] runs the result or [`js`]
//! emits JavaScript. [`harness`] drives compile/run experiments over
//! changing worlds.

pub mod async_cps;
pub mod core_ir;
pub mod diag;
pub mod erase;
pub mod harness;
pub mod interp;
pub mod js;
pub mod pipeline;
pub mod prelude;
pub mod provider;
pub mod shim;
pub mod syntax;
pub mod typecheck;
pub mod types;
pub mod world;

pub use core_ir::{CoreExpr, CoreModule};
pub use diag::{Diagnostic, Severity, SourceSpan};
pub use harness::{classify, FailureKind, MutationScript, WorldState};
pub use interp::{RuntimeFailure, Value};
pub use js::JsDocument;
pub use pipeline::{compile, CompileError, Compiled};
pub use syntax::{SourceModule, SurfaceExpr};
pub use typecheck::TypedModule;
pub use types::{CoreType, Scheme, TyVar, TypeId};
pub use world::{validate_world, world_lookup, WorldSnapshot, WorldSource};
