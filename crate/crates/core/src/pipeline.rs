//! The compilation pipeline as one call: parse, instantiate providers,
//! type check, erase, desugar, validate start primitives.

use thiserror::Error;

use crate::async_cps::{desugar_async, validate_start_primitives, Backend};
use crate::core_ir::CoreModule;
use crate::diag::{codes, Diagnostic};
use crate::erase::erase_module;
use crate::provider::{ProvidedContext, ProviderEnv, ProviderFailure, ProviderRegistry};
use crate::syntax::{parse_module, SourceModule};
use crate::typecheck::{typecheck_module, TypedModule};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("{0}")]
    Provider(ProviderFailure),
    #[error("{} error(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    Diagnostics(Vec<Diagnostic>),
}

impl CompileError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            CompileError::Diagnostics(d) => d,
            CompileError::Provider(_) => &[],
        }
    }

    /// Failures while materializing members during type checking are
    /// provider failures too.
    fn from_type_errors(diags: Vec<Diagnostic>) -> Self {
        match diags.iter().find(|d| d.code == codes::TYPE_PROVIDER_FAILURE) {
            Some(d) => CompileError::Provider(ProviderFailure::new(d.message.clone())),
            None => CompileError::Diagnostics(diags),
        }
    }
}

/// Every artifact of one compilation.
pub struct Compiled {
    pub source: SourceModule,
    pub context: ProvidedContext,
    pub typed: TypedModule,
    pub erased: CoreModule,
    /// Erased and desugared: what the backends consume.
    pub core: CoreModule,
}

pub fn instantiate_providers(
    src: &SourceModule,
    env: &ProviderEnv,
    registry: &ProviderRegistry,
) -> Result<ProvidedContext, ProviderFailure> {
    let mut ctx = ProvidedContext::new();
    for d in &src.providers {
        let c = registry
            .instantiate(&d.provider, &d.alias, &d.params, env)
            .map_err(|f| ProviderFailure::new(format!("{} (type {} = {})", f.reason, d.alias, d.provider)))?;
        ctx.merge(c)?;
    }
    Ok(ctx)
}

pub fn compile(text: &str, env: &ProviderEnv, backend: Backend) -> Result<Compiled, CompileError> {
    let source = parse_module(text).map_err(CompileError::Diagnostics)?;
    compile_module(source, env, backend)
}

pub fn compile_module(source: SourceModule, env: &ProviderEnv, backend: Backend) -> Result<Compiled, CompileError> {
    let context = instantiate_providers(&source, env, &ProviderRegistry::default()).map_err(CompileError::Provider)?;
    let typed = typecheck_module(&source, &context).map_err(CompileError::from_type_errors)?;
    let erased = erase_module(&typed).map_err(CompileError::Diagnostics)?;
    let core = desugar_async(&erased).map_err(CompileError::Diagnostics)?;
    let starts = validate_start_primitives(&core, backend);
    if !starts.is_empty() {
        return Err(CompileError::Diagnostics(starts));
    }
    Ok(Compiled {
        source,
        context,
        typed,
        erased,
        core,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provider::MemoryDts;
    use crate::world::{OfflineWorld, WorldSnapshot};
    use std::sync::Arc;

    fn offline() -> ProviderEnv {
        ProviderEnv::new(Arc::new(OfflineWorld), Arc::new(MemoryDts::default()))
    }

    #[test]
    fn provider_free_program_compiles_offline() {
        let c = compile("let x = 1 / 2\ndo x", &offline(), Backend::Interp).unwrap();
        assert!(c.core.check_desugared());
        let v = crate::interp::interpret(&c.core, &WorldSnapshot::empty()).unwrap();
        assert_eq!(v, crate::interp::Value::Int(0));
    }

    #[test]
    fn unreachable_world_is_a_provider_failure() {
        let e = compile(
            "type W = WorldBankData<Asynchronous=true>\nlet d = W.GetDataContext()",
            &offline(),
            Backend::Js,
        )
        .err()
        .unwrap();
        assert!(matches!(e, CompileError::Provider(_)), "{e}");
    }

    #[test]
    fn unsupported_start_fails_compilation() {
        let e = compile(
            "do Async.RunSynchronously (async { return 1 })",
            &offline(),
            Backend::Js,
        )
        .err()
        .unwrap();
        assert_eq!(e.diagnostics()[0].code, codes::ASYNC_UNSUPPORTED_START);
    }
}
