//! `mml inspect`: what an editor's completion list would show.
//!
//! Only the types on the path are materialized.

use mml_core::pipeline::instantiate_providers;
use mml_core::provider::{ProvidedContext, ProviderEnv, ProviderRegistry};
use mml_core::syntax::parse_module;
use mml_core::{CoreType, TypeId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InspectError {
    #[error("provider failure: {0}")]
    Provider(String),
    #[error("bad provider arguments: {0}")]
    Arguments(String),
    #[error("no member `{member}` on {owner}")]
    NoMember { member: String, owner: String },
    #[error("`{0}` has no members")]
    NotAType(String),
}

/// Alias used when the path does not start with one.
pub const DEFAULT_ALIAS: &str = "W";

/// `args` are the static parameters followed by the dotted path.
pub fn inspect(provider: &str, args: &[String], env: &ProviderEnv) -> Result<Vec<String>, InspectError> {
    let (path, params) = args
        .split_last()
        .ok_or_else(|| InspectError::Arguments("missing path".into()))?;
    let segments: Vec<&str> = path.split('.').filter(|s| !s.is_empty()).collect();

    // `j.jQuery` names its alias; `Countries` does not.
    let (alias, rest) = match segments.split_first() {
        Some((first, rest)) if !rest.is_empty() && first.chars().all(|c| c.is_alphanumeric() || c == '_') => {
            match provide(provider, first, params, env) {
                Ok(ctx) if resolve(&ctx, first, rest).is_ok() => return listing(&ctx, first, rest),
                _ => (DEFAULT_ALIAS, segments.as_slice()),
            }
        }
        _ => (DEFAULT_ALIAS, segments.as_slice()),
    };
    let ctx = provide(provider, alias, params, env)?;
    listing(&ctx, alias, rest)
}

fn provide(provider: &str, alias: &str, params: &[String], env: &ProviderEnv) -> Result<ProvidedContext, InspectError> {
    let rendered: Vec<String> = params.iter().map(|p| render_param(p)).collect();
    let decl = if rendered.is_empty() {
        format!("type {alias} = {provider}")
    } else {
        format!("type {alias} = {provider}<{}>", rendered.join(", "))
    };
    let src = parse_module(&decl).map_err(|d| InspectError::Arguments(d[0].message.clone()))?;
    instantiate_providers(&src, env, &ProviderRegistry::default()).map_err(|f| InspectError::Provider(f.reason))
}

/// `name=value` stays as written; bare words become string literals.
fn render_param(p: &str) -> String {
    let is_literal = |v: &str| v == "true" || v == "false" || v.parse::<f64>().is_ok() || v.starts_with('"');
    match p.split_once('=') {
        Some((k, v)) if is_literal(v) => format!("{k}={v}"),
        Some((k, v)) => format!("{k}={v:?}"),
        None if is_literal(p) => p.to_string(),
        None => format!("{p:?}"),
    }
}

/// The type reached by walking `path` from the alias: a segment is either a
/// provided type nested under the current one or a member of it.
fn resolve(ctx: &ProvidedContext, alias: &str, path: &[&str]) -> Result<TypeId, InspectError> {
    let mut cur = ctx
        .root(alias)
        .cloned()
        .ok_or_else(|| InspectError::Arguments(format!("no root {alias}")))?;
    for seg in path {
        let nested = TypeId::new(format!("{alias}.{seg}"));
        if ctx.contains_type(&nested) {
            cur = nested;
            continue;
        }
        let members = ctx.members(&cur).map_err(|f| InspectError::Provider(f.reason))?;
        let m = members.get(*seg).ok_or_else(|| InspectError::NoMember {
            member: seg.to_string(),
            owner: cur.to_string(),
        })?;
        cur = match &m.overloads[0].result {
            CoreType::Named(id) if ctx.contains_type(id) => id.clone(),
            other => return Err(InspectError::NotAType(format!("{seg}: {other}"))),
        };
    }
    Ok(cur)
}

fn listing(ctx: &ProvidedContext, alias: &str, path: &[&str]) -> Result<Vec<String>, InspectError> {
    let id = resolve(ctx, alias, path)?;
    let members = ctx.members(&id).map_err(|f| InspectError::Provider(f.reason))?;
    // The member table is ordered by name.
    let mut lines: Vec<String> = members.values().flat_map(|m| m.describe()).collect();
    lines.push(format!(
        "({} of {} provided types materialized)",
        ctx.materialized_count(),
        ctx.type_ids().count()
    ));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_render_as_literals() {
        assert_eq!(render_param("Asynchronous=true"), "Asynchronous=true");
        assert_eq!(render_param("jquery.d.ts"), "\"jquery.d.ts\"");
        assert_eq!(render_param("Source=x.json"), "Source=\"x.json\"");
    }
}
