//! Type providers: projection of an external information source into
//! erased provided types.
//!
//! A provider instantiation yields a [`ProvidedContext`]. The set of type
//! ids is fixed at instantiation, but each type's member list is computed
//! on first lookup by a thunk and memoized, including a failure.

pub mod data;
pub mod tsdecl;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::diag::Diagnostic;
use crate::syntax::{StaticParam, StaticValue};
use crate::types::{CoreType, TypeId};
use crate::world::{Unreachable, WorldSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("provider failure: {reason}")]
pub struct ProviderFailure {
    pub reason: String,
}

impl ProviderFailure {
    pub fn new(reason: impl Into<String>) -> Self {
        ProviderFailure { reason: reason.into() }
    }
}

impl From<Unreachable> for ProviderFailure {
    fn from(u: Unreachable) -> Self {
        ProviderFailure::new(u.to_string())
    }
}

/// Argument of an erasure plan, resolved against the receiver and the
/// supplied call arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum ArgTemplate {
    Receiver,
    /// The i-th call argument.
    Arg(usize),
    /// All supplied call arguments, in order.
    Args,
    /// A string baked in at provision time.
    Str(String),
    /// The result of a nested plan.
    Plan(Box<ErasurePlan>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ErasurePlan {
    RuntimeCall {
        symbol: String,
        args: Vec<ArgTemplate>,
    },
    EmitCall {
        is_static: bool,
        name: String,
        args: Vec<ArgTemplate>,
    },
    EmitPropertyGet {
        is_static: bool,
        name: String,
        args: Vec<ArgTemplate>,
    },
    /// Arguments are `[receiver, value]` (value is `Arg(0)`).
    EmitPropertySet {
        is_static: bool,
        name: String,
        args: Vec<ArgTemplate>,
    },
    /// Inline JavaScript with `{i}` placeholders, one per argument.
    JsTemplate {
        text: String,
        args: Vec<ArgTemplate>,
    },
}

impl ErasurePlan {
    pub fn runtime(symbol: &str, args: Vec<ArgTemplate>) -> Self {
        ErasurePlan::RuntimeCall {
            symbol: symbol.to_string(),
            args,
        }
    }

    /// The plan that returns its receiver unchanged.
    pub fn identity() -> Self {
        ErasurePlan::JsTemplate {
            text: "{0}".into(),
            args: vec![ArgTemplate::Receiver],
        }
    }

    pub fn is_emit(&self) -> bool {
        matches!(
            self,
            ErasurePlan::EmitCall { .. }
                | ErasurePlan::EmitPropertyGet { .. }
                | ErasurePlan::EmitPropertySet { .. }
                | ErasurePlan::JsTemplate { .. }
        )
    }

    pub fn args(&self) -> &[ArgTemplate] {
        match self {
            ErasurePlan::RuntimeCall { args, .. }
            | ErasurePlan::EmitCall { args, .. }
            | ErasurePlan::EmitPropertyGet { args, .. }
            | ErasurePlan::EmitPropertySet { args, .. }
            | ErasurePlan::JsTemplate { args, .. } => args,
        }
    }

    /// Every runtime symbol the plan references, nested plans included.
    pub fn runtime_symbols(&self, out: &mut Vec<String>) {
        if let ErasurePlan::RuntimeCall { symbol, .. } = self {
            out.push(symbol.clone());
        }
        for a in self.args() {
            if let ArgTemplate::Plan(p) = a {
                p.runtime_symbols(out);
            }
        }
    }

    /// Number of plan nodes, counting nested plans.
    pub fn size(&self) -> usize {
        1 + self
            .args()
            .iter()
            .map(|a| match a {
                ArgTemplate::Plan(p) => p.size(),
                _ => 1,
            })
            .sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MemberKind {
    Property,
    Method,
    /// Calling the object itself; only on callable imported interfaces.
    Invoke,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: CoreType,
    pub optional: bool,
}

impl Param {
    pub fn required(name: &str, ty: CoreType) -> Self {
        Param {
            name: name.to_string(),
            ty,
            optional: false,
        }
    }
}

/// One overload of a member. A property has exactly one, with no params.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub params: Vec<Param>,
    pub result: CoreType,
    pub erasure: ErasurePlan,
}

impl Signature {
    pub fn min_arity(&self) -> usize {
        self.params.iter().filter(|p| !p.optional).count()
    }

    /// `(p1 * p2) -> r` style rendering used by `inspect`.
    pub fn describe(&self) -> String {
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|p| {
                let opt = if p.optional { "?" } else { "" };
                format!("{opt}{}: {}", p.name, p.ty)
            })
            .collect();
        format!("({}) -> {}", ps.join(", "), self.result)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProvidedMember {
    pub name: String,
    pub kind: MemberKind,
    pub is_static: bool,
    pub overloads: Vec<Signature>,
    /// Present for settable properties.
    pub setter: Option<ErasurePlan>,
}

impl ProvidedMember {
    pub fn property(name: &str, ty: CoreType, erasure: ErasurePlan) -> Self {
        ProvidedMember {
            name: name.to_string(),
            kind: MemberKind::Property,
            is_static: false,
            overloads: vec![Signature {
                params: Vec::new(),
                result: ty,
                erasure,
            }],
            setter: None,
        }
    }

    /// The member's type: the property type, or the first overload as a
    /// function from the tupled parameters.
    pub fn signature(&self) -> CoreType {
        let sig = &self.overloads[0];
        match self.kind {
            MemberKind::Property => sig.result.clone(),
            _ => {
                let param = match sig.params.len() {
                    0 => CoreType::Unit,
                    1 => sig.params[0].ty.clone(),
                    _ => CoreType::Tuple(sig.params.iter().map(|p| p.ty.clone()).collect()),
                };
                CoreType::func(param, sig.result.clone())
            }
        }
    }

    pub fn erasure(&self) -> &ErasurePlan {
        &self.overloads[0].erasure
    }

    /// One line per overload, as printed by `inspect`.
    pub fn describe(&self) -> Vec<String> {
        let stat = if self.is_static { "static " } else { "" };
        match self.kind {
            MemberKind::Property => {
                let set = if self.setter.is_some() { " (settable)" } else { "" };
                vec![format!(
                    "{stat}property {}: {}{set}",
                    crate::syntax::pretty::member_name(&self.name),
                    self.overloads[0].result
                )]
            }
            kind => self
                .overloads
                .iter()
                .map(|s| {
                    let k = if kind == MemberKind::Invoke { "invoke" } else { "method" };
                    format!(
                        "{stat}{k} {}{}",
                        crate::syntax::pretty::member_name(&self.name),
                        s.describe()
                    )
                })
                .collect(),
        }
    }
}

type MemberThunk = Box<dyn Fn() -> Result<Vec<ProvidedMember>, ProviderFailure> + Send + Sync>;
type MemberTable = BTreeMap<String, Arc<ProvidedMember>>;

/// A provided (always erased) type whose members are computed on demand.
pub struct ProvidedTypeDef {
    pub id: TypeId,
    pub name: String,
    members: OnceLock<Result<MemberTable, ProviderFailure>>,
    thunk: MemberThunk,
    counter: Arc<AtomicUsize>,
}

impl fmt::Debug for ProvidedTypeDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProvidedTypeDef")
            .field("id", &self.id)
            .field("materialized", &self.members.get().is_some())
            .finish()
    }
}

impl ProvidedTypeDef {
    pub fn is_erased(&self) -> bool {
        true
    }

    pub fn is_materialized(&self) -> bool {
        self.members.get().is_some()
    }

    /// The member table, computing it on first use.
    pub fn members(&self) -> Result<&MemberTable, ProviderFailure> {
        self.members
            .get_or_init(|| {
                self.counter.fetch_add(1, Ordering::SeqCst);
                (self.thunk)().map(|ms| ms.into_iter().map(|m| (m.name.clone(), Arc::new(m))).collect())
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// The projection of one or more provider instantiations.
#[derive(Debug, Default)]
pub struct ProvidedContext {
    roots: BTreeMap<String, TypeId>,
    types: BTreeMap<TypeId, ProvidedTypeDef>,
    counter: Arc<AtomicUsize>,
    /// Non-fatal diagnostics produced while instantiating (d.ts warnings).
    pub diagnostics: Vec<Diagnostic>,
}

impl ProvidedContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_root(&mut self, alias: &str, id: TypeId) {
        self.roots.insert(alias.to_string(), id);
    }

    pub fn add_type(
        &mut self,
        id: TypeId,
        name: &str,
        thunk: impl Fn() -> Result<Vec<ProvidedMember>, ProviderFailure> + Send + Sync + 'static,
    ) {
        let def = ProvidedTypeDef {
            id: id.clone(),
            name: name.to_string(),
            members: OnceLock::new(),
            thunk: Box::new(thunk),
            counter: self.counter.clone(),
        };
        self.types.insert(id, def);
    }

    /// Absorbs another context. Type ids must not collide.
    pub fn merge(&mut self, other: ProvidedContext) -> Result<(), ProviderFailure> {
        for (alias, id) in other.roots {
            if self.roots.contains_key(&alias) {
                return Err(ProviderFailure::new(format!("alias `{alias}` bound twice")));
            }
            self.roots.insert(alias, id);
        }
        for (id, mut def) in other.types {
            if self.types.contains_key(&id) {
                return Err(ProviderFailure::new(format!("type id `{id}` provided twice")));
            }
            def.counter = self.counter.clone();
            self.types.insert(id, def);
        }
        self.diagnostics.extend(other.diagnostics);
        Ok(())
    }

    pub fn root(&self, alias: &str) -> Option<&TypeId> {
        self.roots.get(alias)
    }

    pub fn roots(&self) -> impl Iterator<Item = (&String, &TypeId)> {
        self.roots.iter()
    }

    pub fn type_def(&self, id: &TypeId) -> Option<&ProvidedTypeDef> {
        self.types.get(id)
    }

    pub fn type_ids(&self) -> impl Iterator<Item = &TypeId> {
        self.types.keys()
    }

    pub fn contains_type(&self, id: &TypeId) -> bool {
        self.types.contains_key(id)
    }

    /// How many member lists have been computed so far.
    pub fn materialized_count(&self) -> usize {
        self.counter.load(Ordering::SeqCst)
    }

    pub fn members(&self, id: &TypeId) -> Result<&MemberTable, ProviderFailure> {
        match self.types.get(id) {
            Some(def) => def.members(),
            None => Err(ProviderFailure::new(format!("unknown provided type `{id}`"))),
        }
    }

    /// Forces every type and renders the whole context; two contexts are
    /// extensionally equal when their renderings are.
    pub fn describe_all(&self) -> Result<BTreeMap<String, Vec<String>>, ProviderFailure> {
        let mut out = BTreeMap::new();
        for (id, def) in &self.types {
            let mut lines = Vec::new();
            for m in def.members()?.values() {
                lines.extend(m.describe());
                lines.push(format!(
                    "  erases to {:?}",
                    m.overloads.iter().map(|s| &s.erasure).collect::<Vec<_>>()
                ));
            }
            out.insert(id.to_string(), lines);
        }
        for (alias, id) in &self.roots {
            out.insert(format!("root {alias}"), vec![id.to_string()]);
        }
        Ok(out)
    }
}

/// Member lookup; materializes the owning type at most once.
pub fn lookup_member(
    ctx: &ProvidedContext,
    type_id: &TypeId,
    member: &str,
) -> Result<Option<Arc<ProvidedMember>>, ProviderFailure> {
    Ok(ctx.members(type_id)?.get(member).cloned())
}

/// Source of `.d.ts` text by file name.
pub trait DtsSource: Send + Sync {
    fn read(&self, file: &str) -> Result<String, Unreachable>;
}

pub struct DirDts(pub PathBuf);

impl DtsSource for DirDts {
    fn read(&self, file: &str) -> Result<String, Unreachable> {
        let path = self.0.join(file);
        std::fs::read_to_string(&path).map_err(|e| Unreachable(format!("{}: {e}", path.display())))
    }
}

#[derive(Default)]
pub struct MemoryDts(pub BTreeMap<String, String>);

impl MemoryDts {
    pub fn with(mut self, file: &str, text: &str) -> Self {
        self.0.insert(file.to_string(), text.to_string());
        self
    }
}

impl DtsSource for MemoryDts {
    fn read(&self, file: &str) -> Result<String, Unreachable> {
        self.0
            .get(file)
            .cloned()
            .ok_or_else(|| Unreachable(format!("no declaration file `{file}`")))
    }
}

/// Where providers read their inputs from.
#[derive(Clone)]
pub struct ProviderEnv {
    pub world: Arc<dyn WorldSource>,
    pub dts: Arc<dyn DtsSource>,
}

impl ProviderEnv {
    pub fn new(world: Arc<dyn WorldSource>, dts: Arc<dyn DtsSource>) -> Self {
        ProviderEnv { world, dts }
    }
}

pub trait TypeProvider: Send + Sync {
    fn name(&self) -> &'static str;
    fn instantiate(
        &self,
        alias: &str,
        params: &[StaticParam],
        env: &ProviderEnv,
    ) -> Result<ProvidedContext, ProviderFailure>;
}

pub struct ProviderRegistry {
    providers: Vec<Box<dyn TypeProvider>>,
}

impl Default for ProviderRegistry {
    fn default() -> Self {
        ProviderRegistry {
            providers: vec![Box::new(data::WorldBankProvider), Box::new(tsdecl::TypeScriptProvider)],
        }
    }
}

impl ProviderRegistry {
    pub fn register(&mut self, p: Box<dyn TypeProvider>) {
        self.providers.push(p);
    }

    pub fn instantiate(
        &self,
        name: &str,
        alias: &str,
        params: &[StaticParam],
        env: &ProviderEnv,
    ) -> Result<ProvidedContext, ProviderFailure> {
        let p = self
            .providers
            .iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| ProviderFailure::new(format!("unknown type provider `{name}`")))?;
        p.instantiate(alias, params, env)
    }
}

pub fn instantiate_provider(
    name: &str,
    alias: &str,
    params: &[StaticParam],
    env: &ProviderEnv,
) -> Result<ProvidedContext, ProviderFailure> {
    ProviderRegistry::default().instantiate(name, alias, params, env)
}

/// Reads named boolean static parameters, rejecting unknown names,
/// positional values and strings.
pub(crate) fn bool_params(
    provider: &str,
    params: &[StaticParam],
    known: &[&str],
) -> Result<BTreeMap<String, bool>, ProviderFailure> {
    let mut out = BTreeMap::new();
    for p in params {
        let Some(name) = &p.name else {
            return Err(ProviderFailure::new(format!(
                "{provider} takes only named static parameters"
            )));
        };
        if !known.contains(&name.as_str()) {
            return Err(ProviderFailure::new(format!(
                "{provider} has no static parameter `{name}`"
            )));
        }
        match p.value {
            StaticValue::Bool(b) => {
                if out.insert(name.clone(), b).is_some() {
                    return Err(ProviderFailure::new(format!("static parameter `{name}` given twice")));
                }
            }
            StaticValue::Str(_) => {
                return Err(ProviderFailure::new(format!(
                    "static parameter `{name}` expects a bool"
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_is_sticky_and_computed_once() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c = calls.clone();
        let mut ctx = ProvidedContext::new();
        ctx.add_type(TypeId::new("T"), "T", move || {
            c.fetch_add(1, Ordering::SeqCst);
            Err(ProviderFailure::new("schema vanished"))
        });
        let id = TypeId::new("T");
        assert!(lookup_member(&ctx, &id, "x").is_err());
        assert!(lookup_member(&ctx, &id, "y").is_err());
        assert_eq!(calls.load(Ordering::SeqCst), 1);
        assert_eq!(ctx.materialized_count(), 1);
    }

    #[test]
    fn members_are_memoized() {
        let mut ctx = ProvidedContext::new();
        ctx.add_type(TypeId::new("T"), "T", || {
            Ok(vec![ProvidedMember::property(
                "a",
                CoreType::Int,
                ErasurePlan::identity(),
            )])
        });
        ctx.add_type(TypeId::new("U"), "U", || Ok(vec![]));
        let id = TypeId::new("T");
        assert!(lookup_member(&ctx, &id, "a").unwrap().is_some());
        assert!(lookup_member(&ctx, &id, "b").unwrap().is_none());
        assert_eq!(ctx.materialized_count(), 1);
    }

    #[test]
    fn unknown_provider() {
        let env = ProviderEnv::new(Arc::new(crate::world::OfflineWorld), Arc::new(MemoryDts::default()));
        let err = instantiate_provider("Freebase", "F", &[], &env).unwrap_err();
        assert!(err.reason.contains("unknown type provider"));
    }
}
