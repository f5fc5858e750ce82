//! Desugaring of `async { }` blocks into builder operations.
//!
//! ```text
//! async { c }            Delay(fun () -> [c])
//! [let! p = e in c]      Bind(e, fun p -> [c])
//! [return e]             Return(e)
//! [c1; c2]               Bind([c1], fun () -> [c2])     c1 a computation
//! [e; c]                 e; [c]                          e a statement
//! [for p in xs do c]     For(xs, fun p -> [c])
//! [try c with p -> h]    Catch(Delay(fun () -> [c]), fun p -> [h])
//! [if b then c1 else c2] if b then [c1] else [c2]       missing else: Return(())
//! [e]                    Return(e)                       e a unit statement
//! ```
//!
//! `Async.StartImmediate x` becomes the `StartImmediate` builder op.

use crate::core_ir::{BuilderKind, CoreExpr, CoreKind, CoreModule};
use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::syntax::Pattern;
use crate::types::CoreType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Js,
    Interp,
}

/// Start primitives no backend supports.
pub const UNSUPPORTED_STARTS: &[&str] = &["Async.RunSynchronously", "Async.Start"];

pub fn desugar_async(cm: &CoreModule) -> Result<CoreModule, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut out = cm.clone();
    for e in out.exprs_mut() {
        let taken = std::mem::replace(e, CoreExpr::unit(SourceSpan::DUMMY));
        *e = pure(taken, &mut diags);
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

/// Both backends accept only `StartImmediate`.
pub fn validate_start_primitives(cm: &CoreModule, _target: Backend) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for e in cm.exprs() {
        e.walk(&mut |x| {
            if let CoreKind::Prim(n) = &x.kind {
                if UNSUPPORTED_STARTS.contains(&n.as_str()) {
                    diags.push(Diagnostic::error(
                        codes::ASYNC_UNSUPPORTED_START,
                        x.span,
                        format!("{n} cannot be translated; use Async.StartImmediate"),
                    ));
                }
            }
        });
    }
    diags
}

fn builder(op: BuilderKind, args: Vec<CoreExpr>, ty: CoreType, span: SourceSpan) -> CoreExpr {
    CoreExpr::new(CoreKind::BuilderOp { op, args }, ty, span)
}

fn lambda(param: Pattern, param_ty: CoreType, body: CoreExpr) -> CoreExpr {
    let span = body.span;
    let ty = CoreType::func(param_ty, body.ty.clone());
    CoreExpr::new(
        CoreKind::Lambda {
            param,
            body: Box::new(body),
        },
        ty,
        span,
    )
}

fn delay(body: CoreExpr) -> CoreExpr {
    let (ty, span) = (body.ty.clone(), body.span);
    builder(
        BuilderKind::Delay,
        vec![lambda(Pattern::Unit, CoreType::Unit, body)],
        ty,
        span,
    )
}

fn ret_unit(span: SourceSpan) -> CoreExpr {
    builder(
        BuilderKind::Return,
        vec![CoreExpr::unit(span)],
        CoreType::async_of(CoreType::Unit),
        span,
    )
}

fn element_type(t: &CoreType) -> CoreType {
    match t {
        CoreType::List(t) | CoreType::Array(t) => (**t).clone(),
        _ => CoreType::Object,
    }
}

fn async_result(t: &CoreType) -> CoreType {
    match t {
        CoreType::Async(t) => (**t).clone(),
        _ => CoreType::Object,
    }
}

/// Whether a node in computation position is structural (not a statement).
fn is_comp(e: &CoreExpr) -> bool {
    matches!(
        e.kind,
        CoreKind::LetBang { .. }
            | CoreKind::Return(_)
            | CoreKind::Let { .. }
            | CoreKind::Seq(..)
            | CoreKind::If { .. }
            | CoreKind::For { .. }
            | CoreKind::TryWith { .. }
    )
}

fn is_start_immediate(e: &CoreExpr) -> bool {
    matches!(&e.kind, CoreKind::Prim(n) if n == "Async.StartImmediate")
}

fn pure(mut e: CoreExpr, diags: &mut Vec<Diagnostic>) -> CoreExpr {
    let span = e.span;
    match e.kind {
        CoreKind::AsyncBlock(body) => delay(comp(*body, diags)),
        CoreKind::App(f, x) if is_start_immediate(&f) => {
            builder(BuilderKind::StartImmediate, vec![pure(*x, diags)], CoreType::Unit, span)
        }
        CoreKind::Prim(ref n) if n == "Async.StartImmediate" => {
            let arg_ty = match &e.ty {
                CoreType::Function(p, _) => (**p).clone(),
                _ => CoreType::Object,
            };
            let x = CoreExpr::new(CoreKind::Var("$c".into()), arg_ty.clone(), span);
            lambda(
                Pattern::Var("$c".into()),
                arg_ty,
                builder(BuilderKind::StartImmediate, vec![x], CoreType::Unit, span),
            )
        }
        CoreKind::LetBang { .. } | CoreKind::Return(_) => {
            diags.push(Diagnostic::error(
                codes::ASYNC_LETBANG_OUTSIDE,
                span,
                "let! and return are only allowed inside async { }",
            ));
            e
        }
        _ => {
            e.for_each_child_mut(&mut |c| {
                let taken = std::mem::replace(c, CoreExpr::unit(SourceSpan::DUMMY));
                *c = pure(taken, diags);
            });
            e
        }
    }
}

fn comp(e: CoreExpr, diags: &mut Vec<Diagnostic>) -> CoreExpr {
    let span = e.span;
    let ty = e.ty.clone();
    match e.kind {
        CoreKind::LetBang { pat, value, body } => {
            let v = pure(*value, diags);
            let a = async_result(&v.ty);
            let k = lambda(pat, a, comp(*body, diags));
            builder(BuilderKind::Bind, vec![v, k], ty, span)
        }
        CoreKind::Return(x) => builder(BuilderKind::Return, vec![pure(*x, diags)], ty, span),
        CoreKind::Let { rec, pat, value, body } => CoreExpr::new(
            CoreKind::Let {
                rec,
                pat,
                value: Box::new(pure(*value, diags)),
                body: Box::new(comp(*body, diags)),
            },
            ty,
            span,
        ),
        CoreKind::Seq(a, b) => {
            if is_comp(&a) {
                let first = comp(*a, diags);
                let k = lambda(Pattern::Unit, CoreType::Unit, comp(*b, diags));
                builder(BuilderKind::Bind, vec![first, k], ty, span)
            } else {
                CoreExpr::new(
                    CoreKind::Seq(Box::new(pure(*a, diags)), Box::new(comp(*b, diags))),
                    ty,
                    span,
                )
            }
        }
        CoreKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let el = match else_branch {
                Some(x) => comp(*x, diags),
                None => ret_unit(span),
            };
            CoreExpr::new(
                CoreKind::If {
                    cond: Box::new(pure(*cond, diags)),
                    then_branch: Box::new(comp(*then_branch, diags)),
                    else_branch: Some(Box::new(el)),
                },
                ty,
                span,
            )
        }
        CoreKind::For { pat, collection, body } => {
            let coll = pure(*collection, diags);
            let elem = element_type(&coll.ty);
            let k = lambda(pat, elem, comp(*body, diags));
            builder(BuilderKind::For, vec![coll, k], ty, span)
        }
        CoreKind::TryWith { body, pat, handler } => {
            let b = delay(comp(*body, diags));
            let h = lambda(pat, CoreType::String, comp(*handler, diags));
            builder(BuilderKind::Catch, vec![b, h], ty, span)
        }
        kind => {
            let leaf = pure(CoreExpr::new(kind, ty, span), diags);
            builder(
                BuilderKind::Return,
                vec![leaf],
                CoreType::async_of(CoreType::Unit),
                span,
            )
        }
    }
}
