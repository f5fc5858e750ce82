//! Erasure: every provided-member node is replaced by its plan, instantiated
//! with the receiver and arguments. The result is the whole-module
//! "quotation" the backends consume.

use crate::core_ir::{CoreExpr, CoreKind, CoreModule};
use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::prelude::NUMBER_TEMPLATE;
use crate::provider::{ArgTemplate, ErasurePlan};
use crate::shim::{is_shim_symbol, template_is_well_formed};
use crate::syntax::{Literal, Pattern};
use crate::typecheck::TypedModule;
use crate::types::CoreType;

/// Fails only on provider bugs: unknown runtime symbols, malformed
/// templates, or plans referencing a receiver that is not there.
pub fn erase_module(tm: &TypedModule) -> Result<CoreModule, Vec<Diagnostic>> {
    let mut cm = tm.core.clone();
    let mut diags = Vec::new();
    for e in cm.exprs_mut() {
        erase_expr(e, &mut diags);
    }
    if diags.is_empty() {
        Ok(cm)
    } else {
        Err(diags)
    }
}

fn erase_expr(e: &mut CoreExpr, diags: &mut Vec<Diagnostic>) {
    if let CoreKind::App(f, a) = &mut e.kind {
        if matches!(&f.kind, CoreKind::Prim(n) if n == "number") {
            erase_expr(a, diags);
            let a = std::mem::replace(a.as_mut(), CoreExpr::unit(SourceSpan::DUMMY));
            e.kind = CoreKind::JsTemplate {
                text: NUMBER_TEMPLATE.into(),
                args: vec![a],
            };
            return;
        }
    }
    e.for_each_child_mut(&mut |c| erase_expr(c, diags));
    let span = e.span;
    let ty = e.ty.clone();
    let kind = std::mem::replace(&mut e.kind, CoreKind::Undefined);
    e.kind = match kind {
        CoreKind::MemberGet { receiver, member } => {
            match instantiate(&member.plan, receiver.map(|r| *r), &[], ty.clone(), span) {
                Ok(x) => x.kind,
                Err(d) => {
                    diags.push(d);
                    CoreKind::Undefined
                }
            }
        }
        CoreKind::MemberCall { receiver, member, args } => {
            match instantiate(&member.plan, receiver.map(|r| *r), &args, ty.clone(), span) {
                Ok(x) => x.kind,
                Err(d) => {
                    diags.push(d);
                    CoreKind::Undefined
                }
            }
        }
        CoreKind::MemberSet {
            receiver,
            member,
            value,
        } => match instantiate(&member.plan, Some(*receiver), &[Some(*value)], ty.clone(), span) {
            Ok(x) => x.kind,
            Err(d) => {
                diags.push(d);
                CoreKind::Undefined
            }
        },
        CoreKind::Prim(n) if n == "number" => {
            // First-class use: eta-expand around the template.
            let param_ty = match &ty {
                CoreType::Function(p, _) => (**p).clone(),
                _ => CoreType::Object,
            };
            let x = CoreExpr::new(CoreKind::Var("$x".into()), param_ty, span);
            CoreKind::Lambda {
                param: Pattern::Var("$x".into()),
                body: Box::new(CoreExpr::new(
                    CoreKind::JsTemplate {
                        text: NUMBER_TEMPLATE.into(),
                        args: vec![x],
                    },
                    CoreType::Float,
                    span,
                )),
            }
        }
        other => other,
    };
    // An identity plan yields the receiver node; it keeps the member's type.
    e.ty = ty;
}

/// Builds the expression a plan denotes.
pub fn instantiate(
    plan: &ErasurePlan,
    receiver: Option<CoreExpr>,
    args: &[Option<CoreExpr>],
    ty: CoreType,
    span: SourceSpan,
) -> Result<CoreExpr, Diagnostic> {
    let mut out = Vec::new();
    for t in plan.args() {
        match t {
            ArgTemplate::Receiver => out.push(receiver.clone().ok_or_else(|| {
                Diagnostic::error(codes::EMIT_RESIDUAL, span, "erasure plan references a missing receiver")
            })?),
            ArgTemplate::Arg(i) => out.push(
                args.get(*i)
                    .cloned()
                    .flatten()
                    .unwrap_or_else(|| CoreExpr::new(CoreKind::Undefined, CoreType::Object, span)),
            ),
            ArgTemplate::Args => {
                let last = args.iter().rposition(Option::is_some).map_or(0, |i| i + 1);
                out.extend(args[..last].iter().map(|a| {
                    a.clone()
                        .unwrap_or_else(|| CoreExpr::new(CoreKind::Undefined, CoreType::Object, span))
                }));
            }
            ArgTemplate::Str(s) => out.push(CoreExpr::new(
                CoreKind::Lit(Literal::String(s.clone())),
                CoreType::String,
                span,
            )),
            ArgTemplate::Plan(p) => out.push(instantiate(p, receiver.clone(), args, CoreType::Object, span)?),
        }
    }
    let kind = match plan {
        ErasurePlan::RuntimeCall { symbol, .. } => {
            if !is_shim_symbol(symbol) {
                return Err(Diagnostic::error(
                    codes::EMIT_UNRESOLVED_SHIM,
                    span,
                    format!("erasure plan uses unknown runtime symbol `{symbol}`"),
                ));
            }
            CoreKind::RuntimeCall {
                symbol: symbol.clone(),
                args: out,
            }
        }
        ErasurePlan::EmitCall { is_static, name, .. } => CoreKind::EmitCall {
            is_static: *is_static,
            name: name.clone(),
            args: out,
        },
        ErasurePlan::EmitPropertyGet { is_static, name, .. } => CoreKind::EmitPropertyGet {
            is_static: *is_static,
            name: name.clone(),
            args: out,
        },
        ErasurePlan::EmitPropertySet { is_static, name, .. } => CoreKind::EmitPropertySet {
            is_static: *is_static,
            name: name.clone(),
            args: out,
        },
        ErasurePlan::JsTemplate { text, .. } => {
            if !template_is_well_formed(text, out.len()) {
                return Err(Diagnostic::error(
                    codes::EMIT_RESIDUAL,
                    span,
                    format!("template {text:?} does not match its {} argument(s)", out.len()),
                ));
            }
            if text == "{0}" {
                let mut x = out.pop().expect("one argument");
                x.ty = ty;
                return Ok(x);
            }
            CoreKind::JsTemplate {
                text: text.clone(),
                args: out,
            }
        }
    };
    Ok(CoreExpr::new(kind, ty, span))
}
