//! Hindley-Milner inference extended with provided-member resolution.
//!
//! Unification variables carry levels for generalization. Member access
//! needs the receiver's type to be known at that point: application
//! spines infer non-lambda arguments first and check lambda arguments
//! afterwards against the now-resolved parameter types, which is what
//! lets `xs |> List.map (fun c -> c.Indicators)` type-check.
//!
//! Inside `async { }` the body is checked in computation mode: `let`,
//! `;`, `if`, `for` and `try` are structural, `let!` and `return` are the
//! builder operations, and any other expression is a unit statement.
//! Computation nodes are annotated with their `'r async` type.

use std::collections::BTreeMap;

use crate::core_ir::{CoreBinding, CoreExpr, CoreKind, CoreModule, MemberRef};
use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::prelude;
use crate::provider::{lookup_member, MemberKind, ProvidedContext, ProvidedMember, Signature};
use crate::syntax::{BinOp, ExprKind, Literal, NamedArg, Pattern, SourceModule, SurfaceExpr, UnOp};
use crate::types::{CoreType, Scheme, TyVar, TypeId};

/// A type-checked module: the core IR before erasure plus the schemes of
/// top-level names.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedModule {
    pub core: CoreModule,
    /// Top-level bindings in declaration order (shadowed names repeat).
    pub schemes: Vec<(String, Scheme)>,
}

impl TypedModule {
    pub fn scheme(&self, name: &str) -> Option<&Scheme> {
        self.schemes.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn entry_type(&self) -> Option<&CoreType> {
        self.core.entry.as_ref().map(|e| &e.ty)
    }
}

type R<T> = Result<T, Diagnostic>;

pub fn typecheck_module(src: &SourceModule, ctx: &ProvidedContext) -> Result<TypedModule, Vec<Diagnostic>> {
    let mut inf = Infer::new(ctx);
    let mut diags = Vec::new();
    let mut core = CoreModule::default();
    let mut schemes = Vec::new();

    for b in &src.bindings {
        match inf.top_binding(b.rec, &b.pat, &b.params, &b.value, b.span) {
            Ok((value, bound)) => {
                core.bindings.push(CoreBinding {
                    rec: b.rec,
                    pat: b.pat.clone(),
                    value,
                    span: b.span,
                });
                for (n, s) in bound {
                    inf.env.push((n.clone(), s.clone()));
                    schemes.push((n, s));
                }
            }
            Err(d) => {
                diags.push(d);
                // Keep checking later bindings against an unconstrained name.
                let mut names = Vec::new();
                b.pat.bound_names(&mut names);
                for n in names {
                    let v = inf.fresh_var();
                    inf.env.push((
                        n,
                        Scheme {
                            vars: vec![v],
                            ty: CoreType::Var(v),
                        },
                    ));
                }
            }
        }
    }
    if let Some(e) = &src.entry {
        match inf.infer(e) {
            Ok(e) => core.entry = Some(e),
            Err(d) => diags.push(d),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    for e in core.exprs_mut() {
        inf.zonk_expr(e);
    }
    let schemes = schemes
        .into_iter()
        .map(|(n, s)| {
            let ty = inf.zonk(&s.ty);
            (n, Scheme { vars: s.vars, ty })
        })
        .collect();
    Ok(TypedModule { core, schemes })
}

/// Infers the type scheme of a closed provider-free expression.
pub fn infer_expr_scheme(e: &SurfaceExpr) -> Result<Scheme, Diagnostic> {
    let ctx = ProvidedContext::new();
    let mut inf = Infer::new(&ctx);
    inf.enter();
    let core = inf.infer(e)?;
    inf.exit();
    let s = if is_value(e) {
        inf.generalize(&core.ty)
    } else {
        Scheme::mono(inf.zonk(&core.ty))
    };
    Ok(s.canonical())
}

/// Syntactic values; only these generalize.
pub fn is_value(e: &SurfaceExpr) -> bool {
    match &e.kind {
        ExprKind::Lit(_) | ExprKind::Ident(_) | ExprKind::Lambda { .. } => true,
        ExprKind::Tuple(es) | ExprKind::List(es) => es.iter().all(is_value),
        _ => false,
    }
}

struct Infer<'c> {
    ctx: &'c ProvidedContext,
    subst: Vec<Option<CoreType>>,
    levels: Vec<u32>,
    level: u32,
    env: Vec<(String, Scheme)>,
}

enum UnifyError {
    Mismatch,
    Object,
    Occurs,
}

impl<'c> Infer<'c> {
    fn new(ctx: &'c ProvidedContext) -> Self {
        Infer {
            ctx,
            subst: Vec::new(),
            levels: Vec::new(),
            level: 0,
            env: Vec::new(),
        }
    }

    fn enter(&mut self) {
        self.level += 1;
    }

    fn exit(&mut self) {
        self.level -= 1;
    }

    fn fresh_var(&mut self) -> TyVar {
        self.subst.push(None);
        self.levels.push(self.level);
        TyVar(self.subst.len() as u32 - 1)
    }

    fn fresh(&mut self) -> CoreType {
        CoreType::Var(self.fresh_var())
    }

    fn resolve(&self, t: &CoreType) -> CoreType {
        let mut t = t.clone();
        while let CoreType::Var(v) = t {
            match &self.subst[v.0 as usize] {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn zonk(&self, t: &CoreType) -> CoreType {
        use CoreType::*;
        match self.resolve(t) {
            Function(a, b) => CoreType::func(self.zonk(&a), self.zonk(&b)),
            Tuple(ts) => Tuple(ts.iter().map(|t| self.zonk(t)).collect()),
            List(t) => CoreType::list(self.zonk(&t)),
            Array(t) => CoreType::array(self.zonk(&t)),
            Async(t) => CoreType::async_of(self.zonk(&t)),
            Option(t) => CoreType::option(self.zonk(&t)),
            other => other,
        }
    }

    fn zonk_expr(&self, e: &mut CoreExpr) {
        e.ty = self.zonk(&e.ty);
        e.for_each_child_mut(&mut |c| self.zonk_expr(c));
    }

    fn occurs_adjust(&mut self, v: TyVar, t: &CoreType) -> Result<(), UnifyError> {
        match self.resolve(t) {
            CoreType::Var(w) => {
                if w == v {
                    return Err(UnifyError::Occurs);
                }
                let lv = self.levels[v.0 as usize];
                let lw = &mut self.levels[w.0 as usize];
                *lw = (*lw).min(lv);
                Ok(())
            }
            CoreType::Function(a, b) => {
                self.occurs_adjust(v, &a)?;
                self.occurs_adjust(v, &b)
            }
            CoreType::Tuple(ts) => ts.iter().try_for_each(|t| self.occurs_adjust(v, t)),
            CoreType::List(t) | CoreType::Array(t) | CoreType::Async(t) | CoreType::Option(t) => {
                self.occurs_adjust(v, &t)
            }
            _ => Ok(()),
        }
    }

    fn unify_inner(&mut self, a: &CoreType, b: &CoreType) -> Result<(), UnifyError> {
        use CoreType::*;
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Var(x), Var(y)) if x == y => Ok(()),
            (Var(x), t) | (t, Var(x)) => {
                self.occurs_adjust(*x, t)?;
                self.subst[x.0 as usize] = Some(t.clone());
                Ok(())
            }
            (Function(a1, r1), Function(a2, r2)) => {
                self.unify_inner(a1, a2)?;
                self.unify_inner(r1, r2)
            }
            (Tuple(xs), Tuple(ys)) if xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify_inner(x, y))
            }
            (List(x), List(y)) | (Array(x), Array(y)) | (Async(x), Async(y)) | (Option(x), Option(y)) => {
                self.unify_inner(x, y)
            }
            (Named(x), Named(y)) if x == y => Ok(()),
            (x, y) if x == y => Ok(()),
            (Object, _) | (_, Object) => Err(UnifyError::Object),
            _ => Err(UnifyError::Mismatch),
        }
    }

    /// Unifies `expected` with `found`, reporting at `span`.
    fn unify(&mut self, expected: &CoreType, found: &CoreType, span: SourceSpan) -> R<()> {
        self.unify_inner(expected, found).map_err(|e| {
            let exp = self.zonk(expected);
            let got = self.zonk(found);
            match e {
                UnifyError::Mismatch => {
                    Diagnostic::error(codes::TYPE_MISMATCH, span, format!("expected {exp}, found {got}"))
                }
                UnifyError::Object => Diagnostic::error(
                    codes::TYPE_OBJECT_NEEDS_UNBOX,
                    span,
                    format!("expected {exp}, found {got}; use unbox<T> to convert from obj"),
                ),
                UnifyError::Occurs => Diagnostic::error(
                    codes::TYPE_OCCURS,
                    span,
                    format!("cannot construct the infinite type {exp} = {got}"),
                ),
            }
        })
    }

    fn generalize(&self, t: &CoreType) -> Scheme {
        let ty = self.zonk(t);
        let mut fv = Vec::new();
        ty.free_vars(&mut fv);
        let vars = fv
            .into_iter()
            .filter(|v| self.levels[v.0 as usize] > self.level)
            .collect();
        Scheme { vars, ty }
    }

    fn instantiate(&mut self, s: &Scheme) -> CoreType {
        let map: BTreeMap<TyVar, CoreType> = s.vars.iter().map(|v| (*v, self.fresh())).collect();
        s.ty.substitute(&map)
    }

    fn lookup_local(&self, name: &str) -> Option<&Scheme> {
        self.env.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Binds a pattern against `ty`, returning the names it introduces.
    fn bind_pattern(&mut self, pat: &Pattern, ty: &CoreType, span: SourceSpan) -> R<Vec<(String, CoreType)>> {
        match pat {
            Pattern::Wildcard => Ok(Vec::new()),
            Pattern::Var(n) => Ok(vec![(n.clone(), ty.clone())]),
            Pattern::Unit => {
                self.unify(ty, &CoreType::Unit, span)?;
                Ok(Vec::new())
            }
            Pattern::Tuple(ps) => {
                let parts: Vec<CoreType> = ps.iter().map(|_| self.fresh()).collect();
                self.unify(&CoreType::Tuple(parts.clone()), ty, span)?;
                let mut out = Vec::new();
                for (p, t) in ps.iter().zip(&parts) {
                    out.extend(self.bind_pattern(p, t, span)?);
                }
                Ok(out)
            }
        }
    }

    fn push_mono(&mut self, names: Vec<(String, CoreType)>) {
        for (n, t) in names {
            self.env.push((n, Scheme::mono(t)));
        }
    }

    /// Shared by top-level and nested `let`. Returns the core value and
    /// the schemes of bound names.
    fn let_value(
        &mut self,
        rec: bool,
        pat: &Pattern,
        params: &[Pattern],
        value: &SurfaceExpr,
        span: SourceSpan,
    ) -> R<(CoreExpr, Vec<(String, Scheme)>)> {
        let lambda;
        let value = if params.is_empty() {
            value
        } else {
            lambda = SurfaceExpr::new(
                ExprKind::Lambda {
                    params: params.to_vec(),
                    body: Box::new(value.clone()),
                },
                value.span,
            );
            &lambda
        };
        self.enter();
        let core = if rec {
            let Pattern::Var(name) = pat else {
                self.exit();
                return Err(Diagnostic::error(
                    codes::TYPE_MISMATCH,
                    span,
                    "let rec needs a single name",
                ));
            };
            let t = self.fresh();
            let mark = self.env.len();
            self.env.push((name.clone(), Scheme::mono(t.clone())));
            let r = self.infer(value).and_then(|c| {
                self.unify(&t, &c.ty, value.span)?;
                Ok(c)
            });
            self.env.truncate(mark);
            r
        } else {
            self.infer(value)
        };
        let core = match core {
            Ok(c) => c,
            Err(d) => {
                self.exit();
                return Err(d);
            }
        };
        let names = self.bind_pattern(pat, &core.ty, span);
        self.exit();
        let names = names?;
        let gen = is_value(value);
        let bound = names
            .into_iter()
            .map(|(n, t)| {
                let s = if gen { self.generalize(&t) } else { Scheme::mono(t) };
                (n, s)
            })
            .collect();
        Ok((core, bound))
    }

    fn top_binding(
        &mut self,
        rec: bool,
        pat: &Pattern,
        params: &[Pattern],
        value: &SurfaceExpr,
        span: SourceSpan,
    ) -> R<(CoreExpr, Vec<(String, Scheme)>)> {
        self.let_value(rec, pat, params, value, span)
    }

    fn infer(&mut self, e: &SurfaceExpr) -> R<CoreExpr> {
        let span = e.span;
        let mk = |kind, ty| CoreExpr::new(kind, ty, span);
        match &e.kind {
            ExprKind::Lit(l) => {
                let ty = match l {
                    Literal::Int(_) => CoreType::Int,
                    Literal::Float(_) => CoreType::Float,
                    Literal::String(_) => CoreType::String,
                    Literal::Bool(_) => CoreType::Bool,
                    Literal::Unit => CoreType::Unit,
                };
                Ok(mk(CoreKind::Lit(l.clone()), ty))
            }
            ExprKind::Ident(name) => self.ident(name, span),
            ExprKind::Lambda { .. } => {
                let t = self.fresh();
                self.check_lambda(e, &t)
            }
            ExprKind::App(..) => self.app(e),
            ExprKind::Let {
                rec,
                pat,
                params,
                value,
                body,
            } => {
                let (value, bound) = self.let_value(*rec, pat, params, value, span)?;
                let mark = self.env.len();
                self.env.extend(bound);
                let body = self.infer(body);
                self.env.truncate(mark);
                let body = body?;
                let ty = body.ty.clone();
                Ok(mk(
                    CoreKind::Let {
                        rec: *rec,
                        pat: pat.clone(),
                        value: Box::new(value),
                        body: Box::new(body),
                    },
                    ty,
                ))
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.infer(cond)?;
                self.unify(&CoreType::Bool, &c.ty, cond.span)?;
                let t = self.infer(then_branch)?;
                let el = match else_branch {
                    Some(eb) => {
                        let x = self.infer(eb)?;
                        self.unify(&t.ty, &x.ty, eb.span)?;
                        Some(Box::new(x))
                    }
                    None => {
                        self.unify(&CoreType::Unit, &t.ty, then_branch.span)?;
                        None
                    }
                };
                let ty = t.ty.clone();
                Ok(mk(
                    CoreKind::If {
                        cond: Box::new(c),
                        then_branch: Box::new(t),
                        else_branch: el,
                    },
                    ty,
                ))
            }
            ExprKind::Tuple(items) => {
                let items = items.iter().map(|i| self.infer(i)).collect::<R<Vec<_>>>()?;
                let ty = CoreType::Tuple(items.iter().map(|i| i.ty.clone()).collect());
                Ok(mk(CoreKind::Tuple(items), ty))
            }
            ExprKind::List(items) | ExprKind::Array(items) => {
                let elem = self.fresh();
                let mut out = Vec::new();
                for i in items {
                    let c = self.infer(i)?;
                    self.unify(&elem, &c.ty, i.span)?;
                    out.push(c);
                }
                Ok(if matches!(e.kind, ExprKind::List(_)) {
                    mk(CoreKind::List(out), CoreType::list(elem))
                } else {
                    mk(CoreKind::Array(out), CoreType::array(elem))
                })
            }
            ExprKind::Member { receiver, name } => self.member_get(receiver, name, span),
            ExprKind::MemberSet { receiver, name, value } => self.member_set(receiver, name, value, span),
            ExprKind::MethodCall {
                receiver,
                name,
                args,
                named,
            } => self.method_call(receiver, name, args, named, span),
            ExprKind::Async(body) => {
                let r = self.fresh();
                let body = self.comp(body, &r)?;
                Ok(mk(CoreKind::AsyncBlock(Box::new(body)), CoreType::async_of(r)))
            }
            ExprKind::LetBang { .. } | ExprKind::Return(_) => Err(Diagnostic::error(
                codes::ASYNC_LETBANG_OUTSIDE,
                span,
                "let! and return are only allowed inside async { }",
            )),
            ExprKind::For { pat, collection, body } => {
                let (coll, mark) = self.for_head(pat, collection, span)?;
                let b = self.infer(body);
                self.env.truncate(mark);
                let b = b?;
                self.unify(&CoreType::Unit, &b.ty, body.span)?;
                Ok(mk(
                    CoreKind::For {
                        pat: pat.clone(),
                        collection: Box::new(coll),
                        body: Box::new(b),
                    },
                    CoreType::Unit,
                ))
            }
            ExprKind::Unbox { target, expr } => self.unbox(target, expr, span),
            ExprKind::Seq(a, b) => {
                let a2 = self.infer(a)?;
                self.unify(&CoreType::Unit, &a2.ty, a.span)?;
                let b2 = self.infer(b)?;
                let ty = b2.ty.clone();
                Ok(mk(CoreKind::Seq(Box::new(a2), Box::new(b2)), ty))
            }
            ExprKind::TryWith { body, pat, handler } => {
                let b = self.infer(body)?;
                let mark = self.env.len();
                let names = self.bind_pattern(pat, &CoreType::String, span)?;
                self.push_mono(names);
                let h = self.infer(handler);
                self.env.truncate(mark);
                let h = h?;
                self.unify(&b.ty, &h.ty, handler.span)?;
                let ty = b.ty.clone();
                Ok(mk(
                    CoreKind::TryWith {
                        body: Box::new(b),
                        pat: pat.clone(),
                        handler: Box::new(h),
                    },
                    ty,
                ))
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.infer(lhs)?;
                let r = self.infer(rhs)?;
                use CoreType as T;
                let ty = match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod => {
                        self.unify(&T::Int, &l.ty, lhs.span)?;
                        self.unify(&T::Int, &r.ty, rhs.span)?;
                        T::Int
                    }
                    BinOp::FAdd | BinOp::FSub | BinOp::FMul | BinOp::FDiv => {
                        self.unify(&T::Float, &l.ty, lhs.span)?;
                        self.unify(&T::Float, &r.ty, rhs.span)?;
                        T::Float
                    }
                    BinOp::Concat => {
                        self.unify(&T::String, &l.ty, lhs.span)?;
                        self.unify(&T::String, &r.ty, rhs.span)?;
                        T::String
                    }
                    BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge => {
                        self.unify(&l.ty, &r.ty, rhs.span)?;
                        T::Bool
                    }
                    BinOp::And | BinOp::Or => {
                        self.unify(&T::Bool, &l.ty, lhs.span)?;
                        self.unify(&T::Bool, &r.ty, rhs.span)?;
                        T::Bool
                    }
                    BinOp::Cons => {
                        let lt = CoreType::list(l.ty.clone());
                        self.unify(&lt, &r.ty, rhs.span)?;
                        lt
                    }
                };
                Ok(mk(
                    CoreKind::Binary {
                        op: *op,
                        lhs: Box::new(l),
                        rhs: Box::new(r),
                    },
                    ty,
                ))
            }
            ExprKind::Unary { op, expr } => {
                let x = self.infer(expr)?;
                let ty = match op {
                    UnOp::Neg => CoreType::Int,
                    UnOp::FNeg => CoreType::Float,
                };
                self.unify(&ty, &x.ty, expr.span)?;
                Ok(mk(
                    CoreKind::Unary {
                        op: *op,
                        expr: Box::new(x),
                    },
                    ty,
                ))
            }
        }
    }

    fn ident(&mut self, name: &str, span: SourceSpan) -> R<CoreExpr> {
        if let Some(s) = self.lookup_local(name).cloned() {
            let ty = self.instantiate(&s);
            return Ok(CoreExpr::new(CoreKind::Var(name.to_string()), ty, span));
        }
        if self.ctx.root(name).is_some() {
            return Err(Diagnostic::error(
                codes::TYPE_UNBOUND,
                span,
                format!("provider alias `{name}` is not a value; access one of its static members"),
            ));
        }
        if let Some(s) = prelude::scheme(name) {
            let ty = self.instantiate(&s);
            return Ok(CoreExpr::new(CoreKind::Prim(name.to_string()), ty, span));
        }
        Err(Diagnostic::error(
            codes::TYPE_UNBOUND,
            span,
            format!("unbound identifier `{name}`"),
        ))
    }

    /// Checks a lambda against an expected function type.
    fn check_lambda(&mut self, e: &SurfaceExpr, expected: &CoreType) -> R<CoreExpr> {
        let ExprKind::Lambda { params, body } = &e.kind else {
            unreachable!("check_lambda on a non-lambda")
        };
        let mark = self.env.len();
        let r = self.check_lambda_params(params, body, expected, e.span);
        self.env.truncate(mark);
        r
    }

    fn check_lambda_params(
        &mut self,
        params: &[Pattern],
        body: &SurfaceExpr,
        expected: &CoreType,
        span: SourceSpan,
    ) -> R<CoreExpr> {
        let Some((first, rest)) = params.split_first() else {
            let b = self.infer(body)?;
            self.unify(expected, &b.ty, body.span)?;
            return Ok(b);
        };
        let (p, r) = match self.resolve(expected) {
            CoreType::Function(p, r) => (*p, *r),
            _ => {
                let (p, r) = (self.fresh(), self.fresh());
                self.unify(expected, &CoreType::func(p.clone(), r.clone()), span)?;
                (p, r)
            }
        };
        let names = self.bind_pattern(first, &p, span)?;
        self.push_mono(names);
        let inner = self.check_lambda_params(rest, body, &r, span)?;
        let ty = CoreType::func(p, inner.ty.clone());
        Ok(CoreExpr::new(
            CoreKind::Lambda {
                param: first.clone(),
                body: Box::new(inner),
            },
            ty,
            span,
        ))
    }

    fn app(&mut self, e: &SurfaceExpr) -> R<CoreExpr> {
        let mut args = Vec::new();
        let mut head = e;
        while let ExprKind::App(f, a) = &head.kind {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        let h = self.infer(head)?;
        let mut fty = h.ty.clone();
        let mut done: Vec<Option<CoreExpr>> = Vec::new();
        let mut deferred = Vec::new();
        for (i, a) in args.iter().enumerate() {
            let (p, r) = match self.resolve(&fty) {
                CoreType::Function(p, r) => (*p, *r),
                CoreType::Var(_) => {
                    let (p, r) = (self.fresh(), self.fresh());
                    self.unify(&fty, &CoreType::func(p.clone(), r.clone()), a.span)?;
                    (p, r)
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::TYPE_NOT_CALLABLE,
                        a.span,
                        format!("a value of type {} cannot be applied", self.zonk(&other)),
                    ))
                }
            };
            if matches!(a.kind, ExprKind::Lambda { .. }) {
                deferred.push((i, p));
                done.push(None);
            } else {
                let c = self.infer(a)?;
                self.unify(&p, &c.ty, a.span)?;
                done.push(Some(c));
            }
            fty = r;
        }
        for (i, p) in deferred {
            done[i] = Some(self.check_lambda(args[i], &p)?);
        }
        let mut acc = h;
        let mut ty_cur = acc.ty.clone();
        for c in done.into_iter().map(Option::unwrap) {
            let CoreType::Function(_, r) = self.resolve(&ty_cur) else {
                unreachable!("spine was checked above")
            };
            let span = acc.span.to(c.span);
            acc = CoreExpr::new(CoreKind::App(Box::new(acc), Box::new(c)), (*r).clone(), span);
            ty_cur = *r;
        }
        Ok(acc)
    }

    fn for_head(&mut self, pat: &Pattern, collection: &SurfaceExpr, span: SourceSpan) -> R<(CoreExpr, usize)> {
        let coll = self.infer(collection)?;
        let elem = match self.resolve(&coll.ty) {
            CoreType::List(t) | CoreType::Array(t) => *t,
            _ => {
                let t = self.fresh();
                self.unify(&CoreType::list(t.clone()), &coll.ty, collection.span)?;
                t
            }
        };
        let mark = self.env.len();
        let names = self.bind_pattern(pat, &elem, span)?;
        self.push_mono(names);
        Ok((coll, mark))
    }

    fn unbox(&mut self, target: &CoreType, expr: &SurfaceExpr, span: SourceSpan) -> R<CoreExpr> {
        self.check_type_exists(target, span)?;
        let x = self.infer(expr)?;
        match self.resolve(&x.ty) {
            CoreType::Object => {}
            CoreType::Var(_) => self.unify(&CoreType::Object, &x.ty, expr.span)?,
            other => {
                return Err(Diagnostic::error(
                    codes::TYPE_REDUNDANT_UNBOX,
                    span,
                    format!("unbox applied to {}, which is not obj", self.zonk(&other)),
                ))
            }
        }
        Ok(CoreExpr::new(CoreKind::Unbox(Box::new(x)), target.clone(), span))
    }

    fn check_type_exists(&self, t: &CoreType, span: SourceSpan) -> R<()> {
        let mut missing = None;
        fn walk(t: &CoreType, ctx: &ProvidedContext, missing: &mut Option<TypeId>) {
            match t {
                CoreType::Named(id) if !ctx.contains_type(id) => *missing = Some(id.clone()),
                CoreType::Function(a, b) => {
                    walk(a, ctx, missing);
                    walk(b, ctx, missing)
                }
                CoreType::Tuple(ts) => ts.iter().for_each(|t| walk(t, ctx, missing)),
                CoreType::List(t) | CoreType::Array(t) | CoreType::Async(t) | CoreType::Option(t) => {
                    walk(t, ctx, missing)
                }
                _ => {}
            }
        }
        walk(t, self.ctx, &mut missing);
        match missing {
            Some(id) => Err(Diagnostic::error(
                codes::TYPE_UNKNOWN_TYPE,
                span,
                format!("unknown type {id}"),
            )),
            None => Ok(()),
        }
    }

    /// Receiver of a member access: a provider alias (static) or a value.
    fn receiver(&mut self, receiver: &SurfaceExpr) -> R<Receiver> {
        if let ExprKind::Ident(name) = &receiver.kind {
            if self.lookup_local(name).is_none() {
                if let Some(root) = self.ctx.root(name) {
                    return Ok(Receiver::Static(root.clone()));
                }
            }
        }
        let r = self.infer(receiver)?;
        Ok(Receiver::Value(r))
    }

    /// Finds a provided member on the receiver type.
    fn find_member(&mut self, recv: &Receiver, name: &str, span: SourceSpan) -> R<Found> {
        let (owner, is_static) = match recv {
            Receiver::Static(id) => (id.clone(), true),
            Receiver::Value(r) => match self.resolve(&r.ty) {
                CoreType::Named(id) => (id, false),
                CoreType::Array(elem) => return Ok(Found::Array(*elem)),
                CoreType::Var(_) => {
                    return Err(Diagnostic::error(
                        codes::TYPE_UNKNOWN_RECEIVER,
                        span,
                        format!("cannot look up `{name}`: the receiver's type is not known here"),
                    ))
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::TYPE_MEMBER_NOT_FOUND,
                        span,
                        format!("type {} has no member `{name}`", self.zonk(&other)),
                    ))
                }
            },
        };
        let m = lookup_member(self.ctx, &owner, name)
            .map_err(|f| Diagnostic::error(codes::TYPE_PROVIDER_FAILURE, span, f.to_string()))?;
        match m {
            Some(m) if m.is_static == is_static => Ok(Found::Provided(owner, m)),
            _ => Err(Diagnostic::error(
                codes::TYPE_MEMBER_NOT_FOUND,
                span,
                format!(
                    "type {owner} has no {}member `{name}`",
                    if is_static { "static " } else { "" }
                ),
            )),
        }
    }

    fn member_get(&mut self, receiver: &SurfaceExpr, name: &str, span: SourceSpan) -> R<CoreExpr> {
        let recv = self.receiver(receiver)?;
        match self.find_member(&recv, name, span)? {
            Found::Array(_) if name == "length" => Ok(CoreExpr::new(
                CoreKind::EmitPropertyGet {
                    is_static: false,
                    name: "length".into(),
                    args: vec![recv.into_value().expect("arrays are values")],
                },
                CoreType::Int,
                span,
            )),
            Found::Array(elem) => Err(array_member_error(&self.zonk(&elem), name, span)),
            Found::Provided(owner, m) => {
                if m.kind != MemberKind::Property {
                    return Err(Diagnostic::error(
                        codes::TYPE_MISMATCH,
                        span,
                        format!("`{name}` is a method; call it with arguments"),
                    ));
                }
                let sig = &m.overloads[0];
                Ok(CoreExpr::new(
                    CoreKind::MemberGet {
                        receiver: recv.into_value().map(Box::new),
                        member: MemberRef {
                            owner,
                            name: name.to_string(),
                            overload: 0,
                            plan: sig.erasure.clone(),
                        },
                    },
                    sig.result.clone(),
                    span,
                ))
            }
        }
    }

    fn member_set(&mut self, receiver: &SurfaceExpr, name: &str, value: &SurfaceExpr, span: SourceSpan) -> R<CoreExpr> {
        let recv = self.receiver(receiver)?;
        let found = self.find_member(&recv, name, span)?;
        let Found::Provided(owner, m) = found else {
            return Err(Diagnostic::error(
                codes::TYPE_NOT_SETTABLE,
                span,
                format!("array member `{name}` cannot be assigned"),
            ));
        };
        let (Some(setter), Some(recv)) = (m.setter.clone(), recv.into_value()) else {
            return Err(Diagnostic::error(
                codes::TYPE_NOT_SETTABLE,
                span,
                format!("`{name}` is not a settable property"),
            ));
        };
        let v = self.infer(value)?;
        let pty = m.overloads[0].result.clone();
        self.unify_param(&pty, &v.ty, value.span)?;
        Ok(CoreExpr::new(
            CoreKind::MemberSet {
                receiver: Box::new(recv),
                member: MemberRef {
                    owner,
                    name: name.to_string(),
                    overload: 0,
                    plan: setter,
                },
                value: Box::new(v),
            },
            CoreType::Unit,
            span,
        ))
    }

    /// `any` parameters accept every argument type.
    fn unify_param(&mut self, param: &CoreType, arg: &CoreType, span: SourceSpan) -> R<()> {
        if *param == CoreType::Object {
            Ok(())
        } else {
            self.unify(param, arg, span)
        }
    }

    fn method_call(
        &mut self,
        receiver: &SurfaceExpr,
        name: &str,
        args: &[SurfaceExpr],
        named: &[NamedArg],
        span: SourceSpan,
    ) -> R<CoreExpr> {
        let recv = self.receiver(receiver)?;
        let (owner, m) = match self.find_member(&recv, name, span)? {
            Found::Array(elem) if name == "push" && args.len() == 1 && named.is_empty() => {
                let a = self.infer_or_check(&args[0], &elem)?;
                return Ok(CoreExpr::new(
                    CoreKind::EmitCall {
                        is_static: false,
                        name: "push".into(),
                        args: vec![recv.into_value().expect("arrays are values"), a],
                    },
                    CoreType::Unit,
                    span,
                ));
            }
            Found::Array(elem) => return Err(array_member_error(&self.zonk(&elem), name, span)),
            Found::Provided(owner, m) => (owner, m),
        };
        if m.kind == MemberKind::Property {
            return Err(Diagnostic::error(
                codes::TYPE_NOT_CALLABLE,
                span,
                format!("property `{name}` cannot be called"),
            ));
        }

        // Non-lambda arguments first; lambdas are checked once the overload
        // (and so the expected parameter type) is known.
        let mut pos: Vec<Option<CoreExpr>> = Vec::new();
        for a in args {
            pos.push(match a.kind {
                ExprKind::Lambda { .. } => None,
                _ => Some(self.infer(a)?),
            });
        }
        let mut nam: Vec<Option<CoreExpr>> = Vec::new();
        for n in named {
            nam.push(match n.value.kind {
                ExprKind::Lambda { .. } => None,
                _ => Some(self.infer(&n.value)?),
            });
        }

        let arity_ok: Vec<usize> = m
            .overloads
            .iter()
            .enumerate()
            .filter(|(_, s)| accepts_shape(s, args.len(), named))
            .map(|(i, _)| i)
            .collect();
        let chosen = match arity_ok.as_slice() {
            [] => {
                return Err(Diagnostic::error(
                    codes::TYPE_NO_OVERLOAD,
                    span,
                    format!(
                        "no overload of `{name}` takes {} argument(s){}",
                        args.len() + named.len(),
                        describe_overloads(&m)
                    ),
                ))
            }
            [one] => *one,
            many => {
                let exact: Vec<usize> = many
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let s = &m.overloads[i];
                        let slots = slot_indices(s, args.len(), named);
                        pos.iter().chain(nam.iter()).zip(slots).all(|(a, slot)| match a {
                            Some(a) => self.matches_exactly(&s.params[slot].ty, &a.ty),
                            None => true,
                        })
                    })
                    .collect();
                match exact.as_slice() {
                    [one] => *one,
                    [] => {
                        return Err(Diagnostic::error(
                            codes::TYPE_NO_OVERLOAD,
                            span,
                            format!(
                                "no overload of `{name}` matches the argument types{}",
                                describe_overloads(&m)
                            ),
                        ))
                    }
                    _ => {
                        return Err(Diagnostic::error(
                            codes::TYPE_OVERLOAD_AMBIGUOUS,
                            span,
                            format!("call to `{name}` matches several overloads{}", describe_overloads(&m)),
                        ))
                    }
                }
            }
        };
        let sig = m.overloads[chosen].clone();
        let slots = slot_indices(&sig, args.len(), named);
        let mut out: Vec<Option<CoreExpr>> = vec![None; sig.params.len()];
        let sources = args.iter().chain(named.iter().map(|n| &n.value));
        for ((done, src), slot) in pos.into_iter().chain(nam).zip(sources).zip(slots) {
            let pty = sig.params[slot].ty.clone();
            let c = match done {
                Some(c) => {
                    self.unify_param(&pty, &c.ty, src.span)?;
                    c
                }
                None if pty == CoreType::Object => self.infer(src)?,
                None => self.check_lambda(src, &pty)?,
            };
            out[slot] = Some(c);
        }
        Ok(CoreExpr::new(
            CoreKind::MemberCall {
                receiver: recv.into_value().map(Box::new),
                member: MemberRef {
                    owner,
                    name: name.to_string(),
                    overload: chosen,
                    plan: sig.erasure.clone(),
                },
                args: out,
            },
            sig.result.clone(),
            span,
        ))
    }

    fn infer_or_check(&mut self, e: &SurfaceExpr, expected: &CoreType) -> R<CoreExpr> {
        if matches!(e.kind, ExprKind::Lambda { .. }) {
            self.check_lambda(e, expected)
        } else {
            let c = self.infer(e)?;
            self.unify(expected, &c.ty, e.span)?;
            Ok(c)
        }
    }

    /// Parameter type equals argument type; `any` and unresolved argument
    /// variables match anything.
    fn matches_exactly(&self, param: &CoreType, arg: &CoreType) -> bool {
        if *param == CoreType::Object {
            return true;
        }
        let arg = self.zonk(arg);
        fn eq(p: &CoreType, a: &CoreType) -> bool {
            use CoreType::*;
            match (p, a) {
                (_, Var(_)) => true,
                (Function(p1, r1), Function(p2, r2)) => eq(p1, p2) && eq(r1, r2),
                (Tuple(xs), Tuple(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| eq(x, y)),
                (List(x), List(y)) | (Array(x), Array(y)) | (Async(x), Async(y)) | (Option(x), Option(y)) => eq(x, y),
                (x, y) => x == y,
            }
        }
        eq(param, &arg)
    }

    /// Checks an async block body in computation mode with result type `r`.
    fn comp(&mut self, e: &SurfaceExpr, r: &CoreType) -> R<CoreExpr> {
        let span = e.span;
        let aty = CoreType::async_of(r.clone());
        let mk = |kind| CoreExpr::new(kind, aty.clone(), span);
        match &e.kind {
            ExprKind::LetBang { pat, value, body } => {
                let v = self.infer(value)?;
                let a = self.fresh();
                self.unify(&CoreType::async_of(a.clone()), &v.ty, value.span)?;
                let mark = self.env.len();
                let names = self.bind_pattern(pat, &a, span)?;
                self.push_mono(names);
                let b = self.comp(body, r);
                self.env.truncate(mark);
                Ok(mk(CoreKind::LetBang {
                    pat: pat.clone(),
                    value: Box::new(v),
                    body: Box::new(b?),
                }))
            }
            ExprKind::Return(x) => {
                let v = self.infer(x)?;
                self.unify(r, &v.ty, x.span)?;
                Ok(mk(CoreKind::Return(Box::new(v))))
            }
            ExprKind::Let {
                rec,
                pat,
                params,
                value,
                body,
            } => {
                let (value, bound) = self.let_value(*rec, pat, params, value, span)?;
                let mark = self.env.len();
                self.env.extend(bound);
                let b = self.comp(body, r);
                self.env.truncate(mark);
                Ok(mk(CoreKind::Let {
                    rec: *rec,
                    pat: pat.clone(),
                    value: Box::new(value),
                    body: Box::new(b?),
                }))
            }
            ExprKind::Seq(a, b) => {
                let a2 = self.comp(a, &CoreType::Unit)?;
                let b2 = self.comp(b, r)?;
                Ok(mk(CoreKind::Seq(Box::new(a2), Box::new(b2))))
            }
            ExprKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.infer(cond)?;
                self.unify(&CoreType::Bool, &c.ty, cond.span)?;
                let t = self.comp(then_branch, r)?;
                let el = match else_branch {
                    Some(eb) => Some(Box::new(self.comp(eb, r)?)),
                    None => {
                        self.unify(&CoreType::Unit, r, then_branch.span)?;
                        None
                    }
                };
                Ok(mk(CoreKind::If {
                    cond: Box::new(c),
                    then_branch: Box::new(t),
                    else_branch: el,
                }))
            }
            ExprKind::For { pat, collection, body } => {
                let (coll, mark) = self.for_head(pat, collection, span)?;
                let b = self.comp(body, &CoreType::Unit);
                self.env.truncate(mark);
                self.unify(&CoreType::Unit, r, span)?;
                Ok(mk(CoreKind::For {
                    pat: pat.clone(),
                    collection: Box::new(coll),
                    body: Box::new(b?),
                }))
            }
            ExprKind::TryWith { body, pat, handler } => {
                let b = self.comp(body, r)?;
                let mark = self.env.len();
                let names = self.bind_pattern(pat, &CoreType::String, span)?;
                self.push_mono(names);
                let h = self.comp(handler, r);
                self.env.truncate(mark);
                Ok(mk(CoreKind::TryWith {
                    body: Box::new(b),
                    pat: pat.clone(),
                    handler: Box::new(h?),
                }))
            }
            _ => {
                // A plain statement: unit-typed, and the block returns ().
                let x = self.infer(e)?;
                self.unify(&CoreType::Unit, &x.ty, span)?;
                self.unify(r, &CoreType::Unit, span)?;
                Ok(x)
            }
        }
    }
}

enum Receiver {
    Static(TypeId),
    Value(CoreExpr),
}

impl Receiver {
    fn into_value(self) -> Option<CoreExpr> {
        match self {
            Receiver::Static(_) => None,
            Receiver::Value(e) => Some(e),
        }
    }
}

enum Found {
    Provided(TypeId, std::sync::Arc<ProvidedMember>),
    Array(CoreType),
}

fn array_member_error(elem: &CoreType, name: &str, span: SourceSpan) -> Diagnostic {
    Diagnostic::error(
        codes::TYPE_MEMBER_NOT_FOUND,
        span,
        format!("{elem} array has no member `{name}` (arrays support push(x) and length)"),
    )
}

fn describe_overloads(m: &ProvidedMember) -> String {
    let list: Vec<String> = m.overloads.iter().map(Signature::describe).collect();
    format!("; candidates: {}", list.join(", "))
}

/// Parameter slot of each positional argument, then each named argument.
fn slot_indices(sig: &Signature, positional: usize, named: &[NamedArg]) -> Vec<usize> {
    let mut slots: Vec<usize> = (0..positional).collect();
    for n in named {
        slots.push(sig.params.iter().position(|p| p.name == n.name).unwrap_or(usize::MAX));
    }
    slots
}

/// Whether an overload can take `positional` arguments plus `named` ones.
fn accepts_shape(sig: &Signature, positional: usize, named: &[NamedArg]) -> bool {
    if positional > sig.params.len() {
        return false;
    }
    let mut filled = vec![false; sig.params.len()];
    filled[..positional].iter_mut().for_each(|f| *f = true);
    for n in named {
        match sig.params.iter().position(|p| p.name == n.name) {
            Some(i) if !filled[i] => filled[i] = true,
            _ => return false,
        }
    }
    sig.params.iter().zip(&filled).all(|(p, f)| *f || p.optional)
}
