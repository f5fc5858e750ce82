//! The typed core IR.
//!
//! One expression type serves three stages: the type checker produces it
//! with provided-member nodes (`MemberGet`, `MemberCall`, `MemberSet`);
//! erasure replaces those with runtime calls and Emit nodes; async
//! desugaring replaces `AsyncBlock`, `LetBang` and `Return` with
//! [`BuilderKind`] operations. Each stage's output is checked by
//! [`CoreModule::check_erased`] / [`CoreModule::check_desugared`].

use std::fmt::Write;

use crate::diag::SourceSpan;
use crate::provider::ErasurePlan;
use crate::syntax::pretty::{member_name, quote};
use crate::syntax::{BinOp, Literal, Pattern, UnOp};
use crate::types::{CoreType, TypeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuilderKind {
    Bind,
    Return,
    Delay,
    For,
    StartImmediate,
    Catch,
}

impl BuilderKind {
    pub fn name(self) -> &'static str {
        match self {
            BuilderKind::Bind => "Bind",
            BuilderKind::Return => "Return",
            BuilderKind::Delay => "Delay",
            BuilderKind::For => "For",
            BuilderKind::StartImmediate => "StartImmediate",
            BuilderKind::Catch => "Catch",
        }
    }

    /// The runtime shim symbol implementing the operation.
    pub fn shim(self) -> &'static str {
        match self {
            BuilderKind::Bind => "async_bind",
            BuilderKind::Return => "async_return",
            BuilderKind::Delay => "async_delay",
            BuilderKind::For => "async_for",
            BuilderKind::StartImmediate => "async_startImmediate",
            BuilderKind::Catch => "async_catch",
        }
    }
}

/// A resolved provided member, carrying the plan erasure will apply
/// (the chosen overload's plan, or the setter plan for assignments).
#[derive(Debug, Clone, PartialEq)]
pub struct MemberRef {
    pub owner: TypeId,
    pub name: String,
    pub overload: usize,
    pub plan: ErasurePlan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreExpr {
    pub kind: CoreKind,
    pub ty: CoreType,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoreKind {
    Lit(Literal),
    /// JavaScript `undefined`; fills omitted optional arguments.
    Undefined,
    Var(String),
    /// A prelude function, by qualified name.
    Prim(String),
    Lambda {
        param: Pattern,
        body: Box<CoreExpr>,
    },
    App(Box<CoreExpr>, Box<CoreExpr>),
    Let {
        rec: bool,
        pat: Pattern,
        value: Box<CoreExpr>,
        body: Box<CoreExpr>,
    },
    If {
        cond: Box<CoreExpr>,
        then_branch: Box<CoreExpr>,
        else_branch: Option<Box<CoreExpr>>,
    },
    Tuple(Vec<CoreExpr>),
    List(Vec<CoreExpr>),
    Array(Vec<CoreExpr>),
    Seq(Box<CoreExpr>, Box<CoreExpr>),
    For {
        pat: Pattern,
        collection: Box<CoreExpr>,
        body: Box<CoreExpr>,
    },
    TryWith {
        body: Box<CoreExpr>,
        pat: Pattern,
        handler: Box<CoreExpr>,
    },
    /// Checked cast from `obj`; the interpreter verifies the runtime tag.
    Unbox(Box<CoreExpr>),
    Binary {
        op: BinOp,
        lhs: Box<CoreExpr>,
        rhs: Box<CoreExpr>,
    },
    Unary {
        op: UnOp,
        expr: Box<CoreExpr>,
    },

    // provided members, present only before erasure
    MemberGet {
        receiver: Option<Box<CoreExpr>>,
        member: MemberRef,
    },
    MemberCall {
        receiver: Option<Box<CoreExpr>>,
        member: MemberRef,
        /// Indexed by parameter position; `None` for an omitted optional.
        args: Vec<Option<CoreExpr>>,
    },
    MemberSet {
        receiver: Box<CoreExpr>,
        member: MemberRef,
        value: Box<CoreExpr>,
    },

    // erasure targets
    RuntimeCall {
        symbol: String,
        args: Vec<CoreExpr>,
    },
    EmitCall {
        is_static: bool,
        name: String,
        args: Vec<CoreExpr>,
    },
    EmitPropertyGet {
        is_static: bool,
        name: String,
        args: Vec<CoreExpr>,
    },
    EmitPropertySet {
        is_static: bool,
        name: String,
        args: Vec<CoreExpr>,
    },
    JsTemplate {
        text: String,
        args: Vec<CoreExpr>,
    },

    BuilderOp {
        op: BuilderKind,
        args: Vec<CoreExpr>,
    },

    // async sugar, present only before desugaring
    AsyncBlock(Box<CoreExpr>),
    LetBang {
        pat: Pattern,
        value: Box<CoreExpr>,
        body: Box<CoreExpr>,
    },
    Return(Box<CoreExpr>),
}

impl CoreExpr {
    pub fn new(kind: CoreKind, ty: CoreType, span: SourceSpan) -> Self {
        CoreExpr { kind, ty, span }
    }

    pub fn unit(span: SourceSpan) -> Self {
        CoreExpr::new(CoreKind::Lit(Literal::Unit), CoreType::Unit, span)
    }

    pub fn children(&self) -> Vec<&CoreExpr> {
        let mut v = Vec::new();
        self.for_each_child(&mut |c| v.push(c));
        v
    }

    pub fn for_each_child<'a>(&'a self, f: &mut dyn FnMut(&'a CoreExpr)) {
        use CoreKind::*;
        match &self.kind {
            Lit(_) | Undefined | Var(_) | Prim(_) => {}
            Lambda { body, .. } => f(body),
            App(a, b) | Seq(a, b) => {
                f(a);
                f(b)
            }
            Let { value, body, .. } | LetBang { value, body, .. } => {
                f(value);
                f(body)
            }
            If {
                cond,
                then_branch,
                else_branch,
            } => {
                f(cond);
                f(then_branch);
                if let Some(e) = else_branch {
                    f(e)
                }
            }
            Tuple(es) | List(es) | Array(es) => es.iter().for_each(f),
            For { collection, body, .. } => {
                f(collection);
                f(body)
            }
            TryWith { body, handler, .. } => {
                f(body);
                f(handler)
            }
            Unbox(e) | Unary { expr: e, .. } | AsyncBlock(e) | Return(e) => f(e),
            Binary { lhs, rhs, .. } => {
                f(lhs);
                f(rhs)
            }
            MemberGet { receiver, .. } => {
                if let Some(r) = receiver {
                    f(r)
                }
            }
            MemberCall { receiver, args, .. } => {
                if let Some(r) = receiver {
                    f(r)
                }
                args.iter().flatten().for_each(f);
            }
            MemberSet { receiver, value, .. } => {
                f(receiver);
                f(value)
            }
            RuntimeCall { args, .. }
            | EmitCall { args, .. }
            | EmitPropertyGet { args, .. }
            | EmitPropertySet { args, .. }
            | JsTemplate { args, .. }
            | BuilderOp { args, .. } => args.iter().for_each(f),
        }
    }

    pub fn for_each_child_mut(&mut self, f: &mut dyn FnMut(&mut CoreExpr)) {
        use CoreKind::*;
        match &mut self.kind {
            Lit(_) | Undefined | Var(_) | Prim(_) => {}
            Lambda { body, .. } => f(body),
            App(a, b) | Seq(a, b) => {
                f(a);
                f(b)
            }
            Let { value, body, .. } | LetBang { value, body, .. } => {
                f(value);
                f(body)
            }
            If {
                cond,
                then_branch,
                else_branch,
            } => {
                f(cond);
                f(then_branch);
                if let Some(e) = else_branch {
                    f(e)
                }
            }
            Tuple(es) | List(es) | Array(es) => es.iter_mut().for_each(f),
            For { collection, body, .. } => {
                f(collection);
                f(body)
            }
            TryWith { body, handler, .. } => {
                f(body);
                f(handler)
            }
            Unbox(e) | Unary { expr: e, .. } | AsyncBlock(e) | Return(e) => f(e),
            Binary { lhs, rhs, .. } => {
                f(lhs);
                f(rhs)
            }
            MemberGet { receiver, .. } => {
                if let Some(r) = receiver {
                    f(r)
                }
            }
            MemberCall { receiver, args, .. } => {
                if let Some(r) = receiver {
                    f(r)
                }
                args.iter_mut().flatten().for_each(f);
            }
            MemberSet { receiver, value, .. } => {
                f(receiver);
                f(value)
            }
            RuntimeCall { args, .. }
            | EmitCall { args, .. }
            | EmitPropertyGet { args, .. }
            | EmitPropertySet { args, .. }
            | JsTemplate { args, .. }
            | BuilderOp { args, .. } => args.iter_mut().for_each(f),
        }
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a CoreExpr)) {
        f(self);
        self.for_each_child(&mut |c| c.walk(f));
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn any(&self, pred: &dyn Fn(&CoreExpr) -> bool) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= pred(e));
        found
    }

    pub fn is_member_node(&self) -> bool {
        matches!(
            self.kind,
            CoreKind::MemberGet { .. } | CoreKind::MemberCall { .. } | CoreKind::MemberSet { .. }
        )
    }

    pub fn is_async_sugar(&self) -> bool {
        matches!(
            self.kind,
            CoreKind::AsyncBlock(_) | CoreKind::LetBang { .. } | CoreKind::Return(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreBinding {
    pub rec: bool,
    pub pat: Pattern,
    pub value: CoreExpr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoreModule {
    pub bindings: Vec<CoreBinding>,
    pub entry: Option<CoreExpr>,
}

impl CoreModule {
    pub fn exprs(&self) -> impl Iterator<Item = &CoreExpr> {
        self.bindings.iter().map(|b| &b.value).chain(self.entry.iter())
    }

    pub fn exprs_mut(&mut self) -> impl Iterator<Item = &mut CoreExpr> {
        self.bindings
            .iter_mut()
            .map(|b| &mut b.value)
            .chain(self.entry.iter_mut())
    }

    pub fn any(&self, pred: &dyn Fn(&CoreExpr) -> bool) -> bool {
        self.exprs().any(|e| e.any(pred))
    }

    pub fn size(&self) -> usize {
        self.exprs().map(CoreExpr::size).sum()
    }

    /// No provided member nodes remain.
    pub fn check_erased(&self) -> bool {
        !self.any(&CoreExpr::is_member_node)
    }

    /// No async sugar remains (and erasure has happened).
    pub fn check_desugared(&self) -> bool {
        self.check_erased() && !self.any(&CoreExpr::is_async_sugar)
    }

    /// Stable textual rendering used by `--dump-core` and golden tests.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for b in &self.bindings {
            let rec = if b.rec { "rec " } else { "" };
            let _ = writeln!(out, "let {rec}{} : {} =", pattern(&b.pat), b.value.ty.canonical());
            let _ = writeln!(out, "  {}", dump_expr(&b.value));
        }
        if let Some(e) = &self.entry {
            let _ = writeln!(out, "do : {}", e.ty.canonical());
            let _ = writeln!(out, "  {}", dump_expr(e));
        }
        out
    }
}

/// Symbols printed as method chains on their first argument.
const WORLD_SYMBOLS: &[&str] = &[
    "GetCountries",
    "GetCountry",
    "GetIndicator",
    "GetIndicatorOpt",
    "AsyncGetIndicator",
];

pub fn pattern(p: &Pattern) -> String {
    match p {
        Pattern::Wildcard => "_".into(),
        Pattern::Var(n) => n.clone(),
        Pattern::Unit => "()".into(),
        Pattern::Tuple(ps) => format!("({})", ps.iter().map(pattern).collect::<Vec<_>>().join(", ")),
    }
}

fn lit(l: &Literal) -> String {
    match l {
        Literal::Int(i) => i.to_string(),
        Literal::Float(x) => format!("{x:?}"),
        Literal::String(s) => quote(s),
        Literal::Bool(b) => b.to_string(),
        Literal::Unit => "()".into(),
    }
}

fn list(es: &[CoreExpr]) -> String {
    es.iter().map(dump_expr).collect::<Vec<_>>().join("; ")
}

/// Emit argument lists print without spaces, as `[q;"type";"checkbox"]`.
fn emit_args(es: &[CoreExpr]) -> String {
    es.iter().map(dump_expr).collect::<Vec<_>>().join(";")
}

fn commas(es: &[CoreExpr]) -> String {
    es.iter().map(dump_expr).collect::<Vec<_>>().join(", ")
}

fn atom(e: &CoreExpr) -> String {
    let s = dump_expr(e);
    let simple = matches!(
        e.kind,
        CoreKind::Lit(_)
            | CoreKind::Undefined
            | CoreKind::Var(_)
            | CoreKind::Prim(_)
            | CoreKind::Tuple(_)
            | CoreKind::List(_)
            | CoreKind::Array(_)
            | CoreKind::RuntimeCall { .. }
            | CoreKind::EmitCall { .. }
            | CoreKind::EmitPropertyGet { .. }
            | CoreKind::EmitPropertySet { .. }
            | CoreKind::JsTemplate { .. }
            | CoreKind::BuilderOp { .. }
            | CoreKind::MemberGet { .. }
            | CoreKind::MemberCall { .. }
    );
    if simple {
        s
    } else {
        format!("({s})")
    }
}

pub fn dump_expr(e: &CoreExpr) -> String {
    use CoreKind::*;
    match &e.kind {
        Lit(l) => lit(l),
        Undefined => "undefined".into(),
        Var(n) | Prim(n) => n.clone(),
        Lambda { param, body } => format!("fun {} -> {}", pattern(param), dump_expr(body)),
        App(f, a) => format!("{} {}", atom(f), atom(a)),
        Let { rec, pat, value, body } => format!(
            "let {}{} = {} in {}",
            if *rec { "rec " } else { "" },
            pattern(pat),
            dump_expr(value),
            dump_expr(body)
        ),
        If {
            cond,
            then_branch,
            else_branch,
        } => {
            let mut s = format!("if {} then {}", dump_expr(cond), atom(then_branch));
            if let Some(e) = else_branch {
                let _ = write!(s, " else {}", atom(e));
            }
            s
        }
        Tuple(es) => format!("({})", commas(es)),
        List(es) => format!("[{}]", list(es)),
        Array(es) => format!("[|{}|]", list(es)),
        Seq(a, b) => format!("{}; {}", atom(a), dump_expr(b)),
        For { pat, collection, body } => format!("for {} in {} do {}", pattern(pat), dump_expr(collection), atom(body)),
        TryWith { body, pat, handler } => format!("try {} with {} -> {}", dump_expr(body), pattern(pat), atom(handler)),
        Unbox(inner) => format!("unbox<{}> {}", e.ty, atom(inner)),
        Binary { op, lhs, rhs } => format!("{} {} {}", atom(lhs), op.symbol(), atom(rhs)),
        Unary { op, expr } => {
            let s = match op {
                UnOp::Neg => "-",
                UnOp::FNeg => "-.",
            };
            format!("{s}{}", atom(expr))
        }
        MemberGet { receiver, member } => match receiver {
            Some(r) => format!("{}.{}", atom(r), member_name(&member.name)),
            None => format!("{}.{}", member.owner, member_name(&member.name)),
        },
        MemberCall { receiver, member, args } => {
            let recv = match receiver {
                Some(r) => atom(r),
                None => member.owner.to_string(),
            };
            let args: Vec<String> = args
                .iter()
                .map(|a| a.as_ref().map_or("_".to_string(), dump_expr))
                .collect();
            format!("{recv}.{}({})", member_name(&member.name), args.join(", "))
        }
        MemberSet {
            receiver,
            member,
            value,
        } => format!(
            "{}.{} <- {}",
            atom(receiver),
            member_name(&member.name),
            dump_expr(value)
        ),
        RuntimeCall { symbol, args } => {
            if WORLD_SYMBOLS.contains(&symbol.as_str()) && !args.is_empty() {
                format!("{}.{symbol}({})", atom(&args[0]), commas(&args[1..]))
            } else {
                format!("{symbol}({})", commas(args))
            }
        }
        EmitCall { is_static, name, args } => format!("CallImpl({is_static},{},[{}])", quote(name), emit_args(args)),
        EmitPropertyGet { is_static, name, args } => {
            format!("PropertyGetImpl({is_static},{},[{}])", quote(name), emit_args(args))
        }
        EmitPropertySet { is_static, name, args } => {
            format!("PropertySetImpl({is_static},{},[{}])", quote(name), emit_args(args))
        }
        JsTemplate { text, args } => format!("JSEmit({},[{}])", quote(text), emit_args(args)),
        BuilderOp { op, args } => format!("async.{}({})", op.name(), commas(args)),
        AsyncBlock(body) => format!("async {{ {} }}", dump_expr(body)),
        LetBang { pat, value, body } => format!("let! {} = {} in {}", pattern(pat), dump_expr(value), dump_expr(body)),
        Return(inner) => format!("return {}", atom(inner)),
    }
}

/// Collects every variable name bound by a pattern.
pub fn pattern_vars(p: &Pattern) -> Vec<String> {
    let mut v = Vec::new();
    p.bound_names(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(kind: CoreKind) -> CoreExpr {
        CoreExpr::new(kind, CoreType::Object, SourceSpan::DUMMY)
    }

    #[test]
    fn world_calls_dump_as_method_chains() {
        let data = e(CoreKind::Var("data".into()));
        let countries = e(CoreKind::RuntimeCall {
            symbol: "GetCountries".into(),
            args: vec![data],
        });
        let cz = e(CoreKind::RuntimeCall {
            symbol: "GetCountry".into(),
            args: vec![countries, e(CoreKind::Lit(Literal::String("CZE".into())))],
        });
        assert_eq!(dump_expr(&cz), "data.GetCountries().GetCountry(\"CZE\")");
    }

    #[test]
    fn emit_dump_shapes() {
        let jq = e(CoreKind::EmitPropertyGet {
            is_static: true,
            name: "jQuery".into(),
            args: vec![],
        });
        let call = e(CoreKind::EmitCall {
            is_static: false,
            name: "".into(),
            args: vec![jq, e(CoreKind::Var("command".into()))],
        });
        assert_eq!(
            dump_expr(&call),
            "CallImpl(false,\"\",[PropertyGetImpl(true,\"jQuery\",[]);command])"
        );
    }
}
