//! Pretty printer whose output re-parses to the same tree.
//!
//! Parenthesization is conservative: any sub-expression whose level is
//! looser than its slot requires is wrapped.

use std::fmt::Write;

use super::ast::*;
use super::lexer::is_plain_ident;

const SEQ: u8 = 0;
const STMT: u8 = 1;
const CLOSED: u8 = 2;
const UNARY: u8 = 8;
const APP: u8 = 9;
const POSTFIX: u8 = 10;
const ATOM: u8 = 11;

pub fn pretty_print(m: &SourceModule) -> String {
    let mut out = String::new();
    for p in &m.providers {
        let _ = write!(out, "type {} = {}", p.alias, p.provider);
        if !p.params.is_empty() {
            out.push('<');
            for (i, sp) in p.params.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                if let Some(n) = &sp.name {
                    let _ = write!(out, "{n}=");
                }
                match &sp.value {
                    StaticValue::Str(s) => out.push_str(&quote(s)),
                    StaticValue::Bool(b) => {
                        let _ = write!(out, "{b}");
                    }
                }
            }
            out.push('>');
        }
        out.push('\n');
    }
    if !m.providers.is_empty() {
        out.push('\n');
    }
    for b in &m.bindings {
        out.push_str("let ");
        if b.rec {
            out.push_str("rec ");
        }
        out.push_str(&pattern(&b.pat));
        for p in &b.params {
            out.push(' ');
            out.push_str(&pattern_atom(p));
        }
        out.push_str(" = ");
        out.push_str(&expr_at(&b.value, SEQ));
        out.push_str("\n\n");
    }
    if let Some(e) = &m.entry {
        out.push_str("do ");
        out.push_str(&expr_at(e, SEQ));
        out.push('\n');
    }
    out
}

pub fn print_expr(e: &SurfaceExpr) -> String {
    expr_at(e, SEQ)
}

pub fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn member_name(n: &str) -> String {
    if is_plain_ident(n) {
        n.to_string()
    } else {
        format!("`{n}`")
    }
}

fn pattern(p: &Pattern) -> String {
    pattern_atom(p)
}

fn pattern_atom(p: &Pattern) -> String {
    match p {
        Pattern::Wildcard => "_".into(),
        Pattern::Var(n) => n.clone(),
        Pattern::Unit => "()".into(),
        Pattern::Tuple(ps) => format!("({})", ps.iter().map(pattern_atom).collect::<Vec<_>>().join(", ")),
    }
}

fn level(e: &SurfaceExpr) -> u8 {
    match &e.kind {
        ExprKind::Seq(..) => SEQ,
        ExprKind::Let { .. }
        | ExprKind::LetBang { .. }
        | ExprKind::Lambda { .. }
        | ExprKind::If { .. }
        | ExprKind::For { .. }
        | ExprKind::TryWith { .. }
        | ExprKind::Return(_)
        | ExprKind::MemberSet { .. } => STMT,
        ExprKind::Binary { op, .. } => op.precedence(),
        ExprKind::Unary { .. } => UNARY,
        ExprKind::App(..) | ExprKind::Unbox { .. } => APP,
        ExprKind::Member { .. } | ExprKind::MethodCall { .. } => POSTFIX,
        _ => ATOM,
    }
}

fn expr_at(e: &SurfaceExpr, min: u8) -> String {
    let s = raw(e);
    if level(e) < min {
        format!("({s})")
    } else {
        s
    }
}

fn literal(l: &Literal) -> String {
    match l {
        Literal::Int(i) if *i < 0 => format!("({i})"),
        Literal::Int(i) => i.to_string(),
        Literal::Float(x) if x.is_sign_negative() => format!("({x:?})"),
        Literal::Float(x) => format!("{x:?}"),
        Literal::String(s) => quote(s),
        Literal::Bool(b) => b.to_string(),
        Literal::Unit => "()".into(),
    }
}

fn args_list(args: &[SurfaceExpr], named: &[NamedArg]) -> String {
    let mut parts: Vec<String> = args
        .iter()
        .map(|a| match &a.kind {
            // `name = v` would read back as a named argument.
            ExprKind::Binary { op: BinOp::Eq, lhs, .. } if matches!(lhs.kind, ExprKind::Ident(_)) => {
                format!("({})", raw(a))
            }
            _ => expr_at(a, STMT),
        })
        .collect();
    parts.extend(
        named
            .iter()
            .map(|n| format!("{} = {}", n.name, expr_at(&n.value, STMT))),
    );
    parts.join(", ")
}

fn raw(e: &SurfaceExpr) -> String {
    match &e.kind {
        ExprKind::Lit(l) => literal(l),
        ExprKind::Ident(n) => n.clone(),
        ExprKind::Lambda { params, body } => format!(
            "fun {} -> {}",
            params.iter().map(pattern_atom).collect::<Vec<_>>().join(" "),
            expr_at(body, SEQ)
        ),
        ExprKind::App(f, a) => format!("{} {}", expr_at(f, APP), expr_at(a, POSTFIX)),
        ExprKind::Let {
            rec,
            pat,
            params,
            value,
            body,
        } => {
            let mut s = String::from("let ");
            if *rec {
                s.push_str("rec ");
            }
            s.push_str(&pattern(pat));
            for p in params {
                s.push(' ');
                s.push_str(&pattern_atom(p));
            }
            let _ = write!(s, " = {} in {}", expr_at(value, SEQ), expr_at(body, SEQ));
            s
        }
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let mut s = format!("if {} then {}", expr_at(cond, STMT), expr_at(then_branch, CLOSED));
            if let Some(e) = else_branch {
                let _ = write!(s, " else {}", expr_at(e, STMT));
            }
            s
        }
        ExprKind::Tuple(items) => format!(
            "({})",
            items.iter().map(|i| expr_at(i, STMT)).collect::<Vec<_>>().join(", ")
        ),
        ExprKind::List(items) => format!(
            "[{}]",
            items.iter().map(|i| expr_at(i, CLOSED)).collect::<Vec<_>>().join("; ")
        ),
        ExprKind::Array(items) if items.is_empty() => "[| |]".into(),
        ExprKind::Array(items) => format!(
            "[|{}|]",
            items.iter().map(|i| expr_at(i, CLOSED)).collect::<Vec<_>>().join("; ")
        ),
        ExprKind::Member { receiver, name } => {
            format!("{}.{}", expr_at(receiver, POSTFIX), member_name(name))
        }
        ExprKind::MemberSet { receiver, name, value } => format!(
            "{}.{} <- {}",
            expr_at(receiver, POSTFIX),
            member_name(name),
            expr_at(value, STMT)
        ),
        ExprKind::MethodCall {
            receiver,
            name,
            args,
            named,
        } => format!(
            "{}.{}({})",
            expr_at(receiver, POSTFIX),
            member_name(name),
            args_list(args, named)
        ),
        ExprKind::Async(body) => format!("async {{ {} }}", expr_at(body, SEQ)),
        ExprKind::LetBang { pat, value, body } => format!(
            "let! {} = {} in {}",
            pattern(pat),
            expr_at(value, SEQ),
            expr_at(body, SEQ)
        ),
        ExprKind::Return(inner) => format!("return {}", expr_at(inner, STMT)),
        ExprKind::For { pat, collection, body } => format!(
            "for {} in {} do {}",
            pattern(pat),
            expr_at(collection, STMT),
            expr_at(body, SEQ)
        ),
        ExprKind::Unbox { target, expr } => {
            format!("unbox<{target}> {}", expr_at(expr, POSTFIX))
        }
        ExprKind::Seq(a, b) => format!("{}; {}", expr_at(a, CLOSED), expr_at(b, SEQ)),
        ExprKind::TryWith { body, pat, handler } => format!(
            "try {} with {} -> {}",
            expr_at(body, SEQ),
            pattern(pat),
            expr_at(handler, SEQ)
        ),
        ExprKind::Binary { op, lhs, rhs } => {
            let p = op.precedence();
            let (lp, rp) = if *op == BinOp::Cons { (p + 1, p) } else { (p, p + 1) };
            format!("{} {} {}", expr_at(lhs, lp), op.symbol(), expr_at(rhs, rp))
        }
        ExprKind::Unary { op, expr } => {
            let sym = match op {
                UnOp::Neg => "-",
                UnOp::FNeg => "-.",
            };
            let inner = expr_at(expr, UNARY);
            // `-5` would fold into a literal on re-parse.
            if inner.starts_with(|c: char| c.is_ascii_digit()) {
                format!("{sym}({inner})")
            } else {
                format!("{sym}{inner}")
            }
        }
    }
}
