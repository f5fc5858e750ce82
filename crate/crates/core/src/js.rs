//! JavaScript backend.
//!
//! Emits ES5 against the `MMLRT` global defined by `mmlrt.js`.
//! Representations: unit is `undefined`, tuples are arrays, lists are
//! `MMLRT.cons`/`MMLRT.nil` cells, options are `null` or `{value: v}`,
//! functions are curried one-argument closures. Prelude functions without
//! a shim symbol are emitted as local `$` helpers, only when used.

use std::collections::{BTreeMap, BTreeSet};

use crate::core_ir::{CoreExpr, CoreKind, CoreModule};
use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::prelude;
use crate::shim::{is_shim_symbol, splice};
use crate::syntax::lexer::is_plain_ident;
use crate::syntax::{BinOp, Literal, Pattern, UnOp};
use crate::types::CoreType;

pub const BANNER: &str = "// Generated by mml. Load mmlrt.js first; it defines the MMLRT runtime object.";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsDocument {
    pub source_text: String,
    pub referenced_shim_symbols: BTreeSet<String>,
    /// The statement that starts the program, also included at the end of
    /// `source_text` unless suppressed.
    pub entry_invocation: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct JsOptions {
    pub include_entry: bool,
}

impl Default for JsOptions {
    fn default() -> Self {
        JsOptions { include_entry: true }
    }
}

pub fn emit_module(cm: &CoreModule) -> Result<JsDocument, Vec<Diagnostic>> {
    emit_module_with(cm, JsOptions::default())
}

pub fn emit_module_with(cm: &CoreModule, opts: JsOptions) -> Result<JsDocument, Vec<Diagnostic>> {
    let mut em = Emitter::new(cm);
    let mut body = String::new();
    for b in &cm.bindings {
        let mut stmts = Vec::new();
        if b.rec {
            em.declare_pattern(&b.pat);
            let v = em.expr(&b.value);
            em.assign_pattern(&b.pat, v, &mut stmts, true);
        } else {
            let v = em.expr(&b.value);
            em.declare_pattern(&b.pat);
            em.assign_pattern(&b.pat, v, &mut stmts, true);
        }
        for s in stmts {
            body.push_str(&s);
            body.push('\n');
        }
    }
    let entry = cm.entry.as_ref().map(|e| {
        let v = em.expr(e);
        if matches!(e.ty, CoreType::Async(_)) {
            format!("{}({v});", em.shim("async_startImmediate", e.span))
        } else {
            format!("var $result = {v};")
        }
    });
    if !em.diags.is_empty() {
        return Err(em.diags);
    }

    let mut out = String::new();
    out.push_str(BANNER);
    out.push_str("\n\"use strict\";\n");
    let helpers = em.helper_text();
    if !helpers.is_empty() {
        out.push('\n');
        out.push_str(&helpers);
    }
    if !body.is_empty() {
        out.push('\n');
        out.push_str(&body);
    }
    if let (Some(e), true) = (&entry, opts.include_entry) {
        out.push('\n');
        out.push_str(e);
        out.push('\n');
    }
    Ok(JsDocument {
        source_text: out,
        referenced_shim_symbols: em.shims,
        entry_invocation: entry,
    })
}

/// ES5 reserved words and globals a binder must not capture.
const RESERVED: &[&str] = &[
    "break",
    "case",
    "catch",
    "class",
    "const",
    "continue",
    "debugger",
    "default",
    "delete",
    "do",
    "else",
    "enum",
    "export",
    "extends",
    "false",
    "finally",
    "for",
    "function",
    "if",
    "implements",
    "import",
    "in",
    "instanceof",
    "interface",
    "let",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "static",
    "super",
    "switch",
    "this",
    "throw",
    "true",
    "try",
    "typeof",
    "var",
    "void",
    "while",
    "with",
    "yield",
    "undefined",
    "NaN",
    "Infinity",
    "eval",
    "arguments",
    "MMLRT",
    "Math",
    "String",
    "Error",
    "Array",
    "Object",
];

struct Helper {
    deps: &'static [&'static str],
    code: &'static str,
}

/// Helper name and body per non-shim prelude function.
fn helper(name: &str) -> Option<Helper> {
    let h = |deps, code| Some(Helper { deps, code });
    match name {
        "$toArray" => h(
            &[],
            "function $toArray(xs) {\n  if (xs instanceof Array) return xs;\n  var r = [];\n  while (xs !== MMLRT.nil) { r.push(xs.h); xs = xs.t; }\n  return r;\n}",
        ),
        "$ofArray" => h(
            &[],
            "function $ofArray(a) {\n  var r = MMLRT.nil;\n  for (var i = a.length - 1; i >= 0; i--) r = MMLRT.cons(a[i], r);\n  return r;\n}",
        ),
        "$curry" => h(
            &[],
            "function $curry(f, n, args) {\n  return function (x) {\n    var a = args.concat([x]);\n    return a.length === n ? f.apply(null, a) : $curry(f, n, a);\n  };\n}",
        ),
        "$equals" => h(
            &[],
            "function $equals(a, b) {\n  if (a === b) return true;\n  if (a === null || b === null || typeof a !== \"object\" || typeof b !== \"object\") return false;\n  var ks = Object.keys(a);\n  if (ks.length !== Object.keys(b).length) return false;\n  for (var i = 0; i < ks.length; i++) if (!$equals(a[ks[i]], b[ks[i]])) return false;\n  return true;\n}",
        ),
        "$compare" => h(
            &["$toArray"],
            "function $compare(a, b) {\n  if (typeof a !== \"object\" || a === null) return a < b ? -1 : a > b ? 1 : 0;\n  var xs = $toArray(a), ys = $toArray(b);\n  for (var i = 0; i < xs.length && i < ys.length; i++) {\n    var c = $compare(xs[i], ys[i]);\n    if (c !== 0) return c;\n  }\n  return xs.length - ys.length;\n}",
        ),
        "$message" => h(
            &[],
            "function $message(e) {\n  return e && e.message !== undefined ? e.message : String(e);\n}",
        ),
        "$List_ofArray" => h(&["$ofArray"], "function $List_ofArray(a) { return $ofArray(a); }"),
        "$List_length" | "$Array_length" => Some(Helper {
            deps: &["$toArray"],
            code: if name == "$List_length" {
                "function $List_length(xs) { return $toArray(xs).length; }"
            } else {
                "function $Array_length(xs) { return xs.length; }"
            },
        }),
        "$List_fold" => h(
            &["$toArray"],
            "function $List_fold(f, acc, xs) {\n  var a = $toArray(xs);\n  for (var i = 0; i < a.length; i++) acc = f(acc)(a[i]);\n  return acc;\n}",
        ),
        "$List_filter" => h(
            &["$toArray", "$ofArray"],
            "function $List_filter(f, xs) {\n  return $ofArray($toArray(xs).filter(function (x) { return f(x); }));\n}",
        ),
        "$List_rev" => h(
            &["$toArray", "$ofArray"],
            "function $List_rev(xs) { return $ofArray($toArray(xs).slice().reverse()); }",
        ),
        "$List_append" => h(
            &["$toArray", "$ofArray"],
            "function $List_append(xs, ys) { return $ofArray($toArray(xs).concat($toArray(ys))); }",
        ),
        "$List_sum" => h(
            &["$toArray"],
            "function $List_sum(xs) {\n  var a = $toArray(xs), s = 0;\n  for (var i = 0; i < a.length; i++) s += a[i];\n  return s;\n}",
        ),
        "$Array_map" => h(&[], "function $Array_map(f, a) { return a.map(function (x) { return f(x); }); }"),
        "$Option_isSome" => h(&[], "function $Option_isSome(o) { return o !== null; }"),
        "$Option_defaultValue" => h(&[], "function $Option_defaultValue(d, o) { return o === null ? d : o.value; }"),
        "$fst" => h(&[], "function $fst(p) { return p[0]; }"),
        "$snd" => h(&[], "function $snd(p) { return p[1]; }"),
        "$float" => h(&[], "function $float(x) { return x; }"),
        "$int" => h(&[], "function $int(x) { return x < 0 ? Math.ceil(x) : Math.floor(x); }"),
        "$string_of_int" => h(&[], "function $string_of_int(x) { return String(x); }"),
        "$string_of_float" => h(&[], "function $string_of_float(x) { return String(x); }"),
        "$ignore" => h(&[], "function $ignore(x) { return undefined; }"),
        "$failwith" => h(&[], "function $failwith(m) { throw new Error(m); }"),
        "$not" => h(&[], "function $not(b) { return !b; }"),
        "$Some" => h(&[], "function $Some(x) { return {value: x}; }"),
        _ => None,
    }
}

fn helper_name(prim: &str) -> String {
    format!("${}", prim.replace('.', "_"))
}

fn mangle(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
                c
            } else {
                '$'
            }
        })
        .collect();
    if RESERVED.contains(&s.as_str()) {
        s.push('$');
    }
    s
}

fn property(name: &str) -> String {
    if is_plain_ident(name) {
        format!(".{name}")
    } else {
        format!("[{}]", string_lit(name))
    }
}

fn string_lit(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn float_lit(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "Infinity".into()
        } else {
            "(-Infinity)".into()
        }
    } else if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        format!("({x:?})")
    } else {
        format!("{x:?}")
    }
}

/// Whether emitted text can be used directly as a callee or operand: at
/// bracket depth zero it holds only name characters and dots, so it is a
/// name, a literal, a call or member chain, or one bracketed group.
fn is_atomic(s: &str) -> bool {
    if s.starts_with('{') || s.starts_with("function") || s.is_empty() {
        return false;
    }
    let mut depth = 0i32;
    let mut in_str = false;
    let mut esc = false;
    for c in s.chars() {
        if in_str {
            match (esc, c) {
                (true, _) => esc = false,
                (false, '\\') => esc = true,
                (false, '"') => in_str = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if depth == 0 && !(c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '.') => return false,
            _ => {}
        }
    }
    depth == 0
}

fn paren(s: String) -> String {
    if is_atomic(&s) {
        s
    } else {
        format!("({s})")
    }
}

struct Emitter {
    /// Source name to JS name, innermost last.
    scope: Vec<(String, String)>,
    /// Names declared in each enclosing JS function, innermost last.
    frames: Vec<BTreeSet<String>>,
    /// Global names the module references through Emit nodes.
    host_globals: BTreeSet<String>,
    counter: BTreeMap<String, usize>,
    helpers: BTreeSet<String>,
    shims: BTreeSet<String>,
    diags: Vec<Diagnostic>,
}

impl Emitter {
    fn new(cm: &CoreModule) -> Self {
        let mut host_globals = BTreeSet::new();
        for e in cm.exprs() {
            e.walk(&mut |x| match &x.kind {
                CoreKind::EmitPropertyGet {
                    is_static: true, name, ..
                }
                | CoreKind::EmitPropertySet {
                    is_static: true, name, ..
                }
                | CoreKind::EmitCall {
                    is_static: true, name, ..
                } => {
                    host_globals.insert(name.clone());
                }
                _ => {}
            });
        }
        Emitter {
            scope: Vec::new(),
            frames: vec![BTreeSet::new()],
            host_globals,
            counter: BTreeMap::new(),
            helpers: BTreeSet::new(),
            shims: BTreeSet::new(),
            diags: Vec::new(),
        }
    }

    fn shim(&mut self, symbol: &str, span: SourceSpan) -> String {
        if !is_shim_symbol(symbol) {
            self.diags.push(Diagnostic::error(
                codes::EMIT_UNRESOLVED_SHIM,
                span,
                format!("`{symbol}` is not a runtime shim symbol"),
            ));
        }
        self.shims.insert(symbol.to_string());
        format!("MMLRT.{symbol}")
    }

    fn use_helper(&mut self, name: &str) -> String {
        if let Some(h) = helper(name) {
            for d in h.deps {
                self.use_helper(d);
            }
            self.helpers.insert(name.to_string());
        }
        name.to_string()
    }

    fn helper_text(&mut self) -> String {
        let mut out = String::new();
        for name in self.helpers.clone() {
            let h = helper(&name).expect("registered helper");
            if h.code.contains("MMLRT.nil") {
                self.shims.insert("nil".into());
            }
            if h.code.contains("MMLRT.cons") {
                self.shims.insert("cons".into());
            }
            out.push_str(h.code);
            out.push('\n');
        }
        out
    }

    fn in_scope(&self, js: &str) -> bool {
        self.scope.iter().any(|(_, j)| j == js)
            || self.frames.last().is_some_and(|f| f.contains(js))
            || self.host_globals.contains(js)
    }

    fn declare(&mut self, src: &str) -> String {
        let base = mangle(src);
        let mut js = base.clone();
        while self.in_scope(&js) {
            let n = self.counter.entry(base.clone()).or_insert(0);
            *n += 1;
            js = format!("{base}${n}");
        }
        self.frames.last_mut().expect("frame").insert(js.clone());
        self.scope.push((src.to_string(), js.clone()));
        js
    }

    fn lookup(&self, src: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(s, _)| s == src)
            .map(|(_, j)| j.clone())
            .unwrap_or_else(|| mangle(src))
    }

    fn declare_pattern(&mut self, p: &Pattern) {
        match p {
            Pattern::Var(n) => {
                self.declare(n);
            }
            Pattern::Tuple(ps) => ps.iter().for_each(|p| self.declare_pattern(p)),
            Pattern::Wildcard | Pattern::Unit => {}
        }
    }

    /// Emits `var` statements binding an already-declared pattern.
    fn assign_pattern(&mut self, p: &Pattern, value: String, out: &mut Vec<String>, keep_effects: bool) {
        match p {
            Pattern::Var(n) => out.push(format!("var {} = {value};", self.lookup(n))),
            Pattern::Wildcard | Pattern::Unit => {
                if keep_effects {
                    out.push(statement(value));
                }
            }
            Pattern::Tuple(ps) => {
                let tmp = self.declare("$t");
                out.push(format!("var {tmp} = {value};"));
                for (i, p) in ps.iter().enumerate() {
                    self.assign_pattern(p, format!("{tmp}[{i}]"), out, false);
                }
            }
        }
    }

    /// A function expression; the pattern is bound inside its own frame.
    fn function(&mut self, param: &Pattern, body: &CoreExpr) -> String {
        let mark = self.scope.len();
        self.frames.push(BTreeSet::new());
        let mut stmts = Vec::new();
        let arg = match param {
            Pattern::Var(n) => self.declare(n),
            Pattern::Unit | Pattern::Wildcard => self.declare("$u"),
            Pattern::Tuple(ps) => {
                let a = self.declare("$a");
                for (i, p) in ps.iter().enumerate() {
                    self.declare_pattern(p);
                    self.assign_pattern(p, format!("{a}[{i}]"), &mut stmts, false);
                }
                a
            }
        };
        let ret = self.stmts(body, &mut stmts);
        stmts.push(format!("return {ret};"));
        self.frames.pop();
        self.scope.truncate(mark);
        format!("function ({arg}) {{ {} }}", stmts.join(" "))
    }

    /// Statements in a fresh function frame, as an immediately applied
    /// function.
    fn iife(&mut self, e: &CoreExpr) -> String {
        let mark = self.scope.len();
        self.frames.push(BTreeSet::new());
        let mut stmts = Vec::new();
        let ret = self.stmts(e, &mut stmts);
        stmts.push(format!("return {ret};"));
        self.frames.pop();
        self.scope.truncate(mark);
        format!("(function () {{ {} }})()", stmts.join(" "))
    }

    /// Flattens lets and sequences into statements; returns the final
    /// expression.
    fn stmts(&mut self, e: &CoreExpr, out: &mut Vec<String>) -> String {
        match &e.kind {
            CoreKind::Let { rec, pat, value, body } => {
                if *rec {
                    self.declare_pattern(pat);
                    let v = self.expr(value);
                    self.assign_pattern(pat, v, out, true);
                } else {
                    let v = self.expr(value);
                    self.declare_pattern(pat);
                    self.assign_pattern(pat, v, out, true);
                }
                self.stmts(body, out)
            }
            CoreKind::Seq(a, b) => {
                let s = self.stmt_text(a);
                out.push(s);
                self.stmts(b, out)
            }
            CoreKind::For { pat, collection, body } => {
                let s = self.for_loop(pat, collection, body);
                out.push(format!("{s};"));
                "undefined".into()
            }
            CoreKind::TryWith { body, pat, handler } => {
                let b = self.iife(body);
                let mark = self.scope.len();
                let ex = self.declare("$e");
                let mut hs = Vec::new();
                let msg = self.use_helper("$message");
                self.declare_pattern(pat);
                self.assign_pattern(pat, format!("{msg}({ex})"), &mut hs, false);
                let h = self.stmts(handler, &mut hs);
                hs.push(format!("return {h};"));
                self.scope.truncate(mark);
                out.push(format!("try {{ return {b}; }} catch ({ex}) {{ {} }}", hs.join(" ")));
                "undefined".into()
            }
            _ => self.expr(e),
        }
    }

    fn stmt_text(&mut self, e: &CoreExpr) -> String {
        let mut out = Vec::new();
        let last = self.stmts(e, &mut out);
        if last != "undefined" {
            out.push(statement(last));
        }
        // Nested lets inside a statement stay in the current frame, which
        // is sound because every binder is declared with a fresh name.
        out.join(" ")
    }

    fn for_loop(&mut self, pat: &Pattern, collection: &CoreExpr, body: &CoreExpr) -> String {
        let c = self.expr(collection);
        let to_array = self.use_helper("$toArray");
        let f = self.function(pat, body);
        format!("{to_array}({c}).forEach({f})")
    }

    fn expr(&mut self, e: &CoreExpr) -> String {
        match &e.kind {
            CoreKind::Lit(l) => match l {
                Literal::Int(i) if *i < 0 => format!("({i})"),
                Literal::Int(i) => i.to_string(),
                Literal::Float(x) => float_lit(*x),
                Literal::String(s) => string_lit(s),
                Literal::Bool(b) => b.to_string(),
                Literal::Unit => "undefined".into(),
            },
            CoreKind::Undefined => "undefined".into(),
            CoreKind::Var(n) => self.lookup(n),
            CoreKind::Prim(_) | CoreKind::App(..) => self.application(e),
            CoreKind::Lambda { param, body } => self.function(param, body),
            CoreKind::Let { .. } | CoreKind::TryWith { .. } => self.iife(e),
            CoreKind::Seq(..) => {
                let mut out = Vec::new();
                let last = self.stmts(e, &mut out);
                if out.is_empty() {
                    last
                } else {
                    out.push(format!("return {last};"));
                    format!("(function () {{ {} }})()", out.join(" "))
                }
            }
            CoreKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.expr(cond);
                let t = self.expr(then_branch);
                let f = match else_branch {
                    Some(x) => self.expr(x),
                    None => "undefined".into(),
                };
                format!("({} ? {t} : {f})", paren(c))
            }
            CoreKind::Tuple(es) | CoreKind::Array(es) => {
                let items: Vec<_> = es.iter().map(|x| self.expr(x)).collect();
                format!("[{}]", items.join(", "))
            }
            CoreKind::List(es) => {
                let mut acc = self.shim("nil", e.span);
                for x in es.iter().rev() {
                    let v = self.expr(x);
                    acc = format!("{}({v}, {acc})", self.shim("cons", e.span));
                }
                acc
            }
            CoreKind::For { pat, collection, body } => format!("({}, undefined)", self.for_loop(pat, collection, body)),
            // The JS backend trusts the declared type.
            CoreKind::Unbox(x) => self.expr(x),
            CoreKind::Binary { op, lhs, rhs } => self.binary(*op, lhs, rhs, e.span),
            CoreKind::Unary { op, expr } => {
                let v = self.expr(expr);
                match op {
                    UnOp::Neg | UnOp::FNeg => format!("(-{})", paren(v)),
                }
            }
            CoreKind::RuntimeCall { symbol, args } => {
                let f = self.shim(symbol, e.span);
                let a = self.args(args);
                format!("{f}({a})")
            }
            CoreKind::EmitCall { is_static, name, args } => {
                if *is_static {
                    let a = self.args(args);
                    return format!("{name}({a})");
                }
                let Some((recv, rest)) = args.split_first() else {
                    return self.residual(e, "method call without receiver");
                };
                let r = paren(self.expr(recv));
                let a = self.args(rest);
                if name.is_empty() {
                    format!("{r}({a})")
                } else {
                    format!("{r}{}({a})", property(name))
                }
            }
            CoreKind::EmitPropertyGet { is_static, name, args } => {
                if *is_static {
                    return name.clone();
                }
                match args.first() {
                    Some(r) => format!("{}{}", paren(self.expr(r)), property(name)),
                    None => self.residual(e, "property read without receiver"),
                }
            }
            CoreKind::EmitPropertySet { is_static, name, args } => match (is_static, args.as_slice()) {
                (true, [v]) => format!("({name} = {})", self.expr(v)),
                (false, [r, v]) => {
                    let r = paren(self.expr(r));
                    let v = self.expr(v);
                    format!("({r}{} = {v})", property(name))
                }
                _ => self.residual(e, "property assignment arity"),
            },
            CoreKind::JsTemplate { text, args } => {
                let a: Vec<String> = args.iter().map(|x| paren(self.expr(x))).collect();
                format!("({})", splice(text, &a))
            }
            CoreKind::BuilderOp { op, args } => {
                let f = self.shim(op.shim(), e.span);
                let a = self.args(args);
                format!("{f}({a})")
            }
            CoreKind::MemberGet { .. } | CoreKind::MemberCall { .. } | CoreKind::MemberSet { .. } => {
                self.residual(e, "provided member survived erasure")
            }
            CoreKind::AsyncBlock(_) | CoreKind::LetBang { .. } | CoreKind::Return(_) => {
                self.residual(e, "async sugar survived desugaring")
            }
        }
    }

    fn residual(&mut self, e: &CoreExpr, msg: &str) -> String {
        self.diags.push(Diagnostic::error(codes::EMIT_RESIDUAL, e.span, msg));
        "undefined".into()
    }

    fn args(&mut self, args: &[CoreExpr]) -> String {
        args.iter().map(|a| self.expr(a)).collect::<Vec<_>>().join(", ")
    }

    fn application(&mut self, e: &CoreExpr) -> String {
        let mut args = Vec::new();
        let mut head = e;
        while let CoreKind::App(f, a) = &head.kind {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        if let CoreKind::Prim(name) = &head.kind {
            return self.prim_application(name, &args, head.span);
        }
        let mut out = paren(self.expr(head));
        if out.starts_with("function") {
            out = format!("({out})");
        }
        for a in args {
            out = format!("{out}({})", self.expr(a));
        }
        out
    }

    fn prim_application(&mut self, name: &str, args: &[&CoreExpr], span: SourceSpan) -> String {
        let Some(p) = prelude::lookup(name) else {
            return self.residual_at(span, &format!("unknown prelude function `{name}`"));
        };
        if p.arity == 0 {
            // Only `None`.
            return "null".into();
        }
        let callee = match p.shim {
            Some(s) => self.shim(s, span),
            None => {
                let h = helper_name(name);
                if helper(&h).is_none() {
                    let code = if crate::async_cps::UNSUPPORTED_STARTS.contains(&name) {
                        codes::ASYNC_UNSUPPORTED_START
                    } else {
                        codes::EMIT_RESIDUAL
                    };
                    self.diags.push(Diagnostic::error(
                        code,
                        span,
                        format!("`{name}` has no JavaScript translation"),
                    ));
                    return "undefined".into();
                }
                self.use_helper(&h)
            }
        };
        let emitted: Vec<String> = args.iter().map(|a| self.expr(a)).collect();
        if emitted.len() < p.arity {
            let curry = self.use_helper("$curry");
            return format!("{curry}({callee}, {}, [{}])", p.arity, emitted.join(", "));
        }
        let (now, later) = emitted.split_at(p.arity);
        let mut out = format!("{callee}({})", now.join(", "));
        for a in later {
            out = format!("{out}({a})");
        }
        out
    }

    fn residual_at(&mut self, span: SourceSpan, msg: &str) -> String {
        self.diags.push(Diagnostic::error(codes::EMIT_RESIDUAL, span, msg));
        "undefined".into()
    }

    fn binary(&mut self, op: BinOp, lhs: &CoreExpr, rhs: &CoreExpr, span: SourceSpan) -> String {
        let l = paren(self.expr(lhs));
        let r = paren(self.expr(rhs));
        let primitive = matches!(
            lhs.ty,
            CoreType::Int | CoreType::Float | CoreType::Bool | CoreType::String | CoreType::Unit
        );
        match op {
            BinOp::Div => format!("(({l}/{r})|0)"),
            BinOp::Mod => format!("(({l}%{r})|0)"),
            BinOp::Add | BinOp::FAdd | BinOp::Concat => format!("({l} + {r})"),
            BinOp::Sub | BinOp::FSub => format!("({l} - {r})"),
            BinOp::Mul | BinOp::FMul => format!("({l} * {r})"),
            BinOp::FDiv => format!("({l} / {r})"),
            BinOp::And => format!("({l} && {r})"),
            BinOp::Or => format!("({l} || {r})"),
            BinOp::Cons => format!("{}({l}, {r})", self.shim("cons", span)),
            BinOp::Eq | BinOp::Ne if primitive => {
                format!("({l} {} {r})", if op == BinOp::Eq { "===" } else { "!==" })
            }
            BinOp::Eq | BinOp::Ne => {
                let eq = self.use_helper("$equals");
                let neg = if op == BinOp::Ne { "!" } else { "" };
                format!("{neg}{eq}({l}, {r})")
            }
            BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge => {
                let sym = op.symbol();
                if primitive {
                    format!("({l} {sym} {r})")
                } else {
                    let cmp = self.use_helper("$compare");
                    format!("({cmp}({l}, {r}) {sym} 0)")
                }
            }
        }
    }
}

fn statement(expr: String) -> String {
    if expr.starts_with("function") || expr.starts_with('{') {
        format!("({expr});")
    } else {
        format!("{expr};")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::async_cps::desugar_async;
    use crate::erase::erase_module;
    use crate::provider::ProvidedContext;
    use crate::syntax::parse_module;
    use crate::typecheck::typecheck_module;

    fn js(src: &str) -> JsDocument {
        let m = parse_module(src).unwrap();
        let tm = typecheck_module(&m, &ProvidedContext::new()).unwrap();
        let cm = desugar_async(&erase_module(&tm).unwrap()).unwrap();
        emit_module(&cm).unwrap()
    }

    #[test]
    fn integer_division_truncates() {
        let d = js("let x = 1 / 2");
        assert!(d.source_text.contains("var x = ((1/2)|0);"), "{}", d.source_text);
        let d = js("let x = 1.0 /. 2.0");
        assert!(d.source_text.contains("var x = (1.0 / 2.0);"), "{}", d.source_text);
    }

    #[test]
    fn number_template_splices() {
        let d = js("let f x = number x");
        assert!(d.source_text.contains("return (x*1.0);"), "{}", d.source_text);
    }

    #[test]
    fn lists_and_shims() {
        let d = js("let xs = [1; 2] |> List.map (fun x -> x + 1)");
        assert!(
            d.source_text
                .contains("MMLRT.list_map(function (x) { return (x + 1); }, MMLRT.cons(1, MMLRT.cons(2, MMLRT.nil)))"),
            "{}",
            d.source_text
        );
        let syms: Vec<_> = d.referenced_shim_symbols.iter().map(String::as_str).collect();
        assert_eq!(syms, ["cons", "list_map", "nil"]);
    }

    #[test]
    fn shadowing_renames() {
        let d = js("let f y = let a = y in let y = 2 in a + y");
        assert!(
            d.source_text.contains("var a = y; var y$1 = 2; return (a + y$1);"),
            "{}",
            d.source_text
        );
    }

    #[test]
    fn async_entry_is_started() {
        let d = js("do async { return 1 }");
        assert_eq!(
            d.entry_invocation.as_deref(),
            Some("MMLRT.async_startImmediate(MMLRT.async_delay(function ($u) { return MMLRT.async_return(1); }));")
        );
        let no_entry = emit_module_with(
            &desugar_async(
                &erase_module(&typecheck_module(&parse_module("do 1").unwrap(), &ProvidedContext::new()).unwrap())
                    .unwrap(),
            )
            .unwrap(),
            JsOptions { include_entry: false },
        )
        .unwrap();
        assert!(!no_entry.source_text.contains("$result"));
    }

    #[test]
    fn partial_prelude_application() {
        let d = js("let g = List.fold (fun a x -> a + x) 0");
        assert!(d.source_text.contains("$curry($List_fold, 3, ["), "{}", d.source_text);
        assert!(d.source_text.contains("function $toArray"));
    }
}
