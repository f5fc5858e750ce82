//! TypeScript declaration import.
//!
//! Supported subset:
//!
//! ```text
//! file      := item*
//! item      := 'declare' ('var'|'let'|'const') name ':' type ';'
//!            | 'interface' Name ('extends' ...)? '{' member* '}'
//! member    := '(' params ')' ':' type ';'          call signature
//!            | name '?'? '(' params ')' ':' type ';' method (overloadable)
//!            | name '?'? ':' type ';'               property
//! params    := (name '?'? (':' type)?) separated by ','
//! type      := 'string' | 'number' | 'boolean' | 'any' | 'void'
//!            | Name | type '[]' | "string literal"
//! ```
//!
//! Anything else (classes, modules, generics, unions, function types,
//! index signatures, rest parameters) is reported as `dts.unsupported` and
//! skipped. `extends` clauses are skipped with the same diagnostic.

use std::collections::BTreeMap;

use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::syntax::{StaticParam, StaticValue};
use crate::types::{CoreType, TypeId};

use super::{
    ArgTemplate, ErasurePlan, MemberKind, Param, ProvidedContext, ProvidedMember, ProviderEnv, ProviderFailure,
    Signature, TypeProvider,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TsTypeRef {
    String,
    Number,
    Boolean,
    Any,
    Void,
    Named(String),
    Array(Box<TsTypeRef>),
    /// A string-literal type, as used by constant overloads.
    StringLiteral(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsParam {
    pub name: String,
    pub ty: TsTypeRef,
    pub optional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsSignature {
    pub params: Vec<TsParam>,
    pub result: TsTypeRef,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsProperty {
    pub name: String,
    pub ty: TsTypeRef,
    pub optional: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TsDeclaration {
    GlobalVar {
        name: String,
        ty: TsTypeRef,
        span: SourceSpan,
    },
    Interface {
        name: String,
        call_signatures: Vec<TsSignature>,
        methods: Vec<(String, Vec<TsSignature>)>,
        properties: Vec<TsProperty>,
        span: SourceSpan,
    },
}

/// Declarations plus the non-fatal diagnostics produced while skipping
/// unsupported constructs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtsParse {
    pub decls: Vec<TsDeclaration>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
enum T {
    Ident(String),
    Str(String),
    Num,
    Punct(char),
    Eof,
}

fn lex(src: &str) -> Result<Vec<(T, SourceSpan)>, Diagnostic> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if b[i..].starts_with(b"//") {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
        } else if b[i..].starts_with(b"/*") {
            let end = src[i + 2..].find("*/").ok_or_else(|| {
                Diagnostic::error(codes::DTS_SYNTAX, SourceSpan::new(i, b.len()), "unterminated comment")
            })?;
            i += end + 4;
        } else if c.is_ascii_alphabetic() || c == b'_' || c == b'$' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'$') {
                i += 1;
            }
            out.push((T::Ident(src[s..i].to_string()), SourceSpan::new(s, i)));
        } else if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            out.push((T::Num, SourceSpan::new(s, i)));
        } else if c == b'"' || c == b'\'' {
            let s = i;
            i += 1;
            while i < b.len() && b[i] != c && b[i] != b'\n' {
                i += if b[i] == b'\\' { 2 } else { 1 };
            }
            if i >= b.len() || b[i] != c {
                return Err(Diagnostic::error(
                    codes::DTS_SYNTAX,
                    SourceSpan::new(s, i.min(b.len())),
                    "unterminated string",
                ));
            }
            i += 1;
            out.push((T::Str(src[s + 1..i - 1].to_string()), SourceSpan::new(s, i)));
        } else if b"{}()[]<>:;,?|&=.*+-!~@#%^/=>".contains(&c) {
            out.push((T::Punct(c as char), SourceSpan::new(i, i + 1)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(Diagnostic::error(
                codes::DTS_SYNTAX,
                SourceSpan::new(i, i + ch.len_utf8()),
                format!("unexpected character {ch:?}"),
            ));
        }
    }
    out.push((T::Eof, SourceSpan::new(b.len(), b.len())));
    Ok(out)
}

/// Marker for a construct that was diagnosed and must be skipped.
struct Skip;

struct P {
    toks: Vec<(T, SourceSpan)>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

impl P {
    fn peek(&self) -> &T {
        &self.toks[self.pos].0
    }

    fn peek_n(&self, n: usize) -> &T {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> T {
        let t = self.toks[self.pos].0.clone();
        if t != T::Eof {
            self.pos += 1;
        }
        t
    }

    fn is(&self, c: char) -> bool {
        self.peek() == &T::Punct(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), T::Ident(s) if s == w)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unsupported(&mut self, span: SourceSpan, what: &str) -> Skip {
        self.diags.push(Diagnostic::warning(
            codes::DTS_UNSUPPORTED,
            span,
            format!("unsupported declaration construct: {what}"),
        ));
        Skip
    }

    fn syntax(&mut self, what: &str) -> Skip {
        let found = format!("{:?}", self.peek());
        self.diags.push(Diagnostic::warning(
            codes::DTS_SYNTAX,
            self.span(),
            format!("expected {what}, found {found}"),
        ));
        Skip
    }

    fn expect(&mut self, c: char) -> Result<(), Skip> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{c}`")))
        }
    }

    fn name(&mut self) -> Result<String, Skip> {
        match self.peek().clone() {
            T::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.syntax("a name")),
        }
    }

    /// Skips to just after the `;` ending the current item, or to (not past)
    /// the `}` closing the enclosing block, honouring nesting.
    fn recover(&mut self) {
        let mut depth = 0i32;
        loop {
            match self.peek() {
                T::Eof => return,
                T::Punct('{') | T::Punct('(') | T::Punct('[') => depth += 1,
                T::Punct('}') | T::Punct(')') | T::Punct(']') => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    if depth == 0 && self.is('}') {
                        self.bump();
                        if self.is(';') {
                            self.bump();
                        }
                        return;
                    }
                }
                T::Punct(';') if depth == 0 => {
                    self.bump();
                    return;
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn file(&mut self) -> Vec<TsDeclaration> {
        let mut out: Vec<TsDeclaration> = Vec::new();
        loop {
            if self.peek() == &T::Eof {
                return out;
            }
            if self.is_word("export") {
                self.bump();
            }
            let start = self.span();
            let res = if self.is_word("declare")
                && matches!(self.peek_n(1), T::Ident(k) if k == "var" || k == "let" || k == "const")
            {
                self.global_var()
            } else if self.is_word("interface") {
                self.interface()
            } else {
                let what = match self.peek() {
                    T::Ident(w) if w == "declare" => match self.peek_n(1) {
                        T::Ident(k) => format!("declare {k}"),
                        _ => "declare".into(),
                    },
                    T::Ident(w) => w.clone(),
                    other => format!("{other:?}"),
                };
                Err(self.unsupported(start, &what))
            };
            match res {
                Ok(decl) => merge_decl(&mut out, decl),
                Err(Skip) => {
                    let before = self.pos;
                    self.recover();
                    if self.pos == before {
                        self.bump();
                    }
                }
            }
        }
    }

    fn global_var(&mut self) -> Result<TsDeclaration, Skip> {
        let start = self.span();
        self.bump();
        self.bump();
        let name = self.name()?;
        self.expect(':')?;
        let ty = self.ty()?;
        self.expect(';')?;
        Ok(TsDeclaration::GlobalVar {
            name,
            ty,
            span: start.to(self.toks[self.pos - 1].1),
        })
    }

    fn interface(&mut self) -> Result<TsDeclaration, Skip> {
        let start = self.span();
        self.bump();
        let name = self.name()?;
        if self.is('<') {
            let sp = self.span();
            return Err(self.unsupported(sp, &format!("generic interface {name}")));
        }
        if self.is_word("extends") {
            let sp = self.span();
            self.unsupported(sp, &format!("extends clause on {name} (inherited members ignored)"));
            while !self.is('{') && self.peek() != &T::Eof {
                self.bump();
            }
        }
        self.expect('{')?;
        let mut call_signatures = Vec::new();
        let mut methods: Vec<(String, Vec<TsSignature>)> = Vec::new();
        let mut properties = Vec::new();
        while !self.is('}') && self.peek() != &T::Eof {
            match self.member() {
                Ok(Member::Call(s)) => call_signatures.push(s),
                Ok(Member::Method(n, s)) => match methods.iter_mut().find(|(m, _)| *m == n) {
                    Some((_, v)) => v.push(s),
                    None => methods.push((n, vec![s])),
                },
                Ok(Member::Prop(p)) => properties.push(p),
                Err(Skip) => {
                    let before = self.pos;
                    self.recover();
                    if self.pos == before && !self.is('}') {
                        self.bump();
                    }
                }
            }
        }
        self.expect('}')?;
        self.eat(';');
        Ok(TsDeclaration::Interface {
            name,
            call_signatures,
            methods,
            properties,
            span: start.to(self.toks[self.pos - 1].1),
        })
    }

    fn end_member(&mut self) -> Result<(), Skip> {
        if self.eat(';') || self.eat(',') || self.is('}') {
            Ok(())
        } else {
            Err(self.syntax("`;`"))
        }
    }

    fn member(&mut self) -> Result<Member, Skip> {
        let start = self.span();
        if self.is('(') {
            let params = self.params()?;
            self.expect(':')?;
            let result = self.ty()?;
            self.end_member()?;
            return Ok(Member::Call(TsSignature {
                params,
                result,
                span: start.to(self.toks[self.pos - 1].1),
            }));
        }
        if self.is('[') {
            return Err(self.unsupported(start, "index signature"));
        }
        if self.is_word("new") && matches!(self.peek_n(1), T::Punct('(')) {
            return Err(self.unsupported(start, "construct signature"));
        }
        if self.is_word("readonly") && matches!(self.peek_n(1), T::Ident(_)) {
            self.bump();
        }
        let name = match self.peek().clone() {
            T::Ident(s) | T::Str(s) => {
                self.bump();
                s
            }
            _ => return Err(self.syntax("a member")),
        };
        let optional = self.eat('?');
        if self.is('<') {
            return Err(self.unsupported(start, &format!("generic method {name}")));
        }
        if self.is('(') {
            let params = self.params()?;
            self.expect(':')?;
            let result = self.ty()?;
            self.end_member()?;
            return Ok(Member::Method(
                name,
                TsSignature {
                    params,
                    result,
                    span: start.to(self.toks[self.pos - 1].1),
                },
            ));
        }
        self.expect(':')?;
        let ty = self.ty()?;
        self.end_member()?;
        Ok(Member::Prop(TsProperty {
            name,
            ty,
            optional,
            span: start.to(self.toks[self.pos - 1].1),
        }))
    }

    fn params(&mut self) -> Result<Vec<TsParam>, Skip> {
        let start = self.span();
        self.expect('(')?;
        let mut out: Vec<TsParam> = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            if self.is('.') {
                let sp = self.span();
                return Err(self.unsupported(sp, "rest parameter"));
            }
            let name = self.name()?;
            let optional = self.eat('?');
            let ty = if self.eat(':') { self.ty()? } else { TsTypeRef::Any };
            if !optional && out.iter().any(|p| p.optional) {
                self.diags.push(Diagnostic::warning(
                    codes::DTS_OPTIONAL_ORDER,
                    start.to(self.span()),
                    format!("required parameter `{name}` follows an optional one"),
                ));
                return Err(Skip);
            }
            out.push(TsParam { name, ty, optional });
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn ty(&mut self) -> Result<TsTypeRef, Skip> {
        let start = self.span();
        let mut t = match self.peek().clone() {
            T::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "string" => TsTypeRef::String,
                    "number" => TsTypeRef::Number,
                    "boolean" => TsTypeRef::Boolean,
                    "any" => TsTypeRef::Any,
                    "void" => TsTypeRef::Void,
                    _ => {
                        if self.is('.') {
                            return Err(self.unsupported(start, "qualified type name"));
                        }
                        if self.is('<') {
                            return Err(self.unsupported(start, &format!("generic type {s}<...>")));
                        }
                        TsTypeRef::Named(s)
                    }
                }
            }
            T::Str(s) => {
                self.bump();
                TsTypeRef::StringLiteral(s)
            }
            T::Punct('(') => return Err(self.unsupported(start, "function type")),
            T::Punct('{') => return Err(self.unsupported(start, "object type literal")),
            _ => return Err(self.syntax("a type")),
        };
        while self.is('[') && matches!(self.peek_n(1), T::Punct(']')) {
            self.bump();
            self.bump();
            t = TsTypeRef::Array(Box::new(t));
        }
        if self.is('|') || self.is('&') {
            let sp = self.span();
            return Err(self.unsupported(sp, "union or intersection type"));
        }
        Ok(t)
    }
}

enum Member {
    Call(TsSignature),
    Method(String, TsSignature),
    Prop(TsProperty),
}

/// Repeated interface declarations merge, as in TypeScript.
fn merge_decl(out: &mut Vec<TsDeclaration>, decl: TsDeclaration) {
    if let TsDeclaration::Interface {
        name,
        call_signatures,
        methods,
        properties,
        ..
    } = &decl
    {
        for existing in out.iter_mut() {
            if let TsDeclaration::Interface {
                name: n,
                call_signatures: c,
                methods: m,
                properties: p,
                ..
            } = existing
            {
                if n == name {
                    c.extend(call_signatures.iter().cloned());
                    for (mn, sigs) in methods {
                        match m.iter_mut().find(|(x, _)| x == mn) {
                            Some((_, v)) => v.extend(sigs.iter().cloned()),
                            None => m.push((mn.clone(), sigs.clone())),
                        }
                    }
                    p.extend(properties.iter().cloned());
                    return;
                }
            }
        }
    }
    out.push(decl);
}

pub fn parse_dts(text: &str) -> Result<DtsParse, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut p = P {
        toks,
        pos: 0,
        diags: Vec::new(),
    };
    let decls = p.file();
    Ok(DtsParse {
        decls,
        diagnostics: p.diags,
    })
}

/// Maps parsed declarations into provided types rooted at `alias`.
///
/// Returns the context and the mapping diagnostics; error diagnostics
/// (dangling references) mean the offending members were dropped.
pub fn map_dts(alias: &str, decls: &[TsDeclaration]) -> (ProvidedContext, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let interfaces: BTreeMap<&str, &TsDeclaration> = decls
        .iter()
        .filter_map(|d| match d {
            TsDeclaration::Interface { name, .. } => Some((name.as_str(), d)),
            _ => None,
        })
        .collect();
    let type_id = |iface: &str| TypeId::new(format!("{alias}.{iface}"));
    let map_ty = |t: &TsTypeRef, span: SourceSpan, diags: &mut Vec<Diagnostic>| -> Option<CoreType> {
        fn go(t: &TsTypeRef, known: &dyn Fn(&str) -> Option<TypeId>) -> Result<CoreType, String> {
            Ok(match t {
                TsTypeRef::String | TsTypeRef::StringLiteral(_) => CoreType::String,
                TsTypeRef::Number => CoreType::Float,
                TsTypeRef::Boolean => CoreType::Bool,
                TsTypeRef::Any => CoreType::Object,
                TsTypeRef::Void => CoreType::Unit,
                TsTypeRef::Array(e) => CoreType::array(go(e, known)?),
                TsTypeRef::Named(n) => CoreType::Named(known(n).ok_or_else(|| n.clone())?),
            })
        }
        let known = |n: &str| interfaces.contains_key(n).then(|| type_id(n));
        match go(t, &known) {
            Ok(ct) => Some(ct),
            Err(name) => {
                diags.push(Diagnostic::error(
                    codes::DTS_DANGLING_REF,
                    span,
                    format!("type `{name}` is not declared"),
                ));
                None
            }
        }
    };

    let mut ctx = ProvidedContext::new();
    let root = TypeId::new(alias);
    ctx.add_root(alias, root.clone());

    let mut root_members = Vec::new();
    for d in decls {
        if let TsDeclaration::GlobalVar { name, ty, span } = d {
            if let Some(t) = map_ty(ty, *span, &mut diags) {
                let mut m = ProvidedMember::property(
                    name,
                    t,
                    ErasurePlan::EmitPropertyGet {
                        is_static: true,
                        name: name.clone(),
                        args: Vec::new(),
                    },
                );
                m.is_static = true;
                root_members.push(m);
            }
        }
    }

    for (iface, decl) in &interfaces {
        let TsDeclaration::Interface {
            call_signatures,
            methods,
            properties,
            span,
            ..
        } = decl
        else {
            continue;
        };
        let mut members = Vec::new();
        let overloads = |sigs: &[TsSignature], name: &str, emit_name: &str, diags: &mut Vec<Diagnostic>| {
            let mut out: Vec<Signature> = Vec::new();
            for s in sigs {
                let mut params = Vec::new();
                let mut ok = true;
                for p in &s.params {
                    if let TsTypeRef::StringLiteral(lit) = &p.ty {
                        diags.push(Diagnostic::warning(
                            codes::DTS_CONSTANT_OVERLOAD,
                            s.span,
                            format!("overload on constant \"{lit}\" collapsed to string"),
                        ));
                    }
                    match map_ty(&p.ty, s.span, diags) {
                        Some(ty) => params.push(Param {
                            name: p.name.clone(),
                            ty,
                            optional: p.optional,
                        }),
                        None => ok = false,
                    }
                }
                let Some(result) = map_ty(&s.result, s.span, diags) else {
                    continue;
                };
                if !ok {
                    continue;
                }
                let same = |o: &Signature| {
                    o.params.len() == params.len()
                        && o.params
                            .iter()
                            .zip(&params)
                            .all(|(a, b)| a.ty == b.ty && a.optional == b.optional)
                };
                if out.iter().any(same) {
                    let collapsed = s.params.iter().any(|p| matches!(p.ty, TsTypeRef::StringLiteral(_)));
                    if !collapsed {
                        diags.push(Diagnostic::warning(
                            codes::DTS_DUPLICATE_OVERLOAD,
                            s.span,
                            format!("duplicate overload of `{name}` dropped"),
                        ));
                    }
                    continue;
                }
                out.push(Signature {
                    params,
                    result,
                    erasure: ErasurePlan::EmitCall {
                        is_static: false,
                        name: emit_name.to_string(),
                        args: vec![ArgTemplate::Receiver, ArgTemplate::Args],
                    },
                });
            }
            out
        };
        if !call_signatures.is_empty() {
            let sigs = overloads(call_signatures, "Invoke", "", &mut diags);
            if !sigs.is_empty() {
                members.push(ProvidedMember {
                    name: "Invoke".into(),
                    kind: MemberKind::Invoke,
                    is_static: false,
                    overloads: sigs,
                    setter: None,
                });
            }
        }
        for (name, sigs) in methods {
            let mapped = overloads(sigs, name, name, &mut diags);
            if !mapped.is_empty() {
                members.push(ProvidedMember {
                    name: name.clone(),
                    kind: MemberKind::Method,
                    is_static: false,
                    overloads: mapped,
                    setter: None,
                });
            }
        }
        for p in properties {
            let Some(ty) = map_ty(&p.ty, p.span, &mut diags) else {
                continue;
            };
            let mut m = ProvidedMember::property(
                &p.name,
                ty,
                ErasurePlan::EmitPropertyGet {
                    is_static: false,
                    name: p.name.clone(),
                    args: vec![ArgTemplate::Receiver],
                },
            );
            m.setter = Some(ErasurePlan::EmitPropertySet {
                is_static: false,
                name: p.name.clone(),
                args: vec![ArgTemplate::Receiver, ArgTemplate::Arg(0)],
            });
            members.push(m);
        }
        // Interfaces made only of properties are option bags; expose a
        // constructor on the root taking every property as optional.
        if call_signatures.is_empty() && methods.is_empty() && !properties.is_empty() {
            if let Some(ctor) = option_bag_constructor(iface, properties, &type_id(iface), &members) {
                root_members.push(ctor);
            }
        }
        let _ = span;
        let mut seen = std::collections::BTreeSet::new();
        members.retain(|m| seen.insert(m.name.clone()));
        ctx.add_type(type_id(iface), iface, move || Ok(members.clone()));
    }

    let mut seen = std::collections::BTreeSet::new();
    root_members.retain(|m| seen.insert(m.name.clone()));
    ctx.add_type(root, alias, move || Ok(root_members.clone()));
    (ctx, diags)
}

fn option_bag_constructor(
    iface: &str,
    props: &[TsProperty],
    id: &TypeId,
    mapped: &[ProvidedMember],
) -> Option<ProvidedMember> {
    let mut params = Vec::new();
    let mut fields = Vec::new();
    for (i, p) in props.iter().enumerate() {
        let m = mapped
            .iter()
            .find(|m| m.name == p.name && m.kind == MemberKind::Property)?;
        params.push(Param {
            name: p.name.clone(),
            ty: m.overloads[0].result.clone(),
            optional: true,
        });
        let key = if crate::syntax::lexer::is_plain_ident(&p.name) {
            p.name.clone()
        } else {
            format!("{:?}", p.name)
        };
        fields.push(format!("{key}: {{{i}}}"));
    }
    Some(ProvidedMember {
        name: iface.to_string(),
        kind: MemberKind::Method,
        is_static: true,
        overloads: vec![Signature {
            erasure: ErasurePlan::JsTemplate {
                text: format!("{{{}}}", fields.join(", ")),
                args: (0..params.len()).map(ArgTemplate::Arg).collect(),
            },
            params,
            result: CoreType::Named(id.clone()),
        }],
        setter: None,
    })
}

pub struct TypeScriptProvider;

impl TypeProvider for TypeScriptProvider {
    fn name(&self) -> &'static str {
        "TypeScript"
    }

    fn instantiate(
        &self,
        alias: &str,
        params: &[StaticParam],
        env: &ProviderEnv,
    ) -> Result<ProvidedContext, ProviderFailure> {
        let file = match params {
            [StaticParam {
                name: None | Some(_),
                value: StaticValue::Str(f),
            }] if params[0].name.as_deref().is_none_or(|n| n == "File") => f,
            _ => {
                return Err(ProviderFailure::new(
                    "TypeScript takes exactly one string static parameter, the declaration file",
                ))
            }
        };
        let text = env.dts.read(file)?;
        let parsed = parse_dts(&text).map_err(|d| {
            ProviderFailure::new(format!(
                "{file}: {}",
                d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
            ))
        })?;
        let (mut ctx, diags) = map_dts(alias, &parsed.decls);
        let errors: Vec<String> = diags.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
        if !errors.is_empty() {
            return Err(ProviderFailure::new(format!("{file}: {}", errors.join("; "))));
        }
        ctx.diagnostics.extend(parsed.diagnostics);
        ctx.diagnostics.extend(diags);
        Ok(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provider::lookup_member;

    const JQUERY: &str = r#"
declare var jQuery: JQueryStatic;

interface JQueryStatic {
    (selector: string, context?: any): JQuery;
}
interface JQuery {
    attr(attributeName: string): string;
    attr(attributeName: string, value: any): JQuery;
}
"#;

    #[test]
    fn jquery_excerpt_parses() {
        let p = parse_dts(JQUERY).unwrap();
        assert!(p.diagnostics.is_empty());
        assert_eq!(p.decls.len(), 3);
        assert!(
            matches!(&p.decls[0], TsDeclaration::GlobalVar { name, ty: TsTypeRef::Named(t), .. } if name == "jQuery" && t == "JQueryStatic")
        );
        assert!(matches!(&p.decls[1], TsDeclaration::Interface { call_signatures, .. } if call_signatures.len() == 1));
        assert!(matches!(&p.decls[2], TsDeclaration::Interface { methods, .. } if methods[0].1.len() == 2));
    }

    #[test]
    fn empty_file() {
        assert!(parse_dts("").unwrap().decls.is_empty());
    }

    #[test]
    fn unsupported_constructs_are_skipped() {
        let src = "declare class Foo { x: number; }\ninterface A { f<T>(x: T): T; g(): number; [k: string]: any; h: string | number; }\ndeclare module M { }\n";
        let p = parse_dts(src).unwrap();
        assert_eq!(p.decls.len(), 1);
        let codes: Vec<_> = p.diagnostics.iter().map(|d| d.code).collect();
        assert!(
            codes.iter().all(|c| *c == codes::DTS_UNSUPPORTED),
            "{:?}",
            p.diagnostics
        );
        assert_eq!(codes.len(), 5);
        let TsDeclaration::Interface {
            methods, properties, ..
        } = &p.decls[0]
        else {
            panic!()
        };
        assert_eq!(methods.len(), 1);
        assert!(properties.is_empty());
    }

    #[test]
    fn dangling_reference_is_reported_at_mapping() {
        let p = parse_dts("declare var x: Foo;").unwrap();
        assert!(p.diagnostics.is_empty());
        let (_, d) = map_dts("t", &p.decls);
        assert_eq!(d[0].code, codes::DTS_DANGLING_REF);
    }

    #[test]
    fn constant_overloads_collapse() {
        let p = parse_dts("interface E { on(ev: \"click\"): number; on(ev: string): number; }").unwrap();
        let (ctx, d) = map_dts("t", &p.decls);
        assert!(d.iter().any(|d| d.code == codes::DTS_CONSTANT_OVERLOAD));
        let m = lookup_member(&ctx, &TypeId::new("t.E"), "on").unwrap().unwrap();
        assert_eq!(m.overloads.len(), 1);
    }

    #[test]
    fn lex_errors_abort() {
        assert!(parse_dts("interface A { x: \"oops }").is_err());
        assert!(parse_dts("/* never closed").is_err());
    }

    #[test]
    fn option_bags_get_constructors() {
        let p = parse_dts("interface Opts { name?: string; data?: number[][]; }").unwrap();
        let (ctx, _) = map_dts("h", &p.decls);
        let m = lookup_member(&ctx, &TypeId::new("h"), "Opts").unwrap().unwrap();
        assert_eq!(m.overloads[0].params.len(), 2);
        assert_eq!(
            m.overloads[0].params[1].ty,
            CoreType::array(CoreType::array(CoreType::Float))
        );
        assert_eq!(
            m.erasure(),
            &ErasurePlan::JsTemplate {
                text: "{name: {0}, data: {1}}".into(),
                args: vec![ArgTemplate::Arg(0), ArgTemplate::Arg(1)]
            }
        );
    }
}
