//! Recursive-descent parser for `.mml` modules.
//!
//! Expression precedence, loosest first: `;` sequencing, the open-ended
//! forms (`let`, `fun`, `if`, `for`, `try`, `return`), `<-`, `|>`, `||`,
//! `&&`, comparisons, `::`, additive, multiplicative, unary minus,
//! application, postfix member access. `|>` is desugared to application
//! here, so later passes never see it.

use crate::diag::{codes, Diagnostic, SourceSpan};
use crate::types::CoreType;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};

/// Qualifiers that may prefix a prelude function (`List.map`).
pub const PRELUDE_MODULES: &[&str] = &["List", "Seq", "Array", "Async", "Option"];

type PResult<T> = Result<T, Diagnostic>;

pub fn parse_module(src: &str) -> Result<SourceModule, Vec<Diagnostic>> {
    let toks = tokenize(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let module = p.module().map_err(|d| {
        let mut all = std::mem::take(&mut p.diags);
        all.push(d);
        all
    })?;
    let mut diags = p.diags;
    diags.extend(validate_computation_syntax(&module));
    if diags.is_empty() {
        Ok(module)
    } else {
        Err(diags)
    }
}

/// Parses a single expression (used by tests and the REPL-style helpers).
pub fn parse_expr(src: &str) -> Result<SurfaceExpr, Vec<Diagnostic>> {
    let toks = tokenize(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let e = p.seq_expr().and_then(|e| {
        p.expect(&Tok::Eof)?;
        Ok(e)
    });
    let mut diags = std::mem::take(&mut p.diags);
    match e {
        Ok(e) => {
            let mut v = Vec::new();
            check_comp(&e, false, &mut v);
            diags.extend(v);
            if diags.is_empty() {
                Ok(e)
            } else {
                Err(diags)
            }
        }
        Err(d) => {
            diags.push(d);
            Err(diags)
        }
    }
}

/// Parses a type expression as written after `unbox<`.
pub fn parse_type(src: &str) -> Result<CoreType, Diagnostic> {
    let mut p = Parser::new(tokenize(src)?);
    let t = p.type_expr()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    prev_end: usize,
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser {
            toks,
            pos: 0,
            prev_end: 0,
            diags: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_n(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn tight(&self) -> bool {
        !self.toks[self.pos].spaced
    }

    fn span_here(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn start(&self) -> usize {
        self.toks[self.pos].span.start
    }

    fn span_from(&self, start: usize) -> SourceSpan {
        SourceSpan::new(start, self.prev_end.max(start))
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        self.prev_end = t.span.end;
        t.tok
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(
            codes::PARSE_UNEXPECTED,
            self.span_here(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.advance();
                Ok(n)
            }
            Tok::Quoted(n) => Err(Diagnostic::error(
                codes::PARSE_BACKTICK_BINDING,
                self.span_here(),
                format!("backtick name `{n}` can only be used as a member name"),
            )),
            _ => Err(self.unexpected("identifier")),
        }
    }

    // ---- items ----

    fn module(&mut self) -> PResult<SourceModule> {
        let mut m = SourceModule::default();
        loop {
            match self.peek() {
                Tok::Eof => return Ok(m),
                Tok::Type => {
                    let decl = self.provider_decl()?;
                    if m.provider(&decl.alias).is_some() {
                        self.diags.push(Diagnostic::error(
                            codes::PARSE_DUPLICATE_ALIAS,
                            decl.span,
                            format!("provider alias `{}` is already declared", decl.alias),
                        ));
                    }
                    m.providers.push(decl);
                }
                Tok::Let => {
                    let b = self.top_binding()?;
                    m.bindings.push(b);
                }
                Tok::Do => {
                    let start = self.start();
                    self.advance();
                    let e = self.seq_expr()?;
                    if m.entry.is_some() {
                        self.diags.push(Diagnostic::error(
                            codes::PARSE_DUPLICATE_ENTRY,
                            self.span_from(start),
                            "a module has at most one `do` entry",
                        ));
                    }
                    m.entry = Some(e);
                }
                _ => return Err(self.unexpected("`type`, `let` or `do`")),
            }
        }
    }

    fn provider_decl(&mut self) -> PResult<ProviderDecl> {
        let start = self.start();
        self.expect(&Tok::Type)?;
        let alias = self.ident()?;
        self.expect(&Tok::Eq)?;
        let provider = self.ident()?;
        let mut params = Vec::new();
        if self.eat(&Tok::Lt) && !self.eat(&Tok::Gt) {
            loop {
                params.push(self.static_param()?);
                if self.eat(&Tok::Gt) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return Err(self.static_param_error("expected `,` or `>`"));
                }
            }
        }
        Ok(ProviderDecl {
            alias,
            provider,
            params,
            span: self.span_from(start),
        })
    }

    fn static_param_error(&self, msg: &str) -> Diagnostic {
        Diagnostic::error(
            codes::PARSE_STATIC_PARAMS,
            self.span_here(),
            format!("malformed static parameter list: {msg}"),
        )
    }

    fn static_param(&mut self) -> PResult<StaticParam> {
        let mut name = None;
        if let (Tok::Ident(n), Tok::Eq) = (self.peek().clone(), self.peek_n(1)) {
            self.advance();
            self.advance();
            name = Some(n);
        }
        let value = match self.peek().clone() {
            Tok::Str(s) => StaticValue::Str(s),
            Tok::True => StaticValue::Bool(true),
            Tok::False => StaticValue::Bool(false),
            _ => return Err(self.static_param_error("values must be string or bool literals")),
        };
        self.advance();
        Ok(StaticParam { name, value })
    }

    fn top_binding(&mut self) -> PResult<Binding> {
        let start = self.start();
        self.expect(&Tok::Let)?;
        let rec = self.eat(&Tok::Rec);
        let (pat, params) = self.binding_head()?;
        self.expect(&Tok::Eq)?;
        let value = self.seq_expr()?;
        if self.peek() == &Tok::In {
            return Err(self.unexpected("a top-level item (top-level `let` takes no `in`)"));
        }
        Ok(Binding {
            rec,
            pat,
            params,
            value,
            span: self.span_from(start),
        })
    }

    /// `pat params*` for a function binding or `p1, p2, ...` for a tuple.
    fn binding_head(&mut self) -> PResult<(Pattern, Vec<Pattern>)> {
        let first = self.pattern_atom()?;
        if self.peek() == &Tok::Comma {
            let mut items = vec![first];
            while self.eat(&Tok::Comma) {
                items.push(self.pattern_atom()?);
            }
            return Ok((Pattern::Tuple(items), Vec::new()));
        }
        let mut params = Vec::new();
        while self.starts_pattern() {
            params.push(self.pattern_atom()?);
        }
        if !params.is_empty() && !matches!(first, Pattern::Var(_)) {
            return Err(Diagnostic::error(
                codes::PARSE_UNEXPECTED,
                self.span_here(),
                "only a named binding can take parameters",
            ));
        }
        Ok((first, params))
    }

    fn starts_pattern(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::Quoted(_))
    }

    /// A pattern that may be an unparenthesized tuple (`for k, v in ...`).
    fn pattern(&mut self) -> PResult<Pattern> {
        let first = self.pattern_atom()?;
        if self.peek() != &Tok::Comma {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Comma) {
            items.push(self.pattern_atom()?);
        }
        Ok(Pattern::Tuple(items))
    }

    fn pattern_atom(&mut self) -> PResult<Pattern> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.advance();
                Ok(if n == "_" { Pattern::Wildcard } else { Pattern::Var(n) })
            }
            Tok::LParen => {
                self.advance();
                if self.eat(&Tok::RParen) {
                    return Ok(Pattern::Unit);
                }
                let p = self.pattern()?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            Tok::Quoted(_) => self.ident().map(Pattern::Var),
            _ => Err(self.unexpected("pattern")),
        }
    }

    // ---- expressions ----

    fn seq_expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let first = self.expr()?;
        if self.eat(&Tok::Semi) {
            let rest = self.seq_expr()?;
            return Ok(SurfaceExpr::new(
                ExprKind::Seq(Box::new(first), Box::new(rest)),
                self.span_from(start),
            ));
        }
        Ok(first)
    }

    fn expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let kind = match self.peek() {
            Tok::Let => {
                self.advance();
                let rec = self.eat(&Tok::Rec);
                let (pat, params) = self.binding_head()?;
                self.expect(&Tok::Eq)?;
                let value = self.seq_expr()?;
                self.expect(&Tok::In)?;
                let body = self.seq_expr()?;
                ExprKind::Let {
                    rec,
                    pat,
                    params,
                    value: Box::new(value),
                    body: Box::new(body),
                }
            }
            Tok::LetBang => {
                self.advance();
                let pat = self.pattern()?;
                self.expect(&Tok::Eq)?;
                let value = self.seq_expr()?;
                self.expect(&Tok::In)?;
                let body = self.seq_expr()?;
                ExprKind::LetBang {
                    pat,
                    value: Box::new(value),
                    body: Box::new(body),
                }
            }
            Tok::Fun => {
                self.advance();
                let mut params = vec![self.pattern_atom()?];
                while self.peek() != &Tok::Arrow {
                    params.push(self.pattern_atom()?);
                }
                self.expect(&Tok::Arrow)?;
                let body = self.seq_expr()?;
                ExprKind::Lambda {
                    params,
                    body: Box::new(body),
                }
            }
            Tok::If => {
                self.advance();
                let cond = self.expr()?;
                self.expect(&Tok::Then)?;
                let then_branch = self.expr()?;
                let else_branch = if self.eat(&Tok::Else) {
                    Some(Box::new(self.expr()?))
                } else {
                    None
                };
                ExprKind::If {
                    cond: Box::new(cond),
                    then_branch: Box::new(then_branch),
                    else_branch,
                }
            }
            Tok::For => {
                self.advance();
                let pat = self.pattern()?;
                self.expect(&Tok::In)?;
                let collection = self.expr()?;
                self.expect(&Tok::Do)?;
                let body = self.seq_expr()?;
                ExprKind::For {
                    pat,
                    collection: Box::new(collection),
                    body: Box::new(body),
                }
            }
            Tok::Try => {
                self.advance();
                let body = self.seq_expr()?;
                self.expect(&Tok::With)?;
                let pat = self.pattern()?;
                self.expect(&Tok::Arrow)?;
                let handler = self.seq_expr()?;
                ExprKind::TryWith {
                    body: Box::new(body),
                    pat,
                    handler: Box::new(handler),
                }
            }
            Tok::Return => {
                self.advance();
                ExprKind::Return(Box::new(self.expr()?))
            }
            _ => return self.assign_expr(),
        };
        Ok(SurfaceExpr::new(kind, self.span_from(start)))
    }

    fn assign_expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let target = self.pipe_expr()?;
        if self.peek() != &Tok::LeftArrow {
            return Ok(target);
        }
        let arrow = self.span_here();
        self.advance();
        let ExprKind::Member { receiver, name } = target.kind else {
            return Err(Diagnostic::error(
                codes::PARSE_INVALID_ASSIGN,
                arrow,
                "only a member (`e.name`) can be assigned with `<-`",
            ));
        };
        let value = self.expr()?;
        Ok(SurfaceExpr::new(
            ExprKind::MemberSet {
                receiver,
                name,
                value: Box::new(value),
            },
            self.span_from(start),
        ))
    }

    fn pipe_expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let mut e = self.binary(2)?;
        while self.eat(&Tok::Pipe) {
            let f = self.binary(2)?;
            e = SurfaceExpr::new(ExprKind::App(Box::new(f), Box::new(e)), self.span_from(start));
        }
        Ok(e)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Gt => BinOp::Gt,
            Tok::Le => BinOp::Le,
            Tok::Ge => BinOp::Ge,
            Tok::ColonColon => BinOp::Cons,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::PlusDot => BinOp::FAdd,
            Tok::MinusDot => BinOp::FSub,
            Tok::Caret => BinOp::Concat,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Mod,
            Tok::StarDot => BinOp::FMul,
            Tok::SlashDot => BinOp::FDiv,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> PResult<SurfaceExpr> {
        let start = self.start();
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.advance();
            let rhs = if op == BinOp::Cons {
                self.binary(prec)?
            } else {
                self.binary(prec + 1)?
            };
            lhs = SurfaceExpr::new(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                self.span_from(start),
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let op = match self.peek() {
            Tok::Minus => UnOp::Neg,
            Tok::MinusDot => UnOp::FNeg,
            _ => return self.app_expr(),
        };
        self.advance();
        if op == UnOp::Neg {
            let folded = match self.peek() {
                Tok::Int(i) => Some(Literal::Int(i.wrapping_neg())),
                Tok::Float(x) => Some(Literal::Float(-x)),
                _ => None,
            };
            if let Some(lit) = folded {
                self.advance();
                let lit = SurfaceExpr::new(ExprKind::Lit(lit), self.span_from(start));
                return self.postfix_from(lit, start);
            }
        }
        let e = self.unary()?;
        Ok(SurfaceExpr::new(
            ExprKind::Unary { op, expr: Box::new(e) },
            self.span_from(start),
        ))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Int(_)
                | Tok::Float(_)
                | Tok::Str(_)
                | Tok::Ident(_)
                | Tok::True
                | Tok::False
                | Tok::LParen
                | Tok::LBracket
                | Tok::LArray
                | Tok::Async
        )
    }

    fn app_expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let mut head = if self.peek() == &Tok::Unbox {
            self.advance();
            self.expect(&Tok::Lt)?;
            let target = self.type_expr()?;
            self.expect(&Tok::Gt)?;
            let arg = self.postfix_expr()?;
            SurfaceExpr::new(
                ExprKind::Unbox {
                    target,
                    expr: Box::new(arg),
                },
                self.span_from(start),
            )
        } else {
            self.postfix_expr()?
        };
        while self.starts_atom() {
            let arg = self.postfix_expr()?;
            head = SurfaceExpr::new(ExprKind::App(Box::new(head), Box::new(arg)), self.span_from(start));
        }
        Ok(head)
    }

    fn postfix_expr(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let e = self.atom()?;
        self.postfix_from(e, start)
    }

    fn postfix_from(&mut self, mut e: SurfaceExpr, start: usize) -> PResult<SurfaceExpr> {
        loop {
            if self.peek() == &Tok::Dot {
                self.advance();
                let name = match self.peek().clone() {
                    Tok::Ident(n) | Tok::Quoted(n) => {
                        self.advance();
                        n
                    }
                    _ => return Err(self.unexpected("member name")),
                };
                if self.peek() == &Tok::LParen && self.tight() {
                    let (args, named) = self.call_args()?;
                    e = SurfaceExpr::new(
                        ExprKind::MethodCall {
                            receiver: Box::new(e),
                            name,
                            args,
                            named,
                        },
                        self.span_from(start),
                    );
                } else {
                    e = SurfaceExpr::new(
                        ExprKind::Member {
                            receiver: Box::new(e),
                            name,
                        },
                        self.span_from(start),
                    );
                }
            } else if self.peek() == &Tok::LParen && self.tight() {
                let arg = self.atom()?;
                e = SurfaceExpr::new(ExprKind::App(Box::new(e), Box::new(arg)), self.span_from(start));
            } else {
                return Ok(e);
            }
        }
    }

    fn call_args(&mut self) -> PResult<(Vec<SurfaceExpr>, Vec<NamedArg>)> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        let mut named: Vec<NamedArg> = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok((args, named));
        }
        loop {
            if let (Tok::Ident(n), Tok::Eq) = (self.peek().clone(), self.peek_n(1)) {
                self.advance();
                self.advance();
                let value = self.expr()?;
                named.push(NamedArg { name: n, value });
            } else {
                let arg_span = self.span_here();
                let value = self.expr()?;
                if !named.is_empty() {
                    self.diags.push(Diagnostic::error(
                        codes::PARSE_NAMED_ARG_ORDER,
                        arg_span.to(value.span),
                        "positional arguments must come before named arguments",
                    ));
                }
                args.push(value);
            }
            if self.eat(&Tok::RParen) {
                return Ok((args, named));
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn atom(&mut self) -> PResult<SurfaceExpr> {
        let start = self.start();
        let kind = match self.peek().clone() {
            Tok::Int(i) => {
                self.advance();
                ExprKind::Lit(Literal::Int(i))
            }
            Tok::Float(x) => {
                self.advance();
                ExprKind::Lit(Literal::Float(x))
            }
            Tok::Str(s) => {
                self.advance();
                ExprKind::Lit(Literal::String(s))
            }
            Tok::True => {
                self.advance();
                ExprKind::Lit(Literal::Bool(true))
            }
            Tok::False => {
                self.advance();
                ExprKind::Lit(Literal::Bool(false))
            }
            Tok::Ident(n) => {
                self.advance();
                if PRELUDE_MODULES.contains(&n.as_str()) && self.peek() == &Tok::Dot {
                    if let Tok::Ident(m) = self.peek_n(1).clone() {
                        self.advance();
                        self.advance();
                        ExprKind::Ident(format!("{n}.{m}"))
                    } else {
                        ExprKind::Ident(n)
                    }
                } else {
                    ExprKind::Ident(n)
                }
            }
            Tok::Quoted(_) => return Err(self.ident().unwrap_err()),
            Tok::LParen => {
                self.advance();
                if self.eat(&Tok::RParen) {
                    ExprKind::Lit(Literal::Unit)
                } else {
                    let first = self.seq_expr()?;
                    if self.peek() == &Tok::Comma {
                        let mut items = vec![first];
                        while self.eat(&Tok::Comma) {
                            items.push(self.expr()?);
                        }
                        self.expect(&Tok::RParen)?;
                        ExprKind::Tuple(items)
                    } else {
                        self.expect(&Tok::RParen)?;
                        // Parentheses are not a node; widen the span only.
                        return Ok(SurfaceExpr::new(first.kind, self.span_from(start)));
                    }
                }
            }
            Tok::LBracket => {
                self.advance();
                ExprKind::List(self.elements(&Tok::RBracket)?)
            }
            Tok::LArray => {
                self.advance();
                ExprKind::Array(self.elements(&Tok::RArray)?)
            }
            Tok::Async => {
                self.advance();
                self.expect(&Tok::LBrace)?;
                let body = self.seq_expr()?;
                self.expect(&Tok::RBrace)?;
                ExprKind::Async(Box::new(body))
            }
            _ => return Err(self.unexpected("expression")),
        };
        Ok(SurfaceExpr::new(kind, self.span_from(start)))
    }

    fn elements(&mut self, close: &Tok) -> PResult<Vec<SurfaceExpr>> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(close) {
                return Ok(items);
            }
            self.expect(&Tok::Semi)?;
        }
    }

    // ---- types (for unbox) ----

    fn type_expr(&mut self) -> PResult<CoreType> {
        let t = self.tuple_type()?;
        if self.eat(&Tok::Arrow) {
            let r = self.type_expr()?;
            return Ok(CoreType::func(t, r));
        }
        Ok(t)
    }

    fn tuple_type(&mut self) -> PResult<CoreType> {
        let first = self.postfix_type()?;
        if self.peek() != &Tok::Star {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat(&Tok::Star) {
            items.push(self.postfix_type()?);
        }
        Ok(CoreType::Tuple(items))
    }

    fn postfix_type(&mut self) -> PResult<CoreType> {
        let mut t = self.base_type()?;
        loop {
            let wrap: fn(CoreType) -> CoreType = match self.peek() {
                Tok::Ident(n) if n == "list" => CoreType::list,
                Tok::Ident(n) if n == "array" => CoreType::array,
                Tok::Ident(n) if n == "option" => CoreType::option,
                Tok::Async => CoreType::async_of,
                _ => return Ok(t),
            };
            self.advance();
            t = wrap(t);
        }
    }

    fn base_type(&mut self) -> PResult<CoreType> {
        if self.eat(&Tok::LParen) {
            let t = self.type_expr()?;
            self.expect(&Tok::RParen)?;
            return Ok(t);
        }
        let name = match self.peek().clone() {
            Tok::Ident(n) => n,
            _ => return Err(self.unexpected("type")),
        };
        self.advance();
        Ok(match name.as_str() {
            "int" => CoreType::Int,
            "float" => CoreType::Float,
            "bool" => CoreType::Bool,
            "string" => CoreType::String,
            "unit" => CoreType::Unit,
            "obj" => CoreType::Object,
            _ => {
                let mut full = name;
                while self.peek() == &Tok::Dot {
                    self.advance();
                    full.push('.');
                    full.push_str(&self.ident()?);
                }
                CoreType::named(full)
            }
        })
    }
}

/// Reports `let!` and `return` outside the statement positions of an
/// async block. A lambda body starts a fresh, non-computational context.
pub fn validate_computation_syntax(m: &SourceModule) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for b in &m.bindings {
        check_comp(&b.value, false, &mut out);
    }
    if let Some(e) = &m.entry {
        check_comp(e, false, &mut out);
    }
    out
}

fn check_comp(e: &SurfaceExpr, comp: bool, out: &mut Vec<Diagnostic>) {
    match &e.kind {
        ExprKind::Async(body) => check_comp(body, true, out),
        ExprKind::LetBang { value, body, .. } => {
            if !comp {
                out.push(Diagnostic::error(
                    codes::PARSE_LETBANG_OUTSIDE_ASYNC,
                    e.span,
                    "`let!` is only allowed in statement position inside `async { }`",
                ));
            }
            check_comp(value, false, out);
            check_comp(body, comp, out);
        }
        ExprKind::Return(inner) => {
            if !comp {
                out.push(Diagnostic::error(
                    codes::PARSE_RETURN_OUTSIDE_ASYNC,
                    e.span,
                    "`return` is only allowed in statement position inside `async { }`",
                ));
            }
            check_comp(inner, false, out);
        }
        ExprKind::Let { value, body, .. } => {
            check_comp(value, false, out);
            check_comp(body, comp, out);
        }
        ExprKind::Seq(a, b) => {
            check_comp(a, comp, out);
            check_comp(b, comp, out);
        }
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            check_comp(cond, false, out);
            check_comp(then_branch, comp, out);
            if let Some(e) = else_branch {
                check_comp(e, comp, out);
            }
        }
        ExprKind::For { collection, body, .. } => {
            check_comp(collection, false, out);
            check_comp(body, comp, out);
        }
        ExprKind::TryWith { body, handler, .. } => {
            check_comp(body, comp, out);
            check_comp(handler, comp, out);
        }
        _ => e.for_each_child(&mut |c| check_comp(c, false, out)),
    }
}
