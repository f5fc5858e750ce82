//! Surface syntax tree.

use crate::diag::SourceSpan;
use crate::types::CoreType;

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    String(String),
    Bool(bool),
    Unit,
}

/// Binding patterns: only variables, wildcards, unit and tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Wildcard,
    Var(String),
    Unit,
    Tuple(Vec<Pattern>),
}

impl Pattern {
    pub fn bound_names(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Var(n) => out.push(n.clone()),
            Pattern::Tuple(ps) => ps.iter().for_each(|p| p.bound_names(out)),
            Pattern::Wildcard | Pattern::Unit => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    FAdd,
    FSub,
    FMul,
    FDiv,
    Concat,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
    Cons,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::FAdd => "+.",
            BinOp::FSub => "-.",
            BinOp::FMul => "*.",
            BinOp::FDiv => "/.",
            BinOp::Concat => "^",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Cons => "::",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge => 4,
            BinOp::Cons => 5,
            BinOp::Add | BinOp::Sub | BinOp::FAdd | BinOp::FSub | BinOp::Concat => 6,
            BinOp::Mul | BinOp::Div | BinOp::Mod | BinOp::FMul | BinOp::FDiv => 7,
        }
    }

    pub const ALL: [BinOp; 19] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Mod,
        BinOp::FAdd,
        BinOp::FSub,
        BinOp::FMul,
        BinOp::FDiv,
        BinOp::Concat,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::Lt,
        BinOp::Gt,
        BinOp::Le,
        BinOp::Ge,
        BinOp::And,
        BinOp::Or,
        BinOp::Cons,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    FNeg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedArg {
    pub name: String,
    pub value: SurfaceExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceExpr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Lit(Literal),
    Ident(String),
    Lambda {
        params: Vec<Pattern>,
        body: Box<SurfaceExpr>,
    },
    App(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Let {
        rec: bool,
        pat: Pattern,
        params: Vec<Pattern>,
        value: Box<SurfaceExpr>,
        body: Box<SurfaceExpr>,
    },
    If {
        cond: Box<SurfaceExpr>,
        then_branch: Box<SurfaceExpr>,
        else_branch: Option<Box<SurfaceExpr>>,
    },
    Tuple(Vec<SurfaceExpr>),
    List(Vec<SurfaceExpr>),
    Array(Vec<SurfaceExpr>),
    Member {
        receiver: Box<SurfaceExpr>,
        name: String,
    },
    MemberSet {
        receiver: Box<SurfaceExpr>,
        name: String,
        value: Box<SurfaceExpr>,
    },
    MethodCall {
        receiver: Box<SurfaceExpr>,
        name: String,
        args: Vec<SurfaceExpr>,
        named: Vec<NamedArg>,
    },
    Async(Box<SurfaceExpr>),
    LetBang {
        pat: Pattern,
        value: Box<SurfaceExpr>,
        body: Box<SurfaceExpr>,
    },
    Return(Box<SurfaceExpr>),
    For {
        pat: Pattern,
        collection: Box<SurfaceExpr>,
        body: Box<SurfaceExpr>,
    },
    Unbox {
        target: CoreType,
        expr: Box<SurfaceExpr>,
    },
    Seq(Box<SurfaceExpr>, Box<SurfaceExpr>),
    TryWith {
        body: Box<SurfaceExpr>,
        pat: Pattern,
        handler: Box<SurfaceExpr>,
    },
    Binary {
        op: BinOp,
        lhs: Box<SurfaceExpr>,
        rhs: Box<SurfaceExpr>,
    },
    Unary {
        op: UnOp,
        expr: Box<SurfaceExpr>,
    },
}

impl SurfaceExpr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Self {
        SurfaceExpr { kind, span }
    }

    /// Copy with every span zeroed, for structural comparison.
    pub fn without_spans(&self) -> SurfaceExpr {
        let mut e = self.clone();
        e.clear_spans();
        e
    }

    fn clear_spans(&mut self) {
        self.span = SourceSpan::DUMMY;
        self.for_each_child_mut(&mut |c| c.clear_spans());
    }

    pub fn for_each_child(&self, f: &mut dyn FnMut(&SurfaceExpr)) {
        match &self.kind {
            ExprKind::Lit(_) | ExprKind::Ident(_) => {}
            ExprKind::Lambda { body, .. } => f(body),
            ExprKind::App(a, b) | ExprKind::Seq(a, b) => {
                f(a);
                f(b)
            }
            ExprKind::Let { value, body, .. } | ExprKind::LetBang { value, body, .. } => {
                f(value);
                f(body)
            }
            ExprKind::If {
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
            ExprKind::Tuple(es) | ExprKind::List(es) | ExprKind::Array(es) => es.iter().for_each(f),
            ExprKind::Member { receiver, .. } => f(receiver),
            ExprKind::MemberSet { receiver, value, .. } => {
                f(receiver);
                f(value)
            }
            ExprKind::MethodCall {
                receiver, args, named, ..
            } => {
                f(receiver);
                args.iter().for_each(&mut *f);
                named.iter().for_each(|n| f(&n.value));
            }
            ExprKind::Async(e) | ExprKind::Return(e) => f(e),
            ExprKind::For { collection, body, .. } => {
                f(collection);
                f(body)
            }
            ExprKind::Unbox { expr, .. } | ExprKind::Unary { expr, .. } => f(expr),
            ExprKind::TryWith { body, handler, .. } => {
                f(body);
                f(handler)
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                f(lhs);
                f(rhs)
            }
        }
    }

    pub fn for_each_child_mut(&mut self, f: &mut dyn FnMut(&mut SurfaceExpr)) {
        match &mut self.kind {
            ExprKind::Lit(_) | ExprKind::Ident(_) => {}
            ExprKind::Lambda { body, .. } => f(body),
            ExprKind::App(a, b) | ExprKind::Seq(a, b) => {
                f(a);
                f(b)
            }
            ExprKind::Let { value, body, .. } | ExprKind::LetBang { value, body, .. } => {
                f(value);
                f(body)
            }
            ExprKind::If {
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
            ExprKind::Tuple(es) | ExprKind::List(es) | ExprKind::Array(es) => es.iter_mut().for_each(f),
            ExprKind::Member { receiver, .. } => f(receiver),
            ExprKind::MemberSet { receiver, value, .. } => {
                f(receiver);
                f(value)
            }
            ExprKind::MethodCall {
                receiver, args, named, ..
            } => {
                f(receiver);
                args.iter_mut().for_each(&mut *f);
                named.iter_mut().for_each(|n| f(&mut n.value));
            }
            ExprKind::Async(e) | ExprKind::Return(e) => f(e),
            ExprKind::For { collection, body, .. } => {
                f(collection);
                f(body)
            }
            ExprKind::Unbox { expr, .. } | ExprKind::Unary { expr, .. } => f(expr),
            ExprKind::TryWith { body, handler, .. } => {
                f(body);
                f(handler)
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                f(lhs);
                f(rhs)
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut n = 1;
        self.for_each_child(&mut |c| n += c.size());
        n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StaticValue {
    Str(String),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticParam {
    pub name: Option<String>,
    pub value: StaticValue,
}

/// `type Alias = Provider<static params>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProviderDecl {
    pub alias: String,
    pub provider: String,
    pub params: Vec<StaticParam>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub rec: bool,
    pub pat: Pattern,
    pub params: Vec<Pattern>,
    pub value: SurfaceExpr,
    pub span: SourceSpan,
}

impl Binding {
    /// The name bound by a simple `let name ... =` binding.
    pub fn name(&self) -> Option<&str> {
        match &self.pat {
            Pattern::Var(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceModule {
    pub providers: Vec<ProviderDecl>,
    pub bindings: Vec<Binding>,
    /// The designated entry expression (`do expr`), if any.
    pub entry: Option<SurfaceExpr>,
}

impl SourceModule {
    pub fn without_spans(&self) -> SourceModule {
        SourceModule {
            providers: self
                .providers
                .iter()
                .map(|p| ProviderDecl {
                    span: SourceSpan::DUMMY,
                    ..p.clone()
                })
                .collect(),
            bindings: self
                .bindings
                .iter()
                .map(|b| Binding {
                    value: b.value.without_spans(),
                    span: SourceSpan::DUMMY,
                    ..b.clone()
                })
                .collect(),
            entry: self.entry.as_ref().map(SurfaceExpr::without_spans),
        }
    }

    pub fn provider(&self, alias: &str) -> Option<&ProviderDecl> {
        self.providers.iter().find(|p| p.alias == alias)
    }

    /// Visits every expression node in bindings and entry.
    pub fn walk(&self, f: &mut dyn FnMut(&SurfaceExpr)) {
        fn go(e: &SurfaceExpr, f: &mut dyn FnMut(&SurfaceExpr)) {
            f(e);
            e.for_each_child(&mut |c| go(c, f));
        }
        for b in &self.bindings {
            go(&b.value, f);
        }
        if let Some(e) = &self.entry {
            go(e, f);
        }
    }
}
