//! Printing then parsing any expression gives the expression back.

use mml_core::syntax::{parse_expr, print_expr, BinOp, ExprKind, Literal, NamedArg, Pattern, SurfaceExpr, UnOp};
use mml_core::{CoreType, SourceSpan};
use proptest::prelude::*;

fn mk(kind: ExprKind) -> SurfaceExpr {
    SurfaceExpr::new(kind, SourceSpan::default())
}

fn bx(e: SurfaceExpr) -> Box<SurfaceExpr> {
    Box::new(e)
}

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "xs", "foo", "v1", "acc'"]).prop_map(String::from)
}

fn member() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "x",
        "Name",
        "push",
        "Czech Republic",
        "School enrollment, tertiary (% gross)",
    ])
    .prop_map(String::from)
}

fn pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![
        3 => ident().prop_map(Pattern::Var),
        1 => Just(Pattern::Wildcard),
        1 => Just(Pattern::Unit),
    ];
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop::collection::vec(inner, 2..=3).prop_map(Pattern::Tuple)
    })
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        (0i64..100_000).prop_map(Literal::Int),
        prop::sample::select(vec![0.0, 0.5, 1.25, 3.0, 1e-7, 2.5e20]).prop_map(Literal::Float),
        "[a-z \"\\\\\n]{0,6}".prop_map(Literal::String),
        any::<bool>().prop_map(Literal::Bool),
        Just(Literal::Unit),
    ]
}

fn expr() -> impl Strategy<Value = SurfaceExpr> {
    let leaf = prop_oneof![
        literal().prop_map(|l| mk(ExprKind::Lit(l))),
        ident().prop_map(|n| mk(ExprKind::Ident(n))),
    ];
    leaf.prop_recursive(4, 40, 4, |e| {
        let op = prop::sample::select(BinOp::ALL.to_vec());
        let ty = prop::sample::select(vec![CoreType::Int, CoreType::Bool, CoreType::String]);
        prop_oneof![
            (prop::collection::vec(pattern(), 1..=2), e.clone())
                .prop_map(|(params, b)| mk(ExprKind::Lambda { params, body: bx(b) })),
            (e.clone(), e.clone()).prop_map(|(f, a)| mk(ExprKind::App(bx(f), bx(a)))),
            (ident(), prop::collection::vec(pattern(), 0..=2), e.clone(), e.clone()).prop_map(|(n, params, v, b)| {
                mk(ExprKind::Let {
                    rec: false,
                    pat: Pattern::Var(n),
                    params,
                    value: bx(v),
                    body: bx(b),
                })
            }),
            (e.clone(), e.clone(), prop::option::of(e.clone())).prop_map(|(c, t, f)| mk(ExprKind::If {
                cond: bx(c),
                then_branch: bx(t),
                else_branch: f.map(bx),
            })),
            prop::collection::vec(e.clone(), 2..=3).prop_map(|es| mk(ExprKind::Tuple(es))),
            prop::collection::vec(e.clone(), 0..=3).prop_map(|es| mk(ExprKind::List(es))),
            prop::collection::vec(e.clone(), 0..=3).prop_map(|es| mk(ExprKind::Array(es))),
            (e.clone(), member()).prop_map(|(r, name)| mk(ExprKind::Member { receiver: bx(r), name })),
            (e.clone(), member(), e.clone()).prop_map(|(r, name, v)| mk(ExprKind::MemberSet {
                receiver: bx(r),
                name,
                value: bx(v),
            })),
            (
                e.clone(),
                member(),
                prop::collection::vec(e.clone(), 0..=2),
                prop::option::of((ident(), e.clone()))
            )
                .prop_map(|(r, name, args, named)| mk(ExprKind::MethodCall {
                    receiver: bx(r),
                    name,
                    args,
                    named: named
                        .map(|(name, value)| NamedArg { name, value })
                        .into_iter()
                        .collect(),
                })),
            e.clone().prop_map(|b| mk(ExprKind::Async(bx(b)))),
            (pattern(), e.clone(), e.clone()).prop_map(|(pat, v, b)| mk(ExprKind::LetBang {
                pat,
                value: bx(v),
                body: bx(b),
            })),
            e.clone().prop_map(|b| mk(ExprKind::Return(bx(b)))),
            (pattern(), e.clone(), e.clone()).prop_map(|(pat, c, b)| mk(ExprKind::For {
                pat,
                collection: bx(c),
                body: bx(b),
            })),
            (ty, e.clone()).prop_map(|(target, x)| mk(ExprKind::Unbox { target, expr: bx(x) })),
            (e.clone(), e.clone()).prop_map(|(a, b)| mk(ExprKind::Seq(bx(a), bx(b)))),
            (e.clone(), pattern(), e.clone()).prop_map(|(b, pat, h)| mk(ExprKind::TryWith {
                body: bx(b),
                pat,
                handler: bx(h),
            })),
            (op, e.clone(), e.clone()).prop_map(|(op, l, r)| mk(ExprKind::Binary {
                op,
                lhs: bx(l),
                rhs: bx(r)
            })),
            (prop::sample::select(vec![UnOp::Neg, UnOp::FNeg]), e.clone())
                .prop_map(|(op, x)| mk(ExprKind::Unary { op, expr: bx(x) })),
        ]
    })
}

/// Wraps `let!` and `return` found outside statement position of an async
/// block in `async { }`, so the tree is one the parser can produce.
fn computation_ok(e: SurfaceExpr, comp: bool) -> SurfaceExpr {
    let k = |x: Box<SurfaceExpr>, c: bool| bx(computation_ok(*x, c));
    let kind = match e.kind {
        ExprKind::LetBang { .. } | ExprKind::Return(_) if !comp => {
            return mk(ExprKind::Async(bx(computation_ok(e, true))));
        }
        ExprKind::Async(b) => ExprKind::Async(k(b, true)),
        ExprKind::LetBang { pat, value, body } => ExprKind::LetBang {
            pat,
            value: k(value, false),
            body: k(body, comp),
        },
        ExprKind::Return(x) => ExprKind::Return(k(x, false)),
        ExprKind::Let {
            rec,
            pat,
            params,
            value,
            body,
        } => ExprKind::Let {
            rec,
            pat,
            params,
            value: k(value, false),
            body: k(body, comp),
        },
        ExprKind::Seq(a, b) => ExprKind::Seq(k(a, comp), k(b, comp)),
        ExprKind::If {
            cond,
            then_branch,
            else_branch,
        } => ExprKind::If {
            cond: k(cond, false),
            then_branch: k(then_branch, comp),
            else_branch: else_branch.map(|x| k(x, comp)),
        },
        ExprKind::For { pat, collection, body } => ExprKind::For {
            pat,
            collection: k(collection, false),
            body: k(body, comp),
        },
        ExprKind::TryWith { body, pat, handler } => ExprKind::TryWith {
            body: k(body, comp),
            pat,
            handler: k(handler, comp),
        },
        mut other => {
            let mut x = mk(other);
            x.for_each_child_mut(&mut |c| {
                *c = computation_ok(std::mem::replace(c, mk(ExprKind::Lit(Literal::Unit))), false)
            });
            other = x.kind;
            other
        }
    };
    mk(kind)
}

fn valid_expr() -> impl Strategy<Value = SurfaceExpr> {
    expr().prop_map(|e| computation_ok(e, false))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_then_parse_is_identity(e in valid_expr()) {
        let printed = print_expr(&e);
        let back = parse_expr(&printed).map_err(|d| TestCaseError::fail(format!("{printed}\n{}", d[0])))?;
        prop_assert_eq!(back.without_spans(), e, "{}", printed);
    }

    #[test]
    fn printing_is_a_fixpoint(e in valid_expr()) {
        let once = print_expr(&e);
        let twice = print_expr(&parse_expr(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn fixture_programs_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/programs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        let a = mml_core::syntax::parse_module(&src).unwrap().without_spans();
        let printed = mml_core::syntax::pretty_print(&a);
        let b = mml_core::syntax::parse_module(&printed).unwrap().without_spans();
        assert_eq!(a, b, "{}", path.display());
    }
}
