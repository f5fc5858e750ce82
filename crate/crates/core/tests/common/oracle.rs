//! A reference Hindley-Milner inference (classic algorithm W with an
//! explicit substitution) over its own term type, plus a random term
//! generator that prints MiniML source.

use std::collections::{BTreeSet, HashMap};

use mml_core::CoreType;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Con(&'static str, Vec<Ty>),
    Var(u32),
    Fun(Box<Ty>, Box<Ty>),
    Tuple(Vec<Ty>),
}

fn con(n: &'static str) -> Ty {
    Ty::Con(n, vec![])
}
fn fun(a: Ty, b: Ty) -> Ty {
    Ty::Fun(Box::new(a), Box::new(b))
}
fn list(t: Ty) -> Ty {
    Ty::Con("list", vec![t])
}

#[derive(Debug, Clone)]
pub enum Term {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(&'static str),
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Let(String, Box<Term>, Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    List(Vec<Term>),
    Bin(&'static str, Box<Term>, Box<Term>),
}

impl Term {
    pub fn source(&self) -> String {
        match self {
            Term::Int(i) => i.to_string(),
            Term::Float(x) => format!("{x:.1}"),
            Term::Bool(b) => b.to_string(),
            Term::Str(s) => format!("{s:?}"),
            Term::Var(x) => x.clone(),
            Term::Lam(x, b) => format!("(fun {x} -> {})", b.source()),
            Term::App(f, a) => format!("({} {})", f.source(), a.source()),
            Term::Let(x, e, b) => format!("(let {x} = {} in {})", e.source(), b.source()),
            Term::If(c, t, e) => format!("(if {} then {} else {})", c.source(), t.source(), e.source()),
            Term::Pair(a, b) => format!("({}, {})", a.source(), b.source()),
            Term::List(es) => format!("[{}]", es.iter().map(Term::source).collect::<Vec<_>>().join("; ")),
            Term::Bin(op, a, b) => format!("({} {op} {})", a.source(), b.source()),
        }
    }

    fn is_value(&self) -> bool {
        match self {
            Term::Int(_) | Term::Float(_) | Term::Bool(_) | Term::Str(_) | Term::Var(_) | Term::Lam(..) => true,
            Term::Pair(a, b) => a.is_value() && b.is_value(),
            Term::List(es) => es.iter().all(Term::is_value),
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
struct Scheme(Vec<u32>, Ty);

fn builtins() -> Vec<(&'static str, Scheme)> {
    let a = || Ty::Var(1_000_000);
    let b = || Ty::Var(1_000_001);
    let q = vec![1_000_000, 1_000_001];
    vec![
        (
            "List.map",
            Scheme(q.clone(), fun(fun(a(), b()), fun(list(a()), list(b())))),
        ),
        ("List.length", Scheme(q.clone(), fun(list(a()), con("int")))),
        ("List.rev", Scheme(q.clone(), fun(list(a()), list(a())))),
        ("fst", Scheme(q.clone(), fun(Ty::Tuple(vec![a(), b()]), a()))),
        ("snd", Scheme(q.clone(), fun(Ty::Tuple(vec![a(), b()]), b()))),
        ("Some", Scheme(q.clone(), fun(a(), Ty::Con("option", vec![a()])))),
        ("None", Scheme(q.clone(), Ty::Con("option", vec![a()]))),
        ("not", Scheme(vec![], fun(con("bool"), con("bool")))),
        ("ignore", Scheme(q, fun(a(), con("unit")))),
    ]
}

pub const BUILTIN_NAMES: &[&str] = &[
    "List.map",
    "List.length",
    "List.rev",
    "fst",
    "snd",
    "Some",
    "None",
    "not",
    "ignore",
];

#[derive(Default)]
struct W {
    subst: HashMap<u32, Ty>,
    next: u32,
}

impl W {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next)
    }

    fn apply(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.subst.get(v) {
                Some(u) => self.apply(u),
                None => t.clone(),
            },
            Ty::Con(n, ts) => Ty::Con(n, ts.iter().map(|t| self.apply(t)).collect()),
            Ty::Fun(a, b) => fun(self.apply(a), self.apply(b)),
            Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| self.apply(t)).collect()),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), String> {
        let (a, b) = (self.apply(a), self.apply(b));
        match (&a, &b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if ftv(t).contains(x) {
                    return Err("occurs check".into());
                }
                self.subst.insert(*x, t.clone());
                Ok(())
            }
            (Ty::Con(m, xs), Ty::Con(n, ys)) if m == n && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify(x, y))
            }
            (Ty::Fun(a1, b1), Ty::Fun(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            (Ty::Tuple(xs), Ty::Tuple(ys)) if xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.unify(x, y))
            }
            _ => Err(format!("cannot unify {a:?} with {b:?}")),
        }
    }

    fn instantiate(&mut self, s: &Scheme) -> Ty {
        let map: HashMap<u32, Ty> = s.0.iter().map(|v| (*v, self.fresh())).collect();
        rename(&s.1, &map)
    }

    fn infer(&mut self, env: &[(String, Scheme)], t: &Term) -> Result<Ty, String> {
        Ok(match t {
            Term::Int(_) => con("int"),
            Term::Float(_) => con("float"),
            Term::Bool(_) => con("bool"),
            Term::Str(_) => con("string"),
            Term::Var(x) => {
                let s = env
                    .iter()
                    .rev()
                    .find(|(n, _)| n == x)
                    .ok_or(format!("unbound {x}"))?
                    .1
                    .clone();
                self.instantiate(&s)
            }
            Term::Lam(x, body) => {
                let a = self.fresh();
                let mut env = env.to_vec();
                env.push((x.clone(), Scheme(vec![], a.clone())));
                let b = self.infer(&env, body)?;
                fun(a, b)
            }
            Term::App(f, arg) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, arg)?;
                let r = self.fresh();
                self.unify(&tf, &fun(ta, r.clone()))?;
                r
            }
            Term::Let(x, e, body) => {
                let te = self.infer(env, e)?;
                let s = if e.is_value() {
                    let te = self.apply(&te);
                    let env_vars: BTreeSet<u32> = env
                        .iter()
                        .flat_map(|(_, Scheme(q, t))| {
                            let t = self.apply(t);
                            ftv(&t).into_iter().filter(|v| !q.contains(v)).collect::<Vec<_>>()
                        })
                        .collect();
                    Scheme(ftv(&te).into_iter().filter(|v| !env_vars.contains(v)).collect(), te)
                } else {
                    Scheme(vec![], te)
                };
                let mut env = env.to_vec();
                env.push((x.clone(), s));
                self.infer(&env, body)?
            }
            Term::If(c, a, b) => {
                let tc = self.infer(env, c)?;
                self.unify(&tc, &con("bool"))?;
                let ta = self.infer(env, a)?;
                let tb = self.infer(env, b)?;
                self.unify(&ta, &tb)?;
                ta
            }
            Term::Pair(a, b) => Ty::Tuple(vec![self.infer(env, a)?, self.infer(env, b)?]),
            Term::List(es) => {
                let el = self.fresh();
                for e in es {
                    let t = self.infer(env, e)?;
                    self.unify(&el, &t)?;
                }
                list(el)
            }
            Term::Bin(op, a, b) => {
                let ta = self.infer(env, a)?;
                let tb = self.infer(env, b)?;
                let operand = |n| Some(con(n));
                let (arg, res) = match *op {
                    "+" | "*" => (operand("int"), con("int")),
                    "+." => (operand("float"), con("float")),
                    "^" => (operand("string"), con("string")),
                    "&&" | "||" => (operand("bool"), con("bool")),
                    "=" | "<" => (None, con("bool")),
                    "::" => {
                        self.unify(&list(ta.clone()), &tb)?;
                        return Ok(list(ta));
                    }
                    other => panic!("operator {other}"),
                };
                match arg {
                    Some(t) => {
                        self.unify(&ta, &t)?;
                        self.unify(&tb, &t)?;
                    }
                    None => self.unify(&ta, &tb)?,
                }
                res
            }
        })
    }
}

fn rename(t: &Ty, map: &HashMap<u32, Ty>) -> Ty {
    match t {
        Ty::Var(v) => map.get(v).cloned().unwrap_or(Ty::Var(*v)),
        Ty::Con(n, ts) => Ty::Con(n, ts.iter().map(|t| rename(t, map)).collect()),
        Ty::Fun(a, b) => fun(rename(a, map), rename(b, map)),
        Ty::Tuple(ts) => Ty::Tuple(ts.iter().map(|t| rename(t, map)).collect()),
    }
}

fn ftv(t: &Ty) -> Vec<u32> {
    fn go(t: &Ty, out: &mut Vec<u32>) {
        match t {
            Ty::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            Ty::Con(_, ts) | Ty::Tuple(ts) => ts.iter().for_each(|t| go(t, out)),
            Ty::Fun(a, b) => {
                go(a, out);
                go(b, out)
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

/// The principal type with variables numbered by first occurrence, and
/// whether it is generalized (top-level value restriction).
pub fn reference_type(t: &Term) -> Result<(String, bool), String> {
    let env: Vec<(String, Scheme)> = builtins().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    let mut w = W::default();
    let ty = w.infer(&env, t)?;
    let ty = w.apply(&ty);
    let generalized = t.is_value() && !ftv(&ty).is_empty();
    Ok((render(&ty), generalized))
}

/// Converts an implementation type into the oracle's representation.
pub fn from_core(t: &CoreType) -> Ty {
    match t {
        CoreType::Int => con("int"),
        CoreType::Float => con("float"),
        CoreType::Bool => con("bool"),
        CoreType::String => con("string"),
        CoreType::Unit => con("unit"),
        CoreType::Object => con("obj"),
        CoreType::Function(a, b) => fun(from_core(a), from_core(b)),
        CoreType::Tuple(ts) => Ty::Tuple(ts.iter().map(from_core).collect()),
        CoreType::List(t) => list(from_core(t)),
        CoreType::Array(t) => Ty::Con("array", vec![from_core(t)]),
        CoreType::Async(t) => Ty::Con("async", vec![from_core(t)]),
        CoreType::Option(t) => Ty::Con("option", vec![from_core(t)]),
        CoreType::Named(id) => Ty::Con(Box::leak(id.0.clone().into_boxed_str()), vec![]),
        CoreType::Var(v) => Ty::Var(v.0),
    }
}

/// Renders with variables renamed `t0, t1, ...` by first occurrence.
pub fn render(t: &Ty) -> String {
    let vars = ftv(t);
    fn go(t: &Ty, vars: &[u32], out: &mut String) {
        match t {
            Ty::Var(v) => out.push_str(&format!("t{}", vars.iter().position(|x| x == v).unwrap())),
            Ty::Con(n, ts) => {
                out.push_str(n);
                if !ts.is_empty() {
                    out.push('<');
                    for (i, t) in ts.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        go(t, vars, out);
                    }
                    out.push('>');
                }
            }
            Ty::Fun(a, b) => {
                out.push('(');
                go(a, vars, out);
                out.push_str(" -> ");
                go(b, vars, out);
                out.push(')');
            }
            Ty::Tuple(ts) => {
                out.push('(');
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" * ");
                    }
                    go(t, vars, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &vars, &mut out);
    out
}

const NAMES: &[&str] = &["x", "y", "f", "g", "n"];

/// A random closed term of roughly the given depth. Variables are drawn
/// from the binders in scope and the builtins, so many terms are ill-typed
/// but none are unbound.
pub fn gen_term(rng: &mut impl Rng, depth: u32, scope: &mut Vec<String>) -> Term {
    let leaf = |rng: &mut dyn rand::RngCore, scope: &[String]| -> Term {
        match rng.gen_range(0..7) {
            0 => Term::Int(rng.gen_range(0..10)),
            1 => Term::Bool(rng.gen_bool(0.5)),
            2 => Term::Str(["a", "b", ""][rng.gen_range(0..3)]),
            3 => Term::Float(f64::from(rng.gen_range(0..10)) / 2.0),
            4 => Term::Var(BUILTIN_NAMES[rng.gen_range(0..BUILTIN_NAMES.len())].to_string()),
            _ if !scope.is_empty() => Term::Var(scope[rng.gen_range(0..scope.len())].clone()),
            _ => Term::Int(rng.gen_range(0..10)),
        }
    };
    if depth == 0 {
        return leaf(rng, scope);
    }
    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 | 1 => {
            let x = NAMES[rng.gen_range(0..NAMES.len())].to_string();
            scope.push(x.clone());
            let b = gen_term(rng, d, scope);
            scope.pop();
            Term::Lam(x, Box::new(b))
        }
        2 | 3 => Term::App(Box::new(gen_term(rng, d, scope)), Box::new(gen_term(rng, d, scope))),
        4 | 5 => {
            let x = NAMES[rng.gen_range(0..NAMES.len())].to_string();
            let e = gen_term(rng, d, scope);
            scope.push(x.clone());
            let b = gen_term(rng, d, scope);
            scope.pop();
            Term::Let(x, Box::new(e), Box::new(b))
        }
        6 => Term::If(
            Box::new(gen_term(rng, d, scope)),
            Box::new(gen_term(rng, d, scope)),
            Box::new(gen_term(rng, d, scope)),
        ),
        7 => Term::Pair(Box::new(gen_term(rng, d, scope)), Box::new(gen_term(rng, d, scope))),
        8 => Term::List((0..rng.gen_range(0..3)).map(|_| gen_term(rng, d, scope)).collect()),
        9 | 10 => {
            let op = ["+", "*", "+.", "^", "&&", "||", "=", "<", "::"][rng.gen_range(0..9)];
            Term::Bin(op, Box::new(gen_term(rng, d, scope)), Box::new(gen_term(rng, d, scope)))
        }
        _ => leaf(rng, scope),
    }
}

/// Outcome of comparing the implementation against the oracle on one term.
pub enum Agreement {
    BothTyped,
    BothRejected,
    Disagree(String),
}

pub fn compare(term: &Term) -> Agreement {
    let src = term.source();
    let expected = reference_type(term);
    let actual = mml_core::syntax::parse_expr(&src)
        .map_err(|d| format!("parse: {}", d[0]))
        .and_then(|e| mml_core::typecheck::infer_expr_scheme(&e).map_err(|d| d.to_string()))
        .map(|s| (render(&from_core(&s.ty)), !s.vars.is_empty()));
    match (expected, actual) {
        (Ok(a), Ok(b)) if a == b => Agreement::BothTyped,
        (Err(_), Err(e)) if !e.starts_with("parse:") => Agreement::BothRejected,
        (a, b) => Agreement::Disagree(format!("{src}\n  oracle: {a:?}\n  mml:    {b:?}")),
    }
}
