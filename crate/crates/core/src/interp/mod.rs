//! Reference interpreter for desugared core modules.
//!
//! Call-by-value over tagged [`Value`]s. Runtime-library calls read the
//! world snapshot; Emit nodes go to a recording [`StubHost`]. Async
//! computations run as tasks on one logical thread: a task runs until it
//! reaches a pending fetch, then waits in a queue ordered by completion
//! time and start order (FIFO for equal times). With the default zero
//! latency every fetch completes in the order it was issued.

mod template;
mod value;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::core_ir::{BuilderKind, CoreExpr, CoreKind, CoreModule};
use crate::prelude;
use crate::syntax::{BinOp, Literal, Pattern, UnOp};
use crate::world::WorldSnapshot;

pub use value::{Closure, Comp, Env, Handle, JsObject, PrimApp, RuntimeFailure, Value};

/// Simulated fetch latency in scheduler ticks, per (country, indicator).
pub type LatencyFn = Arc<dyn Fn(&str, &str) -> u64 + Send + Sync>;

/// Stand-in for the host page: every object is a recording stub.
#[derive(Clone)]
pub struct StubHost {
    /// Fixed results for method names; other calls return a fresh stub.
    pub method_results: BTreeMap<String, Value>,
}

impl Default for StubHost {
    /// Checkbox-style `is(...)` queries answer `true`.
    fn default() -> Self {
        let mut method_results = BTreeMap::new();
        method_results.insert("is".to_string(), Value::Bool(true));
        StubHost { method_results }
    }
}

#[derive(Clone)]
pub struct InterpOptions {
    pub host: StubHost,
    pub latency: Option<LatencyFn>,
    pub max_steps: u64,
    /// Evaluate this top-level name instead of the `do` entry.
    pub entry: Option<String>,
}

impl Default for InterpOptions {
    fn default() -> Self {
        InterpOptions {
            host: StubHost::default(),
            latency: None,
            max_steps: 5_000_000,
            entry: None,
        }
    }
}

/// Result of a run plus its effect trace.
#[derive(Debug, Clone)]
pub struct Run {
    pub result: Result<Value, RuntimeFailure>,
    pub trace: Vec<String>,
}

const MAX_DEPTH: usize = 1_500;

pub fn interpret(cm: &CoreModule, w: &WorldSnapshot) -> Result<Value, RuntimeFailure> {
    run(cm, w, &InterpOptions::default()).result
}

pub fn run(cm: &CoreModule, w: &WorldSnapshot, opts: &InterpOptions) -> Run {
    let mut m = Machine {
        world: w,
        host: opts.host.clone(),
        latency: opts.latency.clone(),
        max_steps: opts.max_steps,
        steps: 0,
        depth: 0,
        trace: Vec::new(),
        globals: BTreeMap::new(),
        queue: BTreeMap::new(),
        tick: 0,
        seq: 0,
        next_task: 1,
        entry_result: None,
        uncaught: None,
    };
    let result = m.run_module(cm, opts.entry.as_deref());
    Run { result, trace: m.trace }
}

/// Every (country, indicator) pair the module may access: each
/// `GetCountry` code literal paired with each indicator code literal.
pub fn trace_accessed_pairs(cm: &CoreModule) -> BTreeSet<(String, String)> {
    let mut countries = BTreeSet::new();
    let mut indicators = BTreeSet::new();
    for e in cm.exprs() {
        e.walk(&mut |x| {
            if let CoreKind::RuntimeCall { symbol, args } = &x.kind {
                let code = args.get(1).and_then(|a| match &a.kind {
                    CoreKind::Lit(Literal::String(s)) => Some(s.clone()),
                    _ => None,
                });
                match (symbol.as_str(), code) {
                    ("GetCountry", Some(c)) => {
                        countries.insert(c);
                    }
                    ("GetIndicator" | "GetIndicatorOpt" | "AsyncGetIndicator", Some(i)) => {
                        indicators.insert(i);
                    }
                    _ => {}
                }
            }
        });
    }
    countries
        .iter()
        .flat_map(|c| indicators.iter().map(move |i| (c.clone(), i.clone())))
        .collect()
}

type R<T> = Result<T, RuntimeFailure>;

fn internal(msg: impl Into<String>) -> RuntimeFailure {
    RuntimeFailure::Internal(msg.into())
}

struct Task {
    id: usize,
    stack: Vec<Frame>,
}

enum Frame {
    Bind(Value),
    For(VecDeque<Value>, Value),
    Catch(Value),
}

struct Pending {
    task: Task,
    country: String,
    indicator: String,
}

struct Machine<'w> {
    world: &'w WorldSnapshot,
    host: StubHost,
    latency: Option<LatencyFn>,
    max_steps: u64,
    steps: u64,
    depth: usize,
    trace: Vec<String>,
    globals: BTreeMap<String, Value>,
    queue: BTreeMap<(u64, u64), Pending>,
    tick: u64,
    seq: u64,
    next_task: usize,
    entry_result: Option<R<Value>>,
    uncaught: Option<RuntimeFailure>,
}

fn as_comp(v: Value) -> R<Arc<Comp>> {
    match v {
        Value::Async(c) => Ok(c),
        other => Err(internal(format!(
            "expected an async computation, found {}",
            other.tag()
        ))),
    }
}

fn bind_pattern(env: &Env, pat: &Pattern, v: Value) -> R<Env> {
    match pat {
        Pattern::Wildcard | Pattern::Unit => Ok(env.clone()),
        Pattern::Var(n) => Ok(env.bind(n.clone(), v)),
        Pattern::Tuple(ps) => match &v {
            Value::Tuple(vs) if vs.len() == ps.len() => {
                let mut env = env.clone();
                for (p, v) in ps.iter().zip(vs.iter()) {
                    env = bind_pattern(&env, p, v.clone())?;
                }
                Ok(env)
            }
            other => Err(internal(format!("tuple pattern against {}", other.tag()))),
        },
    }
}

impl<'w> Machine<'w> {
    fn tick_step(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.max_steps {
            Err(internal("step limit exceeded"))
        } else {
            Ok(())
        }
    }

    fn run_module(&mut self, cm: &CoreModule, entry: Option<&str>) -> R<Value> {
        let mut env = Env::default();
        for b in &cm.bindings {
            let v = if b.rec {
                self.eval_rec(&b.pat, &b.value, &env)?
            } else {
                self.eval(&b.value, &env)?
            };
            env = bind_pattern(&env, &b.pat, v)?;
        }
        let v = match (entry, &cm.entry) {
            (Some(name), _) => env
                .lookup(name)
                .cloned()
                .ok_or_else(|| internal(format!("no top-level binding `{name}`")))?,
            (None, Some(e)) => self.eval(e, &env)?,
            (None, None) => Value::Unit,
        };
        let result = if let Value::Async(_) = v {
            // The host starts an async entry immediately and waits for it.
            self.drive(
                Task {
                    id: 0,
                    stack: Vec::new(),
                },
                Ok(v),
            );
            self.drain();
            self.entry_result
                .take()
                .unwrap_or_else(|| Err(internal("entry computation never completed")))
        } else {
            self.drain();
            Ok(v)
        };
        match (result, self.uncaught.take()) {
            (Err(f), _) | (Ok(_), Some(f)) => Err(f),
            (Ok(v), None) => Ok(v),
        }
    }

    fn eval_rec(&mut self, pat: &Pattern, value: &CoreExpr, env: &Env) -> R<Value> {
        match (pat, &value.kind) {
            (Pattern::Var(name), CoreKind::Lambda { param, body }) => Ok(Value::Closure(Arc::new(Closure {
                param: param.clone(),
                body: Arc::new((**body).clone()),
                env: env.clone(),
                rec_name: Some(name.clone()),
            }))),
            _ => self.eval(value, env),
        }
    }

    fn eval(&mut self, e: &CoreExpr, env: &Env) -> R<Value> {
        self.tick_step()?;
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            self.depth -= 1;
            return Err(internal("evaluation depth exceeded"));
        }
        let r = self.eval_inner(e, env);
        self.depth -= 1;
        r
    }

    fn eval_inner(&mut self, e: &CoreExpr, env: &Env) -> R<Value> {
        match &e.kind {
            CoreKind::Lit(l) => Ok(match l {
                Literal::Int(i) => Value::Int(*i),
                Literal::Float(x) => Value::Float(*x),
                Literal::String(s) => Value::str(s),
                Literal::Bool(b) => Value::Bool(*b),
                Literal::Unit => Value::Unit,
            }),
            CoreKind::Undefined => Ok(Value::Undefined),
            CoreKind::Var(n) => env
                .lookup(n)
                .cloned()
                .ok_or_else(|| internal(format!("unbound variable `{n}`"))),
            CoreKind::Prim(n) => {
                let p = prelude::lookup(n).ok_or_else(|| internal(format!("unknown prelude function `{n}`")))?;
                if p.arity == 0 {
                    self.exec_prim(n, Vec::new())
                } else {
                    Ok(Value::Prim(Arc::new(PrimApp {
                        name: n.clone(),
                        arity: p.arity,
                        args: Vec::new(),
                    })))
                }
            }
            CoreKind::Lambda { param, body } => Ok(Value::Closure(Arc::new(Closure {
                param: param.clone(),
                body: Arc::new((**body).clone()),
                env: env.clone(),
                rec_name: None,
            }))),
            CoreKind::App(f, a) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                self.apply(fv, av)
            }
            CoreKind::Let { rec, pat, value, body } => {
                let v = if *rec {
                    self.eval_rec(pat, value, env)?
                } else {
                    self.eval(value, env)?
                };
                let env2 = bind_pattern(env, pat, v)?;
                self.eval(body, &env2)
            }
            CoreKind::If {
                cond,
                then_branch,
                else_branch,
            } => match self.eval(cond, env)? {
                Value::Bool(true) => self.eval(then_branch, env),
                Value::Bool(false) => match else_branch {
                    Some(e) => self.eval(e, env),
                    None => Ok(Value::Unit),
                },
                other => Err(internal(format!("if condition is {}", other.tag()))),
            },
            CoreKind::Tuple(es) => Ok(Value::tuple(self.eval_all(es, env)?)),
            CoreKind::List(es) => Ok(Value::list(self.eval_all(es, env)?)),
            CoreKind::Array(es) => Ok(Value::array(self.eval_all(es, env)?)),
            CoreKind::Seq(a, b) => {
                self.eval(a, env)?;
                self.eval(b, env)
            }
            CoreKind::For { pat, collection, body } => {
                let items = self
                    .eval(collection, env)?
                    .as_items()
                    .ok_or_else(|| internal("for over a non-collection"))?;
                for it in items {
                    let env2 = bind_pattern(env, pat, it)?;
                    self.eval(body, &env2)?;
                }
                Ok(Value::Unit)
            }
            CoreKind::TryWith { body, pat, handler } => match self.eval(body, env) {
                Err(f) if f.is_catchable() => {
                    let env2 = bind_pattern(env, pat, Value::str(&f.message()))?;
                    self.eval(handler, &env2)
                }
                other => other,
            },
            CoreKind::Unbox(x) => {
                let v = self.eval(x, env)?;
                if v.has_type(&e.ty) {
                    Ok(v)
                } else {
                    Err(RuntimeFailure::Cast {
                        expected: e.ty.to_string(),
                        found: v.tag().to_string(),
                    })
                }
            }
            CoreKind::Binary { op, lhs, rhs } => self.binary(*op, lhs, rhs, env),
            CoreKind::Unary { op, expr } => match (op, self.eval(expr, env)?) {
                (UnOp::Neg, Value::Int(i)) => Ok(Value::Int(i.wrapping_neg())),
                (UnOp::FNeg, Value::Float(x)) => Ok(Value::Float(-x)),
                (_, v) => Err(internal(format!("negation of {}", v.tag()))),
            },
            CoreKind::RuntimeCall { symbol, args } => {
                let vs = self.eval_all(args, env)?;
                self.runtime_call(symbol, vs)
            }
            CoreKind::EmitCall { name, args, .. } => {
                let vs = self.eval_all(args, env)?;
                self.emit_call(name, vs)
            }
            CoreKind::EmitPropertyGet { is_static, name, args } => {
                let vs = self.eval_all(args, env)?;
                self.property_get(*is_static, name, vs)
            }
            CoreKind::EmitPropertySet { name, args, .. } => {
                let vs = self.eval_all(args, env)?;
                self.property_set(name, vs)
            }
            CoreKind::JsTemplate { text, args } => {
                let vs = self.eval_all(args, env)?;
                template::eval(text, &vs)
            }
            CoreKind::BuilderOp { op, args } => {
                let mut vs = self.eval_all(args, env)?;
                let mut take = || {
                    if vs.is_empty() {
                        Err(internal("builder operation arity"))
                    } else {
                        Ok(vs.remove(0))
                    }
                };
                let comp = match op {
                    BuilderKind::Return => Comp::Return(take()?),
                    BuilderKind::Delay => Comp::Delay(take()?),
                    BuilderKind::Bind => Comp::Bind(take()?, take()?),
                    BuilderKind::For => {
                        let items = take()?
                            .as_items()
                            .ok_or_else(|| internal("for over a non-collection"))?;
                        Comp::For(items, take()?)
                    }
                    BuilderKind::Catch => Comp::Catch(take()?, take()?),
                    BuilderKind::StartImmediate => {
                        let c = take()?;
                        self.start_immediate(c);
                        return Ok(Value::Unit);
                    }
                };
                Ok(Value::Async(Arc::new(comp)))
            }
            CoreKind::MemberGet { .. }
            | CoreKind::MemberCall { .. }
            | CoreKind::MemberSet { .. }
            | CoreKind::AsyncBlock(_)
            | CoreKind::LetBang { .. }
            | CoreKind::Return(_) => Err(internal("module was not erased and desugared")),
        }
    }

    fn eval_all(&mut self, es: &[CoreExpr], env: &Env) -> R<Vec<Value>> {
        es.iter().map(|e| self.eval(e, env)).collect()
    }

    fn apply(&mut self, f: Value, arg: Value) -> R<Value> {
        match f {
            Value::Closure(c) => {
                let mut env = c.env.clone();
                if let Some(n) = &c.rec_name {
                    env = env.bind(n.clone(), Value::Closure(c.clone()));
                }
                let env = bind_pattern(&env, &c.param, arg)?;
                self.eval(&c.body, &env)
            }
            Value::Prim(p) => {
                let mut args = p.args.clone();
                args.push(arg);
                if args.len() == p.arity {
                    self.exec_prim(&p.name, args)
                } else {
                    Ok(Value::Prim(Arc::new(PrimApp {
                        name: p.name.clone(),
                        arity: p.arity,
                        args,
                    })))
                }
            }
            other => Err(internal(format!("cannot apply a {}", other.tag()))),
        }
    }

    fn binary(&mut self, op: BinOp, lhs: &CoreExpr, rhs: &CoreExpr, env: &Env) -> R<Value> {
        if op == BinOp::And || op == BinOp::Or {
            let l = self.eval(lhs, env)?;
            return match (op, l) {
                (BinOp::And, Value::Bool(false)) => Ok(Value::Bool(false)),
                (BinOp::Or, Value::Bool(true)) => Ok(Value::Bool(true)),
                (_, Value::Bool(_)) => self.eval(rhs, env),
                (_, v) => Err(internal(format!("boolean operator on {}", v.tag()))),
            };
        }
        let l = self.eval(lhs, env)?;
        let r = self.eval(rhs, env)?;
        use Value::{Float as F, Int as I};
        Ok(match (op, &l, &r) {
            (BinOp::Add, I(a), I(b)) => I(a.wrapping_add(*b)),
            (BinOp::Sub, I(a), I(b)) => I(a.wrapping_sub(*b)),
            (BinOp::Mul, I(a), I(b)) => I(a.wrapping_mul(*b)),
            (BinOp::Div | BinOp::Mod, I(_), I(0)) => return Err(RuntimeFailure::DivideByZero),
            (BinOp::Div, I(a), I(b)) => I(a.wrapping_div(*b)),
            (BinOp::Mod, I(a), I(b)) => I(a.wrapping_rem(*b)),
            (BinOp::FAdd, F(a), F(b)) => F(a + b),
            (BinOp::FSub, F(a), F(b)) => F(a - b),
            (BinOp::FMul, F(a), F(b)) => F(a * b),
            (BinOp::FDiv, F(a), F(b)) => F(a / b),
            (BinOp::Concat, Value::Str(a), Value::Str(b)) => Value::str(&format!("{a}{b}")),
            (BinOp::Eq, _, _) => Value::Bool(l == r),
            (BinOp::Ne, _, _) => Value::Bool(l != r),
            (BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge, _, _) => {
                let ord = compare(&l, &r).ok_or_else(|| internal(format!("cannot compare {}", l.tag())))?;
                Value::Bool(match op {
                    BinOp::Lt => ord.is_lt(),
                    BinOp::Gt => ord.is_gt(),
                    BinOp::Le => ord.is_le(),
                    _ => ord.is_ge(),
                })
            }
            (BinOp::Cons, _, Value::List(xs)) => {
                let mut v = Vec::with_capacity(xs.len() + 1);
                v.push(l.clone());
                v.extend(xs.iter().cloned());
                Value::list(v)
            }
            _ => {
                return Err(internal(format!(
                    "operator {} on {} and {}",
                    op.symbol(),
                    l.tag(),
                    r.tag()
                )))
            }
        })
    }

    fn runtime_call(&mut self, symbol: &str, args: Vec<Value>) -> R<Value> {
        let code = |i: usize| match args.get(i) {
            Some(Value::Str(s)) => Ok(s.to_string()),
            _ => Err(internal(format!("{symbol} expects a code argument"))),
        };
        let country_of = |v: Option<&Value>| match v {
            Some(Value::Handle(Handle::Country(c))) => Ok(c.clone()),
            _ => Err(internal(format!("{symbol} expects a country handle"))),
        };
        match symbol {
            "GetCountries" => Ok(Value::Handle(Handle::Countries)),
            // Countries resolve lazily: a missing country surfaces when one
            // of its indicators is read, keyed by the pair.
            "GetCountry" => Ok(Value::Handle(Handle::Country(code(1)?))),
            "GetIndicator" => {
                let (c, i) = (country_of(args.first())?, code(1)?);
                self.read(&c, &i).map(|s| Value::series(&s))
            }
            "GetIndicatorOpt" => {
                let (c, i) = (country_of(args.first())?, code(1)?);
                Ok(Value::Opt(self.read(&c, &i).ok().map(|s| Arc::new(Value::series(&s)))))
            }
            "AsyncGetIndicator" => Ok(Value::Async(Arc::new(Comp::Fetch {
                country: country_of(args.first())?,
                indicator: code(1)?,
            }))),
            "async_return" => Ok(Value::Async(Arc::new(Comp::Return(
                args.into_iter().next().unwrap_or(Value::Unit),
            )))),
            other => Err(internal(format!(
                "runtime symbol `{other}` has no interpreter implementation"
            ))),
        }
    }

    fn read(&mut self, country: &str, indicator: &str) -> R<Vec<(i64, f64)>> {
        self.trace.push(format!("read {country} {indicator}"));
        self.world
            .lookup(country, indicator)
            .cloned()
            .ok_or_else(|| RuntimeFailure::MissingKey {
                country: country.to_string(),
                indicator: indicator.to_string(),
            })
    }

    fn emit_call(&mut self, name: &str, mut args: Vec<Value>) -> R<Value> {
        if args.is_empty() {
            return Err(internal("emit call without receiver"));
        }
        let recv = args.remove(0);
        self.trace
            .push(format!("call {}.{name}/{}", describe(&recv), args.len()));
        match (&recv, name) {
            (Value::Array(a), "push") => {
                a.lock().expect("array lock").extend(args);
                Ok(Value::Unit)
            }
            (Value::Closure(_) | Value::Prim(_), "") => {
                let mut f = recv.clone();
                for a in args {
                    f = self.apply(f, a)?;
                }
                Ok(f)
            }
            (Value::JsObject(o), _) => {
                if let Some(v) = self.host.method_results.get(name) {
                    return Ok(v.clone());
                }
                let label = if name.is_empty() {
                    format!("{}(..)", o.label)
                } else {
                    format!("{}.{name}(..)", o.label)
                };
                Ok(Value::JsObject(JsObject::new(label)))
            }
            _ => Err(RuntimeFailure::Host(format!("cannot call `{name}` on {}", recv.tag()))),
        }
    }

    fn property_get(&mut self, is_static: bool, name: &str, args: Vec<Value>) -> R<Value> {
        if is_static {
            self.trace.push(format!("get {name}"));
            let v = self
                .globals
                .entry(name.to_string())
                .or_insert_with(|| Value::JsObject(JsObject::new(name)));
            return Ok(v.clone());
        }
        match args.first() {
            Some(Value::JsObject(o)) => Ok(o.get(name).unwrap_or(Value::Undefined)),
            Some(Value::Array(a)) if name == "length" => Ok(Value::Int(a.lock().expect("array lock").len() as i64)),
            Some(other) => Err(RuntimeFailure::Host(format!("cannot read `{name}` of {}", other.tag()))),
            None => Err(internal("property get without receiver")),
        }
    }

    fn property_set(&mut self, name: &str, args: Vec<Value>) -> R<Value> {
        match args.as_slice() {
            [Value::JsObject(o), v] => {
                self.trace.push(format!("set {}.{name}", o.label));
                o.set(name, v.clone());
                Ok(Value::Unit)
            }
            [other, _] => Err(RuntimeFailure::Host(format!("cannot set `{name}` on {}", other.tag()))),
            _ => Err(internal("property set arity")),
        }
    }

    fn exec_prim(&mut self, name: &str, args: Vec<Value>) -> R<Value> {
        let mut it = args.into_iter();
        let mut next = || it.next().ok_or_else(|| internal(format!("{name}: missing argument")));
        let items = |v: Value| {
            v.as_items()
                .ok_or_else(|| internal(format!("{name}: expected a collection")))
        };
        match name {
            "List.map" | "Seq.map" | "Array.map" => {
                let f = next()?;
                let src = next()?;
                let is_array = matches!(src, Value::Array(_));
                let out = items(src)?
                    .into_iter()
                    .map(|x| self.apply(f.clone(), x))
                    .collect::<R<Vec<_>>>()?;
                Ok(if is_array { Value::array(out) } else { Value::list(out) })
            }
            "Array.ofSeq" => Ok(Value::array(items(next()?)?)),
            "List.ofArray" => Ok(Value::list(items(next()?)?)),
            "List.length" | "Array.length" => Ok(Value::Int(items(next()?)?.len() as i64)),
            "List.fold" => {
                let f = next()?;
                let mut acc = next()?;
                for x in items(next()?)? {
                    let g = self.apply(f.clone(), acc)?;
                    acc = self.apply(g, x)?;
                }
                Ok(acc)
            }
            "List.filter" => {
                let f = next()?;
                let mut out = Vec::new();
                for x in items(next()?)? {
                    if let Value::Bool(true) = self.apply(f.clone(), x.clone())? {
                        out.push(x);
                    }
                }
                Ok(Value::list(out))
            }
            "List.rev" => {
                let mut v = items(next()?)?;
                v.reverse();
                Ok(Value::list(v))
            }
            "List.append" => {
                let mut v = items(next()?)?;
                v.extend(items(next()?)?);
                Ok(Value::list(v))
            }
            "List.sum" => {
                let mut s = 0i64;
                for x in items(next()?)? {
                    if let Value::Int(i) = x {
                        s = s.wrapping_add(i);
                    }
                }
                Ok(Value::Int(s))
            }
            "Option.isSome" => Ok(Value::Bool(matches!(next()?, Value::Opt(Some(_))))),
            "Option.defaultValue" => {
                let d = next()?;
                Ok(match next()? {
                    Value::Opt(Some(v)) => (*v).clone(),
                    _ => d,
                })
            }
            "Async.StartImmediate" => {
                let c = next()?;
                self.start_immediate(c);
                Ok(Value::Unit)
            }
            "fst" | "snd" => match next()? {
                Value::Tuple(vs) if vs.len() == 2 => Ok(vs[usize::from(name == "snd")].clone()),
                v => Err(internal(format!("{name} of {}", v.tag()))),
            },
            "number" => template::to_number(&next()?),
            "float" => match next()? {
                Value::Int(i) => Ok(Value::Float(i as f64)),
                v => Err(internal(format!("float of {}", v.tag()))),
            },
            "int" => match next()? {
                Value::Float(x) => Ok(Value::Int(x as i64)),
                v => Err(internal(format!("int of {}", v.tag()))),
            },
            "string_of_int" | "string_of_float" => match next()? {
                Value::Int(i) => Ok(Value::str(&i.to_string())),
                Value::Float(x) => Ok(Value::str(&x.to_string())),
                v => Err(internal(format!("{name} of {}", v.tag()))),
            },
            "ignore" => Ok(Value::Unit),
            "failwith" => match next()? {
                Value::Str(s) => Err(RuntimeFailure::User(s.to_string())),
                v => Err(internal(format!("failwith of {}", v.tag()))),
            },
            "not" => match next()? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                v => Err(internal(format!("not of {}", v.tag()))),
            },
            "Some" => Ok(Value::Opt(Some(Arc::new(next()?)))),
            "None" => Ok(Value::Opt(None)),
            other => Err(internal(format!("`{other}` cannot run in the interpreter"))),
        }
    }

    fn start_immediate(&mut self, c: Value) {
        let id = self.next_task;
        self.next_task += 1;
        self.trace.push(format!("start #{id}"));
        self.drive(Task { id, stack: Vec::new() }, Ok(c));
    }

    fn finish(&mut self, id: usize, r: R<Value>) {
        self.trace.push(format!("done #{id}"));
        if id == 0 {
            self.entry_result = Some(r);
        } else if let Err(f) = r {
            self.uncaught.get_or_insert(f);
        }
    }

    /// Runs a task until it completes, fails, or waits on a fetch.
    fn drive(&mut self, mut task: Task, start: R<Value>) {
        let mut cur = start.and_then(as_comp);
        loop {
            if let Err(f) = self.tick_step() {
                cur = Err(f);
            }
            let comp = match cur {
                Ok(c) => c,
                Err(f) => {
                    let handler = if f.is_catchable() {
                        loop {
                            match task.stack.pop() {
                                Some(Frame::Catch(h)) => break Some(h),
                                Some(_) => continue,
                                None => break None,
                            }
                        }
                    } else {
                        None
                    };
                    match handler {
                        Some(h) => {
                            cur = self.apply(h, Value::str(&f.message())).and_then(as_comp);
                            continue;
                        }
                        None => {
                            self.finish(task.id, Err(f));
                            return;
                        }
                    }
                }
            };
            cur = match &*comp {
                Comp::Return(v) => {
                    let mut v = v.clone();
                    loop {
                        match task.stack.pop() {
                            None => {
                                self.finish(task.id, Ok(v));
                                return;
                            }
                            Some(Frame::Bind(f)) => break self.apply(f, v).and_then(as_comp),
                            Some(Frame::For(mut items, f)) => match items.pop_front() {
                                Some(x) => {
                                    task.stack.push(Frame::For(items, f.clone()));
                                    break self.apply(f, x).and_then(as_comp);
                                }
                                None => v = Value::Unit,
                            },
                            Some(Frame::Catch(_)) => {}
                        }
                    }
                }
                Comp::Delay(f) => self.apply(f.clone(), Value::Unit).and_then(as_comp),
                Comp::Bind(c, f) => {
                    task.stack.push(Frame::Bind(f.clone()));
                    as_comp(c.clone())
                }
                Comp::For(items, f) => {
                    task.stack.push(Frame::For(items.iter().cloned().collect(), f.clone()));
                    Ok(Arc::new(Comp::Return(Value::Unit)))
                }
                Comp::Catch(c, h) => {
                    task.stack.push(Frame::Catch(h.clone()));
                    as_comp(c.clone())
                }
                Comp::Fetch { country, indicator } => {
                    let delay = self.latency.as_ref().map_or(0, |l| l(country, indicator));
                    self.seq += 1;
                    self.trace.push(format!("wait #{} {country} {indicator}", task.id));
                    self.queue.insert(
                        (self.tick + delay, self.seq),
                        Pending {
                            task,
                            country: country.clone(),
                            indicator: indicator.clone(),
                        },
                    );
                    return;
                }
            };
        }
    }

    fn drain(&mut self) {
        while let Some(((at, _), p)) = self.queue.pop_first() {
            self.tick = self.tick.max(at);
            self.trace.push(format!("resume #{}", p.task.id));
            let r = self
                .read(&p.country, &p.indicator)
                .map(|s| Value::Async(Arc::new(Comp::Return(Value::series(&s)))));
            self.drive(p.task, r);
        }
    }
}

fn describe(v: &Value) -> String {
    match v {
        Value::JsObject(o) => o.label.clone(),
        other => other.tag().to_string(),
    }
}

fn compare(a: &Value, b: &Value) -> Option<std::cmp::Ordering> {
    use Value::*;
    match (a, b) {
        (Int(x), Int(y)) => Some(x.cmp(y)),
        (Float(x), Float(y)) => x.partial_cmp(y),
        (Str(x), Str(y)) => Some(x.cmp(y)),
        (Bool(x), Bool(y)) => Some(x.cmp(y)),
        (Unit, Unit) => Some(std::cmp::Ordering::Equal),
        (Tuple(xs), Tuple(ys)) | (List(xs), List(ys)) => {
            for (x, y) in xs.iter().zip(ys.iter()) {
                match compare(x, y)? {
                    std::cmp::Ordering::Equal => continue,
                    o => return Some(o),
                }
            }
            Some(xs.len().cmp(&ys.len()))
        }
        _ => None,
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

    fn eval_src(src: &str) -> R<Value> {
        let m = parse_module(src).unwrap();
        let tm = typecheck_module(&m, &ProvidedContext::new()).unwrap();
        let cm = desugar_async(&erase_module(&tm).unwrap()).unwrap();
        interpret(&cm, &WorldSnapshot::empty())
    }

    #[test]
    fn integer_division_truncates() {
        assert_eq!(eval_src("let x = 1 / 2\ndo x").unwrap(), Value::Int(0));
        assert_eq!(eval_src("do (-7) / 2").unwrap(), Value::Int(-3));
        assert_eq!(eval_src("do 1 / 0").unwrap_err(), RuntimeFailure::DivideByZero);
    }

    #[test]
    fn recursion_and_lists() {
        let v =
            eval_src("let rec fact n = if n = 0 then 1 else n * fact (n - 1)\ndo [1; 2; 3] |> List.map fact").unwrap();
        assert_eq!(v.to_string(), "[1; 2; 6]");
    }

    #[test]
    fn async_entry_runs_to_completion() {
        let v = eval_src("let a = async { return 20 }\ndo async { let! x = a in let! y = a in return x + y }").unwrap();
        assert_eq!(v, Value::Int(40));
    }

    #[test]
    fn try_with_catches_failwith() {
        let v = eval_src("do try failwith \"boom\" with m -> m ^ \"!\"").unwrap();
        assert_eq!(v.to_string(), "\"boom!\"");
        let v = eval_src("do async { try (let! x = async { return failwith \"no\" } in return x) with m -> return 0 }")
            .unwrap();
        assert_eq!(v, Value::Int(0));
    }

    #[test]
    fn cons_and_fold() {
        let v = eval_src("do List.fold (fun a x -> a + x) 0 (1 :: [2; 3])").unwrap();
        assert_eq!(v, Value::Int(6));
    }
}
