//! Tagged runtime values.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::core_ir::CoreExpr;
use crate::syntax::pretty::quote;
use crate::syntax::Pattern;
use crate::types::CoreType;

#[derive(Clone)]
pub enum Value {
    Unit,
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(Arc<str>),
    Tuple(Arc<Vec<Value>>),
    List(Arc<Vec<Value>>),
    Array(Arc<Mutex<Vec<Value>>>),
    Opt(Option<Arc<Value>>),
    Closure(Arc<Closure>),
    Prim(Arc<PrimApp>),
    JsObject(Arc<JsObject>),
    /// Opaque data-access handle returned by the runtime library.
    Handle(Handle),
    Undefined,
    Async(Arc<Comp>),
}

pub struct Closure {
    pub param: Pattern,
    pub body: Arc<CoreExpr>,
    pub env: Env,
    /// Set for `let rec`: the closure binds itself under this name.
    pub rec_name: Option<String>,
}

/// A partially applied prelude function.
pub struct PrimApp {
    pub name: String,
    pub arity: usize,
    pub args: Vec<Value>,
}

/// An object from the host environment, recorded by the stub host.
pub struct JsObject {
    pub label: String,
    pub fields: Mutex<BTreeMap<String, Value>>,
}

impl JsObject {
    pub fn new(label: impl Into<String>) -> Arc<Self> {
        Arc::new(JsObject {
            label: label.into(),
            fields: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.fields.lock().expect("field lock").get(name).cloned()
    }

    pub fn set(&self, name: &str, v: Value) {
        self.fields.lock().expect("field lock").insert(name.to_string(), v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Handle {
    Countries,
    Country(String),
}

/// An async computation, as built by the builder operations.
pub enum Comp {
    Return(Value),
    Delay(Value),
    Bind(Value, Value),
    For(Vec<Value>, Value),
    Catch(Value, Value),
    /// Pending fetch of one (country, indicator) series.
    Fetch {
        country: String,
        indicator: String,
    },
}

#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    name: String,
    value: Value,
    next: Env,
}

impl Env {
    pub fn bind(&self, name: impl Into<String>, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode {
            name: name.into(),
            value,
            next: self.clone(),
        })))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if node.name == name {
                return Some(&node.value);
            }
            cur = &node.next.0;
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuntimeFailure {
    #[error("missing key ({country}, {indicator})")]
    MissingKey { country: String, indicator: String },
    #[error("cast: expected {expected}, found {found}")]
    Cast { expected: String, found: String },
    #[error("failure: {0}")]
    User(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("host error: {0}")]
    Host(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl RuntimeFailure {
    pub fn is_missing_key(&self) -> bool {
        matches!(self, RuntimeFailure::MissingKey { .. })
    }

    /// Failures a `try ... with` handler sees; internal errors are not
    /// catchable.
    pub fn is_catchable(&self) -> bool {
        !matches!(self, RuntimeFailure::Internal(_))
    }

    /// The string bound by a `with` pattern.
    pub fn message(&self) -> String {
        match self {
            RuntimeFailure::User(m) => m.clone(),
            other => other.to_string(),
        }
    }
}

impl Value {
    pub fn str(s: &str) -> Value {
        Value::Str(Arc::from(s))
    }

    pub fn list(items: Vec<Value>) -> Value {
        Value::List(Arc::new(items))
    }

    pub fn tuple(items: Vec<Value>) -> Value {
        Value::Tuple(Arc::new(items))
    }

    pub fn array(items: Vec<Value>) -> Value {
        Value::Array(Arc::new(Mutex::new(items)))
    }

    pub fn series(s: &[(i64, f64)]) -> Value {
        Value::list(
            s.iter()
                .map(|(y, v)| Value::tuple(vec![Value::Int(*y), Value::Float(*v)]))
                .collect(),
        )
    }

    /// The dynamic tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Value::Unit => "unit",
            Value::Int(_) => "int",
            Value::Float(_) => "float",
            Value::Bool(_) => "bool",
            Value::Str(_) => "string",
            Value::Tuple(_) => "tuple",
            Value::List(_) => "list",
            Value::Array(_) => "array",
            Value::Opt(_) => "option",
            Value::Closure(_) | Value::Prim(_) => "closure",
            Value::JsObject(_) | Value::Handle(_) | Value::Undefined => "jsobject",
            Value::Async(_) => "pending",
        }
    }

    /// Whether the value's tags agree with a static type, recursively
    /// through data structures. Variables and `obj` match anything.
    pub fn has_type(&self, ty: &CoreType) -> bool {
        use CoreType as T;
        match (ty, self) {
            (T::Var(_) | T::Object, _) => true,
            (T::Int, Value::Int(_))
            | (T::Float, Value::Float(_))
            | (T::Bool, Value::Bool(_))
            | (T::String, Value::Str(_))
            | (T::Unit, Value::Unit)
            | (T::Async(_), Value::Async(_))
            | (T::Function(..), Value::Closure(_) | Value::Prim(_))
            | (T::Named(_), Value::JsObject(_) | Value::Handle(_) | Value::Undefined) => true,
            (T::Tuple(ts), Value::Tuple(vs)) => ts.len() == vs.len() && vs.iter().zip(ts).all(|(v, t)| v.has_type(t)),
            (T::List(t), Value::List(vs)) => vs.iter().all(|v| v.has_type(t)),
            (T::Array(t), Value::Array(vs)) => vs.lock().expect("array lock").iter().all(|v| v.has_type(t)),
            (T::Option(t), Value::Opt(v)) => v.as_ref().is_none_or(|v| v.has_type(t)),
            _ => false,
        }
    }

    pub fn as_items(&self) -> Option<Vec<Value>> {
        match self {
            Value::List(v) => Some(v.as_ref().clone()),
            Value::Array(v) => Some(v.lock().expect("array lock").clone()),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        use Value::*;
        match (self, other) {
            (Unit, Unit) | (Undefined, Undefined) => true,
            (Int(a), Int(b)) => a == b,
            (Float(a), Float(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            (Str(a), Str(b)) => a == b,
            (Tuple(a), Tuple(b)) | (List(a), List(b)) => a == b,
            (Array(a), Array(b)) => {
                Arc::ptr_eq(a, b) || *a.lock().expect("array lock") == *b.lock().expect("array lock")
            }
            (Opt(a), Opt(b)) => a == b,
            (Closure(a), Closure(b)) => Arc::ptr_eq(a, b),
            (Prim(a), Prim(b)) => Arc::ptr_eq(a, b),
            (JsObject(a), JsObject(b)) => Arc::ptr_eq(a, b),
            (Handle(a), Handle(b)) => a == b,
            (Async(a), Async(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[Value], sep: &str) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// The stable textual value form printed by `run`.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(&quote(s)),
            Value::Tuple(vs) => {
                f.write_str("(")?;
                join(f, vs, ", ")?;
                f.write_str(")")
            }
            Value::List(vs) => {
                f.write_str("[")?;
                join(f, vs, "; ")?;
                f.write_str("]")
            }
            Value::Array(vs) => {
                f.write_str("[|")?;
                join(f, &vs.lock().expect("array lock"), "; ")?;
                f.write_str("|]")
            }
            Value::Opt(None) => f.write_str("None"),
            Value::Opt(Some(v)) => write!(f, "Some({v})"),
            Value::Closure(_) | Value::Prim(_) => f.write_str("<fun>"),
            Value::JsObject(o) => write!(f, "<jsobject {}>", o.label),
            Value::Handle(Handle::Countries) => f.write_str("<countries>"),
            Value::Handle(Handle::Country(c)) => write!(f, "<country {c}>"),
            Value::Undefined => f.write_str("undefined"),
            Value::Async(_) => f.write_str("<async>"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
