//! Core types: the `τ` side of the typing judgment.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a named type: either a prelude type or a provided type
/// (`W.Countries`, `j.JQuery`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeId(pub String);

impl TypeId {
    pub fn new(s: impl Into<String>) -> Self {
        TypeId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Unification variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TyVar(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoreType {
    Int,
    Float,
    Bool,
    String,
    Unit,
    /// Top type for dynamic values coming from untyped imports.
    Object,
    Function(Box<CoreType>, Box<CoreType>),
    Tuple(Vec<CoreType>),
    List(Box<CoreType>),
    Array(Box<CoreType>),
    Async(Box<CoreType>),
    Option(Box<CoreType>),
    Named(TypeId),
    Var(TyVar),
}

impl CoreType {
    pub fn func(param: CoreType, result: CoreType) -> CoreType {
        CoreType::Function(Box::new(param), Box::new(result))
    }

    /// Curried function type `p1 -> p2 -> ... -> result`.
    pub fn curried(params: impl IntoIterator<Item = CoreType>, result: CoreType) -> CoreType {
        let params: Vec<_> = params.into_iter().collect();
        params.into_iter().rev().fold(result, |acc, p| CoreType::func(p, acc))
    }

    pub fn list(t: CoreType) -> CoreType {
        CoreType::List(Box::new(t))
    }

    pub fn array(t: CoreType) -> CoreType {
        CoreType::Array(Box::new(t))
    }

    pub fn async_of(t: CoreType) -> CoreType {
        CoreType::Async(Box::new(t))
    }

    pub fn option(t: CoreType) -> CoreType {
        CoreType::Option(Box::new(t))
    }

    pub fn named(id: impl Into<String>) -> CoreType {
        CoreType::Named(TypeId::new(id))
    }

    /// `(int * float) list`, the representation of an indicator time series.
    pub fn series() -> CoreType {
        CoreType::list(CoreType::Tuple(vec![CoreType::Int, CoreType::Float]))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, CoreType::Var(_))
    }

    pub fn free_vars(&self, out: &mut Vec<TyVar>) {
        match self {
            CoreType::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            CoreType::Function(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            CoreType::Tuple(ts) => ts.iter().for_each(|t| t.free_vars(out)),
            CoreType::List(t) | CoreType::Array(t) | CoreType::Async(t) | CoreType::Option(t) => t.free_vars(out),
            _ => {}
        }
    }

    pub fn substitute(&self, map: &BTreeMap<TyVar, CoreType>) -> CoreType {
        match self {
            CoreType::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            CoreType::Function(a, b) => CoreType::func(a.substitute(map), b.substitute(map)),
            CoreType::Tuple(ts) => CoreType::Tuple(ts.iter().map(|t| t.substitute(map)).collect()),
            CoreType::List(t) => CoreType::list(t.substitute(map)),
            CoreType::Array(t) => CoreType::array(t.substitute(map)),
            CoreType::Async(t) => CoreType::async_of(t.substitute(map)),
            CoreType::Option(t) => CoreType::option(t.substitute(map)),
            _ => self.clone(),
        }
    }

    /// Renames type variables to `0, 1, 2, ...` in order of first occurrence,
    /// so α-equivalent types compare equal.
    pub fn canonical(&self) -> CoreType {
        let mut vars = Vec::new();
        self.free_vars(&mut vars);
        let map = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, CoreType::Var(TyVar(i as u32))))
            .collect();
        self.substitute(&map)
    }

    /// Splits `a -> b -> c` into `([a, b], c)`.
    pub fn uncurry(&self) -> (Vec<&CoreType>, &CoreType) {
        let mut params = Vec::new();
        let mut cur = self;
        while let CoreType::Function(p, r) = cur {
            params.push(p.as_ref());
            cur = r;
        }
        (params, cur)
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8, names: &dyn Fn(TyVar) -> String) -> fmt::Result {
        // prec: 0 = arrow ok, 1 = tuple component, 2 = postfix operand
        match self {
            CoreType::Int => f.write_str("int"),
            CoreType::Float => f.write_str("float"),
            CoreType::Bool => f.write_str("bool"),
            CoreType::String => f.write_str("string"),
            CoreType::Unit => f.write_str("unit"),
            CoreType::Object => f.write_str("obj"),
            CoreType::Named(id) => write!(f, "{id}"),
            CoreType::Var(v) => f.write_str(&names(*v)),
            CoreType::Function(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1, names)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0, names)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            CoreType::Tuple(ts) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    t.fmt_prec(f, 2, names)?;
                }
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            CoreType::List(t) => {
                t.fmt_prec(f, 2, names)?;
                f.write_str(" list")
            }
            CoreType::Array(t) => {
                t.fmt_prec(f, 2, names)?;
                f.write_str(" array")
            }
            CoreType::Async(t) => {
                t.fmt_prec(f, 2, names)?;
                f.write_str(" async")
            }
            CoreType::Option(t) => {
                t.fmt_prec(f, 2, names)?;
                f.write_str(" option")
            }
        }
    }
}

fn var_name(v: TyVar) -> String {
    let n = v.0 as usize;
    let letter = (b'a' + (n % 26) as u8) as char;
    if n < 26 {
        format!("'{letter}")
    } else {
        format!("'{letter}{}", n / 26)
    }
}

impl fmt::Display for CoreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, &var_name)
    }
}

/// A type scheme `∀ vars. ty`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scheme {
    pub vars: Vec<TyVar>,
    pub ty: CoreType,
}

impl Scheme {
    pub fn mono(ty: CoreType) -> Self {
        Scheme { vars: Vec::new(), ty }
    }

    /// The scheme with quantified variables renamed canonically.
    pub fn canonical(&self) -> Scheme {
        let ty = self.ty.canonical();
        let mut vars = Vec::new();
        ty.free_vars(&mut vars);
        // Keep only variables that were quantified in the original.
        let mut orig = Vec::new();
        self.ty.free_vars(&mut orig);
        let quantified: Vec<TyVar> = orig
            .iter()
            .zip(vars.iter())
            .filter(|(o, _)| self.vars.contains(o))
            .map(|(_, c)| *c)
            .collect();
        Scheme { vars: quantified, ty }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canon = self.canonical();
        if !canon.vars.is_empty() {
            f.write_str("forall")?;
            for v in &canon.vars {
                write!(f, " {}", var_name(*v))?;
            }
            f.write_str(". ")?;
        }
        write!(f, "{}", canon.ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_nests_correctly() {
        let t = CoreType::func(
            CoreType::func(CoreType::Var(TyVar(3)), CoreType::Var(TyVar(7))),
            CoreType::list(CoreType::Tuple(vec![CoreType::Int, CoreType::Float])),
        );
        assert_eq!(t.canonical().to_string(), "('a -> 'b) -> (int * float) list");
    }

    #[test]
    fn canonical_is_alpha_invariant() {
        let a = CoreType::func(CoreType::Var(TyVar(9)), CoreType::Var(TyVar(2)));
        let b = CoreType::func(CoreType::Var(TyVar(0)), CoreType::Var(TyVar(5)));
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn scheme_display() {
        let s = Scheme {
            vars: vec![TyVar(4)],
            ty: CoreType::func(CoreType::Var(TyVar(4)), CoreType::Var(TyVar(4))),
        };
        assert_eq!(s.to_string(), "forall 'a. 'a -> 'a");
    }
}
