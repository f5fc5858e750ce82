//! Built-in functions available to every program.
//!
//! Each entry has a type scheme and an arity; backends implement them by
//! name. A few map directly onto runtime shim symbols.

use crate::types::{CoreType, Scheme, TyVar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreludeFn {
    pub name: &'static str,
    pub arity: usize,
    /// Shim symbol implementing the fully applied function, if any.
    pub shim: Option<&'static str>,
}

const fn f(name: &'static str, arity: usize, shim: Option<&'static str>) -> PreludeFn {
    PreludeFn { name, arity, shim }
}

pub const PRELUDE: &[PreludeFn] = &[
    f("List.map", 2, Some("list_map")),
    f("Seq.map", 2, Some("seq_map")),
    f("Array.ofSeq", 1, Some("array_ofSeq")),
    f("List.ofArray", 1, None),
    f("List.length", 1, None),
    f("List.fold", 3, None),
    f("List.filter", 2, None),
    f("List.rev", 1, None),
    f("List.append", 2, None),
    f("List.sum", 1, None),
    f("Array.length", 1, None),
    f("Array.map", 2, None),
    f("Option.isSome", 1, None),
    f("Option.defaultValue", 2, None),
    f("Async.StartImmediate", 1, Some("async_startImmediate")),
    f("Async.Start", 1, None),
    f("Async.RunSynchronously", 1, None),
    f("fst", 1, None),
    f("snd", 1, None),
    f("number", 1, None),
    f("float", 1, None),
    f("int", 1, None),
    f("string_of_int", 1, None),
    f("string_of_float", 1, None),
    f("ignore", 1, None),
    f("failwith", 1, None),
    f("not", 1, None),
    f("Some", 1, None),
    f("None", 0, None),
];

/// The inline template `number` erases to.
pub const NUMBER_TEMPLATE: &str = "return {0}*1.0;";

pub fn lookup(name: &str) -> Option<&'static PreludeFn> {
    PRELUDE.iter().find(|p| p.name == name)
}

pub fn is_prelude(name: &str) -> bool {
    lookup(name).is_some()
}

pub fn scheme(name: &str) -> Option<Scheme> {
    use CoreType as T;
    let a = || T::Var(TyVar(0));
    let b = || T::Var(TyVar(1));
    let fun = T::func;
    let cur = |ps: Vec<CoreType>, r: CoreType| T::curried(ps, r);
    let ty = match name {
        "List.map" | "Seq.map" => cur(vec![fun(a(), b()), T::list(a())], T::list(b())),
        "Array.ofSeq" => fun(T::list(a()), T::array(a())),
        "List.ofArray" => fun(T::array(a()), T::list(a())),
        "List.length" => fun(T::list(a()), T::Int),
        "List.fold" => cur(vec![cur(vec![b(), a()], b()), b(), T::list(a())], b()),
        "List.filter" => cur(vec![fun(a(), T::Bool), T::list(a())], T::list(a())),
        "List.rev" => fun(T::list(a()), T::list(a())),
        "List.append" => cur(vec![T::list(a()), T::list(a())], T::list(a())),
        "List.sum" => fun(T::list(T::Int), T::Int),
        "Array.length" => fun(T::array(a()), T::Int),
        "Array.map" => cur(vec![fun(a(), b()), T::array(a())], T::array(b())),
        "Option.isSome" => fun(T::option(a()), T::Bool),
        "Option.defaultValue" => cur(vec![a(), T::option(a())], a()),
        "Async.StartImmediate" | "Async.Start" => fun(T::async_of(a()), T::Unit),
        "Async.RunSynchronously" => fun(T::async_of(a()), a()),
        "fst" => fun(T::Tuple(vec![a(), b()]), a()),
        "snd" => fun(T::Tuple(vec![a(), b()]), b()),
        "number" => fun(a(), T::Float),
        "float" => fun(T::Int, T::Float),
        "int" => fun(T::Float, T::Int),
        "string_of_int" => fun(T::Int, T::String),
        "string_of_float" => fun(T::Float, T::String),
        "ignore" => fun(a(), T::Unit),
        "failwith" => fun(T::String, a()),
        "not" => fun(T::Bool, T::Bool),
        "Some" => fun(a(), T::option(a())),
        "None" => T::option(a()),
        _ => return None,
    };
    let mut vars = Vec::new();
    ty.free_vars(&mut vars);
    Some(Scheme { vars, ty })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_has_a_scheme_matching_its_arity() {
        for p in PRELUDE {
            let s = scheme(p.name).unwrap_or_else(|| panic!("{}", p.name));
            assert_eq!(s.ty.uncurry().0.len(), p.arity, "{}", p.name);
        }
    }

    #[test]
    fn map_scheme() {
        assert_eq!(
            scheme("List.map").unwrap().to_string(),
            "forall 'a 'b. ('a -> 'b) -> 'a list -> 'b list"
        );
    }
}
