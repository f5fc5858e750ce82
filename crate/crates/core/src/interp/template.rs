//! Evaluation of the JavaScript templates providers emit.
//!
//! Only the shapes providers produce are understood: holes, number
//! literals, `*`, parentheses and object literals, optionally wrapped in
//! `return ...;`.

use std::iter::Peekable;
use std::str::Chars;

use super::value::{JsObject, RuntimeFailure, Value};
use crate::shim::template_expression;

pub(super) fn eval(text: &str, args: &[Value]) -> Result<Value, RuntimeFailure> {
    let mut p = Parser {
        chars: template_expression(text).chars().peekable(),
        args,
    };
    let v = p.expr()?;
    p.ws();
    match p.chars.next() {
        None => Ok(v),
        Some(c) => Err(p.fail(&format!("unexpected `{c}`"))),
    }
}

/// JavaScript numeric coercion, as `x*1.0` performs it.
pub(super) fn to_number(v: &Value) -> Result<Value, RuntimeFailure> {
    Ok(Value::Float(match v {
        Value::Int(i) => *i as f64,
        Value::Float(x) => *x,
        Value::Bool(b) => f64::from(u8::from(*b)),
        Value::Str(s) if s.trim().is_empty() => 0.0,
        Value::Str(s) => s.trim().parse().unwrap_or(f64::NAN),
        Value::Unit | Value::Undefined => f64::NAN,
        other => {
            return Err(RuntimeFailure::Host(format!(
                "cannot convert {} to a number",
                other.tag()
            )));
        }
    }))
}

struct Parser<'a> {
    chars: Peekable<Chars<'a>>,
    args: &'a [Value],
}

impl Parser<'_> {
    fn fail(&self, msg: &str) -> RuntimeFailure {
        RuntimeFailure::Internal(format!("template: {msg}"))
    }

    fn ws(&mut self) {
        while self.chars.next_if(|c| c.is_whitespace()).is_some() {}
    }

    fn expr(&mut self) -> Result<Value, RuntimeFailure> {
        let mut v = self.term()?;
        loop {
            self.ws();
            if self.chars.next_if_eq(&'*').is_none() {
                return Ok(v);
            }
            let rhs = self.term()?;
            let (Value::Float(a), Value::Float(b)) = (to_number(&v)?, to_number(&rhs)?) else {
                unreachable!("to_number yields floats")
            };
            v = Value::Float(a * b);
        }
    }

    fn term(&mut self) -> Result<Value, RuntimeFailure> {
        self.ws();
        match self.chars.peek().copied() {
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                self.ws();
                self.chars.next_if_eq(&')').ok_or_else(|| self.fail("expected `)`"))?;
                Ok(v)
            }
            Some('{') => {
                self.chars.next();
                if self.chars.peek().is_some_and(char::is_ascii_digit) {
                    let n = self.digits();
                    self.chars
                        .next_if_eq(&'}')
                        .ok_or_else(|| self.fail("unterminated hole"))?;
                    let i: usize = n.parse().map_err(|_| self.fail("bad hole"))?;
                    return self.args.get(i).cloned().ok_or_else(|| self.fail("hole out of range"));
                }
                self.object()
            }
            Some(c) if c.is_ascii_digit() => {
                let mut s = self.digits();
                if self.chars.next_if_eq(&'.').is_some() {
                    s.push('.');
                    s.push_str(&self.digits());
                }
                s.parse().map(Value::Float).map_err(|_| self.fail("bad number"))
            }
            _ => Err(self.fail("unsupported expression")),
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.chars.next_if(char::is_ascii_digit) {
            s.push(c);
        }
        s
    }

    fn object(&mut self) -> Result<Value, RuntimeFailure> {
        let obj = JsObject::new("object");
        loop {
            self.ws();
            if self.chars.next_if_eq(&'}').is_some() {
                return Ok(Value::JsObject(obj));
            }
            let key = self.key()?;
            self.ws();
            self.chars.next_if_eq(&':').ok_or_else(|| self.fail("expected `:`"))?;
            let v = self.expr()?;
            obj.set(&key, v);
            self.ws();
            self.chars.next_if_eq(&',');
        }
    }

    fn key(&mut self) -> Result<String, RuntimeFailure> {
        let mut s = String::new();
        if self.chars.next_if_eq(&'"').is_some() {
            while let Some(c) = self.chars.next() {
                match c {
                    '"' => return Ok(s),
                    '\\' => s.extend(self.chars.next()),
                    c => s.push(c),
                }
            }
            return Err(self.fail("unterminated key"));
        }
        while let Some(c) = self.chars.next_if(|c| c.is_alphanumeric() || *c == '_' || *c == '$') {
            s.push(c);
        }
        if s.is_empty() {
            Err(self.fail("expected a key"))
        } else {
            Ok(s)
        }
    }
}
