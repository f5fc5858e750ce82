//! Surface language: syntax tree, lexer, parser and pretty printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use ast::*;
pub use parser::{parse_expr, parse_module, parse_type};
pub use pretty::{pretty_print, print_expr};
