//! CAN agent programs: AST, text format and static validation.

pub mod ast;
pub mod diag;
pub mod parse;
pub mod print;
pub mod validate;

pub use ast::*;
pub use diag::{Diagnostic, Severity};
pub use parse::parse_agent;
pub use validate::validate_agent;
