//! Concrete syntax, abstract syntax tree and source-level rewrites.

pub mod ast;
pub mod check;
pub mod desugar;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod subst;

pub use ast::{Action, ArithOp, CmpOp, Condition, Definition, Expression, Process, Program, VarType};
pub use check::{check_entry, check_program, CheckError};
pub use desugar::{desugar_entry, desugar_program, Desugared, DesugarError};
pub use parser::{parse_process, parse_program, ParseError};
pub use pretty::{print_process, print_program};
