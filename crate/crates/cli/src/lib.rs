//! Command-line front end for `exact-reals`: parse an expression, print it
//! to a requested number of decimals, or time a suite of such evaluations.

pub mod bench;
pub mod eval;
pub mod expr;

pub use bench::{default_suite, read_suite, run_case, run_suite, write_csv, BenchError, Case, Row};
pub use eval::{eval, eval_expr, to_real, EvalError, Options};
pub use expr::{parse, Expr, ParseError};
