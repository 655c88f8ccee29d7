//! Text expressions for the generating curves of a family.
//!
//! ```
//! use isocurv::curveexpr::{parse, eval_curve};
//! let ast = parse("-(1/2)*lnabs(cos(2*u))").unwrap();
//! let [f, d1, _, _] = eval_curve(&ast, 0.0).unwrap();
//! assert_eq!((f, d1), (0.0, 0.0));
//! ```

mod ast;
mod curve;
mod parser;

pub use ast::{BinOp, CurveAst, Expr, Func};
pub use curve::{Curve1D, Provenance};
pub use parser::{parse, ParseError, ParseErrorKind, VARIABLES};

use crate::jets::JetError;

/// Value and first three derivatives of a parsed curve at `t`.
pub fn eval_curve(ast: &CurveAst, t: f64) -> Result<[f64; 4], JetError> {
    Curve1D::from_ast(ast.clone(), Provenance::Parsed).derivatives(t)
}

/// Pretty-prints an expression so that it parses back to the same tree.
pub fn print(ast: &CurveAst) -> String {
    ast.to_string()
}
