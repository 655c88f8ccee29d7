use std::fmt;

use super::ast::CurveAst;
use super::parser::{parse, ParseError};
use crate::jets::{Jet2, JetError};

/// Where a curve came from: user input or a family constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Parsed,
    Builtin,
}

#[derive(Debug, Clone)]
enum Repr {
    Expr {
        ast: CurveAst,
        d1: CurveAst,
    },
    /// Known only through its derivative; values come from quadrature
    /// starting at `anchor`.
    Integral {
        d1: CurveAst,
        anchor: f64,
        anchor_value: f64,
    },
}

/// Intervals used by composite Simpson quadrature for integral curves.
/// Fixed so that the value is a smooth function of the upper limit.
const SIMPSON_INTERVALS: usize = 512;

/// A real function of one variable with up to three derivatives.
#[derive(Debug, Clone)]
pub struct Curve1D {
    repr: Repr,
    interval: Option<(f64, f64)>,
    provenance: Provenance,
}

impl Curve1D {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Ok(Self::from_ast(parse(src)?, Provenance::Parsed))
    }

    /// Curve built by library code from a generated expression string.
    /// Panics if the string does not parse, which would be a bug.
    pub(crate) fn builtin(src: &str) -> Self {
        let ast = parse(src).unwrap_or_else(|e| panic!("builtin curve {src:?}: {e}"));
        Self::from_ast(ast, Provenance::Builtin)
    }

    pub fn from_ast(ast: CurveAst, provenance: Provenance) -> Self {
        let d1 = ast.derivative();
        Curve1D {
            repr: Repr::Expr { ast, d1 },
            interval: None,
            provenance,
        }
    }

    /// Curve given by its derivative `d1` and the value at `anchor`.
    pub fn from_derivative(d1: CurveAst, anchor: f64, anchor_value: f64, provenance: Provenance) -> Self {
        Curve1D {
            repr: Repr::Integral {
                d1,
                anchor,
                anchor_value,
            },
            interval: None,
            provenance,
        }
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.interval = Some((lo.min(hi), lo.max(hi)));
        self
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        self.interval
    }

    pub fn contains(&self, t: f64) -> bool {
        self.interval.is_none_or(|(lo, hi)| lo <= t && t <= hi)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.repr, Repr::Integral { .. })
    }

    /// The defining expression (for integral curves, of the derivative).
    pub fn expression(&self) -> &CurveAst {
        match &self.repr {
            Repr::Expr { ast, .. } => ast,
            Repr::Integral { d1, .. } => d1,
        }
    }

    pub fn value(&self, t: f64) -> Result<f64, JetError> {
        match &self.repr {
            Repr::Expr { ast, .. } => ast.eval(t),
            Repr::Integral {
                d1,
                anchor,
                anchor_value,
            } => Ok(anchor_value + simpson(d1, *anchor, t)?),
        }
    }

    /// `[f, f', f'', f''']` at `t`.
    pub fn derivatives(&self, t: f64) -> Result<[f64; 4], JetError> {
        let x = Jet2::seed(&[t], 0)?;
        match &self.repr {
            Repr::Expr { ast, d1 } => {
                let j = ast.eval_jet(&x)?;
                let k = d1.eval_jet(&x)?;
                Ok([j.value(), j.gradient()[0], j.hessian(0, 0), k.hessian(0, 0)])
            }
            Repr::Integral { d1, .. } => {
                let k = d1.eval_jet(&x)?;
                Ok([self.value(t)?, k.value(), k.gradient()[0], k.hessian(0, 0)])
            }
        }
    }

    /// The curve composed with a jet argument of any dimension.
    pub fn apply(&self, arg: &Jet2) -> Result<Jet2, JetError> {
        match &self.repr {
            Repr::Expr { ast, .. } => ast.eval_jet(arg),
            Repr::Integral { .. } => {
                let [f, d1, d2, _] = self.derivatives(arg.value())?;
                Ok(arg.chain(f, d1, d2))
            }
        }
    }
}

impl fmt::Display for Curve1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Expr { ast, .. } => write!(f, "{ast}"),
            Repr::Integral {
                d1,
                anchor,
                anchor_value,
            } => write!(
                f,
                "{anchor_value} + integral from {anchor} to {v} of ({d1}) d{v}",
                v = d1.var
            ),
        }
    }
}

fn simpson(f: &CurveAst, a: f64, b: f64) -> Result<f64, JetError> {
    if a == b {
        return Ok(0.0);
    }
    let n = SIMPSON_INTERVALS;
    let h = (b - a) / n as f64;
    let mut sum = f.eval(a)? + f.eval(b)?;
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f.eval(a + k as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_polynomial() {
        let c = Curve1D::parse("u^3 - 2*u").unwrap();
        let d = c.derivatives(2.0).unwrap();
        assert_eq!(d, [4.0, 10.0, 12.0, 6.0]);
        assert_eq!(c.provenance(), Provenance::Parsed);
    }

    #[test]
    fn third_derivative_of_lncos() {
        // f = -ln|cos u|: f' = tan u, f'' = sec^2 u, f''' = 2 sec^2 u tan u
        let c = Curve1D::parse("-lnabs(cos(u))").unwrap();
        let t: f64 = 0.4;
        let d = c.derivatives(t).unwrap();
        let sec2 = 1.0 / t.cos().powi(2);
        assert!((d[1] - t.tan()).abs() < 1e-14);
        assert!((d[2] - sec2).abs() < 1e-14);
        assert!((d[3] - 2.0 * sec2 * t.tan()).abs() < 1e-13);
    }

    #[test]
    fn integral_curve_matches_antiderivative() {
        let d1 = parse("exp(u)").unwrap();
        let c = Curve1D::from_derivative(d1, 0.0, 1.0, Provenance::Builtin);
        for t in [-0.7, 0.0, 0.3, 1.1] {
            let d = c.derivatives(t).unwrap();
            let e = f64::exp(t);
            assert!((d[0] - e).abs() < 1e-12, "{t}: {} vs {e}", d[0]);
            assert!((d[1] - e).abs() < 1e-14);
            assert!((d[3] - e).abs() < 1e-14);
        }
    }

    #[test]
    fn apply_composes_with_multivariate_jets() {
        let c = Curve1D::parse("sin(t)").unwrap();
        let p = [0.2, 0.5];
        let xs = Jet2::seed_all(&p);
        let arg = &xs[0] * &xs[1];
        let j = c.apply(&arg).unwrap();
        let s = 0.1f64;
        assert!((j.value() - s.sin()).abs() < 1e-15);
        assert!((j.gradient()[0] - 0.5 * s.cos()).abs() < 1e-15);
        // d2/dx dy sin(xy) = cos(xy) - xy sin(xy)
        assert!((j.hessian(0, 1) - (s.cos() - s * s.sin())).abs() < 1e-15);
    }

    #[test]
    fn interval_bookkeeping() {
        let c = Curve1D::parse("u").unwrap().with_interval(2.0, 1.0);
        assert_eq!(c.interval(), Some((1.0, 2.0)));
        assert!(c.contains(1.5));
        assert!(!c.contains(2.5));
    }
}
