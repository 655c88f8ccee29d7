use std::fmt;

use crate::jets::{Jet2, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    LnAbs,
    Sin,
    Cos,
    Tan,
    Arccos,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::LnAbs,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Arccos,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::LnAbs => "lnabs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Arccos => "arccos",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply_f64(self, x: f64) -> Result<f64, JetError> {
        let bad = |op| Err(JetError::domain(op, x));
        match self {
            Func::Sqrt if x < 0.0 => bad("sqrt"),
            Func::Ln if x <= 0.0 => bad("ln"),
            Func::LnAbs if x == 0.0 => bad("lnabs"),
            Func::Arccos if x.abs() > 1.0 => bad("arccos"),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Exp => Ok(x.exp()),
            Func::Ln => Ok(x.ln()),
            Func::LnAbs => Ok(x.abs().ln()),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => Ok(x.tan()),
            Func::Arccos => Ok(x.acos()),
            Func::Tanh => Ok(x.tanh()),
        }
    }

    fn apply_jet(self, x: &Jet2) -> Result<Jet2, JetError> {
        match self {
            Func::Sqrt => x.sqrt(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::LnAbs => x.ln_abs(),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.tan(),
            Func::Arccos => x.acos(),
            Func::Tanh => Ok(x.tanh()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree over one real variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

// Printing precedence levels.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
            Expr::Neg(_) => PREC_NEG,
            Expr::Bin(BinOp::Pow, ..) => PREC_POW,
            Expr::Num(x) if *x < 0.0 => PREC_NEG,
            _ => PREC_ATOM,
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Pi => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.contains_var(),
            Expr::Bin(_, a, b) => a.contains_var() || b.contains_var(),
        }
    }

    /// Value of a variable-free subtree.
    pub fn const_value(&self) -> Option<f64> {
        if self.contains_var() {
            None
        } else {
            self.eval(0.0).ok()
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, JetError> {
        Ok(match self {
            Expr::Num(c) => *c,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Call(f, a) => f.apply_f64(a.eval(x)?)?,
            Expr::Bin(op, a, b) => {
                let (l, r) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => return Err(JetError::domain("division", r)),
                    BinOp::Div => l / r,
                    BinOp::Pow => {
                        let integral = r.fract() == 0.0;
                        if (!integral && l < 0.0) || (l == 0.0 && r < 0.0) {
                            return Err(JetError::domain("power", l));
                        }
                        if integral && r.abs() < i32::MAX as f64 {
                            l.powi(r as i32)
                        } else {
                            l.powf(r)
                        }
                    }
                }
            }
        })
    }

    /// Evaluates the tree with the variable bound to `x`. Any jet dimension
    /// works, so a curve composed with a multivariate argument gets its
    /// full gradient and Hessian in one pass.
    pub fn eval_jet(&self, x: &Jet2) -> Result<Jet2, JetError> {
        let dim = x.dim();
        Ok(match self {
            Expr::Num(c) => Jet2::constant(*c, dim),
            Expr::Pi => Jet2::constant(std::f64::consts::PI, dim),
            Expr::Var => x.clone(),
            Expr::Neg(a) => -&a.eval_jet(x)?,
            Expr::Call(f, a) => f.apply_jet(&a.eval_jet(x)?)?,
            Expr::Bin(BinOp::Pow, a, b) => {
                let base = a.eval_jet(x)?;
                match b.const_value() {
                    Some(c) => base.powf(c)?,
                    None => base.pow(&b.eval_jet(x)?)?,
                }
            }
            Expr::Bin(op, a, b) => {
                let (l, r) = (a.eval_jet(x)?, b.eval_jet(x)?);
                match op {
                    BinOp::Add => l.try_add(&r)?,
                    BinOp::Sub => l.try_sub(&r)?,
                    BinOp::Mul => l.try_mul(&r)?,
                    BinOp::Div => l.try_div(&r)?,
                    BinOp::Pow => unreachable!(),
                }
            }
        })
    }

    /// Symbolic derivative with respect to the variable. Constant subtrees
    /// are folded where that removes a node; no other simplification.
    pub fn derivative(&self) -> Expr {
        use Expr::*;
        match self {
            Num(_) | Pi => Num(0.0),
            Var => Num(1.0),
            Neg(a) => neg(a.derivative()),
            Bin(BinOp::Add, a, b) => add(a.derivative(), b.derivative()),
            Bin(BinOp::Sub, a, b) => sub(a.derivative(), b.derivative()),
            Bin(BinOp::Mul, a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Bin(BinOp::Div, a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow((**b).clone(), Num(2.0)),
            ),
            Bin(BinOp::Pow, a, b) => {
                if let Some(c) = b.const_value() {
                    // d(a^c) = c a^(c-1) a'
                    mul(mul(Num(c), pow((**a).clone(), Num(c - 1.0))), a.derivative())
                } else if !a.contains_var() {
                    mul(
                        mul(self.clone(), call(Func::Ln, (**a).clone())),
                        b.derivative(),
                    )
                } else {
                    // a^b (b' ln a + b a'/a)
                    mul(
                        self.clone(),
                        add(
                            mul(b.derivative(), call(Func::Ln, (**a).clone())),
                            div(mul((**b).clone(), a.derivative()), (**a).clone()),
                        ),
                    )
                }
            }
            Call(f, a) => {
                let inner = a.derivative();
                let a = (**a).clone();
                let outer = match f {
                    Func::Sqrt => div(Num(1.0), mul(Num(2.0), call(Func::Sqrt, a))),
                    Func::Exp => call(Func::Exp, a),
                    Func::Ln | Func::LnAbs => div(Num(1.0), a),
                    Func::Sin => call(Func::Cos, a),
                    Func::Cos => neg(call(Func::Sin, a)),
                    Func::Tan => div(Num(1.0), pow(call(Func::Cos, a), Num(2.0))),
                    Func::Arccos => neg(div(
                        Num(1.0),
                        call(Func::Sqrt, sub(Num(1.0), pow(a, Num(2.0)))),
                    )),
                    Func::Tanh => sub(Num(1.0), pow(call(Func::Tanh, a), Num(2.0))),
                };
                mul(outer, inner)
            }
        }
    }

    /// Writes the tree with the minimal parentheses needed to reparse it to
    /// the same structure.
    pub fn write(&self, out: &mut String, var: &str) {
        self.write_prec(out, var, 0);
    }

    fn write_prec(&self, out: &mut String, var: &str, ctx: u8) {
        let wrap = self.precedence() < ctx;
        if wrap {
            out.push('(');
        }
        match self {
            Expr::Num(c) => out.push_str(&format!("{c}")),
            Expr::Pi => out.push_str("pi"),
            Expr::Var => out.push_str(var),
            Expr::Neg(a) => {
                out.push('-');
                a.write_prec(out, var, PREC_NEG);
            }
            Expr::Call(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_prec(out, var, 0);
                out.push(')');
            }
            Expr::Bin(op, a, b) => {
                let (lp, rp) = match op {
                    BinOp::Add | BinOp::Sub => (PREC_ADD, PREC_MUL),
                    BinOp::Mul | BinOp::Div => (PREC_MUL, PREC_NEG),
                    BinOp::Pow => (PREC_ATOM, PREC_NEG),
                };
                a.write_prec(out, var, lp);
                out.push(op.symbol());
                b.write_prec(out, var, rp);
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => Expr::Num(-x),
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        b
    } else if is_num(&b, 0.0) {
        a
    } else {
        Expr::Bin(BinOp::Add, Box::new(a), Box::new(b))
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 0.0) {
        a
    } else if is_num(&a, 0.0) {
        neg(b)
    } else {
        Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b))
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) || is_num(&b, 0.0) {
        Expr::Num(0.0)
    } else if is_num(&a, 1.0) {
        b
    } else if is_num(&b, 1.0) {
        a
    } else {
        Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b))
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_num(&a, 0.0) {
        Expr::Num(0.0)
    } else if is_num(&b, 1.0) {
        a
    } else {
        Expr::Bin(BinOp::Div, Box::new(a), Box::new(b))
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if is_num(&b, 1.0) {
        a
    } else if is_num(&b, 0.0) {
        Expr::Num(1.0)
    } else {
        Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// A parsed one-variable expression together with the name its variable
/// was written with.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveAst {
    pub root: Expr,
    pub var: String,
}

impl CurveAst {
    pub fn derivative(&self) -> CurveAst {
        CurveAst {
            root: self.root.derivative(),
            var: self.var.clone(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, JetError> {
        self.root.eval(x)
    }

    pub fn eval_jet(&self, x: &Jet2) -> Result<Jet2, JetError> {
        self.root.eval_jet(x)
    }

    /// Prefix (S-expression) rendering, handy for structural assertions.
    pub fn sexpr(&self) -> String {
        fn go(e: &Expr, var: &str, out: &mut String) {
            match e {
                Expr::Num(c) => out.push_str(&format!("{c}")),
                Expr::Pi => out.push_str("pi"),
                Expr::Var => out.push_str(var),
                Expr::Neg(a) => {
                    out.push_str("(neg ");
                    go(a, var, out);
                    out.push(')');
                }
                Expr::Call(f, a) => {
                    out.push('(');
                    out.push_str(f.name());
                    out.push(' ');
                    go(a, var, out);
                    out.push(')');
                }
                Expr::Bin(op, a, b) => {
                    out.push('(');
                    out.push(match op {
                        BinOp::Mul => '×',
                        other => other.symbol(),
                    });
                    out.push(' ');
                    go(a, var, out);
                    out.push(' ');
                    go(b, var, out);
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        go(&self.root, &self.var, &mut out);
        out
    }
}

impl fmt::Display for CurveAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s, &self.var);
        f.write_str(&s)
    }
}
