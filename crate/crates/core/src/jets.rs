//! Second-order jets: value, gradient and Hessian of a scalar function of
//! `m` variables, propagated exactly through elementary operations.
//!
//! A [`Jet2`] is a truncated second-order Taylor expansion. Seeding the
//! coordinates of a point and pushing them through arithmetic yields the
//! exact first and second partial derivatives of the composition (up to
//! rounding), which is all the fundamental forms need.
//!
//! [`fd_hessian`] is an independent central-difference estimate used to
//! cross-check the jet path.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    /// An elementary operation was applied outside its real domain.
    #[error("{op} is undefined at {value}")]
    Domain { op: &'static str, value: f64 },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },
    #[error("{op} expects {expected} argument(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("jet dimensions differ ({0} vs {1})")]
    DimMismatch(usize, usize),
}

impl JetError {
    pub(crate) fn domain(op: &'static str, value: f64) -> Self {
        JetError::Domain { op, value }
    }
}

/// Value, gradient and (symmetric) Hessian of a scalar field at a point.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    // row-major m x m
    hess: Vec<f64>,
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet2")
            .field("value", &self.value)
            .field("gradient", &self.grad)
            .field("hessian", &self.hessian_rows())
            .finish()
    }
}

impl Jet2 {
    pub fn constant(value: f64, dim: usize) -> Self {
        Jet2 {
            value,
            grad: vec![0.0; dim],
            hess: vec![0.0; dim * dim],
        }
    }

    /// The jet of the coordinate function `x_k` at `point`.
    pub fn seed(point: &[f64], k: usize) -> Result<Self, JetError> {
        let dim = point.len();
        if k >= dim {
            return Err(JetError::Index { index: k, dim });
        }
        let mut jet = Jet2::constant(point[k], dim);
        jet.grad[k] = 1.0;
        Ok(jet)
    }

    /// Seeds every coordinate of `point`.
    pub fn seed_all(point: &[f64]) -> Vec<Self> {
        (0..point.len())
            .map(|k| Jet2::seed(point, k).expect("k < dim"))
            .collect()
    }

    /// Builds a jet from raw parts. The Hessian is symmetrized by averaging
    /// mirrored entries.
    pub fn from_parts(value: f64, gradient: Vec<f64>, hessian: &[Vec<f64>]) -> Self {
        let dim = gradient.len();
        let mut hess = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let s = 0.5 * (hessian[i][j] + hessian[j][i]);
                hess[i * dim + j] = s;
                hess[j * dim + i] = s;
            }
        }
        Jet2 {
            value,
            grad: gradient,
            hess,
        }
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim() + j]
    }

    pub fn hessian_rows(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        (0..m).map(|i| self.hess[i * m..(i + 1) * m].to_vec()).collect()
    }

    fn check_dim(&self, other: &Jet2) -> Result<(), JetError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(JetError::DimMismatch(self.dim(), other.dim()))
        }
    }

    /// Composes a univariate function with this jet, given the function's
    /// value and first two derivatives at `self.value()`.
    pub fn chain(&self, d0: f64, d1: f64, d2: f64) -> Jet2 {
        let m = self.dim();
        let grad = self.grad.iter().map(|g| d1 * g).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = d2 * self.grad[i] * self.grad[j] + d1 * self.hess[i * m + j];
                hess[i * m + j] = v;
                hess[j * m + i] = v;
            }
        }
        Jet2 {
            value: d0,
            grad,
            hess,
        }
    }

    fn chain_checked(&self, op: &'static str, d0: f64, d1: f64, d2: f64) -> Result<Jet2, JetError> {
        if d0.is_finite() && d1.is_finite() && d2.is_finite() {
            Ok(self.chain(d0, d1, d2))
        } else {
            Err(JetError::domain(op, self.value))
        }
    }

    pub fn scale(&self, a: f64) -> Jet2 {
        Jet2 {
            value: a * self.value,
            grad: self.grad.iter().map(|g| a * g).collect(),
            hess: self.hess.iter().map(|h| a * h).collect(),
        }
    }

    pub fn add_const(&self, c: f64) -> Jet2 {
        let mut out = self.clone();
        out.value += c;
        out
    }

    /// `self + a * other`, the workhorse for linear combinations.
    pub fn axpy(&self, a: f64, other: &Jet2) -> Jet2 {
        debug_assert_eq!(self.dim(), other.dim());
        Jet2 {
            value: self.value + a * other.value,
            grad: self
                .grad
                .iter()
                .zip(&other.grad)
                .map(|(x, y)| x + a * y)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&other.hess)
                .map(|(x, y)| x + a * y)
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_dim(other)?;
        Ok(self.axpy(1.0, other))
    }

    pub fn try_sub(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_dim(other)?;
        Ok(self.axpy(-1.0, other))
    }

    pub fn try_mul(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_dim(other)?;
        let m = self.dim();
        let (a, b) = (self, other);
        let grad = (0..m).map(|i| a.value * b.grad[i] + b.value * a.grad[i]).collect();
        let mut hess = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v = a.value * b.hess[i * m + j]
                    + b.value * a.hess[i * m + j]
                    + (a.grad[i] * b.grad[j] + b.grad[i] * a.grad[j]);
                hess[i * m + j] = v;
                hess[j * m + i] = v;
            }
        }
        Ok(Jet2 {
            value: a.value * b.value,
            grad,
            hess,
        })
    }

    pub fn recip(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if x == 0.0 {
            return Err(JetError::domain("division", x));
        }
        self.chain_checked("division", 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn try_div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_dim(other)?;
        self.try_mul(&other.recip()?)
    }

    /// `self^exponent` for a constant real exponent. Non-integer exponents
    /// require a positive base.
    pub fn powf(&self, exponent: f64) -> Result<Jet2, JetError> {
        let x = self.value;
        let c = exponent;
        if c == 0.0 {
            return Ok(Jet2::constant(1.0, self.dim()));
        }
        let integral = c.fract() == 0.0 && c.abs() < 1e15;
        if integral {
            if x == 0.0 && c < 0.0 {
                return Err(JetError::domain("power", x));
            }
            let n = c as i32;
            let term = |coef: f64, e: i32| if coef == 0.0 { 0.0 } else { coef * x.powi(e) };
            return self.chain_checked(
                "power",
                x.powi(n),
                term(c, n - 1),
                term(c * (c - 1.0), n - 2),
            );
        }
        if x <= 0.0 {
            return Err(JetError::domain("power", x));
        }
        self.chain_checked(
            "power",
            x.powf(c),
            c * x.powf(c - 1.0),
            c * (c - 1.0) * x.powf(c - 2.0),
        )
    }

    /// `self^other` with a variable exponent, via `exp(other * ln self)`.
    pub fn pow(&self, other: &Jet2) -> Result<Jet2, JetError> {
        self.check_dim(other)?;
        if other.grad.iter().all(|g| *g == 0.0) && other.hess.iter().all(|h| *h == 0.0) {
            return self.powf(other.value);
        }
        if self.value <= 0.0 {
            return Err(JetError::domain("power", self.value));
        }
        other.try_mul(&self.ln()?)?.exp()
    }

    pub fn sqrt(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if x <= 0.0 {
            return Err(JetError::domain("sqrt", x));
        }
        let s = x.sqrt();
        self.chain_checked("sqrt", s, 0.5 / s, -0.25 / (x * s))
    }

    pub fn exp(&self) -> Result<Jet2, JetError> {
        let e = self.value.exp();
        self.chain_checked("exp", e, e, e)
    }

    pub fn ln(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if x <= 0.0 {
            return Err(JetError::domain("ln", x));
        }
        self.chain_checked("ln", x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    /// `ln|x|`, defined for `x != 0` with the derivatives of `ln x`.
    pub fn ln_abs(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if x == 0.0 {
            return Err(JetError::domain("lnabs", x));
        }
        self.chain_checked("lnabs", x.abs().ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        let c = x.cos();
        if c == 0.0 {
            return Err(JetError::domain("tan", x));
        }
        let t = x.tan();
        let sec2 = 1.0 / (c * c);
        self.chain_checked("tan", t, sec2, 2.0 * t * sec2)
    }

    pub fn acos(&self) -> Result<Jet2, JetError> {
        let x = self.value;
        if !(x.abs() < 1.0) {
            return Err(JetError::domain("arccos", x));
        }
        let q = 1.0 - x * x;
        let r = q.sqrt();
        self.chain_checked("arccos", x.acos(), -1.0 / r, -x / (q * r))
    }

    pub fn tanh(&self) -> Jet2 {
        let t = self.value.tanh();
        let s = 1.0 - t * t;
        self.chain(t, s, -2.0 * t * s)
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.axpy(-1.0, rhs)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.try_mul(rhs).expect("jet dimensions must agree")
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

/// The elementary operations understood by [`jet_apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    /// Power with a constant real exponent.
    Powf(f64),
    /// Power with a jet exponent.
    Pow,
    Sqrt,
    Exp,
    Ln,
    LnAbs,
    Sin,
    Cos,
    Tan,
    Acos,
    Tanh,
}

impl ElemOp {
    pub fn name(self) -> &'static str {
        match self {
            ElemOp::Add => "+",
            ElemOp::Sub => "-",
            ElemOp::Mul => "*",
            ElemOp::Div => "/",
            ElemOp::Neg => "neg",
            ElemOp::Powf(_) | ElemOp::Pow => "^",
            ElemOp::Sqrt => "sqrt",
            ElemOp::Exp => "exp",
            ElemOp::Ln => "ln",
            ElemOp::LnAbs => "lnabs",
            ElemOp::Sin => "sin",
            ElemOp::Cos => "cos",
            ElemOp::Tan => "tan",
            ElemOp::Acos => "arccos",
            ElemOp::Tanh => "tanh",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            ElemOp::Add | ElemOp::Sub | ElemOp::Mul | ElemOp::Div | ElemOp::Pow => 2,
            _ => 1,
        }
    }
}

/// Applies an elementary operation to jet arguments.
pub fn jet_apply(op: ElemOp, args: &[Jet2]) -> Result<Jet2, JetError> {
    if args.len() != op.arity() {
        return Err(JetError::Arity {
            op: op.name(),
            expected: op.arity(),
            got: args.len(),
        });
    }
    let a = &args[0];
    match op {
        ElemOp::Add => a.try_add(&args[1]),
        ElemOp::Sub => a.try_sub(&args[1]),
        ElemOp::Mul => a.try_mul(&args[1]),
        ElemOp::Div => a.try_div(&args[1]),
        ElemOp::Pow => a.pow(&args[1]),
        ElemOp::Neg => Ok(-a),
        ElemOp::Powf(c) => a.powf(c),
        ElemOp::Sqrt => a.sqrt(),
        ElemOp::Exp => a.exp(),
        ElemOp::Ln => a.ln(),
        ElemOp::LnAbs => a.ln_abs(),
        ElemOp::Sin => Ok(a.sin()),
        ElemOp::Cos => Ok(a.cos()),
        ElemOp::Tan => a.tan(),
        ElemOp::Acos => a.acos(),
        ElemOp::Tanh => Ok(a.tanh()),
    }
}

/// Largest power of two not exceeding `x` (x > 0). Stencil offsets that are
/// powers of two keep `x ± h` exact for moderately sized `x`.
fn pow2_floor(x: f64) -> f64 {
    2f64.powi(x.log2().floor() as i32)
}

/// Multiplier applied to `max(1, |x|)` when no explicit scale is given.
/// Plain `eps^(1/3)` is tuned for first differences; second differences
/// lose about `eps / h^2` to rounding, so the default stencil is widened.
pub const FD_DEFAULT_SCALE: f64 = 16.0;

/// Finite-difference step for a coordinate: `scale * eps^(1/3)`, rounded
/// down to a power of two. `scale` defaults to
/// `FD_DEFAULT_SCALE * max(1, |x|)`.
pub fn fd_step(x: f64, scale: Option<f64>) -> f64 {
    let s = scale.unwrap_or_else(|| FD_DEFAULT_SCALE * x.abs().max(1.0));
    pow2_floor(s * f64::EPSILON.cbrt())
}

/// Central-difference gradient and Hessian of `f` at `point`.
///
/// Gradient uses `±h`; diagonal Hessian entries use `±2h`; mixed entries use
/// the four `(±h, ±h)` corners. The stencil therefore has half-width `2h`.
/// The result is returned as a [`Jet2`] (Hessian symmetrized).
pub fn fd_hessian<F, E>(f: F, point: &[f64], scale: Option<f64>) -> Result<Jet2, E>
where
    F: Fn(&[f64]) -> Result<f64, E>,
{
    let m = point.len();
    let steps: Vec<f64> = point.iter().map(|&x| fd_step(x, scale)).collect();
    let f0 = f(point)?;
    let mut x = point.to_vec();
    let mut eval = |offsets: &[(usize, f64)]| -> Result<f64, E> {
        x.copy_from_slice(point);
        for &(k, d) in offsets {
            x[k] += d;
        }
        f(&x)
    };

    let mut grad = vec![0.0; m];
    let mut hess = vec![vec![0.0; m]; m];
    for i in 0..m {
        let h = steps[i];
        let fp = eval(&[(i, h)])?;
        let fm = eval(&[(i, -h)])?;
        grad[i] = (fp - fm) / (2.0 * h);
        let fpp = eval(&[(i, 2.0 * h)])?;
        let fmm = eval(&[(i, -2.0 * h)])?;
        hess[i][i] = (fpp - 2.0 * f0 + fmm) / (4.0 * h * h);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let (hi, hj) = (steps[i], steps[j]);
            let pp = eval(&[(i, hi), (j, hj)])?;
            let pm = eval(&[(i, hi), (j, -hj)])?;
            let mp = eval(&[(i, -hi), (j, hj)])?;
            let mm = eval(&[(i, -hi), (j, -hj)])?;
            let v = (pp - pm - mp + mm) / (4.0 * hi * hj);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    Ok(Jet2::from_parts(f0, grad, &hess))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn seed_examples() {
        let j = Jet2::seed(&[2.0, 3.0], 0).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.gradient(), &[1.0, 0.0]);
        assert!(j.hessian_rows().iter().flatten().all(|h| *h == 0.0));

        let j = Jet2::seed(&[5.0], 0).unwrap();
        assert_eq!((j.value(), j.gradient()), (5.0, &[1.0][..]));

        let j = Jet2::seed(&[1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(j.value(), 3.0);
        assert_eq!(j.gradient(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn seed_out_of_range() {
        assert_eq!(
            Jet2::seed(&[1.0, 2.0], 2),
            Err(JetError::Index { index: 2, dim: 2 })
        );
    }

    #[test]
    fn product_rule() {
        let mut x = Jet2::seed(&[2.0, 3.0], 0).unwrap();
        let y = Jet2::seed(&[2.0, 3.0], 1).unwrap();
        x = jet_apply(ElemOp::Mul, &[x, y]).unwrap();
        assert_eq!(x.value(), 6.0);
        assert_eq!(x.gradient(), &[3.0, 2.0]);
        assert_eq!(x.hessian_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn pythagorean_identity() {
        let p = [0.7, -1.3];
        let [x, y] = [Jet2::seed(&p, 0).unwrap(), Jet2::seed(&p, 1).unwrap()];
        let arg = &(&x * &y) + &x.sin();
        let s = arg.sin();
        let c = arg.cos();
        let one = &(&s * &s) + &(&c * &c);
        assert!(close(one.value(), 1.0, 1e-15));
        assert!(one.gradient().iter().all(|g| g.abs() < 1e-14));
        assert!(one.hessian_rows().iter().flatten().all(|h| h.abs() < 1e-14));
    }

    #[test]
    fn ln_abs_cos_2u() {
        // f' = -2 tan 2u, f'' = -4 / cos^2 2u
        let u = Jet2::seed(&[0.0], 0).unwrap();
        let f = u.scale(2.0).cos().ln_abs().unwrap();
        assert_eq!(f.value(), 0.0);
        assert_eq!(f.gradient()[0], 0.0);
        assert!(close(f.hessian(0, 0), -4.0, 1e-15));

        let u = Jet2::seed(&[0.3], 0).unwrap();
        let f = u.scale(2.0).cos().ln_abs().unwrap();
        let c = (0.6f64).cos();
        assert!(close(f.gradient()[0], -2.0 * 0.6f64.tan(), 1e-14));
        assert!(close(f.hessian(0, 0), -4.0 / (c * c), 1e-13));
    }

    #[test]
    fn domain_errors_carry_operation() {
        let x = Jet2::seed(&[-1.0], 0).unwrap();
        assert_eq!(x.sqrt(), Err(JetError::domain("sqrt", -1.0)));
        assert_eq!(x.ln(), Err(JetError::domain("ln", -1.0)));
        assert_eq!(x.powf(0.5), Err(JetError::domain("power", -1.0)));
        assert_eq!(x.acos(), Err(JetError::domain("arccos", -1.0)));
        let zero = Jet2::constant(0.0, 1);
        assert_eq!(x.try_div(&zero), Err(JetError::domain("division", 0.0)));
        assert_eq!(zero.ln_abs(), Err(JetError::domain("lnabs", 0.0)));
        assert!(x.ln_abs().is_ok());
    }

    #[test]
    fn integer_powers_accept_any_base() {
        let x = Jet2::seed(&[-2.0], 0).unwrap();
        let c = x.powf(3.0).unwrap();
        assert_eq!(c.value(), -8.0);
        assert_eq!(c.gradient()[0], 12.0);
        assert_eq!(c.hessian(0, 0), -12.0);

        let z = Jet2::seed(&[0.0], 0).unwrap();
        let l = z.powf(1.0).unwrap();
        assert_eq!((l.value(), l.gradient()[0], l.hessian(0, 0)), (0.0, 1.0, 0.0));
        let q = z.powf(2.0).unwrap();
        assert_eq!((q.value(), q.gradient()[0], q.hessian(0, 0)), (0.0, 0.0, 2.0));
        assert!(z.powf(-1.0).is_err());
    }

    #[test]
    fn arity_is_checked() {
        let x = Jet2::seed(&[1.0], 0).unwrap();
        assert!(matches!(
            jet_apply(ElemOp::Add, std::slice::from_ref(&x)),
            Err(JetError::Arity { .. })
        ));
        assert!(jet_apply(ElemOp::Sqrt, &[x.clone(), x]).is_err());
    }

    #[test]
    fn fd_examples() {
        let f = |p: &[f64]| -> Result<f64, ()> { Ok(p[0] * p[0] * p[1]) };
        let j = fd_hessian(f, &[1.0, 2.0], None).unwrap();
        assert!(close(j.gradient()[0], 4.0, 1e-6) && close(j.gradient()[1], 1.0, 1e-6));
        let h = j.hessian_rows();
        assert!(close(h[0][0], 4.0, 1e-6) && close(h[0][1], 2.0, 1e-6));
        assert!(close(h[1][0], 2.0, 1e-6) && close(h[1][1], 0.0, 1e-6));

        let c = fd_hessian(|_: &[f64]| -> Result<f64, ()> { Ok(3.25) }, &[0.4, 9.0], None).unwrap();
        assert!(c.gradient().iter().all(|g| *g == 0.0));
        assert!(c.hessian_rows().iter().flatten().all(|h| *h == 0.0));

        let e = fd_hessian(|p: &[f64]| -> Result<f64, ()> { Ok(p[0].exp()) }, &[0.0], None).unwrap();
        assert!(close(e.gradient()[0], 1.0, 1e-6));
        assert!(close(e.hessian(0, 0), 1.0, 1e-6));
    }

    #[test]
    fn fd_propagates_failure() {
        let r = fd_hessian(
            |p: &[f64]| if p[0] > 0.0 { Err("boom") } else { Ok(p[0]) },
            &[0.0],
            None,
        );
        assert_eq!(r, Err("boom"));
    }

    #[test]
    fn fd_step_is_power_of_two() {
        let h = fd_step(3.0, None);
        assert_eq!(h.log2().fract(), 0.0);
        let s = FD_DEFAULT_SCALE * 3.0 * f64::EPSILON.cbrt();
        assert!(h <= s && h > s / 2.0);
        assert_eq!(fd_step(0.01, None), fd_step(1.0, None));
    }
}
