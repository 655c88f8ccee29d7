//! Oracles shared by the integration tests. Nothing here calls the
//! library's closed forms or differentiation code.
#![allow(dead_code)]

use std::sync::Arc;

use isocurv::curveexpr::Curve1D;
use isocurv::families::{CurveSet, FamilyKind, FamilySpec};
use isocurv::geometry::ParamBox;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| <= tol * max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Cubic `c1 t + c2 t^2 + c3 t^3` with hand-written derivatives.
#[derive(Debug, Clone, Copy)]
pub struct Cubic(pub [f64; 3]);

impl Cubic {
    /// Coefficients of magnitude in `[0.2, 1]` with the given sign, so
    /// that the slope keeps that sign for `t > 0`.
    pub fn random<R: Rng>(rng: &mut R, sign: f64) -> Self {
        Cubic([0; 3].map(|_| sign * rng.gen_range(0.2..1.0)))
    }

    pub fn affine(slope: f64) -> Self {
        Cubic([slope, 0.0, 0.0])
    }

    pub fn expr(&self, var: &str) -> String {
        let [a, b, c] = self.0;
        format!("({a:e})*{var}+({b:e})*{var}^2+({c:e})*{var}^3")
    }

    pub fn curve(&self, var: &str) -> Curve1D {
        Curve1D::parse(&self.expr(var)).unwrap()
    }

    pub fn d1(&self, t: f64) -> f64 {
        let [a, b, c] = self.0;
        a + 2.0 * b * t + 3.0 * c * t * t
    }

    pub fn d2(&self, t: f64) -> f64 {
        let [_, b, c] = self.0;
        2.0 * b + 6.0 * c * t
    }
}

pub fn cubic_family(kind: FamilyKind, f: Cubic, g: Cubic, h: Cubic, lo: f64, hi: f64) -> FamilySpec {
    let curves = CurveSet {
        f: Some(Arc::new(f.curve("u"))),
        g: Some(Arc::new(g.curve("v"))),
        h: Some(Arc::new(h.curve("w"))),
    };
    FamilySpec::raw(kind, curves, Some(ParamBox::new(vec![(lo, hi); 3])))
}

/// `(K, H)` written out from the closed forms for the translation types,
/// given `(f', f'', g', g'', h', h'')`.
pub fn reference_curvatures(kind: FamilyKind, d: [f64; 6]) -> (f64, f64) {
    let [f1, f2, g1, g2, h1, h2] = d;
    match kind {
        FamilyKind::Type2 => {
            let k = g1 * f2 * g2 * h2 / f1.powi(3);
            let h3 = f2 * g1 / f1.powi(3) + g2 * (1.0 + f1 * f1) / (f1 * f1) + h2;
            (k, h3 / 3.0)
        }
        FamilyKind::Type3 => {
            let k = h1 * h1 * f2 * g2 * h2 / (f1 * g1).powi(3);
            let h3 = h1 * (f2 / f1.powi(3) + g2 / g1.powi(3)) + h2 * (1.0 + 1.0 / (f1 * f1) + 1.0 / (g1 * g1));
            (k, h3 / 3.0)
        }
        FamilyKind::Type4 => {
            let e = f1 - g1;
            let k = 8.0 * f2 * g2 * h2 / (49.0 * e.powi(5));
            let a = 37.0 * g1 * g1 + 2.0 * h1 * h1 - 10.0 * g1 * h1 + 49.0;
            let b = 37.0 * f1 * f1 + 2.0 * h1 * h1 - 10.0 * f1 * h1 + 49.0;
            let h3 = 2.0 / (49.0 * e.powi(3)) * (a * f2 + b * g2 + 2.0 * h2 * e * e);
            (k, h3 / 3.0)
        }
        other => panic!("no closed form for {other}"),
    }
}

/// Central differences of `f` at `t` for the first three derivatives,
/// extrapolated twice (Richardson, step ratio 2) to remove the `h^2` and
/// `h^4` error terms.
pub fn richardson<F: Fn(f64) -> f64>(f: F, t: f64) -> [f64; 3] {
    let d = |h: f64| -> [f64; 3] {
        let (p1, m1, p2, m2, z) = (f(t + h), f(t - h), f(t + 2.0 * h), f(t - 2.0 * h), f(t));
        [
            (p1 - m1) / (2.0 * h),
            (p1 - 2.0 * z + m1) / (h * h),
            (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h),
        ]
    };
    let (a, b, c) = (d(0.04), d(0.02), d(0.01));
    [0, 1, 2].map(|i| {
        let ab = (4.0 * b[i] - a[i]) / 3.0;
        let bc = (4.0 * c[i] - b[i]) / 3.0;
        (16.0 * bc - ab) / 15.0
    })
}

/// Expressions with an evaluation point at which they are smooth.
pub const CORPUS: &[(&str, f64)] = &[
    ("u", 0.3),
    ("u^2", 0.7),
    ("u^3 - 2*u + 1", -0.4),
    ("-u^2", 0.5),
    ("2^u", 0.6),
    ("u^-1", 1.3),
    ("u^(-2)", 0.9),
    ("u^1.5", 1.2),
    ("(1+u^2)^(1/3)", 0.8),
    ("sqrt(u)", 2.0),
    ("sqrt(-2*u + 3)", 0.5),
    ("exp(u)", 0.1),
    ("exp(-u^2)", 0.4),
    ("ln(u)", 1.7),
    ("ln(1 + u^2)", -0.8),
    ("lnabs(u)", -1.5),
    ("lnabs(cos(u))", 2.0),
    ("-(1/2)*lnabs(cos(2*u))", 0.3),
    ("sin(u)", 0.2),
    ("cos(3*u)", 0.25),
    ("tan(u)", 0.6),
    ("arccos(u)", 0.3),
    ("arccos(0.5*exp(u))", -0.2),
    ("tanh(u)", 0.9),
    ("tanh(2*u - 1)", 0.1),
    ("sin(u)*cos(u)", 0.45),
    ("exp(u)/(1 + u^2)", 0.35),
    ("u*exp(-u)", 1.1),
    ("(u - 1)/(u + 2)", 0.0),
    ("1/(3*2)*(2*2*u + 1)^1.5", 0.4),
    ("-(1/3)*sqrt(-2*3*u + 1)", -0.5),
    ("pi*u^2", 0.5),
    ("sin(pi*u)", 0.15),
    ("2*u - (1/2)*lnabs(2*u + 1)", 0.75),
    ("5/2*u + lnabs(cos(-2*u + 0.1))", 0.2),
    ("1.5e-1*u^4 - 2E0*u", 0.95),
    ("sqrt(sqrt(u))", 1.6),
    ("exp(sin(u))", 1.0),
    ("ln(exp(u) + exp(-u))", 0.3),
    ("tan(u/2)^2", 0.7),
];

/// Malformed inputs and the byte offset the error must point at.
pub const MALFORMED: &[(&str, usize)] = &[
    ("sqrt(", 5),
    ("2u", 1),
    ("1 +", 3),
    ("(u", 2),
    ("u)", 1),
    ("u + * 2", 4),
    ("foo(u)", 0),
    ("u $ 2", 2),
    ("", 0),
    ("u + v", 4),
    ("sin u", 0),
    ("1.2.3", 0),
];
