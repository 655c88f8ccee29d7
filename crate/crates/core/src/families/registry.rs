use std::collections::BTreeMap;
use std::sync::Arc;

use super::{lit, preimage, scherk_domain, CurvaturePrediction, CurveSet, FamilyKind, FamilySpec};
use crate::curveexpr::{parse, Curve1D, Provenance};
use crate::geometry::ParamBox;
use crate::{Error, Result};

/// How a branch is realized as an immersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Realization {
    /// The kind's own parametrization with the branch's curves.
    Kind(FamilyKind),
    /// `((1/l) ln|cos(l u) / (l v)|, w, u, v + p w^2)` with `l = lambda`,
    /// `p = parabola`.
    ScherkCylinder { lambda: f64, parabola: f64 },
}

/// A registry branch with its parameters resolved.
#[derive(Debug, Clone)]
pub struct BranchInstance {
    pub id: &'static str,
    /// Input parameters merged with defaults, plus derived constants.
    pub params: BTreeMap<String, f64>,
    pub realization: Realization,
    pub prediction: CurvaturePrediction,
    /// Residual catalog entries the branch's curves satisfy.
    pub residuals: &'static [&'static str],
}

/// Static description of a registry branch.
#[derive(Debug, Clone, Copy)]
pub struct BranchInfo {
    pub id: &'static str,
    /// Parameter names with default values, in display order.
    pub params: &'static [(&'static str, f64)],
    pub constraints: &'static str,
    pub prediction: &'static str,
    pub residuals: &'static [&'static str],
}

macro_rules! branch {
    ($id:expr, [$($p:expr => $v:expr),*], $c:expr, $pred:expr, [$($r:expr),*]) => {
        BranchInfo {
            id: $id,
            params: &[$(($p, $v)),*],
            constraints: $c,
            prediction: $pred,
            residuals: &[$($r),*],
        }
    };
}

static BRANCHES: &[BranchInfo] = &[
    branch!("thm4.1", ["lambda" => 1.0, "mu" => 1.0, "xi" => 1.0, "c1" => 0.0, "c3" => 0.0],
        "lambda*mu*xi != 0", "K0 = lambda*mu*xi", ["4.3-f", "4.3-g", "4.3-h"]),
    branch!("thm4.2", ["lambda" => 1.0, "c1" => 0.5, "c2" => 1.0],
        "lambda != 0, c1 > 0, c2 != 0", "H0 = 0", ["4.4", "4.4-h", "4.5", "4.6-f", "4.6-g"]),
    branch!("thm4.3-i", ["H0" => 1.0, "lambda" => 0.0],
        "H0 != 0", "H0 = H0, K0 = 0", ["4.9"]),
    branch!("thm4.3-ii", ["lambda" => 1.0, "mu" => 1.0, "H0" => 1.0],
        "lambda > 0, mu != 0, H0 != 0", "H0 = H0, K0 = 0", ["4.9", "4.10"]),
    branch!("thm4.3-iii", ["H0" => 1.0, "mu" => 1.0, "xi" => 0.0, "c3" => 0.0],
        "H0 != 0, mu != 0, xi != 3*H0/2", "H0 = H0, K0 = 0", ["4.9", "4.10"]),
    branch!("thm4.3-iv", ["lambda" => 1.0, "H0" => 1.0, "xi" => 0.0],
        "lambda > 0, H0 != 0, xi != 3*H0/2; mu = (3*H0-2*xi)*lambda^2/(2*(1+lambda^2))",
        "H0 = H0, K0 = 0", ["4.9"]),
    branch!("thm4.3-v", ["lambda" => 1.0, "H0" => 1.0, "c1" => 0.5, "c2" => 1.0],
        "lambda != 0, H0 != 0, c1 > 0, c2 != 0", "H0 = H0", ["4.11-f", "4.11-g", "4.9"]),
    branch!("thm5.1", ["lambda" => 1.0, "mu" => 1.0, "xi" => 1.0, "c1" => 0.0, "c3" => 0.0, "c5" => 0.0],
        "lambda*mu*xi != 0", "K0 = lambda*mu*xi", ["5.3-f", "5.3-g", "5.3-h"]),
    branch!("thm5.2-i", ["lambda" => 1.0],
        "none", "H0 = 0", ["5.4"]),
    branch!("thm5.2-ii", ["f0" => 1.0, "lambda" => 1.0, "c1" => 0.25, "c2" => 1.0],
        "f0 > 0, lambda != 0, c1 > 0, c2 != 0", "H0 = 0", ["5.4", "5.6-g", "5.6-h"]),
    branch!("thm5.2-iii", ["lambda" => 1.0, "h0" => 1.0, "c1" => 0.0, "c3" => 0.0],
        "lambda != 0, h0 != 0", "H0 = 0", ["5.4", "5.7-f", "5.7-g"]),
    branch!("thm5.2-iv", ["mu" => 1.0, "xi" => 1.0, "c1" => 1.0, "c2" => 1.0, "c4" => 1.0],
        "mu != 0, c1*c2*c4 != 0; rho = -mu-xi", "H0 = 0", ["5.4", "5.8", "5.9", "5.10"]),
    branch!("thm5.3-i", ["f0" => 1.0, "g0" => 1.0, "H0" => 1.0],
        "f0*g0 > 0, H0 != 0; mutilde = (f0^2+1)/f0^2 + 1/g0^2", "H0 = H0", ["5.12"]),
    branch!("thm5.3-ii", ["f0" => 1.0, "H0" => 1.0, "h0" => 1.0, "c3" => 0.0],
        "f0 > 0, H0 != 0, h0 != 0", "H0 = H0", ["5.12", "5.13"]),
    branch!("thm5.3-iii", ["H0" => 1.0, "h0" => 1.0, "lambda" => 1.0, "c1" => 0.0, "c3" => 0.0],
        "H0 != 0, h0 != 0, lambda != 0, lambda != 3*H0/h0", "H0 = H0", ["5.14"]),
    branch!("thm6.2-i", ["f0" => 1.0, "lambda" => 1.0, "c1" => 0.0, "c3" => 0.0],
        "lambda != 0", "H0 = 0", ["6.5", "6.6", "6.7-g", "6.7-h"]),
    branch!("thm6.2-ii", ["lambda" => 0.02, "h0" => 0.0, "c1" => 0.0, "c3" => 0.0],
        "lambda != 0; mu = sqrt(1813 + 49*h0^2)", "H0 = 0", ["6.5", "6.8-f", "6.8-g"]),
    branch!("thm6.3-i", ["lambda" => 1.0, "mu" => 0.0, "xi" => 18.375],
        "lambda > mu, xi != 0", "H0 = 8*xi/(147*(lambda-mu)), K0 = 0", ["6.9"]),
    branch!("thm6.3-ii", ["f0" => 0.0, "h0" => 0.0, "H0" => 1.0, "c1" => 0.0],
        "H0 != 0; mutilde = (147*H0/2)/(37*f0^2 + 2*h0^2 - 10*h0*f0 + 49)", "H0 = H0", ["6.9", "6.10"]),
    branch!("scherk-i3-1", ["c" => 1.0], "c != 0", "H0 = 0", []),
    branch!("scherk-i3-2", ["c" => 1.0], "c != 0", "H0 = 0", []),
    branch!("scherk-i3-3", ["c" => 1.0], "c != 0", "H0 = 0", []),
    branch!("codim2-type3-minimal", ["c" => 1.0], "c != 0", "none (codimension 2)", ["7.1"]),
];

/// All registry branches in display order.
pub fn branches() -> &'static [BranchInfo] {
    BRANCHES
}

pub fn branch_info(id: &str) -> Option<&'static BranchInfo> {
    BRANCHES.iter().find(|b| b.id == id)
}

struct Ctx<'a> {
    id: &'static str,
    p: &'a BTreeMap<String, f64>,
}

impl Ctx<'_> {
    fn get(&self, k: &str) -> f64 {
        self.p[k]
    }

    fn require(&self, ok: bool, message: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Constraint {
                branch: self.id.into(),
                message: message.into(),
            })
        }
    }
}

struct Built {
    realization: Realization,
    curves: CurveSet,
    domain: Vec<(f64, f64)>,
    prediction: CurvaturePrediction,
    derived: Vec<(&'static str, f64)>,
}

fn curve(src: &str, interval: (f64, f64)) -> Curve1D {
    Curve1D::builtin(src).with_interval(interval.0, interval.1)
}

fn integral_curve(d1: &str, interval: (f64, f64)) -> Curve1D {
    let ast = parse(d1).unwrap_or_else(|e| panic!("builtin curve {d1:?}: {e}"));
    Curve1D::from_derivative(ast, interval.0, 0.0, Provenance::Builtin).with_interval(interval.0, interval.1)
}

const UNIT: (f64, f64) = (-1.0, 1.0);

/// `-(1/a) sqrt(-2 a t + c)`: solves `y''/y'^3 = a` with `y' > 0`; the
/// radicand is kept in `[1, 2]`.
fn inverse_sqrt_curve(var: &str, a: f64, c: f64) -> Curve1D {
    let (al, cl) = (lit(a), lit(c));
    curve(
        &format!("-(1/{al})*sqrt(-2*{al}*{var}+{cl})"),
        preimage(-2.0 * a, c, 1.0, 2.0),
    )
}

/// Interval of `t` on which `base + coef e^(2 mu t)` stays at least 1/2,
/// spanning a factor `e` in the exponential term.
fn exp_window(ctx: &Ctx, base: f64, coef: f64, mu: f64) -> Result<(f64, f64)> {
    let (x1, x2) = if coef > 0.0 {
        let lo = (0.5 - base).max(0.0) + 0.5;
        (lo, lo * std::f64::consts::E)
    } else {
        let q = base - 0.5;
        ctx.require(q > 0.0, "no window keeps the derivative radicand positive")?;
        (-q, -q / std::f64::consts::E)
    };
    let t1 = (x1 / coef).ln() / (2.0 * mu);
    let t2 = (x2 / coef).ln() / (2.0 * mu);
    Ok((t1.min(t2), t1.max(t2)))
}

fn pred(k: Option<f64>, h: Option<f64>) -> CurvaturePrediction {
    CurvaturePrediction { k, h }
}

fn instantiate(ctx: &Ctx) -> Result<Built> {
    let p = |k: &str| ctx.get(k);
    let kind2 = Realization::Kind(FamilyKind::Type2);
    let kind3 = Realization::Kind(FamilyKind::Type3);
    let kind4 = Realization::Kind(FamilyKind::Type4);
    let built = |realization, curves, domain, prediction, derived| Built {
        realization,
        curves,
        domain,
        prediction,
        derived,
    };
    Ok(match ctx.id {
        "thm4.1" => {
            let (l, m, x) = (p("lambda"), p("mu"), p("xi"));
            ctx.require(l * m * x != 0.0, "lambda*mu*xi must be nonzero")?;
            let f = inverse_sqrt_curve("u", l, p("c1"));
            let (ml, c3) = (lit(m), lit(p("c3")));
            let g = curve(
                &format!("(1/(3*{ml}))*(2*{ml}*v+{c3})^1.5"),
                preimage(2.0 * m, p("c3"), 1.0, 2.0),
            );
            let h = curve(&format!("({}/2)*w^2", lit(x)), UNIT);
            let dom = vec![f.interval().unwrap(), g.interval().unwrap(), UNIT];
            built(kind2, CurveSet::new(f, g, h), dom, pred(Some(l * m * x), None), vec![])
        }
        "thm4.2" | "thm4.3-v" => {
            let l = p("lambda");
            let (c1, c2) = (p("c1"), p("c2"));
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            ctx.require(c1 > 0.0, "c1 must be positive")?;
            ctx.require(c2 != 0.0, "c2 must be nonzero")?;
            let ll = lit(l);
            let f = curve(
                &format!("-(1/{ll})*arccos({}*exp({ll}*u))", lit(c1)),
                preimage(l, 0.0, (0.2 / c1).ln(), (0.8 / c1).ln()),
            );
            let g = curve(&format!("-({}/{ll})*exp(-{ll}*v)", lit(c2)), UNIT);
            let tu = preimage(l, 0.0, -1.0, 1.0);
            if ctx.id == "thm4.2" {
                let h = curve("0", UNIT);
                let dom = vec![tu, preimage(l, 0.0, 0.5, 2.0), UNIT];
                let real = Realization::ScherkCylinder {
                    lambda: l,
                    parabola: 0.0,
                };
                built(real, CurveSet::new(f, g, h), dom, pred(None, Some(0.0)), vec![("h0", 0.0)])
            } else {
                let h0 = p("H0");
                ctx.require(h0 != 0.0, "H0 must be nonzero")?;
                let h = curve(&format!("(3*{}/2)*w^2", lit(h0)), UNIT);
                let dom = vec![tu, preimage(l, 0.0, -2.0, -0.5), UNIT];
                let real = Realization::ScherkCylinder {
                    lambda: l,
                    parabola: 1.5 * h0,
                };
                built(real, CurveSet::new(f, g, h), dom, pred(None, Some(h0)), vec![])
            }
        }
        "thm4.3-i" => {
            let h0 = p("H0");
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            let curves = CurveSet::new(
                curve("exp(u)", UNIT),
                curve(&lit(p("lambda")), UNIT),
                curve(&format!("(3*{}/2)*w^2", lit(h0)), UNIT),
            );
            built(kind2, curves, vec![UNIT; 3], pred(Some(0.0), Some(h0)), vec![])
        }
        "thm4.3-ii" => {
            let (l, m, h0) = (p("lambda"), p("mu"), p("H0"));
            ctx.require(l > 0.0, "lambda must be positive")?;
            ctx.require(m != 0.0, "mu must be nonzero")?;
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(l)), UNIT),
                curve(&format!("{}*v", lit(m)), UNIT),
                curve(&format!("(3*{}/2)*w^2", lit(h0)), UNIT),
            );
            built(kind2, curves, vec![UNIT; 3], pred(Some(0.0), Some(h0)), vec![("g0", m), ("h0", 3.0 * h0)])
        }
        "thm4.3-iii" => {
            let (h0, m, x) = (p("H0"), p("mu"), p("xi"));
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            ctx.require(m != 0.0, "mu must be nonzero")?;
            ctx.require(x != 1.5 * h0, "xi must differ from 3*H0/2")?;
            let a = (3.0 * h0 - 2.0 * x) / m;
            let f = inverse_sqrt_curve("u", a, p("c3"));
            let dom = vec![f.interval().unwrap(), UNIT, UNIT];
            let curves = CurveSet::new(
                f,
                curve(&format!("{}*v", lit(m)), UNIT),
                curve(&format!("{}*w^2", lit(x)), UNIT),
            );
            built(kind2, curves, dom, pred(Some(0.0), Some(h0)), vec![("a", a), ("g0", m), ("h0", 2.0 * x)])
        }
        "thm4.3-iv" => {
            let (l, h0, x) = (p("lambda"), p("H0"), p("xi"));
            ctx.require(l > 0.0, "lambda must be positive")?;
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            ctx.require(x != 1.5 * h0, "xi must differ from 3*H0/2")?;
            let m = (3.0 * h0 - 2.0 * x) * l * l / (2.0 * (1.0 + l * l));
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(l)), UNIT),
                curve(&format!("{}*v^2", lit(m)), UNIT),
                curve(&format!("{}*w^2", lit(x)), UNIT),
            );
            built(kind2, curves, vec![UNIT; 3], pred(Some(0.0), Some(h0)), vec![("mu", m)])
        }
        "thm5.1" => {
            let (l, m, x) = (p("lambda"), p("mu"), p("xi"));
            ctx.require(l * m * x != 0.0, "lambda*mu*xi must be nonzero")?;
            let f = inverse_sqrt_curve("u", l, p("c1"));
            let g = inverse_sqrt_curve("v", m, p("c3"));
            let (xl, c5) = (lit(x), lit(p("c5")));
            let h = curve(
                &format!("(1/(4*{xl}))*(3*{xl}*w+{c5})^(4/3)"),
                preimage(3.0 * x, p("c5"), 1.0, 2.0),
            );
            let dom = vec![f.interval().unwrap(), g.interval().unwrap(), h.interval().unwrap()];
            built(kind3, CurveSet::new(f, g, h), dom, pred(Some(l * m * x), None), vec![])
        }
        "thm5.2-i" => {
            let curves = CurveSet::new(curve("exp(u)", UNIT), curve("exp(v)", UNIT), curve(&lit(p("lambda")), UNIT));
            built(kind3, curves, vec![UNIT; 3], pred(None, Some(0.0)), vec![])
        }
        "thm5.2-ii" => {
            let (f0, l, c1, c2) = (p("f0"), p("lambda"), p("c1"), p("c2"));
            ctx.require(f0 > 0.0, "f0 must be positive")?;
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            ctx.require(c1 > 0.0, "c1 must be positive")?;
            ctx.require(c2 != 0.0, "c2 must be nonzero")?;
            let s = 1.0 + f0 * f0;
            let k = c1 * s;
            let ll = lit(l);
            let g = curve(
                &format!("-{}*arccos({}*exp({ll}*v))", lit(f0 / (l * s.sqrt())), lit(k)),
                preimage(l, 0.0, (0.2 / k).ln(), (0.8 / k).ln()),
            );
            let dom = vec![UNIT, g.interval().unwrap(), UNIT];
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(f0)), UNIT),
                g,
                curve(&format!("-({}/{ll})*exp(-{ll}*w)", lit(c2)), UNIT),
            );
            built(kind3, curves, dom, pred(None, Some(0.0)), vec![])
        }
        "thm5.2-iii" => {
            let (l, h0) = (p("lambda"), p("h0"));
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            ctx.require(h0 != 0.0, "h0 must be nonzero")?;
            let f = inverse_sqrt_curve("u", l, p("c1"));
            let ll = lit(l);
            let g = curve(
                &format!("(1/{ll})*sqrt(2*{ll}*v+{})", lit(p("c3"))),
                preimage(2.0 * l, p("c3"), 1.0, 2.0),
            );
            let dom = vec![f.interval().unwrap(), g.interval().unwrap(), UNIT];
            let h = curve(&format!("{}*w", lit(h0)), UNIT);
            built(kind3, CurveSet::new(f, g, h), dom, pred(None, Some(0.0)), vec![])
        }
        "thm5.2-iv" => {
            let (m, x, c1, c2, c4) = (p("mu"), p("xi"), p("c1"), p("c2"), p("c4"));
            ctx.require(m != 0.0, "mu must be nonzero")?;
            ctx.require(c1 * c2 * c4 != 0.0, "c1, c2 and c4 must be nonzero")?;
            let rho = -m - x;
            let slope = |base: f64, coef: f64, var: &str| {
                format!("({}+{}*exp({}*{var}))^(-0.5)", lit(base), lit(coef), lit(2.0 * m))
            };
            let iu = exp_window(ctx, x / m, c2 / m, m)?;
            let iv = exp_window(ctx, rho / m, c4 / m, m)?;
            let f = integral_curve(&slope(x / m, c2 / m, "u"), iu);
            let g = integral_curve(&slope(rho / m, c4 / m, "v"), iv);
            let h = curve(&format!("{}*exp({}*w)", lit(c1), lit(m)), UNIT);
            built(kind3, CurveSet::new(f, g, h), vec![iu, iv, UNIT], pred(None, Some(0.0)), vec![("rho", rho)])
        }
        "thm5.3-i" => {
            let (f0, g0, h0) = (p("f0"), p("g0"), p("H0"));
            ctx.require(f0 * g0 > 0.0, "f0*g0 must be positive")?;
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            let mt = (f0 * f0 + 1.0) / (f0 * f0) + 1.0 / (g0 * g0);
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(f0)), UNIT),
                curve(&format!("{}*v", lit(g0)), UNIT),
                curve(&format!("{}*w^2", lit(3.0 * h0 / (2.0 * mt))), UNIT),
            );
            built(kind3, curves, vec![UNIT; 3], pred(None, Some(h0)), vec![("mutilde", mt)])
        }
        "thm5.3-ii" => {
            let (f0, h0, hh) = (p("f0"), p("H0"), p("h0"));
            ctx.require(f0 > 0.0, "f0 must be positive")?;
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            ctx.require(hh != 0.0, "h0 must be nonzero")?;
            let a = 3.0 * h0 / hh;
            let g = inverse_sqrt_curve("v", a, p("c3"));
            let dom = vec![UNIT, g.interval().unwrap(), UNIT];
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(f0)), UNIT),
                g,
                curve(&format!("{}*w", lit(hh)), UNIT),
            );
            built(kind3, curves, dom, pred(None, Some(h0)), vec![("a", a)])
        }
        "thm5.3-iii" => {
            let (h0, hh, l) = (p("H0"), p("h0"), p("lambda"));
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            ctx.require(hh != 0.0, "h0 must be nonzero")?;
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            let a = 3.0 * h0 / hh;
            ctx.require(l != a, "lambda must differ from 3*H0/h0")?;
            let b = a - l;
            let f = inverse_sqrt_curve("u", b, p("c1"));
            let g = inverse_sqrt_curve("v", l, p("c3"));
            let dom = vec![f.interval().unwrap(), g.interval().unwrap(), UNIT];
            let h = curve(&format!("{}*w", lit(hh)), UNIT);
            built(kind3, CurveSet::new(f, g, h), dom, pred(None, Some(h0)), vec![("a", a), ("b", b)])
        }
        "thm6.2-i" => {
            let (f0, l, c1, c3) = (p("f0"), p("lambda"), p("c1"), p("c3"));
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            let k = 7.0 * l * (2.0 + f0 * f0).sqrt() / 2.0;
            let (fl, ll) = (lit(f0), lit(l));
            let g = curve(
                &format!("{fl}*v-(1/{ll})*lnabs({ll}*v+{})", lit(c1)),
                preimage(l, c1, 0.5, 2.0),
            );
            let h = curve(
                &format!("(5*{fl}/2)*w+(1/{ll})*lnabs(cos({}*w+{}))", lit(-k), lit(c3)),
                preimage(-k, c3, -1.0, 1.0),
            );
            let dom = vec![UNIT, g.interval().unwrap(), h.interval().unwrap()];
            let f = curve(&format!("{fl}*u"), UNIT);
            built(kind4, CurveSet::new(f, g, h), dom, pred(None, Some(0.0)), vec![])
        }
        "thm6.2-ii" => {
            let (l, hh, c1, c3) = (p("lambda"), p("h0"), p("c1"), p("c3"));
            ctx.require(l != 0.0, "lambda must be nonzero")?;
            let mu = (1813.0 + 49.0 * hh * hh).sqrt();
            let (ll, slope) = (lit(l), lit(5.0 * hh / 37.0));
            let f = curve(
                &format!("-(1/(37*{ll}))*lnabs(cos({}*u+{}))+{slope}*u", lit(mu * l), lit(c1)),
                preimage(mu * l, c1, 0.1, 1.0),
            );
            let g = curve(
                &format!("(1/(37*{ll}))*lnabs(cos({}*v+{}))+{slope}*v", lit(-mu * l), lit(c3)),
                preimage(-mu * l, c3, -1.0, -0.1),
            );
            let dom = vec![f.interval().unwrap(), g.interval().unwrap(), UNIT];
            let h = curve(&format!("{}*w", lit(hh)), UNIT);
            built(kind4, CurveSet::new(f, g, h), dom, pred(None, Some(0.0)), vec![("mu", mu)])
        }
        "thm6.3-i" => {
            let (l, m, x) = (p("lambda"), p("mu"), p("xi"));
            ctx.require(l > m, "lambda must exceed mu")?;
            ctx.require(x != 0.0, "xi must be nonzero")?;
            let h0 = 8.0 * x / (147.0 * (l - m));
            let curves = CurveSet::new(
                curve(&format!("{}*u", lit(l)), UNIT),
                curve(&format!("{}*v", lit(m)), UNIT),
                curve(&format!("{}*w^2", lit(x)), UNIT),
            );
            built(kind4, curves, vec![UNIT; 3], pred(Some(0.0), Some(h0)), vec![("f0", l), ("H0", h0)])
        }
        "thm6.3-ii" => {
            let (f0, hh, h0, c1) = (p("f0"), p("h0"), p("H0"), p("c1"));
            ctx.require(h0 != 0.0, "H0 must be nonzero")?;
            let q = 37.0 * f0 * f0 + 2.0 * hh * hh - 10.0 * hh * f0 + 49.0;
            let mt = 147.0 * h0 / 2.0 / q;
            let fl = lit(f0);
            let g = curve(
                &format!("{fl}*v-(1/{})*sqrt(2*{}*v+{})", lit(mt), lit(mt), lit(c1)),
                preimage(2.0 * mt, c1, 1.0, 2.0),
            );
            let dom = vec![UNIT, g.interval().unwrap(), UNIT];
            let curves = CurveSet::new(curve(&format!("{fl}*u"), UNIT), g, curve(&format!("{}*w", lit(hh)), UNIT));
            built(kind4, curves, dom, pred(None, Some(h0)), vec![("mutilde", mt)])
        }
        "scherk-i3-1" | "scherk-i3-2" | "scherk-i3-3" => {
            let kind: FamilyKind = ctx.id.parse()?;
            let dom = scherk_domain(kind, p("c"))?;
            built(
                Realization::Kind(kind),
                CurveSet::default(),
                dom.bounds().to_vec(),
                pred(None, Some(0.0)),
                vec![],
            )
        }
        "codim2-type3-minimal" => {
            let c = p("c");
            ctx.require(c != 0.0, "c must be nonzero")?;
            let (cl, k) = (lit(c), lit(std::f64::consts::SQRT_2 * c));
            let iv = preimage(std::f64::consts::SQRT_2 * c, 0.0, -1.0, 1.0);
            let f = curve(&format!("-(1/{cl})*lnabs(cos({k}*u))"), iv);
            let g = curve(&format!("(1/{cl})*lnabs(cos({k}*v))"), iv);
            built(
                Realization::Kind(FamilyKind::Codim2Type3),
                CurveSet::pair(f, g),
                vec![iv, iv],
                CurvaturePrediction::default(),
                vec![],
            )
        }
        other => return Err(Error::UnknownBranch(other.into())),
    })
}

/// Instantiates a registry branch. `params` overrides the defaults listed
/// in [`branches`]; unknown names are rejected.
pub fn theorem_family(id: &str, params: &BTreeMap<String, f64>) -> Result<(FamilySpec, CurvaturePrediction)> {
    let info = branch_info(id).ok_or_else(|| Error::UnknownBranch(id.into()))?;
    let mut merged: BTreeMap<String, f64> = info.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in params {
        if !merged.contains_key(k) {
            let known: Vec<&str> = info.params.iter().map(|(k, _)| *k).collect();
            return Err(Error::Constraint {
                branch: id.into(),
                message: format!("unknown parameter {k:?} (expected one of {})", known.join(", ")),
            });
        }
        if !v.is_finite() {
            return Err(Error::Constraint {
                branch: id.into(),
                message: format!("parameter {k} must be finite"),
            });
        }
        merged.insert(k.clone(), *v);
    }
    let ctx = Ctx {
        id: info.id,
        p: &merged,
    };
    let built = instantiate(&ctx)?;
    let mut all = merged.clone();
    for (k, v) in built.derived {
        all.insert(k.to_string(), v);
    }
    let instance = BranchInstance {
        id: info.id,
        params: all.clone(),
        realization: built.realization,
        prediction: built.prediction,
        residuals: info.residuals,
    };
    let spec = FamilySpec {
        kind: FamilyKind::TheoremBranch,
        curves: built.curves,
        params: all,
        branch: Some(Arc::new(instance)),
        domain: Some(ParamBox::new(built.domain)),
    };
    Ok((spec, built.prediction))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn every_branch_instantiates_with_defaults() {
        for b in branches() {
            let (spec, _) = theorem_family(b.id, &BTreeMap::new()).unwrap_or_else(|e| panic!("{}: {e}", b.id));
            super::super::build(&spec).unwrap_or_else(|e| panic!("{}: {e}", b.id));
        }
    }

    #[test]
    fn predictions() {
        let (_, p) = theorem_family("thm4.1", &params(&[("lambda", 1.0), ("mu", 1.0), ("xi", 1.0)])).unwrap();
        assert_eq!(p.k, Some(1.0));
        let (_, p) = theorem_family("thm6.3-i", &BTreeMap::new()).unwrap();
        assert_eq!(p.h, Some(1.0));
    }

    #[test]
    fn constraint_violations() {
        let r = theorem_family("thm4.3-iii", &params(&[("H0", 1.0), ("xi", 1.5)]));
        assert!(matches!(r, Err(Error::Constraint { .. })));
        assert!(matches!(
            theorem_family("thm9.9", &BTreeMap::new()),
            Err(Error::UnknownBranch(_))
        ));
        assert!(theorem_family("thm4.1", &params(&[("nu", 1.0)])).is_err());
        assert!(theorem_family("thm6.3-i", &params(&[("lambda", 0.0)])).is_err());
        assert!(theorem_family("thm5.2-iv", &params(&[("c2", -1.0), ("xi", 0.25)])).is_err());
        assert!(theorem_family("thm5.2-iv", &params(&[("c2", -1.0)])).is_ok());
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = branches().iter().map(|b| b.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), branches().len());
    }
}
