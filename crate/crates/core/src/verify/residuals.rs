use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families::{FamilyKind, FamilySpec};
use crate::{Error, Result};

/// Derivatives `[y, y', y'', y''']` of the three generating curves at the
/// point's coordinates. Missing slots are zero.
#[derive(Debug, Clone, Copy)]
pub struct CurveJets {
    pub f: [f64; 4],
    pub g: [f64; 4],
    pub h: [f64; 4],
}

type Formula = fn(&CurveJets, &[f64]) -> f64;

/// One entry of the residual catalog: a separation equation written as
/// `left - right`.
#[derive(Clone, Copy)]
pub struct ResidualSpec {
    pub name: &'static str,
    pub kind: FamilyKind,
    /// Highest derivative order read from the curves.
    pub order: usize,
    /// Constants substituted from the family parameters, in the order the
    /// formula receives them.
    pub constants: &'static [&'static str],
    pub equation: &'static str,
    formula: Formula,
}

impl std::fmt::Debug for ResidualSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResidualSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("order", &self.order)
            .field("constants", &self.constants)
            .finish()
    }
}

impl ResidualSpec {
    pub fn eval(&self, d: &CurveJets, constants: &[f64]) -> f64 {
        (self.formula)(d, constants)
    }
}

use FamilyKind::{Codim2Type3 as C2, Type2 as T2, Type3 as T3, Type4 as T4};

macro_rules! entry {
    ($name:expr, $kind:expr, $order:expr, [$($c:expr),*], $eq:expr, $f:expr) => {
        ResidualSpec {
            name: $name,
            kind: $kind,
            order: $order,
            constants: &[$($c),*],
            equation: $eq,
            formula: $f,
        }
    };
}

fn mean_t2(d: &CurveJets) -> f64 {
    let (f1, f2, g1, g2) = (d.f[1], d.f[2], d.g[1], d.g[2]);
    f2 * g1 / f1.powi(3) + g2 * (1.0 + f1 * f1) / (f1 * f1)
}

fn q(h1: f64, p: f64) -> f64 {
    2.0 * h1 * h1 - 10.0 * p * h1 + 37.0 * p * p + 49.0
}

static CATALOG: &[ResidualSpec] = &[
    entry!("4.3-f", T2, 2, ["lambda"], "f''/f'^3 = lambda", |d, c| d.f[2] / d.f[1].powi(3) - c[0]),
    entry!("4.3-g", T2, 2, ["mu"], "g' g'' = mu", |d, c| d.g[1] * d.g[2] - c[0]),
    entry!("4.3-h", T2, 2, ["xi"], "h'' = xi", |d, c| d.h[2] - c[0]),
    entry!("4.4", T2, 2, [], "f''g'/f'^3 + g''(1+f'^2)/f'^2 + h'' = 0", |d, _| mean_t2(d) + d.h[2]),
    entry!("4.4-h", T2, 2, ["h0"], "h'' = h0", |d, c| d.h[2] - c[0]),
    entry!("4.5", T2, 2, [], "f''/(f'(1+f'^2)) + g''/g' = 0", |d, _| {
        d.f[2] / (d.f[1] * (1.0 + d.f[1] * d.f[1])) + d.g[2] / d.g[1]
    }),
    entry!("4.6-f", T2, 2, ["lambda"], "f''/(f'(1+f'^2)) = lambda", |d, c| {
        d.f[2] / (d.f[1] * (1.0 + d.f[1] * d.f[1])) - c[0]
    }),
    entry!("4.6-g", T2, 2, ["lambda"], "lambda = -g''/g'", |d, c| c[0] + d.g[2] / d.g[1]),
    entry!("4.9", T2, 2, ["H0"], "3 H0 = f''g'/f'^3 + g''(1+f'^2)/f'^2 + h''", |d, c| {
        3.0 * c[0] - mean_t2(d) - d.h[2]
    }),
    entry!("4.10", T2, 2, ["H0", "h0", "g0"], "(3 H0 - h0)/g0 = f''/f'^3", |d, c| {
        (3.0 * c[0] - c[1]) / c[2] - d.f[2] / d.f[1].powi(3)
    }),
    entry!("4.11-f", T2, 2, ["lambda"], "f''/f'^3 = lambda (1+f'^2)/f'^2", |d, c| {
        let f1 = d.f[1];
        d.f[2] / f1.powi(3) - c[0] * (1.0 + f1 * f1) / (f1 * f1)
    }),
    entry!("4.11-g", T2, 2, ["lambda"], "g'' = -lambda g'", |d, c| d.g[2] + c[0] * d.g[1]),
    entry!("5.3-f", T3, 2, ["lambda"], "f''/f'^3 = lambda", |d, c| d.f[2] / d.f[1].powi(3) - c[0]),
    entry!("5.3-g", T3, 2, ["mu"], "g''/g'^3 = mu", |d, c| d.g[2] / d.g[1].powi(3) - c[0]),
    entry!("5.3-h", T3, 2, ["xi"], "h'^2 h'' = xi", |d, c| d.h[1] * d.h[1] * d.h[2] - c[0]),
    entry!("5.4", T3, 2, [], "h'(f''/f'^3 + g''/g'^3) + h''(1 + 1/f'^2 + 1/g'^2) = 0", |d, _| {
        let (f1, g1) = (d.f[1], d.g[1]);
        d.h[1] * (d.f[2] / f1.powi(3) + d.g[2] / g1.powi(3)) + d.h[2] * (1.0 + 1.0 / (f1 * f1) + 1.0 / (g1 * g1))
    }),
    entry!("5.6-g", T3, 2, ["f0", "lambda"], "f0^2 g''/(g'((1+f0^2) g'^2 + f0^2)) = lambda", |d, c| {
        let (f0, g1) = (c[0], d.g[1]);
        f0 * f0 * d.g[2] / (g1 * ((1.0 + f0 * f0) * g1 * g1 + f0 * f0)) - c[1]
    }),
    entry!("5.6-h", T3, 2, ["lambda"], "lambda = -h''/h'", |d, c| c[0] + d.h[2] / d.h[1]),
    entry!("5.7-f", T3, 2, ["lambda"], "f''/f'^3 = lambda", |d, c| d.f[2] / d.f[1].powi(3) - c[0]),
    entry!("5.7-g", T3, 2, ["lambda"], "lambda = -g''/g'^3", |d, c| c[0] + d.g[2] / d.g[1].powi(3)),
    entry!("5.8", T3, 2, ["mu"], "f''/f'^3 + mu/f'^2 + g''/g'^3 + mu/g'^2 = -mu", |d, c| {
        let (f1, g1, m) = (d.f[1], d.g[1], c[0]);
        d.f[2] / f1.powi(3) + m / (f1 * f1) + d.g[2] / g1.powi(3) + m / (g1 * g1) + m
    }),
    entry!("5.9", T3, 2, ["mu", "xi"], "f''/f'^3 + mu/f'^2 = xi", |d, c| {
        d.f[2] / d.f[1].powi(3) + c[0] / (d.f[1] * d.f[1]) - c[1]
    }),
    entry!("5.10", T3, 2, ["mu", "rho"], "g''/g'^3 + mu/g'^2 = rho", |d, c| {
        d.g[2] / d.g[1].powi(3) + c[0] / (d.g[1] * d.g[1]) - c[1]
    }),
    entry!("5.12", T3, 2, ["H0", "f0"], "3 H0 = g''h'/g'^3 + h''((f0^2+1)/f0^2 + 1/g'^2)", |d, c| {
        let (f0, g1) = (c[1], d.g[1]);
        3.0 * c[0] - d.g[2] * d.h[1] / g1.powi(3) - d.h[2] * ((f0 * f0 + 1.0) / (f0 * f0) + 1.0 / (g1 * g1))
    }),
    entry!("5.13", T3, 2, ["H0", "h0"], "3 H0/h0 = g''/g'^3", |d, c| 3.0 * c[0] / c[1] - d.g[2] / d.g[1].powi(3)),
    entry!("5.14", T3, 2, ["H0", "h0"], "3 H0/h0 = f''/f'^3 + g''/g'^3", |d, c| {
        3.0 * c[0] / c[1] - d.f[2] / d.f[1].powi(3) - d.g[2] / d.g[1].powi(3)
    }),
    entry!("6.3", T4, 2, ["K0", "h0"], "49 K0/(8 h0) = f''g''/(f'-g')^5", |d, c| {
        49.0 * c[0] / (8.0 * c[1]) - d.f[2] * d.g[2] / (d.f[1] - d.g[1]).powi(5)
    }),
    entry!("6.4", T4, 3, [], "f'''(f'-g') - 5 f''^2 = 0", |d, _| d.f[3] * (d.f[1] - d.g[1]) - 5.0 * d.f[2] * d.f[2]),
    entry!("6.5", T4, 2, [], "0 = (37g'^2+2h'^2-10g'h'+49) f'' + (37f'^2+2h'^2-10f'h'+49) g'' + 2h''(f'-g')^2", |d, _| {
        let (f1, g1, h1) = (d.f[1], d.g[1], d.h[1]);
        -(q(h1, g1) * d.f[2] + q(h1, f1) * d.g[2] + 2.0 * d.h[2] * (f1 - g1).powi(2))
    }),
    entry!("6.6", T4, 2, ["f0"], "g''/(f0-g')^2 + 2h''/(2h'^2-10f0 h'+37f0^2+49) = 0", |d, c| {
        d.g[2] / (c[0] - d.g[1]).powi(2) + 2.0 * d.h[2] / q(d.h[1], c[0])
    }),
    entry!("6.7-g", T4, 2, ["f0", "lambda"], "g''/(f0-g')^2 = lambda", |d, c| {
        d.g[2] / (c[0] - d.g[1]).powi(2) - c[1]
    }),
    entry!("6.7-h", T4, 2, ["f0", "lambda"], "lambda = -2h''/(2h'^2-10f0 h'+37f0^2+49)", |d, c| {
        c[1] + 2.0 * d.h[2] / q(d.h[1], c[0])
    }),
    entry!("6.8-f", T4, 2, ["h0", "lambda"], "f''/(37f'^2-10h0 f'+2h0^2+49) = lambda", |d, c| {
        d.f[2] / q(c[0], d.f[1]) - c[1]
    }),
    entry!("6.8-g", T4, 2, ["h0", "lambda"], "lambda = -g''/(37g'^2-10h0 g'+2h0^2+49)", |d, c| {
        c[1] + d.g[2] / q(c[0], d.g[1])
    }),
    entry!("6.9", T4, 2, ["f0", "H0"], "(147 H0/2)(f0-g')^3 = (2h'^2-10f0 h'+37f0^2+49) g'' + 2h''(f0-g')^2", |d, c| {
        let s = c[0] - d.g[1];
        73.5 * c[1] * s.powi(3) - q(d.h[1], c[0]) * d.g[2] - 2.0 * d.h[2] * s * s
    }),
    entry!("6.10", T4, 2, ["f0", "mutilde"], "g''/(f0-g')^3 = mutilde", |d, c| {
        d.g[2] / (c[0] - d.g[1]).powi(3) - c[1]
    }),
    entry!("7.1", C2, 2, [], "f''/(f'^2+2) + g''/(g'^2+2) = 0", |d, _| {
        d.f[2] / (d.f[1] * d.f[1] + 2.0) + d.g[2] / (d.g[1] * d.g[1] + 2.0)
    }),
];

/// The residual catalog in display order.
pub fn residual_catalog() -> &'static [ResidualSpec] {
    CATALOG
}

pub fn residual_spec(name: &str) -> Option<&'static ResidualSpec> {
    CATALOG.iter().find(|r| r.name == name)
}

/// Looks up a constant, deriving `rho = -mu - xi` when it is not given.
fn constant(spec: &FamilySpec, name: &str) -> Option<f64> {
    spec.params.get(name).copied().or_else(|| match name {
        "rho" => Some(-spec.params.get("mu")? - spec.params.get("xi")?),
        _ => None,
    })
}

fn resolve(r: &ResidualSpec, spec: &FamilySpec) -> Result<Vec<f64>> {
    if let Some(b) = &spec.branch {
        if !b.residuals.contains(&r.name) {
            return Err(Error::KindMismatch {
                residual: r.name.into(),
                family: b.id.into(),
            });
        }
    } else if spec.kind != r.kind {
        return Err(Error::KindMismatch {
            residual: r.name.into(),
            family: spec.kind.name().into(),
        });
    }
    r.constants
        .iter()
        .map(|c| {
            constant(spec, c).ok_or_else(|| Error::Config(format!("residual {} needs the constant {c}", r.name)))
        })
        .collect()
}

fn jets_at(spec: &FamilySpec, x: &[f64]) -> Result<CurveJets> {
    let mut out = [[0.0; 4]; 3];
    for (slot, d) in out.iter_mut().enumerate() {
        if let (Some(c), Some(&t)) = (spec.curves.get(slot), x.get(slot)) {
            *d = c.derivatives(t)?;
        }
    }
    Ok(CurveJets {
        f: out[0],
        g: out[1],
        h: out[2],
    })
}

/// Signed residual `left - right` of catalog equation `name` for the
/// family's curves at `x`. Coordinates of `x` are the curve parameters
/// `(u, v, w)` (or `(u, v)` for codimension-2 kinds).
pub fn residual(name: &str, spec: &FamilySpec, x: &[f64]) -> Result<f64> {
    let r = residual_spec(name).ok_or_else(|| Error::UnknownResidual(name.into()))?;
    let constants = resolve(r, spec)?;
    let domain = spec.curve_box();
    if x.len() != domain.dim() {
        return Err(Error::DimMismatch {
            expected: domain.dim(),
            got: x.len(),
        });
    }
    if !domain.contains(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    Ok(r.eval(&jets_at(spec, x)?, &constants))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    /// Point of the largest residual.
    pub worst: Vec<f64>,
    pub samples: usize,
}

/// Largest `|residual|` over `count` seeded uniform points of the curve box.
pub fn residual_sweep(name: &str, spec: &FamilySpec, count: usize, seed: u64) -> Result<ResidualReport> {
    let domain = spec.curve_box();
    if !domain.is_bounded() {
        return Err(Error::Config("residual sweep needs bounded curve intervals".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ResidualReport {
        name: name.into(),
        max_abs: 0.0,
        worst: Vec::new(),
        samples: 0,
    };
    for _ in 0..count {
        let x = domain.sample(&mut rng);
        let r = residual(name, spec, &x)?.abs();
        if report.worst.is_empty() || r > report.max_abs || r.is_nan() {
            report.max_abs = r;
            report.worst = x;
        }
        report.samples += 1;
    }
    Ok(report)
}
