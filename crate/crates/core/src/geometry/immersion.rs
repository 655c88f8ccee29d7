use std::sync::Arc;

use rand::Rng;

use crate::curveexpr::Curve1D;
use crate::jets::{Jet2, JetError};
use crate::{Error, Result};

/// Axis-aligned parameter box. Infinite bounds are allowed for evaluation
/// but such a box cannot be gridded or sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    bounds: Vec<(f64, f64)>,
}

impl ParamBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        let bounds = bounds.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        ParamBox { bounds }
    }

    pub fn unbounded(dim: usize) -> Self {
        ParamBox {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.iter().all(|(a, b)| a.is_finite() && b.is_finite())
    }

    /// Membership with a tolerance of `1e-9` relative to the box extent.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && self.bounds.iter().zip(x).all(|(&(a, b), &t)| {
                let slack = if a.is_finite() && b.is_finite() {
                    1e-9 * (b - a).abs().max(a.abs()).max(b.abs()).max(1.0)
                } else {
                    0.0
                };
                t >= a - slack && t <= b + slack
            })
    }

    /// Tensor grid including the endpoints, in lexicographic index order
    /// (last axis fastest).
    pub fn grid(&self, counts: &[usize]) -> Result<Vec<Vec<f64>>> {
        if counts.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: counts.len(),
            });
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::Config("grid needs at least 2 nodes per axis".into()));
        }
        if !self.is_bounded() {
            return Err(Error::Config("cannot grid an unbounded domain".into()));
        }
        let axes: Vec<Vec<f64>> = self
            .bounds
            .iter()
            .zip(counts)
            .map(|(&(a, b), &c)| {
                (0..c)
                    .map(|k| {
                        if k == c - 1 {
                            b
                        } else {
                            a + (b - a) * k as f64 / (c - 1) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; counts.len()];
        for _ in 0..total {
            out.push(idx.iter().enumerate().map(|(d, &k)| axes[d][k]).collect());
            for d in (0..counts.len()).rev() {
                idx[d] += 1;
                if idx[d] < counts[d] {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(out)
    }

    /// Uniform random point.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.bounds
            .iter()
            .map(|&(a, b)| if a == b { a } else { rng.gen_range(a..=b) })
            .collect()
    }
}

/// `coeff * curve(<weights, x> + offset)`.
#[derive(Debug, Clone)]
pub struct Ridge {
    pub coeff: f64,
    pub curve: Arc<Curve1D>,
    pub weights: Vec<f64>,
    pub offset: f64,
}

/// A scalar field on parameter space: affine part plus a sum of ridge
/// functions of curves. Every coordinate function of the families in this
/// crate has this shape, and the shape is closed under the linear maps of
/// a motion.
#[derive(Debug, Clone)]
pub struct Field {
    pub constant: f64,
    pub linear: Vec<f64>,
    pub ridges: Vec<Ridge>,
}

impl Field {
    pub fn affine(linear: Vec<f64>, constant: f64) -> Self {
        Field {
            constant,
            linear,
            ridges: Vec::new(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Field::affine(vec![0.0; dim], 0.0)
    }

    /// The `k`-th parameter.
    pub fn coordinate(k: usize, dim: usize) -> Self {
        let mut linear = vec![0.0; dim];
        linear[k] = 1.0;
        Field::affine(linear, 0.0)
    }

    /// `curve(x_k)`.
    pub fn curve_of(curve: Arc<Curve1D>, k: usize, dim: usize) -> Self {
        Field::zero(dim).plus_ridge(1.0, curve, Field::coordinate(k, dim).linear, 0.0)
    }

    pub fn plus_ridge(mut self, coeff: f64, curve: Arc<Curve1D>, weights: Vec<f64>, offset: f64) -> Self {
        self.ridges.push(Ridge {
            coeff,
            curve,
            weights,
            offset,
        });
        self
    }

    pub fn plus_linear(mut self, linear: &[f64], constant: f64) -> Self {
        for (a, b) in self.linear.iter_mut().zip(linear) {
            *a += b;
        }
        self.constant += constant;
        self
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn is_affine(&self) -> bool {
        self.ridges.is_empty()
    }

    /// `sum_i c_i F_i + constant`.
    pub fn combine(terms: &[(f64, &Field)], constant: f64, dim: usize) -> Field {
        let mut out = Field::affine(vec![0.0; dim], constant);
        for &(c, f) in terms {
            if c == 0.0 {
                continue;
            }
            out.constant += c * f.constant;
            for (a, b) in out.linear.iter_mut().zip(&f.linear) {
                *a += c * b;
            }
            for r in &f.ridges {
                out.ridges.push(Ridge {
                    coeff: c * r.coeff,
                    ..r.clone()
                });
            }
        }
        out
    }

    fn dot(w: &[f64], x: &[f64]) -> f64 {
        w.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, JetError> {
        let mut s = self.constant + Self::dot(&self.linear, x);
        for r in &self.ridges {
            s += r.coeff * r.curve.value(Self::dot(&r.weights, x) + r.offset)?;
        }
        Ok(s)
    }

    /// Jet of the field at the point whose coordinate jets are `seeds`.
    pub fn eval_jet(&self, seeds: &[Jet2]) -> Result<Jet2, JetError> {
        let dim = seeds.len();
        let mut acc = Jet2::constant(self.constant, dim);
        for (c, s) in self.linear.iter().zip(seeds) {
            if *c != 0.0 {
                acc = acc.axpy(*c, s);
            }
        }
        for r in &self.ridges {
            let mut arg = Jet2::constant(r.offset, dim);
            for (c, s) in r.weights.iter().zip(seeds) {
                if *c != 0.0 {
                    arg = arg.axpy(*c, s);
                }
            }
            acc = acc.axpy(r.coeff, &r.curve.apply(&arg)?);
        }
        Ok(acc)
    }
}

/// A map from a parameter box into isotropic `n`-space. The last component
/// is the isotropic coordinate.
#[derive(Debug, Clone)]
pub struct Immersion {
    pub name: String,
    pub components: Vec<Field>,
    pub domain: ParamBox,
}

impl Immersion {
    pub fn new(name: impl Into<String>, components: Vec<Field>, domain: ParamBox) -> Result<Self> {
        let m = domain.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != m || c.ridges.iter().any(|r| r.weights.len() != m)) {
            return Err(Error::DimMismatch {
                expected: m,
                got: bad.dim(),
            });
        }
        if components.len() < 3 {
            return Err(Error::Config("ambient dimension must be at least 3".into()));
        }
        Ok(Immersion {
            name: name.into(),
            components,
            domain,
        })
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.components.len()
    }

    pub fn param_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_hypersurface(&self) -> bool {
        self.param_dim() + 1 == self.ambient_dim()
    }

    pub fn with_domain(mut self, domain: ParamBox) -> Result<Self> {
        if domain.dim() != self.param_dim() {
            return Err(Error::DimMismatch {
                expected: self.param_dim(),
                got: domain.dim(),
            });
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_arity(x)?;
        Ok(self
            .components
            .iter()
            .map(|c| c.eval(x))
            .collect::<Result<_, _>>()?)
    }

    pub(crate) fn check_arity(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.param_dim() {
            return Err(Error::DimMismatch {
                expected: self.param_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}
