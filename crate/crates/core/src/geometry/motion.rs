use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::{Field, Immersion};
use crate::{Error, Result};

/// Tolerance on `max |A^T A - I|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Isotropic motion: spatial part `A x + t`, isotropic coordinate
/// `<B, x> + x_n + s`, with `A` orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Motion {
    a: DMatrix<f64>,
    b: DVector<f64>,
    t: DVector<f64>,
    s: f64,
}

impl Motion {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, t: DVector<f64>, s: f64) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: a.ncols(),
            });
        }
        for len in [b.len(), t.len()] {
            if len != d {
                return Err(Error::DimMismatch { expected: d, got: len });
            }
        }
        let defect = (a.transpose() * &a - DMatrix::identity(d, d)).amax();
        if !(defect <= ORTHOGONALITY_TOL) {
            return Err(Error::NonOrthogonal(defect));
        }
        Ok(Motion { a, b, t, s })
    }

    /// Identity motion of isotropic `(d+1)`-space.
    pub fn identity(d: usize) -> Self {
        Motion {
            a: DMatrix::identity(d, d),
            b: DVector::zeros(d),
            t: DVector::zeros(d),
            s: 0.0,
        }
    }

    /// Random motion of isotropic `(d+1)`-space with `det A = +1` when
    /// `proper`, `-1` otherwise. Entries of `B`, `t` and `s` are uniform in
    /// `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize, proper: bool) -> Self {
        let m = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
        let mut q = m.qr().q();
        let want = if proper { 1.0 } else { -1.0 };
        if q.determinant() * want < 0.0 {
            q.column_mut(0).neg_mut();
        }
        let b = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let t = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        Motion {
            a: q,
            b,
            t,
            s: rng.gen_range(-1.0..1.0),
        }
    }

    /// Spatial dimension `n - 1`.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn det_a(&self) -> f64 {
        self.a.determinant()
    }

    pub fn apply_point(&self, p: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        if p.len() != d + 1 {
            return Err(Error::DimMismatch {
                expected: d + 1,
                got: p.len(),
            });
        }
        let x = DVector::from_column_slice(&p[..d]);
        let mut out: Vec<f64> = (&self.a * &x + &self.t).iter().copied().collect();
        out.push(self.b.dot(&x) + p[d] + self.s);
        Ok(out)
    }
}

pub fn apply_motion(m: &Motion, s: &Immersion) -> Result<Immersion> {
    let d = m.dim();
    if s.ambient_dim() != d + 1 {
        return Err(Error::DimMismatch {
            expected: d + 1,
            got: s.ambient_dim(),
        });
    }
    let pd = s.param_dim();
    let spatial = &s.components[..d];
    let mut comps: Vec<Field> = (0..d)
        .map(|k| {
            let terms: Vec<(f64, &Field)> = (0..d).map(|j| (m.a[(k, j)], &spatial[j])).collect();
            Field::combine(&terms, m.t[k], pd)
        })
        .collect();
    let mut terms: Vec<(f64, &Field)> = (0..d).map(|j| (m.b[j], &spatial[j])).collect();
    terms.push((1.0, &s.components[d]));
    comps.push(Field::combine(&terms, m.s, pd));
    Immersion::new(format!("{} (moved)", s.name), comps, s.domain.clone())
}
