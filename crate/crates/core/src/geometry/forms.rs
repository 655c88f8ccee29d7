use nalgebra::{DMatrix, DVector};

use super::Immersion;
use crate::jets::{fd_hessian, Jet2};
use crate::{Error, Result};

/// How component derivatives are obtained.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DiffMode {
    #[default]
    Jet,
    FiniteDifference,
}

/// Relative threshold on `det g / prod g_ii` below which the tangent
/// hyperplane is treated as isotropic.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForms {
    pub g: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub det_g: f64,
    pub det_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub point: Vec<f64>,
    /// Gauss-Kronecker curvature.
    pub k: f64,
    /// Mean curvature.
    pub h: f64,
    /// Principal curvatures, ascending.
    pub principal: Vec<f64>,
    pub det_g: f64,
}

fn component_jets(s: &Immersion, x: &[f64], mode: DiffMode) -> Result<Vec<Jet2>> {
    s.check_arity(x)?;
    if !s.domain.contains(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    match mode {
        DiffMode::Jet => {
            let seeds = Jet2::seed_all(x);
            s.components
                .iter()
                .map(|c| c.eval_jet(&seeds).map_err(Error::from))
                .collect()
        }
        DiffMode::FiniteDifference => s
            .components
            .iter()
            .map(|c| fd_hessian(|p| c.eval(p), x, None).map_err(Error::from))
            .collect(),
    }
}

pub fn fundamental_forms(s: &Immersion, x: &[f64]) -> Result<FundamentalForms> {
    fundamental_forms_with(s, x, DiffMode::Jet)
}

/// First and second fundamental forms at `x`.
///
/// `g` ignores the isotropic coordinate. `h_ij` is the determinant of the
/// first-derivative columns with `r_ij` appended, expanded along the last
/// column so that symmetry of `h` is inherited from the Hessians.
pub fn fundamental_forms_with(s: &Immersion, x: &[f64], mode: DiffMode) -> Result<FundamentalForms> {
    let n = s.ambient_dim();
    let m = s.param_dim();
    if m + 1 != n {
        return Err(Error::NotHypersurface { params: m, ambient: n });
    }
    let jets = component_jets(s, x, mode)?;
    let jac = DMatrix::from_fn(n, m, |k, i| jets[k].gradient()[i]);

    let spatial = jac.rows(0, n - 1);
    let g = spatial.transpose() * spatial;
    let det_g = g.determinant();
    let scale: f64 = g.diagonal().iter().product();
    if !(det_g > DEGENERACY_THRESHOLD * scale) || !det_g.is_finite() {
        return Err(Error::DegenerateMetric {
            point: x.to_vec(),
            det_g,
        });
    }
    let root = det_g.sqrt();

    let cofactors: Vec<f64> = (0..n)
        .map(|k| {
            let minor = jac.clone().remove_row(k).determinant();
            if (k + m).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        })
        .collect();
    let h = DMatrix::from_fn(m, m, |i, j| {
        cofactors
            .iter()
            .zip(&jets)
            .map(|(c, jet)| c * jet.hessian(i, j))
            .sum::<f64>()
            / root
    });
    let det_h = h.determinant();
    Ok(FundamentalForms { g, h, det_g, det_h })
}

pub fn curvature(s: &Immersion, x: &[f64]) -> Result<CurvatureReport> {
    curvature_with(s, x, DiffMode::Jet)
}

/// `K = det h / det g`, `H = tr(g^-1 h) / m`, principal curvatures from the
/// symmetric matrix `L^-1 h L^-T` with `g = L L^T`.
pub fn curvature_with(s: &Immersion, x: &[f64], mode: DiffMode) -> Result<CurvatureReport> {
    let ff = fundamental_forms_with(s, x, mode)?;
    let m = ff.g.nrows();
    let chol = ff.g.clone().cholesky().ok_or_else(|| Error::DegenerateMetric {
        point: x.to_vec(),
        det_g: ff.det_g,
    })?;
    let a = chol.solve(&ff.h);
    let l = chol.l();
    let y = l.solve_lower_triangular(&ff.h).expect("cholesky factor is invertible");
    let sym = l
        .solve_lower_triangular(&y.transpose())
        .expect("cholesky factor is invertible");
    let sym = (&sym + sym.transpose()) * 0.5;
    let mut principal: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    principal.sort_by(f64::total_cmp);
    Ok(CurvatureReport {
        point: x.to_vec(),
        k: ff.det_h / ff.det_g,
        h: a.trace() / m as f64,
        principal,
        det_g: ff.det_g,
    })
}

pub fn normal_curvature(s: &Immersion, x: &[f64], dir: &[f64]) -> Result<f64> {
    normal_curvature_with(s, x, dir, DiffMode::Jet)
}

/// `(d^T h d) / (d^T g d)`.
pub fn normal_curvature_with(s: &Immersion, x: &[f64], dir: &[f64], mode: DiffMode) -> Result<f64> {
    if dir.len() != s.param_dim() {
        return Err(Error::DimMismatch {
            expected: s.param_dim(),
            got: dir.len(),
        });
    }
    if dir.iter().all(|d| *d == 0.0) {
        return Err(Error::ZeroDirection);
    }
    let ff = fundamental_forms_with(s, x, mode)?;
    let d = DVector::from_column_slice(dir);
    let den = d.dot(&(&ff.g * &d));
    if !(den > 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(d.dot(&(&ff.h * &d)) / den)
}
