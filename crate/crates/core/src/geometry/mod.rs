//! Isotropic distance, motions and the curvature pipeline for
//! hypersurfaces `R^(n-1) -> I^n`.

mod forms;
mod immersion;
mod motion;

pub use forms::{
    curvature, curvature_with, fundamental_forms, fundamental_forms_with, normal_curvature,
    normal_curvature_with, CurvatureReport, DiffMode, FundamentalForms, DEGENERACY_THRESHOLD,
};
pub use immersion::{Field, Immersion, ParamBox, Ridge};
pub use motion::{apply_motion, Motion, ORTHOGONALITY_TOL};

use crate::{Error, Result};

/// Tolerance below which two points count as lying on one isotropic line.
pub const ISOTROPIC_LINE_TOL: f64 = 1e-12;

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    if p.len() < 2 {
        return Err(Error::Config("points need at least two coordinates".into()));
    }
    Ok(())
}

/// Euclidean distance of the first `n - 1` coordinates.
pub fn isotropic_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let n = p.len();
    Ok(p[..n - 1]
        .iter()
        .zip(&q[..n - 1])
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// `|p_n - q_n|` for points on a common isotropic line.
pub fn isotropic_range(p: &[f64], q: &[f64]) -> Result<f64> {
    let d = isotropic_distance(p, q)?;
    if d > ISOTROPIC_LINE_TOL {
        return Err(Error::NotIsotropicPair(d));
    }
    let n = p.len();
    Ok((p[n - 1] - q[n - 1]).abs())
}
