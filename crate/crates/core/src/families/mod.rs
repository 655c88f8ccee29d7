//! Translation hypersurfaces of types 1-4 in I^4, the codimension-2
//! translation surfaces, the isotropic Scherk surfaces in I^3, and the
//! registry of closed-form constant-curvature solutions.

mod registry;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::curveexpr::Curve1D;
use crate::geometry::{Field, Immersion, ParamBox};
use crate::{Error, Result};

pub use registry::{branch_info, branches, theorem_family, BranchInfo, BranchInstance, Realization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Type1,
    Type2,
    Type3,
    Type4,
    Codim2Type1,
    Codim2Type2,
    Codim2Type3,
    ScherkI3_1,
    ScherkI3_2,
    ScherkI3_3,
    TheoremBranch,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 11] = [
        FamilyKind::Type1,
        FamilyKind::Type2,
        FamilyKind::Type3,
        FamilyKind::Type4,
        FamilyKind::Codim2Type1,
        FamilyKind::Codim2Type2,
        FamilyKind::Codim2Type3,
        FamilyKind::ScherkI3_1,
        FamilyKind::ScherkI3_2,
        FamilyKind::ScherkI3_3,
        FamilyKind::TheoremBranch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Type1 => "type1",
            FamilyKind::Type2 => "type2",
            FamilyKind::Type3 => "type3",
            FamilyKind::Type4 => "type4",
            FamilyKind::Codim2Type1 => "codim2-type1",
            FamilyKind::Codim2Type2 => "codim2-type2",
            FamilyKind::Codim2Type3 => "codim2-type3",
            FamilyKind::ScherkI3_1 => "scherk-i3-1",
            FamilyKind::ScherkI3_2 => "scherk-i3-2",
            FamilyKind::ScherkI3_3 => "scherk-i3-3",
            FamilyKind::TheoremBranch => "theorem-branch",
        }
    }

    pub fn is_codim2(self) -> bool {
        matches!(
            self,
            FamilyKind::Codim2Type1 | FamilyKind::Codim2Type2 | FamilyKind::Codim2Type3
        )
    }

    pub fn is_scherk(self) -> bool {
        matches!(
            self,
            FamilyKind::ScherkI3_1 | FamilyKind::ScherkI3_2 | FamilyKind::ScherkI3_3
        )
    }

    /// Names of the parameters, in order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyKind::Codim2Type1 | FamilyKind::Codim2Type2 | FamilyKind::Codim2Type3 => &["u", "v"],
            FamilyKind::ScherkI3_1 => &["u", "v"],
            FamilyKind::ScherkI3_2 => &["u", "w"],
            FamilyKind::ScherkI3_3 => &["v", "w"],
            _ => &["u", "v", "w"],
        }
    }

    /// Curve slots the kind reads (`f`, `g`, `h`).
    pub fn curve_slots(self) -> usize {
        match self {
            FamilyKind::Type1 | FamilyKind::Type2 | FamilyKind::Type3 | FamilyKind::Type4 => 3,
            k if k.is_codim2() => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown family kind {s:?}")))
    }
}

/// Constant values a theorem asserts for `K` and/or `H`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CurvaturePrediction {
    pub k: Option<f64>,
    pub h: Option<f64>,
}

/// Generating curves `f(u)`, `g(v)`, `h(w)`.
#[derive(Debug, Clone, Default)]
pub struct CurveSet {
    pub f: Option<Arc<Curve1D>>,
    pub g: Option<Arc<Curve1D>>,
    pub h: Option<Arc<Curve1D>>,
}

impl CurveSet {
    pub fn new(f: Curve1D, g: Curve1D, h: Curve1D) -> Self {
        CurveSet {
            f: Some(Arc::new(f)),
            g: Some(Arc::new(g)),
            h: Some(Arc::new(h)),
        }
    }

    pub fn pair(f: Curve1D, g: Curve1D) -> Self {
        CurveSet {
            f: Some(Arc::new(f)),
            g: Some(Arc::new(g)),
            h: None,
        }
    }

    pub fn get(&self, slot: usize) -> Option<&Arc<Curve1D>> {
        [&self.f, &self.g, &self.h][slot].as_ref()
    }

    fn require(&self, slot: usize, kind: FamilyKind) -> Result<Arc<Curve1D>> {
        self.get(slot).cloned().ok_or_else(|| {
            Error::Config(format!("{kind} needs curve {}", ["f", "g", "h"][slot]))
        })
    }
}

/// Everything needed to build an immersion.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub curves: CurveSet,
    /// Constants for Scherk kinds (`c`) and for residuals of raw families.
    pub params: BTreeMap<String, f64>,
    pub branch: Option<Arc<BranchInstance>>,
    pub domain: Option<ParamBox>,
}

impl FamilySpec {
    pub fn raw(kind: FamilyKind, curves: CurveSet, domain: Option<ParamBox>) -> Self {
        FamilySpec {
            kind,
            curves,
            params: BTreeMap::new(),
            branch: None,
            domain,
        }
    }

    pub fn scherk(kind: FamilyKind, c: f64) -> Result<Self> {
        if !kind.is_scherk() {
            return Err(Error::Config(format!("{kind} is not a Scherk kind")));
        }
        let mut spec = FamilySpec::raw(kind, CurveSet::default(), None);
        spec.params.insert("c".into(), c);
        spec.domain = Some(scherk_domain(kind, c)?);
        Ok(spec)
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params.extend(params);
        self
    }

    /// The kind that determines the parametrization and residual catalog.
    pub fn base_kind(&self) -> FamilyKind {
        match (&self.branch, self.kind) {
            (Some(b), _) => match b.realization {
                Realization::Kind(k) => k,
                Realization::ScherkCylinder { .. } => FamilyKind::Type2,
            },
            (None, k) => k,
        }
    }

    pub fn name(&self) -> String {
        match &self.branch {
            Some(b) => b.id.to_string(),
            None => self.kind.name().to_string(),
        }
    }

    pub fn domain(&self) -> ParamBox {
        self.domain
            .clone()
            .unwrap_or_else(|| ParamBox::unbounded(self.base_kind_param_dim()))
    }

    fn base_kind_param_dim(&self) -> usize {
        self.base_kind().param_names().len()
    }

    /// Box on which the generating curves are sampled: each curve's own
    /// validity interval, falling back to the parametrization domain.
    pub fn curve_box(&self) -> ParamBox {
        let dom = self.domain();
        let slots = self.base_kind().curve_slots().max(1);
        let bounds = (0..slots)
            .map(|s| {
                self.curves
                    .get(s)
                    .and_then(|c| c.interval())
                    .or_else(|| dom.bounds().get(s).copied())
                    .unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
            })
            .collect();
        ParamBox::new(bounds)
    }
}

/// Formats a constant for splicing into an expression string.
pub(crate) fn lit(x: f64) -> String {
    if x.is_sign_negative() {
        format!("({x})")
    } else {
        format!("{x}")
    }
}

fn scherk_domain(kind: FamilyKind, c: f64) -> Result<ParamBox> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Constraint {
            branch: kind.name().into(),
            message: "c must be a nonzero finite number".into(),
        });
    }
    let a = c.abs();
    Ok(ParamBox::new(match kind {
        FamilyKind::ScherkI3_1 => vec![(-1.0, 1.0), (-1.0, 1.0)],
        FamilyKind::ScherkI3_2 => vec![(-1.0 / a, 1.0 / a), preimage(c, 0.0, 0.5, 2.0)],
        _ => vec![(PI / 2.0 + 0.2 / a, PI / 2.0 + 0.8 / a), (-0.5 / a, 0.5 / a)],
    }))
}

/// Interval of `t` with `a t + b` in `[lo, hi]` (`a != 0`).
pub(crate) fn preimage(a: f64, b: f64, lo: f64, hi: f64) -> (f64, f64) {
    let (t1, t2) = ((lo - b) / a, (hi - b) / a);
    (t1.min(t2), t1.max(t2))
}

fn coord(k: usize, m: usize) -> Field {
    Field::coordinate(k, m)
}

fn curve_field(c: &Arc<Curve1D>, k: usize, m: usize) -> Field {
    Field::curve_of(c.clone(), k, m)
}

fn affine(linear: &[f64], constant: f64) -> Field {
    Field::affine(linear.to_vec(), constant)
}

/// Immersion for a non-theorem kind.
fn build_kind(kind: FamilyKind, curves: &CurveSet, params: &BTreeMap<String, f64>, domain: ParamBox) -> Result<Immersion> {
    let name = kind.name();
    let comps = match kind {
        FamilyKind::Type1 | FamilyKind::Type2 | FamilyKind::Type3 | FamilyKind::Type4 => {
            let (f, g, h) = (
                curves.require(0, kind)?,
                curves.require(1, kind)?,
                curves.require(2, kind)?,
            );
            let (fu, gv, hw) = (curve_field(&f, 0, 3), curve_field(&g, 1, 3), curve_field(&h, 2, 3));
            let sum = Field::combine(&[(1.0, &fu), (1.0, &gv), (1.0, &hw)], 0.0, 3);
            match kind {
                FamilyKind::Type1 => vec![coord(0, 3), coord(1, 3), coord(2, 3), sum],
                FamilyKind::Type2 => vec![
                    affine(&[1.0, 1.0, 0.0], 0.0),
                    coord(2, 3),
                    fu,
                    Field::combine(&[(1.0, &gv), (1.0, &hw)], 0.0, 3),
                ],
                FamilyKind::Type3 => vec![affine(&[1.0, 1.0, 1.0], 0.0), fu, gv, hw],
                _ => vec![
                    sum,
                    affine(&[1.0, 1.0, 6.0], 0.0),
                    affine(&[1.0, 1.0, -1.0], 0.0),
                    affine(&[1.0, -1.0, 1.0], 5.0 * PI / 6.0),
                ],
            }
        }
        FamilyKind::Codim2Type1 | FamilyKind::Codim2Type2 | FamilyKind::Codim2Type3 => {
            let (f, g) = (curves.require(0, kind)?, curves.require(1, kind)?);
            let (fu, gv) = (curve_field(&f, 0, 2), curve_field(&g, 1, 2));
            match kind {
                FamilyKind::Codim2Type1 => vec![
                    affine(&[1.0, 1.0], 0.0),
                    affine(&[1.0, 1.0], 0.0),
                    affine(&[-2.0, 1.0], 0.0),
                    Field::combine(&[(1.0, &fu), (1.0, &gv)], 0.0, 2),
                ],
                FamilyKind::Codim2Type2 => vec![
                    fu.plus_linear(&[0.0, 1.0], PI),
                    affine(&[1.0, 1.0], 0.0),
                    affine(&[1.0, 2.0], 0.0),
                    gv.plus_linear(&[-2.0, 0.0], PI),
                ],
                _ => vec![
                    Field::combine(&[(1.0, &fu), (1.0, &gv)], 0.0, 2),
                    affine(&[1.0, 1.0], 0.0),
                    affine(&[1.0, 1.0], 0.0),
                    affine(&[1.0, -1.0], 4.0 * PI / 3.0),
                ],
            }
        }
        FamilyKind::ScherkI3_1 | FamilyKind::ScherkI3_2 | FamilyKind::ScherkI3_3 => {
            let c = *params
                .get("c")
                .ok_or_else(|| Error::Config(format!("{kind} needs parameter c")))?;
            scherk_domain(kind, c)?;
            let cl = lit(c);
            match kind {
                FamilyKind::ScherkI3_1 => {
                    let sq = Arc::new(Curve1D::builtin("t^2"));
                    let phi = Field::zero(2)
                        .plus_ridge(c, sq.clone(), vec![1.0, 0.0], 0.0)
                        .plus_ridge(-c, sq, vec![0.0, 1.0], 0.0);
                    vec![coord(0, 2), coord(1, 2), phi]
                }
                FamilyKind::ScherkI3_2 => {
                    let a = Arc::new(Curve1D::builtin(&format!("lnabs({cl}*w)/{cl}")));
                    let b = Arc::new(Curve1D::builtin(&format!("lnabs(cos({cl}*u))/{cl}")));
                    let psi = Field::zero(2)
                        .plus_ridge(1.0, a, vec![0.0, 1.0], 0.0)
                        .plus_ridge(-1.0, b, vec![1.0, 0.0], 0.0);
                    vec![coord(0, 2), psi, coord(1, 2)]
                }
                _ => {
                    let lc = Arc::new(Curve1D::builtin(&format!("lnabs(cos({cl}*t))/(2*{cl})")));
                    let phi = Field::zero(2)
                        .plus_ridge(1.0, lc.clone(), vec![1.0, 1.0], -PI / 2.0)
                        .plus_ridge(-1.0, lc, vec![-1.0, 1.0], PI / 2.0);
                    vec![phi, coord(0, 2), coord(1, 2)]
                }
            }
        }
        FamilyKind::TheoremBranch => {
            return Err(Error::Config("theorem-branch spec without a branch".into()))
        }
    };
    Immersion::new(name, comps, domain)
}

fn scherk_cylinder(lambda: f64, parabola: f64, domain: ParamBox) -> Result<Immersion> {
    let l = lit(lambda);
    let a = Arc::new(Curve1D::builtin(&format!("lnabs(cos({l}*u))/{l}")));
    let b = Arc::new(Curve1D::builtin(&format!("lnabs({l}*v)/{l}")));
    let x1 = Field::zero(3)
        .plus_ridge(1.0, a, vec![1.0, 0.0, 0.0], 0.0)
        .plus_ridge(-1.0, b, vec![0.0, 1.0, 0.0], 0.0);
    let mut x4 = coord(1, 3);
    if parabola != 0.0 {
        let sq = Arc::new(Curve1D::builtin("w^2"));
        x4 = x4.plus_ridge(parabola, sq, vec![0.0, 0.0, 1.0], 0.0);
    }
    Immersion::new("scherk-cylinder", vec![x1, coord(2, 3), coord(0, 3), x4], domain)
}

/// Sample points of a closed interval for regularity checks.
fn probe(bounds: (f64, f64)) -> Vec<f64> {
    let (a, b) = if bounds.0.is_finite() && bounds.1.is_finite() {
        bounds
    } else {
        (-1.0, 1.0)
    };
    (0..=32).map(|k| a + (b - a) * k as f64 / 32.0).collect()
}

fn derivative_range(c: &Curve1D, bounds: (f64, f64)) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in probe(bounds) {
        let d = c.derivatives(t)?[1];
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

/// Derivatives below this are treated as zero by the regularity checks.
const FLAT_DERIVATIVE: f64 = 1e-12;

fn check_regularity(kind: FamilyKind, curves: &CurveSet, domain: &ParamBox) -> Result<()> {
    let b = domain.bounds();
    let non_constant = |slot: usize, label: &str| -> Result<()> {
        let c = curves.require(slot, kind)?;
        let (lo, hi) = derivative_range(&c, b[slot])?;
        if lo.abs().max(hi.abs()) <= FLAT_DERIVATIVE {
            return Err(Error::Regularity(format!("{kind}: {label} is a constant function")));
        }
        Ok(())
    };
    match kind {
        FamilyKind::Type2 => non_constant(0, "f"),
        FamilyKind::Type3 => {
            non_constant(0, "f")?;
            non_constant(1, "g")
        }
        FamilyKind::Type4 => {
            let (f, g) = (curves.require(0, kind)?, curves.require(1, kind)?);
            let (flo, fhi) = derivative_range(&f, b[0])?;
            let (glo, ghi) = derivative_range(&g, b[1])?;
            if flo - ghi <= FLAT_DERIVATIVE && fhi - glo >= -FLAT_DERIVATIVE {
                return Err(Error::Regularity(format!(
                    "type4: f' - g' takes the value 0 on the domain (f' in [{flo}, {fhi}], g' in [{glo}, {ghi}])"
                )));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn check_curve_domains(kind: FamilyKind, curves: &CurveSet, domain: &ParamBox) -> Result<()> {
    for slot in 0..kind.curve_slots() {
        let Some(c) = curves.get(slot) else { continue };
        let (Some((lo, hi)), Some(&(a, b))) = (c.interval(), domain.bounds().get(slot)) else {
            continue;
        };
        let slack = 1e-9 * (hi - lo).abs().max(1.0);
        if a.is_finite() && b.is_finite() && (a < lo - slack || b > hi + slack) {
            return Err(Error::Config(format!(
                "curve {} is valid on [{lo}, {hi}] but the domain uses [{a}, {b}]",
                ["f", "g", "h"][slot]
            )));
        }
    }
    Ok(())
}

/// Builds the immersion a spec describes, after checking regularity on
/// its domain.
pub fn build(spec: &FamilySpec) -> Result<Immersion> {
    let domain = spec.domain();
    let imm = match &spec.branch {
        Some(b) => match b.realization {
            Realization::Kind(k) => {
                check_regularity(k, &spec.curves, &domain)?;
                build_kind(k, &spec.curves, &spec.params, domain)?
            }
            Realization::ScherkCylinder { lambda, parabola } => scherk_cylinder(lambda, parabola, domain)?,
        },
        None => {
            if spec.kind == FamilyKind::TheoremBranch {
                return Err(Error::Config("theorem-branch spec without a branch".into()));
            }
            if domain.dim() != spec.kind.param_names().len() {
                return Err(Error::DimMismatch {
                    expected: spec.kind.param_names().len(),
                    got: domain.dim(),
                });
            }
            check_curve_domains(spec.kind, &spec.curves, &domain)?;
            check_regularity(spec.kind, &spec.curves, &domain)?;
            build_kind(spec.kind, &spec.curves, &spec.params, domain)?
        }
    };
    Ok(Immersion {
        name: spec.name(),
        ..imm
    })
}

/// First and second derivatives of the generating curves at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DerivBundle {
    pub f1: f64,
    pub f2: f64,
    pub g1: f64,
    pub g2: f64,
    pub h1: f64,
    pub h2: f64,
}

impl DerivBundle {
    /// Reads `f'(u), f''(u), g'(v), ...` from the curves.
    pub fn at(curves: &CurveSet, x: &[f64]) -> Result<Self> {
        let mut d = [[0.0; 4]; 3];
        for (slot, out) in d.iter_mut().enumerate() {
            if let (Some(c), Some(&t)) = (curves.get(slot), x.get(slot)) {
                *out = c.derivatives(t)?;
            }
        }
        Ok(DerivBundle {
            f1: d[0][1],
            f2: d[0][2],
            g1: d[1][1],
            g2: d[1][2],
            h1: d[2][1],
            h2: d[2][2],
        })
    }
}

fn closed_form_pre(kind: FamilyKind, d: &DerivBundle) -> Result<()> {
    let ok = match kind {
        FamilyKind::Type2 => d.f1 > 0.0,
        FamilyKind::Type3 => d.f1 * d.g1 > 0.0,
        FamilyKind::Type4 => d.f1 != d.g1,
        _ => {
            return Err(Error::Config(format!(
                "no closed-form curvature for {kind}"
            )))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Constraint {
            branch: kind.name().into(),
            message: "closed form needs f' > 0 (type2), f'g' > 0 (type3) or f' != g' (type4)".into(),
        })
    }
}

/// Gauss-Kronecker curvature from the type-specific closed form.
pub fn closed_form_k(kind: FamilyKind, d: &DerivBundle) -> Result<f64> {
    closed_form_pre(kind, d)?;
    Ok(match kind {
        FamilyKind::Type2 => d.g1 * d.f2 * d.g2 * d.h2 / d.f1.powi(3),
        FamilyKind::Type3 => d.h1 * d.h1 * d.f2 * d.g2 * d.h2 / (d.f1 * d.g1).powi(3),
        _ => 8.0 * d.f2 * d.g2 * d.h2 / (49.0 * (d.f1 - d.g1).powi(5)),
    })
}

/// Mean curvature from the type-specific closed form.
pub fn closed_form_h(kind: FamilyKind, d: &DerivBundle) -> Result<f64> {
    closed_form_pre(kind, d)?;
    let three_h = match kind {
        FamilyKind::Type2 => {
            let f1s = d.f1 * d.f1;
            d.f2 * d.g1 / (f1s * d.f1) + d.g2 * (1.0 + f1s) / f1s + d.h2
        }
        FamilyKind::Type3 => {
            d.h1 * (d.f2 / d.f1.powi(3) + d.g2 / d.g1.powi(3))
                + d.h2 * (1.0 + 1.0 / (d.f1 * d.f1) + 1.0 / (d.g1 * d.g1))
        }
        _ => {
            let q = |a: f64| 37.0 * a * a + 2.0 * d.h1 * d.h1 - 10.0 * a * d.h1 + 49.0;
            let diff = d.f1 - d.g1;
            2.0 / (49.0 * diff.powi(3))
                * (q(d.g1) * d.f2 + q(d.f1) * d.g2 + 2.0 * d.h2 * diff * diff)
        }
    };
    Ok(three_h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature;

    fn parsed(s: &str) -> Curve1D {
        Curve1D::parse(s).unwrap()
    }

    fn raw(kind: FamilyKind, f: &str, g: &str, h: &str) -> FamilySpec {
        FamilySpec::raw(kind, CurveSet::new(parsed(f), parsed(g), parsed(h)), None)
    }

    #[test]
    fn substitution_examples() {
        let t1 = build(&raw(FamilyKind::Type1, "u^2", "v^2", "w^2")).unwrap();
        assert_eq!(t1.point(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 1.0, 1.0, 3.0]);
        let t4 = build(&raw(FamilyKind::Type4, "2*u", "0", "0")).unwrap();
        let p = t4.point(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 0.0, 5.0 * PI / 6.0]);
    }

    #[test]
    fn type2_constant_f_is_rejected() {
        let spec = raw(FamilyKind::Type2, "3", "v", "w^2");
        assert!(matches!(build(&spec), Err(Error::Regularity(_))));
        let spec = raw(FamilyKind::Type3, "u", "1", "w");
        assert!(matches!(build(&spec), Err(Error::Regularity(_))));
    }

    #[test]
    fn type4_needs_separated_slopes() {
        let mut spec = raw(FamilyKind::Type4, "u^3", "v^3+v", "w^3");
        spec.domain = Some(ParamBox::new(vec![(1.0, 2.0); 3]));
        assert!(matches!(build(&spec), Err(Error::Regularity(_))));
        spec.domain = Some(ParamBox::new(vec![(2.0, 3.0), (0.0, 1.0), (1.0, 2.0)]));
        assert!(build(&spec).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let d = DerivBundle {
            f1: 2.0,
            f2: 2.0,
            g1: 2.0,
            g2: 2.0,
            h1: 2.0,
            h2: 2.0,
        };
        assert!((closed_form_k(FamilyKind::Type2, &d).unwrap() - 2.0).abs() < 1e-15);
        assert!((closed_form_h(FamilyKind::Type2, &d).unwrap() - 5.0 / 3.0).abs() < 1e-15);

        let d4 = DerivBundle {
            f1: 2.0,
            f2: 2.0,
            g1: 6.0,
            g2: 6.0,
            h1: 2.0,
            h2: 2.0,
        };
        assert!((closed_form_k(FamilyKind::Type4, &d4).unwrap() + 3.0 / 784.0).abs() < 1e-15);
        assert!((closed_form_h(FamilyKind::Type4, &d4).unwrap() + 449.0 / 588.0).abs() < 1e-14);

        let neg = DerivBundle { f1: -1.0, ..d };
        assert!(closed_form_k(FamilyKind::Type2, &neg).is_err());
        assert!(closed_form_h(FamilyKind::Type1, &d).is_err());
    }

    #[test]
    fn type2_pipeline_example() {
        let s = build(&raw(FamilyKind::Type2, "u^2", "v^2", "w^2")).unwrap();
        let r = curvature(&s, &[1.0, 1.0, 1.0]).unwrap();
        assert!((r.k - 2.0).abs() < 1e-12);
        assert!((r.h - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn scherk_kinds_need_nonzero_c() {
        assert!(FamilySpec::scherk(FamilyKind::ScherkI3_2, 0.0).is_err());
        assert!(FamilySpec::scherk(FamilyKind::Type1, 1.0).is_err());
        let s = build(&FamilySpec::scherk(FamilyKind::ScherkI3_3, 2.0).unwrap()).unwrap();
        assert_eq!(s.ambient_dim(), 3);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("type5".parse::<FamilyKind>().is_err());
    }
}
