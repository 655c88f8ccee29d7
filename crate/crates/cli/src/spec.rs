//! JSON family specs.
//!
//! ```json
//! {"kind": "type2", "curves": {"f": "u^2", "g": "v^2", "h": "w^2"},
//!  "domain": {"u": [0.5, 2], "v": [0, 1], "w": [0, 1]}}
//! {"kind": "theorem-branch", "branch": "thm4.1", "params": {"lambda": 1}}
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use isocurv::curveexpr::Curve1D;
use isocurv::families::{theorem_family, CurvaturePrediction, CurveSet, FamilyKind, FamilySpec};
use isocurv::geometry::ParamBox;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kind: String,
    #[serde(default)]
    pub curves: BTreeMap<String, String>,
    #[serde(default)]
    pub domain: BTreeMap<String, [f64; 2]>,
    pub branch: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

pub struct Loaded {
    pub spec: FamilySpec,
    pub prediction: Option<CurvaturePrediction>,
}

pub fn read(path: &Path) -> Result<SpecFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn branch_file(branch: &str) -> SpecFile {
    SpecFile {
        kind: FamilyKind::TheoremBranch.name().into(),
        curves: BTreeMap::new(),
        domain: BTreeMap::new(),
        branch: Some(branch.into()),
        params: BTreeMap::new(),
    }
}

/// The spec's current domain with the axes named in `domain` replaced.
fn merge_domain(spec: &FamilySpec, domain: &BTreeMap<String, [f64; 2]>) -> Result<ParamBox, String> {
    let names = spec.base_kind().param_names();
    if let Some(k) = domain.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(format!("unknown domain axis {k:?} (expected {})", names.join(", ")));
    }
    let mut bounds = spec.domain().bounds().to_vec();
    for (i, n) in names.iter().enumerate() {
        if let Some([a, b]) = domain.get(*n) {
            if !(a.is_finite() && b.is_finite()) {
                return Err(format!("domain axis {n} must be finite"));
            }
            bounds[i] = (*a, *b);
        }
    }
    Ok(ParamBox::new(bounds))
}

/// Turns a spec file, with `--param` overrides applied, into a family.
pub fn load(file: SpecFile, overrides: &BTreeMap<String, f64>) -> Result<Loaded, String> {
    let kind: FamilyKind = file.kind.parse().map_err(|e: isocurv::Error| e.to_string())?;
    let mut params = file.params;
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));

    if kind == FamilyKind::TheoremBranch {
        let id = file.branch.ok_or("theorem-branch spec needs a \"branch\" field")?;
        if !file.curves.is_empty() {
            return Err("theorem-branch specs take no curves".into());
        }
        let (mut spec, prediction) = theorem_family(&id, &params).map_err(|e| e.to_string())?;
        spec.domain = Some(merge_domain(&spec, &file.domain)?);
        return Ok(Loaded {
            spec,
            prediction: Some(prediction),
        });
    }
    if file.branch.is_some() {
        return Err(format!("\"branch\" is only valid for kind {}", FamilyKind::TheoremBranch));
    }

    let mut spec = if kind.is_scherk() {
        if !file.curves.is_empty() {
            return Err(format!("{kind} takes no curves"));
        }
        let c = params.get("c").copied().unwrap_or(1.0);
        FamilySpec::scherk(kind, c).map_err(|e| e.to_string())?
    } else {
        let slots = ["f", "g", "h"];
        let need = &slots[..kind.curve_slots()];
        if let Some(k) = file.curves.keys().find(|k| !need.contains(&k.as_str())) {
            return Err(format!("{kind} has no curve {k:?} (expected {})", need.join(", ")));
        }
        let mut parsed = Vec::new();
        for s in need {
            let src = file.curves.get(*s).ok_or_else(|| format!("{kind} needs curve {s:?}"))?;
            parsed.push(Some(std::sync::Arc::new(
                Curve1D::parse(src).map_err(|e| format!("curve {s}: {e}"))?,
            )));
        }
        parsed.resize(3, None);
        let curves = CurveSet {
            f: parsed[0].take(),
            g: parsed[1].take(),
            h: parsed[2].take(),
        };
        FamilySpec::raw(kind, curves, None)
    };
    spec.domain = Some(merge_domain(&spec, &file.domain)?);
    Ok(Loaded {
        spec: spec.with_params(params),
        prediction: None,
    })
}
