//! `iso`: evaluate curvatures, verify theorem families, check residuals,
//! export sampled meshes and list the theorem registry.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or domain error.

mod spec;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isocurv::families::{branches, build, FamilySpec};
use isocurv::geometry::{curvature_with, DiffMode};
use isocurv::verify::{
    constancy_sweep, residual_catalog, residual_sweep, Quantity, SweepConfig, SweepReport, DEFAULT_RANDOM,
    DEFAULT_SEED,
};
use serde_json::{json, Value};

const DEFAULT_VERIFY_TOL: f64 = 1e-8;
const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "iso", version, about = "Curvature of translation hypersurfaces in isotropic 4-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curvatures at one parameter point, as JSON.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Parameter point, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Constancy sweep of K and/or H, compared with the branch prediction.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sweep: SweepOpts,
        /// Tolerance, scaled by max(1, |value|) (default 1e-8).
        #[arg(long)]
        tol: Option<f64>,
        /// Quantity to sweep; defaults to the predicted ones (both for raw families).
        #[arg(long)]
        quantity: Option<Quantity>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Largest residual of separation equations over seeded sample points.
    Residual {
        #[command(flatten)]
        source: Source,
        /// Equation name; repeatable. Defaults to the branch's own equations.
        #[arg(long)]
        name: Vec<String>,
        /// Number of sample points.
        #[arg(long, default_value_t = DEFAULT_RANDOM)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Absolute tolerance (default 1e-10).
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Sampled mesh as CSV.
    Export {
        #[command(flatten)]
        source: Source,
        /// Nodes per axis (default 10 each).
        #[arg(long, value_delimiter = ',')]
        grid: Vec<usize>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Registry branches with parameters, constraints and predictions.
    List {
        /// Also list the residual catalog.
        #[arg(long)]
        residuals: bool,
    },
}

#[derive(Args)]
struct Source {
    /// JSON family spec.
    #[arg(long, conflicts_with = "branch")]
    spec: Option<PathBuf>,
    /// Registry branch id, e.g. thm4.1.
    #[arg(long)]
    branch: Option<String>,
    /// Parameter override `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
}

#[derive(Args)]
struct SweepOpts {
    /// Nodes per axis (default 10 each).
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    /// Extra random points.
    #[arg(long, default_value_t = DEFAULT_RANDOM)]
    random: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct RunOpts {
    /// Use finite differences instead of jets.
    #[arg(long)]
    fd: bool,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunOpts {
    fn mode(&self) -> DiffMode {
        if self.fd {
            DiffMode::FiniteDifference
        } else {
            DiffMode::Jet
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("bad number in {s:?}"))?;
    Ok((k.trim().to_string(), v))
}

enum Outcome {
    Pass,
    Fail,
}

type CmdResult = Result<Outcome, String>;

fn load(source: &Source) -> Result<spec::Loaded, String> {
    let file = match (&source.spec, &source.branch) {
        (Some(path), None) => spec::read(path)?,
        (None, Some(id)) => spec::branch_file(id),
        _ => return Err("one of --spec or --branch is required".into()),
    };
    let overrides: BTreeMap<String, f64> = source.params.iter().cloned().collect();
    spec::load(file, &overrides)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(out, &text)
}

fn cmd_eval(source: &Source, point: &[f64], run: &RunOpts) -> CmdResult {
    let loaded = load(source)?;
    let s = build(&loaded.spec).map_err(|e| e.to_string())?;
    let r = curvature_with(&s, point, run.mode()).map_err(|e| e.to_string())?;
    emit_json(
        &run.out,
        &json!({
            "family": loaded.spec.name(),
            "point": r.point,
            "K": r.k,
            "H": r.h,
            "principal": r.principal,
            "det_g": r.det_g,
        }),
    )?;
    Ok(Outcome::Pass)
}

fn within(mean: f64, predicted: f64, tol: f64) -> bool {
    (mean - predicted).abs() <= tol * predicted.abs().max(1.0)
}

fn cmd_verify(source: &Source, sweep: &SweepOpts, tol: Option<f64>, quantity: Option<Quantity>, run: &RunOpts) -> CmdResult {
    let tol = tol.unwrap_or(DEFAULT_VERIFY_TOL);
    if !(tol > 0.0) {
        return Err("--tol must be positive".into());
    }
    let loaded = load(source)?;
    let s = build(&loaded.spec).map_err(|e| e.to_string())?;
    let prediction = loaded.prediction.unwrap_or_default();
    let quantities: Vec<Quantity> = match quantity {
        Some(q) => vec![q],
        None if loaded.prediction.is_some() => {
            let mut qs = Vec::new();
            if prediction.k.is_some() {
                qs.push(Quantity::K);
            }
            if prediction.h.is_some() {
                qs.push(Quantity::H);
            }
            if qs.is_empty() {
                return Err(format!("{} has no curvature prediction", loaded.spec.name()));
            }
            qs
        }
        None => vec![Quantity::K, Quantity::H],
    };
    let cfg = SweepConfig {
        grid: sweep.grid.clone(),
        random: sweep.random,
        seed: sweep.seed,
        mode: run.mode(),
    };
    let mut pass = true;
    let mut reports = Vec::new();
    for q in quantities {
        let r: SweepReport = constancy_sweep(&s, q, &cfg).map_err(|e| e.to_string())?;
        let predicted = match q {
            Quantity::K => prediction.k,
            Quantity::H => prediction.h,
        };
        let ok = r.is_constant(tol) && predicted.is_none_or(|p| within(r.mean, p, tol));
        pass &= ok;
        let mut v = serde_json::to_value(&r).map_err(|e| e.to_string())?;
        v["predicted"] = json!(predicted);
        v["pass"] = json!(ok);
        reports.push(v);
    }
    emit_json(
        &run.out,
        &json!({
            "family": loaded.spec.name(),
            "params": loaded.spec.params,
            "tol": tol,
            "seed": sweep.seed,
            "sweeps": reports,
            "pass": pass,
        }),
    )?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_residual(source: &Source, names: &[String], samples: usize, seed: u64, tol: Option<f64>, run: &RunOpts) -> CmdResult {
    let tol = tol.unwrap_or(DEFAULT_RESIDUAL_TOL);
    if !(tol > 0.0) {
        return Err("--tol must be positive".into());
    }
    let loaded = load(source)?;
    let spec: &FamilySpec = &loaded.spec;
    let names: Vec<String> = if names.is_empty() {
        match &spec.branch {
            Some(b) if !b.residuals.is_empty() => b.residuals.iter().map(|s| s.to_string()).collect(),
            Some(b) => return Err(format!("{} has no catalog equations", b.id)),
            None => return Err("--name is required for families outside the registry".into()),
        }
    } else {
        names.to_vec()
    };
    let mut pass = true;
    let mut rows = Vec::new();
    for n in &names {
        let r = residual_sweep(n, spec, samples, seed).map_err(|e| e.to_string())?;
        let ok = r.max_abs <= tol;
        pass &= ok;
        rows.push(json!({
            "name": r.name,
            "max_abs": r.max_abs,
            "worst": r.worst,
            "samples": r.samples,
            "pass": ok,
        }));
    }
    emit_json(
        &run.out,
        &json!({
            "family": spec.name(),
            "tol": tol,
            "seed": seed,
            "residuals": rows,
            "pass": pass,
        }),
    )?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_export(source: &Source, grid: &[usize], run: &RunOpts) -> CmdResult {
    let loaded = load(source)?;
    let s = build(&loaded.spec).map_err(|e| e.to_string())?;
    let dim = s.param_dim();
    let counts = if grid.is_empty() {
        vec![isocurv::verify::DEFAULT_NODES; dim]
    } else {
        grid.to_vec()
    };
    let points = s.domain.grid(&counts).map_err(|e| e.to_string())?;
    let names = loaded.spec.base_kind().param_names();
    let with_curvature = s.is_hypersurface();
    let mut header: Vec<String> = names.iter().map(|n| n.to_string()).collect();
    header.extend((1..=s.ambient_dim()).map(|k| format!("x{k}")));
    if with_curvature {
        header.extend(["K".to_string(), "H".to_string()]);
    }
    let mut text = header.join(",");
    text.push('\n');
    for x in &points {
        let mut row: Vec<f64> = x.clone();
        row.extend(s.point(x).map_err(|e| e.to_string())?);
        if with_curvature {
            let r = curvature_with(&s, x, run.mode()).map_err(|e| e.to_string())?;
            row.extend([r.k, r.h]);
        }
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    emit(&run.out, &text)?;
    Ok(Outcome::Pass)
}

fn cmd_list(residuals: bool) -> CmdResult {
    let mut text = String::new();
    for b in branches() {
        let params: Vec<String> = b.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        text.push_str(&format!("{}\n", b.id));
        text.push_str(&format!("  params:      {}\n", params.join(", ")));
        text.push_str(&format!("  constraints: {}\n", b.constraints));
        text.push_str(&format!("  prediction:  {}\n", b.prediction));
        if !b.residuals.is_empty() {
            text.push_str(&format!("  equations:   {}\n", b.residuals.join(", ")));
        }
    }
    if residuals {
        text.push_str("\nequations\n");
        for r in residual_catalog() {
            text.push_str(&format!("  {:8} {:14} {}\n", r.name, r.kind.name(), r.equation));
        }
    }
    emit(&None, &text)?;
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval { source, point, run } => cmd_eval(source, point, run),
        Command::Verify {
            source,
            sweep,
            tol,
            quantity,
            run,
        } => cmd_verify(source, sweep, *tol, *quantity, run),
        Command::Residual {
            source,
            name,
            samples,
            seed,
            tol,
            run,
        } => cmd_residual(source, name, *samples, *seed, *tol, run),
        Command::Export { source, grid, run } => cmd_export(source, grid, run),
        Command::List { residuals } => cmd_list(*residuals),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
