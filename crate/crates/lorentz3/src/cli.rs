//! Command-line interface.
//!
//! Every command prints one JSON document to stdout (sweeps additionally
//! write CSV/JSON report files). Exit codes: 0 success, 1 not admissible /
//! inconclusive, 2 invalid input, 3 a sweep raised a discrepancy flag.
//!
//! Rational parameters are given as `n/d` or integer strings; decimal or
//! exponent notation marks the value as a float and switches the whole
//! invocation to the floating backend (recorded in the output). The
//! `LORENTZ3_TAU` environment variable overrides the default comparison
//! tolerance of the floating backend.

use clap::{Parser, Subcommand};
use serde_json::{Value, json};

use crate::curvature::{CurvatureOperator, LAMBDA2_BASIS_LABELS, operator_of};
use crate::error::ExistenceError;
use crate::existence::{A2Reconstruction, RealizeOptions, admissible, realize, reconstruct_a2};
use crate::jsonio::{JsonScalar, contains_float, mat3_to_json};
use crate::kernel::{DEFAULT_TAU, Fl, Rat, Scalar};
use crate::liealg::{
    Family, FamilyParams, LieAlgebraType, MetricLieAlgebra, a1_type_from_signs, build,
    unimodular_type,
};
use crate::segre::{SegreData, classify};
use crate::sweep::{SweepConfig, region_summary, run_sweep};
use crate::symspace::{SymmetricSpaceSpec, symmetric_operator};

#[derive(Parser)]
#[command(
    name = "lorentz3",
    about = "Sectional curvature operators of 3D locally homogeneous Lorentzian spaces",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and classify the curvature operator of a metric Lie algebra.
    Classify {
        /// Catalog family (A1, A2, A3, A4, NA, NB, NC1, NC2).
        #[arg(long)]
        family: Option<String>,
        /// Comma-separated parameters in the family's canonical order.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Path to (or inline) JSON of a metric Lie algebra; `family
        /// = "free"` accepts raw brackets plus a gram matrix.
        #[arg(long)]
        algebra: Option<String>,
        /// Force a backend: `exact` or `approx`.
        #[arg(long)]
        backend: Option<String>,
    },
    /// Operator and Segre data of a locally symmetric catalog entry.
    Symmetric {
        /// Path to (or inline) JSON of the symmetric space spec.
        #[arg(long)]
        spec: String,
    },
    /// Decide admissibility of prescribed Segre data.
    Admissible {
        /// Inline JSON, e.g. '{"type":"{21}","eigenvalues":[0,0]}'.
        #[arg(long)]
        segre: String,
    },
    /// Invert the A2 eigenvalue formulas for a {21} target.
    Reconstruct {
        #[arg(long, allow_hyphen_values = true)]
        k1: String,
        #[arg(long, allow_hyphen_values = true)]
        k2: String,
    },
    /// Search for a realizing catalog entry for admissible Segre data.
    Realize {
        #[arg(long)]
        segre: String,
        /// Restrict the search to one family.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Run a parameter sweep from a JSON config file.
    Sweep {
        #[arg(long)]
        config: String,
    },
    /// Unimodular-type lookup: structure-constant restrictions per family.
    Table {
        /// Sign triple for the diagonal family, e.g. "+,+,-".
        #[arg(long)]
        signs: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn fail(msg: impl Into<String>) -> i32 {
    emit(&json!({ "error": msg.into() }));
    2
}

fn env_tau() -> f64 {
    std::env::var("LORENTZ3_TAU")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_TAU)
}

/// A token in decimal/exponent notation forces the floating backend.
fn token_is_float(s: &str) -> bool {
    s.contains('.') || s.contains('e') || s.contains('E')
}

fn read_json_arg(arg: &str) -> Result<Value, String> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read `{arg}`: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON in `{arg}`: {e}"))
}

fn parse_family(name: &str) -> Result<Family, String> {
    Family::parse(name).ok_or_else(|| format!("unknown family `{name}`"))
}

fn parse_params<S: JsonScalar>(
    family: Family,
    raw: &str,
    tau: f64,
) -> Result<FamilyParams<S>, String> {
    let tokens: Vec<&str> = raw.split(',').map(str::trim).collect();
    let mut vals = Vec::new();
    for t in &tokens {
        let v = if S::EXACT {
            S::from_json_value(&Value::String((*t).to_string()))
        } else {
            t.parse::<f64>()
                .ok()
                .map(|x| Fl::with_tau(x, tau))
                .and_then(|f| S::from_json_value(&f.to_json_value()))
                .map(|v| v.retag_tau(tau))
                .or_else(|| {
                    Rat::parse(t).map(|r| {
                        S::from_json_value(&json!(Scalar::to_f64(&r)))
                            .expect("float from rational")
                            .retag_tau(tau)
                    })
                })
        };
        match v {
            Some(v) => vals.push(v),
            None => return Err(format!("params: cannot parse `{t}`")),
        }
    }
    FamilyParams::from_values(family, &vals).map_err(|e| e.to_string())
}

fn operator_json<S: JsonScalar>(op: &CurvatureOperator<S>) -> Value {
    json!({
        "K": mat3_to_json(&op.k),
        "gram2": mat3_to_json(&op.gram2),
        "basis": LAMBDA2_BASIS_LABELS,
    })
}

fn classify_family<S: JsonScalar>(
    family: Family,
    raw_params: &str,
    tau: f64,
    backend: &str,
) -> Result<Value, String> {
    let params = parse_params::<S>(family, raw_params, tau)?;
    let alg = build(params.clone()).map_err(|e| e.to_string())?;
    classify_algebra(alg, backend)
}

fn classify_algebra<S: JsonScalar>(
    alg: MetricLieAlgebra<S>,
    backend: &str,
) -> Result<Value, String> {
    let op = operator_of(&alg).map_err(|e| e.to_string())?;
    let segre = classify(&op.k);
    let mut out = json!({
        "backend": backend,
        "algebra": alg.to_json(),
        "operator": operator_json(&op),
        "segre": segre.to_json(),
    });
    if let Some(params) = &alg.params {
        if params.family().is_unimodular() {
            if let Ok(t) = unimodular_type(params) {
                out["unimodular_type"] = Value::String(t.name().into());
            }
        }
    }
    Ok(out)
}

fn cmd_classify(
    family: Option<String>,
    params: Option<String>,
    algebra: Option<String>,
    backend: Option<String>,
) -> i32 {
    let tau = env_tau();
    let result = if let Some(path) = algebra {
        let v = match read_json_arg(&path) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let approx = matches!(backend.as_deref(), Some("approx")) || contains_float(&v);
        if approx {
            MetricLieAlgebra::<Fl>::from_json(&v)
                .map_err(|e| e.to_string())
                .and_then(|alg| classify_algebra(alg.map_scalars(|s| s.retag_tau(tau)), "approx"))
        } else {
            MetricLieAlgebra::<Rat>::from_json(&v)
                .map_err(|e| e.to_string())
                .and_then(|alg| classify_algebra(alg, "exact"))
        }
    } else {
        let (Some(f), Some(p)) = (family, params) else {
            return fail("classify needs --family and --params (or --algebra)");
        };
        let fam = match parse_family(&f) {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        let approx = matches!(backend.as_deref(), Some("approx"))
            || p.split(',').any(|t| token_is_float(t.trim()));
        if approx {
            classify_family::<Fl>(fam, &p, tau, "approx")
        } else {
            classify_family::<Rat>(fam, &p, tau, "exact")
        }
    };
    match result {
        Ok(v) => {
            emit(&v);
            0
        }
        Err(e) => fail(e),
    }
}

fn cmd_symmetric(spec: String) -> i32 {
    let v = match read_json_arg(&spec) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    fn go<S: JsonScalar>(v: &Value, backend: &str, tau: f64) -> Result<Value, String> {
        let spec = SymmetricSpaceSpec::<S>::from_json(v).map_err(|e| e.to_string())?;
        let spec = retag_spec(spec, tau);
        let op = symmetric_operator(&spec);
        Ok(json!({
            "backend": backend,
            "spec": spec.to_json(),
            "operator": operator_json(&op),
            "segre": classify(&op.k).to_json(),
        }))
    }
    fn retag_spec<S: JsonScalar>(spec: SymmetricSpaceSpec<S>, tau: f64) -> SymmetricSpaceSpec<S> {
        let rp = |p: &crate::kernel::Poly<S>| {
            crate::kernel::Poly::new(p.coeffs().iter().map(|c| c.retag_tau(tau)).collect())
        };
        match spec {
            SymmetricSpaceSpec::SpaceForm { c } => SymmetricSpaceSpec::SpaceForm {
                c: c.retag_tau(tau),
            },
            SymmetricSpaceSpec::Product { kind, c } => SymmetricSpaceSpec::Product {
                kind,
                c: c.retag_tau(tau),
            },
            SymmetricSpaceSpec::PlaneWave {
                epsilon,
                alpha,
                beta,
                xi,
            } => SymmetricSpaceSpec::PlaneWave {
                epsilon,
                alpha: alpha.retag_tau(tau),
                beta: rp(&beta),
                xi: rp(&xi),
            },
        }
    }
    let tau = env_tau();
    let result = if contains_float(&v) {
        go::<Fl>(&v, "approx", tau)
    } else {
        go::<Rat>(&v, "exact", tau)
    };
    match result {
        Ok(v) => {
            emit(&v);
            0
        }
        Err(e) => fail(e),
    }
}

fn cmd_admissible(segre: String) -> i32 {
    let v = match read_json_arg(&segre) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let result = if contains_float(&v) {
        SegreData::<Fl>::from_json(&v)
            .map_err(|e| format!("segre: {e}"))
            .map(|d| d.retag_tau(env_tau()))
            .map(|d| {
                let verdict = admissible(&d);
                let mut out = verdict.to_json();
                out["backend"] = Value::String("approx".into());
                (out, verdict.admissible)
            })
    } else {
        SegreData::<Rat>::from_json(&v)
            .map_err(|e| format!("segre: {e}"))
            .map(|d| {
                let verdict = admissible(&d);
                let mut out = verdict.to_json();
                out["backend"] = Value::String("exact".into());
                (out, verdict.admissible)
            })
    };
    match result {
        Ok((v, ok)) => {
            emit(&v);
            if ok { 0 } else { 1 }
        }
        Err(e) => fail(e),
    }
}

fn cmd_reconstruct(k1: String, k2: String) -> i32 {
    let exact_in = !token_is_float(&k1) && !token_is_float(&k2);
    let (Some(k1r), Some(k2r)) = (Rat::parse(&k1), Rat::parse(&k2)) else {
        return fail("k1/k2: expected rational or decimal values");
    };
    let branch_json = |params: &FamilyParams<Rat>| params_json::<Rat>(params);
    fn params_json<S: JsonScalar>(params: &FamilyParams<S>) -> Value {
        let mut map = serde_json::Map::new();
        for (name, v) in params.family().param_names().iter().zip(params.values()) {
            map.insert((*name).into(), v.to_json_value());
        }
        json!({"family": params.family().name(), "params": map})
    }
    // Exact when -k2 is a rational square; otherwise the floating backend
    // carries the square root.
    let exact_attempt = if exact_in {
        reconstruct_a2(&k1r, &k2r)
    } else {
        Err(ExistenceError::NonRationalData)
    };
    let out = match exact_attempt {
        Ok(A2Reconstruction::Branches(bs)) => json!({
            "backend": "exact",
            "k1": k1r.to_string(),
            "k2": k2r.to_string(),
            "branches": bs.iter().map(branch_json).collect::<Vec<_>>(),
            "free_lambda2": false,
        }),
        Ok(A2Reconstruction::FreeLambda2) => json!({
            "backend": "exact",
            "k1": "0",
            "k2": "0",
            "branches": [{"family": "A2", "params": {"lambda1": "0", "lambda2": "free"}}],
            "free_lambda2": true,
        }),
        Err(ExistenceError::NonRationalData) => {
            let tau = env_tau();
            let (f1, f2) = (
                Fl::with_tau(Scalar::to_f64(&k1r), tau),
                Fl::with_tau(Scalar::to_f64(&k2r), tau),
            );
            match reconstruct_a2(&f1, &f2) {
                Ok(A2Reconstruction::Branches(bs)) => json!({
                    "backend": "approx",
                    "k1": f1.value,
                    "k2": f2.value,
                    "branches": bs.iter().map(params_json::<Fl>).collect::<Vec<_>>(),
                    "free_lambda2": false,
                }),
                Ok(A2Reconstruction::FreeLambda2) => json!({
                    "backend": "approx",
                    "k1": 0.0,
                    "k2": 0.0,
                    "branches": [{"family": "A2", "params": {"lambda1": 0.0, "lambda2": "free"}}],
                    "free_lambda2": true,
                }),
                Err(e) => return fail(format!("k2: {e}")),
            }
        }
        Err(e) => return fail(format!("k2: {e}")),
    };
    emit(&out);
    0
}

fn cmd_realize(
    segre: String,
    family: Option<String>,
    seed: Option<u64>,
    starts: Option<usize>,
    iters: Option<usize>,
) -> i32 {
    let v = match read_json_arg(&segre) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    // Targets are carried exactly; float payloads convert to their exact
    // binary expansions.
    let d = match SegreData::<Rat>::from_json(&v) {
        Ok(d) => d,
        Err(e) => return fail(format!("segre: {e}")),
    };
    let fam = match family.as_deref().filter(|f| *f != "auto") {
        None => None,
        Some(name) => match parse_family(name) {
            Ok(f) => Some(f),
            Err(e) => return fail(e),
        },
    };
    let mut opts = RealizeOptions::default();
    if let Some(s) = seed {
        opts.seed = s;
    }
    if let Some(s) = starts {
        opts.starts = s.max(1);
    }
    if let Some(i) = iters {
        opts.max_iters = i.max(1);
    }
    match realize(&d, fam, &opts) {
        Ok(res) => {
            emit(&json!({
                "admissible": true,
                "conditions": res.conditions,
                "witness": res.witness.to_json(),
                "residual": res.residual,
                "status": "realized",
            }));
            0
        }
        Err(ExistenceError::SearchFailed) => {
            let verdict = admissible(&d);
            emit(&json!({
                "admissible": true,
                "conditions": verdict.matched_conditions,
                "witness": Value::Null,
                "residual": Value::Null,
                "status": "inconclusive",
            }));
            1
        }
        Err(ExistenceError::Invalid(_)) => {
            let verdict = admissible(&d);
            let mut out = verdict.to_json();
            out["status"] = Value::String("not_admissible".into());
            emit(&out);
            1
        }
        Err(e) => fail(format!("segre: {e}")),
    }
}

fn cmd_sweep(config: String) -> i32 {
    let v = match read_json_arg(&config) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let cfg = match SweepConfig::from_json(&v) {
        Ok(c) => c,
        Err(e) => return fail(format!("config: {e}")),
    };
    match run_sweep(&cfg) {
        Ok(report) => {
            emit(&region_summary(&report));
            if report.discrepancies() > 0 { 3 } else { 0 }
        }
        Err(e) => fail(format!("config: {e}")),
    }
}

fn cmd_table(signs: Option<String>, family: Option<String>, params: Option<String>) -> i32 {
    let row_json = |t: LieAlgebraType| {
        let r = t.restrictions();
        json!({"A1": r[0], "A2": r[1], "A3": r[2], "A4": r[3]})
    };
    if let Some(signs) = signs {
        let parts: Vec<&str> = signs.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return fail("signs: expected three of +, -, 0 separated by commas");
        }
        let mut sgn = Vec::new();
        for p in &parts {
            match *p {
                "+" => sgn.push(crate::kernel::Sign::Positive),
                "-" => sgn.push(crate::kernel::Sign::Negative),
                "0" => sgn.push(crate::kernel::Sign::Zero),
                other => return fail(format!("signs: unexpected token `{other}`")),
            }
        }
        let t = a1_type_from_signs([sgn[0], sgn[1], sgn[2]]);
        emit(&json!({
            "signs": signs,
            "type": t.name(),
            "row": row_json(t),
        }));
        return 0;
    }
    let (Some(f), Some(p)) = (family, params) else {
        return fail("table needs --signs or --family with --params");
    };
    let fam = match parse_family(&f) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let params = match parse_params::<Rat>(fam, &p, DEFAULT_TAU) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match unimodular_type(&params) {
        Ok(t) => {
            emit(&json!({
                "family": fam.name(),
                "type": t.name(),
                "row": row_json(t),
            }));
            0
        }
        Err(e) => fail(e.to_string()),
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; keep its exit code semantics
            // (2 for usage errors, 0 for --help/--version).
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Command::Classify {
            family,
            params,
            algebra,
            backend,
        } => cmd_classify(family, params, algebra, backend),
        Command::Symmetric { spec } => cmd_symmetric(spec),
        Command::Admissible { segre } => cmd_admissible(segre),
        Command::Reconstruct { k1, k2 } => cmd_reconstruct(k1, k2),
        Command::Realize {
            segre,
            family,
            seed,
            starts,
            iters,
        } => cmd_realize(segre, family, seed, starts, iters),
        Command::Sweep { config } => cmd_sweep(config),
        Command::Table {
            signs,
            family,
            params,
        } => cmd_table(signs, family, params),
    }
}
