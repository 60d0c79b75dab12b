//! Dispatch from a resolved configuration to the library algorithms and
//! assembly of the JSON result.

use std::path::{Path, PathBuf};

use molqs::algorithms::{
    run_adapt_vqe, run_mrsqk, run_pqe, run_qite, run_qk, run_qlanczos, run_qpe, run_spqe, run_vqe,
    AdaptOptions, KrylovEvolution, MrsqkOptions, PqeOptions, QiteOptions, QkOptions, QkResult,
    QpeEvolution, QpeOptions, ResourceReport, SpqeOptions, VqeOptions,
};
use molqs::dynamics::ElementMethod;
use molqs::solvers::{fci_oracle, Method, DEFAULT_TRIM_THRESHOLD};
use molqs::system::{read_hamiltonian_json, PoolKind};
use molqs::{Error, MolecularSystem};
use serde_json::{json, Map, Value};

use crate::config::Args;

pub const SCHEMA_VERSION: u32 = 1;

pub const ALGORITHMS: &[&str] =
    &["vqe", "adapt-vqe", "pqe", "spqe", "qite", "qlanczos", "qk", "mrsqk", "qpe", "fci"];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    UnknownAlgorithm(String),
    Io(String),
    Input(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::UnknownAlgorithm(_) => 3,
            CliError::Io(_) => 4,
            CliError::Input(_) => 5,
            CliError::Solver(_) => 6,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid parameters: {m}"),
            CliError::UnknownAlgorithm(a) => {
                write!(f, "unknown algorithm {a:?} (expected one of {})", ALGORITHMS.join(", "))
            }
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
        }
    }
}

fn solver(e: Error) -> CliError {
    match e {
        Error::InvalidArgument(m) => CliError::Usage(m),
        Error::Io(e) => CliError::Io(e.to_string()),
        other => CliError::Solver(other.to_string()),
    }
}

pub fn load_system(fcidump: Option<&Path>, json: Option<&Path>) -> Result<MolecularSystem, CliError> {
    let (path, result) = match (fcidump, json) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --fcidump or --hamiltonian-json, not both".into()))
        }
        (Some(p), None) => (p, MolecularSystem::load_fcidump(p)),
        (None, Some(p)) => (p, read_hamiltonian_json(p)),
        (None, None) => {
            return Err(CliError::Usage("a system source (--fcidump or --hamiltonian-json) is required".into()))
        }
    };
    result.map_err(|e| match e {
        Error::Io(io) => CliError::Io(format!("{}: {io}", path.display())),
        other => CliError::Input(format!("{}: {other}", path.display())),
    })
}

fn resources(r: &ResourceReport) -> Value {
    json!({
        "n_parameters": r.n_parameters,
        "n_cnot": r.n_cnot,
        "n_pauli_evaluations": r.n_pauli_evaluations,
        "n_gradient_pauli_evaluations": r.n_gradient_pauli_evaluations,
        "n_iterations": r.n_iterations,
    })
}

fn pool_kind(args: &Args) -> Result<PoolKind, CliError> {
    args.pool.as_deref().unwrap_or("SD").parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn method(args: &Args) -> Result<Method, CliError> {
    match args.optimizer.as_deref().unwrap_or("bfgs").to_ascii_lowercase().as_str() {
        "bfgs" => Ok(Method::Bfgs),
        "nelder-mead" | "nm" => Ok(Method::NelderMead),
        other => Err(CliError::Usage(format!("unknown optimizer {other:?}"))),
    }
}

/// Algorithm outcome before the common fields are attached.
struct Outcome {
    energy: f64,
    trajectory: Vec<f64>,
    report: ResourceReport,
    parameters: Map<String, Value>,
    extra: Map<String, Value>,
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn krylov_options(args: &Args) -> QkOptions {
    let evolution = if args.exact_evolution {
        KrylovEvolution::Exact
    } else {
        KrylovEvolution::Trotter { steps: args.trotter_r.unwrap_or(1) }
    };
    let method = match args.shots {
        Some(shots) => ElementMethod::SampledHadamardTest { shots, seed: args.seed.unwrap_or(0) },
        None => ElementMethod::Direct,
    };
    QkOptions {
        s: args.s.unwrap_or(3),
        dt: args.dt.unwrap_or(0.5),
        evolution,
        method,
        trim_threshold: args.trim.unwrap_or(DEFAULT_TRIM_THRESHOLD),
    }
}

fn krylov_outcome(r: QkResult, parameters: Map<String, Value>) -> Outcome {
    let extra = obj(json!({
        "retained_dim": r.subspace.retained_dim,
        "subspace_energies": r.subspace.energies,
        "references": r.references.iter().map(|b| b.bits()).collect::<Vec<_>>(),
    }));
    Outcome {
        energy: r.energy(),
        trajectory: Vec::new(),
        report: r.report,
        parameters,
        extra,
    }
}

fn run_algorithm(name: &str, system: &MolecularSystem, args: &Args) -> Result<Outcome, CliError> {
    let seed = args.seed.unwrap_or(0);
    match name {
        "vqe" => {
            let opts = VqeOptions {
                pool: pool_kind(args)?,
                method: method(args)?,
                tol: args.tol.unwrap_or(1e-6),
                max_iter: args.max_iter.unwrap_or(1000),
            };
            let r = run_vqe(system, &opts).map_err(solver)?;
            Ok(Outcome {
                energy: r.energy,
                trajectory: Vec::new(),
                parameters: obj(json!({"pool": opts.pool.to_string(), "tol": opts.tol, "max_iter": opts.max_iter,
                    "optimizer": format!("{:?}", opts.method).to_lowercase()})),
                extra: obj(json!({"amplitudes": r.ansatz.amplitudes, "converged": r.status == molqs::solvers::Status::Converged})),
                report: r.report,
            })
        }
        "adapt-vqe" | "adapt" => {
            let opts = AdaptOptions {
                pool: pool_kind(args)?,
                grad_norm_threshold: args.tol.unwrap_or(1e-5),
                max_depth: args.max_depth.unwrap_or(50),
                method: method(args)?,
                ..Default::default()
            };
            let r = run_adapt_vqe(system, &opts).map_err(solver)?;
            Ok(Outcome {
                energy: r.energy,
                trajectory: r.energies,
                parameters: obj(json!({"pool": opts.pool.to_string(), "grad_norm_threshold": opts.grad_norm_threshold,
                    "max_depth": opts.max_depth})),
                extra: obj(json!({"stop": r.stop, "gradient_norms": r.gradient_norms,
                    "operators": r.ansatz.excitations.iter().map(|e| e.to_string()).collect::<Vec<_>>()})),
                report: r.report,
            })
        }
        "pqe" => {
            let opts = PqeOptions {
                pool: pool_kind(args)?,
                residual_tol: args.tol.unwrap_or(1e-6),
                max_iter: args.max_iter.unwrap_or(500),
            };
            let r = run_pqe(system, &opts).map_err(solver)?;
            Ok(Outcome {
                energy: r.energy,
                trajectory: Vec::new(),
                parameters: obj(json!({"pool": opts.pool.to_string(), "residual_tol": opts.residual_tol, "max_iter": opts.max_iter})),
                extra: obj(json!({"residual_norm": r.residual_norm, "amplitudes": r.ansatz.amplitudes})),
                report: r.report,
            })
        }
        "spqe" => {
            let opts = SpqeOptions {
                omega: args.omega.unwrap_or(1e-2),
                dt: args.dt.unwrap_or(1e-3),
                shots: args.shots,
                seed,
                residual_tol: args.tol.unwrap_or(1e-6),
                ..Default::default()
            };
            let r = run_spqe(system, &opts).map_err(solver)?;
            Ok(Outcome {
                energy: r.energy,
                trajectory: Vec::new(),
                parameters: obj(json!({"omega": opts.omega, "dt": opts.dt, "shots": opts.shots, "residual_tol": opts.residual_tol})),
                extra: obj(json!({"operators": r.ansatz.excitations.iter().map(|e| e.to_string()).collect::<Vec<_>>()})),
                report: r.report,
            })
        }
        "qite" | "qlanczos" => {
            let opts = QiteOptions {
                dbeta: args.dbeta.unwrap_or(0.1),
                beta_max: args.beta_max.unwrap_or(10.0),
                pool: pool_kind(args)?,
                ..Default::default()
            };
            let r = run_qite(system, &opts).map_err(solver)?;
            let mut parameters = obj(json!({"dbeta": opts.dbeta, "beta_max": opts.beta_max, "pool": opts.pool.to_string()}));
            if name == "qite" {
                return Ok(Outcome { energy: r.energy, trajectory: r.energies.clone(), report: r.report, parameters, extra: Map::new() });
            }
            let trim = args.trim.unwrap_or(DEFAULT_TRIM_THRESHOLD);
            parameters.insert("trim".into(), json!(trim));
            let l = run_qlanczos(&r, opts.beta_max, trim).map_err(solver)?;
            let mut report = r.report.clone();
            report.n_parameters = l.dim();
            report.final_energy = l.ground_energy();
            Ok(Outcome {
                energy: l.ground_energy(),
                trajectory: r.energies,
                report,
                parameters,
                extra: obj(json!({"retained_dim": l.retained_dim, "qite_energy": r.energy})),
            })
        }
        "qk" => {
            let opts = krylov_options(args);
            let parameters = obj(json!({"s": opts.s, "dt": opts.dt, "trotter_r": args.trotter_r.unwrap_or(1),
                "exact_evolution": args.exact_evolution, "shots": args.shots, "trim": opts.trim_threshold}));
            Ok(krylov_outcome(run_qk(system, &opts).map_err(solver)?, parameters))
        }
        "mrsqk" => {
            let qk = krylov_options(args);
            let opts = MrsqkOptions { d: args.d_refs.unwrap_or(2), qk, prelim: None, shots: args.shots, seed };
            let parameters = obj(json!({"d_refs": opts.d, "s": opts.qk.s, "dt": opts.qk.dt,
                "trotter_r": args.trotter_r.unwrap_or(1), "exact_evolution": args.exact_evolution, "shots": args.shots}));
            Ok(krylov_outcome(run_mrsqk(system, &opts).map_err(solver)?, parameters))
        }
        "qpe" => {
            let opts = QpeOptions {
                n_ancilla: args.n_ancilla.unwrap_or(8),
                t: args.time.unwrap_or(1.0),
                evolution: match args.trotter_r {
                    Some(steps) => QpeEvolution::Trotter { steps },
                    None => QpeEvolution::Exact,
                },
                shots: args.shots.unwrap_or(1000),
                seed,
            };
            let r = run_qpe(system, &opts).map_err(solver)?;
            let counts: Map<String, Value> = r.counts.iter().map(|(m, c)| (m.to_string(), json!(c))).collect();
            Ok(Outcome {
                energy: r.energy,
                trajectory: Vec::new(),
                parameters: obj(json!({"n_ancilla": opts.n_ancilla, "time": opts.t, "trotter_r": args.trotter_r,
                    "shots": opts.shots})),
                extra: obj(json!({"modal_readout": r.modal_readout, "resolution": r.resolution, "counts": counts})),
                report: r.report,
            })
        }
        "fci" => {
            let r = fci_oracle(system.hamiltonian(), system.n_qubits(), Some(system.n_electrons())).map_err(solver)?;
            Ok(Outcome {
                energy: r.energy,
                trajectory: Vec::new(),
                report: ResourceReport { final_energy: r.energy, ..Default::default() },
                parameters: Map::new(),
                extra: Map::new(),
            })
        }
        other => Err(CliError::UnknownAlgorithm(other.to_string())),
    }
}

pub fn canonical(name: &str) -> Result<&'static str, CliError> {
    let lower = name.to_ascii_lowercase();
    let lower = if lower == "adapt" { "adapt-vqe".to_string() } else { lower };
    ALGORITHMS
        .iter()
        .copied()
        .find(|a| *a == lower)
        .ok_or_else(|| CliError::UnknownAlgorithm(name.to_string()))
}

/// Result for one system as a JSON object.
pub fn run_single(name: &str, system: &MolecularSystem, source: &str, args: &Args) -> Result<Value, CliError> {
    let name = canonical(name)?;
    let o = run_algorithm(name, system, args)?;
    let mut out = obj(json!({
        "schema_version": SCHEMA_VERSION,
        "algorithm": name,
        "system": {
            "source": source,
            "n_qubits": system.n_qubits(),
            "n_electrons": system.n_electrons(),
            "ms2": system.ms2(),
            "n_pauli_strings": system.n_pauli_strings(),
            "hf_energy": system.hf_energy(),
        },
        "parameters": o.parameters,
        "energy": o.energy,
        "trajectory": o.trajectory,
        "resources": resources(&o.report),
        "seed": args.seed.unwrap_or(0),
    }));
    if let Some(d) = o.extra.get("retained_dim") {
        out.insert("retained_dim".into(), d.clone());
    }
    let details: Map<String, Value> = o.extra.into_iter().filter(|(k, _)| k != "retained_dim").collect();
    if !details.is_empty() {
        out.insert("details".into(), Value::Object(details));
    }
    Ok(Value::Object(out))
}

/// One scan point: system path and optional reference energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub path: PathBuf,
    pub reference: Option<f64>,
}

/// Manifest lines are `PATH [REFERENCE_ENERGY]`; blank lines and `#`
/// comments are skipped. Relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ScanPoint>, CliError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let path = base.join(parts.next().expect("nonempty line"));
        let reference = parts
            .next()
            .map(|v| v.parse::<f64>().map_err(|_| CliError::Input(format!("manifest line {}: bad energy {v:?}", i + 1))))
            .transpose()?;
        if parts.next().is_some() {
            return Err(CliError::Input(format!("manifest line {}: too many fields", i + 1)));
        }
        points.push(ScanPoint { path, reference });
    }
    if points.is_empty() {
        return Err(CliError::Input("scan manifest lists no systems".into()));
    }
    Ok(points)
}

/// Runs every manifest entry (in parallel worker threads) and reports the
/// mean signed error against the supplied reference energies.
pub fn run_scan(name: &str, points: &[ScanPoint], args: &Args) -> Result<Value, CliError> {
    let name = canonical(name)?;
    let systems: Vec<MolecularSystem> =
        points.iter().map(|p| load_system(Some(&p.path), None)).collect::<Result<_, _>>()?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len());
    let mut results: Vec<Option<Result<Value, CliError>>> = (0..points.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<_> = results.chunks_mut(points.len().div_ceil(workers)).enumerate().collect();
        for (c, slot) in chunks {
            let base = c * points.len().div_ceil(workers);
            let systems = &systems;
            scope.spawn(move || {
                for (k, out) in slot.iter_mut().enumerate() {
                    let i = base + k;
                    let source = points[i].path.display().to_string();
                    *out = Some(run_single(name, &systems[i], &source, args));
                }
            });
        }
    });
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut parameters = Value::Null;
    for (p, r) in points.iter().zip(results) {
        let mut v = r.expect("every point ran")?;
        let energy = v["energy"].as_f64().expect("energy is numeric");
        parameters = v["parameters"].clone();
        let m = v.as_object_mut().expect("object");
        m.remove("schema_version");
        m.remove("algorithm");
        m.remove("parameters");
        m.remove("seed");
        m.insert("reference".into(), json!(p.reference));
        if let Some(e) = p.reference {
            errors.push(energy - e);
            m.insert("error".into(), json!(energy - e));
        }
        rows.push(v);
    }
    let mse = (!errors.is_empty()).then(|| errors.iter().sum::<f64>() / errors.len() as f64);
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "algorithm": name,
        "parameters": parameters,
        "seed": args.seed.unwrap_or(0),
        "points": rows,
        "mean_signed_error": mse,
        "n_with_reference": errors.len(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing() {
        let pts = parse_manifest("a.fcidump -1.5\n# skip\n\nb.fcidump\n", Path::new("/x")).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0], ScanPoint { path: PathBuf::from("/x/a.fcidump"), reference: Some(-1.5) });
        assert_eq!(pts[1].reference, None);
        assert!(parse_manifest("a b c", Path::new(".")).is_err());
        assert!(parse_manifest("a nope", Path::new(".")).is_err());
        assert!(parse_manifest("# only comments", Path::new(".")).is_err());
    }

    #[test]
    fn algorithm_names() {
        assert_eq!(canonical("VQE").unwrap(), "vqe");
        assert_eq!(canonical("adapt").unwrap(), "adapt-vqe");
        assert_eq!(canonical("magic").unwrap_err().exit_code(), 3);
    }
}
