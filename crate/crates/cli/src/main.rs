mod config;
mod runner;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use config::{parse_config, Args};
use runner::{load_system, parse_manifest, run_scan, run_single, CliError};

fn summary(v: &Value) -> String {
    let mut s = String::new();
    let algo = v["algorithm"].as_str().unwrap_or("?");
    if let Some(points) = v["points"].as_array() {
        s.push_str(&format!("{algo} scan over {} systems\n", points.len()));
        for p in points {
            s.push_str(&format!(
                "  {:<40} E = {:>18.12}{}\n",
                p["system"]["source"].as_str().unwrap_or("?"),
                p["energy"].as_f64().unwrap_or(f64::NAN),
                p["error"].as_f64().map_or(String::new(), |e| format!("  error = {:+.6} mEh", 1e3 * e)),
            ));
        }
        if let Some(m) = v["mean_signed_error"].as_f64() {
            s.push_str(&format!("  mean signed error = {:+.6} mEh\n", 1e3 * m));
        }
    } else {
        let r = &v["resources"];
        s.push_str(&format!("{algo}: E = {:.12} Eh\n", v["energy"].as_f64().unwrap_or(f64::NAN)));
        s.push_str(&format!(
            "  parameters {}  CNOTs {}  Pauli evaluations {} (+{} gradient)  iterations {}\n",
            r["n_parameters"], r["n_cnot"], r["n_pauli_evaluations"], r["n_gradient_pauli_evaluations"], r["n_iterations"]
        ));
    }
    s
}

fn run(mut args: Args) -> Result<(), CliError> {
    if let Some(cfg) = args.config.clone() {
        let text = std::fs::read_to_string(&cfg).map_err(|e| CliError::Io(format!("{}: {e}", cfg.display())))?;
        let base = cfg.parent().unwrap_or(Path::new("."));
        args.merge_config(parse_config(&text).map_err(CliError::Usage)?, base).map_err(CliError::Usage)?;
    }
    let name = args
        .algorithm_name()
        .ok_or_else(|| CliError::Usage("no algorithm given".into()))?
        .to_string();
    runner::canonical(&name)?;
    let result = match args.scan.clone() {
        Some(manifest) => {
            let text = std::fs::read_to_string(&manifest)
                .map_err(|e| CliError::Io(format!("{}: {e}", manifest.display())))?;
            let points = parse_manifest(&text, manifest.parent().unwrap_or(Path::new(".")))?;
            run_scan(&name, &points, &args)?
        }
        None => {
            let system = load_system(args.fcidump.as_deref(), args.hamiltonian_json.as_deref())?;
            let source = args.fcidump.as_ref().or(args.hamiltonian_json.as_ref()).expect("loaded").display().to_string();
            run_single(&name, &system, &source, &args)?
        }
    };
    let text = serde_json::to_string_pretty(&result).expect("serializable") + "\n";
    match &args.out {
        Some(path) => {
            // Write to a sibling file first so a failure never leaves partial JSON.
            let tmp = path.with_extension("json.partial");
            std::fs::write(&tmp, &text)
                .and_then(|_| std::fs::rename(&tmp, path))
                .map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    CliError::Io(format!("{}: {e}", path.display()))
                })?;
            print!("{}", summary(&result));
        }
        None => {
            eprint!("{}", summary(&result));
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("molqs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
