//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Parser;

#[derive(Debug, Clone, Default, Parser)]
#[command(name = "molqs", version, about = "Quantum algorithms for molecular Hamiltonians")]
pub struct Args {
    /// Algorithm name (same as --algorithm).
    #[arg(value_name = "ALGORITHM")]
    pub algorithm_positional: Option<String>,
    #[arg(long)]
    pub algorithm: Option<String>,
    #[arg(long)]
    pub fcidump: Option<PathBuf>,
    #[arg(long = "hamiltonian-json")]
    pub hamiltonian_json: Option<PathBuf>,
    #[arg(long)]
    pub pool: Option<String>,
    #[arg(long)]
    pub optimizer: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long = "trotter-r", alias = "trotter")]
    pub trotter_r: Option<usize>,
    /// Use exact rather than Trotterized evolution (QK, MRSQK).
    #[arg(long = "exact-evolution")]
    pub exact_evolution: bool,
    #[arg(long)]
    pub dbeta: Option<f64>,
    #[arg(long = "beta-max")]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long = "d-refs")]
    pub d_refs: Option<usize>,
    #[arg(long = "n-ancilla")]
    pub n_ancilla: Option<usize>,
    /// Evolution time for phase estimation.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub trim: Option<f64>,
    #[arg(long = "max-depth")]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub scan: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Reads `key = value` lines; `#` starts a comment. Keys use the long flag
/// names (`beta-max` and `beta_max` are both accepted).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(
    map: &mut BTreeMap<String, String>,
    key: &str,
    slot: &mut Option<T>,
) -> Result<(), String> {
    if let Some(v) = map.remove(key) {
        if slot.is_none() {
            *slot = Some(v.parse().map_err(|_| format!("config key {key}: cannot parse {v:?}"))?);
        }
    }
    Ok(())
}

impl Args {
    /// Fills unset fields from a config file; flags already given win.
    /// Relative paths in the file resolve against the file's directory.
    pub fn merge_config(&mut self, map: BTreeMap<String, String>, base: &Path) -> Result<(), String> {
        let mut m = map;
        let path = |m: &mut BTreeMap<String, String>, key: &str, slot: &mut Option<PathBuf>| {
            if let Some(v) = m.remove(key) {
                if slot.is_none() {
                    *slot = Some(base.join(v));
                }
            }
        };
        path(&mut m, "fcidump", &mut self.fcidump);
        path(&mut m, "hamiltonian-json", &mut self.hamiltonian_json);
        path(&mut m, "out", &mut self.out);
        path(&mut m, "scan", &mut self.scan);
        take(&mut m, "algorithm", &mut self.algorithm)?;
        take(&mut m, "pool", &mut self.pool)?;
        take(&mut m, "optimizer", &mut self.optimizer)?;
        take(&mut m, "tol", &mut self.tol)?;
        take(&mut m, "max-iter", &mut self.max_iter)?;
        take(&mut m, "shots", &mut self.shots)?;
        take(&mut m, "seed", &mut self.seed)?;
        take(&mut m, "dt", &mut self.dt)?;
        take(&mut m, "s", &mut self.s)?;
        take(&mut m, "trotter-r", &mut self.trotter_r)?;
        take(&mut m, "dbeta", &mut self.dbeta)?;
        take(&mut m, "beta-max", &mut self.beta_max)?;
        take(&mut m, "omega", &mut self.omega)?;
        take(&mut m, "d-refs", &mut self.d_refs)?;
        take(&mut m, "n-ancilla", &mut self.n_ancilla)?;
        take(&mut m, "time", &mut self.time)?;
        take(&mut m, "trim", &mut self.trim)?;
        take(&mut m, "max-depth", &mut self.max_depth)?;
        if let Some(v) = m.remove("exact-evolution") {
            if !self.exact_evolution {
                self.exact_evolution =
                    v.parse().map_err(|_| format!("config key exact-evolution: cannot parse {v:?}"))?;
            }
        }
        if let Some(k) = m.keys().next() {
            return Err(format!("unknown config key {k:?}"));
        }
        Ok(())
    }

    pub fn algorithm_name(&self) -> Option<&str> {
        self.algorithm.as_deref().or(self.algorithm_positional.as_deref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut a = Args::parse_from(["molqs", "qk", "--s", "2"]);
        let map = parse_config("s = 5\ndt = 0.25 # comment\nbeta_max = 3\n").unwrap();
        a.merge_config(map, Path::new("/tmp")).unwrap();
        assert_eq!(a.s, Some(2));
        assert_eq!(a.dt, Some(0.25));
        assert_eq!(a.beta_max, Some(3.0));
        assert_eq!(a.algorithm_name(), Some("qk"));
    }

    #[test]
    fn bad_lines_rejected() {
        assert!(parse_config("just words").is_err());
        let mut a = Args::default();
        assert!(a.merge_config(parse_config("bogus = 1").unwrap(), Path::new(".")).is_err());
        assert!(a.merge_config(parse_config("s = x").unwrap(), Path::new(".")).is_err());
    }
}
