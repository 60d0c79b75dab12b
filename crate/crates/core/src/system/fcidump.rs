//! FCIDUMP reader.
//!
//! A Fortran namelist header (`&FCI NORB=…, NELEC=…, MS2=…, ORBSYM=…, &END`)
//! followed by lines `value i j k l` with 1-based spatial indices:
//! `(ij|kl)` when all four are nonzero, `h_ij` when `k = l = 0`, an orbital
//! energy when only `i` is nonzero, and the nuclear repulsion when all are
//! zero.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::system::Integrals;

/// Raw contents of an FCIDUMP file.
#[derive(Debug, Clone)]
pub struct FcidumpData {
    pub integrals: Integrals,
    pub n_electrons: usize,
    pub ms2: i64,
    pub e_nuclear: f64,
    /// Spatial orbital energies, when the file lists them.
    pub orbital_energies: Option<Vec<f64>>,
}

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<FcidumpData> {
    let text = std::fs::read_to_string(path)?;
    parse_fcidump(&text)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Splits a namelist body into `KEY -> values`.
fn parse_namelist(header: &str, line: usize) -> Result<HashMap<String, Vec<String>>> {
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    let mut key: Option<String> = None;
    let cleaned = header.replace(',', " ");
    for tok in cleaned.split_whitespace() {
        let upper = tok.to_ascii_uppercase();
        if upper == "&FCI" || upper == "&END" || upper == "/" {
            continue;
        }
        let upper = upper.trim_start_matches("&FCI").to_string();
        if let Some((k, v)) = upper.split_once('=') {
            let k = k.trim().to_string();
            if k.is_empty() {
                return Err(parse_err(line, format!("malformed namelist token '{tok}'")));
            }
            let entry = out.entry(k.clone()).or_default();
            if !v.is_empty() {
                entry.push(v.to_string());
            }
            key = Some(k);
        } else if let Some(k) = &key {
            out.get_mut(k).expect("key inserted").push(upper);
        } else {
            return Err(parse_err(line, format!("value '{tok}' before any key")));
        }
    }
    Ok(out)
}

fn header_int(map: &HashMap<String, Vec<String>>, key: &str, line: usize) -> Result<Option<i64>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) if v.len() == 1 => v[0]
            .parse()
            .map(Some)
            .map_err(|_| parse_err(line, format!("{key} is not an integer: '{}'", v[0]))),
        Some(v) => Err(parse_err(line, format!("{key} expects one value, found {}", v.len()))),
    }
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    tok.replace(['D', 'd'], "E")
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))
}

pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = String::new();
    let mut header_end = 0;
    for (no, l) in lines.by_ref() {
        header.push_str(l);
        header.push(' ');
        header_end = no;
        let t = l.trim().to_ascii_uppercase();
        if t.ends_with("&END") || t == "/" || t.ends_with(" /") {
            break;
        }
    }
    if !header.to_ascii_uppercase().contains("&FCI") {
        return Err(parse_err(1, "missing &FCI namelist header"));
    }
    let nl = parse_namelist(&header, header_end.max(1))?;
    let need = |key: &str| -> Result<i64> {
        header_int(&nl, key, header_end)?
            .ok_or_else(|| parse_err(header_end, format!("header is missing {key}")))
    };
    let norb = need("NORB")?;
    let nelec = need("NELEC")?;
    let ms2 = header_int(&nl, "MS2", header_end)?.unwrap_or(0);
    if norb <= 0 {
        return Err(parse_err(header_end, format!("NORB must be positive, got {norb}")));
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(parse_err(
            header_end,
            format!("NELEC = {nelec} does not fit in {norb} spatial orbitals"),
        ));
    }
    let n = norb as usize;
    let orbsym = match nl.get("ORBSYM") {
        None => vec![1u8; n],
        Some(v) => {
            let syms: Vec<u8> = v
                .iter()
                .map(|s| {
                    s.parse::<u8>()
                        .ok()
                        .filter(|x| (1..=8).contains(x))
                        .ok_or_else(|| parse_err(header_end, format!("invalid ORBSYM entry '{s}'")))
                })
                .collect::<Result<_>>()?;
            if syms.len() != n {
                return Err(parse_err(
                    header_end,
                    format!("ORBSYM lists {} orbitals, NORB is {n}", syms.len()),
                ));
            }
            syms
        }
    };

    let mut ints = Integrals::zeros(n);
    ints.orbsym = orbsym;
    let mut e_nuclear = 0.0;
    let mut eps = vec![0.0; n];
    let mut have_eps = false;
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(parse_err(no, format!("expected 'value i j k l', found {} fields", toks.len())));
        }
        let v = parse_value(toks[0], no)?;
        let mut idx = [0usize; 4];
        for (slot, t) in idx.iter_mut().zip(&toks[1..]) {
            let k: usize = t.parse().map_err(|_| parse_err(no, format!("invalid index '{t}'")))?;
            if k > n {
                return Err(parse_err(no, format!("index {k} exceeds NORB = {n}")));
            }
            *slot = k;
        }
        match idx {
            [0, 0, 0, 0] => e_nuclear = v,
            [i, 0, 0, 0] => {
                eps[i - 1] = v;
                have_eps = true;
            }
            [i, j, 0, 0] if j > 0 => ints.set_h(i - 1, j - 1, v),
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_g(i - 1, j - 1, k - 1, l - 1, v)
            }
            _ => return Err(parse_err(no, format!("unrecognized index pattern {idx:?}"))),
        }
    }
    Ok(FcidumpData {
        integrals: ints,
        n_electrons: nelec as usize,
        ms2,
        e_nuclear,
        orbital_energies: have_eps.then_some(eps),
    })
}
