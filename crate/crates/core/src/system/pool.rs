//! Operator pools of anti-Hermitian excitation generators `κ = τ − τ†`.
//!
//! Particle-hole pools excite from the occupied spin orbitals of the
//! reference into its virtuals. Every entry conserves particle number and
//! S_z, and when the integrals carry orbital symmetry labels only totally
//! symmetric excitations are kept (the direct product of the vacated
//! irreps equals that of the filled ones). Entries are ordered by the
//! integer value of the excited determinant, ascending.

use std::fmt;
use std::str::FromStr;

use crate::basis::BasisAddress;
use crate::error::{Error, Result};
use crate::fermion::SqOperator;
use crate::pauli::QubitOperator;
use crate::system::MolecularSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolKind {
    /// All particle-hole excitations up to the given rank (SD = 2, SDT = 3).
    MaxRank(usize),
    /// Generalized singles and doubles over all spin-orbital index sets.
    Gsd,
    /// Closed-shell pair doubles `i_α i_β → a_α a_β`.
    PairedD,
}

impl PoolKind {
    pub const SD: PoolKind = PoolKind::MaxRank(2);
    pub const SDT: PoolKind = PoolKind::MaxRank(3);
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        const RANKS: [&str; 6] = ["S", "SD", "SDT", "SDTQ", "SDTQP", "SDTQPH"];
        if let Some(k) = RANKS.iter().position(|r| *r == upper) {
            return Ok(PoolKind::MaxRank(k + 1));
        }
        match upper.as_str() {
            "GSD" => Ok(PoolKind::Gsd),
            "PAIREDD" | "PAIRED-D" | "PAIRED_D" => Ok(PoolKind::PairedD),
            _ => match upper.strip_prefix("RANK-").and_then(|k| k.parse().ok()) {
                Some(k) if k >= 1 => Ok(PoolKind::MaxRank(k)),
                _ => Err(Error::InvalidArgument(format!("unknown pool kind '{s}'"))),
            },
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoolKind::MaxRank(k @ 1..=6) => {
                write!(f, "{}", &"SDTQPH"[..*k])
            }
            PoolKind::MaxRank(k) => write!(f, "rank-{k}"),
            PoolKind::Gsd => write!(f, "GSD"),
            PoolKind::PairedD => write!(f, "pairedD"),
        }
    }
}

/// Spin orbitals vacated (`from`) and filled (`to`), each ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

impl Excitation {
    pub fn rank(&self) -> usize {
        self.from.len()
    }

    /// Determinant reached by applying the excitation to `reference`.
    pub fn apply(&self, reference: BasisAddress) -> BasisAddress {
        let from = BasisAddress::from_occupied(&self.from).bits();
        let to = BasisAddress::from_occupied(&self.to).bits();
        BasisAddress((reference.bits() & !from) | to)
    }

    /// `τ = a†_{a} a†_{b} … a_{j} a_{i}` for `i j … → a b …`.
    pub fn tau(&self) -> SqOperator {
        let mut op = SqOperator::new();
        let ann: Vec<usize> = self.from.iter().rev().copied().collect();
        op.add_term(1.0, &self.to, &ann).expect("distinct indices");
        op
    }

    /// `κ = τ − τ†`.
    pub fn generator(&self) -> SqOperator {
        let tau = self.tau();
        let mut k = tau.clone();
        k.add_operator(&tau.adjoint().scaled(-1.0));
        k.simplify()
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{} -> {}", join(&self.from), join(&self.to))
    }
}

#[derive(Debug, Clone)]
pub struct PoolOperator {
    pub excitation: Excitation,
    pub generator: SqOperator,
    /// Jordan–Wigner image of the generator (purely imaginary coefficients).
    pub qubit_generator: QubitOperator,
    /// `Σ ε_from − Σ ε_to`.
    pub denominator: f64,
    /// Determinant reached from the reference.
    pub excited: BasisAddress,
}

#[derive(Debug, Clone)]
pub struct OperatorPool {
    pub kind: PoolKind,
    pub reference: BasisAddress,
    entries: Vec<PoolOperator>,
}

impl OperatorPool {
    pub fn entries(&self) -> &[PoolOperator] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&PoolOperator> {
        self.entries.get(i)
    }

    /// Pool index of the entry whose excited determinant is `det`.
    pub fn find_excited(&self, det: BasisAddress) -> Option<usize> {
        self.entries.iter().position(|e| e.excited == det)
    }

    /// Builds a pool from explicit excitations, ordering them by excited
    /// determinant. Used by the selected-operator algorithms.
    pub fn from_excitations(
        system: &MolecularSystem,
        kind: PoolKind,
        excitations: Vec<Excitation>,
    ) -> Result<Self> {
        let eps = system.spin_orbital_energies().ok_or_else(|| {
            Error::InvalidArgument("operator pools need molecular integrals".into())
        })?;
        let reference = system.hf_reference();
        let mut entries: Vec<PoolOperator> = excitations
            .into_iter()
            .map(|ex| {
                let generator = ex.generator();
                let qubit_generator = generator.jw_transform();
                let denominator = ex.from.iter().map(|&i| eps[i]).sum::<f64>()
                    - ex.to.iter().map(|&a| eps[a]).sum::<f64>();
                PoolOperator {
                    excited: ex.apply(reference),
                    excitation: ex,
                    generator,
                    qubit_generator,
                    denominator,
                }
            })
            .collect();
        entries.sort_by(|a, b| {
            a.excited
                .cmp(&b.excited)
                .then_with(|| a.excitation.from.cmp(&b.excitation.from))
                .then_with(|| a.excitation.to.cmp(&b.excitation.to))
        });
        Ok(Self { kind, reference, entries })
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn n_alpha(orbs: &[usize]) -> usize {
    orbs.iter().filter(|&&p| p % 2 == 0).count()
}

/// XOR of zero-based irrep labels: the direct product in an abelian group
/// with the usual FCIDUMP numbering.
fn irrep(orbsym: &[u8], orbs: &[usize]) -> u8 {
    orbs.iter().fold(0, |acc, &p| acc ^ (orbsym[p / 2] - 1))
}

fn allowed(orbsym: &[u8], from: &[usize], to: &[usize]) -> bool {
    n_alpha(from) == n_alpha(to) && irrep(orbsym, from) == irrep(orbsym, to)
}

/// Builds the operator pool of `kind` for `system`.
pub fn build_pool(system: &MolecularSystem, kind: PoolKind) -> Result<OperatorPool> {
    let ints = system
        .integrals()
        .ok_or_else(|| Error::InvalidArgument("operator pools need molecular integrals".into()))?;
    let orbsym = &ints.orbsym;
    let reference = system.hf_reference();
    let n_so = system.n_qubits();
    let occ = reference.occupied();
    let vir: Vec<usize> = (0..n_so).filter(|&p| !reference.get(p)).collect();

    let mut excitations = Vec::new();
    match kind {
        PoolKind::MaxRank(0) => {
            return Err(Error::InvalidArgument("excitation rank must be at least 1".into()))
        }
        PoolKind::MaxRank(max_rank) => {
            for k in 1..=max_rank {
                for from in combinations(&occ, k) {
                    for to in combinations(&vir, k) {
                        if allowed(orbsym, &from, &to) {
                            excitations.push(Excitation { from: from.clone(), to });
                        }
                    }
                }
            }
        }
        PoolKind::Gsd => {
            let all: Vec<usize> = (0..n_so).collect();
            for k in 1..=2 {
                let sets = combinations(&all, k);
                for (i, from) in sets.iter().enumerate() {
                    for to in &sets[i + 1..] {
                        if from.iter().any(|p| to.contains(p)) {
                            continue;
                        }
                        if allowed(orbsym, from, to) {
                            excitations.push(Excitation { from: from.clone(), to: to.clone() });
                        }
                    }
                }
            }
        }
        PoolKind::PairedD => {
            let spatial_occ: Vec<usize> = (0..n_so / 2)
                .filter(|&p| reference.get(2 * p) && reference.get(2 * p + 1))
                .collect();
            let spatial_vir: Vec<usize> = (0..n_so / 2)
                .filter(|&p| !reference.get(2 * p) && !reference.get(2 * p + 1))
                .collect();
            let mut pool = OperatorPool::from_excitations(
                system,
                kind,
                spatial_occ
                    .iter()
                    .flat_map(|&i| {
                        spatial_vir.iter().map(move |&a| Excitation {
                            from: vec![2 * i, 2 * i + 1],
                            to: vec![2 * a, 2 * a + 1],
                        })
                    })
                    .collect(),
            )?;
            // Generator as a†_{iβ} a†_{iα} a_{aα} a_{aβ} − h.c.
            for e in &mut pool.entries {
                let (i, a) = (e.excitation.from[0] / 2, e.excitation.to[0] / 2);
                let mut g = SqOperator::new();
                g.add_term(1.0, &[2 * i + 1, 2 * i], &[2 * a, 2 * a + 1]).expect("distinct");
                g.add_term(-1.0, &[2 * a + 1, 2 * a], &[2 * i, 2 * i + 1]).expect("distinct");
                e.generator = g.simplify();
                e.qubit_generator = e.generator.jw_transform();
            }
            return Ok(pool);
        }
    }
    OperatorPool::from_excitations(system, kind, excitations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_parsing() {
        assert_eq!("SD".parse::<PoolKind>().unwrap(), PoolKind::SD);
        assert_eq!("sdt".parse::<PoolKind>().unwrap(), PoolKind::SDT);
        assert_eq!("rank-5".parse::<PoolKind>().unwrap(), PoolKind::MaxRank(5));
        assert_eq!("pairedD".parse::<PoolKind>().unwrap(), PoolKind::PairedD);
        assert_eq!("GSD".parse::<PoolKind>().unwrap(), PoolKind::Gsd);
        assert!("XYZ".parse::<PoolKind>().is_err());
        assert_eq!(PoolKind::SD.to_string(), "SD");
        assert_eq!(PoolKind::MaxRank(8).to_string(), "rank-8");
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[0, 1, 2, 3], 2).len(), 6);
        assert_eq!(combinations(&[0, 1], 3).len(), 0);
    }

    #[test]
    fn excitation_tau_is_normal_ordered() {
        let ex = Excitation { from: vec![0, 1], to: vec![2, 3] };
        assert_eq!(ex.apply(BasisAddress(0b11)), BasisAddress(0b1100));
        let k = ex.generator();
        assert_eq!(k.len(), 2);
        assert!(k.jw_transform().terms().iter().all(|(c, _)| c.re.abs() < 1e-14));
    }
}
