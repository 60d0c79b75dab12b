//! Elementary gates.
//!
//! A [`Gate`] is a named single-qubit unitary acting on a target qubit,
//! optionally conditioned on one or more control qubits, or a SWAP of two
//! qubits. Controlled variants such as CNOT are stored as their base
//! single-qubit operation plus a control.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    /// Square root of X.
    V,
    AdjV,
    Rx,
    Ry,
    Rz,
    /// Phase gate diag(1, e^{iφ}).
    R,
    Cnot,
    Cz,
    /// Controlled phase gate.
    CR,
    Swap,
}

impl GateKind {
    pub fn is_parametric(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::R | GateKind::CR)
    }

    /// Kinds that require a control (or, for SWAP, a second qubit).
    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cnot | GateKind::Cz | GateKind::CR | GateKind::Swap)
    }

    /// Single-qubit operation underlying a controlled kind.
    fn base(self) -> GateKind {
        match self {
            GateKind::Cnot => GateKind::X,
            GateKind::Cz => GateKind::Z,
            GateKind::CR => GateKind::R,
            k => k,
        }
    }

    /// Kind after attaching a first control to a single-qubit kind.
    fn with_control(self) -> GateKind {
        match self {
            GateKind::X => GateKind::Cnot,
            GateKind::Z => GateKind::Cz,
            GateKind::R => GateKind::CR,
            k => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::V => "V",
            GateKind::AdjV => "adjV",
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::R => "R",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::CR => "cR",
            GateKind::Swap => "SWAP",
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" | "id" => GateKind::I,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            "T" => GateKind::T,
            "Tdg" => GateKind::Tdg,
            "V" => GateKind::V,
            "adjV" => GateKind::AdjV,
            "Rx" => GateKind::Rx,
            "Ry" => GateKind::Ry,
            "Rz" => GateKind::Rz,
            "R" => GateKind::R,
            "CNOT" | "cX" => GateKind::Cnot,
            "CZ" | "cZ" => GateKind::Cz,
            "cR" | "CR" => GateKind::CR,
            "SWAP" => GateKind::Swap,
            other => return Err(Error::InvalidGate(format!("unknown gate kind '{other}'"))),
        })
    }
}

/// How a gate acts on the amplitudes of its target pair; chosen once so the
/// state-vector kernels can dispatch on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Action {
    /// Bit flip of the target: pure swap of amplitude pairs.
    Flip,
    /// diag(d0, d1) on the target.
    Diagonal(Complex64, Complex64),
    /// General 2x2 unitary, row-major.
    Dense([[Complex64; 2]; 2]),
    /// Exchange of two qubits.
    Swap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    /// Primary control, or the second qubit of a SWAP.
    control: Option<usize>,
    /// Controls added by promotion (e.g. controlled-U construction), as a bit mask.
    extra_controls: u64,
    parameter: Option<f64>,
}

impl Gate {
    /// Builds a gate, validating control/target distinctness and the presence
    /// of a parameter for parametric kinds.
    ///
    /// `make_gate(Cnot, t, Some(c), None)` flips qubit `t` when qubit `c` is 1.
    /// A control on a single-qubit kind yields its controlled version.
    pub fn new(
        kind: GateKind,
        target: usize,
        control: Option<usize>,
        parameter: Option<f64>,
    ) -> Result<Self> {
        if target >= 64 || control.is_some_and(|c| c >= 64) {
            return Err(Error::InvalidGate("qubit index beyond 64".into()));
        }
        if control == Some(target) {
            return Err(Error::InvalidGate(format!(
                "control equals target (qubit {target})"
            )));
        }
        if kind.is_two_qubit() && control.is_none() {
            return Err(Error::InvalidGate(format!("{} requires a second qubit", kind.name())));
        }
        match (kind.is_parametric(), parameter) {
            (true, None) => {
                return Err(Error::InvalidGate(format!("{} requires an angle", kind.name())))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidGate(format!("{} takes no angle", kind.name())))
            }
            (true, Some(p)) if !p.is_finite() => {
                return Err(Error::InvalidGate("non-finite angle".into()))
            }
            _ => {}
        }
        let kind = if control.is_some() && kind != GateKind::Swap {
            kind.with_control()
        } else {
            kind
        };
        Ok(Self { kind, target, control, extra_controls: 0, parameter })
    }

    pub fn single(kind: GateKind, target: usize) -> Self {
        Self::new(kind, target, None, None).expect("valid single-qubit gate")
    }

    pub fn rotation(kind: GateKind, target: usize, angle: f64) -> Self {
        Self::new(kind, target, None, Some(angle)).expect("valid rotation gate")
    }

    pub fn cnot(target: usize, control: usize) -> Self {
        Self::new(GateKind::Cnot, target, Some(control), None).expect("valid CNOT")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn control(&self) -> Option<usize> {
        self.control
    }

    pub fn parameter(&self) -> Option<f64> {
        self.parameter
    }

    /// Bit mask of every qubit whose |1⟩ state conditions the gate.
    pub fn control_mask(&self) -> u64 {
        let primary = match (self.kind, self.control) {
            (GateKind::Swap, _) | (_, None) => 0,
            (_, Some(c)) => 1u64 << c,
        };
        primary | self.extra_controls
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        let mut mask = self.control_mask() | (1u64 << self.target);
        if let (GateKind::Swap, Some(b)) = (self.kind, self.control) {
            mask |= 1 << b;
        }
        (0..64).filter(|q| mask >> q & 1 == 1).collect()
    }

    pub fn max_qubit(&self) -> usize {
        *self.qubits().last().expect("gate touches at least one qubit")
    }

    /// True for a CNOT with no promoted controls.
    pub fn is_cnot(&self) -> bool {
        self.kind == GateKind::Cnot && self.extra_controls == 0
    }

    /// The same gate conditioned additionally on `qubit`.
    pub fn controlled_by(&self, qubit: usize) -> Result<Self> {
        if self.qubits().contains(&qubit) {
            return Err(Error::InvalidGate(format!("qubit {qubit} already used by gate")));
        }
        let mut g = self.clone();
        if g.kind != GateKind::Swap && g.control.is_none() {
            g.control = Some(qubit);
            g.kind = g.kind.with_control();
        } else {
            g.extra_controls |= 1 << qubit;
        }
        Ok(g)
    }

    pub fn adjoint(&self) -> Self {
        let mut g = self.clone();
        let base = self.kind.base();
        let (kind, parameter) = match base {
            GateKind::S => (GateKind::Sdg, None),
            GateKind::Sdg => (GateKind::S, None),
            GateKind::T => (GateKind::Tdg, None),
            GateKind::Tdg => (GateKind::T, None),
            GateKind::V => (GateKind::AdjV, None),
            GateKind::AdjV => (GateKind::V, None),
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::R => {
                (base, self.parameter.map(|p| -p))
            }
            k => (k, self.parameter),
        };
        g.kind = if self.kind == base { kind } else { kind.with_control() };
        g.parameter = parameter;
        g
    }

    /// Kernel-level description of the gate.
    pub fn action(&self) -> Action {
        let base = self.kind.base();
        match base {
            GateKind::X => Action::Flip,
            GateKind::Swap => Action::Swap,
            GateKind::I => Action::Diagonal(ONE, ONE),
            GateKind::Z => Action::Diagonal(ONE, -ONE),
            GateKind::S => Action::Diagonal(ONE, I),
            GateKind::Sdg => Action::Diagonal(ONE, -I),
            GateKind::T => Action::Diagonal(ONE, Complex64::from_polar(1.0, FRAC_PI_4)),
            GateKind::Tdg => Action::Diagonal(ONE, Complex64::from_polar(1.0, -FRAC_PI_4)),
            GateKind::R => Action::Diagonal(ONE, Complex64::from_polar(1.0, self.angle())),
            GateKind::Rz => {
                let half = 0.5 * self.angle();
                Action::Diagonal(Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half))
            }
            _ => Action::Dense(self.dense_base()),
        }
    }

    fn angle(&self) -> f64 {
        self.parameter.unwrap_or(0.0)
    }

    fn dense_base(&self) -> [[Complex64; 2]; 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let pp = Complex64::new(0.5, 0.5);
        let pm = Complex64::new(0.5, -0.5);
        match self.kind.base() {
            GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::Y => [[ZERO, -I], [I, ZERO]],
            GateKind::H => [[h, h], [h, -h]],
            GateKind::V => [[pp, pm], [pm, pp]],
            GateKind::AdjV => [[pm, pp], [pp, pm]],
            GateKind::Rx => {
                let (s, c) = (0.5 * self.angle()).sin_cos();
                [[c.into(), -I * s], [-I * s, c.into()]]
            }
            GateKind::Ry => {
                let (s, c) = (0.5 * self.angle()).sin_cos();
                [[c.into(), (-s).into()], [s.into(), c.into()]]
            }
            _ => match self.action() {
                Action::Diagonal(d0, d1) => [[d0, ZERO], [ZERO, d1]],
                _ => unreachable!("non-diagonal kinds handled above"),
            },
        }
    }

    /// The 2x2 unitary applied to the target (SWAP returns the identity).
    pub fn matrix(&self) -> Matrix2<Complex64> {
        if self.kind == GateKind::Swap {
            return Matrix2::identity();
        }
        let m = self.dense_base();
        Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    /// Full 4x4 unitary of a two-qubit gate in the basis |control target⟩
    /// with the target as the low bit (index = 2·c + t). `None` for
    /// single-qubit or multiply-controlled gates.
    pub fn matrix4(&self) -> Option<Matrix4<Complex64>> {
        if self.extra_controls != 0 || self.control.is_none() {
            return None;
        }
        let mut m = Matrix4::<Complex64>::zeros();
        if self.kind == GateKind::Swap {
            m[(0, 0)] = ONE;
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
            m[(3, 3)] = ONE;
            return Some(m);
        }
        let u = self.dense_base();
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        for r in 0..2 {
            for c in 0..2 {
                m[(2 + r, 2 + c)] = u[r][c];
            }
        }
        Some(m)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut name = String::new();
        for _ in 0..self.extra_controls.count_ones() {
            name.push('c');
        }
        name.push_str(self.kind.name());
        write!(f, "{name}")?;
        if let Some(p) = self.parameter {
            write!(f, "({p})")?;
        }
        write!(f, " {}", self.target)?;
        if let Some(c) = self.control {
            write!(f, " {c}")?;
        }
        let mut extra = self.extra_controls;
        while extra != 0 {
            let q = extra.trailing_zeros();
            write!(f, " {q}")?;
            extra &= extra - 1;
        }
        Ok(())
    }
}

/// Rx(π/2): maps Y to Z under conjugation, used for Y-basis changes.
pub(crate) const Y_BASIS_ANGLE: f64 = FRAC_PI_2;

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &Matrix2<Complex64>) -> bool {
        (m.adjoint() * m - Matrix2::identity()).norm() < 1e-14
    }

    #[test]
    fn matrices_are_unitary() {
        let kinds = [
            GateKind::I,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::H,
            GateKind::S,
            GateKind::Sdg,
            GateKind::T,
            GateKind::Tdg,
            GateKind::V,
            GateKind::AdjV,
        ];
        for k in kinds {
            assert!(is_unitary(&Gate::single(k, 0).matrix()), "{k:?}");
        }
        for k in [GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::R] {
            assert!(is_unitary(&Gate::rotation(k, 1, 0.37).matrix()), "{k:?}");
        }
    }

    #[test]
    fn v_squares_to_x() {
        let v = Gate::single(GateKind::V, 0).matrix();
        let x = Gate::single(GateKind::X, 0).matrix();
        assert!((v * v - x).norm() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(Gate::new(GateKind::Cnot, 3, Some(3), None).is_err());
        assert!(Gate::new(GateKind::Rz, 0, None, None).is_err());
        assert!(Gate::new(GateKind::X, 0, None, Some(1.0)).is_err());
        assert!(Gate::new(GateKind::Cnot, 1, None, None).is_err());
        assert!("Foo".parse::<GateKind>().is_err());
    }

    #[test]
    fn control_promotes_kind() {
        let g = Gate::new(GateKind::X, 1, Some(0), None).unwrap();
        assert_eq!(g.kind(), GateKind::Cnot);
        assert!(g.is_cnot());
        let cc = g.controlled_by(2).unwrap();
        assert!(!cc.is_cnot());
        assert_eq!(cc.control_mask(), 0b101);
        assert!(g.controlled_by(1).is_err());
    }

    #[test]
    fn adjoint_is_involution() {
        for g in [
            Gate::single(GateKind::S, 0),
            Gate::single(GateKind::V, 2),
            Gate::rotation(GateKind::Rz, 1, 0.3),
            Gate::new(GateKind::CR, 0, Some(1), Some(0.2)).unwrap(),
        ] {
            assert_eq!(g.adjoint().adjoint(), g);
            assert!((g.adjoint().matrix() * g.matrix() - Matrix2::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn cnot_matrix_flips_target_when_control_set() {
        let m = Gate::cnot(0, 1).matrix4().unwrap();
        assert_eq!(m[(3, 2)], ONE);
        assert_eq!(m[(2, 3)], ONE);
        assert_eq!(m[(0, 0)], ONE);
    }
}
