use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Axis::X),
            'Y' | 'y' => Some(Axis::Y),
            'Z' | 'z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// Single-qubit product `self * other` as `(phase, axis)`; `None` axis is
    /// the identity.
    fn mul(self, other: Axis) -> (Phase, Option<Axis>) {
        use Axis::*;
        match (self, other) {
            (a, b) if a == b => (Phase::One, None),
            (X, Y) => (Phase::I, Some(Z)),
            (Y, Z) => (Phase::I, Some(X)),
            (Z, X) => (Phase::I, Some(Y)),
            (Y, X) => (Phase::MinusI, Some(Z)),
            (Z, Y) => (Phase::MinusI, Some(X)),
            (X, Z) => (Phase::MinusI, Some(Y)),
            _ => unreachable!(),
        }
    }
}

/// Overall coefficient of a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Phase {
    #[default]
    One,
    MinusOne,
    I,
    MinusI,
}

impl Phase {
    fn quarter_turns(self) -> u8 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_quarter_turns(k: u8) -> Self {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, Phase::One | Phase::MinusOne)
    }
}

impl Mul for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_quarter_turns(self.quarter_turns() + rhs.quarter_turns())
    }
}

/// A signed tensor product of single-qubit Pauli operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    terms: BTreeMap<usize, Axis>,
    phase: Phase,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString::default()
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        PauliString::identity().with(qubit, axis)
    }

    /// Same axis on every listed qubit. Repeated qubits cancel pairwise.
    pub fn uniform(axis: Axis, qubits: impl IntoIterator<Item = usize>) -> Self {
        qubits
            .into_iter()
            .fold(PauliString::identity(), |acc, q| acc * PauliString::single(q, axis))
    }

    pub fn z_string(qubits: impl IntoIterator<Item = usize>) -> Self {
        PauliString::uniform(Axis::Z, qubits)
    }

    pub fn x_string(qubits: impl IntoIterator<Item = usize>) -> Self {
        PauliString::uniform(Axis::X, qubits)
    }

    /// Sets the axis on `qubit`, replacing any previous entry.
    pub fn with(mut self, qubit: usize, axis: Axis) -> Self {
        self.terms.insert(qubit, axis);
        self
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negated(self) -> Self {
        let phase = self.phase * Phase::MinusOne;
        self.with_phase(phase)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, Axis)> + '_ {
        self.terms.iter().map(|(&q, &a)| (q, a))
    }

    pub fn axis(&self, qubit: usize) -> Option<Axis> {
        self.terms.get(&qubit).copied()
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    /// Restriction to qubits in `range`, phase dropped.
    pub fn restricted(&self, range: std::ops::Range<usize>) -> PauliString {
        PauliString {
            terms: self
                .terms
                .iter()
                .filter(|(q, _)| range.contains(q))
                .map(|(&q, &a)| (q, a))
                .collect(),
            phase: Phase::One,
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .terms
            .iter()
            .filter(|(q, a)| matches!(other.terms.get(q), Some(b) if b != *a))
            .count();
        anti % 2 == 0
    }

    /// Bit masks `(x_mask, z_mask)` and the scalar `c` such that
    /// `P|i> = c * (-1)^{popcount(i & z_mask)} |i ^ x_mask>`.
    pub(crate) fn masks(&self) -> (usize, usize, Complex64) {
        let mut x = 0usize;
        let mut z = 0usize;
        let mut n_y = 0u8;
        for (&q, &a) in &self.terms {
            match a {
                Axis::X => x |= 1 << q,
                Axis::Z => z |= 1 << q,
                Axis::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    n_y += 1;
                }
            }
        }
        // Y = i X Z
        let c = self.phase * Phase::from_quarter_turns(n_y % 4);
        (x, z, c.value())
    }

    pub fn check_register(&self, n_qubits: usize) -> Result<()> {
        match self.max_qubit() {
            Some(q) if q >= n_qubits => Err(Error::QubitOutOfRange { qubit: q, n_qubits }),
            _ => Ok(()),
        }
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        let mut phase = self.phase * rhs.phase;
        let mut terms = self.terms;
        for (q, b) in rhs.terms {
            match terms.remove(&q) {
                None => {
                    terms.insert(q, b);
                }
                Some(a) => {
                    let (p, axis) = a.mul(b);
                    phase = phase * p;
                    if let Some(axis) = axis {
                        terms.insert(q, axis);
                    }
                }
            }
        }
        PauliString { terms, phase }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            Phase::One => "",
            Phase::MinusOne => "-",
            Phase::I => "i",
            Phase::MinusI => "-i",
        };
        write!(f, "{sign}")?;
        if self.terms.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(q, a)| format!("{q}:{}", a.letter()))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
