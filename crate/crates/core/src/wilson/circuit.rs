//! Gate-list circuits over link qubits plus appended ancilla/matter qubits.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::VertexId;
use crate::statevec::{Axis, ControlBasis, Phase, PauliString, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// `exp(i theta P)`.
    PauliExp { pauli: PauliString, theta: f64 },
    /// `exp(i theta P)` on the active branch of `control`.
    ControlledPauliExp {
        control: usize,
        basis: ControlBasis,
        pauli: PauliString,
        theta: f64,
    },
    Measure { qubit: usize },
    /// Measure and flip into `|down>` (`down = true`) or `|up>`.
    Reset { qubit: usize, down: bool },
}

impl Gate {
    pub fn pexp(pauli: PauliString, theta: f64) -> Self {
        Gate::PauliExp { pauli, theta }
    }

    pub fn cpexp(control: usize, basis: ControlBasis, pauli: PauliString, theta: f64) -> Self {
        Gate::ControlledPauliExp {
            control,
            basis,
            pauli,
            theta,
        }
    }

    pub fn pauli(&self) -> Option<&PauliString> {
        match self {
            Gate::PauliExp { pauli, .. } | Gate::ControlledPauliExp { pauli, .. } => Some(pauli),
            _ => None,
        }
    }

    /// Inverse of a unitary gate.
    pub fn inverse(&self) -> Option<Gate> {
        match self {
            Gate::PauliExp { pauli, theta } => Some(Gate::pexp(pauli.clone(), -theta)),
            Gate::ControlledPauliExp {
                control,
                basis,
                pauli,
                theta,
            } => Some(Gate::cpexp(*control, *basis, pauli.clone(), -theta)),
            _ => None,
        }
    }

    fn max_qubit(&self) -> Option<usize> {
        match self {
            Gate::PauliExp { pauli, .. } => pauli.max_qubit(),
            Gate::ControlledPauliExp { control, pauli, .. } => {
                Some(pauli.max_qubit().map_or(*control, |q| q.max(*control)))
            }
            Gate::Measure { qubit } | Gate::Reset { qubit, .. } => Some(*qubit),
        }
    }
}

/// Per-kind gate counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCensus {
    pub pauli_exp: usize,
    pub controlled_pauli_exp: usize,
    pub measure: usize,
    pub reset: usize,
}

impl GateCensus {
    pub fn total(&self) -> usize {
        self.pauli_exp + self.controlled_pauli_exp + self.measure + self.reset
    }
}

impl fmt::Display for GateCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pexp={} cpexp={} measure={} reset={} total={}",
            self.pauli_exp,
            self.controlled_pauli_exp,
            self.measure,
            self.reset,
            self.total()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_links: usize,
    n_qubits: usize,
    gates: Vec<Gate>,
    blocks: Vec<Range<usize>>,
    ancillas: Vec<usize>,
    matter: BTreeMap<VertexId, usize>,
    global_phase: Complex64,
}

impl Circuit {
    /// Empty circuit on `n_links` link qubits and no ancillas.
    pub fn new(n_links: usize) -> Self {
        Circuit {
            n_links,
            n_qubits: n_links,
            gates: Vec::new(),
            blocks: Vec::new(),
            ancillas: Vec::new(),
            matter: BTreeMap::new(),
            global_phase: Complex64::new(1.0, 0.0),
        }
    }

    /// Adds a qubit above the current register and returns its index.
    pub fn alloc_ancilla(&mut self) -> usize {
        let q = self.n_qubits;
        self.n_qubits += 1;
        self.ancillas.push(q);
        q
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gate ranges emitted as one logical operation.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn matter_map(&self) -> &BTreeMap<VertexId, usize> {
        &self.matter
    }

    pub(crate) fn assign_matter(&mut self, v: VertexId, qubit: usize) {
        self.matter.retain(|_, q| *q != qubit);
        self.matter.insert(v, qubit);
    }

    /// Phase the circuit's action carries relative to the operator it
    /// implements (from hopping decompositions).
    pub fn global_phase(&self) -> Complex64 {
        self.global_phase
    }

    pub(crate) fn mul_global_phase(&mut self, c: Complex64) {
        self.global_phase *= c;
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) {
        if let Some(q) = gate.max_qubit() {
            self.n_qubits = self.n_qubits.max(q + 1);
        }
        self.gates.push(gate);
    }

    /// Appends gates as one block.
    pub fn push_block(&mut self, gates: impl IntoIterator<Item = Gate>) {
        let start = self.gates.len();
        for g in gates {
            self.push(g);
        }
        if self.gates.len() > start {
            self.blocks.push(start..self.gates.len());
        }
    }

    pub(crate) fn require_ancilla(&self, q: usize) -> Result<()> {
        if self.ancillas.contains(&q) {
            Ok(())
        } else {
            Err(Error::AncillaUnavailable(q))
        }
    }

    pub fn census(&self) -> GateCensus {
        let mut c = GateCensus::default();
        for g in &self.gates {
            match g {
                Gate::PauliExp { .. } => c.pauli_exp += 1,
                Gate::ControlledPauliExp { .. } => c.controlled_pauli_exp += 1,
                Gate::Measure { .. } => c.measure += 1,
                Gate::Reset { .. } => c.reset += 1,
            }
        }
        c
    }

    /// Applies the unitary gates; fails on measurement or reset.
    pub fn apply_unitary(&self, sv: &mut StateVector) -> Result<()> {
        self.check_register(sv)?;
        for g in &self.gates {
            apply_unitary_gate(sv, g)?;
        }
        Ok(())
    }

    /// Runs every gate, sampling measurements and resets with `rng`. Returns
    /// `(qubit, outcome)` for each `Measure`, outcome `true` meaning `|down>`.
    pub fn run<R: Rng + ?Sized>(
        &self,
        sv: &mut StateVector,
        rng: &mut R,
    ) -> Result<Vec<(usize, bool)>> {
        self.check_register(sv)?;
        let mut record = Vec::new();
        for g in &self.gates {
            match g {
                Gate::Measure { qubit } => record.push((*qubit, sv.measure(*qubit, rng)?)),
                Gate::Reset { qubit, down } => sv.reset(*qubit, *down, rng)?,
                _ => apply_unitary_gate(sv, g)?,
            }
        }
        Ok(record)
    }

    fn check_register(&self, sv: &StateVector) -> Result<()> {
        if sv.n_qubits() < self.n_qubits {
            Err(Error::SizeMismatch {
                left: sv.n_qubits(),
                right: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Gate-list text: `PEXP`, `CPEXP`, `MEASURE` and `RESET` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            match g {
                Gate::PauliExp { pauli, theta } => {
                    let (theta, terms) = normalized(pauli, *theta);
                    let _ = writeln!(s, "PEXP {theta:.16e}{terms}");
                }
                Gate::ControlledPauliExp {
                    control,
                    basis,
                    pauli,
                    theta,
                } => {
                    let (theta, terms) = normalized(pauli, *theta);
                    let b = match basis {
                        ControlBasis::ZUp => "Z",
                        ControlBasis::XMinus => "X-",
                    };
                    let _ = writeln!(s, "CPEXP {control} {b} {theta:.16e}{terms}");
                }
                Gate::Measure { qubit } => {
                    let _ = writeln!(s, "MEASURE {qubit}");
                }
                Gate::Reset { qubit, down } => {
                    let _ = writeln!(s, "RESET {qubit} {}", u8::from(*down));
                }
            }
        }
        s
    }

    /// Parses the gate-list text. Comment lines (`#`) are skipped.
    pub fn from_text(n_links: usize, text: &str) -> Result<Circuit> {
        let mut c = Circuit::new(n_links);
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| -> Result<usize> {
                t.parse()
                    .map_err(|_| Error::parse(line_no, format!("bad qubit {t:?}")))
            };
            let angle = |t: &str| -> Result<f64> {
                t.parse()
                    .map_err(|_| Error::parse(line_no, format!("bad angle {t:?}")))
            };
            let gate = match tok[0] {
                "PEXP" if tok.len() >= 2 => {
                    Gate::pexp(parse_terms(line_no, &tok[2..])?, angle(tok[1])?)
                }
                "CPEXP" if tok.len() >= 4 => {
                    let basis = match tok[2] {
                        "Z" => ControlBasis::ZUp,
                        "X-" => ControlBasis::XMinus,
                        other => {
                            return Err(Error::parse(line_no, format!("bad basis {other:?}")))
                        }
                    };
                    Gate::cpexp(
                        num(tok[1])?,
                        basis,
                        parse_terms(line_no, &tok[4..])?,
                        angle(tok[3])?,
                    )
                }
                "MEASURE" if tok.len() == 2 => Gate::Measure {
                    qubit: num(tok[1])?,
                },
                "RESET" if tok.len() == 3 => Gate::Reset {
                    qubit: num(tok[1])?,
                    down: match tok[2] {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(Error::parse(line_no, format!("bad reset target {other:?}")))
                        }
                    },
                },
                other => return Err(Error::parse(line_no, format!("bad gate line {other:?}"))),
            };
            c.push(gate);
        }
        for q in n_links..c.n_qubits {
            c.ancillas.push(q);
        }
        Ok(c)
    }
}

fn apply_unitary_gate(sv: &mut StateVector, g: &Gate) -> Result<()> {
    match g {
        Gate::PauliExp { pauli, theta } => sv.apply_pauli_exp(pauli, *theta),
        Gate::ControlledPauliExp {
            control,
            basis,
            pauli,
            theta,
        } => sv.apply_controlled_pauli_exp(*control, *basis, pauli, *theta),
        Gate::Measure { qubit } | Gate::Reset { qubit, .. } => Err(Error::Numerical(format!(
            "non-unitary gate on qubit {qubit} in a unitary circuit"
        ))),
    }
}

/// Folds a `-1` phase into the angle and renders the terms.
fn normalized(p: &PauliString, theta: f64) -> (f64, String) {
    let theta = if p.phase() == Phase::MinusOne {
        -theta
    } else {
        theta
    };
    let terms: String = p
        .terms()
        .map(|(q, a)| format!(" {q}:{}", a.letter()))
        .collect();
    (theta, terms)
}

fn parse_terms(line: usize, toks: &[&str]) -> Result<PauliString> {
    let mut p = PauliString::identity();
    for t in toks {
        let (q, a) = t
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("bad term {t:?}")))?;
        let q: usize = q
            .parse()
            .map_err(|_| Error::parse(line, format!("bad qubit in {t:?}")))?;
        let mut chars = a.chars();
        let axis = match (chars.next().and_then(Axis::from_letter), chars.next()) {
            (Some(axis), None) => axis,
            _ => return Err(Error::parse(line, format!("bad axis in {t:?}"))),
        };
        if p.axis(q).is_some() {
            return Err(Error::parse(line, format!("qubit {q} repeated")));
        }
        p = p.with(q, axis);
    }
    Ok(p)
}
