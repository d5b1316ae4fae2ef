//! Dense statevector engine.
//!
//! Qubit 0 is the least significant bit of the amplitude index. Spin-up
//! (`sigma_3 = +1`) is bit value 0, spin-down is bit value 1. All gates act in
//! place over amplitude pairs; Pauli exponentials use the closed form
//! `exp(i theta P) = cos(theta) + i sin(theta) P`.

mod pauli;

pub use pauli::{Axis, Phase, PauliString};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-12;

/// Which state of the control qubit switches a controlled gate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlBasis {
    /// Active on `|up>` (`sigma_3 = +1`, bit 0).
    ZUp,
    /// Active on `|->` (`sigma_1 = -1`).
    XMinus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
    norm_tolerance: f64,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        StateVector {
            n_qubits,
            amps,
            norm_tolerance: DEFAULT_NORM_TOLERANCE,
        }
    }

    /// Computational basis state. The bitstring is written most significant
    /// qubit first, so `"10"` sets qubit 1.
    pub fn basis(n_qubits: usize, bitstring: &str) -> Result<Self> {
        if bitstring.chars().count() != n_qubits {
            return Err(Error::BitstringLength {
                expected: n_qubits,
                got: bitstring.chars().count(),
            });
        }
        let mut index = 0usize;
        for c in bitstring.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                other => return Err(Error::BitstringChar(other)),
            }
        }
        Ok(Self::basis_index(n_qubits, index))
    }

    pub fn basis_index(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        StateVector {
            n_qubits,
            amps,
            norm_tolerance: DEFAULT_NORM_TOLERANCE,
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                left: n,
                right: n.next_power_of_two(),
            });
        }
        Ok(StateVector {
            n_qubits: n.trailing_zeros() as usize,
            amps,
            norm_tolerance: DEFAULT_NORM_TOLERANCE,
        })
    }

    pub fn with_norm_tolerance(mut self, tol: f64) -> Self {
        self.norm_tolerance = tol;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Diagnostic unitarity check; never renormalizes.
    pub fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > self.norm_tolerance {
            Err(Error::NotNormalized(n))
        } else {
            Ok(())
        }
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    /// Appends `extra` fresh qubits in the given basis states above the
    /// current register (`bits` bit `k` is the value of new qubit `k`).
    pub fn extended(&self, extra: usize, bits: usize) -> StateVector {
        let mut out = vec![ZERO; 1 << (self.n_qubits + extra)];
        let offset = bits << self.n_qubits;
        out[offset..offset + self.amps.len()].copy_from_slice(&self.amps);
        StateVector {
            n_qubits: self.n_qubits + extra,
            amps: out,
            norm_tolerance: self.norm_tolerance,
        }
    }

    /// `P |psi>`.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        p.check_register(self.n_qubits)?;
        let (xm, zm, c) = p.masks();
        if xm == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a *= c * sign(i & zm);
            }
            return Ok(());
        }
        let hb = highest_bit(xm);
        for_each_low(self.amps.len(), hb, |i| {
            let j = i ^ xm;
            let ai = self.amps[i];
            let aj = self.amps[j];
            self.amps[i] = c * sign(j & zm) * aj;
            self.amps[j] = c * sign(i & zm) * ai;
        });
        Ok(())
    }

    /// `exp(i theta P) |psi>`.
    pub fn apply_pauli_exp(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        p.check_register(self.n_qubits)?;
        pauli_exp_kernel(&mut self.amps, p, theta, |_| true);
        Ok(())
    }

    /// Applies `exp(i theta P)` on the branch where `control` is in the
    /// active state of `basis`, identity on the other branch.
    pub fn apply_controlled_pauli_exp(
        &mut self,
        control: usize,
        basis: ControlBasis,
        p: &PauliString,
        theta: f64,
    ) -> Result<()> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        p.check_register(self.n_qubits)?;
        self.check_qubit(control)?;
        if p.axis(control).is_some() {
            return Err(Error::ControlInSupport(control));
        }
        let cbit = 1usize << control;
        match basis {
            ControlBasis::ZUp => {
                pauli_exp_kernel(&mut self.amps, p, theta, |i| i & cbit == 0);
            }
            ControlBasis::XMinus => {
                self.hadamard(control);
                pauli_exp_kernel(&mut self.amps, p, theta, |i| i & cbit != 0);
                self.hadamard(control);
            }
        }
        Ok(())
    }

    pub(crate) fn hadamard(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bit = 1usize << q;
        for_each_low(self.amps.len(), bit, |i| {
            let a = self.amps[i];
            let b = self.amps[i | bit];
            self.amps[i] = (a + b) * s;
            self.amps[i | bit] = (a - b) * s;
        });
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `<psi|P|psi>` for Hermitian `P`.
    pub fn expect_pauli(&self, p: &PauliString) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        p.check_register(self.n_qubits)?;
        let (xm, zm, c) = p.masks();
        // <psi|P|psi> = sum_i conj(a_{i^x}) c sign(i & z) a_i
        let v: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| self.amps[i ^ xm].conj() * c * sign(i & zm) * a)
            .sum();
        Ok(v.re)
    }

    /// Probability that `q` reads 1 in the computational basis.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability that `q` is found in `|+>`.
    pub fn prob_x_plus(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        let mut p = 0.0;
        for_each_low(self.amps.len(), bit, |i| {
            p += (self.amps[i] + self.amps[i | bit]).norm_sqr();
        });
        0.5 * p
    }

    /// Reduced single-qubit density matrix `[[r00, r01], [r10, r11]]`.
    pub fn reduced_density(&self, q: usize) -> [[Complex64; 2]; 2] {
        let bit = 1usize << q;
        let (mut r00, mut r11, mut r01) = (0.0, 0.0, ZERO);
        for_each_low(self.amps.len(), bit, |i| {
            let a0 = self.amps[i];
            let a1 = self.amps[i | bit];
            r00 += a0.norm_sqr();
            r11 += a1.norm_sqr();
            r01 += a0 * a1.conj();
        });
        [
            [Complex64::new(r00, 0.0), r01],
            [r01.conj(), Complex64::new(r11, 0.0)],
        ]
    }

    pub fn qubit_purity(&self, q: usize) -> f64 {
        let r = self.reduced_density(q);
        r[0][0].re.powi(2) + r[1][1].re.powi(2) + 2.0 * r[0][1].norm_sqr()
    }

    /// Projective Z measurement of `q`. Returns `true` for outcome 1.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<bool> {
        self.check_qubit(q)?;
        let p1 = self.prob_one(q);
        let outcome = rng.random::<f64>() < p1;
        self.collapse(q, outcome, if outcome { p1 } else { 1.0 - p1 })?;
        Ok(outcome)
    }

    /// Measures `q` and flips it to `target` if needed.
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, target: bool, rng: &mut R) -> Result<()> {
        let outcome = self.measure(q, rng)?;
        if outcome != target {
            self.apply_pauli(&PauliString::single(q, Axis::X))?;
        }
        Ok(())
    }

    fn collapse(&mut self, q: usize, outcome: bool, prob: f64) -> Result<()> {
        if prob <= 0.0 {
            return Err(Error::Numerical(format!(
                "collapse onto zero-probability outcome of qubit {q}"
            )));
        }
        let bit = 1usize << q;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }
}

#[inline]
fn sign(masked: usize) -> f64 {
    if masked.count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn highest_bit(mask: usize) -> usize {
    1usize << (usize::BITS - 1 - mask.leading_zeros())
}

/// Calls `f(i)` for every index `i < len` with the `bit` cleared.
#[inline]
fn for_each_low(len: usize, bit: usize, mut f: impl FnMut(usize)) {
    let mut hi = 0;
    while hi < len {
        for i in hi..hi + bit {
            f(i);
        }
        hi += 2 * bit;
    }
}

fn pauli_exp_kernel(
    amps: &mut [Complex64],
    p: &PauliString,
    theta: f64,
    active: impl Fn(usize) -> bool,
) {
    let (xm, zm, c) = p.masks();
    let (s, co) = theta.sin_cos();
    let k = I * s * c;
    if xm == 0 {
        let plus = co + k;
        let minus = co - k;
        for (i, a) in amps.iter_mut().enumerate() {
            if active(i) {
                *a *= if (i & zm).count_ones() & 1 == 0 { plus } else { minus };
            }
        }
        return;
    }
    let hb = highest_bit(xm);
    for_each_low(amps.len(), hb, |i| {
        // the control bit is outside the support, so i and i ^ xm agree on it
        if !active(i) {
            return;
        }
        let j = i ^ xm;
        let ai = amps[i];
        let aj = amps[j];
        amps[i] = co * ai + k * sign(j & zm) * aj;
        amps[j] = co * aj + k * sign(i & zm) * ai;
    });
}
