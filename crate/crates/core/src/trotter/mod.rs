//! Second-order symmetric Trotterization, fidelity figures of merit and
//! `n_T` sweeps.
//!
//! One evolution of duration `tau` is split as
//! `[E(dt/2) M(dt) E(dt/2)]^{n_T}` with `dt = tau / n_T`, `E` the electric
//! factor and `M` the magnetic factor. Adjacent half-electric factors are
//! merged, so each evolution emits `n_T + 1` electric layers.

mod fit;
mod report;

pub use fit::{fit_power_law, PowerLawFit, INFIDELITY_FLOOR};
pub use report::{FidelityReport, FidelityRow};

use std::collections::BTreeSet;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauge::{Sector, SectorOperator, Z2Model};
use crate::lattice::LinkId;
use crate::statevec::{PauliString, StateVector};
use crate::wilson::{compose_loop, LoopProgram, Mode};

/// Homogeneous Trotterization: the same `n_steps` for every evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    pub n_steps: usize,
}

impl TrotterPlan {
    pub fn new(n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::ZeroTrotterSteps);
        }
        Ok(TrotterPlan { n_steps })
    }
}

/// One factor layer of a Trotter step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Layer {
    /// `exp(-i t H_el')`, `H_el' = sum_l c_l sigma_1(l)`, `c_l = -1` or `+1`
    /// on modified links.
    Electric(f64),
    /// `exp(-i t lambda H_mag)`.
    Magnetic(f64),
}

/// Layer sequence for one evolution of duration `tau`.
pub fn trotter_layers(tau: f64, n_steps: usize) -> Result<Vec<Layer>> {
    if n_steps == 0 {
        return Err(Error::ZeroTrotterSteps);
    }
    let dt = tau / n_steps as f64;
    let mut layers = Vec::with_capacity(2 * n_steps + 1);
    layers.push(Layer::Electric(dt / 2.0));
    for k in 0..n_steps {
        layers.push(Layer::Magnetic(dt));
        layers.push(Layer::Electric(if k + 1 == n_steps { dt / 2.0 } else { dt }));
    }
    Ok(layers)
}

/// Rotations `(P, theta)` meaning `exp(i theta P)`, making up one electric
/// layer of duration `t`.
pub fn electric_rotations(model: &Z2Model, t: f64, modified: &[LinkId]) -> Result<Vec<(PauliString, f64)>> {
    let mask = model.link_mask(modified.iter().copied())?;
    Ok((0..model.n_links())
        .map(|l| {
            // exp(-i t c sigma_1) = exp(i (-c t) sigma_1)
            let c = if mask >> l & 1 == 1 { 1.0 } else { -1.0 };
            (PauliString::x_string([l]), -c * t)
        })
        .collect())
}

/// Plaquette rotations of one magnetic layer of duration `t`:
/// `exp(-i t lambda H_mag) = prod_p exp(i lambda t P_p)`.
pub fn magnetic_rotations(model: &Z2Model, t: f64) -> Vec<(PauliString, f64)> {
    (0..model.lattice().n_plaquettes())
        .map(|p| (model.plaquette_string(p), model.lambda() * t))
        .collect()
}

/// All rotations of a Trotterized evolution, in application order.
pub fn trotter_rotations(
    model: &Z2Model,
    tau: f64,
    n_steps: usize,
    modified: &[LinkId],
) -> Result<Vec<(PauliString, f64)>> {
    let mut out = Vec::new();
    for layer in trotter_layers(tau, n_steps)? {
        match layer {
            Layer::Electric(t) => out.extend(electric_rotations(model, t, modified)?),
            Layer::Magnetic(t) => out.extend(magnetic_rotations(model, t)),
        }
    }
    Ok(out)
}

/// Applies `n_steps` symmetric Trotter steps of
/// `exp(-i tau (H + sum 2 sigma_1(e_m)))` to the link register of `sv`.
pub fn trotter_evolve(
    sv: &mut StateVector,
    model: &Z2Model,
    tau: f64,
    n_steps: usize,
    modified: &[LinkId],
) -> Result<()> {
    for (p, theta) in trotter_rotations(model, tau, n_steps, modified)? {
        sv.apply_pauli_exp(&p, theta)?;
    }
    Ok(())
}

/// `|Tr(W_exact^dagger W_trot)| / dim`.
pub fn operator_fidelity(exact: &SectorOperator, trot: &SectorOperator) -> Result<f64> {
    if exact.dim() != trot.dim() {
        return Err(Error::DimensionMismatch {
            left: exact.dim(),
            right: trot.dim(),
        });
    }
    let tr: Complex64 = exact
        .matrix()
        .iter()
        .zip(trot.matrix().iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(tr.norm() / exact.dim() as f64)
}

/// `|<psi| W_exact^dagger W_trot |psi>|` for a normalized sector vector.
pub fn state_fidelity(
    psi: &DVector<Complex64>,
    exact: &SectorOperator,
    trot: &SectorOperator,
) -> Result<f64> {
    if psi.len() != exact.dim() || exact.dim() != trot.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.len(),
            right: trot.dim(),
        });
    }
    let n = psi.norm_squared();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n));
    }
    let a = exact.apply(psi);
    let b = trot.apply(psi);
    Ok(a.dotc(&b).norm())
}

/// Both fidelities for each `n_T`, from one exact oracle and one
/// Trotterized operator per entry.
pub fn sweep(
    model: &Z2Model,
    sector: &Sector,
    program: &LoopProgram,
    psi: &DVector<Complex64>,
    steps: &[usize],
) -> Result<FidelityReport> {
    if steps.is_empty() || steps.windows(2).any(|w| w[0] >= w[1]) || steps[0] == 0 {
        return Err(Error::BadStepList);
    }
    let exact = compose_loop(model, sector, program, Mode::Exact)?;
    let rows = steps
        .par_iter()
        .map(|&n| {
            let trot = compose_loop(model, sector, program, Mode::Trotter(n))?;
            let drift = trot.unitarity_error();
            if drift > 1e-9 {
                return Err(Error::Numerical(format!(
                    "Trotterized loop at n_T={n} drifts from unitarity by {drift:e}"
                )));
            }
            Ok(FidelityRow {
                n_steps: n,
                operator_fidelity: operator_fidelity(&exact, &trot)?,
                state_fidelity: state_fidelity(psi, &exact, &trot)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelityReport::new(rows))
}

/// Operator fidelity over the full link space rather than the physical
/// sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSpaceEstimate {
    pub fidelity: f64,
    /// Charge sectors evaluated, out of `n_sectors`.
    pub sampled: usize,
    pub n_sectors: usize,
}

impl FullSpaceEstimate {
    pub fn is_exact(&self) -> bool {
        self.sampled == self.n_sectors
    }
}

/// Stochastic estimate of `|Tr(W_exact^dagger W_trot)| / 2^{n_links}`.
///
/// Every loop factor preserves the Gauss-law charges, so the full space
/// splits into charge sectors, each a shifted copy of `physical`. Up to
/// `samples` distinct sectors are drawn uniformly without replacement; the
/// trace sum is rescaled by `n_sectors / sampled`. Asking for at least
/// `n_sectors` samples gives the exact value.
pub fn full_space_operator_fidelity<R: Rng + ?Sized>(
    model: &Z2Model,
    physical: &Sector,
    program: &LoopProgram,
    n_steps: usize,
    samples: usize,
    rng: &mut R,
) -> Result<FullSpaceEstimate> {
    if samples == 0 {
        return Err(Error::Numerical("full-space trace needs at least one sample".into()));
    }
    let n_links = model.n_links();
    let log_sectors = n_links - physical.dim().trailing_zeros() as usize;
    if log_sectors > 20 {
        return Err(Error::SectorTooLarge(format!("2^{log_sectors} charge sectors")));
    }
    let n_sectors = 1usize << log_sectors;
    let stars = model.lattice().stars();
    let charges = |m: u64| -> u64 {
        stars
            .iter()
            .enumerate()
            .filter(|(_, st)| st.iter().filter(|&&l| m >> l & 1 == 1).count() % 2 == 1)
            .fold(0u64, |c, (v, _)| c | 1 << v)
    };
    let want = samples.min(n_sectors);
    let mut seen = BTreeSet::new();
    let mut flips = Vec::with_capacity(want);
    while flips.len() < want {
        let m = rng.random::<u64>() & ((1u64 << n_links) - 1);
        if seen.insert(charges(m)) {
            flips.push(m);
        }
    }
    let traces = flips
        .par_iter()
        .map(|&m| {
            let sector = physical.shifted(m);
            let exact = compose_loop(model, &sector, program, Mode::Exact)?;
            let trot = compose_loop(model, &sector, program, Mode::Trotter(n_steps))?;
            Ok(exact
                .matrix()
                .iter()
                .zip(trot.matrix().iter())
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>())
        })
        .collect::<Result<Vec<_>>>()?;
    let total: Complex64 = traces.iter().sum();
    let scale = n_sectors as f64 / want as f64 / (1u64 << n_links) as f64;
    Ok(FullSpaceEstimate {
        fidelity: total.norm() * scale,
        sampled: want,
        n_sectors,
    })
}
