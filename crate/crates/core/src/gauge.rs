//! The pure Z(2) gauge model
//! `H = -sum_links sigma_1 - lambda * sum_plaquettes sigma_3 sigma_3 sigma_3 sigma_3`
//! and its gauge-invariant sector.
//!
//! Sectors are stored in the electric basis: each basis element is a bit mask
//! over links, bit `l` set meaning link `l` sits in the `sigma_1 = -1`
//! eigenstate. Star operators are diagonal there, and a plaquette operator
//! flips the four bits of its links.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LinkId, VertexId};
use crate::statevec::{PauliString, StateVector};

/// Largest supported sector, as `log2(dim)`.
const MAX_SECTOR_QUBITS: usize = 20;

/// Gap below which a ground state is reported as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Z2Model {
    lattice: Lattice,
    lambda: f64,
}

impl Z2Model {
    pub fn new(lattice: Lattice, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Numerical(format!("coupling {lambda} is not finite")));
        }
        if lattice.n_links() > 63 {
            return Err(Error::SectorTooLarge(format!(
                "{} links exceed the 63-link mask limit",
                lattice.n_links()
            )));
        }
        if let Some(d) = lattice.validate().first() {
            return Err(Error::InvalidLattice(d.to_string()));
        }
        Ok(Z2Model { lattice, lambda })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_links(&self) -> usize {
        self.lattice.n_links()
    }

    pub fn link_mask(&self, links: impl IntoIterator<Item = LinkId>) -> Result<u64> {
        let mut m = 0u64;
        for l in links {
            if l.0 >= self.n_links() {
                return Err(Error::InvalidLink(l.0));
            }
            m ^= 1 << l.0;
        }
        Ok(m)
    }

    fn plaquette_masks(&self) -> Vec<u64> {
        self.lattice
            .plaquettes()
            .iter()
            .map(|p| p.iter().fold(0u64, |m, &l| m | (1 << l)))
            .collect()
    }

    /// Sigma_3 string on one plaquette.
    pub fn plaquette_string(&self, p: usize) -> PauliString {
        PauliString::z_string(self.lattice.plaquettes()[p].iter().copied())
    }

    /// Gauss-law generator: `sigma_1` on every link incident to `v`.
    pub fn star_operator(&self, v: VertexId) -> Result<PauliString> {
        Ok(PauliString::x_string(self.lattice.star(v)?.iter().copied()))
    }

    pub fn star_operators(&self) -> Vec<PauliString> {
        (0..self.lattice.n_vertices())
            .map(|v| PauliString::x_string(self.lattice.stars()[v].iter().copied()))
            .collect()
    }

    /// Enumerates the gauge-invariant sector: electric configurations with
    /// even parity at every vertex (the cycle space of the lattice graph).
    pub fn physical_sector(&self) -> Result<Sector> {
        let cycles = cycle_basis(&self.lattice);
        if cycles.len() > MAX_SECTOR_QUBITS {
            return Err(Error::SectorTooLarge(format!(
                "sector dimension 2^{}",
                cycles.len()
            )));
        }
        let mut masks = Vec::with_capacity(1 << cycles.len());
        for combo in 0u64..(1 << cycles.len()) {
            let m = cycles
                .iter()
                .enumerate()
                .filter(|(i, _)| combo >> i & 1 == 1)
                .fold(0u64, |m, (_, c)| m ^ c);
            masks.push(m);
        }
        Ok(Sector::from_masks(self.n_links(), masks))
    }

    /// `H + sum_{m in modified} 2 sigma_1(e_m)` restricted to `sector`.
    pub fn hamiltonian_in_sector(
        &self,
        sector: &Sector,
        modified: &[LinkId],
    ) -> Result<SectorOperator> {
        let h = self.real_hamiltonian(sector, modified)?;
        Ok(SectorOperator(h.map(|x| Complex64::new(x, 0.0))))
    }

    pub(crate) fn real_hamiltonian(
        &self,
        sector: &Sector,
        modified: &[LinkId],
    ) -> Result<DMatrix<f64>> {
        let mod_mask = self.link_mask(modified.iter().copied())?;
        let n = self.n_links();
        let dim = sector.dim();
        let plaqs = self.plaquette_masks();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for (k, &m) in sector.masks.iter().enumerate() {
            let mut diag = 0.0;
            for l in 0..n {
                let coef = if mod_mask >> l & 1 == 1 { 1.0 } else { -1.0 };
                let s = if m >> l & 1 == 1 { -1.0 } else { 1.0 };
                diag += coef * s;
            }
            h[(k, k)] += diag;
            for &p in &plaqs {
                let j = sector.index_of(m ^ p).ok_or_else(|| {
                    Error::Numerical("sector is not closed under plaquette flips".into())
                })?;
                h[(j, k)] -= self.lambda;
            }
        }
        Ok(h)
    }

    /// `exp(-i tau (H + sum 2 sigma_1(e_m)))` on the sector, by exact
    /// diagonalization.
    pub fn exact_evolve_in_sector(
        &self,
        sector: &Sector,
        tau: f64,
        modified: &[LinkId],
    ) -> Result<SectorOperator> {
        if !tau.is_finite() {
            return Err(Error::Numerical(format!("tau {tau} is not finite")));
        }
        let h = self.real_hamiltonian(sector, modified)?;
        let eig = SymmetricEigen::new(h);
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases = DVector::from_iterator(
            eig.eigenvalues.len(),
            eig.eigenvalues
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -tau * e)),
        );
        let vd = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * phases[j]);
        Ok(SectorOperator(vd * v.adjoint()))
    }

    /// Lowest eigenvector of the unmodified Hamiltonian, embedded back into
    /// the link register.
    pub fn ground_state(&self, sector: &Sector) -> Result<GroundState> {
        let h = self.real_hamiltonian(sector, &[])?;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let e0 = eig.eigenvalues[order[0]];
        let gap = order
            .get(1)
            .map(|&i| eig.eigenvalues[i] - e0)
            .unwrap_or(f64::INFINITY);
        let col = eig.eigenvectors.column(order[0]);
        let mut coeffs = DVector::from_iterator(col.len(), col.iter().map(|&x| Complex64::new(x, 0.0)));

        let mut state = sector.embed(&coeffs)?;
        let amps = state.amplitudes();
        let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let pivot = amps
            .iter()
            .position(|a| a.norm() >= max - 1e-12)
            .expect("nonempty state");
        let fix = amps[pivot].conj() / amps[pivot].norm();
        state.scale(fix);
        coeffs *= fix;

        Ok(GroundState {
            energy: e0,
            gap,
            coefficients: coeffs,
            state,
        })
    }

    /// `max_v |1 - <psi|star_v|psi>|` over the link register.
    pub fn gauge_violation(&self, sv: &StateVector) -> Result<f64> {
        let mut worst = 0.0f64;
        for star in self.star_operators() {
            worst = worst.max((1.0 - sv.expect_pauli(&star)?).abs());
        }
        Ok(worst)
    }
}

/// Fundamental cycles of a spanning forest, as link masks.
fn cycle_basis(lattice: &Lattice) -> Vec<u64> {
    let nv = lattice.n_vertices();
    let mut root_path = vec![0u64; nv];
    let mut seen = vec![false; nv];
    let mut tree = BTreeSet::new();
    for start in 0..nv {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &l in &lattice.stars()[v] {
                let (a, b) = lattice.links()[l];
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    root_path[w] = root_path[v] ^ (1 << l);
                    tree.insert(l);
                    queue.push_back(w);
                }
            }
        }
    }
    lattice
        .links()
        .iter()
        .enumerate()
        .filter(|(l, _)| !tree.contains(l))
        .map(|(l, &(a, b))| root_path[a] ^ root_path[b] ^ (1 << l))
        .collect()
}

/// A set of electric-basis product states spanning an invariant subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    n_links: usize,
    masks: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl Sector {
    /// Sorts and deduplicates `masks`.
    pub fn from_masks(n_links: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Sector {
            n_links,
            masks,
            index,
        }
    }

    /// The sector obtained by flipping the bits in `flip` on every element,
    /// i.e. the image under the sigma_3 string on those links.
    pub fn shifted(&self, flip: u64) -> Sector {
        Sector::from_masks(self.n_links, self.masks.iter().map(|m| m ^ flip).collect())
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Sector coordinates -> link-register statevector.
    pub fn embed(&self, coeffs: &DVector<Complex64>) -> Result<StateVector> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: self.dim(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n_links];
        for (&m, &c) in self.masks.iter().zip(coeffs.iter()) {
            amps[m as usize] = c;
        }
        walsh_hadamard(&mut amps);
        StateVector::from_amplitudes(amps)
    }

    /// Embeds sector basis element `k`.
    pub fn embed_basis(&self, k: usize) -> StateVector {
        let mut coeffs = DVector::zeros(self.dim());
        coeffs[k] = Complex64::new(1.0, 0.0);
        self.embed(&coeffs).expect("matching dimension")
    }

    /// Link-register statevector -> sector coordinates (orthogonal
    /// projection onto the span of the basis).
    pub fn project(&self, sv: &StateVector) -> Result<DVector<Complex64>> {
        if sv.n_qubits() != self.n_links {
            return Err(Error::SizeMismatch {
                left: sv.n_qubits(),
                right: self.n_links,
            });
        }
        let mut amps = sv.amplitudes().to_vec();
        walsh_hadamard(&mut amps);
        Ok(DVector::from_iterator(
            self.dim(),
            self.masks.iter().map(|&m| amps[m as usize]),
        ))
    }

    /// Diagnostic dump, one `BASIS <index> <hex mask>` line per element.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, m) in self.masks.iter().enumerate() {
            let _ = writeln!(s, "BASIS {i} {m:x}");
        }
        s
    }
}

/// Normalized Walsh-Hadamard transform: maps electric-basis coordinates to
/// computational-basis amplitudes and back (it is its own inverse).
fn walsh_hadamard(a: &mut [Complex64]) {
    let n = a.len();
    let mut h = 1;
    while h < n {
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                let x = a[j];
                let y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
            i += 2 * h;
        }
        h *= 2;
    }
    let s = 1.0 / (n as f64).sqrt();
    for x in a.iter_mut() {
        *x *= s;
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Distance to the next eigenvalue in the sector.
    pub gap: f64,
    /// Sector coordinates, same phase convention as `state`.
    pub coefficients: DVector<Complex64>,
    /// Embedded state; its largest-magnitude amplitude is real positive.
    pub state: StateVector,
}

impl GroundState {
    pub fn is_degenerate(&self) -> bool {
        self.gap < DEGENERACY_TOLERANCE
    }
}

/// A square matrix in sector coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOperator(pub DMatrix<Complex64>);

impl SectorOperator {
    pub fn identity(dim: usize) -> Self {
        SectorOperator(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        SectorOperator(self.0.adjoint())
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &SectorOperator) -> Self {
        SectorOperator(&self.0 * &rhs.0)
    }

    pub fn max_abs_diff(&self, other: &SectorOperator) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn unitarity_error(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        (prod - DMatrix::<Complex64>::identity(self.dim(), self.dim()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }

    /// Sector matrix of the sigma_3 string on `links`, which must map the
    /// sector onto itself.
    pub fn from_z_string(sector: &Sector, links_mask: u64) -> Result<Self> {
        let dim = sector.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (k, &mask) in sector.masks().iter().enumerate() {
            let j = sector.index_of(mask ^ links_mask).ok_or_else(|| {
                Error::InvalidProgram("sigma_3 string leaves the physical sector".into())
            })?;
            m[(j, k)] = Complex64::new(1.0, 0.0);
        }
        Ok(SectorOperator(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimensions() {
        let cross = Z2Model::new(Lattice::cross(), 1.0).unwrap();
        assert_eq!(cross.physical_sector().unwrap().dim(), 32);
        let sq = Z2Model::new(Lattice::rect(1, 1).unwrap(), 1.0).unwrap();
        assert_eq!(sq.physical_sector().unwrap().dim(), 2);
        let dom = Z2Model::new(Lattice::rect(2, 1).unwrap(), 1.0).unwrap();
        assert_eq!(dom.physical_sector().unwrap().dim(), 4);
    }

    #[test]
    fn star_weights() {
        let m = Z2Model::new(Lattice::rect(2, 2).unwrap(), 1.0).unwrap();
        let center = m.lattice().vertex_at(1, 1).unwrap();
        assert_eq!(m.star_operator(center).unwrap().weight(), 4);
        let sq = Z2Model::new(Lattice::rect(1, 1).unwrap(), 1.0).unwrap();
        assert_eq!(sq.star_operator(VertexId(0)).unwrap().weight(), 2);
        assert!(sq.star_operator(VertexId(9)).is_err());

        let cross = Z2Model::new(Lattice::cross(), 1.0).unwrap();
        let product = cross
            .star_operators()
            .into_iter()
            .fold(PauliString::identity(), |a, b| a * b);
        assert!(product.is_identity());
    }

    #[test]
    fn electric_vacuum_energies() {
        let m = Z2Model::new(Lattice::cross(), 0.0).unwrap();
        let s = m.physical_sector().unwrap();
        let h = m.hamiltonian_in_sector(&s, &[]).unwrap();
        assert!(h.hermiticity_error() < 1e-15);
        let gs = m.ground_state(&s).unwrap();
        assert!((gs.energy + 16.0).abs() < 1e-12);
        assert!(!gs.is_degenerate());
        // all amplitudes equal: the all-plus product state
        let a0 = gs.state.amplitudes()[0];
        assert!(gs.state.amplitudes().iter().all(|a| (a - a0).norm() < 1e-12));

        let h = m.real_hamiltonian(&s, &[LinkId(3)]).unwrap();
        let min = SymmetricEigen::new(h).eigenvalues.min();
        assert!((min + 14.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_unitary_and_trivial_at_zero() {
        let m = Z2Model::new(Lattice::cross(), 10.0).unwrap();
        let s = m.physical_sector().unwrap();
        let u0 = m.exact_evolve_in_sector(&s, 0.0, &[]).unwrap();
        assert!(u0.max_abs_diff(&SectorOperator::identity(32)) < 1e-12);
        let u = m.exact_evolve_in_sector(&s, 1.3, &[LinkId(4)]).unwrap();
        assert!(u.unitarity_error() < 1e-12);
    }

    #[test]
    fn embed_project_round_trip() {
        let m = Z2Model::new(Lattice::rect(2, 1).unwrap(), 1.0).unwrap();
        let s = m.physical_sector().unwrap();
        let c = DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ]);
        let sv = s.embed(&c).unwrap();
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((s.project(&sv).unwrap() - c).norm() < 1e-12);
        assert!(m.gauge_violation(&sv).unwrap() < 1e-12);
    }

    #[test]
    fn charged_state_violates_by_two() {
        let m = Z2Model::new(Lattice::rect(1, 1).unwrap(), 1.0).unwrap();
        let s = m.physical_sector().unwrap().shifted(1);
        let sv = s.embed_basis(0);
        assert!((m.gauge_violation(&sv).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn basis_dump_format() {
        let m = Z2Model::new(Lattice::rect(1, 1).unwrap(), 1.0).unwrap();
        let dump = m.physical_sector().unwrap().dump();
        assert_eq!(dump, "BASIS 0 0\nBASIS 1 f\n");
    }
}
