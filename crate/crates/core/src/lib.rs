//! Statevector simulation of gauge-invariant space-time Wilson loops in pure
//! Z(2) lattice gauge theory.
//!
//! The crate covers the whole pipeline: lattice geometry ([`lattice`]), a
//! dense statevector engine with Pauli-string kernels ([`statevec`]), the
//! Z(2) model and its Gauss-law sector ([`gauge`]), loop programs and their
//! circuit realizations ([`wilson`]), Trotterization and fidelity sweeps
//! ([`trotter`]), and a batch front end ([`cli`]).
//!
//! ```
//! use z2_wilson::{gauge::Z2Model, lattice::Lattice};
//!
//! let model = Z2Model::new(Lattice::cross(), 0.0).unwrap();
//! let sector = model.physical_sector().unwrap();
//! assert_eq!(sector.dim(), 32);
//! let gs = model.ground_state(&sector).unwrap();
//! assert!((gs.energy + 16.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod gauge;
pub mod lattice;
pub mod statevec;
pub mod trotter;
pub mod wilson;

pub use error::{Error, Result};
