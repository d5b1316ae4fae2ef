//! Ancilla-mediated building blocks checked against direct Pauli
//! exponentials on a random physical state: the V-gate spatial loop and the
//! plaquette evolution `V^dagger exp(-i theta s3) V`.
//!
//! `cargo run --example ancilla_circuits`

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::{Lattice, PlaquetteId};
use z2_wilson::statevec::PauliString;
use z2_wilson::wilson::{
    attach_ancillas, plaquette_exp_via_ancilla, spatial_loop_via_ancilla, Circuit, Prep,
};

fn main() -> z2_wilson::Result<()> {
    let model = Z2Model::new(Lattice::cross(), 10.0)?;
    let lattice = model.lattice();
    let sector = model.physical_sector()?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = DVector::from_fn(sector.dim(), |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let psi = sector.embed(&c.normalize())?;
    let links = lattice.plaquette(PlaquetteId(2)).expect("cross has 5 plaquettes");
    let p = PauliString::z_string(links.iter().map(|l| l.0));

    // Spatial loop through a |-> ancilla.
    let mut circuit = Circuit::new(model.n_links());
    let a = circuit.alloc_ancilla();
    spatial_loop_via_ancilla(&mut circuit, lattice, &links, a)?;
    let mut full = attach_ancillas(&psi, &[Prep::Minus]);
    circuit.apply_unitary(&mut full)?;
    let mut direct = psi.clone();
    direct.apply_pauli(&p)?;
    let expected = attach_ancillas(&direct, &[Prep::Minus]);
    println!("spatial loop:   |<direct|circuit>| = {:.15}", expected.inner(&full)?.norm());
    println!("  census: {}", circuit.census());

    // Plaquette evolution through a |down> ancilla.
    let theta = 0.37;
    let mut circuit = Circuit::new(model.n_links());
    let b = circuit.alloc_ancilla();
    plaquette_exp_via_ancilla(&mut circuit, lattice, &links, theta, b)?;
    let mut full = attach_ancillas(&psi, &[Prep::Down]);
    circuit.apply_unitary(&mut full)?;
    let mut direct = psi.clone();
    direct.apply_pauli_exp(&p, theta)?;
    let expected = attach_ancillas(&direct, &[Prep::Down]);
    let dev = full
        .amplitudes()
        .iter()
        .zip(expected.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    println!("plaquette exp:  max amplitude deviation = {dev:.2e}");
    println!("  ancilla purity after: {:.15}", full.qubit_purity(b));
    println!("  census: {}", circuit.census());
    Ok(())
}
