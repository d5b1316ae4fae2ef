//! Wilson loop from matter transport: an excitation hops around a closed
//! path, leaving sigma_3 on each link, and a closure hop between the last
//! and first matter qubits raises a closure ancilla.
//!
//! The closure ancilla reads up with certainty and the link register ends up
//! in the same state as after the direct plaquette-product loop.
//!
//! `cargo run --example link_based_loop`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::{rect_boundary_path, Lattice};
use z2_wilson::statevec::PauliString;
use z2_wilson::wilson::{attach_ancillas, link_based_loop, Circuit, Prep};

fn main() -> z2_wilson::Result<()> {
    let model = Z2Model::new(Lattice::rect(2, 2)?, 1.0)?;
    let lattice = model.lattice();
    let sector = model.physical_sector()?;
    let gs = model.ground_state(&sector)?;
    let path = rect_boundary_path(lattice, 0, 0, 2, 2).expect("boundary of the 2x2 block");

    let mut circuit = Circuit::new(model.n_links());
    let q = link_based_loop(&mut circuit, lattice, &path)?;
    let mut full = attach_ancillas(&gs.state, &[Prep::Up, Prep::Down, Prep::Down]);

    // Unitary part only, to read the closure probability before measuring.
    let (unitary, measure) = circuit.gates().split_at(circuit.gates().len() - 1);
    let mut pre = Circuit::new(model.n_links());
    for _ in 0..3 {
        pre.alloc_ancilla();
    }
    for g in unitary {
        pre.push(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    pre.run(&mut full, &mut rng)?;
    println!("P(closure up) = {:.15}", 1.0 - full.prob_one(q.closure));
    println!("measure gate: {:?}", measure[0]);

    let mut direct = gs.state.clone();
    direct.apply_pauli(&PauliString::z_string(path.iter().map(|l| l.0)))?;
    // The excitation ends on the head qubit for even paths and the closure
    // hop moves it to the other matter qubit.
    let matter = if path.len().is_multiple_of(2) {
        [Prep::Down, Prep::Up]
    } else {
        [Prep::Up, Prep::Down]
    };
    let expected = attach_ancillas(&direct, &[matter[0], matter[1], Prep::Up]);
    let overlap = expected.inner(&full)? * circuit.global_phase().conj();
    println!("<direct loop|link loop> (phase removed) = {overlap:.12}");
    println!("census: {}", circuit.census());
    Ok(())
}
