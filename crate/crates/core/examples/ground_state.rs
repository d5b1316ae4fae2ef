//! Ground state of the projected Hamiltonian across couplings, with its
//! plaquette expectation and the gauge violation of the embedded state.
//!
//! `cargo run --example ground_state`

use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::Lattice;

fn main() -> z2_wilson::Result<()> {
    println!("lambda,energy,gap,<plaquette>,gauge_violation");
    for lambda in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let model = Z2Model::new(Lattice::cross(), lambda)?;
        let sector = model.physical_sector()?;
        let gs = model.ground_state(&sector)?;
        let plaq = gs.state.expect_pauli(&model.plaquette_string(0))?;
        println!(
            "{lambda},{:.12},{:.6},{:.6},{:.1e}",
            gs.energy,
            gs.gap,
            plaq,
            model.gauge_violation(&gs.state)?
        );
    }
    Ok(())
}
