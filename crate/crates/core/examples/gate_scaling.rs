//! Gate counts of square loops of perimeter L built two ways: as products of
//! enclosed plaquette loops (grows with the area) and by matter transport
//! along the boundary (grows with the perimeter).
//!
//! `cargo run --example gate_scaling`

use z2_wilson::lattice::{rect_boundary_path, Lattice, PlaquetteId};
use z2_wilson::wilson::{link_based_loop, plaquette_composed_loop, Circuit};

fn main() -> z2_wilson::Result<()> {
    println!("L,plaquette_gates,link_gates");
    for side in 1..=6 {
        let lattice = Lattice::rect(side, side)?;
        let path = rect_boundary_path(&lattice, 0, 0, side, side).expect("full boundary");

        let mut plaq = Circuit::new(lattice.n_links());
        let a = plaq.alloc_ancilla();
        let all: Vec<_> = (0..lattice.n_plaquettes()).map(PlaquetteId).collect();
        plaquette_composed_loop(&mut plaq, &lattice, &all, a)?;

        let mut link = Circuit::new(lattice.n_links());
        link_based_loop(&mut link, &lattice, &path)?;

        println!("{},{},{}", path.len(), plaq.census().total(), link.census().total());
    }
    Ok(())
}
