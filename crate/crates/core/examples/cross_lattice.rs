//! Geometry of the plus-shaped lattice: links, plaquettes, stars and the
//! size of the Gauss-law sector.
//!
//! `cargo run --example cross_lattice`

use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::{Lattice, VertexId};

fn main() -> z2_wilson::Result<()> {
    let lattice = Lattice::cross();
    println!(
        "{} vertices, {} links, {} plaquettes",
        lattice.n_vertices(),
        lattice.n_links(),
        lattice.n_plaquettes()
    );
    for (l, (a, b)) in lattice.links().iter().enumerate() {
        println!("link {l:2}: {a} - {b}");
    }
    for (p, links) in lattice.plaquettes().iter().enumerate() {
        println!("plaquette {p}: links {links:?}");
    }
    for v in 0..lattice.n_vertices() {
        println!("star {v:2}: {:?}", lattice.star(VertexId(v))?);
    }

    let model = Z2Model::new(lattice, 10.0)?;
    let sector = model.physical_sector()?;
    println!(
        "physical sector: dim {} = 2^{}",
        sector.dim(),
        model.lattice().physical_qubits()
    );
    print!("{}", model.lattice().to_text());
    Ok(())
}
