//! Conjugating the evolution with a link's sigma_3 equals evolving with a
//! modified Hamiltonian: `s3 exp(-i tau H) s3 = exp(-i tau (H + 2 s1))`.
//!
//! The left side maps the physical sector into the charged sector shifted
//! by that link, so it is evaluated there and mapped back.
//!
//! `cargo run --example temporal_plaquette`

use z2_wilson::gauge::{SectorOperator, Z2Model};
use z2_wilson::lattice::{Lattice, LinkId};
use z2_wilson::wilson::temporal_plaquette_exact;

fn main() -> z2_wilson::Result<()> {
    let model = Z2Model::new(Lattice::cross(), 1.0)?;
    let sector = model.physical_sector()?;
    let tau = 1.0;
    for l in 0..model.n_links() {
        let link = LinkId(l);
        let shifted = sector.shifted(1 << l);
        // In the electric basis sigma_3(e) flips bit e: physical -> shifted.
        let u = model.exact_evolve_in_sector(&shifted, tau, &[])?;
        let conj = SectorOperator(nalgebra::DMatrix::from_fn(sector.dim(), sector.dim(), |i, j| {
            let row = shifted.index_of(sector.masks()[i] ^ 1 << l).unwrap();
            let col = shifted.index_of(sector.masks()[j] ^ 1 << l).unwrap();
            u.matrix()[(row, col)]
        }));
        let modified = temporal_plaquette_exact(&model, &sector, link, tau)?;
        println!("link {l:2}: max deviation {:.2e}", conj.max_abs_diff(&modified));
    }
    Ok(())
}
