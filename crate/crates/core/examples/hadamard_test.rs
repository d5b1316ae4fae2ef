//! Non-demolition readout of the staircase loop on the ground state: the
//! control ancilla probability `p_+ = (1 + Re<W>)/2`, exact and sampled.
//!
//! `cargo run --release --example hadamard_test [shots]`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::Lattice;
use z2_wilson::wilson::{compose_loop, hadamard_test, LoopProgram, Mode, Shots};

fn main() -> z2_wilson::Result<()> {
    let shots: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("shots must be an integer"))
        .unwrap_or(20_000);
    let model = Z2Model::new(Lattice::cross(), 10.0)?;
    let sector = model.physical_sector()?;
    let gs = model.ground_state(&sector)?;
    let program = LoopProgram::default_staircase(model.lattice())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    println!("n_T,oracle Re<W>,exact p_+,sampled p_+,stderr");
    for n in [4, 9, 16] {
        let w = compose_loop(&model, &sector, &program, Mode::Trotter(n))?;
        let oracle = gs.coefficients.dotc(&w.apply(&gs.coefficients)).re;
        let out = hadamard_test(&gs.state, &model, &program, n, Shots::Count(shots), &mut rng)?;
        let (p, err, _) = out.sampled.expect("sampling mode");
        println!("{n},{oracle:.12},{:.12},{p:.5},{err:.5}", out.p_plus);
    }
    let exact = compose_loop(&model, &sector, &program, Mode::Exact)?;
    println!(
        "untrotterized Re<W> = {:.12}",
        gs.coefficients.dotc(&exact.apply(&gs.coefficients)).re
    );
    Ok(())
}
