//! Trotter convergence of the staircase loop on the cross lattice.
//!
//! Prints operator and ground-state fidelities against `n_T`, the fitted
//! power laws, the smallest `n_T` reaching a 0.95 state fidelity, and a
//! sampled full-space operator fidelity at `n_T = 9` for comparison.
//!
//! `cargo run --release --example trotter_sweep [lambda]`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::Lattice;
use z2_wilson::trotter::{full_space_operator_fidelity, sweep};
use z2_wilson::wilson::LoopProgram;

fn main() -> z2_wilson::Result<()> {
    let lambda: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("lambda must be a number"))
        .unwrap_or(10.0);
    let model = Z2Model::new(Lattice::cross(), lambda)?;
    let sector = model.physical_sector()?;
    let gs = model.ground_state(&sector)?;
    let program = LoopProgram::default_staircase(model.lattice())?;

    let steps: Vec<usize> = (1..=12).chain([16, 24, 32, 48, 64, 96, 128]).collect();
    let report = sweep(&model, &sector, &program, &gs.coefficients, &steps)?;
    print!("{}", report.to_csv());
    match report.min_steps_for_state(0.95) {
        Some(n) => println!("state fidelity >= 0.95 from n_T = {n}"),
        None => println!("state fidelity stays below 0.95"),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let full = full_space_operator_fidelity(&model, &sector, &program, 9, 16, &mut rng)?;
    println!(
        "full-space op fidelity at n_T = 9: {:.6} from {} of {} charge sectors",
        full.fidelity, full.sampled, full.n_sectors
    );
    Ok(())
}
