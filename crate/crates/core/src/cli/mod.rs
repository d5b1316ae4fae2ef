//! Batch front end shared by the `z2wilson` binary: configuration, command
//! orchestration and output files.
//!
//! Every command returns the text it prints; when `out` is set the same text
//! is also written atomically to that path. Both start with a provenance
//! header (tool version, config hash, seed).

mod config;

pub use config::{Construction, LatticeSpec, ProgramSpec, RunConfig, TraceSpec};

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gauge::{GroundState, Sector, Z2Model};
use crate::lattice::Lattice;
use crate::trotter::{full_space_operator_fidelity, sweep};
use crate::wilson::{self, Circuit, LoopProgram, Mode, Shots, Step};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("degenerate ground state: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) | Error::NotNormalized(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GroundState,
    Sweep,
    Measure,
    ExportCircuit,
    Validate,
}

/// Runs `cmd`, writes `cfg.out` if set, and returns the printed text.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<String, CliError> {
    let body = match cmd {
        Command::GroundState => ground_state(cfg)?,
        Command::Sweep => sweep_report(cfg)?,
        Command::Measure => measure(cfg)?,
        Command::ExportCircuit => export_circuit(cfg)?,
        Command::Validate => validate(cfg)?,
    };
    let text = provenance(cfg)? + &body;
    if let Some(path) = &cfg.out {
        write_atomic(path, &text)?;
    }
    Ok(text)
}

pub fn provenance(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(format!(
        "# z2wilson {VERSION}\n# config-sha256 {}\n# seed {}\n",
        cfg.hash()?,
        cfg.seed
    ))
}

/// Temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Config(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn model(cfg: &RunConfig) -> Result<Z2Model, CliError> {
    Ok(Z2Model::new(cfg.load_lattice()?, cfg.lambda)?)
}

fn nondegenerate_ground_state(model: &Z2Model, sector: &Sector) -> Result<GroundState, CliError> {
    let gs = model.ground_state(sector)?;
    if gs.is_degenerate() {
        return Err(CliError::Degenerate(format!(
            "gap {:e} at lambda = {}",
            gs.gap,
            model.lambda()
        )));
    }
    Ok(gs)
}

fn ground_state(cfg: &RunConfig) -> Result<String, CliError> {
    let model = model(cfg)?;
    let sector = model.physical_sector()?;
    let gs = nondegenerate_ground_state(&model, &sector)?;
    let mut s = String::new();
    let _ = writeln!(s, "sector_dim {}", sector.dim());
    let _ = writeln!(s, "energy {:.16e}", gs.energy);
    let _ = writeln!(s, "gap {:.16e}", gs.gap);
    let _ = writeln!(s, "gauge_violation {:.16e}", model.gauge_violation(&gs.state)?);
    s.push_str(&sector.dump());
    for (k, (c, m)) in gs.coefficients.iter().zip(sector.masks()).enumerate() {
        let _ = writeln!(s, "AMP {k} {m:x} {:.16e} {:.16e}", c.re, c.im);
    }
    Ok(s)
}

fn sweep_report(cfg: &RunConfig) -> Result<String, CliError> {
    let model = model(cfg)?;
    let program = cfg.load_program(model.lattice())?;
    let sector = model.physical_sector()?;
    let gs = nondegenerate_ground_state(&model, &sector)?;
    let report = sweep(&model, &sector, &program, &gs.coefficients, &cfg.n_steps)?;
    let mut s = report.to_csv();
    let t = cfg.threshold;
    let readout = |n: Option<usize>| n.map_or("none".to_string(), |n| n.to_string());
    let _ = writeln!(
        s,
        "# min n_T with gs fidelity >= {t}: {}",
        readout(report.min_steps_for_state(t))
    );
    let _ = writeln!(
        s,
        "# min n_T with op fidelity >= {t}: {}",
        readout(report.min_steps_for_operator(t))
    );
    if let TraceSpec::Full(samples) = cfg.trace {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for &n in &cfg.n_steps {
            let est = full_space_operator_fidelity(&model, &sector, &program, n, samples, &mut rng)?;
            let _ = writeln!(
                s,
                "# full-space op fidelity n_T={n}: {:.16e} ({} of {} charge sectors)",
                est.fidelity, est.sampled, est.n_sectors
            );
        }
    }
    Ok(s)
}

fn measure(cfg: &RunConfig) -> Result<String, CliError> {
    let model = model(cfg)?;
    let program = cfg.load_program(model.lattice())?;
    let n = cfg.single_n_steps()?;
    let sector = model.physical_sector()?;
    let gs = nondegenerate_ground_state(&model, &sector)?;
    let w = wilson::compose_loop(&model, &sector, &program, Mode::Trotter(n))?;
    let oracle = gs.coefficients.dotc(&w.apply(&gs.coefficients)).re;
    let shots = cfg.shots.map_or(Shots::Exact, Shots::Count);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let out = wilson::hadamard_test(&gs.state, &model, &program, n, shots, &mut rng)?;
    let mut s = String::new();
    let _ = writeln!(s, "n_T {n}");
    let _ = writeln!(s, "p_plus_exact {:.16e}", out.p_plus);
    let _ = writeln!(s, "re_w_hadamard {:.16e}", out.real_expectation());
    let _ = writeln!(s, "re_w_oracle {:.16e}", oracle);
    if let Some((p, err, shots)) = out.sampled {
        let _ = writeln!(s, "p_plus_sampled {p:.16e} stderr {err:.16e} shots {shots}");
    }
    Ok(s)
}

fn spatial_only(program: &LoopProgram) -> Result<Vec<&[crate::lattice::LinkId]>, CliError> {
    program
        .steps
        .iter()
        .map(|s| match s {
            Step::Spatial(l) => Ok(l.as_slice()),
            _ => Err(CliError::Config(
                "plaquette and link constructions take spatial steps only".into(),
            )),
        })
        .collect()
}

/// Ancilla qubit and the name of the state it must be prepared in.
pub type AncillaPreps = Vec<(usize, &'static str)>;

/// Builds the circuit selected by `cfg.construction`, with the ancilla
/// preparations it expects.
pub fn build_circuit(
    cfg: &RunConfig,
    lattice: &Lattice,
    program: &LoopProgram,
) -> Result<(Circuit, AncillaPreps), CliError> {
    let mut preps = Vec::new();
    let circuit = match cfg.construction {
        Construction::Direct | Construction::Ancilla | Construction::Controlled => {
            let model = Z2Model::new(lattice.clone(), cfg.lambda)?;
            let n = cfg.single_n_steps()?;
            match cfg.construction {
                Construction::Direct => wilson::loop_circuit(&model, program, n)?,
                Construction::Ancilla => {
                    let (c, a) = wilson::loop_circuit_via_ancilla(&model, program, n)?;
                    preps.push((a.spatial, "minus"));
                    preps.push((a.plaquette, "down"));
                    c
                }
                _ => {
                    let mut c = Circuit::new(lattice.n_links());
                    let control = c.alloc_ancilla();
                    let plaq = c.alloc_ancilla();
                    wilson::controlled_loop(&mut c, &model, program, control, plaq, n)?;
                    preps.push((control, "plus"));
                    preps.push((plaq, "down"));
                    c
                }
            }
        }
        Construction::Plaquette => {
            let mut c = Circuit::new(lattice.n_links());
            let loops = spatial_only(program)?;
            if !loops.is_empty() {
                let a = c.alloc_ancilla();
                preps.push((a, "minus"));
                for links in loops {
                    let ps = wilson::enclosed_plaquettes(lattice, links).ok_or_else(|| {
                        CliError::Config("spatial loop does not bound a set of plaquettes".into())
                    })?;
                    wilson::plaquette_composed_loop(&mut c, lattice, &ps, a)?;
                }
            }
            c
        }
        Construction::Link => {
            let mut c = Circuit::new(lattice.n_links());
            for links in spatial_only(program)? {
                let q = wilson::link_based_loop(&mut c, lattice, links)?;
                preps.push((q.head, "up"));
                preps.push((q.spare, "down"));
                preps.push((q.closure, "down"));
            }
            c
        }
    };
    Ok((circuit, preps))
}

fn export_circuit(cfg: &RunConfig) -> Result<String, CliError> {
    let lattice = cfg.load_lattice()?;
    let program = cfg.load_program(&lattice)?;
    let (circuit, preps) = build_circuit(cfg, &lattice, &program)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# construction {} links {} qubits {}",
        cfg.construction,
        circuit.n_links(),
        circuit.n_qubits()
    );
    for (q, p) in preps {
        let _ = writeln!(s, "# ancilla {q} {p}");
    }
    let ph = circuit.global_phase();
    let _ = writeln!(s, "# global-phase {:.16e} {:.16e}", ph.re, ph.im);
    s += &circuit.to_text();
    let _ = writeln!(s, "# census {}", circuit.census());
    Ok(s)
}

fn validate(cfg: &RunConfig) -> Result<String, CliError> {
    let lattice = cfg.load_lattice()?;
    let diags = lattice.validate();
    if !diags.is_empty() {
        let list: Vec<String> = diags.iter().map(|d| format!("{d:?}")).collect();
        return Err(CliError::Config(format!("lattice: {}", list.join("; "))));
    }
    let program = cfg.load_program(&lattice)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "lattice ok: {} vertices, {} links, {} plaquettes, {} physical qubits",
        lattice.n_vertices(),
        lattice.n_links(),
        lattice.n_plaquettes(),
        lattice.physical_qubits()
    );
    let _ = writeln!(s, "program ok: {} steps", program.steps.len());
    Ok(s)
}
