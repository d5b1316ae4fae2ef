use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::CliError;
use crate::lattice::Lattice;
use crate::wilson::LoopProgram;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeSpec {
    Cross,
    Rect(usize, usize),
    File(PathBuf),
}

impl FromStr for LatticeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "cross" {
            return Ok(LatticeSpec::Cross);
        }
        if let Some(dims) = s.strip_prefix("rect:") {
            let bad = || CliError::Config(format!("bad rectangle {s:?}, expected rect:WxH"));
            let (w, h) = dims.split_once('x').ok_or_else(bad)?;
            return Ok(LatticeSpec::Rect(
                w.parse().map_err(|_| bad())?,
                h.parse().map_err(|_| bad())?,
            ));
        }
        Ok(LatticeSpec::File(PathBuf::from(s)))
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::Cross => write!(f, "cross"),
            LatticeSpec::Rect(w, h) => write!(f, "rect:{w}x{h}"),
            LatticeSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramSpec {
    StaircaseDefault,
    Empty,
    File(PathBuf),
}

impl FromStr for ProgramSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "staircase-default" => ProgramSpec::StaircaseDefault,
            "empty" => ProgramSpec::Empty,
            path => ProgramSpec::File(PathBuf::from(path)),
        })
    }
}

impl fmt::Display for ProgramSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramSpec::StaircaseDefault => write!(f, "staircase-default"),
            ProgramSpec::Empty => write!(f, "empty"),
            ProgramSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Space over which `sweep` normalizes the operator-fidelity trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSpec {
    Sector,
    /// Full link space, estimated from this many charge sectors.
    Full(usize),
}

impl FromStr for TraceSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "sector" {
            return Ok(TraceSpec::Sector);
        }
        match s.strip_prefix("full:").map(str::parse) {
            Some(Ok(n)) if n > 0 => Ok(TraceSpec::Full(n)),
            _ => Err(CliError::Config(format!(
                "bad trace {s:?}: expected sector or full:<samples>"
            ))),
        }
    }
}

impl fmt::Display for TraceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceSpec::Sector => write!(f, "sector"),
            TraceSpec::Full(n) => write!(f, "full:{n}"),
        }
    }
}

/// Circuit realization used by `export-circuit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Pauli exponentials directly on the link register.
    Direct,
    /// V-gates and plaquette exponentials through ancillas.
    Ancilla,
    /// Controlled loop for the Hadamard test.
    Controlled,
    /// Spatial loops only, each as a product of enclosed plaquette loops.
    Plaquette,
    /// Spatial loops only, each by matter transport along its links.
    Link,
}

impl FromStr for Construction {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "direct" => Construction::Direct,
            "ancilla" => Construction::Ancilla,
            "controlled" => Construction::Controlled,
            "plaquette" => Construction::Plaquette,
            "link" => Construction::Link,
            other => return Err(CliError::Config(format!("unknown construction {other:?}"))),
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Direct => "direct",
            Construction::Ancilla => "ancilla",
            Construction::Controlled => "controlled",
            Construction::Plaquette => "plaquette",
            Construction::Link => "link",
        })
    }
}

/// Run parameters, read from flat `key = value` text and overridden from the
/// command line through the same [`RunConfig::set`] path.
///
/// Keys: `lattice`, `lambda`, `program`, `nt`, `shots`, `seed`, `out`,
/// `threshold`, `construction`, `trace`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    pub lambda: f64,
    pub program: ProgramSpec,
    pub n_steps: Vec<usize>,
    /// `None` is exact evaluation.
    pub shots: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub threshold: f64,
    pub construction: Construction,
    pub trace: TraceSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: LatticeSpec::Cross,
            lambda: 10.0,
            program: ProgramSpec::StaircaseDefault,
            n_steps: vec![9],
            shots: None,
            seed: 0,
            out: None,
            threshold: 0.95,
            construction: Construction::Direct,
            trace: TraceSpec::Sector,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("bad value {value:?} for {key}")))
}

impl RunConfig {
    /// Defaults overlaid with a config file body.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key = value", i + 1))
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "lattice" => self.lattice = value.parse()?,
            "lambda" => {
                self.lambda = parse_num(key, value)?;
                if !self.lambda.is_finite() {
                    return Err(CliError::Config("lambda must be finite".into()));
                }
            }
            "program" => self.program = value.parse()?,
            "nt" => {
                let steps = value
                    .split(',')
                    .map(|t| parse_num(key, t.trim()))
                    .collect::<Result<Vec<usize>, _>>()?;
                if steps.is_empty() || steps[0] == 0 || steps.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config(
                        "nt must be a strictly increasing list of positive integers".into(),
                    ));
                }
                self.n_steps = steps;
            }
            "shots" => {
                self.shots = match value {
                    "exact" => None,
                    v => match parse_num(key, v)? {
                        0 => return Err(CliError::Config("shots must be positive".into())),
                        n => Some(n),
                    },
                }
            }
            "seed" => self.seed = parse_num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "threshold" => self.threshold = parse_num(key, value)?,
            "construction" => self.construction = value.parse()?,
            "trace" => self.trace = value.parse()?,
            other => return Err(CliError::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Sorted `key=value` lines; the output path is left out so that moving
    /// an output does not change its hash.
    pub fn canonical(&self) -> String {
        let mut m = BTreeMap::new();
        m.insert("construction", self.construction.to_string());
        m.insert("lambda", format!("{:.16e}", self.lambda));
        m.insert("lattice", self.lattice.to_string());
        m.insert(
            "nt",
            self.n_steps
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        m.insert("program", self.program.to_string());
        m.insert("seed", self.seed.to_string());
        m.insert(
            "shots",
            self.shots.map_or("exact".to_string(), |n| n.to_string()),
        );
        m.insert("threshold", format!("{:.16e}", self.threshold));
        m.insert("trace", self.trace.to_string());
        m.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 over the canonical form and the contents of referenced files.
    pub fn hash(&self) -> Result<String, CliError> {
        let mut h = Sha256::new();
        h.update(self.canonical().as_bytes());
        if let LatticeSpec::File(p) = &self.lattice {
            h.update(read(p)?.as_bytes());
        }
        if let ProgramSpec::File(p) = &self.program {
            h.update(read(p)?.as_bytes());
        }
        Ok(hex::encode(h.finalize()))
    }

    pub fn load_lattice(&self) -> Result<Lattice, CliError> {
        Ok(match &self.lattice {
            LatticeSpec::Cross => Lattice::cross(),
            LatticeSpec::Rect(w, h) => Lattice::rect(*w, *h)?,
            LatticeSpec::File(p) => Lattice::from_text(&read(p)?)?,
        })
    }

    pub fn load_program(&self, lattice: &Lattice) -> Result<LoopProgram, CliError> {
        let program = match &self.program {
            ProgramSpec::StaircaseDefault => LoopProgram::default_staircase(lattice)?,
            ProgramSpec::Empty => LoopProgram::default(),
            ProgramSpec::File(p) => LoopProgram::from_text(&read(p)?)?,
        };
        program.validate(lattice)?;
        Ok(program)
    }

    /// The single `n_T` of commands that do not sweep.
    pub fn single_n_steps(&self) -> Result<usize, CliError> {
        match self.n_steps.as_slice() {
            [n] => Ok(*n),
            _ => Err(CliError::Config("this command takes exactly one nt value".into())),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}
