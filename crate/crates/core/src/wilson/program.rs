//! Stroboscopic loop programs: alternating spatial loops and (modified)
//! time evolutions.
//!
//! Steps are listed in the order they act on a state, so the program
//! `[S1, T1, S2, T2]` represents the operator `T2 S2 T1 S1`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LinkId};

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Product of `sigma_3` over a closed chain of links.
    Spatial(Vec<LinkId>),
    /// `exp(-i tau (H + sum_m 2 sigma_1(e_m)))`: temporal plaquettes on the
    /// modified links.
    Temporal { tau: f64, modified: Vec<LinkId> },
    /// Plain `exp(-i tau H)`.
    FreeEvolve { tau: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LoopProgram {
    pub steps: Vec<Step>,
}

impl LoopProgram {
    pub fn new(steps: Vec<Step>) -> Self {
        LoopProgram { steps }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Staircase rising through the column of plaquettes at `x`, starting
    /// at row `y0`: each spatial plaquette is followed by a temporal step
    /// on its top link, the link it shares with the next plaquette up.
    pub fn staircase(lattice: &Lattice, x: usize, y0: usize, slices: usize, tau: f64) -> Result<Self> {
        let mut steps = Vec::new();
        for k in 0..slices {
            let p = lattice
                .plaquette_at(x, y0 + k)
                .and_then(|p| lattice.plaquette(p))
                .ok_or_else(|| {
                    Error::InvalidProgram(format!("no plaquette at ({x}, {})", y0 + k))
                })?;
            let top = p[2];
            steps.push(Step::Spatial(p.to_vec()));
            steps.push(Step::Temporal {
                tau,
                modified: vec![top],
            });
        }
        Ok(LoopProgram { steps })
    }

    /// The two-slice staircase on the central column of the cross.
    pub fn default_staircase(lattice: &Lattice) -> Result<Self> {
        LoopProgram::staircase(lattice, 1, 0, 2, 1.0)
    }

    /// Whether there is any time evolution at all.
    pub fn has_evolution(&self) -> bool {
        self.steps
            .iter()
            .any(|s| !matches!(s, Step::Spatial(_)))
    }

    /// Structural checks: links exist, spatial chains are closed, each
    /// temporal modification sits on a link of the nearest spatial step
    /// before or after it, and all times are finite.
    pub fn validate(&self, lattice: &Lattice) -> Result<()> {
        let n = lattice.n_links();
        let check_links = |links: &[LinkId], i: usize| -> Result<()> {
            match links.iter().find(|l| l.0 >= n) {
                Some(l) => Err(Error::InvalidProgram(format!(
                    "step {i}: link {l} is not on the lattice"
                ))),
                None => Ok(()),
            }
        };
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                Step::Spatial(links) => {
                    check_links(links, i)?;
                    if !lattice.is_closed_chain(links) {
                        return Err(Error::InvalidProgram(format!(
                            "step {i}: spatial chain is not closed"
                        )));
                    }
                }
                Step::Temporal { tau, modified } => {
                    check_finite(*tau, i)?;
                    check_links(modified, i)?;
                    if modified.is_empty() {
                        return Err(Error::InvalidProgram(format!(
                            "step {i}: temporal step without modified links"
                        )));
                    }
                    let frontier = self.adjacent_spatial_links(i);
                    if frontier.is_empty() {
                        return Err(Error::InvalidProgram(format!(
                            "step {i}: temporal step has no adjacent spatial step"
                        )));
                    }
                    if let Some(l) = modified.iter().find(|l| !frontier.contains(l)) {
                        return Err(Error::InvalidProgram(format!(
                            "step {i}: modified link {l} is not on an adjacent spatial loop"
                        )));
                    }
                }
                Step::FreeEvolve { tau } => check_finite(*tau, i)?,
            }
        }
        Ok(())
    }

    fn adjacent_spatial_links(&self, i: usize) -> BTreeSet<LinkId> {
        let before = self.steps[..i].iter().rev().find_map(spatial_links);
        let after = self.steps[i + 1..].iter().find_map(spatial_links);
        before
            .into_iter()
            .chain(after)
            .flat_map(|l| l.iter().copied())
            .collect()
    }

    /// Line format: `SPATIAL <l>...`, `TEMPORAL <tau> <l>...`, `EVOLVE <tau>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            match step {
                Step::Spatial(links) => {
                    let _ = writeln!(s, "SPATIAL{}", join(links));
                }
                Step::Temporal { tau, modified } => {
                    let _ = writeln!(s, "TEMPORAL {tau}{}", join(modified));
                }
                Step::FreeEvolve { tau } => {
                    let _ = writeln!(s, "EVOLVE {tau}");
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let links = |toks: &[&str]| -> Result<Vec<LinkId>> {
                toks.iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .map(LinkId)
                            .map_err(|_| Error::parse(line_no, format!("bad link {t:?}")))
                    })
                    .collect()
            };
            let tau = |t: &str| -> Result<f64> {
                t.parse()
                    .map_err(|_| Error::parse(line_no, format!("bad time {t:?}")))
            };
            let step = match tok[0] {
                "SPATIAL" => Step::Spatial(links(&tok[1..])?),
                "TEMPORAL" if tok.len() >= 3 => Step::Temporal {
                    tau: tau(tok[1])?,
                    modified: links(&tok[2..])?,
                },
                "EVOLVE" if tok.len() == 2 => Step::FreeEvolve { tau: tau(tok[1])? },
                other => return Err(Error::parse(line_no, format!("bad step {other:?}"))),
            };
            steps.push(step);
        }
        Ok(LoopProgram { steps })
    }
}

fn spatial_links(step: &Step) -> Option<&Vec<LinkId>> {
    match step {
        Step::Spatial(l) => Some(l),
        _ => None,
    }
}

fn check_finite(tau: f64, i: usize) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProgram(format!("step {i}: time {tau} is not finite")))
    }
}

fn join(links: &[LinkId]) -> String {
    links.iter().map(|l| format!(" {l}")).collect()
}
