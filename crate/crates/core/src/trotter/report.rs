use std::fmt::Write as _;

use super::fit::{fit_power_law, PowerLawFit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityRow {
    pub n_steps: usize,
    pub operator_fidelity: f64,
    pub state_fidelity: f64,
}

/// Fidelity rows sorted by `n_T`, with power-law fits of both infidelity
/// series (`None` when fewer than three rows are usable).
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub rows: Vec<FidelityRow>,
    pub operator_fit: Option<PowerLawFit>,
    pub state_fit: Option<PowerLawFit>,
}

impl FidelityReport {
    pub fn new(mut rows: Vec<FidelityRow>) -> Self {
        rows.sort_by_key(|r| r.n_steps);
        let series = |f: fn(&FidelityRow) -> f64| -> Vec<(f64, f64)> {
            rows.iter()
                .map(|r| (r.n_steps as f64, 1.0 - f(r)))
                .collect()
        };
        let operator_fit = fit_power_law(&series(|r| r.operator_fidelity)).ok();
        let state_fit = fit_power_law(&series(|r| r.state_fidelity)).ok();
        FidelityReport {
            rows,
            operator_fit,
            state_fit,
        }
    }

    /// Smallest `n_T` whose state fidelity reaches `threshold`.
    pub fn min_steps_for_state(&self, threshold: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.state_fidelity >= threshold)
            .map(|r| r.n_steps)
    }

    pub fn min_steps_for_operator(&self, threshold: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.operator_fidelity >= threshold)
            .map(|r| r.n_steps)
    }

    /// CSV body: header, one row per `n_T` at 17 significant digits, and the
    /// fit summary as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_T,op_fidelity,gs_fidelity\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.16e},{:.16e}",
                r.n_steps, r.operator_fidelity, r.state_fidelity
            );
        }
        for (name, fit) in [("op", &self.operator_fit), ("gs", &self.state_fit)] {
            match fit {
                Some(f) => {
                    let _ = writeln!(
                        s,
                        "# fit {name}: exponent={:.16e} stderr={:.16e} prefactor={:.16e}",
                        f.exponent, f.std_error, f.prefactor
                    );
                }
                None => {
                    let _ = writeln!(s, "# fit {name}: unavailable (fewer than 3 usable rows)");
                }
            }
        }
        s
    }
}
