//! Convergence studies: sweep `(z, h)`, estimate `‖E(h, z)‖`, fit the rate.

mod config;
mod report;
mod svg;

pub use config::{
    default_z_list, ExperimentConfig, GenfuncChoice, NormSettings, OutputConfig, PotentialConfig,
    PsiConfig, ReferencePolicy,
};
pub use report::{emit_csv, rates_path, read_csv, DataRow, RateRow};
pub use svg::emit_svg;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fit::{fit_power_law, RateFit};
use crate::krylov::SolverOptions;
use crate::lattice::{LatticeGrid, ReferenceGrid};
use crate::normest::{assemble_error, operator_norm, Case, ErrorOptions};

/// Closed interval of accepted slopes; `hi = ∞` for one-sided bands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn contains(&self, slope: f64) -> bool {
        slope >= self.lo && slope <= self.hi
    }
}

/// `1/θ′ = 1/θ + 1/(τ − d)`.
pub fn potential_rate(theta: f64, tau: f64, dim: usize) -> f64 {
    1.0 / (1.0 / theta + 1.0 / (tau - dim as f64))
}

/// Expected slope and acceptance band for a validated config.
pub fn expected_rate(cfg: &ExperimentConfig) -> Result<(f64, Band)> {
    Ok(match cfg.case {
        Case::Dirichlet | Case::Neumann => {
            let band = if cfg.dim == 1 {
                Band { lo: 1.8, hi: 2.2 }
            } else {
                Band { lo: 1.7, hi: 2.3 }
            };
            (2.0, band)
        }
        Case::PotentialDirichlet | Case::PotentialNeumann => {
            let spec = cfg.potential.as_ref().expect("validated").spec()?;
            let tau = cfg.genfunc.build().claimed_tau();
            let r = potential_rate(spec.theta(), tau, cfg.dim);
            (r, Band { lo: r - 0.1, hi: f64::INFINITY })
        }
        Case::PsiDirichlet | Case::PsiNeumann => {
            let g = cfg.psi.as_ref().expect("validated").build()?.gamma();
            (g, Band { lo: g - 0.2, hi: g + 0.3 })
        }
    })
}

/// One `(z, h)` estimate; `error` is set when the cell failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub z: Complex64,
    pub h: f64,
    pub norm_estimate: f64,
    pub residual_max: f64,
    pub iterations: usize,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateLine {
    pub z: Complex64,
    pub fit: Option<RateFit>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub case: Case,
    pub dim: usize,
    pub seed: u64,
    pub expected: f64,
    pub band: Band,
    pub cells: Vec<Cell>,
    pub rates: Vec<RateLine>,
}

impl RateReport {
    pub fn passed(&self) -> bool {
        !self.rates.is_empty() && self.rates.iter().all(|r| r.pass)
    }

    pub fn cells_for(&self, z: Complex64) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.z == z)
    }
}

pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    fit_power_law(points)
}

fn run_cell(cfg: &ExperimentConfig, z: Complex64, h: f64) -> Result<Cell> {
    let lattice = LatticeGrid::covering(cfg.dim, h, cfg.reference.half_length)?;
    let reference = ReferenceGrid::for_lattice(&lattice, cfg.reference.oversample)?;
    let options = ErrorOptions {
        variant: cfg.even_variant,
        potential: cfg.potential.as_ref().map(|p| p.spec()).transpose()?,
        psi: cfg.psi.as_ref().map(|p| p.build()).transpose()?,
        solver: SolverOptions::default(),
    };
    let op = assemble_error(cfg.case, lattice, reference, cfg.genfunc.build(), z, options)?;
    let est = operator_norm(&op, &cfg.norm_options())?;
    Ok(Cell {
        z,
        h,
        norm_estimate: est.value,
        residual_max: op.residual_max(),
        iterations: est.iterations,
        converged: est.converged,
        error: None,
    })
}

/// Runs the sweep in parallel; failed cells are recorded, not fatal.
pub fn run_case(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let (expected, band) = expected_rate(cfg)?;
    let zs = cfg.z_values();
    let jobs: Vec<(Complex64, f64)> = zs
        .iter()
        .flat_map(|&z| cfg.h_list.iter().map(move |&h| (z, h)))
        .collect();
    let cells: Vec<Cell> = jobs
        .par_iter()
        .map(|&(z, h)| {
            run_cell(cfg, z, h).unwrap_or_else(|e| Cell {
                z,
                h,
                norm_estimate: f64::NAN,
                residual_max: f64::NAN,
                iterations: 0,
                converged: false,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let rates = zs
        .iter()
        .map(|&z| {
            let points: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| c.z == z)
                .map(|c| (c.h, c.norm_estimate))
                .collect();
            match fit_rate(&points) {
                Ok(fit) => RateLine {
                    z,
                    fit: Some(fit),
                    error: None,
                    pass: band.contains(fit.slope),
                },
                Err(e) => RateLine {
                    z,
                    fit: None,
                    error: Some(e.to_string()),
                    pass: false,
                },
            }
        })
        .collect();
    Ok(RateReport {
        case: cfg.case,
        dim: cfg.dim,
        seed: cfg.seed,
        expected,
        band,
        cells,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_rate_formula() {
        assert!((potential_rate(1.0, 4.0, 1) - 0.75).abs() < 1e-15);
        assert!((potential_rate(0.5, 4.0, 1) - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn bands_per_case() {
        let mut cfg = ExperimentConfig::new(Case::Dirichlet, 1, vec![0.5, 0.25, 0.125]);
        assert_eq!(expected_rate(&cfg).unwrap().1, Band { lo: 1.8, hi: 2.2 });
        cfg.dim = 2;
        assert_eq!(expected_rate(&cfg).unwrap().1, Band { lo: 1.7, hi: 2.3 });
        cfg.case = Case::PsiNeumann;
        cfg.dim = 1;
        cfg.psi = Some(PsiConfig { s: 1.0, alpha: None, beta: None });
        let (g, b) = expected_rate(&cfg).unwrap();
        assert!((g - 1.0).abs() < 1e-15 && (b.lo - 0.8).abs() < 1e-15 && (b.hi - 1.3).abs() < 1e-15);
        cfg.psi = Some(PsiConfig { s: 3.0, alpha: None, beta: None });
        assert!((expected_rate(&cfg).unwrap().0 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let mut cfg = ExperimentConfig::new(Case::Dirichlet, 1, vec![0.5, 0.25, 0.125]);
        cfg.reference.half_length = 4.0;
        cfg.z_list = Some(vec![[-1.0, 0.0]]);
        cfg.seed = 3;
        let a = run_case(&cfg).unwrap();
        let b = run_case(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 3);
        assert!(a.cells.iter().all(|c| c.error.is_none() && c.norm_estimate > 0.0));
        assert!(a.rates[0].fit.is_some());
    }

    #[test]
    fn failed_cells_do_not_abort() {
        let mut cfg = ExperimentConfig::new(Case::Dirichlet, 1, vec![0.5, 0.25, 0.125]);
        cfg.reference.half_length = 4.0;
        // within the guard distance of the spectrum bottom
        cfg.z_list = Some(vec![[-1e-10, 0.0], [-1.0, 0.0]]);
        let r = run_case(&cfg).unwrap();
        assert!(r.cells_for(Complex64::new(-1e-10, 0.0)).all(|c| c.error.is_some()));
        assert!(!r.rates[0].pass && r.rates[0].error.is_some());
        assert!(r.rates[1].fit.is_some());
        assert!(!r.passed());
    }
}
