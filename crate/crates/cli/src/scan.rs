//! Parameter scans of `k_n` or `ω_n` over the disk `m0² + m1² ≤ 1`.

use boxwig_core::eigen::eigenstates;
use boxwig_core::spectrum::{
    find_wavenumbers_with, lattice_index, lattice_parity, SpectrumOptions,
};
use boxwig_core::wigner::{omega_n, predicted_omega_limits};
use boxwig_core::{spectrum, BoundaryCondition, Parity, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default Cartesian resolution per axis.
pub const DEFAULT_RESOLUTION: usize = 129;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Wave number `k_n`.
    K,
    /// Weight `ω_n`.
    Omega,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub eta: f64,
    /// Nodes per axis of the Cartesian grid on `[-1, 1]²`.
    pub resolution: usize,
    pub betas: Vec<f64>,
    pub target: Target,
    pub n: usize,
    #[serde(skip)]
    pub options: SpectrumOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub m0: f64,
    pub m1: f64,
    pub beta: f64,
    /// NaN when the point failed.
    pub value: f64,
    pub error: Option<String>,
    /// Asymptotic prediction on the singular circle, NaN elsewhere.
    pub predicted: f64,
}

/// Grid nodes inside the closed unit disk, row-major in `m0`.
pub fn disk_points(resolution: usize) -> Vec<(f64, f64)> {
    let axis = |i: usize| {
        if resolution == 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (resolution - 1) as f64
        }
    };
    (0..resolution)
        .flat_map(|i| (0..resolution).map(move |j| (axis(i), axis(j))))
        .filter(|&(a, b)| a * a + b * b <= 1.0 + 1e-12)
        .collect()
}

fn evaluate(spec: &ScanSpec, bc: &BoundaryCondition) -> Result<(f64, f64)> {
    let points = find_wavenumbers_with(bc, spec.n, &spec.options)?;
    let k = points[spec.n - 1].k;
    let singular = bc.is_singular();
    match spec.target {
        Target::K => {
            let predicted = if singular {
                let ell = lattice_index(k);
                let pred = spectrum::asymptotic_prediction(bc);
                ell as f64 * std::f64::consts::PI + pred.limit(Parity::of(ell)).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            Ok((k, predicted))
        }
        Target::Omega => {
            let states = eigenstates(bc, &points)?;
            let omega = omega_n(&states[spec.n - 1].eigenfunction)?;
            // periodic and antiperiodic have no asymptotic prediction
            let predicted = match predicted_omega_limits(bc) {
                Ok((even, odd)) if singular => match lattice_parity(k) {
                    Parity::Even => even,
                    Parity::Odd => odd,
                },
                _ => f64::NAN,
            };
            Ok((omega, predicted))
        }
    }
}

/// One row per (β, grid point), β outermost; per-point failures become NaN rows.
pub fn run_scan(spec: &ScanSpec) -> Vec<ScanRow> {
    if spec.n == 0 {
        return Vec::new();
    }
    let grid = disk_points(spec.resolution);
    let jobs: Vec<(f64, f64, f64)> = spec
        .betas
        .iter()
        .flat_map(|&beta| grid.iter().map(move |&(m0, m1)| (m0, m1, beta)))
        .collect();
    jobs.par_iter()
        .map(|&(m0, m1, beta)| {
            let result =
                BoundaryCondition::new(spec.eta, m0, m1, beta).and_then(|bc| evaluate(spec, &bc));
            match result {
                Ok((value, predicted)) => ScanRow {
                    m0,
                    m1,
                    beta,
                    value,
                    error: None,
                    predicted,
                },
                Err(e) => ScanRow {
                    m0,
                    m1,
                    beta,
                    value: f64::NAN,
                    error: Some(e.to_string()),
                    predicted: f64::NAN,
                },
            }
        })
        .collect()
}
