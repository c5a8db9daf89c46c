//! Wigner functions of box eigenfunctions and the `ω` weights of their classical limits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bc::BoundaryCondition;
use crate::classical::ClassicalDistribution;
use crate::eigen::{eigenstates, Eigenfunction};
use crate::error::{Error, Result};
use crate::quad;
use crate::spectrum::{
    asymptotic_prediction, find_wavenumbers_with, lattice_index, AsymptoticKind, Parity,
    SpectralPoint, SpectrumOptions,
};

/// Distance from 1/2 within which both limits must fall for a balanced sequence.
pub const BALANCE_TOL: f64 = 0.02;
/// Absolute tolerance of the quadrature oracle.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Smallest `n_max` accepted for limit estimation.
pub const MIN_SEQUENCE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalLimitConfig {
    pub p_c: f64,
}

impl Default for ClassicalLimitConfig {
    fn default() -> Self {
        ClassicalLimitConfig { p_c: 1.0 }
    }
}

impl ClassicalLimitConfig {
    /// `ħ = p_c / k` so that `ħk = p_c`.
    pub fn hbar(&self, k: f64) -> f64 {
        self.p_c / k
    }
}

/// `W(x, p)` sampled on a rectangular grid, stored row-major in `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_nodes: Vec<f64>,
    pub p_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub hbar_used: f64,
}

impl WignerGrid {
    pub fn get(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p_nodes.len() + ip]
    }

    pub fn row(&self, ix: usize) -> &[f64] {
        let np = self.p_nodes.len();
        &self.values[ix * np..(ix + 1) * np]
    }

    /// `∫ W(x_i, p) dp` by the trapezoid rule over the grid's momenta.
    pub fn p_marginal(&self, ix: usize) -> f64 {
        quad::trapezoid(&self.p_nodes, self.row(ix))
    }

    /// `∫∫ W dx dp`.
    pub fn total(&self) -> f64 {
        let marg: Vec<f64> = (0..self.x_nodes.len())
            .map(|i| self.p_marginal(i))
            .collect();
        quad::trapezoid(&self.x_nodes, &marg)
    }

    /// `∫∫ |W|` restricted to momenta in `[p_lo, p_hi]`.
    pub fn abs_mass(&self, p_lo: f64, p_hi: f64) -> f64 {
        let marg: Vec<f64> = (0..self.x_nodes.len())
            .map(|i| {
                let ys: Vec<f64> = self
                    .row(i)
                    .iter()
                    .zip(&self.p_nodes)
                    .map(|(w, &p)| {
                        if (p_lo..=p_hi).contains(&p) {
                            w.abs()
                        } else {
                            0.0
                        }
                    })
                    .collect();
                quad::trapezoid(&self.p_nodes, &ys)
            })
            .collect();
        quad::trapezoid(&self.x_nodes, &marg)
    }
}

/// `sin y / y` with `sinc(0) = 1`.
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// Triangular envelope `χ(x)(1 - 2|x|)`.
pub fn triangle(x: f64) -> f64 {
    if x.abs() <= 0.5 {
        1.0 - 2.0 * x.abs()
    } else {
        0.0
    }
}

/// `f_s(x, p) = Δ(x)/(πħ) sinc((p - sħk)(1 - 2|x|)/ħ)`.
pub fn f_s(s: f64, x: f64, p: f64, k: f64, hbar: f64) -> f64 {
    let t = triangle(x);
    if t == 0.0 {
        return 0.0;
    }
    t / (PI * hbar) * sinc((p - s * hbar * k) * t / hbar)
}

/// Closed-form `W(x, p)` of a normalized eigenfunction.
pub fn wigner_value(ef: &Eigenfunction, hbar: f64, x: f64, p: f64) -> f64 {
    let n2 = ef.norm * ef.norm;
    let cross = ef.c_plus * ef.c_minus.conj() * Complex64::from_polar(1.0, 2.0 * ef.k * x);
    (ef.c_plus.norm_sqr() * f_s(1.0, x, p, ef.k, hbar)
        + ef.c_minus.norm_sqr() * f_s(-1.0, x, p, ef.k, hbar)
        + 2.0 * cross.re * f_s(0.0, x, p, ef.k, hbar))
        / n2
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )))
    }
}

/// Closed-form Wigner function on the tensor grid `x_nodes × p_nodes`.
pub fn wigner_closed_form(
    ef: &Eigenfunction,
    hbar: f64,
    x_nodes: &[f64],
    p_nodes: &[f64],
) -> Result<WignerGrid> {
    check_hbar(hbar)?;
    let np = p_nodes.len();
    let mut values = vec![0.0; x_nodes.len() * np];
    if np > 0 {
        values
            .par_chunks_mut(np)
            .zip(x_nodes.par_iter())
            .for_each(|(row, &x)| {
                for (w, &p) in row.iter_mut().zip(p_nodes) {
                    *w = wigner_value(ef, hbar, x, p);
                }
            });
    }
    Ok(WignerGrid {
        x_nodes: x_nodes.to_vec(),
        p_nodes: p_nodes.to_vec(),
        values,
        hbar_used: hbar,
    })
}

/// `W(x, p)` from its defining integral over `y ∈ [2|x| - 1, 1 - 2|x|]`.
pub fn wigner_quadrature(ef: &Eigenfunction, hbar: f64, x: f64, p: f64) -> Result<f64> {
    check_hbar(hbar)?;
    if x.abs() > 0.5 {
        return Err(Error::OutOfBox { x });
    }
    let half = 1.0 - 2.0 * x.abs();
    if half <= 0.0 {
        return Ok(0.0);
    }
    let integrand = |y: f64| {
        let a = (x + y / 2.0).clamp(-0.5, 0.5);
        let b = (x - y / 2.0).clamp(-0.5, 0.5);
        (Complex64::from_polar(1.0, -p * y / hbar) * ef.value(a) * ef.value(b).conj()).re
    };
    let freq = p.abs() / hbar + ef.k;
    let panels = (2.0 * half * freq / PI).ceil() as usize + 4;
    let tol = QUADRATURE_TOL * 2.0 * PI * hbar;
    Ok(quad::adaptive_simpson(integrand, -half, half, tol, panels) / (2.0 * PI * hbar))
}

/// `C⁺ conj(C⁻)/N²`, the weight of the oscillating `f₀` term.
pub fn cross_coefficient(ef: &Eigenfunction) -> Complex64 {
    ef.c_plus * ef.c_minus.conj() / (ef.norm * ef.norm)
}

/// `ω = |C⁺|²/N²`, clamped into `[0, 1]`.
pub fn omega_n(ef: &Eigenfunction) -> Result<f64> {
    let raw = ef.omega_raw();
    // N² ≥ (|C⁺|² + |C⁻|²)(1 - |sin k|/k) bounds the ratio; 1 + 2/k covers k ≥ 2 only
    let bound = (1.0 + 2.0 / ef.k).max(1.0 / (1.0 - (ef.k.sin() / ef.k).abs()));
    if !(-1e-12..=bound + 1e-12).contains(&raw) {
        return Err(Error::OmegaInconsistent {
            k: ef.k,
            ratio: raw,
        });
    }
    Ok(raw.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaEntry {
    pub n: usize,
    pub k: f64,
    pub omega: f64,
    /// Parity of the lattice index (see [`parity_offset`]).
    pub parity: Parity,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaSequence {
    pub entries: Vec<OmegaEntry>,
    /// Mean over the last quartile of even entries; `None` when all are degenerate.
    pub even_limit_est: Option<f64>,
    pub odd_limit_est: Option<f64>,
    pub balanced: bool,
}

impl OmegaSequence {
    pub fn limit(&self, parity: Parity) -> Option<f64> {
        match parity {
            Parity::Even => self.even_limit_est,
            Parity::Odd => self.odd_limit_est,
        }
    }
}

/// `ω_n` for `n = 1..=n_max`, with even/odd limit estimates.
pub fn omega_sequence(bc: &BoundaryCondition, n_max: usize) -> Result<OmegaSequence> {
    omega_sequence_with(bc, n_max, &SpectrumOptions::default())
}

pub fn omega_sequence_with(
    bc: &BoundaryCondition,
    n_max: usize,
    opts: &SpectrumOptions,
) -> Result<OmegaSequence> {
    if n_max < MIN_SEQUENCE {
        return Err(Error::InvalidArgument(format!(
            "omega sequence needs n_max >= {MIN_SEQUENCE}, got {n_max}"
        )));
    }
    let points = find_wavenumbers_with(bc, n_max, opts)?;
    let entries = omega_entries(bc, &points)?;
    let start = n_max - n_max / 4;
    let estimate = |parity: Parity| {
        let tail: Vec<f64> = entries
            .iter()
            .filter(|e| e.n > start && e.parity == parity && !e.degenerate)
            .map(|e| e.omega)
            .collect();
        (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64)
    };
    let even = estimate(Parity::Even);
    let odd = estimate(Parity::Odd);
    let balanced = matches!((even, odd), (Some(e), Some(o)) if (e - 0.5).abs() <= BALANCE_TOL && (o - 0.5).abs() <= BALANCE_TOL);
    Ok(OmegaSequence {
        entries,
        even_limit_est: even,
        odd_limit_est: odd,
        balanced,
    })
}

/// `ω` and parity label for each spectral point; degenerate roots get one entry
/// per plane-wave basis vector.
pub fn omega_entries(bc: &BoundaryCondition, points: &[SpectralPoint]) -> Result<Vec<OmegaEntry>> {
    let start = points.len() - points.len() / 4;
    let swap = parity_offset(bc, &points[start..]);
    eigenstates(bc, points)?
        .into_iter()
        .map(|s| {
            Ok(OmegaEntry {
                n: s.point.n,
                k: s.point.k,
                omega: omega_n(&s.eigenfunction)?,
                parity: Parity::of(s.point.n + swap),
                degenerate: s.degenerate,
            })
        })
        .collect()
}

/// Offset (0 or 1) turning the counting index `n` into the lattice index whose
/// parity labels the even/odd limits.
///
/// The lattice index is `⌊k/π⌋` for singular conditions, where `δ` stays inside
/// `(0, π)`, and the nearest multiple of π otherwise, where `δ → 0`. The offset is
/// fixed by majority over the given tail so that both labels stay populated.
pub fn parity_offset(bc: &BoundaryCondition, tail: &[SpectralPoint]) -> usize {
    let singular = bc.is_singular();
    let agree = tail
        .iter()
        .filter(|p| {
            let lattice = if singular {
                lattice_index(p.k)
            } else {
                (p.k / PI).round() as usize
            };
            lattice % 2 == p.n % 2
        })
        .count();
    usize::from(2 * agree < tail.len())
}

/// High-energy `ω` predicted from the boundary matrix alone.
///
/// `k` is reduced to `δ = k mod π`; `parity` fixes the sign of `e^{∓ik} = ±e^{∓iδ}`.
pub fn omega_asymptotic(bc: &BoundaryCondition, k: f64, parity: Parity) -> Result<f64> {
    let delta = k.rem_euclid(PI);
    let d = Complex64::new(bc.m0(), bc.m3());
    let o = Complex64::new(bc.m2(), bc.m1());
    let e_eta = Complex64::from_polar(1.0, -bc.eta());
    let sign = parity.sign();
    let e_minus = sign * Complex64::from_polar(1.0, -delta);
    let e_plus = sign * Complex64::from_polar(1.0, delta);
    let ratio = |plus: Complex64, minus: Complex64| {
        let (a, b) = (plus.norm_sqr(), minus.norm_sqr());
        (a + b > 1e-20).then(|| a / (a + b))
    };
    ratio(d - e_eta - e_minus * o, d - e_eta - e_plus * o)
        .or_else(|| ratio(d + e_eta + e_minus * o, d + e_eta + e_plus * o))
        .ok_or(Error::UndefinedAsymptote { k })
}

/// Predicted `(ω_even, ω_odd)` limits at the asymptotic `δ` of each parity.
pub fn predicted_omega_limits(bc: &BoundaryCondition) -> Result<(f64, f64)> {
    let pred = asymptotic_prediction(bc);
    let delta = |parity| match pred.kind {
        AsymptoticKind::SingularEvenOdd => pred.limit(parity).unwrap_or(0.0),
        _ => 0.0,
    };
    Ok((
        omega_asymptotic(bc, delta(Parity::Even), Parity::Even)?,
        omega_asymptotic(bc, delta(Parity::Odd), Parity::Odd)?,
    ))
}

/// Classical limit of the Wigner functions: one distribution or an even/odd pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "limit", rename_all = "snake_case")]
pub enum ClassicalLimit {
    Balanced {
        distribution: ClassicalDistribution,
    },
    ParitySplit {
        even: ClassicalDistribution,
        odd: ClassicalDistribution,
    },
}

pub fn classical_limit_summary(
    bc: &BoundaryCondition,
    p_c: f64,
    n_max: usize,
) -> Result<ClassicalLimit> {
    if !(p_c > 0.0 && p_c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "p_c must be positive, got {p_c}"
        )));
    }
    Ok(ClassicalLimit::from_sequence(
        &omega_sequence(bc, n_max)?,
        p_c,
    ))
}

impl ClassicalLimit {
    pub fn from_sequence(seq: &OmegaSequence, p_c: f64) -> Self {
        if seq.balanced {
            return ClassicalLimit::Balanced {
                distribution: ClassicalDistribution::Mixture { omega: 0.5, p_c },
            };
        }
        // Fully degenerate spectra have no basis-independent ω; the plane-wave basis
        // splits into the two ring directions.
        let mixture = |omega: Option<f64>, fallback: f64| ClassicalDistribution::Mixture {
            omega: omega.unwrap_or(fallback),
            p_c,
        };
        ClassicalLimit::ParitySplit {
            even: mixture(seq.even_limit_est, 1.0),
            odd: mixture(seq.odd_limit_est, 0.0),
        }
    }
}
