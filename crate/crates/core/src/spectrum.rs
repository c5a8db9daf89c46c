//! Positive spectrum of `H_U` from the zeros of the spectral function
//!
//! ```text
//! F_U(ε) = sin k [k²(cos η - m₀) + cos η + m₀] - 2k [m₁ - sin η cos k],   k = √ε
//! ```
//!
//! Roots are searched in `k` on a uniform grid, bracketed by sign changes or
//! by tangencies of `F/k`, then bisected and Newton-polished.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bc::{BoundaryCondition, EQ_TOL};
use crate::error::{Error, Result};

/// Relative root tolerance: `|F(k²)| ≤ ROOT_TOL · max(1, k³)`.
pub const ROOT_TOL: f64 = 1e-10;
/// Residual allowed between folded `δ` and its singular-family limit.
pub const SINGULAR_LIMIT_TOL: f64 = 0.02;
/// Indices below this are ignored by the regular-bound check.
pub const BURN_IN: usize = 10;
/// Roots below this `k` are zero modes and not part of the positive spectrum.
const ZERO_MODE_K: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub n: usize,
    pub k: f64,
    pub epsilon: f64,
    /// `k - nπ`.
    pub delta: f64,
    pub multiplicity: u8,
}

impl SpectralPoint {
    fn new(n: usize, k: f64, multiplicity: u8) -> Self {
        SpectralPoint {
            n,
            k,
            epsilon: k * k,
            delta: k - n as f64 * PI,
            multiplicity,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.multiplicity == 2
    }
}

/// `δ` reduced into `[-π, π]` and folded to `[0, π]`.
pub fn folded_delta(delta: f64) -> f64 {
    let wrapped = (delta + PI).rem_euclid(2.0 * PI) - PI;
    wrapped.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// `⌊k/π⌋`: the index `ℓ` with `k = ℓπ + δ̃`, `δ̃ ∈ [0, π)`.
pub fn lattice_index(k: f64) -> usize {
    (k / PI).floor().max(0.0) as usize
}

/// Parity of [`lattice_index`]; this is the parity that labels the
/// even/odd subsequences of the high-energy limits.
pub fn lattice_parity(k: f64) -> Parity {
    Parity::of(lattice_index(k))
}

/// The three β-independent numbers that `F_U` depends on.
#[derive(Debug, Clone, Copy)]
struct SpectralParams {
    gap: f64,
    sum: f64,
    m1: f64,
    sin_eta: f64,
}

impl SpectralParams {
    fn of(bc: &BoundaryCondition) -> Self {
        let (sin_eta, cos_eta) = bc.eta().sin_cos();
        SpectralParams {
            gap: cos_eta - bc.m0(),
            sum: cos_eta + bc.m0(),
            m1: bc.m1(),
            sin_eta,
        }
    }

    fn f(&self, k: f64) -> f64 {
        let (s, c) = k.sin_cos();
        s * (k * k * self.gap + self.sum) - 2.0 * k * (self.m1 - self.sin_eta * c)
    }

    fn df(&self, k: f64) -> f64 {
        let (s, c) = k.sin_cos();
        c * (k * k * self.gap + self.sum) + 2.0 * self.gap * k * s
            - 2.0 * (self.m1 - self.sin_eta * c)
            - 2.0 * k * self.sin_eta * s
    }

    /// `F(k)/k`, finite at `k = 0`.
    fn g(&self, k: f64) -> f64 {
        let (s, c) = k.sin_cos();
        let sinc = if k.abs() < 1e-4 {
            1.0 - k * k / 6.0
        } else {
            s / k
        };
        sinc * (k * k * self.gap + self.sum) - 2.0 * (self.m1 - self.sin_eta * c)
    }

    fn dg(&self, k: f64) -> f64 {
        let (s, c) = k.sin_cos();
        let (sinc, dsinc) = if k.abs() < 1e-4 {
            (1.0 - k * k / 6.0, -k / 3.0)
        } else {
            (s / k, (k * c - s) / (k * k))
        };
        dsinc * (k * k * self.gap + self.sum) + sinc * 2.0 * self.gap * k - 2.0 * self.sin_eta * s
    }
}

/// `F_U(ε)` for `ε > 0`.
pub fn spectral_function(bc: &BoundaryCondition, epsilon: f64) -> f64 {
    SpectralParams::of(bc).f(epsilon.sqrt())
}

/// `F_U` as a function of the wave number.
pub fn spectral_function_k(bc: &BoundaryCondition, k: f64) -> f64 {
    SpectralParams::of(bc).f(k)
}

/// `dF_U/dk`.
pub fn spectral_derivative_k(bc: &BoundaryCondition, k: f64) -> f64 {
    SpectralParams::of(bc).df(k)
}

/// Coefficients of `F_U = a k² + b k + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn spectral_coeffs(bc: &BoundaryCondition, k: f64) -> SpectralCoeffs {
    let p = SpectralParams::of(bc);
    let (s, c) = k.sin_cos();
    SpectralCoeffs {
        a: s * p.gap,
        b: -2.0 * (p.m1 - p.sin_eta * c),
        c: s * p.sum,
    }
}

pub fn root_tolerance(k: f64) -> f64 {
    ROOT_TOL * k.powi(3).max(1.0)
}

/// `|F|` below which an extremum of `F/k` counts as a double root.
fn tangency_tolerance(k: f64) -> f64 {
    ROOT_TOL * (k * k).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Bracket width at which bisection stops.
    pub bisection_tol: f64,
    /// Grid step of the bracketing scan.
    pub step: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            bisection_tol: 1e-13,
            step: PI / 64.0,
        }
    }
}

pub fn find_wavenumbers(bc: &BoundaryCondition, n_max: usize) -> Result<Vec<SpectralPoint>> {
    find_wavenumbers_with(bc, n_max, &SpectrumOptions::default())
}

pub fn find_wavenumbers_with(
    bc: &BoundaryCondition,
    n_max: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<SpectralPoint>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if !(opts.step > 0.0 && opts.bisection_tol > 0.0) {
        return Err(Error::InvalidArgument(
            "root-search step and tolerance must be positive".into(),
        ));
    }
    let params = SpectralParams::of(bc);
    let gap = params.gap.abs();
    let step = if gap > 0.0 && gap < 1e-6 {
        opts.step / 2.0
    } else {
        opts.step
    };
    let k_max = (n_max as f64 + 3.0) * PI;
    let roots = scan_roots(&params, step, k_max, opts.bisection_tol);

    let mut points = Vec::with_capacity(n_max);
    for (k, mult) in roots {
        for _ in 0..mult {
            if points.len() == n_max {
                break;
            }
            points.push(SpectralPoint::new(points.len() + 1, k, mult));
        }
    }
    if points.len() < n_max {
        return Err(Error::IncompleteSpectrum {
            requested: n_max,
            k_max,
            found: points,
        });
    }
    Ok(points)
}

/// All positive roots of `F` in `(0, k_max]` with multiplicity, sorted.
fn scan_roots(p: &SpectralParams, step: f64, k_max: f64, tol: f64) -> Vec<(f64, u8)> {
    let n_grid = (k_max / step).ceil() as usize;
    // k = 0 is always a zero of F; the first node sits just off it
    let ks: Vec<f64> = (0..=n_grid)
        .map(|j| if j == 0 { step * 1e-6 } else { j as f64 * step })
        .collect();
    let gs: Vec<f64> = ks.iter().map(|&k| p.g(k)).collect();

    let mut roots: Vec<(f64, u8)> = Vec::new();
    for j in 0..n_grid {
        if gs[j] * gs[j + 1] < 0.0 {
            roots.push((bisect_polish(p, ks[j], ks[j + 1], tol), 1));
        }
    }

    let mut extrema: Vec<f64> = Vec::new();
    for j in 1..n_grid {
        let (a, b, c) = (gs[j - 1], gs[j], gs[j + 1]);
        if b == 0.0 {
            if a * c < 0.0 {
                roots.push((ks[j], 1));
                continue;
            }
            match extremum(p, ks[j - 1], ks[j + 1], tol) {
                Some(ke) if (ke * p.g(ke)).abs() <= tangency_tolerance(ke) => {
                    if !seen(&extrema, ke) {
                        extrema.push(ke);
                        roots.push((ke, 2));
                    }
                }
                _ => roots.push((ks[j], 1)),
            }
            continue;
        }
        let same_sign = a * b > 0.0 && b * c > 0.0;
        if !(same_sign && b.abs() <= a.abs() && b.abs() <= c.abs()) {
            continue;
        }
        let Some(ke) = extremum(p, ks[j - 1], ks[j + 1], tol) else {
            continue;
        };
        if seen(&extrema, ke) {
            continue;
        }
        extrema.push(ke);
        let ge = p.g(ke);
        if (ke * ge).abs() <= tangency_tolerance(ke) {
            roots.push((ke, 2));
        } else if ge * b < 0.0 {
            roots.push((bisect_polish(p, ks[j - 1], ke, tol), 1));
            roots.push((bisect_polish(p, ke, ks[j + 1], tol), 1));
        }
    }

    roots.retain(|&(k, _)| k > ZERO_MODE_K);
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    merge_tangencies(p, roots, tol)
}

/// Rounding noise can split a double root into two simple roots a hair apart,
/// or add a simple root next to a detected double one; both are folded back.
fn merge_tangencies(p: &SpectralParams, roots: Vec<(f64, u8)>, tol: f64) -> Vec<(f64, u8)> {
    const CLOSE: f64 = 1e-6;
    let mut out: Vec<(f64, u8)> = Vec::with_capacity(roots.len());
    for (k, mult) in roots {
        let Some(&(prev, prev_mult)) = out.last() else {
            out.push((k, mult));
            continue;
        };
        if k - prev > CLOSE {
            out.push((k, mult));
            continue;
        }
        match (prev_mult, mult) {
            (1, 1) => {
                let ke = extremum(p, prev - tol, k + tol, tol).unwrap_or(0.5 * (prev + k));
                if (ke * p.g(ke)).abs() <= tangency_tolerance(ke) {
                    out.pop();
                    out.push((ke, 2));
                } else {
                    out.push((k, mult));
                }
            }
            (2, _) => {}
            (_, 2) => {
                out.pop();
                out.push((k, 2));
            }
            _ => out.push((k, mult)),
        }
    }
    out
}

fn seen(extrema: &[f64], k: f64) -> bool {
    extrema.iter().any(|&e| (e - k).abs() < 1e-9)
}

/// Bisection on `F/k` followed by Newton steps on `F`.
fn bisect_polish(p: &SpectralParams, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut g_lo = p.g(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = p.g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (lo, hi);
    let mut k = 0.5 * (lo + hi);
    let mut fk = p.f(k).abs();
    for _ in 0..3 {
        let d = p.df(k);
        if d == 0.0 {
            break;
        }
        let next = k - p.f(k) / d;
        if !(a - tol..=b + tol).contains(&next) {
            break;
        }
        let fn_ = p.f(next).abs();
        if fn_ >= fk {
            break;
        }
        k = next;
        fk = fn_;
    }
    k
}

/// Location of the extremum of `F/k` inside `[lo, hi]`, by bisection on its derivative.
fn extremum(p: &SpectralParams, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut d_lo = p.dg(lo);
    let d_hi = p.dg(hi);
    if d_lo == 0.0 {
        return Some(lo);
    }
    if d_hi == 0.0 {
        return Some(hi);
    }
    if d_lo * d_hi > 0.0 {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d_mid = p.dg(mid);
        if d_mid == 0.0 {
            return Some(mid);
        }
        if (d_mid < 0.0) == (d_lo < 0.0) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticKind {
    ExactNpi,
    SingularEvenOdd,
    RegularBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub kind: AsymptoticKind,
    /// Limit of folded `δ_{2n}`.
    pub even_limit: Option<f64>,
    /// Limit of folded `δ_{2n-1}`.
    pub odd_limit: Option<f64>,
    /// `C` in `|sin δ_n| ≤ C / k_n`.
    pub bound_constant: Option<f64>,
}

impl AsymptoticPrediction {
    /// Predicted folded `δ` for indices of the given parity.
    pub fn limit(&self, parity: Parity) -> Option<f64> {
        match parity {
            Parity::Even => self.even_limit,
            Parity::Odd => self.odd_limit,
        }
    }
}

pub fn asymptotic_prediction(bc: &BoundaryCondition) -> AsymptoticPrediction {
    if bc.eta().abs() <= EQ_TOL && bc.m1().abs() <= EQ_TOL {
        return AsymptoticPrediction {
            kind: AsymptoticKind::ExactNpi,
            even_limit: Some(0.0),
            odd_limit: Some(0.0),
            bound_constant: None,
        };
    }
    if bc.is_singular() {
        let ratio = (bc.m1() / bc.eta().sin()).clamp(-1.0, 1.0);
        return AsymptoticPrediction {
            kind: AsymptoticKind::SingularEvenOdd,
            even_limit: Some(ratio.acos()),
            odd_limit: Some((-ratio).acos()),
            bound_constant: None,
        };
    }
    AsymptoticPrediction {
        kind: AsymptoticKind::RegularBound,
        even_limit: None,
        odd_limit: None,
        bound_constant: Some(6.0 / bc.singular_gap()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub prediction: AsymptoticPrediction,
    /// Exact family: `max |δ_n|`.
    pub max_exact_residual: f64,
    /// Regular family: `max |sin δ_n| k_n / C` past the burn-in (must stay ≤ 1).
    pub max_bound_ratio: f64,
    /// Singular family: last-quartile `max | |δ_{2n}| - even_limit |`.
    pub even_residual: f64,
    /// Singular family: last-quartile `max | |δ_{2n-1}| - odd_limit |`.
    pub odd_residual: f64,
}

/// Checks a computed spectrum against its predicted high-energy behaviour.
pub fn check_asymptotics(
    bc: &BoundaryCondition,
    points: &[SpectralPoint],
) -> Result<AsymptoticsReport> {
    if points.len() < 40 {
        return Err(Error::InvalidArgument(format!(
            "asymptotic check needs at least 40 spectral points, got {}",
            points.len()
        )));
    }
    let prediction = asymptotic_prediction(bc);
    let mut report = AsymptoticsReport {
        prediction,
        max_exact_residual: 0.0,
        max_bound_ratio: 0.0,
        even_residual: 0.0,
        odd_residual: 0.0,
    };
    match prediction.kind {
        AsymptoticKind::ExactNpi => {
            for pt in points {
                let r = pt.delta.abs();
                if r > 1e-9 {
                    return Err(Error::AsymptoticsViolation {
                        n: pt.n,
                        detail: format!("expected k_n = nπ, got δ_n = {}", pt.delta),
                    });
                }
                report.max_exact_residual = report.max_exact_residual.max(r);
            }
        }
        AsymptoticKind::RegularBound => {
            let c = prediction.bound_constant.unwrap_or(f64::INFINITY);
            for pt in points.iter().filter(|p| p.n >= BURN_IN) {
                let ratio = pt.delta.sin().abs() * pt.k / c;
                if ratio > 1.0 + 1e-9 {
                    return Err(Error::AsymptoticsViolation {
                        n: pt.n,
                        detail: format!(
                            "|sin δ_n| = {} exceeds {c}/k_n = {}",
                            pt.delta.sin().abs(),
                            c / pt.k
                        ),
                    });
                }
                report.max_bound_ratio = report.max_bound_ratio.max(ratio);
            }
        }
        AsymptoticKind::SingularEvenOdd => {
            let len = points.len();
            let q3 = len * 3 / 4;
            let q2 = len / 2;
            for parity in [Parity::Even, Parity::Odd] {
                let target = prediction.limit(parity).unwrap_or(0.0);
                let residual = |pts: &[SpectralPoint]| {
                    pts.iter()
                        .filter(|p| Parity::of(p.n) == parity)
                        .map(|p| (folded_delta(p.delta) - target).abs())
                        .fold(0.0, f64::max)
                };
                let last = residual(&points[q3..]);
                let previous = residual(&points[q2..q3]);
                let worst_n = points[q3..]
                    .iter()
                    .filter(|p| Parity::of(p.n) == parity)
                    .max_by(|a, b| {
                        (folded_delta(a.delta) - target)
                            .abs()
                            .total_cmp(&(folded_delta(b.delta) - target).abs())
                    })
                    .map_or(len, |p| p.n);
                if last >= SINGULAR_LIMIT_TOL {
                    return Err(Error::AsymptoticsViolation {
                        n: worst_n,
                        detail: format!(
                            "{} residual {last} not below {SINGULAR_LIMIT_TOL}",
                            parity.as_str()
                        ),
                    });
                }
                if last > previous + 1e-12 {
                    return Err(Error::AsymptoticsViolation {
                        n: worst_n,
                        detail: format!(
                            "{} residual grew from {previous} to {last}",
                            parity.as_str()
                        ),
                    });
                }
                match parity {
                    Parity::Even => report.even_residual = last,
                    Parity::Odd => report.odd_residual = last,
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

    #[test]
    fn dirichlet_spectral_function_is_two_sin_k() {
        let bc = BoundaryCondition::dirichlet();
        for k in [0.3, 1.0, 2.5, 7.0, 31.0] {
            assert_abs_diff_eq!(
                spectral_function(&bc, k * k),
                2.0 * f64::sin(k),
                epsilon = 1e-12
            );
        }
        assert!(spectral_function(&bc, PI * PI).abs() < 1e-14);
    }

    #[test]
    fn periodic_spectral_function_is_tangent_at_two_pi() {
        let bc = BoundaryCondition::periodic();
        for k in [0.5, 3.0, 9.0] {
            assert_abs_diff_eq!(
                spectral_function_k(&bc, k),
                -2.0 * k * (1.0 - f64::cos(k)),
                epsilon = 1e-12
            );
        }
        assert!(spectral_function(&bc, TAU * TAU).abs() < 1e-12);
        // central difference, h = 1e-6
        let h = 1e-6;
        let d = (spectral_function_k(&bc, TAU + h) - spectral_function_k(&bc, TAU - h)) / (2.0 * h);
        assert!(d.abs() < 1e-8);
        assert!(spectral_derivative_k(&bc, TAU).abs() < 1e-12);
    }

    #[test]
    fn exact_family_vanishes_on_lattice() {
        for (m0, beta) in [(1.0, 0.0), (-1.0, 0.0), (0.3, 1.0), (-0.7, 4.0)] {
            let bc = BoundaryCondition::new(0.0, m0, 0.0, beta).unwrap();
            for n in 1..20 {
                let k = n as f64 * PI;
                assert!(
                    spectral_function_k(&bc, k).abs() <= root_tolerance(k),
                    "m0={m0} n={n}"
                );
            }
        }
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let bc = BoundaryCondition::new(1.1, 0.3, -0.4, 2.0).unwrap();
        for k in [0.7, 3.3, 12.0, 40.5] {
            let h = 1e-6;
            let fd =
                (spectral_function_k(&bc, k + h) - spectral_function_k(&bc, k - h)) / (2.0 * h);
            assert_abs_diff_eq!(spectral_derivative_k(&bc, k), fd, epsilon = 1e-5 * k * k);
        }
    }

    #[test]
    fn coeffs_examples() {
        let sing = BoundaryCondition::new(1.0, 1f64.cos(), 0.2, 0.0).unwrap();
        for k in [0.4, 2.0, 17.0] {
            assert!(spectral_coeffs(&sing, k).a.abs() < 1e-15);
        }
        let k = 1.3;
        let d = spectral_coeffs(&BoundaryCondition::dirichlet(), k);
        assert_eq!((d.a, d.b), (0.0, 0.0));
        assert_abs_diff_eq!(d.c, 2.0 * f64::sin(k), epsilon = 1e-15);
        let n = spectral_coeffs(&BoundaryCondition::neumann(), k);
        assert_abs_diff_eq!(n.a, 2.0 * f64::sin(k), epsilon = 1e-15);
        assert_abs_diff_eq!(n.b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.c, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dirichlet_roots_are_n_pi() {
        let pts = find_wavenumbers(&BoundaryCondition::dirichlet(), 5).unwrap();
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.n, i + 1);
            assert_abs_diff_eq!(p.k, (i + 1) as f64 * PI, epsilon = 1e-10);
            assert_eq!(p.multiplicity, 1);
            assert_eq!(p.epsilon, p.k * p.k);
        }
    }

    #[test]
    fn periodic_roots_are_double() {
        let pts = find_wavenumbers(&BoundaryCondition::periodic(), 4).unwrap();
        let expected = [TAU, TAU, 2.0 * TAU, 2.0 * TAU];
        for (p, e) in pts.iter().zip(expected) {
            assert_abs_diff_eq!(p.k, e, epsilon = 1e-7);
            assert_eq!(p.multiplicity, 2);
        }
        let anti = find_wavenumbers(&BoundaryCondition::antiperiodic(), 4).unwrap();
        let expected = [PI, PI, 3.0 * PI, 3.0 * PI];
        for (p, e) in anti.iter().zip(expected) {
            assert_abs_diff_eq!(p.k, e, epsilon = 1e-7);
            assert_eq!(p.multiplicity, 2);
        }
    }

    #[test]
    fn pseudo_periodic_roots_are_momentum_lattice() {
        let pts = find_wavenumbers(&BoundaryCondition::pseudo_periodic(FRAC_PI_2), 4).unwrap();
        let expected = [0.5 * PI, 1.5 * PI, 2.5 * PI, 3.5 * PI];
        for (p, e) in pts.iter().zip(expected) {
            assert_abs_diff_eq!(p.k, e, epsilon = 1e-10);
            assert_eq!(p.multiplicity, 1);
        }
        let alpha = 1.0;
        let pts = find_wavenumbers(&BoundaryCondition::pseudo_periodic(alpha), 6).unwrap();
        let expected = [
            alpha,
            TAU - alpha,
            TAU + alpha,
            2.0 * TAU - alpha,
            2.0 * TAU + alpha,
            3.0 * TAU - alpha,
        ];
        for (p, e) in pts.iter().zip(expected) {
            assert_abs_diff_eq!(p.k, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn near_periodic_pairs_are_resolved() {
        // roots at 2πm ± arccos(m1) with arccos(m1) ≈ 0.0045
        let bc = BoundaryCondition::new(FRAC_PI_2, 0.0, 0.99999, 0.0).unwrap();
        let pts = find_wavenumbers(&bc, 7).unwrap();
        let a = 0.99999f64.acos();
        let expected = [
            a,
            TAU - a,
            TAU + a,
            2.0 * TAU - a,
            2.0 * TAU + a,
            3.0 * TAU - a,
            3.0 * TAU + a,
        ];
        assert_eq!(pts.iter().filter(|p| p.multiplicity == 2).count(), 0);
        for (p, e) in pts.iter().zip(expected) {
            assert_abs_diff_eq!(p.k, e, epsilon = 1e-9);
        }
    }

    #[test]
    fn asymptotic_prediction_examples() {
        let q = asymptotic_prediction(&BoundaryCondition::quasi_periodic(2.0));
        assert_eq!(q.kind, AsymptoticKind::SingularEvenOdd);
        assert_abs_diff_eq!(q.even_limit.unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(q.odd_limit.unwrap(), FRAC_PI_2, epsilon = 1e-15);

        let m1 = 0.37;
        let p = asymptotic_prediction(&BoundaryCondition::new(FRAC_PI_2, 0.0, m1, 0.0).unwrap());
        assert_abs_diff_eq!(p.even_limit.unwrap(), m1.acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.odd_limit.unwrap(), (-m1).acos(), epsilon = 1e-15);

        assert_eq!(
            asymptotic_prediction(&BoundaryCondition::dirichlet()).kind,
            AsymptoticKind::ExactNpi
        );
        let r = asymptotic_prediction(&BoundaryCondition::new(FRAC_PI_4, 0.2, 0.5, 1.0).unwrap());
        assert_eq!(r.kind, AsymptoticKind::RegularBound);
        assert_abs_diff_eq!(
            r.bound_constant.unwrap(),
            6.0 / (FRAC_PI_4.cos() - 0.2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn check_asymptotics_examples() {
        let d = BoundaryCondition::dirichlet();
        let rep = check_asymptotics(&d, &find_wavenumbers(&d, 50).unwrap()).unwrap();
        assert!(rep.max_exact_residual <= 1e-10);

        let bc = BoundaryCondition::new(FRAC_PI_2, 0.0, 0.5, 0.0).unwrap();
        let rep = check_asymptotics(&bc, &find_wavenumbers(&bc, 50).unwrap()).unwrap();
        assert!(
            rep.even_residual < 1e-9 && rep.odd_residual < 1e-9,
            "{rep:?}"
        );

        let bc = BoundaryCondition::new(FRAC_PI_4, FRAC_PI_4.cos(), 0.3, 0.0).unwrap();
        let rep = check_asymptotics(&bc, &find_wavenumbers(&bc, 60).unwrap()).unwrap();
        assert!(
            rep.even_residual < 0.02 && rep.odd_residual < 0.02,
            "{rep:?}"
        );

        let short = find_wavenumbers(&d, 10).unwrap();
        assert!(matches!(
            check_asymptotics(&d, &short),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn asymptotics_violation_is_reported() {
        // a Dirichlet-like spectrum checked against the quasi-periodic prediction
        let pts = find_wavenumbers(&BoundaryCondition::dirichlet(), 40).unwrap();
        let err = check_asymptotics(&BoundaryCondition::quasi_periodic(0.0), &pts).unwrap_err();
        assert!(matches!(err, Error::AsymptoticsViolation { .. }));
    }

    #[test]
    fn lattice_parity_and_fold() {
        assert_eq!(lattice_index(0.5 * PI), 0);
        assert_eq!(lattice_parity(2.5 * PI), Parity::Even);
        assert_eq!(lattice_parity(3.2 * PI), Parity::Odd);
        assert_abs_diff_eq!(folded_delta(-2.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(folded_delta(2.0 * PI - 0.3), 0.3, epsilon = 1e-14);
    }

    #[test]
    fn incomplete_spectrum_error_carries_partial_roots() {
        let bc = BoundaryCondition::new(0.9, -0.2, 0.35, 0.0).unwrap();
        assert!(matches!(
            find_wavenumbers(&bc, 0),
            Err(Error::InvalidArgument(_))
        ));
        // a grid far coarser than the root spacing misses most brackets
        let coarse = SpectrumOptions {
            step: 7.0,
            ..Default::default()
        };
        match find_wavenumbers_with(&bc, 20, &coarse) {
            Err(Error::IncompleteSpectrum {
                requested, found, ..
            }) => {
                assert_eq!(requested, 20);
                assert!(found.len() < 20);
                for p in &found {
                    assert!(spectral_function_k(&bc, p.k).abs() <= root_tolerance(p.k));
                }
            }
            other => panic!("expected incomplete spectrum, got {other:?}"),
        }
    }

    fn any_bc() -> impl Strategy<Value = BoundaryCondition> {
        (0.0..PI, 0.0..1.0f64, 0.0..TAU, 0.0..TAU).prop_map(|(eta, rho, phi, beta)| {
            let rho = rho.sqrt();
            BoundaryCondition::new(eta, rho * phi.cos(), rho * phi.sin(), beta).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spectral_function_ignores_beta(bc in any_bc(), beta in 0.0..TAU, eps in 0.01..2000.0f64) {
            let other = BoundaryCondition::new(bc.eta(), bc.m0(), bc.m1(), beta).unwrap();
            prop_assert_eq!(spectral_function(&bc, eps), spectral_function(&other, eps));
        }

        #[test]
        fn coeff_decomposition_matches(bc in any_bc(), k in 0.01..300.0f64) {
            let c = spectral_coeffs(&bc, k);
            let f = spectral_function_k(&bc, k);
            let lhs = c.a * k * k + c.b * k + c.c;
            prop_assert!((lhs - f).abs() <= 1e-12 * (1.0 + f.abs()).max(k * k));
        }

        #[test]
        fn computed_roots_satisfy_invariants(bc in any_bc()) {
            let pts = find_wavenumbers(&bc, 30).unwrap();
            prop_assert_eq!(pts.len(), 30);
            for (i, p) in pts.iter().enumerate() {
                prop_assert_eq!(p.n, i + 1);
                prop_assert_eq!(p.epsilon, p.k * p.k);
                prop_assert!(spectral_function_k(&bc, p.k).abs() <= root_tolerance(p.k));
                if p.multiplicity == 2 {
                    prop_assert!(spectral_derivative_k(&bc, p.k).abs() <= root_tolerance(p.k) * p.k.powi(2));
                }
                // an extra low-lying root shifts the count by one, so |δ_n| can exceed π
                prop_assert!(p.delta.abs() <= 2.0 * PI + 1e-9, "delta {} at n {}", p.delta, p.n);
            }
            for w in pts.windows(2) {
                prop_assert!(w[1].k >= w[0].k);
                if w[1].k == w[0].k {
                    prop_assert_eq!(w[0].multiplicity, 2);
                }
            }
        }
    }

    /// Counts sign changes of `F` on a fine grid as an independent check
    /// that no simple root was skipped.
    #[test]
    fn root_count_matches_fine_sign_scan() {
        for bc in [
            BoundaryCondition::new(0.4, 0.1, 0.6, 1.0).unwrap(),
            BoundaryCondition::new(2.8, -0.9, 0.2, 0.0).unwrap(),
            BoundaryCondition::new(1.2, 1.2f64.cos() + 1e-3, 0.1, 0.0).unwrap(),
            BoundaryCondition::robin(3.5),
        ] {
            let pts = find_wavenumbers(&bc, 41).unwrap();
            let k_hi = 0.5 * (pts[39].k + pts[40].k);
            let n = 400_000;
            let mut count = 0;
            let mut prev = spectral_function_k(&bc, 1e-4);
            for j in 1..=n {
                let k = 1e-4 + (k_hi - 1e-4) * j as f64 / n as f64;
                let cur = spectral_function_k(&bc, k);
                if prev * cur < 0.0 {
                    count += 1;
                }
                prev = cur;
            }
            assert_eq!(count, 40, "{bc}");
        }
    }
}
