//! Normalized eigenfunctions `ψ(x) = (C⁺e^{ikx} + C⁻e^{-ikx})/N` on the unit box.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bc::{boundary_residual, matrix_of, BoundaryCondition, BoundaryValues};
use crate::error::{Error, Result};
use crate::mat2::{C2, I, M2, ZERO};
use crate::quad;
use crate::spectrum::{root_tolerance, spectral_function_k, SpectralPoint};

/// Slack allowed when testing `|x| ≤ 1/2`.
const BOX_SLACK: f64 = 1e-12;
/// Relative scale below which the coefficient vector is treated as zero.
const DEGENERATE_SCALE: f64 = 1e-10;
/// Relative scale below which the boundary system counts as the zero matrix.
const RANK_ZERO_SCALE: f64 = 1e-8;
/// Boundary residual accepted for a basis candidate.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenfunction {
    pub k: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub norm: f64,
    pub bc: BoundaryCondition,
}

impl Eigenfunction {
    /// Eigenfunction for a simple root `k` of the spectral function.
    pub fn new(bc: &BoundaryCondition, k: f64) -> Result<Self> {
        let (c_plus, c_minus) = coefficients(bc, k)?;
        Self::from_coefficients(bc, k, c_plus, c_minus)
    }

    /// Wraps raw coefficients, computing the normalization.
    pub fn from_coefficients(
        bc: &BoundaryCondition,
        k: f64,
        c_plus: Complex64,
        c_minus: Complex64,
    ) -> Result<Self> {
        let norm = normalization(c_plus, c_minus, k)?;
        Ok(Eigenfunction {
            k,
            c_plus,
            c_minus,
            norm,
            bc: *bc,
        })
    }

    /// `ψ(x)`; errors outside the box.
    pub fn evaluate(&self, x: f64) -> Result<Complex64> {
        check_in_box(x)?;
        Ok(self.value(x))
    }

    /// `ψ(x)` without the domain check.
    pub fn value(&self, x: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, self.k * x);
        (self.c_plus * e + self.c_minus * e.conj()) / self.norm
    }

    /// `ψ'(x)` without the domain check.
    pub fn derivative(&self, x: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, self.k * x);
        I * self.k * (self.c_plus * e - self.c_minus * e.conj()) / self.norm
    }

    pub fn boundary_values(&self) -> BoundaryValues {
        BoundaryValues::of_function(|x| self.value(x), |x| self.derivative(x))
    }

    pub fn boundary_residual(&self) -> f64 {
        boundary_residual(&self.bc, &self.boundary_values())
    }

    /// `(|C⁺|² + |C⁻|²)/N²`, which tends to 1 as `k` grows.
    pub fn direct_weight(&self) -> f64 {
        (self.c_plus.norm_sqr() + self.c_minus.norm_sqr()) / (self.norm * self.norm)
    }

    /// Raw `|C⁺|²/N²`.
    pub fn omega_raw(&self) -> f64 {
        self.c_plus.norm_sqr() / (self.norm * self.norm)
    }

    /// `∫|ψ|²` by composite Gauss–Legendre.
    pub fn norm_by_quadrature(&self) -> f64 {
        let panels = quad::panels_for_frequency(2.0 * self.k, 1.0);
        quad::gauss_legendre(|x| self.value(x).norm_sqr(), -0.5, 0.5, panels)
    }
}

/// `⟨a, b⟩ = ∫ conj(a) b` by composite Gauss–Legendre.
pub fn inner_product(a: &Eigenfunction, b: &Eigenfunction) -> Complex64 {
    let panels = quad::panels_for_frequency(a.k + b.k, 1.0);
    let re = quad::gauss_legendre(|x| (a.value(x).conj() * b.value(x)).re, -0.5, 0.5, panels);
    let im = quad::gauss_legendre(|x| (a.value(x).conj() * b.value(x)).im, -0.5, 0.5, panels);
    Complex64::new(re, im)
}

fn check_in_box(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() > 0.5 + BOX_SLACK {
        Err(Error::OutOfBox { x })
    } else {
        Ok(())
    }
}

/// Closed-form `C±` for a root `k`.
pub fn raw_coefficients(bc: &BoundaryCondition, k: f64) -> (Complex64, Complex64) {
    let d = Complex64::new(bc.m0(), bc.m3());
    let o = Complex64::new(bc.m2(), bc.m1());
    let e_eta = Complex64::from_polar(1.0, -bc.eta());
    let half = Complex64::from_polar(1.0, k / 2.0);
    let full = Complex64::from_polar(1.0, k);
    let c_plus = half * ((1.0 + k) * d + (1.0 - k) * (e_eta + full.conj() * o));
    let c_minus = -half.conj() * ((1.0 - k) * d + (1.0 + k) * (e_eta + full * o));
    (c_plus, c_minus)
}

/// Boundary system `P₋ - UP₊` acting on `(C⁺, C⁻)`; its null space is the eigenspace at `k`.
pub fn boundary_system(bc: &BoundaryCondition, k: f64) -> M2 {
    let plane = |s: f64| {
        BoundaryValues::of_function(
            |x| Complex64::from_polar(1.0, s * k * x),
            |x| I * s * k * Complex64::from_polar(1.0, s * k * x),
        )
    };
    let u = matrix_of(bc);
    let col = |bv: BoundaryValues| -> C2 {
        let up = u.apply(&bv.psi_plus);
        [bv.psi_minus[0] - up[0], bv.psi_minus[1] - up[1]]
    };
    let (p, m) = (col(plane(1.0)), col(plane(-1.0)));
    [[p[0], m[0]], [p[1], m[1]]]
}

fn matrix_norm(m: &M2) -> f64 {
    m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Coefficients `(C⁺, C⁻)` of the eigenfunction at a simple root `k`.
///
/// Falls back to the null vector of the boundary system when the closed form
/// vanishes at a simple root; a vanishing system signals a degenerate root.
pub fn coefficients(bc: &BoundaryCondition, k: f64) -> Result<(Complex64, Complex64)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wave number must be positive, got {k}"
        )));
    }
    let f = spectral_function_k(bc, k);
    if f.abs() > 1e3 * root_tolerance(k) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} is not a root of the spectral function (F = {f:e})"
        )));
    }
    let (c_plus, c_minus) = raw_coefficients(bc, k);
    let scale = DEGENERATE_SCALE * (1.0 + k);
    if c_plus.norm() >= scale || c_minus.norm() >= scale {
        return Ok((c_plus, c_minus));
    }
    let m = boundary_system(bc, k);
    if matrix_norm(&m) <= RANK_ZERO_SCALE * (1.0 + k) {
        return Err(Error::DegenerateRoot { k });
    }
    let row = if m[0][0].norm() + m[0][1].norm() >= m[1][0].norm() + m[1][1].norm() {
        m[0]
    } else {
        m[1]
    };
    Ok((row[1], -row[0]))
}

/// `N = sqrt(|C⁺|² + |C⁻|² + 2 (sin k / k) Re(C⁺ conj(C⁻)))`.
pub fn normalization(c_plus: Complex64, c_minus: Complex64, k: f64) -> Result<f64> {
    let direct = c_plus.norm_sqr() + c_minus.norm_sqr();
    let norm2 = direct + 2.0 * (k.sin() / k) * (c_plus * c_minus.conj()).re;
    if !norm2.is_finite() || norm2 <= 1e-14 * direct {
        return Err(Error::NumericalDegeneracy { norm2 });
    }
    Ok(norm2.sqrt())
}

/// Orthonormal basis of a two-dimensional eigenspace.
///
/// Plane waves are used when both satisfy the boundary condition, orthogonalized
/// in `L²` if `sin k ≠ 0`.
pub fn degenerate_basis(bc: &BoundaryCondition, k: f64) -> Result<(Eigenfunction, Eigenfunction)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wave number must be positive, got {k}"
        )));
    }
    let m = boundary_system(bc, k);
    if matrix_norm(&m) > RANK_ZERO_SCALE * (1.0 + k) {
        return Err(Error::InconsistentMultiplicity { k });
    }
    let one = Complex64::new(1.0, 0.0);
    let first = Eigenfunction::from_coefficients(bc, k, one, ZERO)?;
    // e^{-ikx} minus its projection on e^{ikx}; ⟨e^{ikx}, e^{-ikx}⟩ = sin k / k.
    let overlap = Complex64::new(k.sin() / k, 0.0);
    let second = Eigenfunction::from_coefficients(bc, k, -overlap, one)?;
    for ef in [&first, &second] {
        if ef.boundary_residual() > RESIDUAL_TOL * (1.0 + k) {
            return Err(Error::InconsistentMultiplicity { k });
        }
    }
    Ok((first, second))
}

/// An eigenfunction tied to the spectral point it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenState {
    pub point: SpectralPoint,
    pub eigenfunction: Eigenfunction,
    /// `true` for members of a two-dimensional eigenspace.
    pub degenerate: bool,
}

/// Eigenfunctions for a list of spectral points.
///
/// A multiplicity-2 root appears twice in the list and receives the two
/// degenerate basis vectors in order.
pub fn eigenstates(bc: &BoundaryCondition, points: &[SpectralPoint]) -> Result<Vec<EigenState>> {
    let mut out = Vec::with_capacity(points.len());
    let mut i = 0;
    while i < points.len() {
        let p = points[i];
        let paired = points.get(i + 1).is_some_and(|q| q.k == p.k);
        if p.is_degenerate() {
            let (a, b) = degenerate_basis(bc, p.k)?;
            out.push(EigenState {
                point: p,
                eigenfunction: a,
                degenerate: true,
            });
            if paired {
                out.push(EigenState {
                    point: points[i + 1],
                    eigenfunction: b,
                    degenerate: true,
                });
                i += 1;
            }
        } else {
            let ef = match Eigenfunction::new(bc, p.k) {
                Err(Error::DegenerateRoot { .. }) => {
                    return Err(Error::InconsistentMultiplicity { k: p.k })
                }
                other => other?,
            };
            out.push(EigenState {
                point: p,
                eigenfunction: ef,
                degenerate: false,
            });
        }
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::find_wavenumbers;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn states(bc: &BoundaryCondition, n: usize) -> Vec<EigenState> {
        eigenstates(bc, &find_wavenumbers(bc, n).unwrap()).unwrap()
    }

    #[test]
    fn dirichlet_eigenfunctions_are_sines() {
        let bc = BoundaryCondition::dirichlet();
        for n in 1..=6 {
            let k = n as f64 * PI;
            let (cp, cm) = coefficients(&bc, k).unwrap();
            assert_abs_diff_eq!(cp.norm(), cm.norm(), epsilon = 1e-12 * k);
            let ef = Eigenfunction::new(&bc, k).unwrap();
            // |ψ| = √2 |sin(nπ(x + 1/2))|
            for x in [-0.5, -0.31, 0.0, 0.12, 0.5] {
                let expected = 2f64.sqrt() * (k * (x + 0.5)).sin().abs();
                assert_abs_diff_eq!(ef.evaluate(x).unwrap().norm(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pseudo_periodic_half_pi_gives_plane_waves() {
        let bc = BoundaryCondition::pseudo_periodic(FRAC_PI_2);
        for k in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
            let (cp, cm) = coefficients(&bc, k).unwrap();
            let small = cp.norm().min(cm.norm());
            let large = cp.norm().max(cm.norm());
            assert!(small <= 1e-12 * large, "k={k}: {cp} {cm}");
        }
    }

    #[test]
    fn periodic_double_roots_signal_degeneracy() {
        let bc = BoundaryCondition::periodic();
        assert!(matches!(
            coefficients(&bc, TAU),
            Err(Error::DegenerateRoot { .. })
        ));
        let (a, b) = degenerate_basis(&bc, TAU).unwrap();
        assert_eq!((a.c_plus, a.c_minus), (c(1.0), ZERO));
        assert_abs_diff_eq!(b.c_plus.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inner_product(&a, &b).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.norm_by_quadrature(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn antiperiodic_degenerate_basis() {
        let bc = BoundaryCondition::antiperiodic();
        let (a, b) = degenerate_basis(&bc, PI).unwrap();
        assert!(a.boundary_residual() <= 1e-12 && b.boundary_residual() <= 1e-12);
        assert_abs_diff_eq!(b.c_minus.norm() / b.norm, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dirichlet_is_never_degenerate() {
        let bc = BoundaryCondition::dirichlet();
        for k in [PI, 2.0 * PI, 1.3] {
            assert!(matches!(
                degenerate_basis(&bc, k),
                Err(Error::InconsistentMultiplicity { .. })
            ));
        }
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalization(c(1.0), ZERO, 3.7).unwrap(), 1.0);
        assert_abs_diff_eq!(
            normalization(c(1.0), c(1.0), PI).unwrap().powi(2),
            2.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            normalization(c(1.0), c(1.0), FRAC_PI_2).unwrap().powi(2),
            2.0 + 4.0 / PI,
            epsilon = 1e-15
        );
        assert!(matches!(
            normalization(ZERO, ZERO, 1.0),
            Err(Error::NumericalDegeneracy { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let d = Eigenfunction::new(&BoundaryCondition::dirichlet(), PI).unwrap();
        assert_abs_diff_eq!(d.evaluate(0.5).unwrap().norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.evaluate(-0.5).unwrap().norm(), 0.0, epsilon = 1e-15);
        assert_eq!(d.evaluate(0.0).unwrap(), (d.c_plus + d.c_minus) / d.norm);
        assert!(matches!(d.evaluate(0.5001), Err(Error::OutOfBox { .. })));

        let nm = Eigenfunction::new(&BoundaryCondition::neumann(), PI).unwrap();
        let h = 1e-6;
        let fd_right = (nm.value(0.5) - nm.value(0.5 - h)) / h;
        let fd_left = (nm.value(-0.5 + h) - nm.value(-0.5)) / h;
        assert!(fd_right.norm() <= 1e-5 && fd_left.norm() <= 1e-5);
    }

    #[test]
    fn coefficients_reject_non_roots() {
        assert!(coefficients(&BoundaryCondition::dirichlet(), 3.0).is_err());
        assert!(coefficients(&BoundaryCondition::dirichlet(), -PI).is_err());
    }

    #[test]
    fn beta_moves_coefficients_not_wavenumbers() {
        let a = BoundaryCondition::new(0.9, 0.3, 0.2, 0.4).unwrap();
        let b = BoundaryCondition::new(0.9, 0.3, 0.2, 2.1).unwrap();
        let ka = find_wavenumbers(&a, 5).unwrap();
        let kb = find_wavenumbers(&b, 5).unwrap();
        for (pa, pb) in ka.iter().zip(&kb) {
            assert_eq!(pa.k, pb.k);
            let ea = Eigenfunction::new(&a, pa.k).unwrap();
            let eb = Eigenfunction::new(&b, pb.k).unwrap();
            assert!((ea.omega_raw() - eb.omega_raw()).abs() > 1e-6);
        }
    }

    #[test]
    fn interference_weight_tends_to_one() {
        let bc = BoundaryCondition::new(1.1, -0.4, 0.6, 2.5).unwrap();
        for s in states(&bc, 60).iter().filter(|s| s.point.n >= 20) {
            assert!((s.eigenfunction.direct_weight() - 1.0).abs() <= 2.0 / s.point.k);
        }
    }

    fn random_bc() -> impl Strategy<Value = BoundaryCondition> {
        (0.0..TAU, -1.0f64..1.0, -1.0f64..1.0, 0.0..TAU)
            .prop_filter("inside the disk", |(_, a, b, _)| a * a + b * b < 0.98)
            .prop_map(|(e, a, b, beta)| BoundaryCondition::new(e, a, b, beta).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn eigenfunctions_are_normalized_solutions(bc in random_bc()) {
            let all = states(&bc, 12);
            for s in &all {
                let ef = &s.eigenfunction;
                prop_assert!((ef.norm_by_quadrature() - 1.0).abs() <= 1e-10, "norm at k={}", ef.k);
                prop_assert!(ef.boundary_residual() <= RESIDUAL_TOL, "residual {} at k={}", ef.boundary_residual(), ef.k);
                // -ψ'' = k²ψ by central differences
                let h = 1e-4;
                for j in 0..16 {
                    let x = -0.45 + 0.9 * j as f64 / 15.0;
                    let d2 = (ef.value(x + h) - 2.0 * ef.value(x) + ef.value(x - h)) / (h * h);
                    let target = ef.k * ef.k * ef.value(x);
                    let scale = (ef.k * ef.k).max(1.0) * ef.value(x).norm().max(1.0);
                    prop_assert!((-d2 - target).norm() <= 1e-5 * scale);
                }
            }
            for (i, a) in all.iter().enumerate() {
                for b in &all[i + 1..] {
                    let ip = inner_product(&a.eigenfunction, &b.eigenfunction).norm();
                    prop_assert!(ip <= 1e-8, "overlap {} between k={} and k={}", ip, a.point.k, b.point.k);
                }
            }
        }
    }
}
