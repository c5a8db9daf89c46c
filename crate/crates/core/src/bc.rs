//! Self-adjoint boundary conditions for `-d²/dx²` on the box `[-1/2, 1/2]`.
//!
//! Every boundary condition is a relation `Ψ₋ = U Ψ₊` between boundary
//! vectors, with `U` ranging over U(2). We parametrize `U` by
//! `(η, m₀, m₁, β)` with `η ∈ [0, π)`, `(m₀, m₁)` in the closed unit disk and
//! `β ∈ [0, 2π)`:
//!
//! ```text
//! U = e^{iη} [[ m₀ + i m₃,  m₂ + i m₁],
//!             [-m₂ + i m₁,  m₀ - i m₃]],   m₂ + i m₃ = r e^{iβ},  r = √(1 - m₀² - m₁²)
//! ```

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{self, C2, I, M2, ZERO};

/// Absolute tolerance for `λ = 1`, `m₀ = cos η` and off-diagonal vanishing.
pub const EQ_TOL: f64 = 1e-12;

/// Canonical boundary-condition parameters.
///
/// Construct with [`BoundaryCondition::new`], which canonicalizes; the
/// fields are then guaranteed to satisfy `η ∈ [0, π)`, `β ∈ [0, 2π)`,
/// `m₀² + m₁² ≤ 1` and `β = 0` on the boundary of the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BoundaryCondition {
    eta: f64,
    m0: f64,
    m1: f64,
    beta: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    eta: f64,
    m0: f64,
    m1: f64,
    beta: f64,
}

impl TryFrom<RawParams> for BoundaryCondition {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        canonicalize(raw.eta, raw.m0, raw.m1, raw.beta)
    }
}

impl From<BoundaryCondition> for RawParams {
    fn from(bc: BoundaryCondition) -> Self {
        RawParams {
            eta: bc.eta,
            m0: bc.m0,
            m1: bc.m1,
            beta: bc.beta,
        }
    }
}

fn reduce_angle(angle: f64, period: f64) -> f64 {
    let r = angle.rem_euclid(period);
    // rem_euclid can round up to `period` for tiny negative inputs
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Brings raw `(η, m₀, m₁, β)` to canonical form.
///
/// Applies the identification `(η, m⃗) ~ (η - π, -m⃗)` when `η ≥ π`, which
/// also shifts `β` by `π` since `(m₂, m₃)` flips sign. Norms up to `1e-12`
/// outside the disk are clamped onto it.
pub fn canonicalize(eta_raw: f64, m0: f64, m1: f64, beta_raw: f64) -> Result<BoundaryCondition> {
    if !(eta_raw.is_finite() && m0.is_finite() && m1.is_finite() && beta_raw.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "non-finite boundary parameters ({eta_raw}, {m0}, {m1}, {beta_raw})"
        )));
    }
    let norm2 = m0 * m0 + m1 * m1;
    if norm2 > 1.0 + EQ_TOL {
        return Err(Error::ParameterDomain { norm2 });
    }
    let (mut m0, mut m1) = (m0, m1);
    if norm2 > 1.0 {
        let s = norm2.sqrt();
        m0 /= s;
        m1 /= s;
    }

    let mut eta = reduce_angle(eta_raw, TAU);
    let mut beta = beta_raw;
    if eta >= PI {
        eta -= PI;
        m0 = -m0;
        m1 = -m1;
        beta += PI;
    }
    let on_circle = 1.0 - m0 * m0 - m1 * m1 <= 0.0;
    let beta = if on_circle {
        0.0
    } else {
        reduce_angle(beta, TAU)
    };
    Ok(BoundaryCondition { eta, m0, m1, beta })
}

impl BoundaryCondition {
    pub fn new(eta: f64, m0: f64, m1: f64, beta: f64) -> Result<Self> {
        canonicalize(eta, m0, m1, beta)
    }

    /// `U = I`.
    pub fn dirichlet() -> Self {
        Self::robin(0.0)
    }

    /// `U = -I`.
    pub fn neumann() -> Self {
        Self::robin(PI)
    }

    /// Symmetric Robin family `U = e^{iα} I`, i.e. `Ψ' = -cot(α/2) Ψ`.
    pub fn robin(alpha: f64) -> Self {
        canonicalize(alpha, 1.0, 0.0, 0.0).expect("robin parameters lie on the disk")
    }

    /// Pseudo-periodic family `ψ(1/2) = e^{iα} ψ(-1/2)`, `ψ'(1/2) = e^{iα} ψ'(-1/2)`.
    pub fn pseudo_periodic(alpha: f64) -> Self {
        let alpha = reduce_angle(alpha, TAU);
        let beta = if alpha < PI { 0.0 } else { PI };
        canonicalize(PI / 2.0, 0.0, alpha.cos(), beta)
            .expect("pseudo-periodic parameters lie on the disk")
    }

    pub fn periodic() -> Self {
        Self::pseudo_periodic(0.0)
    }

    pub fn antiperiodic() -> Self {
        Self::pseudo_periodic(PI)
    }

    /// The singular family `U(π/2, 0, 0, β)`.
    pub fn quasi_periodic(beta: f64) -> Self {
        canonicalize(PI / 2.0, 0.0, 0.0, beta).expect("quasi-periodic parameters lie on the disk")
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `r = √(1 - m₀² - m₁²)`.
    pub fn radius(&self) -> f64 {
        (1.0 - self.m0 * self.m0 - self.m1 * self.m1)
            .max(0.0)
            .sqrt()
    }

    pub fn m2(&self) -> f64 {
        self.radius() * self.beta.cos()
    }

    pub fn m3(&self) -> f64 {
        self.radius() * self.beta.sin()
    }

    /// Spectral parameters differ from `other` only through `β`.
    pub fn same_spectral_params(&self, other: &Self) -> bool {
        self.eta == other.eta && self.m0 == other.m0 && self.m1 == other.m1
    }

    /// `|cos η - m₀|`, the distance from the singular circle.
    pub fn singular_gap(&self) -> f64 {
        (self.eta.cos() - self.m0).abs()
    }

    pub fn is_dirichlet(&self) -> bool {
        self.singular_gap() <= EQ_TOL && (self.m0.abs() - 1.0).abs() <= EQ_TOL
    }

    pub fn is_singular(&self) -> bool {
        self.singular_gap() <= EQ_TOL && !self.is_dirichlet()
    }

    pub fn matrix(&self) -> UnitaryMatrix2 {
        matrix_of(self)
    }

    pub fn classify(&self) -> BcClass {
        classify(self)
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "U(eta={}, m0={}, m1={}, beta={})",
            self.eta, self.m0, self.m1, self.beta
        )
    }
}

/// A 2x2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMatrix2 {
    pub entries: M2,
}

impl UnitaryMatrix2 {
    pub fn apply(&self, v: &C2) -> C2 {
        mat2::mul_vec(&self.entries, v)
    }

    pub fn det(&self) -> Complex64 {
        mat2::det(&self.entries)
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = mat2::mul(&mat2::adjoint(&self.entries), &self.entries);
        mat2::max_abs_diff(&prod, &mat2::identity())
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.entries[0][1].norm().max(self.entries[1][0].norm())
    }
}

pub fn matrix_of(bc: &BoundaryCondition) -> UnitaryMatrix2 {
    let (m0, m1, m2, m3) = (bc.m0, bc.m1, bc.m2(), bc.m3());
    let phase = Complex64::from_polar(1.0, bc.eta);
    let raw = [
        [Complex64::new(m0, m3), Complex64::new(m2, m1)],
        [Complex64::new(-m2, m1), Complex64::new(m0, -m3)],
    ];
    UnitaryMatrix2 {
        entries: mat2::scale(&raw, phase),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Local,
    Nonlocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularity {
    Regular,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcClass {
    pub locality: Locality,
    pub regularity: Regularity,
    /// `λ⁺ = exp(i[η + arccos m₀])`.
    pub lambda_plus: Complex64,
    /// `λ⁻ = exp(i[η - arccos m₀])`.
    pub lambda_minus: Complex64,
}

impl BcClass {
    pub fn is_singular(&self) -> bool {
        self.regularity == Regularity::Singular
    }

    pub fn is_local(&self) -> bool {
        self.locality == Locality::Local
    }
}

pub fn classify(bc: &BoundaryCondition) -> BcClass {
    let theta = bc.m0.clamp(-1.0, 1.0).acos();
    let lambda_plus = Complex64::from_polar(1.0, bc.eta + theta);
    let lambda_minus = Complex64::from_polar(1.0, bc.eta - theta);
    let regularity = if bc.is_singular() {
        Regularity::Singular
    } else {
        Regularity::Regular
    };
    let locality = if matrix_of(bc).max_off_diagonal() <= EQ_TOL {
        Locality::Local
    } else {
        Locality::Nonlocal
    };
    BcClass {
        locality,
        regularity,
        lambda_plus,
        lambda_minus,
    }
}

/// Hermitian `M_U = i(I + U)(I - U)⁻¹`, so that the boundary condition reads `Ψ' = M_U Ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianBoundaryMatrix {
    pub entries: M2,
}

impl HermitianBoundaryMatrix {
    pub fn hermiticity_defect(&self) -> f64 {
        mat2::max_abs_diff(&self.entries, &mat2::adjoint(&self.entries))
    }
}

/// Closed-form inverse Cayley transform; fails when some eigenvalue of `U` is 1.
pub fn inverse_cayley(bc: &BoundaryCondition) -> Result<HermitianBoundaryMatrix> {
    let denom = bc.m0 - bc.eta.cos();
    if denom.abs() <= EQ_TOL {
        return Err(Error::NoCayley);
    }
    let r = bc.radius();
    let (sb, cb) = bc.beta.sin_cos();
    let se = bc.eta.sin();
    let raw = [
        [
            Complex64::new(-se + r * sb, 0.0),
            Complex64::new(bc.m1, -r * cb),
        ],
        [
            Complex64::new(bc.m1, r * cb),
            Complex64::new(-se - r * sb, 0.0),
        ],
    ];
    Ok(HermitianBoundaryMatrix {
        entries: mat2::scale(&raw, Complex64::new(1.0 / denom, 0.0)),
    })
}

/// `i(I + U)(I - U)⁻¹` computed directly from the matrix entries.
pub fn cayley_from_matrix(u: &UnitaryMatrix2) -> Option<M2> {
    let id = mat2::identity();
    let inv = mat2::inverse(&mat2::sub(&id, &u.entries))?;
    let prod = mat2::mul(&mat2::add(&id, &u.entries), &inv);
    Some(mat2::scale(&prod, I))
}

/// Boundary data of a wave function: `Ψ = (ψ(-½), ψ(½))`, `Ψ' = (-ψ'(-½), ψ'(½))`,
/// `Ψ± = Ψ' ± iΨ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues {
    pub psi_minus: C2,
    pub psi_plus: C2,
    pub psi: C2,
    pub psi_prime: C2,
}

impl BoundaryValues {
    pub fn from_edges(
        psi_left: Complex64,
        psi_right: Complex64,
        dpsi_left: Complex64,
        dpsi_right: Complex64,
    ) -> Self {
        let psi = [psi_left, psi_right];
        let psi_prime = [-dpsi_left, dpsi_right];
        let psi_minus = [psi_prime[0] - I * psi[0], psi_prime[1] - I * psi[1]];
        let psi_plus = [psi_prime[0] + I * psi[0], psi_prime[1] + I * psi[1]];
        BoundaryValues {
            psi_minus,
            psi_plus,
            psi,
            psi_prime,
        }
    }

    pub fn zero() -> Self {
        Self::from_edges(ZERO, ZERO, ZERO, ZERO)
    }

    /// Boundary values of `x ↦ f(x)` given `f` and `f'` as closures.
    pub fn of_function(f: impl Fn(f64) -> Complex64, df: impl Fn(f64) -> Complex64) -> Self {
        Self::from_edges(f(-0.5), f(0.5), df(-0.5), df(0.5))
    }
}

/// `‖Ψ₋ - UΨ₊‖∞`.
pub fn boundary_residual(bc: &BoundaryCondition, bv: &BoundaryValues) -> f64 {
    let u_psi = matrix_of(bc).apply(&bv.psi_plus);
    mat2::vec_inf_norm(&[bv.psi_minus[0] - u_psi[0], bv.psi_minus[1] - u_psi[1]])
}
