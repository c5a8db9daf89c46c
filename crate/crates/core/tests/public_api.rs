use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use boxwig_core::classical::{merge_replicas, simulate_replica, simulate_ring_door};
use boxwig_core::eigen::{eigenstates, inner_product};
use boxwig_core::quad::{gauss_legendre, linspace};
use boxwig_core::spectrum::find_wavenumbers;
use boxwig_core::wigner::{classical_limit_summary, wigner_closed_form, wigner_quadrature};
use boxwig_core::{
    BoundaryCondition, ClassicalDistribution, ClassicalLimit, Eigenfunction, RingDoorParams,
};

#[test]
fn neumann_spectrum_is_the_dirichlet_lattice() {
    for p in find_wavenumbers(&BoundaryCondition::neumann(), 30).unwrap() {
        assert_abs_diff_eq!(p.k, p.n as f64 * PI, epsilon = 1e-10);
        assert_eq!(p.multiplicity, 1);
    }
}

#[test]
fn periodic_and_antiperiodic_spectra_are_doubly_degenerate() {
    let periodic = find_wavenumbers(&BoundaryCondition::periodic(), 10).unwrap();
    for (i, p) in periodic.iter().enumerate() {
        assert_abs_diff_eq!(p.k, 2.0 * PI * (i / 2 + 1) as f64, epsilon = 1e-9);
        assert!(p.is_degenerate());
    }
    let anti = find_wavenumbers(&BoundaryCondition::antiperiodic(), 10).unwrap();
    for (i, p) in anti.iter().enumerate() {
        assert_abs_diff_eq!(p.k, PI * (2 * (i / 2) + 1) as f64, epsilon = 1e-9);
    }
}

#[test]
fn eigenstates_are_orthonormal_for_a_nonlocal_bc() {
    let bc = BoundaryCondition::new(1.1, 0.3, -0.4, 2.0).unwrap();
    let states = eigenstates(&bc, &find_wavenumbers(&bc, 8).unwrap()).unwrap();
    for a in &states {
        for b in &states {
            let ip = inner_product(&a.eigenfunction, &b.eigenfunction);
            let expected = if a.point.n == b.point.n { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(ip.re, expected, epsilon = 1e-9);
            assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn ground_state_wigner_at_origin() {
    // W(0,0) = (1/πħ) ∫ ψ(y) ψ(-y)* dy = 1/(πħ) for an even real state
    let ef = Eigenfunction::new(&BoundaryCondition::dirichlet(), PI).unwrap();
    for hbar in [0.1, 1.0] {
        let grid = wigner_closed_form(&ef, hbar, &[0.0], &[0.0]).unwrap();
        assert_abs_diff_eq!(grid.get(0, 0), 1.0 / (PI * hbar), epsilon = 1e-12);
    }
}

#[test]
fn wigner_matches_direct_integral_of_the_defining_transform() {
    let bc = BoundaryCondition::new(0.6, -0.2, 0.7, 4.0).unwrap();
    let k = find_wavenumbers(&bc, 3).unwrap()[2].k;
    let ef = Eigenfunction::new(&bc, k).unwrap();
    let hbar = 0.5;
    for &(x, p) in &[(0.1, 2.0), (-0.3, -1.0), (0.45, 7.0)] {
        let half = 0.5 - f64::abs(x);
        let direct = gauss_legendre(
            |y| {
                let v = ef.value(x + y)
                    * ef.value(x - y).conj()
                    * num_complex::Complex64::from_polar(1.0, -2.0 * p * y / hbar);
                v.re
            },
            -half,
            half,
            8,
        ) / (PI * hbar);
        assert_abs_diff_eq!(
            wigner_closed_form(&ef, hbar, &[x], &[p]).unwrap().get(0, 0),
            direct,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            wigner_quadrature(&ef, hbar, x, p).unwrap(),
            direct,
            epsilon = 1e-8
        );
    }
}

#[test]
fn dirichlet_limit_is_balanced() {
    match classical_limit_summary(&BoundaryCondition::dirichlet(), 2.0, 44).unwrap() {
        ClassicalLimit::Balanced { distribution } => {
            assert_eq!(
                distribution,
                ClassicalDistribution::Mixture {
                    omega: 0.5,
                    p_c: 2.0
                }
            )
        }
        other => panic!("expected a balanced limit, got {other:?}"),
    }
}

#[test]
fn ring_door_is_reproducible_and_merges_replicas() {
    let params = RingDoorParams::new(0.4, 3000.0, 11);
    assert_eq!(
        simulate_ring_door(&params).unwrap(),
        simulate_ring_door(&params).unwrap()
    );
    let runs: Vec<_> = (0..3)
        .map(|r| simulate_replica(&params, r).unwrap())
        .collect();
    let mut reversed = runs.clone();
    reversed.reverse();
    let a = merge_replicas(&runs).unwrap();
    let b = merge_replicas(&reversed).unwrap();
    assert_eq!(
        a.junction_events,
        runs.iter().map(|r| r.junction_events).sum::<u64>()
    );
    assert_abs_diff_eq!(a.fraction_clockwise, b.fraction_clockwise, epsilon = 1e-15);
    assert_abs_diff_eq!(a.occupancy.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    assert_ne!(runs[0].fraction_clockwise, runs[1].fraction_clockwise);
}

#[test]
fn bc_json_round_trips() {
    let bc = BoundaryCondition::new(2.5, 0.1, -0.3, 5.9).unwrap();
    let text = serde_json::to_string(&bc).unwrap();
    assert_eq!(
        serde_json::from_str::<BoundaryCondition>(&text).unwrap(),
        bc
    );
}

#[test]
fn linspace_covers_the_box() {
    let xs = linspace(-0.5, 0.5, 11);
    assert_eq!(xs[0], -0.5);
    assert_eq!(xs[10], 0.5);
}
