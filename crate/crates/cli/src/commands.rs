//! Subcommand implementations; each returns its payload and sidecar notes.

use boxwig_core::bc::inverse_cayley;
use boxwig_core::classical::{merge_replicas, simulate_replica, stationary_clockwise_fraction};
use boxwig_core::eigen::{eigenstates, EigenState};
use boxwig_core::quad::linspace;
use boxwig_core::spectrum::{asymptotic_prediction, find_wavenumbers_with, SpectrumOptions};
use boxwig_core::wigner::{
    self, omega_entries, omega_sequence_with, predicted_omega_limits, ClassicalLimit,
};
use boxwig_core::{Error, RingDoorParams};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Command, Settings};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, Payload, Table};
use crate::presets::parse_bc;
use crate::scan::{run_scan, ScanSpec};

pub struct Outcome {
    pub payload: Payload,
    pub notes: Value,
}

fn options(settings: &Settings) -> SpectrumOptions {
    SpectrumOptions {
        bisection_tol: settings.tol_root,
        ..SpectrumOptions::default()
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

fn nth_state(bc_text: &str, n: usize, settings: &Settings) -> Result<EigenState> {
    require(n >= 1, "--n must be at least 1")?;
    let bc = parse_bc(bc_text)?;
    let points = find_wavenumbers_with(&bc, n, &options(settings))?;
    Ok(eigenstates(&bc, &points)?[n - 1])
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub fn execute(cmd: &Command, settings: &Settings) -> Result<Outcome> {
    match cmd {
        Command::Classify { bc } => {
            let bc = parse_bc(bc)?;
            let class = bc.classify();
            let cayley = match inverse_cayley(&bc) {
                Ok(m) => serde_json::to_value(m)?,
                Err(Error::NoCayley) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let payload = json!({
                "bc": bc,
                "matrix": bc.matrix(),
                "class": class,
                "singular_gap": bc.singular_gap(),
                "dirichlet": bc.is_dirichlet(),
                "inverse_cayley": cayley,
                "asymptotics": asymptotic_prediction(&bc),
            });
            Ok(Outcome {
                payload: Payload::Json(payload),
                notes: json!({}),
            })
        }
        Command::Spectrum { bc, n_max } => {
            require(*n_max >= 1, "--n-max must be at least 1")?;
            let bc = parse_bc(bc)?;
            let points = find_wavenumbers_with(&bc, *n_max, &options(settings))?;
            let mut t = Table::new(vec!["n", "k", "epsilon", "delta", "multiplicity"]);
            for p in &points {
                t.push(vec![
                    p.n.to_string(),
                    fmt_f64(p.k),
                    fmt_f64(p.epsilon),
                    fmt_f64(p.delta),
                    p.multiplicity.to_string(),
                ]);
            }
            let degenerate: Vec<usize> = points
                .iter()
                .filter(|p| p.is_degenerate())
                .map(|p| p.n)
                .collect();
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({ "bc": bc, "degenerate_n": degenerate }),
            })
        }
        Command::Eigenfunction { bc, n, samples } => {
            require(*samples >= 2, "--samples must be at least 2")?;
            let state = nth_state(bc, *n, settings)?;
            let ef = state.eigenfunction;
            let mut t = Table::new(vec!["x", "re_psi", "im_psi", "abs2_psi"]);
            for x in linspace(-0.5, 0.5, *samples) {
                let v = ef.evaluate(x)?;
                t.push(vec![
                    fmt_f64(x),
                    fmt_f64(v.re),
                    fmt_f64(v.im),
                    fmt_f64(v.norm_sqr()),
                ]);
            }
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({
                    "k": ef.k,
                    "c_plus": ef.c_plus,
                    "c_minus": ef.c_minus,
                    "norm": ef.norm,
                    "degenerate": state.degenerate,
                }),
            })
        }
        Command::Wigner { bc, n, pc, nx, np } => {
            require(*pc > 0.0 && pc.is_finite(), "--pc must be positive")?;
            require(*nx >= 2 && *np >= 2, "--nx and --np must be at least 2")?;
            let state = nth_state(bc, *n, settings)?;
            let ef = state.eigenfunction;
            let hbar = wigner::ClassicalLimitConfig { p_c: *pc }.hbar(ef.k);
            let xs = linspace(-0.5, 0.5, *nx);
            let ps = linspace(-2.0 * pc, 2.0 * pc, *np);
            let grid = wigner::wigner_closed_form(&ef, hbar, &xs, &ps)?;
            let mut t = Table::new(vec!["x", "p", "w"]);
            for (i, &x) in xs.iter().enumerate() {
                for (j, &p) in ps.iter().enumerate() {
                    t.push(vec![fmt_f64(x), fmt_f64(p), fmt_f64(grid.get(i, j))]);
                }
            }
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({
                    "k": ef.k,
                    "hbar": hbar,
                    "omega": wigner::omega_n(&ef)?,
                    "degenerate": state.degenerate,
                    "integral_on_grid": grid.total(),
                }),
            })
        }
        Command::Omega { bc, n_max } => {
            require(*n_max >= 1, "--n-max must be at least 1")?;
            let bc = parse_bc(bc)?;
            let points = find_wavenumbers_with(&bc, *n_max, &options(settings))?;
            let entries = omega_entries(&bc, &points)?;
            let mut t = Table::new(vec!["n", "k", "omega", "parity"]);
            for e in &entries {
                t.push(vec![
                    e.n.to_string(),
                    fmt_f64(e.k),
                    fmt_f64(e.omega),
                    e.parity.as_str().to_string(),
                ]);
            }
            let degenerate: Vec<usize> = entries
                .iter()
                .filter(|e| e.degenerate)
                .map(|e| e.n)
                .collect();
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({ "bc": bc, "degenerate_n": degenerate }),
            })
        }
        Command::Limit { bc, pc, n_max } => {
            require(*pc > 0.0 && pc.is_finite(), "--pc must be positive")?;
            let bc = parse_bc(bc)?;
            let seq = omega_sequence_with(&bc, *n_max, &options(settings))?;
            let predicted = match predicted_omega_limits(&bc) {
                Ok((e, o)) => json!({ "even": e, "odd": o }),
                Err(Error::UndefinedAsymptote { .. }) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let payload = json!({
                "balanced": seq.balanced,
                "omega_even": seq.even_limit_est,
                "omega_odd": seq.odd_limit_est,
                "predicted": predicted,
                "limit": ClassicalLimit::from_sequence(&seq, *pc),
                "near_singular": bc.singular_gap() < 0.3 && !bc.is_singular(),
            });
            Ok(Outcome {
                payload: Payload::Json(payload),
                notes: json!({ "degenerate_n": seq.entries.iter().filter(|e| e.degenerate).map(|e| e.n).collect::<Vec<_>>() }),
            })
        }
        Command::Scan {
            eta,
            target,
            n,
            resolution,
            beta,
        } => {
            require(eta.is_finite(), "--eta must be finite")?;
            require(
                beta.iter().all(|b| b.is_finite()),
                "--beta values must be finite",
            )?;
            let spec = ScanSpec {
                eta: *eta,
                resolution: *resolution,
                betas: beta.clone(),
                target: *target,
                n: *n,
                options: options(settings),
            };
            let rows = run_scan(&spec);
            let mut t = Table::new(vec!["m0", "m1", "beta", "value", "error", "predicted"]);
            for r in &rows {
                t.push(vec![
                    fmt_f64(r.m0),
                    fmt_f64(r.m1),
                    fmt_f64(r.beta),
                    fmt_f64(r.value),
                    r.error.clone().unwrap_or_default(),
                    fmt_f64(r.predicted),
                ]);
            }
            let failures = rows.iter().filter(|r| r.error.is_some()).count();
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({
                    "grid": "cartesian",
                    "resolution": resolution,
                    "points": rows.len(),
                    "failures": failures,
                }),
            })
        }
        Command::Ringdoor {
            omega,
            t_max,
            bins,
            replicas,
            speed,
        } => {
            require(*replicas >= 1, "--replicas must be at least 1")?;
            let params = RingDoorParams {
                omega: *omega,
                speed: *speed,
                seed: settings.seed,
                t_max: *t_max,
                bins: *bins,
            };
            let runs = (0..*replicas)
                .into_par_iter()
                .map(|r| simulate_replica(&params, r))
                .collect::<boxwig_core::Result<Vec<_>>>()?;
            let hist = merge_replicas(&runs).expect("at least one replica");
            let mut t = Table::new(vec!["bin_center", "occupancy"]);
            for (c, o) in hist.bin_centers.iter().zip(&hist.occupancy) {
                t.push(vec![fmt_f64(*c), fmt_f64(*o)]);
            }
            let analytic = stationary_clockwise_fraction(*omega);
            t.footer = Some(json!({
                "fraction_clockwise": hist.fraction_clockwise,
                "analytic_fraction_clockwise": analytic,
                "binomial_sigma": finite_or_null(hist.binomial_sigma(analytic)),
                "door_omega": omega,
                "junction_events": hist.junction_events,
                "total_time": hist.total_time,
                "chi_square_uniform": hist.chi_square_uniform(),
            }));
            Ok(Outcome {
                payload: Payload::Table(t),
                notes: json!({ "replicas": replicas }),
            })
        }
    }
}
