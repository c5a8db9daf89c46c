//! Boundary-condition presets accepted on the command line.

use boxwig_core::BoundaryCondition;

use crate::error::{CliError, Result};

pub const GRAMMAR: &str = "expected one of: dirichlet | neumann | periodic | antiperiodic | \
robin:ALPHA | pseudo:ALPHA | quasi:BETA | ETA,M0,M1,BETA";

fn number(text: &str, what: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot read {what} from {text:?}; {GRAMMAR}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "{what} must be finite, got {text:?}"
        )))
    }
}

/// Parses a preset name or an explicit `η,m0,m1,β` quadruple.
pub fn parse_bc(text: &str) -> Result<BoundaryCondition> {
    let t = text.trim().to_ascii_lowercase();
    let bc = match t.as_str() {
        "dirichlet" => BoundaryCondition::dirichlet(),
        "neumann" => BoundaryCondition::neumann(),
        "periodic" => BoundaryCondition::periodic(),
        "antiperiodic" => BoundaryCondition::antiperiodic(),
        _ => {
            if let Some((name, arg)) = t.split_once(':') {
                let v = number(arg, name)?;
                match name {
                    "robin" => BoundaryCondition::robin(v),
                    "pseudo" => BoundaryCondition::pseudo_periodic(v),
                    "quasi" => BoundaryCondition::quasi_periodic(v),
                    _ => {
                        return Err(CliError::Usage(format!(
                            "unknown preset {name:?}; {GRAMMAR}"
                        )))
                    }
                }
            } else {
                let parts: Vec<&str> = t.split(',').collect();
                let [eta, m0, m1, beta] = parts.as_slice() else {
                    return Err(CliError::Usage(format!(
                        "cannot parse boundary condition {text:?}; {GRAMMAR}"
                    )));
                };
                BoundaryCondition::new(
                    number(eta, "eta")?,
                    number(m0, "m0")?,
                    number(m1, "m1")?,
                    number(beta, "beta")?,
                )?
            }
        }
    };
    Ok(bc)
}
