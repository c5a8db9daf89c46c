//! Classical phase-space distributions on the box and the ring-with-door simulator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Junction events below which a simulation is rejected.
pub const MIN_EVENTS: u64 = 100;

/// Limit distributions `W(x, p)` of the box, the ring, and their mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassicalDistribution {
    /// `χ(x) [δ(p - p_c) + δ(p + p_c)] / 2`.
    Box { p_c: f64 },
    /// `χ(x) δ(p - p_c)`: clockwise motion on the ring.
    RingPlus { p_c: f64 },
    /// `χ(x) δ(p + p_c)`.
    RingMinus { p_c: f64 },
    /// `χ(x) [ω δ(p - p_c) + (1 - ω) δ(p + p_c)]`.
    Mixture { omega: f64, p_c: f64 },
}

impl ClassicalDistribution {
    pub fn p_c(&self) -> f64 {
        match *self {
            Self::Box { p_c }
            | Self::RingPlus { p_c }
            | Self::RingMinus { p_c }
            | Self::Mixture { p_c, .. } => p_c,
        }
    }

    /// Weight of the `+p_c` peak.
    pub fn omega(&self) -> f64 {
        match *self {
            Self::Box { .. } => 0.5,
            Self::RingPlus { .. } => 1.0,
            Self::RingMinus { .. } => 0.0,
            Self::Mixture { omega, .. } => omega,
        }
    }
}

fn gaussian(z: f64, sigma: f64) -> f64 {
    (-0.5 * (z / sigma).powi(2)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// Density with each `δ(p ∓ p_c)` replaced by a normalized Gaussian of width `sigma`.
pub fn classical_density(dist: &ClassicalDistribution, x: f64, p: f64, sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "smoothing width must be positive, got {sigma}"
        )));
    }
    if x.abs() > 0.5 {
        return Ok(0.0);
    }
    let (w, p_c) = (dist.omega(), dist.p_c());
    Ok(w * gaussian(p - p_c, sigma) + (1.0 - w) * gaussian(p + p_c, sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingDoorParams {
    /// Probability that the door is closed for a clockwise arrival.
    pub omega: f64,
    pub speed: f64,
    pub seed: u64,
    pub t_max: f64,
    pub bins: usize,
}

impl RingDoorParams {
    pub fn new(omega: f64, t_max: f64, seed: u64) -> Self {
        RingDoorParams {
            omega,
            speed: 1.0,
            seed,
            t_max,
            bins: 20,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::InvalidArgument(format!(
                "omega must lie in [0, 1], got {}",
                self.omega
            )));
        }
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "speed must be positive, got {}",
                self.speed
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.bins == 0 {
            return Err(Error::InvalidArgument(
                "at least one histogram bin is required".into(),
            ));
        }
        Ok(())
    }
}

/// Time-averaged occupancy of a ring-door run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyHistogram {
    pub fraction_clockwise: f64,
    pub bin_centers: Vec<f64>,
    /// Fraction of time spent in each bin; sums to 1.
    pub occupancy: Vec<f64>,
    pub junction_events: u64,
    pub total_time: f64,
}

impl OccupancyHistogram {
    /// Pearson statistic of the occupancy against the uniform law, counting
    /// one effective sample per traversal of the ring.
    pub fn chi_square_uniform(&self) -> f64 {
        let n = self.junction_events as f64;
        let expected = n / self.occupancy.len() as f64;
        self.occupancy
            .iter()
            .map(|&o| (o * n - expected).powi(2) / expected)
            .sum()
    }

    /// Binomial standard error of `fraction_clockwise` for a given true fraction.
    pub fn binomial_sigma(&self, fraction: f64) -> f64 {
        (fraction * (1.0 - fraction) / self.junction_events as f64).sqrt()
    }
}

/// Stationary clockwise fraction of the door protocol.
///
/// Clockwise arrivals flip with probability `ω`, counterclockwise ones with
/// probability `1 - ω`, so the next direction is clockwise with probability
/// `1 - ω` whatever the current one: the directions are i.i.d.
pub fn stationary_clockwise_fraction(omega: f64) -> f64 {
    1.0 - omega
}

/// Event-driven run of one particle on the unit ring `[-1/2, 1/2)` with the
/// junction at `±1/2`.
pub fn simulate_ring_door(params: &RingDoorParams) -> Result<OccupancyHistogram> {
    simulate_replica(params, 0)
}

/// One replica; replicas differ only in the RNG stream.
pub fn simulate_replica(params: &RingDoorParams, replica: u64) -> Result<OccupancyHistogram> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(replica);

    let bins = params.bins;
    let width = 1.0 / bins as f64;
    let mut time_in_bin = vec![0.0; bins];
    let mut x: f64 = rng.random_range(-0.5..0.5);
    let mut clockwise: bool = rng.random();
    let mut t = 0.0;
    let mut t_clockwise = 0.0;
    let mut events = 0u64;

    while t < params.t_max {
        let target = if clockwise { 0.5 } else { -0.5 };
        let full = (target - x).abs() / params.speed;
        let dt = full.min(params.t_max - t);
        let end = x + if clockwise {
            dt * params.speed
        } else {
            -dt * params.speed
        };
        deposit(
            &mut time_in_bin,
            x.min(end),
            x.max(end),
            width,
            params.speed,
        );
        t += dt;
        if clockwise {
            t_clockwise += dt;
        }
        if dt < full {
            break;
        }
        events += 1;
        let closed_prob = if clockwise {
            params.omega
        } else {
            1.0 - params.omega
        };
        if rng.random::<f64>() < closed_prob {
            x = target;
            clockwise = !clockwise;
        } else {
            x = -target;
        }
    }

    if events < MIN_EVENTS {
        return Err(Error::InsufficientStatistics {
            events,
            required: MIN_EVENTS,
        });
    }
    let total: f64 = time_in_bin.iter().sum();
    Ok(OccupancyHistogram {
        fraction_clockwise: t_clockwise / t,
        bin_centers: (0..bins).map(|i| -0.5 + (i as f64 + 0.5) * width).collect(),
        occupancy: time_in_bin.iter().map(|v| v / total).collect(),
        junction_events: events,
        total_time: t,
    })
}

/// Adds the time spent crossing `[lo, hi]` at the given speed to the bins.
fn deposit(time_in_bin: &mut [f64], lo: f64, hi: f64, width: f64, speed: f64) {
    if hi <= lo {
        return;
    }
    let last = time_in_bin.len() - 1;
    let first_bin = (((lo + 0.5) / width).floor().max(0.0) as usize).min(last);
    let last_bin = (((hi + 0.5) / width).ceil().max(1.0) as usize - 1).min(last);
    for (i, slot) in time_in_bin
        .iter_mut()
        .enumerate()
        .take(last_bin + 1)
        .skip(first_bin)
    {
        let b_lo = -0.5 + i as f64 * width;
        let overlap = hi.min(b_lo + width) - lo.max(b_lo);
        if overlap > 0.0 {
            *slot += overlap / speed;
        }
    }
}

/// Merges independent replicas, weighting by simulated time.
pub fn merge_replicas(runs: &[OccupancyHistogram]) -> Option<OccupancyHistogram> {
    let first = runs.first()?;
    let total_time: f64 = runs.iter().map(|r| r.total_time).sum();
    let mut occupancy = vec![0.0; first.occupancy.len()];
    for r in runs {
        for (o, v) in occupancy.iter_mut().zip(&r.occupancy) {
            *o += v * r.total_time / total_time;
        }
    }
    Some(OccupancyHistogram {
        fraction_clockwise: runs
            .iter()
            .map(|r| r.fraction_clockwise * r.total_time)
            .sum::<f64>()
            / total_time,
        bin_centers: first.bin_centers.clone(),
        occupancy,
        junction_events: runs.iter().map(|r| r.junction_events).sum(),
        total_time,
    })
}
