//! Seeded randomness.
//!
//! All random instances come from PCG32 (the XSH-RR 64/32 generator: 64-bit LCG
//! state, 32-bit output) seeded with `(seed, stream)`. Weight draws are exact
//! rationals, so a given seed yields the same instance in both scalar modes.

use std::str::FromStr;

use rand::Rng;
use rand_pcg::Pcg32;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{rat, rint, Rational};

/// Denominator of the grid on which continuous weight laws are quantized.
pub const WEIGHT_GRID: i64 = 1000;

pub fn rng(seed: u64, stream: u64) -> Pcg32 {
    Pcg32::new(seed, stream)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightLaw {
    /// Uniform on `{1, .., 1000} / 1000`.
    Uniform01,
    Unit,
    /// Exp(1), rounded up to the `1/1000` grid.
    Exponential,
}

impl FromStr for WeightLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "uniform01" => Ok(WeightLaw::Uniform01),
            "unit" => Ok(WeightLaw::Unit),
            "exponential" => Ok(WeightLaw::Exponential),
            _ => Err(Error::arg(format!(
                "unknown weight law {s:?} (uniform01|unit|exponential)"
            ))),
        }
    }
}

impl std::fmt::Display for WeightLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightLaw::Uniform01 => "uniform01",
            WeightLaw::Unit => "unit",
            WeightLaw::Exponential => "exponential",
        })
    }
}

pub fn draw_weight(law: WeightLaw, rng: &mut Pcg32) -> Rational {
    match law {
        WeightLaw::Unit => rint(1),
        WeightLaw::Uniform01 => rat(rng.gen_range(1..=WEIGHT_GRID), WEIGHT_GRID),
        WeightLaw::Exponential => {
            let u: f64 = rng.gen();
            let x = -(1.0 - u).ln();
            let q = ((x * WEIGHT_GRID as f64).ceil() as i64).max(1);
            rat(q, WEIGHT_GRID)
        }
    }
}

/// Bernoulli trial with success probability `p`.
pub fn coin(p: f64, rng: &mut Pcg32) -> bool {
    rng.gen::<f64>() < p
}

pub fn int_in(lo: i64, hi: i64, rng: &mut Pcg32) -> i64 {
    rng.gen_range(lo..=hi)
}
