//! Chi-square uniformity of the raw gated word stream.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::sbox::stream::WordStream;
use crate::sbox::GenerationParams;

/// Result of one uniformity run. The band is the central 99.9% interval of
/// the chi-square distribution with 2^n - 1 degrees of freedom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub samples: u64,
    pub dof: u64,
    pub statistic: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub pass: bool,
}

/// Central 99.9% acceptance band for `dof` degrees of freedom.
pub fn chi2_band(dof: u64) -> (f64, f64) {
    let dist = ChiSquared::new(dof as f64).expect("dof is positive");
    (dist.inverse_cdf(0.0005), dist.inverse_cdf(0.9995))
}

/// Draws `samples` gated words with no duplicate rejection, tallies the 2^n
/// bins, and tests them against the uniform expectation. Needs at least
/// 50 * 2^n samples for the chi-square approximation to hold.
pub fn uniformity_test(params: &GenerationParams, samples: u64) -> Result<UniformityReport> {
    let bins = 1u64 << params.word_bits;
    let minimum = 50 * bins;
    if samples < minimum {
        return Err(Error::TooFewSamples {
            samples,
            minimum,
            bits: params.word_bits,
        });
    }
    let mut stream = WordStream::new(params)?;
    let mut counts = vec![0u64; bins as usize];
    for drawn in 0..samples {
        let Some(word) = stream.next_word() else {
            return Err(Error::GateStarved {
                produced: drawn,
                requested: samples,
            });
        };
        counts[word as usize] += 1;
    }
    let expected = samples as f64 / bins as f64;
    let statistic = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = bins - 1;
    let (band_low, band_high) = chi2_band(dof);
    Ok(UniformityReport {
        samples,
        dof,
        statistic,
        band_low,
        band_high,
        pass: statistic >= band_low && statistic <= band_high,
    })
}
