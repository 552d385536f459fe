//! Coupon-collector latency model, Monte Carlo simulation, and baselines.
//!
//! A hardware generator costs `c_iter` cycles per orbit step and `c_acc`
//! extra per accepted draw. With a rank-k gate the acceptance probability is
//! p = 2^-k, and filling all 2^n words is a coupon-collector process, so the
//! expected total is c_iter * E[N_acc] / p + c_acc * E[N_acc] with
//! E[N_acc] = 2^n * H(2^n). `simulate` checks that closed form by Monte
//! Carlo over an idealized Bernoulli-gate generator; `measure_real_generator`
//! runs the actual orbit machinery, which is deterministic rather than
//! i.i.d., so the two are compared but never conflated.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::FixedPointState;
use crate::sbox::{generate, GenerationParams};

/// Identity of the simulation PRNG, recorded in reports; swapping the
/// algorithm shifts every Monte Carlo statistic, so it is part of the
/// contract.
pub const SIMULATION_RNG: &str = "chacha12";

/// Cost model and Monte Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyConfig {
    /// Gate rank k; the idealized acceptance probability is 2^-k.
    pub gate_rank: u8,
    /// Cycles per orbit iteration.
    pub c_iter: f64,
    /// Extra cycles per accepted draw.
    pub c_acc: f64,
    pub f_clk_hz: f64,
    pub trials: u32,
    pub rng_seed: u64,
}

impl Default for LatencyConfig {
    fn default() -> Self {
        Self {
            gate_rank: 3,
            c_iter: 1.0,
            c_acc: 1.0,
            f_clk_hz: 2.0e8,
            trials: 2000,
            rng_seed: 42,
        }
    }
}

impl LatencyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gate_rank > crate::dyadic::MAX_RANK {
            return Err(Error::RankTooLarge(self.gate_rank));
        }
        if self.trials == 0 {
            return Err(Error::BadLatencyConfig("trials must be at least 1"));
        }
        if !(self.f_clk_hz > 0.0) {
            return Err(Error::BadLatencyConfig("clock frequency must be positive"));
        }
        if !(self.c_iter >= 1.0) {
            return Err(Error::BadLatencyConfig("c_iter must be at least 1"));
        }
        if !(self.c_acc >= 0.0) {
            return Err(Error::BadLatencyConfig("c_acc must be nonnegative"));
        }
        Ok(())
    }
}

/// Cycle statistics over a batch of runs, with clock conversions attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub median_cycles: f64,
    pub p95_cycles: f64,
    pub mean_cycles: f64,
    pub median_us: f64,
    pub p95_us: f64,
}

/// E[N_acc] = 2^n * H(2^n), the exact harmonic sum (not the ln + gamma
/// approximation). For n = 8 this is about 1567.83.
pub fn expected_acceptances(word_bits: u8) -> f64 {
    let coupons = 1u64 << word_bits;
    let harmonic: f64 = (1..=coupons).map(|i| 1.0 / i as f64).sum();
    coupons as f64 * harmonic
}

/// Expected total cycles for one table fill under the idealized model.
pub fn expected_cycles(config: &LatencyConfig, word_bits: u8) -> f64 {
    let acceptances = expected_acceptances(word_bits);
    let p = 2f64.powi(-(config.gate_rank as i32));
    config.c_iter * acceptances / p + config.c_acc * acceptances
}

pub fn cycles_to_us(cycles: f64, f_clk_hz: f64) -> f64 {
    cycles / f_clk_hz * 1e6
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial seed stream: independent of execution order, so trials can run
/// in any order or in parallel and still reproduce bit-for-bit.
fn trial_seed(rng_seed: u64, trial: u32) -> u64 {
    splitmix64(rng_seed ^ (trial as u64 + 1).wrapping_mul(0x9e3779b97f4a7c15))
}

/// Nearest-rank percentile on a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

fn stats_from(cycles: &mut [f64], f_clk_hz: f64) -> LatencyStats {
    cycles.sort_by(f64::total_cmp);
    let median_cycles = percentile(cycles, 0.5);
    let p95_cycles = percentile(cycles, 0.95);
    let mean_cycles = cycles.iter().sum::<f64>() / cycles.len() as f64;
    LatencyStats {
        median_cycles,
        p95_cycles,
        mean_cycles,
        median_us: cycles_to_us(median_cycles, f_clk_hz),
        p95_us: cycles_to_us(p95_cycles, f_clk_hz),
    }
}

/// Monte Carlo over the idealized generator: each iteration hits the gate
/// with probability 2^-k, and each hit draws a uniform n-bit coupon. All
/// randomness comes from integer bit extraction, never from floats, so
/// results are exactly reproducible for a given seed.
pub fn simulate(config: &LatencyConfig, word_bits: u8) -> Result<LatencyStats> {
    config.validate()?;
    if word_bits > 16 {
        return Err(Error::BadWordBits(word_bits));
    }
    let size = 1usize << word_bits;
    let k = config.gate_rank as u32;
    let mut totals = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        let mut rng = ChaCha12Rng::seed_from_u64(trial_seed(config.rng_seed, trial));
        let mut seen = vec![false; size];
        let mut left = size;
        let mut iterations = 0u64;
        let mut draws = 0u64;
        while left > 0 {
            iterations += 1;
            if k == 0 || rng.next_u64() >> (64 - k) == 0 {
                draws += 1;
                let coupon = if word_bits == 0 {
                    0
                } else {
                    (rng.next_u64() >> (64 - word_bits as u32)) as usize
                };
                if !std::mem::replace(&mut seen[coupon], true) {
                    left -= 1;
                }
            }
        }
        totals.push(config.c_iter * iterations as f64 + config.c_acc * draws as f64);
    }
    Ok(stats_from(&mut totals, config.f_clk_hz))
}

/// What `measure_real_generator` saw: per-trial cycle statistics over the
/// successful runs, plus how many trials failed to fill their table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredLatency {
    pub stats: Option<LatencyStats>,
    pub trials: u32,
    pub failures: u32,
}

/// Runs the real generator `trials` times, deriving each trial's origin from
/// `params.x0` by an odd multiplier mod 2^B (a bijection of the state space
/// that keeps 0 at 0, so a degenerate origin stays degenerate across every
/// trial). Cycle counts come from the actual iteration and acceptance
/// counters.
pub fn measure_real_generator(
    params: &GenerationParams,
    config: &LatencyConfig,
) -> Result<MeasuredLatency> {
    config.validate()?;
    params.validate()?;
    let width = params.x0.width();
    let mask = if width == 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    };
    let mut cycles = Vec::new();
    let mut failures = 0u32;
    for trial in 0..config.trials {
        let lo = trial_seed(config.rng_seed, trial);
        let hi = splitmix64(lo);
        let odd = (((hi as u128) << 64 | lo as u128) | 1) & mask;
        let frac = params.x0.frac_bits().wrapping_mul(odd) & mask;
        let trial_params = GenerationParams {
            x0: FixedPointState::new(frac, width).expect("masked fraction fits"),
            ..params.clone()
        };
        match generate(&trial_params) {
            Ok((_, trace)) => cycles.push(
                config.c_iter * trace.iterations as f64 + config.c_acc * trace.acceptances as f64,
            ),
            Err(Error::InsufficientBlocks { .. }) => failures += 1,
            Err(other) => return Err(other),
        }
    }
    let stats = if cycles.is_empty() {
        None
    } else {
        Some(stats_from(&mut cycles, config.f_clk_hz))
    };
    Ok(MeasuredLatency {
        stats,
        trials: config.trials,
        failures,
    })
}

/// One row of the comparison table. Rows without a spread (closed-form model,
/// fixed baselines) leave the P95 columns empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatencyRow {
    pub design: String,
    pub gate_rank: Option<u8>,
    pub median_cycles: f64,
    pub p95_cycles: Option<f64>,
    pub median_us: f64,
    pub p95_us: Option<f64>,
}

impl LatencyRow {
    pub fn point(design: &str, gate_rank: Option<u8>, cycles: f64, f_clk_hz: f64) -> Self {
        Self {
            design: design.to_owned(),
            gate_rank,
            median_cycles: cycles,
            p95_cycles: None,
            median_us: cycles_to_us(cycles, f_clk_hz),
            p95_us: None,
        }
    }

    pub fn spread(design: &str, gate_rank: Option<u8>, stats: &LatencyStats) -> Self {
        Self {
            design: design.to_owned(),
            gate_rank,
            median_cycles: stats.median_cycles,
            p95_cycles: Some(stats.p95_cycles),
            median_us: stats.median_us,
            p95_us: Some(stats.p95_us),
        }
    }
}

/// The two fixed hardware baselines: an iterative GF(2^8) inversion filling
/// 256 entries at one per cycle, and a ROM image loaded over a 32-bit bus.
pub fn baseline_rows(f_clk_hz: f64) -> Vec<LatencyRow> {
    vec![
        LatencyRow::point("gf-inv-affine", None, 256.0, f_clk_hz),
        LatencyRow::point("rom-load", None, 64.0, f_clk_hz),
    ]
}
