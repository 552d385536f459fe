//! The cryptanalytic measurement kit.
//!
//! Walsh spectra and nonlinearity, difference distribution tables, linear
//! approximation tables, algebraic normal forms, and stream uniformity, all
//! collected into one serializable [`CryptoReport`].

pub mod anf;
pub mod ddt;
pub mod uniformity;
pub mod walsh;

pub use anf::{anf, degree_of};
pub use ddt::ddt;
pub use uniformity::{chi2_band, uniformity_test, UniformityReport};
pub use walsh::{lat, nonlinearity, walsh_row, NonlinearityReport};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbox::{GenerationParams, SBoxTable};

/// An exact ratio with its float value alongside, as reports print both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub numer: u64,
    pub denom: u64,
    pub value: f64,
}

impl Fraction {
    pub fn new(numer: u64, denom: u64) -> Self {
        Self {
            numer,
            denom,
            value: numer as f64 / denom as f64,
        }
    }
}

/// Every metric the kit computes, in one stable-schema record.
///
/// Histogram conventions: `ddt_histogram` buckets cell values over the
/// 2^n * (2^n - 1) cells with dx != 0; `lat_histogram` buckets |W(a, b)| over
/// the cells with b != 0. `anf_monomial_counts[d]` is the number of set
/// degree-d coefficients averaged across the n output bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CryptoReport {
    pub n: u8,
    pub bijective: bool,
    pub per_bit_nonlinearity: Vec<u32>,
    pub min_nl: u32,
    pub avg_nl: f64,
    pub component_min_nl: u32,
    /// Display-only random-table yardstick 2^(n-1) - sqrt(2^n * ln 2^n).
    pub heuristic_nl_bound: f64,
    pub ddt_max: u32,
    pub ddt_max_prob: Fraction,
    pub ddt_histogram: BTreeMap<u32, u64>,
    pub lat_max_abs: u32,
    pub linear_prob_max: Fraction,
    pub lat_histogram: BTreeMap<u32, u64>,
    pub per_bit_degree: Vec<u32>,
    pub anf_monomial_counts: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity_chi2: Option<UniformityReport>,
}

fn highest_occupied(counts: &[u64]) -> u32 {
    counts
        .iter()
        .rposition(|&c| c > 0)
        .map(|v| v as u32)
        .unwrap_or(0)
}

fn to_histogram(counts: &[u64]) -> BTreeMap<u32, u64> {
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(value, &c)| (value as u32, c))
        .collect()
}

/// Runs the full metric suite. Works on arbitrary tables; `bijective` is the
/// warning flag for inputs where the permutation metrics lose their usual
/// meaning. Memory stays linear in the table size, so large n only costs
/// time.
pub fn analyze(table: &SBoxTable) -> CryptoReport {
    let n = table.word_bits();
    let size = table.len();
    let half = (size / 2) as u32;

    let mut per_bit_nonlinearity = vec![0u32; n as usize];
    let mut component_min_nl = u32::MAX;
    let mut lat_counts = vec![0u64; size + 1];
    for b in 1..size as u32 {
        let row = walsh::walsh_row(table, b as u16);
        for &w in &row {
            lat_counts[w.unsigned_abs() as usize] += 1;
        }
        let nl = half - walsh::row_max_nontrivial(&row) / 2;
        if b.is_power_of_two() {
            per_bit_nonlinearity[b.trailing_zeros() as usize] = nl;
        }
        component_min_nl = component_min_nl.min(nl);
    }
    let lat_max_abs = highest_occupied(&lat_counts);
    let lat_histogram = to_histogram(&lat_counts);
    let min_nl = per_bit_nonlinearity.iter().copied().min().unwrap_or(0);
    let avg_nl =
        per_bit_nonlinearity.iter().map(|&v| v as f64).sum::<f64>() / n as f64;

    let mut ddt_counts = vec![0u64; size + 1];
    let mut row = vec![0u32; size];
    for dx in 1..size {
        row.fill(0);
        for x in 0..size {
            let dy = table.get(x as u16) ^ table.get((x ^ dx) as u16);
            row[dy as usize] += 1;
        }
        for &count in &row {
            ddt_counts[count as usize] += 1;
        }
    }
    let ddt_max = highest_occupied(&ddt_counts);
    let ddt_histogram = to_histogram(&ddt_counts);

    let mut per_bit_degree = vec![0u32; n as usize];
    let mut monomial_sums = vec![0u64; n as usize + 1];
    for (i, coefficients) in anf::anf(table).into_iter().enumerate() {
        for (index, &c) in coefficients.iter().enumerate() {
            if c == 1 {
                let d = (index as u32).count_ones();
                monomial_sums[d as usize] += 1;
                per_bit_degree[i] = per_bit_degree[i].max(d);
            }
        }
    }
    let anf_monomial_counts = monomial_sums
        .iter()
        .map(|&sum| sum as f64 / n as f64)
        .collect();

    let size_f = size as f64;
    CryptoReport {
        n,
        bijective: table.is_bijective(),
        per_bit_nonlinearity,
        min_nl,
        avg_nl,
        component_min_nl,
        heuristic_nl_bound: half as f64 - (size_f * size_f.ln()).sqrt(),
        ddt_max,
        ddt_max_prob: Fraction::new(ddt_max as u64, size as u64),
        ddt_histogram,
        lat_max_abs,
        linear_prob_max: Fraction::new(size as u64 + lat_max_abs as u64, 2 * size as u64),
        lat_histogram,
        per_bit_degree,
        anf_monomial_counts,
        uniformity_chi2: None,
    }
}

/// [`analyze`] plus a uniformity run of the word stream the table was (or
/// would be) drawn from.
pub fn analyze_with_uniformity(
    table: &SBoxTable,
    params: &GenerationParams,
    samples: u64,
) -> Result<CryptoReport> {
    if params.word_bits != table.word_bits() {
        return Err(Error::TableFormat(format!(
            "uniformity parameters target {}-bit words but the table has {}-bit words",
            params.word_bits,
            table.word_bits()
        )));
    }
    let mut report = analyze(table);
    report.uniformity_chi2 = Some(uniformity::uniformity_test(params, samples)?);
    Ok(report)
}
