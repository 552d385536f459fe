//! Walsh spectra, nonlinearity, and the linear approximation table.

use crate::sbox::SBoxTable;

/// In-place fast Walsh-Hadamard butterfly, 2^n * n additions.
pub(crate) fn fwht(values: &mut [i32]) {
    let mut half = 1;
    while half < values.len() {
        for chunk in values.chunks_mut(2 * half) {
            let (a, b) = chunk.split_at_mut(half);
            for i in 0..half {
                let (x, y) = (a[i], b[i]);
                a[i] = x + y;
                b[i] = x - y;
            }
        }
        half *= 2;
    }
}

/// All Walsh coefficients W(a, b) = sum_x (-1)^(a.x xor b.S(x)) for one
/// output mask b, indexed by a. b = 0 is permitted and gives the trivial row.
pub fn walsh_row(table: &SBoxTable, b_mask: u16) -> Vec<i32> {
    let mut signs: Vec<i32> = table
        .entries()
        .iter()
        .map(|&y| 1 - 2 * ((y & b_mask).count_ones() & 1) as i32)
        .collect();
    fwht(&mut signs);
    signs
}

/// Largest |W(a, b)| over a != 0 within one row.
pub(crate) fn row_max_nontrivial(row: &[i32]) -> u32 {
    row[1..].iter().map(|w| w.unsigned_abs()).max().unwrap_or(0)
}

/// Nonlinearity, per output bit and over all components.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityReport {
    /// 2^(n-1) - max_{a != 0} |W(a, e_i)| / 2 for each output bit i.
    pub per_bit: Vec<u32>,
    pub min: u32,
    pub avg: f64,
    /// The same quantity minimized over every nonzero output mask.
    pub component_min: u32,
}

pub fn nonlinearity(table: &SBoxTable) -> NonlinearityReport {
    let n = table.word_bits() as usize;
    let half = (table.len() / 2) as u32;
    let mut per_bit = vec![0u32; n];
    let mut component_min = u32::MAX;
    for b in 1..table.len() as u32 {
        let row = walsh_row(table, b as u16);
        let nl = half - row_max_nontrivial(&row) / 2;
        if b.is_power_of_two() {
            per_bit[b.trailing_zeros() as usize] = nl;
        }
        component_min = component_min.min(nl);
    }
    let min = per_bit.iter().copied().min().unwrap_or(0);
    let avg = per_bit.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    NonlinearityReport {
        per_bit,
        min,
        avg,
        component_min,
    }
}

/// The full linear approximation table, LAT(a, b) = W(a, b), as rows indexed
/// by b. Quadratic in the table size; fine for n <= 12.
pub fn lat(table: &SBoxTable) -> Vec<Vec<i32>> {
    (0..table.len() as u32)
        .map(|b| walsh_row(table, b as u16))
        .collect()
}
