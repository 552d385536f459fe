//! Difference distribution tables.

use crate::sbox::SBoxTable;

/// The full 2^n x 2^n table: cell (dx, dy) counts the x with
/// S(x) ^ S(x ^ dx) = dy. Quadratic in the table size; fine for n <= 12.
pub fn ddt(table: &SBoxTable) -> Vec<Vec<u32>> {
    let size = table.len();
    let mut rows = vec![vec![0u32; size]; size];
    for dx in 0..size {
        for x in 0..size {
            let dy = table.get(x as u16) ^ table.get((x ^ dx) as u16);
            rows[dx][dy as usize] += 1;
        }
    }
    rows
}
