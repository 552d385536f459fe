//! Algebraic normal forms via the binary Moebius transform.

use crate::sbox::SBoxTable;

/// In-place binary Moebius butterfly over a 0/1 truth table, 2^n * n XORs.
/// Involutive: applying it twice restores the input.
pub(crate) fn mobius(truth_table: &mut [u8]) {
    let mut half = 1;
    while half < truth_table.len() {
        for chunk in truth_table.chunks_mut(2 * half) {
            let (a, b) = chunk.split_at_mut(half);
            for i in 0..half {
                b[i] ^= a[i];
            }
        }
        half *= 2;
    }
}

/// ANF coefficient vectors, one per output bit. Entry I of vector i is the
/// coefficient a_I of the monomial prod_{j in I} x_j in S_i.
pub fn anf(table: &SBoxTable) -> Vec<Vec<u8>> {
    (0..table.word_bits())
        .map(|i| {
            let mut tt: Vec<u8> = table
                .entries()
                .iter()
                .map(|&y| (y >> i & 1) as u8)
                .collect();
            mobius(&mut tt);
            tt
        })
        .collect()
}

/// Algebraic degree of one coefficient vector: the largest monomial size with
/// a set coefficient, 0 for the zero function.
pub fn degree_of(coefficients: &[u8]) -> u32 {
    coefficients
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == 1)
        .map(|(index, _)| (index as u32).count_ones())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbox::gf256;

    #[test]
    fn identity_coordinates_are_single_monomials() {
        let coeffs = anf(&SBoxTable::identity(8).unwrap());
        for (i, vector) in coeffs.iter().enumerate() {
            assert_eq!(degree_of(vector), 1);
            let set: Vec<usize> = (0..256).filter(|&idx| vector[idx] == 1).collect();
            assert_eq!(set, vec![1 << i]);
        }
    }

    #[test]
    fn baseline_degrees_are_7() {
        for vector in anf(&gf256::baseline()) {
            assert_eq!(degree_of(&vector), 7);
        }
    }

    #[test]
    fn mobius_is_involutive_on_small_tables() {
        // exhaustive over every 3-variable truth table
        for seed in 0..256u32 {
            let mut tt: Vec<u8> = (0..8).map(|i| (seed >> i & 1) as u8).collect();
            let original = tt.clone();
            mobius(&mut tt);
            mobius(&mut tt);
            assert_eq!(tt, original);
        }
    }

    #[test]
    fn constant_and_zero_functions() {
        let mut zero = vec![0u8; 16];
        mobius(&mut zero);
        assert_eq!(zero, vec![0u8; 16]);
        assert_eq!(degree_of(&zero), 0);
        let mut one = vec![1u8; 16];
        mobius(&mut one);
        let mut expected = vec![0u8; 16];
        expected[0] = 1;
        assert_eq!(one, expected);
        assert_eq!(degree_of(&one), 0);
    }
}
