//! Dyadic interval gates.
//!
//! A rank-k dyadic set is a union of intervals [j/2^k, (j+1)/2^k). Membership
//! of a fixed-point state is a mask of its top k bits, so a gate test costs a
//! shift and one bit lookup regardless of rank.

use crate::error::{Error, Result};
use crate::fixedpoint::{BetaValue, FixedPointState, Orbit};

/// Largest supported rank; a rank-16 set distinguishes 65536 cells.
pub const MAX_RANK: u8 = 16;

/// A union of rank-k dyadic intervals, stored as a membership bitset over the
/// 2^k cell indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicSet {
    rank: u8,
    bits: Vec<u64>,
}

impl DyadicSet {
    /// The whole of [0, 1): the single rank-0 cell.
    pub fn full() -> Self {
        Self {
            rank: 0,
            bits: vec![1],
        }
    }

    /// One interval [index/2^k, (index+1)/2^k).
    pub fn single(rank: u8, index: u64) -> Result<Self> {
        Self::from_indices(rank, &[index])
    }

    /// A union of intervals at a common rank. Duplicate indices collapse.
    pub fn from_indices(rank: u8, indices: &[u64]) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge(rank));
        }
        if indices.is_empty() {
            return Err(Error::EmptyGate);
        }
        let cells = 1u64 << rank;
        let mut bits = vec![0u64; cells.div_ceil(64) as usize];
        for &index in indices {
            if index >= cells {
                return Err(Error::IntervalOutOfRange { index, rank });
            }
            bits[(index / 64) as usize] |= 1 << (index % 64);
        }
        Ok(Self { rank, bits })
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn contains_index(&self, index: u64) -> bool {
        index < 1 << self.rank && self.bits[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    /// Whether the state falls in one of the intervals. The state must be at
    /// least `rank` bits wide; generation parameters enforce that up front.
    pub fn contains(&self, state: FixedPointState) -> bool {
        self.contains_index(state.top_bits(self.rank))
    }

    /// Number of intervals in the union.
    pub fn interval_count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Lebesgue measure as the exact fraction (intervals, 2^rank).
    pub fn measure(&self) -> (u64, u64) {
        (self.interval_count(), 1 << self.rank)
    }

    pub fn measure_f64(&self) -> f64 {
        let (num, den) = self.measure();
        num as f64 / den as f64
    }

    /// Member cell indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.rank).filter(|&i| self.contains_index(i))
    }
}

/// Indices m (from 0, counting x0 itself as T^0) whose orbit point T^m falls
/// in the gate, scanning the first `horizon` points.
pub fn sampling_times(
    beta: BetaValue,
    x0: FixedPointState,
    gate: &DyadicSet,
    horizon: u64,
) -> Result<impl Iterator<Item = u64> + '_> {
    if gate.rank > x0.width() {
        return Err(Error::RankExceedsWidth {
            rank: gate.rank,
            width: x0.width(),
        });
    }
    let mut orbit = Orbit::new(beta, x0)?;
    Ok((0..horizon).filter_map(move |m| {
        let hit = gate.contains(orbit.state());
        orbit.next();
        hit.then_some(m)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::BetaPreset;

    fn state(text: &str) -> FixedPointState {
        FixedPointState::from_decimal(text, 64).unwrap()
    }

    #[test]
    fn single_interval_measure() {
        let gate = DyadicSet::single(4, 9).unwrap();
        assert_eq!(gate.measure(), (1, 16));
        assert_eq!(gate.measure_f64(), 0.0625);
        assert_eq!(gate.indices().collect::<Vec<_>>(), vec![9]);
    }

    #[test]
    fn default_gate_contains_examples() {
        // [5/8, 6/8)
        let gate = DyadicSet::single(3, 5).unwrap();
        assert!(gate.contains(state("0.64")));
        assert!(gate.contains(state("0.625")));
        assert!(!gate.contains(state("0.75")));
        assert!(!gate.contains(state("0.5")));
        assert!(!gate.contains(state("0")));
    }

    #[test]
    fn full_set_admits_everything() {
        let gate = DyadicSet::full();
        assert_eq!(gate.measure(), (1, 1));
        for x in ["0", "0.3", "0.999"] {
            assert!(gate.contains(state(x)));
        }
    }

    #[test]
    fn unions_and_duplicates() {
        let gate = DyadicSet::from_indices(3, &[1, 5, 5, 1]).unwrap();
        assert_eq!(gate.interval_count(), 2);
        assert_eq!(gate.measure(), (2, 8));
        assert_eq!(gate.indices().collect::<Vec<_>>(), vec![1, 5]);
        assert!(gate.contains_index(1));
        assert!(!gate.contains_index(2));
        assert!(!gate.contains_index(8));
    }

    #[test]
    fn rank_16_extremes() {
        let gate = DyadicSet::from_indices(16, &[0, 65535]).unwrap();
        assert_eq!(gate.measure(), (2, 65536));
        assert!(gate.contains(state("0")));
        assert!(gate.contains(state("0.99999")));
        assert!(!gate.contains(state("0.5")));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            DyadicSet::single(17, 0),
            Err(Error::RankTooLarge(17))
        ));
        assert!(matches!(
            DyadicSet::from_indices(3, &[]),
            Err(Error::EmptyGate)
        ));
        assert!(matches!(
            DyadicSet::single(3, 8),
            Err(Error::IntervalOutOfRange { index: 8, rank: 3 })
        ));
    }

    #[test]
    fn membership_fraction_is_exact_at_width_16() {
        // exhaustive over all 16-bit states: the hit rate of a rank-k set is
        // exactly its measure
        for (rank, indices) in [(1, vec![1]), (3, vec![0, 5]), (4, vec![2, 3, 11])] {
            let gate = DyadicSet::from_indices(rank, &indices).unwrap();
            let hits = (0..1u128 << 16)
                .filter(|&f| gate.contains(FixedPointState::new(f, 16).unwrap()))
                .count() as u64;
            let (num, den) = gate.measure();
            assert_eq!(hits, num * ((1 << 16) / den));
        }
    }

    #[test]
    fn sampling_times_count_from_zero() {
        let beta = BetaValue::preset(BetaPreset::Phi, 64).unwrap();
        // x0 already inside the gate: time 0 is reported
        let gate = DyadicSet::single(1, 1).unwrap();
        let first = sampling_times(beta, state("0.75"), &gate, 100)
            .unwrap()
            .next();
        assert_eq!(first, Some(0));
        // phi orbit of 0.3: T^0 = 0.3, T^1 = 0.485, T^2 = 0.785 is the first
        // point at or above one half
        let times: Vec<_> = sampling_times(beta, state("0.3"), &gate, 12)
            .unwrap()
            .collect();
        assert_eq!(times[0], 2);
        assert!(times.iter().all(|&m| m < 12));
    }

    #[test]
    fn sampling_at_the_narrowest_width() {
        // rank 16 against a 16-bit state exercises the tightest rank/width fit
        let beta = BetaValue::preset(BetaPreset::Silver, 16).unwrap();
        let x0 = FixedPointState::new(0x4ccc, 16).unwrap();
        let gate = DyadicSet::from_indices(16, &[0x4ccc]).unwrap();
        let first = sampling_times(beta, x0, &gate, 4).unwrap().next();
        assert_eq!(first, Some(0));
    }
}
