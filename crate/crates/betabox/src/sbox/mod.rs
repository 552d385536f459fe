//! S-box generation from gated beta-expansion bit streams.
//!
//! The generator walks the orbit of x0 under beta, and every time the point
//! falls inside a dyadic gate it reads the next n threshold bits as a
//! candidate word. Fresh words fill the table in first-seen order; repeats
//! count as duplicates. Once all 2^n words have appeared the table is a
//! bijection by construction, optionally composed with a cheap index mixer.
//!
//! Not every multiplier can finish: golden-ratio expansions never place two
//! 1-bits back to back, so at most 55 distinct 8-bit words exist in the whole
//! stream and `BetaPreset::Phi` stalls with `Error::InsufficientBlocks`. The
//! default `BetaPreset::Phi1024` has 1026 branches and none of that rigidity.

pub mod gf256;
pub(crate) mod stream;

use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicSet;
use crate::error::{Error, Result};
use crate::fixedpoint::{BetaPreset, BetaValue, FixedPointState, DEFAULT_WIDTH};
use stream::WordStream;

/// Post-processing permutation of table indices, applied once at the end of
/// generation as table[mix(x)].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mixer {
    Identity,
    /// x -> rotl(x, 1) ^ constant on n-bit indices.
    XorRotate { constant: u16 },
}

impl Mixer {
    pub fn apply(self, x: u16, bits: u8) -> u16 {
        match self {
            Mixer::Identity => x,
            Mixer::XorRotate { constant } => {
                let mask = if bits == 16 { u16::MAX } else { (1 << bits) - 1 };
                let rotated = ((x << 1) | (x >> (bits - 1))) & mask;
                rotated ^ constant
            }
        }
    }
}

/// How the cursor moves after an accepted word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stride {
    /// Advance one step; successive windows may share bits.
    Overlapping,
    /// Advance n steps so windows never overlap.
    SkipAfterAccept,
}

/// Everything the generator needs. `Default` gives the reference setup:
/// 64-bit states, beta = 1025.618..., x0 = 0.3, gate [5/8, 6/8), 8-bit words,
/// a one-million-step budget, no mixer, overlapping stride.
#[derive(Debug, Clone)]
pub struct GenerationParams {
    pub beta: BetaValue,
    pub x0: FixedPointState,
    pub gate: DyadicSet,
    pub word_bits: u8,
    pub budget: u64,
    pub mixer: Mixer,
    pub stride: Stride,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self {
            beta: BetaValue::preset(BetaPreset::Phi1024, DEFAULT_WIDTH).expect("preset is valid"),
            x0: FixedPointState::from_decimal("0.3", DEFAULT_WIDTH).expect("literal is valid"),
            gate: DyadicSet::single(3, 5).expect("gate is valid"),
            word_bits: 8,
            budget: 1_000_000,
            mixer: Mixer::Identity,
            stride: Stride::Overlapping,
        }
    }
}

impl GenerationParams {
    pub fn validate(&self) -> Result<()> {
        if self.beta.width() != self.x0.width() {
            return Err(Error::WidthMismatch {
                left: self.beta.width(),
                right: self.x0.width(),
            });
        }
        if !(1..=16).contains(&self.word_bits) {
            return Err(Error::BadWordBits(self.word_bits));
        }
        if self.gate.rank() > self.x0.width() {
            return Err(Error::RankExceedsWidth {
                rank: self.gate.rank(),
                width: self.x0.width(),
            });
        }
        let floor = self.word_bits as u64 * (1u64 << self.word_bits);
        if self.budget < floor {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                floor,
                bits: self.word_bits,
            });
        }
        if let Mixer::XorRotate { constant } = self.mixer {
            if self.word_bits < 16 && constant >= 1 << self.word_bits {
                return Err(Error::MixerConstantTooWide {
                    constant,
                    bits: self.word_bits,
                });
            }
        }
        Ok(())
    }
}

/// Counters from one generation run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenTrace {
    /// Orbit steps consumed.
    pub iterations: u64,
    /// Gate hits, i.e. words drawn from the stream.
    pub acceptances: u64,
    /// Accepted words that had already been seen.
    pub duplicates: u64,
}

/// Flat record of generation parameters, exact and serializable. Fractions
/// travel as hex strings so no width or precision is lost in transit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub width: u8,
    pub beta_int: u64,
    pub beta_frac_hex: String,
    pub x0_frac_hex: String,
    pub gate_rank: u8,
    pub gate_indices: Vec<u64>,
    pub word_bits: u8,
    pub budget: u64,
    pub mixer: Mixer,
    pub stride: Stride,
}

impl ParamsRecord {
    pub fn from_params(params: &GenerationParams) -> Self {
        Self {
            width: params.x0.width(),
            beta_int: params.beta.floor(),
            beta_frac_hex: format!("{:x}", params.beta.frac_bits()),
            x0_frac_hex: format!("{:x}", params.x0.frac_bits()),
            gate_rank: params.gate.rank(),
            gate_indices: params.gate.indices().collect(),
            word_bits: params.word_bits,
            budget: params.budget,
            mixer: params.mixer,
            stride: params.stride,
        }
    }

    pub fn to_params(&self) -> Result<GenerationParams> {
        let frac = |hex: &str| {
            u128::from_str_radix(hex, 16)
                .map_err(|_| Error::TableFormat(format!("bad fraction hex {hex:?}")))
        };
        Ok(GenerationParams {
            beta: BetaValue::new(self.beta_int, frac(&self.beta_frac_hex)?, self.width)?,
            x0: FixedPointState::new(frac(&self.x0_frac_hex)?, self.width)?,
            gate: DyadicSet::from_indices(self.gate_rank, &self.gate_indices)?,
            word_bits: self.word_bits,
            budget: self.budget,
            mixer: self.mixer,
            stride: self.stride,
        })
    }
}

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Built by [`generate`], with the exact parameters and run counters.
    Generated { params: ParamsRecord, trace: GenTrace },
    /// The GF(2^8) inversion baseline.
    GfBaseline,
    /// The identity permutation.
    Identity,
    /// Parsed from a file or derived from another table; no generation
    /// record exists.
    File,
}

/// A lookup table over n-bit words. Entries are not required to be bijective
/// (analysis accepts arbitrary tables); the generator only ever produces
/// bijections.
#[derive(Debug, Clone, PartialEq)]
pub struct SBoxTable {
    word_bits: u8,
    entries: Vec<u16>,
    provenance: Provenance,
}

impl SBoxTable {
    pub fn from_entries(word_bits: u8, entries: Vec<u16>, provenance: Provenance) -> Result<Self> {
        if !(1..=16).contains(&word_bits) {
            return Err(Error::BadWordBits(word_bits));
        }
        let size = 1usize << word_bits;
        if entries.len() != size {
            return Err(Error::WrongTableLength {
                len: entries.len(),
                expected: size,
            });
        }
        if let Some(&entry) = entries.iter().find(|&&e| e as usize >= size) {
            return Err(Error::EntryTooWide {
                entry,
                bits: word_bits,
            });
        }
        Ok(Self {
            word_bits,
            entries,
            provenance,
        })
    }

    pub fn identity(word_bits: u8) -> Result<Self> {
        if !(1..=16).contains(&word_bits) {
            return Err(Error::BadWordBits(word_bits));
        }
        Ok(Self {
            word_bits,
            entries: (0..1u32 << word_bits).map(|x| x as u16).collect(),
            provenance: Provenance::Identity,
        })
    }

    pub fn word_bits(&self) -> u8 {
        self.word_bits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, x: u16) -> u16 {
        self.entries[x as usize]
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.entries.len()];
        for &e in &self.entries {
            if std::mem::replace(&mut seen[e as usize], true) {
                return false;
            }
        }
        true
    }

    /// The inverse permutation. Fails on non-bijective tables.
    pub fn invert(&self) -> Result<SBoxTable> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let mut inverse = vec![0u16; self.entries.len()];
        for (x, &y) in self.entries.iter().enumerate() {
            inverse[y as usize] = x as u16;
        }
        Ok(Self {
            word_bits: self.word_bits,
            entries: inverse,
            provenance: Provenance::File,
        })
    }

    /// Applies the table to each byte. Only 8-bit tables substitute bytes.
    pub fn substitute(&self, data: &[u8]) -> Result<Vec<u8>> {
        if self.word_bits != 8 {
            return Err(Error::WordSizeUnsupported(self.word_bits));
        }
        Ok(data.iter().map(|&b| self.entries[b as usize] as u8).collect())
    }

    /// The table reindexed by a mixer: S'(x) = S(mix(x)).
    pub fn apply_mixer(&self, mixer: Mixer) -> Result<SBoxTable> {
        if let Mixer::XorRotate { constant } = mixer {
            if self.word_bits < 16 && constant >= 1 << self.word_bits {
                return Err(Error::MixerConstantTooWide {
                    constant,
                    bits: self.word_bits,
                });
            }
        }
        let entries = (0..self.entries.len())
            .map(|x| self.entries[mixer.apply(x as u16, self.word_bits) as usize])
            .collect();
        Ok(Self {
            word_bits: self.word_bits,
            entries,
            provenance: self.provenance.clone(),
        })
    }
}

/// Runs the gated collection loop until every n-bit word has been seen once,
/// then composes the mixer. Returns the table and the run counters; fails
/// with [`Error::InsufficientBlocks`] when the budget runs out first.
pub fn generate(params: &GenerationParams) -> Result<(SBoxTable, GenTrace)> {
    let mut words = WordStream::new(params)?;
    let size = 1usize << params.word_bits;
    let mut seen = vec![0u64; size.div_ceil(64)];
    let mut order: Vec<u16> = Vec::with_capacity(size);
    let mut duplicates = 0u64;
    while order.len() < size {
        let Some(word) = words.next_word() else { break };
        let (slot, bit) = (word as usize / 64, word % 64);
        if seen[slot] >> bit & 1 == 1 {
            duplicates += 1;
        } else {
            seen[slot] |= 1 << bit;
            order.push(word);
        }
    }
    let trace = GenTrace {
        iterations: words.iterations(),
        acceptances: words.acceptances(),
        duplicates,
    };
    if order.len() < size {
        return Err(Error::InsufficientBlocks {
            collected: order.len() as u64,
            needed: size as u64,
            iterations: trace.iterations,
            acceptances: trace.acceptances,
        });
    }
    let entries = (0..size)
        .map(|x| order[params.mixer.apply(x as u16, params.word_bits) as usize])
        .collect();
    let table = SBoxTable {
        word_bits: params.word_bits,
        entries,
        provenance: Provenance::Generated {
            params: ParamsRecord::from_params(params),
            trace,
        },
    };
    Ok((table, trace))
}
