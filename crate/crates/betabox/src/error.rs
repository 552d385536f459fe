use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("state width {0} is outside the supported range 16..=128")]
    InvalidWidth(u8),

    #[error("fraction 0x{frac:x} does not fit in {width} bits")]
    FracTooWide { frac: u128, width: u8 },

    #[error("beta must be strictly greater than 1")]
    BetaTooSmall,

    #[error("width mismatch: one operand uses {left} fractional bits, the other {right}")]
    WidthMismatch { left: u8, right: u8 },

    #[error("cannot parse {text:?} as a decimal number: {reason}")]
    BadDecimal { text: String, reason: &'static str },

    #[error("dyadic rank {0} exceeds the maximum of 16")]
    RankTooLarge(u8),

    #[error("dyadic rank {rank} exceeds the state width {width}")]
    RankExceedsWidth { rank: u8, width: u8 },

    #[error("a dyadic gate needs at least one interval")]
    EmptyGate,

    #[error("interval index {index} does not exist at rank {rank}")]
    IntervalOutOfRange { index: u64, rank: u8 },

    #[error("word size {0} is outside the supported range 1..=16")]
    BadWordBits(u8),

    #[error("iteration budget {budget} is below the floor {floor} for {bits}-bit words")]
    BudgetTooSmall { budget: u64, floor: u64, bits: u8 },

    #[error("mixer constant 0x{constant:x} does not fit in {bits} bits")]
    MixerConstantTooWide { constant: u16, bits: u8 },

    #[error(
        "InsufficientBlocks: collected {collected} of {needed} distinct words \
         within the iteration budget ({iterations} iterations, {acceptances} acceptances)"
    )]
    InsufficientBlocks {
        collected: u64,
        needed: u64,
        iterations: u64,
        acceptances: u64,
    },

    #[error("gate produced only {produced} of {requested} words within the iteration budget")]
    GateStarved { produced: u64, requested: u64 },

    #[error("uniformity test needs at least {minimum} samples for {bits}-bit words, got {samples}")]
    TooFewSamples {
        samples: u64,
        minimum: u64,
        bits: u8,
    },

    #[error("table is not a bijection")]
    NotBijective,

    #[error("operation requires an 8-bit table, this one has {0}-bit words")]
    WordSizeUnsupported(u8),

    #[error("table entry {entry} does not fit in {bits} bits")]
    EntryTooWide { entry: u16, bits: u8 },

    #[error("table has {len} entries, expected {expected}")]
    WrongTableLength { len: usize, expected: usize },

    #[error("malformed table file: {0}")]
    TableFormat(String),

    #[error("table JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("provenance does not carry generation parameters")]
    NoGenerationRecord,

    #[error("latency config: {0}")]
    BadLatencyConfig(&'static str),
}
