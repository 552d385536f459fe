//! Exact fixed-point beta-transformation engine.
//!
//! A state is a B-bit unsigned fraction x = frac / 2^B in [0, 1); beta is an
//! integer part plus a B-bit fraction of its own. One step computes the full
//! product beta * x in integer arithmetic, splits off the integer part as the
//! digit a = floor(beta * x), and keeps the low B bits as the next state.
//! Every operation truncates, nothing rounds, so orbits are bit-exact and
//! identical on every platform.

use crate::error::{Error, Result};

/// Narrowest supported state, in fractional bits.
pub const MIN_WIDTH: u8 = 16;
/// Widest supported state, in fractional bits.
pub const MAX_WIDTH: u8 = 128;
/// Width used by `Default` parameter sets.
pub const DEFAULT_WIDTH: u8 = 64;

// Fractional parts of the preset multipliers to 128 bits, truncated toward
// zero. Narrower widths take the top bits of these.
const PHI_FRAC_128: u128 = 0x9e3779b97f4a7c15f39cc0605cedc834;
const SILVER_FRAC_128: u128 = 0x6a09e667f3bcc908b2fb1366ea957d3e;
const PI_FRAC_128: u128 = 0x243f6a8885a308d313198a2e03707344;

fn check_width(width: u8) -> Result<()> {
    if (MIN_WIDTH..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::InvalidWidth(width))
    }
}

fn frac_mask(width: u8) -> u128 {
    if width == 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

/// A point of [0, 1) stored as `frac / 2^width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedPointState {
    frac: u128,
    width: u8,
}

impl FixedPointState {
    pub fn new(frac: u128, width: u8) -> Result<Self> {
        check_width(width)?;
        if frac & !frac_mask(width) != 0 {
            return Err(Error::FracTooWide { frac, width });
        }
        Ok(Self { frac, width })
    }

    pub fn zero(width: u8) -> Result<Self> {
        Self::new(0, width)
    }

    /// Parses a decimal in [0, 1) such as `"0.3"` or `".25"`, truncating the
    /// value toward zero to `width` fractional bits.
    pub fn from_decimal(text: &str, width: u8) -> Result<Self> {
        check_width(width)?;
        let (int_digits, frac_digits) = split_decimal(text)?;
        if int_digits.iter().any(|&d| d != 0) {
            return Err(Error::BadDecimal {
                text: text.to_owned(),
                reason: "state must lie in [0, 1)",
            });
        }
        Ok(Self {
            frac: frac_bits_from_digits(&frac_digits, width),
            width,
        })
    }

    pub fn frac_bits(self) -> u128 {
        self.frac
    }

    pub fn width(self) -> u8 {
        self.width
    }

    pub fn is_zero(self) -> bool {
        self.frac == 0
    }

    /// The value as a float, for display only. The engine never consumes this.
    pub fn as_f64(self) -> f64 {
        self.frac as f64 * 2f64.powi(-(self.width as i32))
    }

    /// The top `k` bits of the fraction, i.e. the index of the rank-k dyadic
    /// interval containing the state. `k` must not exceed 64 or the width.
    pub fn top_bits(self, k: u8) -> u64 {
        assert!(k <= 64 && k <= self.width, "top_bits: k out of range");
        if k == 0 {
            0
        } else {
            (self.frac >> (self.width - k)) as u64
        }
    }
}

/// A multiplier beta > 1 stored as `int_part + frac / 2^width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BetaValue {
    int_part: u64,
    frac: u128,
    width: u8,
}

impl BetaValue {
    pub fn new(int_part: u64, frac: u128, width: u8) -> Result<Self> {
        check_width(width)?;
        if frac & !frac_mask(width) != 0 {
            return Err(Error::FracTooWide { frac, width });
        }
        if int_part == 0 || (int_part == 1 && frac == 0) {
            return Err(Error::BetaTooSmall);
        }
        Ok(Self {
            int_part,
            frac,
            width,
        })
    }

    /// Parses a decimal such as `"2.41421356237309504880"`, truncating the
    /// fractional part toward zero to `width` bits. The quantized value must
    /// still exceed 1.
    pub fn from_decimal(text: &str, width: u8) -> Result<Self> {
        check_width(width)?;
        let (int_digits, frac_digits) = split_decimal(text)?;
        let mut int_part: u64 = 0;
        for &d in &int_digits {
            int_part = int_part
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or(Error::BadDecimal {
                    text: text.to_owned(),
                    reason: "integer part does not fit in 64 bits",
                })?;
        }
        Self::new(int_part, frac_bits_from_digits(&frac_digits, width), width)
    }

    pub fn preset(which: BetaPreset, width: u8) -> Result<Self> {
        check_width(width)?;
        let (int_part, frac_128) = match which {
            BetaPreset::Phi => (1, PHI_FRAC_128),
            BetaPreset::Silver => (2, SILVER_FRAC_128),
            BetaPreset::Pi => (3, PI_FRAC_128),
            BetaPreset::Phi1024 => (1025, PHI_FRAC_128),
        };
        Self::new(int_part, frac_128 >> (128 - width as u32), width)
    }

    /// floor(beta), the number of full branches of the map.
    pub fn floor(self) -> u64 {
        self.int_part
    }

    pub fn frac_bits(self) -> u128 {
        self.frac
    }

    pub fn width(self) -> u8 {
        self.width
    }

    pub fn as_f64(self) -> f64 {
        self.int_part as f64 + self.frac as f64 * 2f64.powi(-(self.width as i32))
    }
}

/// Built-in multipliers.
///
/// `Phi1024` is phi lifted by 2^10, i.e. 1025.6180...; the large integer part
/// flattens the digit distribution enough for unbiased word sampling, which
/// plain `Phi` cannot provide (see [`crate::sbox`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaPreset {
    Phi,
    Silver,
    Pi,
    Phi1024,
}

impl BetaPreset {
    pub const ALL: [BetaPreset; 4] = [
        BetaPreset::Phi,
        BetaPreset::Silver,
        BetaPreset::Pi,
        BetaPreset::Phi1024,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BetaPreset::Phi => "phi",
            BetaPreset::Silver => "silver",
            BetaPreset::Pi => "pi",
            BetaPreset::Phi1024 => "phi1024",
        }
    }
}

impl std::str::FromStr for BetaPreset {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "phi" => Ok(BetaPreset::Phi),
            "silver" => Ok(BetaPreset::Silver),
            "pi" => Ok(BetaPreset::Pi),
            "phi1024" => Ok(BetaPreset::Phi1024),
            _ => Err(()),
        }
    }
}

impl std::fmt::Display for BetaPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

fn split_decimal(text: &str) -> Result<(Vec<u8>, Vec<u8>)> {
    let bad = |reason| Error::BadDecimal {
        text: text.to_owned(),
        reason,
    };
    let (int_text, frac_text) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_text.is_empty() && frac_text.is_empty() {
        return Err(bad("no digits"));
    }
    if frac_text.contains('.') {
        return Err(bad("more than one decimal point"));
    }
    let digits = |t: &str| -> Result<Vec<u8>> {
        t.bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    Ok(b - b'0')
                } else {
                    Err(bad("unexpected character"))
                }
            })
            .collect()
    };
    Ok((digits(int_text)?, digits(frac_text)?))
}

/// floor(0.d1 d2 ... dk * 2^width) by repeated doubling of the decimal tail.
fn frac_bits_from_digits(digits: &[u8], width: u8) -> u128 {
    let mut tail: Vec<u8> = digits.to_vec();
    while tail.last() == Some(&0) {
        tail.pop();
    }
    let mut out = 0u128;
    for _ in 0..width {
        let mut carry = 0;
        for d in tail.iter_mut().rev() {
            let doubled = *d * 2 + carry;
            *d = doubled % 10;
            carry = doubled / 10;
        }
        out = (out << 1) | carry as u128;
    }
    out
}

/// Full 128 x 128 -> 256-bit product, returned as (high, low) halves.
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const LO: u128 = 0xffff_ffff_ffff_ffff;
    let (a_hi, a_lo) = (a >> 64, a & LO);
    let (b_hi, b_lo) = (b >> 64, b & LO);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & LO) + (hl & LO);
    let lo = (mid << 64) | (ll & LO);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

/// One exact step of the map: returns (next state, digit).
///
/// With A = floor(beta), P the fraction bits of beta and F the state bits,
/// the full product is V = A * F + floor(P * F / 2^B); the digit is V >> B
/// and the next state keeps the low B bits of V.
pub fn beta_step(state: FixedPointState, beta: BetaValue) -> Result<(FixedPointState, u64)> {
    if state.width != beta.width {
        return Err(Error::WidthMismatch {
            left: beta.width,
            right: state.width,
        });
    }
    let b = state.width as u32;
    let (p_hi, p_lo) = mul_wide(beta.frac, state.frac);
    let t = if b == 128 {
        p_hi
    } else {
        (p_hi << (128 - b)) | (p_lo >> b)
    };
    let (a_hi, a_lo) = mul_wide(beta.int_part as u128, state.frac);
    let (v_lo, carry) = a_lo.overflowing_add(t);
    let v_hi = a_hi + carry as u128;
    // V < (A + 1) * 2^B, so v_hi < 2^(B - 64) and the recombined digit fits
    // in 64 bits.
    let digit = if b == 128 {
        v_hi as u64
    } else {
        ((v_hi << (128 - b)) | (v_lo >> b)) as u64
    };
    let next = FixedPointState {
        frac: v_lo & frac_mask(state.width),
        width: state.width,
    };
    Ok((next, digit))
}

/// The symbol emitted for a digit: 1 when the digit falls in the upper half
/// of 0..=floor(beta), i.e. when 2 * digit >= floor(beta).
pub fn threshold_bit(digit: u64, beta_floor: u64) -> bool {
    // digit >= ceil(beta_floor / 2), written so nothing overflows
    digit >= beta_floor / 2 + (beta_floor & 1)
}

/// Infinite iterator over orbit steps. `state()` exposes the point the next
/// step departs from, so T^m is readable before step m is taken.
#[derive(Debug, Clone)]
pub struct Orbit {
    beta: BetaValue,
    state: FixedPointState,
}

impl Orbit {
    pub fn new(beta: BetaValue, x0: FixedPointState) -> Result<Self> {
        if x0.width != beta.width {
            return Err(Error::WidthMismatch {
                left: beta.width,
                right: x0.width,
            });
        }
        Ok(Self { beta, state: x0 })
    }

    pub fn state(&self) -> FixedPointState {
        self.state
    }

    pub fn beta(&self) -> BetaValue {
        self.beta
    }
}

/// One orbit step: the state after the step, the digit it produced, and the
/// digit's threshold symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitSample {
    pub state_after: FixedPointState,
    pub digit: u64,
    pub bit: bool,
}

impl Iterator for Orbit {
    type Item = OrbitSample;

    fn next(&mut self) -> Option<OrbitSample> {
        let (next, digit) = beta_step(self.state, self.beta).expect("widths checked in Orbit::new");
        self.state = next;
        Some(OrbitSample {
            state_after: next,
            digit,
            bit: threshold_bit(digit, self.beta.int_part),
        })
    }
}

/// The first `length` steps of the orbit of `x0`.
pub fn orbit_stream(
    beta: BetaValue,
    x0: FixedPointState,
    length: u64,
) -> Result<impl Iterator<Item = OrbitSample>> {
    Ok(Orbit::new(beta, x0)?.take(length as usize))
}
