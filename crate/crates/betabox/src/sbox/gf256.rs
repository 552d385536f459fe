//! GF(2^8) inversion baseline.
//!
//! The field is GF(2)[x] / (x^8 + x^4 + x^3 + x + 1), reduction byte 0x1b.
//! The baseline table inverts (with 0 fixed) and then applies the affine
//! sweep b -> b ^ rotl(b,1) ^ rotl(b,2) ^ rotl(b,3) ^ rotl(b,4) ^ 0x63. It
//! serves as the quality yardstick for generated boxes and as the iterative
//! hardware design the latency model compares against.

use super::{Provenance, SBoxTable};

/// Carry-less multiply with reduction.
pub fn mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        let overflow = a & 0x80 != 0;
        a <<= 1;
        if overflow {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    acc
}

/// Multiplicative inverse via a^254; maps 0 to 0 with no special case.
pub fn inv(a: u8) -> u8 {
    let mut acc = 1u8;
    let mut square = a;
    let mut exp = 254u8;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = mul(acc, square);
        }
        square = mul(square, square);
        exp >>= 1;
    }
    acc
}

fn affine(b: u8) -> u8 {
    b ^ b.rotate_left(1) ^ b.rotate_left(2) ^ b.rotate_left(3) ^ b.rotate_left(4) ^ 0x63
}

/// The full 256-entry inversion-plus-affine table.
pub fn baseline() -> SBoxTable {
    let entries = (0..256u16).map(|x| affine(inv(x as u8)) as u16).collect();
    SBoxTable {
        word_bits: 8,
        entries,
        provenance: Provenance::GfBaseline,
    }
}
