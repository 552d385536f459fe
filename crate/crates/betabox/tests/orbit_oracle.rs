//! Exact-arithmetic oracle for the fixed-point orbit engine.
//!
//! Three of the preset multipliers are quadratic irrationals, so every real
//! quantity the engine approximates lives in Q(sqrt d) and can be computed
//! exactly with big rationals. Each engine step is re-derived from the
//! engine's own pre-step state s = F / 2^B (a rational number, so no error
//! accumulates across steps):
//!
//!   * the exact digit floor(s * beta) must equal the engine digit, and the
//!     threshold symbol must follow from it;
//!   * the engine's next state may only sit slightly below the exact
//!     remainder: 0 <= 2^B * (s * beta mod 1) - F' < 2, one unit from the
//!     truncated multiplier plus one from the truncated product.
//!
//! Steps where s * beta falls within 2^-20 of an integer are skipped: there
//! the engine's truncated multiplier may legitimately round the digit the
//! other way. The margin between the guard and the true error bound
//! (~2^-31) is ten binary orders of magnitude, and ambiguity is counted and
//! must stay rare.

use num::{BigInt, BigRational, One, ToPrimitive};

use betabox::fixedpoint::{threshold_bit, BetaPreset, BetaValue, FixedPointState, Orbit};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// beta = p + q * sqrt(d) exactly, with q > 0.
struct ExactBeta {
    p: BigRational,
    q: BigRational,
    sqrt_lo: BigRational,
    sqrt_hi: BigRational,
}

impl ExactBeta {
    /// Bounds sqrt(d) between two rationals 2^-200 apart.
    fn new(p: BigRational, q: BigRational, d: u32) -> Self {
        let scale = BigInt::one() << 200u32;
        let root = (BigInt::from(d) * &scale * &scale).sqrt();
        Self {
            p,
            q,
            sqrt_lo: BigRational::new(root.clone(), scale.clone()),
            sqrt_hi: BigRational::new(root + 1, scale),
        }
    }

    fn phi() -> Self {
        Self::new(ratio(1, 2), ratio(1, 2), 5)
    }

    fn silver() -> Self {
        Self::new(ratio(1, 1), ratio(1, 1), 2)
    }

    fn phi1024() -> Self {
        Self::new(ratio(2049, 2), ratio(1, 2), 5)
    }
}

struct OracleTally {
    checked: u64,
    skipped: u64,
}

/// Walks `steps` engine steps and proves each one against exact arithmetic.
fn verify_orbit(preset: BetaPreset, exact: &ExactBeta, width: u8, steps: u64) -> OracleTally {
    let beta = BetaValue::preset(preset, width).unwrap();
    let x0 = FixedPointState::from_decimal("0.3", width).unwrap();
    let mut orbit = Orbit::new(beta, x0).unwrap();
    let one = BigRational::one();
    let two = &one + &one;
    let epsilon = BigRational::new(BigInt::one(), BigInt::one() << 20u32);
    let pow_b = BigRational::from(BigInt::one() << width as u32);
    let mut tally = OracleTally {
        checked: 0,
        skipped: 0,
    };
    for _ in 0..steps {
        let before = orbit.state();
        let sample = orbit.next().unwrap();

        // z = s * beta bracketed by rationals: z in [lo, hi], hi - lo ~ 2^-200
        let s = BigRational::new(BigInt::from(before.frac_bits()), BigInt::one() << width as u32);
        let rational_part = &s * &exact.p;
        let surd_part = &s * &exact.q;
        let lo = &rational_part + &surd_part * &exact.sqrt_lo;
        let hi = &rational_part + &surd_part * &exact.sqrt_hi;
        let floor_lo = lo.floor();
        let floor_hi = hi.floor();
        if floor_lo != floor_hi {
            tally.skipped += 1;
            continue;
        }
        let frac_lo = &lo - &floor_lo;
        let frac_hi = &hi - &floor_lo;
        if frac_lo <= epsilon || &one - &frac_hi <= epsilon {
            tally.skipped += 1;
            continue;
        }

        let exact_digit = floor_lo.to_integer().to_u64().expect("digit fits in u64");
        assert_eq!(
            sample.digit, exact_digit,
            "digit mismatch at state {:#x} (width {width})",
            before.frac_bits()
        );
        assert_eq!(sample.bit, threshold_bit(exact_digit, beta.floor()));

        // scaled remainder bounds: 2^B * (z - floor z) in [rem_lo, rem_hi]
        let rem_lo = &frac_lo * &pow_b;
        let rem_hi = &frac_hi * &pow_b;
        let engine_next = BigRational::from(BigInt::from(sample.state_after.frac_bits()));
        assert!(
            engine_next <= rem_hi,
            "engine state above the exact remainder at {:#x}",
            before.frac_bits()
        );
        assert!(
            &rem_lo - &engine_next < two,
            "engine state more than 2 units below the exact remainder at {:#x}",
            before.frac_bits()
        );
        tally.checked += 1;
    }
    tally
}

fn assert_mostly_checked(tally: &OracleTally, steps: u64) {
    assert!(
        tally.skipped * 100 < steps,
        "too many boundary skips: {} of {steps}",
        tally.skipped
    );
    assert_eq!(tally.checked + tally.skipped, steps);
}

#[test]
fn golden_ratio_orbit_is_exact_at_width_32() {
    let steps = 10_000;
    let tally = verify_orbit(BetaPreset::Phi, &ExactBeta::phi(), 32, steps);
    assert_mostly_checked(&tally, steps);
}

#[test]
fn silver_ratio_orbit_is_exact_at_width_32() {
    let steps = 10_000;
    let tally = verify_orbit(BetaPreset::Silver, &ExactBeta::silver(), 32, steps);
    assert_mostly_checked(&tally, steps);
}

#[test]
fn lifted_golden_orbit_is_exact_at_width_32() {
    let steps = 10_000;
    let tally = verify_orbit(BetaPreset::Phi1024, &ExactBeta::phi1024(), 32, steps);
    assert_mostly_checked(&tally, steps);
}

#[test]
fn lifted_golden_orbit_is_exact_at_the_default_width() {
    let steps = 2_000;
    let tally = verify_orbit(BetaPreset::Phi1024, &ExactBeta::phi1024(), 64, steps);
    assert_mostly_checked(&tally, steps);
}

#[test]
fn golden_ratio_orbit_is_exact_at_the_widest_state() {
    let steps = 1_000;
    let tally = verify_orbit(BetaPreset::Phi, &ExactBeta::phi(), 128, steps);
    assert_mostly_checked(&tally, steps);
}

/// Brent-style cycle search: the default configuration must not revisit a
/// state within the first million steps, or tables would be built from a
/// short periodic bit stream.
#[test]
fn default_orbit_has_no_short_cycle() {
    let beta = BetaValue::preset(BetaPreset::Phi1024, 64).unwrap();
    let x0 = FixedPointState::from_decimal("0.3", 64).unwrap();
    let mut tortoise = Orbit::new(beta, x0).unwrap();
    let mut hare = Orbit::new(beta, x0).unwrap();
    for step in 1..=1_000_000u64 {
        tortoise.next().unwrap();
        hare.next().unwrap();
        hare.next().unwrap();
        assert_ne!(
            tortoise.state().frac_bits(),
            hare.state().frac_bits(),
            "orbit cycled by step {step}"
        );
    }
}
