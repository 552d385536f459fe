//! The gated word stream shared by table generation and uniformity testing.

use super::{GenerationParams, Stride};
use crate::dyadic::DyadicSet;
use crate::error::Result;
use crate::fixedpoint::{beta_step, BetaValue, FixedPointState, Orbit};

/// Streams candidate words: whenever the orbit point T^tau lies in the gate,
/// the word is built from the next n threshold bits, i.e. bits tau+1 through
/// tau+n with tau+1 as the least significant. After an acceptance the cursor
/// moves by one step (`Overlapping`) or by n (`SkipAfterAccept`). The stream
/// ends when tau reaches budget - n, so no window reads past bit budget - 1.
pub(crate) struct WordStream<'a> {
    beta: BetaValue,
    gate: &'a DyadicSet,
    stride: Stride,
    word_bits: u32,
    gate_state: FixedPointState,
    runner: Orbit,
    window: u32,
    tau: u64,
    budget_cut: u64,
    acceptances: u64,
}

impl<'a> WordStream<'a> {
    pub(crate) fn new(params: &'a GenerationParams) -> Result<Self> {
        params.validate()?;
        let n = params.word_bits as u32;
        // the bit runner leads the gate cursor: bit 0 precedes every window,
        // so it is consumed and dropped before the first window fills
        let mut runner = Orbit::new(params.beta, params.x0)?;
        runner.next();
        let mut window = 0u32;
        for i in 0..n {
            let sample = runner.next().expect("orbit is infinite");
            window |= (sample.bit as u32) << i;
        }
        Ok(Self {
            beta: params.beta,
            gate: &params.gate,
            stride: params.stride,
            word_bits: n,
            gate_state: params.x0,
            runner,
            window,
            tau: 0,
            budget_cut: params.budget - n as u64,
            acceptances: 0,
        })
    }

    /// Orbit steps consumed so far.
    pub(crate) fn iterations(&self) -> u64 {
        self.tau
    }

    /// Gate hits so far.
    pub(crate) fn acceptances(&self) -> u64 {
        self.acceptances
    }

    pub(crate) fn next_word(&mut self) -> Option<u16> {
        loop {
            if self.tau >= self.budget_cut {
                return None;
            }
            if self.gate.contains(self.gate_state) {
                self.acceptances += 1;
                let word = self.window as u16;
                match self.stride {
                    Stride::Overlapping => self.advance(1),
                    Stride::SkipAfterAccept => self.advance(self.word_bits as u64),
                }
                return Some(word);
            }
            self.advance(1);
        }
    }

    fn advance(&mut self, steps: u64) {
        for _ in 0..steps {
            self.gate_state = beta_step(self.gate_state, self.beta)
                .expect("widths checked by validate")
                .0;
            let sample = self.runner.next().expect("orbit is infinite");
            self.window = (self.window >> 1) | ((sample.bit as u32) << (self.word_bits - 1));
            self.tau += 1;
        }
    }
}
