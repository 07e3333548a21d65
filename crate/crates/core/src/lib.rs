// SPDX-License-Identifier: Apache-2.0
//! Bit-level simulator for serial IMPLY (material implication) logic in a
//! memristive computation-in-memory row, with two stream ciphers mapped onto
//! it: Trivium and Grain-128a (keystream mode).
//!
//! The crate is layered:
//!
//! * [`engine`] executes `FALSE` / `IMPLY` micro-ops over an [`engine::ArrayState`]
//!   and counts steps.
//! * [`gates`] expands Boolean gates into micro-op templates.
//! * [`schedule`] plans register shifts using buffers only, or a buffer and
//!   inverter mix that keeps every tap at true polarity.
//! * [`trivium`] and [`grain`] run the ciphers on the array.
//! * [`cost`] turns gate censuses into step and energy reports.
//! * [`oracle`] holds plain software versions of both ciphers.
//! * [`stego`] hides cipher output in the LSBs of grayscale images.

pub mod cost;
pub mod engine;
pub mod gates;
pub mod grain;
pub mod hexio;
pub mod oracle;
pub mod program;
pub mod schedule;
pub mod sim;
pub mod stego;
pub mod trivium;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The two stream ciphers mapped onto the array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cipher {
    Trivium,
    Grain128a,
}

impl Cipher {
    pub const ALL: [Cipher; 2] = [Cipher::Trivium, Cipher::Grain128a];

    pub fn name(self) -> &'static str {
        match self {
            Cipher::Trivium => "trivium",
            Cipher::Grain128a => "grain128a",
        }
    }

    /// Key length in bits.
    pub fn key_bits(self) -> usize {
        match self {
            Cipher::Trivium => trivium::KEY_BITS,
            Cipher::Grain128a => grain::KEY_BITS,
        }
    }

    /// IV length in bits.
    pub fn iv_bits(self) -> usize {
        match self {
            Cipher::Trivium => trivium::IV_BITS,
            Cipher::Grain128a => grain::IV_BITS,
        }
    }

    /// Warm-up cycles before the first keystream bit.
    pub fn warmup_cycles(self) -> u64 {
        match self {
            Cipher::Trivium => trivium::INIT_CYCLES,
            Cipher::Grain128a => grain::PREINIT_CYCLES,
        }
    }

    /// Bit order used by the hex encodings of key, IV and keystream.
    pub fn bit_order(self) -> hexio::BitOrder {
        match self {
            Cipher::Trivium => hexio::BitOrder::LsbFirst,
            Cipher::Grain128a => hexio::BitOrder::MsbFirst,
        }
    }
}

impl fmt::Display for Cipher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cipher {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "trivium" => Ok(Cipher::Trivium),
            "grain128a" | "grain-128a" | "grain" => Ok(Cipher::Grain128a),
            other => Err(format!("unknown cipher `{other}`")),
        }
    }
}

/// How register contents are moved at the end of each cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftMode {
    /// Every transfer is a 4-step buffer.
    Conventional,
    /// Mix of 2-step inverters and 4-step buffers, taps kept at true polarity.
    Proposed,
}

impl ShiftMode {
    pub const ALL: [ShiftMode; 2] = [ShiftMode::Conventional, ShiftMode::Proposed];

    pub fn name(self) -> &'static str {
        match self {
            ShiftMode::Conventional => "conventional",
            ShiftMode::Proposed => "proposed",
        }
    }
}

impl fmt::Display for ShiftMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShiftMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conventional" | "buffer" => Ok(ShiftMode::Conventional),
            "proposed" | "inverter" => Ok(ShiftMode::Proposed),
            other => Err(format!("unknown shift mode `{other}`")),
        }
    }
}

/// Errors raised while loading a cipher.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CipherError {
    #[error("{what} must be {expected} bits, got {got}")]
    Length { what: &'static str, expected: usize, got: usize },
    #[error(transparent)]
    Schedule(#[from] schedule::ScheduleError),
    #[error(transparent)]
    Cost(#[from] cost::CostError),
}

/// Keystream bits plus the cost of producing them, for either cipher.
pub fn simulate_keystream(
    cipher: Cipher,
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
) -> Result<(Vec<bool>, cost::CostReport), CipherError> {
    match cipher {
        Cipher::Trivium => trivium::keystream(key, iv, n, mode),
        Cipher::Grain128a => grain::keystream(key, iv, n, mode),
    }
}

/// Keystream, cost report and the trace sink handed back.
pub type Traced = (Vec<bool>, cost::CostReport, Box<dyn engine::TraceSink>);

/// [`simulate_keystream`] that also streams every micro-op into `trace`.
pub fn simulate_keystream_traced(
    cipher: Cipher,
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
    trace: Box<dyn engine::TraceSink>,
) -> Result<Traced, CipherError> {
    let t = Some(trace);
    let (bits, report, back) = match cipher {
        Cipher::Trivium => sim::run_keystream_traced::<trivium::TriviumMap>(key, iv, n, mode, t)?,
        Cipher::Grain128a => sim::run_keystream_traced::<grain::GrainMap>(key, iv, n, mode, t)?,
    };
    Ok((bits, report, back.expect("trace installed above")))
}
