// SPDX-License-Identifier: Apache-2.0
//! Plain software versions of both ciphers, used as correctness oracles for
//! the array simulations. Written for readability, not speed.

use crate::CipherError;

fn check(what: &'static str, bits: &[bool], expected: usize) -> Result<(), CipherError> {
    if bits.len() == expected {
        Ok(())
    } else {
        Err(CipherError::Length { what, expected, got: bits.len() })
    }
}

/// Trivium state with 1-based indexing: `s[1..=93]` is A, `s[94..=177]` is B,
/// `s[178..=288]` is C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriviumRef {
    s: [bool; 289],
    pub cycle: u64,
}

impl TriviumRef {
    pub fn new(key: &[bool], iv: &[bool]) -> Result<Self, CipherError> {
        check("key", key, 80)?;
        check("iv", iv, 80)?;
        let mut s = [false; 289];
        s[1..=80].copy_from_slice(key);
        s[94..=173].copy_from_slice(iv);
        s[286] = true;
        s[287] = true;
        s[288] = true;
        Ok(Self { s, cycle: 0 })
    }

    /// Register A, B, C as 1-based slices (index 0 unused).
    pub fn a(&self, i: usize) -> bool {
        assert!((1..=93).contains(&i));
        self.s[i]
    }

    pub fn b(&self, i: usize) -> bool {
        assert!((1..=84).contains(&i));
        self.s[93 + i]
    }

    pub fn c(&self, i: usize) -> bool {
        assert!((1..=111).contains(&i));
        self.s[177 + i]
    }

    /// One clock; returns the output bit `t1 + t2 + t3`.
    pub fn clock(&mut self) -> bool {
        let s = &self.s;
        let mut t1 = s[66] ^ s[93];
        let mut t2 = s[162] ^ s[177];
        let mut t3 = s[243] ^ s[288];
        let z = t1 ^ t2 ^ t3;
        t1 ^= (s[91] & s[92]) ^ s[171];
        t2 ^= (s[175] & s[176]) ^ s[264];
        t3 ^= (s[286] & s[287]) ^ s[69];
        let s = &mut self.s;
        s.copy_within(1..93, 2);
        s[1] = t3;
        s.copy_within(94..177, 95);
        s[94] = t1;
        s.copy_within(178..288, 179);
        s[178] = t2;
        self.cycle += 1;
        z
    }
}

/// `n` Trivium keystream bits after 1152 warm-up clocks.
pub fn trivium_ref(key: &[bool], iv: &[bool], n: usize) -> Result<Vec<bool>, CipherError> {
    let mut st = TriviumRef::new(key, iv)?;
    for _ in 0..1152 {
        st.clock();
    }
    Ok((0..n).map(|_| st.clock()).collect())
}

/// Grain-128a registers: `b` is the NFSR, `s` the LFSR, both 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrainRef {
    pub b: [bool; 128],
    pub s: [bool; 128],
    pub cycle: u64,
}

impl GrainRef {
    pub fn new(key: &[bool], iv: &[bool]) -> Result<Self, CipherError> {
        check("key", key, 128)?;
        check("iv", iv, 96)?;
        let mut b = [false; 128];
        b.copy_from_slice(key);
        let mut s = [true; 128];
        s[..96].copy_from_slice(iv);
        s[127] = false;
        Ok(Self { b, s, cycle: 0 })
    }

    pub fn output(&self) -> bool {
        let (b, s) = (&self.b, &self.s);
        let h =
            (b[12] & s[8]) ^ (s[13] & s[20]) ^ (b[95] & s[42]) ^ (s[60] & s[79]) ^ (b[12] & b[95] & s[94]);
        h ^ s[93] ^ b[2] ^ b[15] ^ b[36] ^ b[45] ^ b[64] ^ b[73] ^ b[89]
    }

    fn f(&self) -> bool {
        let s = &self.s;
        s[0] ^ s[7] ^ s[38] ^ s[70] ^ s[81] ^ s[96]
    }

    fn g(&self) -> bool {
        let b = &self.b;
        self.s[0]
            ^ b[0]
            ^ b[26]
            ^ b[56]
            ^ b[91]
            ^ b[96]
            ^ (b[3] & b[67])
            ^ (b[11] & b[13])
            ^ (b[17] & b[18])
            ^ (b[27] & b[59])
            ^ (b[40] & b[48])
            ^ (b[61] & b[65])
            ^ (b[68] & b[84])
            ^ (b[22] & b[24] & b[25])
            ^ (b[70] & b[78] & b[82])
            ^ (b[88] & b[92] & b[93] & b[95])
    }

    /// One clock. In pre-initialization the output is fed back into both
    /// registers; the returned value is the output bit either way.
    pub fn clock(&mut self, feedback: bool) -> bool {
        let y = self.output();
        let mut fs = self.f();
        let mut fb = self.g();
        if feedback {
            fs ^= y;
            fb ^= y;
        }
        self.s.copy_within(1..128, 0);
        self.s[127] = fs;
        self.b.copy_within(1..128, 0);
        self.b[127] = fb;
        self.cycle += 1;
        y
    }
}

/// `n` Grain-128a keystream bits after 256 pre-initialization clocks.
pub fn grain128a_ref(key: &[bool], iv: &[bool], n: usize) -> Result<Vec<bool>, CipherError> {
    let mut st = GrainRef::new(key, iv)?;
    for _ in 0..256 {
        st.clock(true);
    }
    Ok((0..n).map(|_| st.clock(false)).collect())
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("message has {message} bits, keystream {keystream}")]
pub struct LengthMismatch {
    pub message: usize,
    pub keystream: usize,
}

/// Bitwise XOR of equal-length sequences.
pub fn xorcrypt(message: &[bool], keystream: &[bool]) -> Result<Vec<bool>, LengthMismatch> {
    if message.len() != keystream.len() {
        return Err(LengthMismatch { message: message.len(), keystream: keystream.len() });
    }
    Ok(message.iter().zip(keystream).map(|(&m, &k)| m ^ k).collect())
}

/// Byte-level XOR with a keystream given as bits, consumed MSB-first per byte.
pub fn xor_bytes_msb(data: &[u8], keystream: &[bool]) -> Vec<u8> {
    assert!(keystream.len() >= data.len() * 8, "keystream too short");
    data.iter()
        .enumerate()
        .map(|(i, &d)| {
            let k = (0..8).fold(0u8, |acc, j| acc | (keystream[8 * i + j] as u8) << (7 - j));
            d ^ k
        })
        .collect()
}
