// SPDX-License-Identifier: Apache-2.0
//! Bit vectors to and from bytes and hex.
//!
//! Trivium material is LSB-first: bit `j` of byte `i` is bit `8i + j`
//! (key bit 0 lands in A1). Grain-128a material is MSB-first: bit `7 - j` of
//! byte `i` is bit `8i + j` (key bit 0 lands in b0). Keystreams are packed
//! with the same rule; a trailing partial byte is zero-padded.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitOrder {
    LsbFirst,
    MsbFirst,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum HexError {
    #[error("invalid hex: {0}")]
    Invalid(String),
    #[error("{what} needs {expected} hex digits, got {got}")]
    Length { what: &'static str, expected: usize, got: usize },
}

pub fn bytes_to_bits(bytes: &[u8], order: BitOrder) -> Vec<bool> {
    let mut out = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        for j in 0..8 {
            let bit = match order {
                BitOrder::LsbFirst => b >> j & 1,
                BitOrder::MsbFirst => b >> (7 - j) & 1,
            };
            out.push(bit == 1);
        }
    }
    out
}

pub fn bits_to_bytes(bits: &[bool], order: BitOrder) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk.iter().enumerate().fold(0u8, |acc, (j, &b)| {
                let shift = match order {
                    BitOrder::LsbFirst => j,
                    BitOrder::MsbFirst => 7 - j,
                };
                acc | (b as u8) << shift
            })
        })
        .collect()
}

pub fn hex_to_bits(s: &str, order: BitOrder) -> Result<Vec<bool>, HexError> {
    let bytes = hex::decode(s.trim()).map_err(|e| HexError::Invalid(e.to_string()))?;
    Ok(bytes_to_bits(&bytes, order))
}

pub fn bits_to_hex(bits: &[bool], order: BitOrder) -> String {
    hex::encode(bits_to_bytes(bits, order))
}

/// Parses a fixed-width key or IV.
pub fn parse_material(
    s: &str,
    bits: usize,
    order: BitOrder,
    what: &'static str,
) -> Result<Vec<bool>, HexError> {
    let t = s.trim();
    if t.len() != bits / 4 {
        return Err(HexError::Length { what, expected: bits / 4, got: t.len() });
    }
    hex_to_bits(t, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(
            bytes_to_bits(&[0x01], BitOrder::LsbFirst),
            [true, false, false, false, false, false, false, false]
        );
        assert_eq!(
            bytes_to_bits(&[0x01], BitOrder::MsbFirst),
            [false, false, false, false, false, false, false, true]
        );
        assert_eq!(bits_to_hex(&[true], BitOrder::MsbFirst), "80");
        assert_eq!(bits_to_hex(&[true], BitOrder::LsbFirst), "01");
    }

    #[test]
    fn material_lengths() {
        assert!(parse_material("00", 80, BitOrder::LsbFirst, "key").is_err());
        assert!(parse_material(&"zz".repeat(10), 80, BitOrder::LsbFirst, "key").is_err());
        assert_eq!(parse_material(&"ff".repeat(10), 80, BitOrder::LsbFirst, "key").unwrap(), vec![true; 80]);
    }
}
