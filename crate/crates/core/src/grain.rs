// SPDX-License-Identifier: Apache-2.0
//! Grain-128a (keystream mode) on the array.
//!
//! Row layout: b0..b127 (NFSR), s0..s127 (LFSR), work cells w0..w5, output
//! cell. Both registers shift toward index 0 and receive at index 127, so
//! travel position `j` is index `128 - j`.

use crate::cost::CostReport;
use crate::engine::{ArrayState, CellId};
use crate::gates::GateKind;
use crate::program::{emit_shift, CycleProgram, ProgramBuilder, WorkPool};
use crate::schedule::{Element, Labeling, RegisterLayout};
use crate::sim::{run_keystream, CipherMap, Phase, Simulation};
use crate::trivium::check_len;
use crate::{Cipher, CipherError, ShiftMode};

pub const KEY_BITS: usize = 128;
pub const IV_BITS: usize = 96;
pub const PREINIT_CYCLES: u64 = 256;
pub const REG_LEN: usize = 128;

pub const WORK: [CellId; 6] = [CellId(256), CellId(257), CellId(258), CellId(259), CellId(260), CellId(261)];
pub const OUTPUT: CellId = CellId(262);
pub const CELLS: usize = 263;

/// LFSR cells read by the update, filter and output functions.
pub const LFSR_TAPS: [usize; 14] = [0, 7, 8, 13, 20, 38, 42, 60, 70, 79, 81, 93, 94, 96];
/// NFSR cells read by the update, filter and output functions.
pub const NFSR_TAPS: [usize; 37] = [
    0, 2, 3, 11, 12, 13, 15, 17, 18, 22, 24, 25, 26, 27, 36, 40, 45, 48, 56, 59, 61, 64, 65, 67, 68, 70, 73,
    78, 82, 84, 88, 89, 91, 92, 93, 95, 96,
];

const NFSR_LINEAR: [usize; 4] = [26, 56, 91, 96];
const NFSR_PRODUCTS: [&[usize]; 10] = [
    &[3, 67],
    &[11, 13],
    &[17, 18],
    &[27, 59],
    &[40, 48],
    &[61, 65],
    &[68, 84],
    &[22, 24, 25],
    &[70, 78, 82],
    &[88, 92, 93, 95],
];

pub fn nb(i: usize) -> CellId {
    debug_assert!(i < REG_LEN);
    CellId(i)
}

pub fn ls(i: usize) -> CellId {
    debug_assert!(i < REG_LEN);
    CellId(REG_LEN + i)
}

pub fn layout_lfsr() -> RegisterLayout {
    RegisterLayout::from_labels("LFSR", "s", REG_LEN, LFSR_TAPS, Labeling::Descending).expect("static layout")
}

pub fn layout_nfsr() -> RegisterLayout {
    RegisterLayout::from_labels("NFSR", "b", REG_LEN, NFSR_TAPS, Labeling::Descending).expect("static layout")
}

fn lfsr_cell(pos: usize) -> CellId {
    ls(REG_LEN - pos)
}

fn nfsr_cell(pos: usize) -> CellId {
    nb(REG_LEN - pos)
}

pub struct GrainMap;

impl CipherMap for GrainMap {
    const CIPHER: Cipher = Cipher::Grain128a;
    const CELLS: usize = CELLS;
    const WARMUP_CYCLES: u64 = PREINIT_CYCLES;

    fn registers() -> Vec<RegisterLayout> {
        vec![layout_lfsr(), layout_nfsr()]
    }

    fn cell(reg: usize, pos: usize) -> CellId {
        match reg {
            0 => lfsr_cell(pos),
            1 => nfsr_cell(pos),
            _ => panic!("Grain has two registers"),
        }
    }

    fn load(state: &mut ArrayState, key: &[bool], iv: &[bool]) -> Result<(), CipherError> {
        check_len("key", key, KEY_BITS)?;
        check_len("iv", iv, IV_BITS)?;
        for (i, &k) in key.iter().enumerate() {
            state.set(nb(i), k);
        }
        for (i, &v) in iv.iter().enumerate() {
            state.set(ls(i), v);
        }
        for i in 96..127 {
            state.set(ls(i), true);
        }
        Ok(())
    }

    fn compile(phase: Phase, rows: &[&[Element]]) -> CycleProgram {
        let mut pb = ProgramBuilder::new();
        let mut pool = WorkPool::new(&WORK);
        let g = "logic";

        // Folds a freshly computed product into an accumulator.
        fn fold(pool: &mut WorkPool, pb: &mut ProgramBuilder, p: CellId, acc: CellId) -> CellId {
            let r = pool.xor_d(pb, "logic", p, acc);
            pool.free(p);
            r
        }

        // h
        let p = pool.and(&mut pb, g, &[nb(12), ls(8)]);
        let q = pool.and(&mut pb, g, &[ls(13), ls(20)]);
        let mut h = fold(&mut pool, &mut pb, q, p);
        let p = pool.and(&mut pb, g, &[nb(95), ls(42)]);
        h = fold(&mut pool, &mut pb, p, h);
        let p = pool.and(&mut pb, g, &[ls(60), ls(79)]);
        h = fold(&mut pool, &mut pb, p, h);
        let p = pool.and(&mut pb, g, &[nb(12), nb(95), ls(94)]);
        h = fold(&mut pool, &mut pb, p, h);

        // Linear NFSR terms of the output.
        let mut lin = pool.xor_n(&mut pb, g, nb(2), nb(15));
        for k in [36, 45, 64, 73, 89] {
            lin = pool.xor_d(&mut pb, g, nb(k), lin);
        }

        // y
        let hs = pool.xor_d(&mut pb, g, ls(93), h);
        let y = match phase {
            Phase::Keystream => {
                let s2 = pool.take();
                pb.gate(g, GateKind::Xor2Destructive, &[lin, hs], &[OUTPUT, s2]);
                pool.free(s2);
                pool.free(hs);
                OUTPUT
            }
            Phase::Warmup => pool.xor_d(&mut pb, g, lin, hs),
        };
        pool.free(lin);

        // LFSR update
        let mut f = pool.xor_n(&mut pb, g, ls(0), ls(7));
        for k in [38, 70, 81, 96] {
            f = pool.xor_d(&mut pb, g, ls(k), f);
        }

        // NFSR update
        let mut nf = pool.xor_n(&mut pb, g, ls(0), nb(0));
        for k in NFSR_LINEAR {
            nf = pool.xor_d(&mut pb, g, nb(k), nf);
        }
        for term in NFSR_PRODUCTS {
            let cells: Vec<CellId> = term.iter().map(|&k| nb(k)).collect();
            let p = pool.and(&mut pb, g, &cells);
            nf = fold(&mut pool, &mut pb, p, nf);
        }

        let output = match phase {
            Phase::Keystream => Some(OUTPUT),
            Phase::Warmup => {
                f = pool.xor_d(&mut pb, g, y, f);
                nf = pool.xor_d(&mut pb, g, y, nf);
                pool.free(y);
                None
            }
        };

        let w = pool.take_work();
        emit_shift(&mut pb, "shift LFSR", REG_LEN, lfsr_cell, f, rows[0], w);
        emit_shift(&mut pb, "shift NFSR", REG_LEN, nfsr_cell, nf, rows[1], w);
        pb.finish(output)
    }
}

pub type GrainSim = Simulation<GrainMap>;

/// 256 pre-initialization cycles, then `n` keystream bits.
pub fn keystream(
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
) -> Result<(Vec<bool>, CostReport), CipherError> {
    run_keystream::<GrainMap>(key, iv, n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::GrainRef;

    fn conventional_rows() -> Vec<Vec<Element>> {
        vec![vec![Element::Buffer; REG_LEN]; 2]
    }

    #[test]
    fn load_rule() {
        let sim = GrainSim::new(&[false; 128], &[false; 96], ShiftMode::Proposed).unwrap();
        let ones: Vec<usize> = (0..CELLS).filter(|&i| sim.state().get(CellId(i))).collect();
        let want: Vec<usize> = (96..=126).map(|i| ls(i).0).collect();
        assert_eq!(ones, want);
        let mut key = [false; 128];
        key[0] = true;
        let sim = GrainSim::new(&key, &[true; 96], ShiftMode::Proposed).unwrap();
        assert!(sim.state().get(nb(0)));
        assert!((0..96).all(|i| sim.state().get(ls(i))));
        assert!(!sim.state().get(ls(127)));
    }

    #[test]
    fn census_per_cycle() {
        let rc = conventional_rows();
        let rows: Vec<&[Element]> = rc.iter().map(|r| r.as_slice()).collect();
        let ks = GrainMap::compile(Phase::Keystream, &rows);
        assert_eq!(ks.gate_count(GateKind::Xor2Destructive), 29);
        assert_eq!(ks.gate_count(GateKind::Xor2Nondestructive), 3);
        assert_eq!(ks.gate_count(GateKind::And2), 11);
        assert_eq!(ks.gate_count(GateKind::And3), 3);
        assert_eq!(ks.gate_count(GateKind::And4), 1);
        assert_eq!(ks.steps(), 378 + 256 * 4);
        let pre = GrainMap::compile(Phase::Warmup, &rows);
        assert_eq!(pre.gate_count(GateKind::Xor2Destructive), 31);
        assert_eq!(pre.steps(), 396 + 256 * 4);
    }

    #[test]
    fn registers_track_oracle_both_modes() {
        let key: Vec<bool> = (0..128).map(|i| i % 7 < 3).collect();
        let iv: Vec<bool> = (0..96).map(|i| i % 4 == 2).collect();
        for mode in ShiftMode::ALL {
            let mut sim = GrainSim::new(&key, &iv, mode).unwrap();
            let mut r = GrainRef::new(&key, &iv).unwrap();
            for t in 0..300 {
                let out = sim.step_cycle();
                let y = r.clock(t < 256);
                if t >= 256 {
                    assert_eq!(out, Some(y));
                }
                for i in 0..REG_LEN {
                    assert_eq!(sim.logical(0, REG_LEN - i), r.s[i], "s{i} after {t}");
                    assert_eq!(sim.logical(1, REG_LEN - i), r.b[i], "b{i} after {t}");
                }
            }
        }
    }

    #[test]
    fn register_operands_survive_logic() {
        // Logic only: run a cycle program with the shift rows cut off.
        let rc = conventional_rows();
        let rows: Vec<&[Element]> = rc.iter().map(|r| r.as_slice()).collect();
        let prog = GrainMap::compile(Phase::Warmup, &rows);
        let logic_len = 396;
        let key: Vec<bool> = (0..128).map(|i| i % 3 == 1).collect();
        let iv: Vec<bool> = (0..96).map(|i| i % 2 == 0).collect();
        let mut st = ArrayState::new(CELLS).unwrap();
        GrainMap::load(&mut st, &key, &iv).unwrap();
        let before = st.clone();
        for op in &prog.ops[..logic_len] {
            st.apply(op).unwrap();
        }
        assert_eq!(&st.bits()[..256], &before.bits()[..256]);
    }
}
