// SPDX-License-Identifier: Apache-2.0
//! Trivium on the array.
//!
//! Row layout: A1..A93, B1..B84, C1..C111, work cells w0..w4, output cell.
//! Registers are 1-based and shift toward higher indices, so travel position
//! equals the register index.

use crate::cost::CostReport;
use crate::engine::{ArrayState, CellId};
use crate::program::{emit_shift, CycleProgram, ProgramBuilder, WorkPool};
use crate::schedule::{Element, Labeling, RegisterLayout};
use crate::sim::{run_keystream, CipherMap, Phase, Simulation};
use crate::{Cipher, CipherError, ShiftMode};

pub const KEY_BITS: usize = 80;
pub const IV_BITS: usize = 80;
pub const INIT_CYCLES: u64 = 1152;

pub const A_LEN: usize = 93;
pub const B_LEN: usize = 84;
pub const C_LEN: usize = 111;
pub const A_TAPS: [usize; 5] = [66, 69, 91, 92, 93];
pub const B_TAPS: [usize; 5] = [69, 78, 82, 83, 84];
pub const C_TAPS: [usize; 5] = [66, 87, 109, 110, 111];

pub const WORK: [CellId; 5] = [CellId(288), CellId(289), CellId(290), CellId(291), CellId(292)];
pub const OUTPUT: CellId = CellId(293);
pub const CELLS: usize = 294;

pub fn a(i: usize) -> CellId {
    debug_assert!((1..=A_LEN).contains(&i));
    CellId(i - 1)
}

pub fn b(i: usize) -> CellId {
    debug_assert!((1..=B_LEN).contains(&i));
    CellId(A_LEN + i - 1)
}

pub fn c(i: usize) -> CellId {
    debug_assert!((1..=C_LEN).contains(&i));
    CellId(A_LEN + B_LEN + i - 1)
}

pub fn layout_a() -> RegisterLayout {
    RegisterLayout::new("A", "A", A_LEN, A_TAPS, Labeling::Ascending).expect("static layout")
}

pub fn layout_b() -> RegisterLayout {
    RegisterLayout::new("B", "B", B_LEN, B_TAPS, Labeling::Ascending).expect("static layout")
}

pub fn layout_c() -> RegisterLayout {
    RegisterLayout::new("C", "C", C_LEN, C_TAPS, Labeling::Ascending).expect("static layout")
}

pub struct TriviumMap;

impl CipherMap for TriviumMap {
    const CIPHER: Cipher = Cipher::Trivium;
    const CELLS: usize = CELLS;
    const WARMUP_CYCLES: u64 = INIT_CYCLES;

    fn registers() -> Vec<RegisterLayout> {
        vec![layout_a(), layout_b(), layout_c()]
    }

    fn cell(reg: usize, pos: usize) -> CellId {
        match reg {
            0 => a(pos),
            1 => b(pos),
            2 => c(pos),
            _ => panic!("Trivium has three registers"),
        }
    }

    fn load(state: &mut ArrayState, key: &[bool], iv: &[bool]) -> Result<(), CipherError> {
        check_len("key", key, KEY_BITS)?;
        check_len("iv", iv, IV_BITS)?;
        for (i, &k) in key.iter().enumerate() {
            state.set(a(i + 1), k);
        }
        for (i, &v) in iv.iter().enumerate() {
            state.set(b(i + 1), v);
        }
        for i in 109..=111 {
            state.set(c(i), true);
        }
        Ok(())
    }

    fn compile(phase: Phase, rows: &[&[Element]]) -> CycleProgram {
        let mut pb = ProgramBuilder::new();
        let mut pool = WorkPool::new(&WORK);
        let g = "logic";

        // Register feedbacks. The last tap of each register is consumed by
        // the destructive XOR and then serves as scratch until the shifts.
        let t1 = pool.xor_d(&mut pb, g, a(66), a(93));
        let n1 = pool.and(&mut pb, g, &[a(91), a(92)]);
        let f1 = pool.xor_d(&mut pb, g, t1, n1);
        let t2 = pool.xor_d(&mut pb, g, b(69), b(84));
        let n2 = pool.and(&mut pb, g, &[b(82), b(83)]);
        let f2 = pool.xor_d(&mut pb, g, t2, n2);
        let t3 = pool.xor_d(&mut pb, g, c(66), c(111));
        let n3 = pool.and(&mut pb, g, &[c(109), c(110)]);
        let f3 = pool.xor_d(&mut pb, g, t3, n3);

        let output = if phase == Phase::Keystream {
            let t12 = pool.xor_d(&mut pb, g, t2, t1);
            let s2 = pool.take();
            pb.gate(g, crate::gates::GateKind::Xor2Destructive, &[t3, t12], &[OUTPUT, s2]);
            pool.free(s2);
            pool.free(t12);
            Some(OUTPUT)
        } else {
            pool.free(t1);
            None
        };
        pool.free(t2);
        pool.free(t3);

        // Register inputs, held in dedicated work cells across the shifts.
        let in_b = pool.xor_d_to_work(&mut pb, g, b(78), f1);
        let in_c = pool.xor_d_to_work(&mut pb, g, c(87), f2);
        let in_a = pool.xor_d_to_work(&mut pb, g, a(69), f3);

        let w = pool.take_work();
        emit_shift(&mut pb, "shift A", A_LEN, a, in_a, rows[0], w);
        emit_shift(&mut pb, "shift B", B_LEN, b, in_b, rows[1], w);
        emit_shift(&mut pb, "shift C", C_LEN, c, in_c, rows[2], w);
        pb.finish(output)
    }
}

pub(crate) fn check_len(what: &'static str, bits: &[bool], expected: usize) -> Result<(), CipherError> {
    if bits.len() == expected {
        Ok(())
    } else {
        Err(CipherError::Length { what, expected, got: bits.len() })
    }
}

pub type TriviumSim = Simulation<TriviumMap>;

/// 1152 warm-up cycles, then `n` keystream bits.
pub fn keystream(
    key: &[bool],
    iv: &[bool],
    n: usize,
    mode: ShiftMode,
) -> Result<(Vec<bool>, CostReport), CipherError> {
    run_keystream::<TriviumMap>(key, iv, n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateKind;
    use crate::oracle::TriviumRef;

    #[test]
    fn load_places_key_iv_and_constants() {
        let sim = TriviumSim::new(&[false; 80], &[false; 80], ShiftMode::Proposed).unwrap();
        let ones: Vec<usize> = (0..CELLS).filter(|&i| sim.state().get(CellId(i))).collect();
        assert_eq!(ones, vec![c(109).0, c(110).0, c(111).0]);
        let mut iv = [false; 80];
        iv[0] = true;
        let sim = TriviumSim::new(&[true; 80], &iv, ShiftMode::Proposed).unwrap();
        assert!((1..=80).all(|i| sim.state().get(a(i))));
        assert!((81..=93).all(|i| !sim.state().get(a(i))));
        assert!(sim.state().get(b(1)));
        assert!(TriviumSim::new(&[false; 81], &[false; 80], ShiftMode::Proposed).is_err());
    }

    #[test]
    fn gate_budgets() {
        let rows_c =
            [vec![Element::Buffer; A_LEN], vec![Element::Buffer; B_LEN], vec![Element::Buffer; C_LEN]];
        let rows: Vec<&[Element]> = rows_c.iter().map(|r| r.as_slice()).collect();
        let init = TriviumMap::compile(Phase::Warmup, &rows);
        assert_eq!(init.gate_count(GateKind::Xor2Destructive), 9);
        assert_eq!(init.gate_count(GateKind::And2), 3);
        assert_eq!(init.steps(), 96 + 288 * 4);
        let ks = TriviumMap::compile(Phase::Keystream, &rows);
        assert_eq!(ks.gate_count(GateKind::Xor2Destructive), 11);
        assert_eq!(ks.steps(), 114 + 288 * 4);
    }

    #[test]
    fn registers_track_oracle_both_modes() {
        let key: Vec<bool> = (0..80).map(|i| i % 3 == 0).collect();
        let iv: Vec<bool> = (0..80).map(|i| i % 5 == 1).collect();
        for mode in ShiftMode::ALL {
            let mut sim = TriviumSim::new(&key, &iv, mode).unwrap();
            let mut r = TriviumRef::new(&key, &iv).unwrap();
            for _ in 0..240 {
                sim.step_cycle();
                r.clock();
                for i in 1..=A_LEN {
                    assert_eq!(sim.logical(0, i), r.a(i));
                }
                for i in 1..=B_LEN {
                    assert_eq!(sim.logical(1, i), r.b(i));
                }
                for i in 1..=C_LEN {
                    assert_eq!(sim.logical(2, i), r.c(i));
                }
            }
        }
    }
}
