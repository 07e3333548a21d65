// SPDX-License-Identifier: Apache-2.0

use imply_cim::engine::{exec_false, exec_imply, run_program, ArrayState, CellId, MicroOp};
use imply_cim::gates::{GateKind, MacroProgram};
use imply_cim::oracle::xorcrypt;
use imply_cim::schedule::{plan_proposed, verify_polarity, Element, Labeling, RegisterLayout};
use imply_cim::stego::{embed_lsb, extract_lsb, psnr, GrayImage};
use proptest::prelude::*;

fn array(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 2..max)
}

fn ops(len: usize, count: usize) -> impl Strategy<Value = Vec<MicroOp>> {
    let op = (0..len, 0..len, any::<bool>()).prop_filter_map("aliased", |(p, q, f)| {
        if f {
            Some(MicroOp::False { q: CellId(q) })
        } else if p != q {
            Some(MicroOp::Imply { p: CellId(p), q: CellId(q) })
        } else {
            None
        }
    });
    prop::collection::vec(op, 0..count)
}

proptest! {
    #[test]
    fn imply_touches_only_its_target(bits in array(40), p in 0usize..40, q in 0usize..40) {
        let n = bits.len();
        let (p, q) = (p % n, q % n);
        prop_assume!(p != q);
        let s = ArrayState::from_bits(&bits).unwrap();
        let (out, stats) = exec_imply(&s, CellId(p), CellId(q)).unwrap();
        prop_assert_eq!(stats.steps, 1);
        for i in 0..n {
            if i == q {
                prop_assert_eq!(out.get(CellId(i)), !bits[p] || bits[q]);
            } else {
                prop_assert_eq!(out.get(CellId(i)), bits[i]);
            }
        }
        let (out, _) = exec_false(&s, CellId(q)).unwrap();
        prop_assert!(!out.get(CellId(q)));
        prop_assert_eq!(out.bits().iter().filter(|&&b| b).count(),
            bits.iter().enumerate().filter(|&(i, &b)| b && i != q).count());
    }

    #[test]
    fn programs_are_deterministic((bits, prog) in array(24).prop_flat_map(|b| { let n = b.len(); (Just(b), ops(n, 64)) })) {
        let s = ArrayState::from_bits(&bits).unwrap();
        let (a, sa) = run_program(&s, &prog).unwrap();
        let (b, sb) = run_program(&s, &prog).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(sa.steps, prog.len() as u64);
        prop_assert_eq!(sb.steps, prog.len() as u64);
    }

    #[test]
    fn gates_compute_and_preserve(kind_ix in 0usize..GateKind::ALL.len(), bits in prop::collection::vec(any::<bool>(), 16), perm_seed in any::<u64>()) {
        let kind = GateKind::ALL[kind_ix];
        let need = kind.arity() + kind.work_cells();
        // Scatter operands over a 16-cell row.
        let mut cells: Vec<usize> = (0..16).collect();
        let mut x = perm_seed;
        for i in (1..16).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            cells.swap(i, (x >> 33) as usize % (i + 1));
        }
        let ids: Vec<CellId> = cells[..need].iter().map(|&c| CellId(c)).collect();
        let (inputs, works) = ids.split_at(kind.arity());
        let m = MacroProgram::new(kind, inputs, works).unwrap();
        let s = ArrayState::from_bits(&bits).unwrap();
        let (out, stats) = run_program(&s, &m.expand()).unwrap();
        let xs: Vec<bool> = inputs.iter().map(|&c| bits[c.0]).collect();
        prop_assert_eq!(out.get(m.output), kind.eval(&xs));
        prop_assert_eq!(stats.steps, imply_cim::gates::gate_metrics(kind).steps as u64);
        for (i, &b) in bits.iter().enumerate() {
            let c = CellId(i);
            if works.contains(&c) || m.destructive_cells.contains(&c) || c == m.output {
                continue;
            }
            prop_assert_eq!(out.get(c), b, "cell {} clobbered by {}", i, kind.name());
        }
    }

    #[test]
    fn proposed_plans_keep_taps_true(len in 2usize..80, taps in prop::collection::btree_set(1usize..80, 1..8), extra in 1usize..3) {
        let taps: Vec<usize> = taps.into_iter().filter(|&t| t <= len).collect();
        let layout = RegisterLayout::new("R", "r", len, taps, Labeling::Ascending).unwrap();
        let plan = plan_proposed(&layout, extra * 2 * len).unwrap();
        prop_assert!(verify_polarity(&plan).is_ok());
        for (k, k1) in layout.tap_pairs() {
            for t in 1..=plan.num_cycles() {
                prop_assert_eq!(plan.cycle(t)[k1 - 1], Element::Buffer, "pair ({}, {}) at {}", k, k1, t);
            }
        }
    }

    #[test]
    fn xorcrypt_is_an_involution(msg in prop::collection::vec(any::<bool>(), 0..300), seed in any::<u64>()) {
        let ks: Vec<bool> = (0..msg.len()).map(|i| (seed.rotate_left(i as u32 % 64) ^ i as u64) & 1 == 1).collect();
        let ct = xorcrypt(&msg, &ks).unwrap();
        prop_assert_eq!(xorcrypt(&ct, &ks).unwrap(), msg);
    }

    #[test]
    fn stego_round_trip_and_psnr(w in 8usize..48, h in 8usize..48, fill in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut x = seed | 1;
        let mut next = || { x ^= x << 13; x ^= x >> 7; x ^= x << 17; x };
        let px: Vec<u8> = (0..w * h).map(|_| next() as u8).collect();
        let img = GrayImage::new(w, h, px).unwrap();
        let nbits = (img.capacity() as f64 * fill) as usize;
        let payload: Vec<bool> = (0..nbits).map(|_| next() & 1 == 1).collect();
        let st = embed_lsb(&img, &payload).unwrap();
        prop_assert_eq!(extract_lsb(&st).unwrap(), payload);
        // Every pixel moves by at most one level, so MSE <= 1.
        prop_assert!(psnr(&img, &st).unwrap() >= 48.13);
    }
}
