// SPDX-License-Identifier: Apache-2.0
//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Two criteria fail on numbers that a correct implementation cannot reach
//! (see the notes printed next to them). Their outcome is pinned in
//! `KNOWN_FAILURES`; the process exits nonzero when any criterion's outcome
//! differs from the pinned one, in either direction.

use imply_cim::cost::{closed_form, improvement};
use imply_cim::engine::{exec_imply, ArrayState, CellId};
use imply_cim::gates::{gate_metrics, truth_check, GateKind};
use imply_cim::grain::{layout_lfsr, layout_nfsr};
use imply_cim::hexio::{bits_to_bytes, bits_to_hex, bytes_to_bits, hex_to_bits, BitOrder};
use imply_cim::oracle::{grain128a_ref, trivium_ref, xorcrypt};
use imply_cim::schedule::{
    count_elements, plan_proposed, verify_polarity, Element, ElementCount, RegisterLayout,
};
use imply_cim::stego::{embed_lsb, extract_lsb, psnr, GrayImage};
use imply_cim::trivium::{layout_a, layout_b, layout_c};
use imply_cim::{simulate_keystream, Cipher, ShiftMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

// Tolerances.
const ENERGY_TOL_UJ: f64 = 0.0001;
const RATIO_TOL_PP: f64 = 0.5;
const PSNR_FLOOR_DB: f64 = 48.13;
const EQUIV_PAIRS: usize = 100;
const EQUIV_BITS: usize = 512;

const KNOWN_FAILURES: [u32; 2] = [4, 9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol + 1e-12
}

fn c1_imply() -> Outcome {
    let t = Instant::now();
    let table = [(false, false, true), (false, true, true), (true, false, false), (true, true, true)];
    let mut ok = true;
    for (p, q, want) in table {
        let s = ArrayState::from_bits(&[p, q]).unwrap();
        let (out, _) = exec_imply(&s, CellId(0), CellId(1)).unwrap();
        ok &= out.get(CellId(1)) == want && out.get(CellId(0)) == p;
    }
    let el = t.elapsed();
    outcome(ok && el < Duration::from_millis(1), format!("4/4 cases, {el:?}"))
}

fn c2_gates() -> Outcome {
    let t = Instant::now();
    // (kind, memristors, steps, energy in nJ)
    let table = [
        (GateKind::Inverter, 2, 2, 0.1291),
        (GateKind::Buffer, 3, 4, 0.269),
        (GateKind::And2, 4, 5, 0.3833),
        (GateKind::And3, 5, 6, 0.5025),
        (GateKind::And4, 6, 11, 0.9131),
        (GateKind::Xor2Destructive, 4, 9, 0.7426),
        (GateKind::Xor2Nondestructive, 5, 11, 0.9146),
        (GateKind::Xor3, 6, 20, 1.711),
    ];
    let mut bad = Vec::new();
    let mut combos = 0;
    for (kind, mem, steps, nj) in table {
        let m = gate_metrics(kind);
        if m.memristors != mem || m.steps != steps || m.energy.map(|e| e.as_nj()) != Some(nj) {
            bad.push(format!("{} metrics", kind.name()));
        }
        let r = truth_check(kind);
        // Each input combination runs twice, work cells preset to 0 and to 1.
        let n = r.cases / 2;
        combos += n;
        if !r.passed() || n > 16 {
            bad.push(format!("{} truth", kind.name()));
        }
    }
    let el = t.elapsed();
    let pass = bad.is_empty() && el < Duration::from_secs(1);
    outcome(pass, format!("8 kinds, {combos} input combinations, {el:?} {bad:?}"))
}

struct Run {
    init_steps: u64,
    init_uj: f64,
    bit_steps: u64,
    bit_nj: f64,
    total_steps: u64,
    total_uj: f64,
}

fn run(c: Cipher, n: usize) -> Run {
    let key = vec![false; c.key_bits()];
    let iv = vec![false; c.iv_bits()];
    let (_, r) = simulate_keystream(c, &key, &iv, n, ShiftMode::Proposed).unwrap();
    Run {
        init_steps: r.init.steps,
        init_uj: r.init.energy.as_uj(),
        bit_steps: r.keystream.steps / n as u64,
        bit_nj: r.keystream.energy.as_nj() / n as f64,
        total_steps: r.total_steps,
        total_uj: r.total_energy_uj(),
    }
}

fn c3_trivium() -> Outcome {
    let r = run(Cipher::Trivium, 10_000);
    let (fs, fe) = closed_form(Cipher::Trivium, ShiftMode::Proposed, 10_000);
    let pass = r.init_steps == 797_266
        && r.bit_steps == 710
        && close(r.bit_nj / 1000.0, 0.0478983, ENERGY_TOL_UJ)
        && r.total_steps == 7_897_266
        && fs == 7_897_266
        && close(fe, 531.4731, ENERGY_TOL_UJ);
    outcome(
        pass,
        format!(
            "init {} steps, {} steps / {:.4} nJ per bit, n=10000: simulated {} steps, form {} steps / {:.4} uJ \
             (simulated energy {:.4} uJ; init energy {:.6} uJ vs printed 53.4731)",
            r.init_steps, r.bit_steps, r.bit_nj, r.total_steps, fs, fe, r.total_uj, r.init_uj
        ),
    )
}

fn c4_grain() -> Outcome {
    let r = run(Cipher::Grain128a, 10_000);
    let (fs, fe) = closed_form(Cipher::Grain128a, ShiftMode::Proposed, 10_000);
    let pass = r.init_steps == 245_830
        && r.bit_steps == 942
        && close(r.bit_nj / 1000.0, 0.0666, ENERGY_TOL_UJ)
        && r.total_steps == 9_665_830
        && close(r.total_uj, 683.6811, ENERGY_TOL_UJ);
    outcome(
        pass,
        format!(
            "pre-init {} steps (want 245830), {} steps / {:.4} nJ per bit (want 942 / 66.6), \
             n=10000: {} steps / {:.4} uJ (want 9665830 / 683.6811; form gives {} / {:.4}). \
             The published total omits NFSR tap b96 from the shift plan: keeping b96 at true \
             polarity costs 32 more buffers (64 steps)",
            r.init_steps, r.bit_steps, r.bit_nj, r.total_steps, r.total_uj, fs, fe
        ),
    )
}

fn c5_census() -> Outcome {
    let steady = |l: &RegisterLayout| {
        let p = plan_proposed(l, 400).unwrap();
        count_elements(&p, 400..=400)
    };
    let total = |l: &RegisterLayout, n: usize| {
        let p = plan_proposed(l, n).unwrap();
        count_elements(&p, 1..=n)
    };
    let ec = |buffers, inverters| ElementCount { buffers, inverters };
    let checks = [
        ("A steady", steady(&layout_a()), ec(3, 90)),
        ("B steady", steady(&layout_b()), ec(4, 80)),
        ("C steady", steady(&layout_c()), ec(3, 108)),
        ("A init", total(&layout_a(), 1152), ec(3499, 103_637)),
        ("B init", total(&layout_b(), 1152), ec(4572, 92_196)),
        ("C init", total(&layout_c(), 1152), ec(3490, 124_382)),
        ("LFSR steady", steady(&layout_lfsr()), ec(6, 122)),
        ("NFSR steady", steady(&layout_nfsr()), ec(20, 108)),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, got, want)| format!("{name}: {got:?} != {want:?}"))
        .collect();
    let nfsr = total(&layout_nfsr(), 256);
    outcome(
        bad.is_empty(),
        format!(
            "{} of {} counts exact{}; NFSR pre-init total ({}, {}) vs published (5118, 27650), see criterion 4",
            checks.len() - bad.len(),
            checks.len(),
            if bad.is_empty() { String::new() } else { format!(" {bad:?}") },
            nfsr.buffers,
            nfsr.inverters
        ),
    )
}

fn c6_equivalence() -> Outcome {
    let t = Instant::now();
    let mut vectors = 0;
    let mut ok = true;

    let lsb = BitOrder::LsbFirst;
    let msb = BitOrder::MsbFirst;
    ok &= bits_to_hex(&trivium_ref(&[false; 80], &[false; 80], 128).unwrap(), lsb)
        == "fbe0bf265859051b517a2e4e239fc97f";
    vectors += 1;
    ok &= bits_to_hex(&grain128a_ref(&[false; 128], &[false; 96], 128).unwrap(), msb)
        == "c0207f221660650b6a952ae26586136f";
    vectors += 1;
    let key = hex_to_bits("0123456789abcdef123456789abcdef0", msb).unwrap();
    let iv = hex_to_bits("0123456789abcdef12345678", msb).unwrap();
    ok &= bits_to_hex(&grain128a_ref(&key, &iv, 128).unwrap(), msb) == "f88720c13f46e6a43c07eeed89161a4d";
    vectors += 1;
    // Third-party Trivium vectors; that implementation emits 32-bit words
    // with reversed bit order.
    for (k, v, pt, ct) in [
        (
            vec![0x10u8; 10],
            vec![0x0fu8; 10],
            vec![0x10u8; 10],
            vec![197u8, 82, 249, 84, 126, 79, 33, 181, 157, 84],
        ),
        (
            b"an example".to_vec(),
            b"a nonce...".to_vec(),
            vec![1, 2, 3, 4, 5, 6, 7],
            vec![1, 181, 178, 4, 216, 223, 247],
        ),
    ] {
        let ks = trivium_ref(&bytes_to_bits(&k, lsb), &bytes_to_bits(&v, lsb), 96).unwrap();
        let words: Vec<bool> = ks.chunks(32).flat_map(|w| w.iter().rev().copied()).collect();
        let stream = bits_to_bytes(&words, lsb);
        let got: Vec<u8> = pt.iter().zip(stream).map(|(p, s)| p ^ s).collect();
        ok &= got == ct;
        vectors += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x1A7E);
    let mut runs = 0;
    for c in Cipher::ALL {
        for _ in 0..EQUIV_PAIRS {
            let key: Vec<bool> = (0..c.key_bits()).map(|_| rng.gen()).collect();
            let iv: Vec<bool> = (0..c.iv_bits()).map(|_| rng.gen()).collect();
            let want = match c {
                Cipher::Trivium => trivium_ref(&key, &iv, EQUIV_BITS).unwrap(),
                Cipher::Grain128a => grain128a_ref(&key, &iv, EQUIV_BITS).unwrap(),
            };
            for m in ShiftMode::ALL {
                let (got, _) = simulate_keystream(c, &key, &iv, EQUIV_BITS, m).unwrap();
                ok &= got == want;
                runs += 1;
            }
        }
    }
    let el = t.elapsed();
    outcome(
        ok && el < Duration::from_secs(60),
        format!("{vectors} external vectors, {runs} simulated runs of {EQUIV_BITS} bits, {el:?}"),
    )
}

fn c7_polarity() -> Outcome {
    let mut plans = 0;
    let mut mutants = 0;
    let mut ok = true;
    for layout in [layout_a(), layout_b(), layout_c(), layout_lfsr(), layout_nfsr()] {
        let cycles = 2 * layout.len + 2;
        let plan = plan_proposed(&layout, cycles).unwrap();
        ok &= verify_polarity(&plan).is_ok();
        plans += 1;
        for (_, k1) in layout.tap_pairs() {
            for t in 1..=cycles {
                let mut m = plan.clone();
                m.cycles[t - 1][k1 - 1] = Element::Inverter;
                ok &= verify_polarity(&m).is_err();
                mutants += 1;
            }
        }
    }
    outcome(ok, format!("{plans} plans verified, {mutants} single-transfer mutants all rejected"))
}

fn fixture(seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let px = (0..256 * 256)
        .map(|i| {
            let (x, y) = (i % 256, i / 256);
            let base = (x + y) / 2;
            (base + rng.gen_range(-12..=12)).clamp(0, 255) as u8
        })
        .collect();
    GrayImage::new(256, 256, px).unwrap()
}

fn c8_stego() -> Outcome {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut slowest = Duration::ZERO;
    let mut cases = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x57E6);
    for (ci, c) in Cipher::ALL.into_iter().enumerate() {
        let cover = fixture(ci as u64 + 1);
        for pct in [1usize, 50, 100] {
            let t = Instant::now();
            let nbits = cover.capacity() * pct / 100;
            let key: Vec<bool> = (0..c.key_bits()).map(|_| rng.gen()).collect();
            let iv: Vec<bool> = (0..c.iv_bits()).map(|_| rng.gen()).collect();
            let msg: Vec<bool> = (0..nbits).map(|_| rng.gen()).collect();
            let (ks, _) = simulate_keystream(c, &key, &iv, nbits, ShiftMode::Proposed).unwrap();
            let ct = xorcrypt(&msg, &ks).unwrap();
            let st = embed_lsb(&cover, &ct).unwrap();
            let back = xorcrypt(&extract_lsb(&st).unwrap(), &ks).unwrap();
            let p = psnr(&cover, &st).unwrap();
            ok &= back == msg && p >= PSNR_FLOOR_DB;
            worst = worst.min(p);
            slowest = slowest.max(t.elapsed());
            cases += 1;
        }
    }
    outcome(
        ok && slowest < Duration::from_secs(1),
        format!("{cases} round trips exact, lowest PSNR {worst:.2} dB, slowest image {slowest:?}"),
    )
}

fn c9_ratios() -> Outcome {
    let t = improvement(Cipher::Trivium);
    let g = improvement(Cipher::Grain128a);
    let pass = close(t.steps_pct, 38.0, RATIO_TOL_PP) && close(g.steps_pct, 42.0, RATIO_TOL_PP);
    outcome(
        pass,
        format!(
            "Trivium {:.2}% vs 38% (off {:.2} pp), Grain-128a {:.2}% vs 42% (off {:.2} pp), tolerance {RATIO_TOL_PP} pp; \
             energy {:.2}% / {:.2}%",
            t.steps_pct,
            t.steps_pct - 38.0,
            g.steps_pct,
            g.steps_pct - 42.0,
            t.energy_pct,
            g.energy_pct
        ),
    )
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, "IMPLY semantics", c1_imply),
        (2, "gate metrics", c2_gates),
        (3, "Trivium cost", c3_trivium),
        (4, "Grain-128a cost", c4_grain),
        (5, "shift-plan census", c5_census),
        (6, "functional equivalence", c6_equivalence),
        (7, "polarity invariant", c7_polarity),
        (8, "steganography", c8_stego),
        (9, "improvement ratios", c9_ratios),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} {tag} {name}: {}", o.detail);
        if o.pass == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcomes as pinned (known failures {KNOWN_FAILURES:?})");
    } else {
        println!("acceptance: criteria {unexpected:?} changed outcome");
        std::process::exit(1);
    }
}
