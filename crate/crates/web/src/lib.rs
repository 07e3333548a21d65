// SPDX-License-Identifier: Apache-2.0
//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns JSON or raw pixels. The `*_json` functions below hold
//! the logic and are plain Rust, so they run in native tests too.

use imply_cim::cost::{ClosedForm, CostReport};
use imply_cim::hexio::{bits_to_bytes, bits_to_hex, bytes_to_bits, parse_material, BitOrder};
use imply_cim::schedule::{count_row, plan_conventional, plan_proposed, Element, RegisterLayout};
use imply_cim::stego::{embed_lsb, extract_lsb, psnr, GrayImage};
use imply_cim::{grain, simulate_keystream, trivium, Cipher, ShiftMode};
use serde_json::{json, Value};
use std::cell::RefCell;
use std::collections::HashMap;
use wasm_bindgen::prelude::*;

/// Longest plan the grid view will draw.
pub const MAX_GRID_CYCLES: usize = 512;

type Res<T> = Result<T, String>;

fn cipher(s: &str) -> Res<Cipher> {
    s.parse()
}

fn mode(s: &str) -> Res<ShiftMode> {
    s.parse()
}

fn layouts(c: Cipher) -> Vec<RegisterLayout> {
    match c {
        Cipher::Trivium => vec![trivium::layout_a(), trivium::layout_b(), trivium::layout_c()],
        Cipher::Grain128a => vec![grain::layout_lfsr(), grain::layout_nfsr()],
    }
}

fn material(c: Cipher, key: &str, iv: &str) -> Res<(Vec<bool>, Vec<bool>)> {
    let k = parse_material(key, c.key_bits(), c.bit_order(), "key").map_err(|e| e.to_string())?;
    let v = parse_material(iv, c.iv_bits(), c.bit_order(), "iv").map_err(|e| e.to_string())?;
    Ok((k, v))
}

/// Register names for a cipher, as a JSON array.
pub fn registers_json(c: &str) -> Res<String> {
    let names: Vec<String> = layouts(cipher(c)?).into_iter().map(|l| l.name).collect();
    Ok(Value::from(names).to_string())
}

/// Shift plan of one register: element and polarity of every cell for each
/// cycle. Rows are strings with one character per travel position, `B` or
/// `I` for elements and `0` or `1` (1 = complemented) for polarity.
pub fn plan_grid_json(c: &str, m: &str, register: &str, cycles: usize) -> Res<String> {
    let c = cipher(c)?;
    let m = mode(m)?;
    if cycles == 0 || cycles > MAX_GRID_CYCLES {
        return Err(format!("cycles must be in 1..={MAX_GRID_CYCLES}"));
    }
    let layout = layouts(c)
        .into_iter()
        .find(|l| l.name.eq_ignore_ascii_case(register))
        .ok_or_else(|| format!("{c} has no register `{register}`"))?;
    let plan = match m {
        ShiftMode::Conventional => plan_conventional(&layout, cycles),
        ShiftMode::Proposed => plan_proposed(&layout, cycles).map_err(|e| e.to_string())?,
    };
    let mut elements = Vec::with_capacity(cycles);
    let mut counts = Vec::with_capacity(cycles);
    for t in 1..=cycles {
        let row = plan.cycle(t);
        elements
            .push(row.iter().map(|e| if *e == Element::Inverter { 'I' } else { 'B' }).collect::<String>());
        let n = count_row(row);
        counts.push(json!([n.buffers, n.inverters]));
    }
    let polarity: Vec<String> =
        plan.polarity_map().iter().map(|r| r.iter().map(|&p| if p { '1' } else { '0' }).collect()).collect();
    let labels: Vec<String> = (1..=layout.len).map(|j| layout.label_name(j)).collect();
    Ok(json!({
        "register": layout.name,
        "len": layout.len,
        "labels": labels,
        "taps": layout.taps,
        "steady_cycle": layout.steady_cycle(),
        "elements": elements,
        "polarity": polarity,
        "counts": counts,
    })
    .to_string())
}

thread_local! {
    static FORMS: RefCell<HashMap<(Cipher, ShiftMode), ClosedForm>> = RefCell::new(HashMap::new());
}

// Costs are affine in n and the key does not change them, so one warm-up and
// one keystream bit per cipher and mode are enough.
fn fitted(c: Cipher, m: ShiftMode) -> Res<ClosedForm> {
    if let Some(f) = FORMS.with(|f| f.borrow().get(&(c, m)).copied()) {
        return Ok(f);
    }
    let k = vec![false; c.key_bits()];
    let v = vec![false; c.iv_bits()];
    let (_, r) = simulate_keystream(c, &k, &v, 1, m).map_err(|e| e.to_string())?;
    let f = ClosedForm::from_simulation(&r.init, &r.keystream, c, m);
    FORMS.with(|forms| forms.borrow_mut().insert((c, m), f));
    Ok(f)
}

/// Steps and energy against keystream length for both shift modes, simulated
/// and from the published formulas, at `points` evenly spaced values up to
/// `n_max`.
pub fn cost_curves_json(c: &str, n_max: u32, points: u32) -> Res<String> {
    let c = cipher(c)?;
    let points = points.clamp(2, 200) as u64;
    let ns: Vec<u64> = (0..points).map(|i| i * n_max as u64 / (points - 1)).collect();
    let mut series = serde_json::Map::new();
    for m in ShiftMode::ALL {
        for (source, form) in [("simulated", fitted(c, m)?), ("published", ClosedForm::printed(c, m))] {
            let (steps, uj): (Vec<u64>, Vec<f64>) = ns
                .iter()
                .map(|&n| {
                    let (s, e) = form.eval(n);
                    (s, e.as_uj())
                })
                .unzip();
            series.insert(
                format!("{m} {source}"),
                json!({ "form": form.label(), "steps": steps, "energy_uj": uj }),
            );
        }
    }
    Ok(json!({ "cipher": c, "n": ns, "series": series }).to_string())
}

fn summary(report: &CostReport) -> Value {
    json!({
        "init_steps": report.init.steps,
        "keystream_steps": report.keystream.steps,
        "total_steps": report.total_steps,
        "total_energy_uj": report.total_energy_uj(),
        "memristors": report.memristors,
    })
}

/// `n` keystream bits as hex plus the cost of producing them.
pub fn keystream_json(c: &str, m: &str, key: &str, iv: &str, n: usize) -> Res<String> {
    let c = cipher(c)?;
    let (k, v) = material(c, key, iv)?;
    let (bits, report) = simulate_keystream(c, &k, &v, n, mode(m)?).map_err(|e| e.to_string())?;
    Ok(json!({ "hex": bits_to_hex(&bits, c.bit_order()), "cost": summary(&report) }).to_string())
}

fn crypt(c: Cipher, m: ShiftMode, key: &str, iv: &str, data: &[u8]) -> Res<Vec<u8>> {
    let (k, v) = material(c, key, iv)?;
    let (ks, _) = simulate_keystream(c, &k, &v, data.len() * 8, m).map_err(|e| e.to_string())?;
    Ok(data.iter().zip(bits_to_bytes(&ks, c.bit_order())).map(|(d, k)| d ^ k).collect())
}

/// Encrypts `message` and hides it in the grayscale `pixels`; returns the
/// stego pixels.
#[allow(clippy::too_many_arguments)]
pub fn stego_embed_pixels(
    c: &str,
    m: &str,
    key: &str,
    iv: &str,
    pixels: &[u8],
    width: usize,
    height: usize,
    message: &str,
) -> Res<Vec<u8>> {
    let cover = GrayImage::new(width, height, pixels.to_vec()).map_err(|e| e.to_string())?;
    let ct = crypt(cipher(c)?, mode(m)?, key, iv, message.as_bytes())?;
    let st = embed_lsb(&cover, &bytes_to_bits(&ct, BitOrder::MsbFirst)).map_err(|e| e.to_string())?;
    Ok(st.pixels().to_vec())
}

/// Recovers a message hidden by [`stego_embed_pixels`]. Bytes that are not
/// UTF-8 (a wrong key, usually) are replaced.
pub fn stego_extract_text(
    c: &str,
    m: &str,
    key: &str,
    iv: &str,
    pixels: &[u8],
    width: usize,
    height: usize,
) -> Res<String> {
    let img = GrayImage::new(width, height, pixels.to_vec()).map_err(|e| e.to_string())?;
    let bits = extract_lsb(&img).map_err(|e| e.to_string())?;
    let ct = bits_to_bytes(&bits, BitOrder::MsbFirst);
    let pt = crypt(cipher(c)?, mode(m)?, key, iv, &ct)?;
    Ok(String::from_utf8_lossy(&pt).into_owned())
}

pub fn psnr_db(a: &[u8], b: &[u8], width: usize, height: usize) -> Res<f64> {
    let a = GrayImage::new(width, height, a.to_vec()).map_err(|e| e.to_string())?;
    let b = GrayImage::new(width, height, b.to_vec()).map_err(|e| e.to_string())?;
    psnr(&a, &b).map_err(|e| e.to_string())
}

fn js<T>(r: Res<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn registers(cipher: &str) -> Result<String, JsError> {
    js(registers_json(cipher))
}

#[wasm_bindgen]
pub fn plan_grid(cipher: &str, mode: &str, register: &str, cycles: usize) -> Result<String, JsError> {
    js(plan_grid_json(cipher, mode, register, cycles))
}

#[wasm_bindgen]
pub fn cost_curves(cipher: &str, n_max: u32, points: u32) -> Result<String, JsError> {
    js(cost_curves_json(cipher, n_max, points))
}

#[wasm_bindgen]
pub fn keystream(cipher: &str, mode: &str, key: &str, iv: &str, n: usize) -> Result<String, JsError> {
    js(keystream_json(cipher, mode, key, iv, n))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn stego_embed(
    cipher: &str,
    mode: &str,
    key: &str,
    iv: &str,
    pixels: &[u8],
    width: usize,
    height: usize,
    message: &str,
) -> Result<Vec<u8>, JsError> {
    js(stego_embed_pixels(cipher, mode, key, iv, pixels, width, height, message))
}

#[wasm_bindgen]
pub fn stego_extract(
    cipher: &str,
    mode: &str,
    key: &str,
    iv: &str,
    pixels: &[u8],
    width: usize,
    height: usize,
) -> Result<String, JsError> {
    js(stego_extract_text(cipher, mode, key, iv, pixels, width, height))
}

#[wasm_bindgen]
pub fn image_psnr(a: &[u8], b: &[u8], width: usize, height: usize) -> Result<f64, JsError> {
    js(psnr_db(a, b, width, height))
}
