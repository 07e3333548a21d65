// SPDX-License-Identifier: Apache-2.0
import init, * as sim from "./pkg/imply_cim_web.js";

const $ = (id) => document.getElementById(id);
const DEFAULTS = {
  trivium: ["00000000000000000000", "00000000000000000000"],
  grain128a: ["0123456789abcdef123456789abcdef0", "0123456789abcdef12345678"],
};
const COLORS = {
  "proposed simulated": "#1b6ac9",
  "proposed published": "#1b6ac9",
  "conventional simulated": "#c94a1b",
  "conventional published": "#c94a1b",
};

function fail(e) {
  $("status").textContent = String(e);
  $("status").className = "err";
}

function guard(fn) {
  return (...args) => {
    try {
      $("status").textContent = "";
      $("status").className = "";
      fn(...args);
    } catch (e) {
      fail(e);
    }
  };
}

// Shift plan grid

function fillRegisters() {
  const names = JSON.parse(sim.registers($("g-cipher").value));
  $("g-reg").innerHTML = names.map((n) => `<option>${n}</option>`).join("");
}

function drawGrid() {
  const cycles = Math.max(1, Math.min(512, Number($("g-cycles").value) || 1));
  const g = JSON.parse(sim.plan_grid($("g-cipher").value, $("g-mode").value, $("g-reg").value, cycles));
  const showPol = $("g-pol").checked;
  const cell = 5;
  const top = 6;
  const cv = $("g-canvas");
  cv.width = g.len * cell;
  cv.height = top + cycles * cell;
  const ctx = cv.getContext("2d");
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, cv.width, cv.height);
  ctx.fillStyle = "#d22";
  for (const t of g.taps) ctx.fillRect((t - 1) * cell, 0, cell, top - 1);
  for (let t = 0; t < cycles; t++) {
    // polarity[0] is the initial load; row t shows the state after shift t + 1.
    const row = showPol ? g.polarity[t + 1] : g.elements[t];
    for (let j = 0; j < g.len; j++) {
      const dark = showPol ? row[j] === "1" : row[j] === "I";
      ctx.fillStyle = dark ? "#333" : "#e6e6e6";
      ctx.fillRect(j * cell, top + t * cell, cell - 1, cell - 1);
    }
  }
  const tot = g.counts.reduce((a, c) => [a[0] + c[0], a[1] + c[1]], [0, 0]);
  const steadyIdx = Math.min(g.steady_cycle, cycles) - 1;
  const s = g.counts[steadyIdx];
  $("g-info").textContent =
    `${g.register}: ${g.len} cells, taps at ${g.taps.map((t) => g.labels[t - 1]).join(" ")}. ` +
    `Over ${cycles} cycles: ${tot[0]} buffers, ${tot[1]} inverters ` +
    `(${4 * tot[0] + 2 * tot[1]} steps). Cycle ${steadyIdx + 1}: ${s[0]} buffers, ${s[1]} inverters.`;
}

// Cost curves

function svg(tag, attrs, text) {
  const el = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  if (text !== undefined) el.textContent = text;
  return el;
}

function drawCurves() {
  const nmax = Math.max(1, Number($("c-nmax").value) || 1);
  const data = JSON.parse(sim.cost_curves($("c-cipher").value, nmax, 50));
  const metric = $("c-metric").value;
  const plot = $("c-plot");
  plot.replaceChildren();
  const W = 720, H = 360, L = 80, R = 190, T = 15, B = 40;
  const ys = Object.values(data.series).flatMap((s) => s[metric]);
  const ymax = Math.max(...ys) * 1.05;
  const x = (n) => L + ((W - L - R) * n) / nmax;
  const y = (v) => H - B - ((H - T - B) * v) / ymax;
  plot.append(svg("line", { x1: L, y1: H - B, x2: W - R, y2: H - B, stroke: "#888" }));
  plot.append(svg("line", { x1: L, y1: T, x2: L, y2: H - B, stroke: "#888" }));
  for (let i = 0; i <= 4; i++) {
    const v = (ymax * i) / 4;
    const n = (nmax * i) / 4;
    plot.append(svg("text", { x: L - 6, y: y(v) + 4, "text-anchor": "end", "font-size": 11 }, v.toPrecision(3)));
    plot.append(svg("text", { x: x(n), y: H - B + 16, "text-anchor": "middle", "font-size": 11 }, Math.round(n)));
  }
  plot.append(svg("text", { x: (L + W - R) / 2, y: H - 6, "text-anchor": "middle", "font-size": 12 }, "keystream bits n"));
  let ly = T + 10;
  for (const [name, s] of Object.entries(data.series)) {
    const pts = data.n.map((n, i) => `${x(n)},${y(s[metric][i])}`).join(" ");
    const dash = name.endsWith("published") ? "6 4" : "";
    plot.append(svg("polyline", { points: pts, fill: "none", stroke: COLORS[name], "stroke-width": 2, "stroke-dasharray": dash }));
    plot.append(svg("line", { x1: W - R + 10, y1: ly - 4, x2: W - R + 34, y2: ly - 4, stroke: COLORS[name], "stroke-width": 2, "stroke-dasharray": dash }));
    plot.append(svg("text", { x: W - R + 40, y: ly, "font-size": 11 }, name));
    ly += 18;
  }
  const last = data.n.length - 1;
  const rows = Object.entries(data.series).map(
    ([name, s]) =>
      `<tr><td>${name}</td><td>${s.form}</td><td>${s.steps[last].toLocaleString()}</td><td>${s.energy_uj[last].toFixed(4)}</td></tr>`,
  );
  const sp = data.series["proposed simulated"].steps[last];
  const sc = data.series["conventional simulated"].steps[last];
  rows.push(`<tr><td>step saving (simulated)</td><td></td><td>${((100 * (sc - sp)) / sc).toFixed(2)} %</td><td></td></tr>`);
  $("c-table").innerHTML =
    `<tr><th>series</th><th>steps</th><th>steps at n = ${nmax}</th><th>energy (&micro;J)</th></tr>` + rows.join("");
}

// Keystream and stego

function keyArgs() {
  return [$("k-cipher").value, $("k-mode").value, $("k-key").value.trim(), $("k-iv").value.trim()];
}

function setDefaults() {
  const [k, v] = DEFAULTS[$("k-cipher").value];
  $("k-key").value = k;
  $("k-iv").value = v;
}

function runKeystream() {
  const n = Math.max(0, Math.min(4096, Number($("k-n").value) || 0));
  const r = JSON.parse(sim.keystream(...keyArgs(), n));
  const c = r.cost;
  $("k-out").textContent =
    `${r.hex}\n\nwarm-up ${c.init_steps.toLocaleString()} steps, keystream ${c.keystream_steps.toLocaleString()} steps, ` +
    `${c.total_energy_uj.toFixed(4)} uJ on ${c.memristors} memristors`;
}

let cover = null; // { w, h, px }
let stego = null;

function putGray(canvas, w, h, px) {
  canvas.width = w;
  canvas.height = h;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(w, h);
  for (let i = 0; i < px.length; i++) {
    img.data[4 * i] = img.data[4 * i + 1] = img.data[4 * i + 2] = px[i];
    img.data[4 * i + 3] = 255;
  }
  ctx.putImageData(img, 0, 0);
}

function syntheticCover() {
  const w = 256, h = 256;
  const px = new Uint8Array(w * h);
  let s = 12345;
  for (let i = 0; i < px.length; i++) {
    s = (s * 1103515245 + 12345) >>> 0;
    const base = ((i % w) + Math.floor(i / w)) / 2;
    px[i] = Math.max(0, Math.min(255, Math.round(base + ((s >>> 16) % 9) - 4)));
  }
  return { w, h, px };
}

function setCover(c) {
  cover = c;
  stego = null;
  putGray($("s-cover"), c.w, c.h, c.px);
  $("s-stego").width = $("s-diff").width = 0;
}

function loadFile(file) {
  const img = new Image();
  img.onload = guard(() => {
    const scale = Math.min(1, 512 / Math.max(img.width, img.height));
    const w = Math.max(6, Math.round(img.width * scale));
    const h = Math.max(6, Math.round(img.height * scale));
    const cv = document.createElement("canvas");
    cv.width = w;
    cv.height = h;
    const ctx = cv.getContext("2d");
    ctx.drawImage(img, 0, 0, w, h);
    const rgba = ctx.getImageData(0, 0, w, h).data;
    const px = new Uint8Array(w * h);
    for (let i = 0; i < px.length; i++) {
      px[i] = Math.round(0.299 * rgba[4 * i] + 0.587 * rgba[4 * i + 1] + 0.114 * rgba[4 * i + 2]);
    }
    setCover({ w, h, px });
  });
  img.src = URL.createObjectURL(file);
}

function embed() {
  const { w, h, px } = cover;
  const out = sim.stego_embed(...keyArgs(), px, w, h, $("s-msg").value);
  stego = out;
  putGray($("s-stego"), w, h, out);
  const diff = out.map((v, i) => (v === px[i] ? 255 : 0));
  putGray($("s-diff"), w, h, diff);
  const bits = new TextEncoder().encode($("s-msg").value).length * 8;
  const changed = diff.filter((v) => v === 0).length;
  const db = sim.image_psnr(px, out, w, h);
  $("s-out").textContent =
    `embedded ${bits} bits (+32 header) of ${w * h - 32} available; ${changed} pixels changed; ` +
    `PSNR ${Number.isFinite(db) ? db.toFixed(3) + " dB" : "infinite"}`;
}

function extract() {
  if (!stego) throw new Error("embed a message first");
  const text = sim.stego_extract(...keyArgs(), stego, cover.w, cover.h);
  $("s-out").textContent = `recovered: ${text}`;
}

async function main() {
  await init();
  $("status").textContent = "";
  fillRegisters();
  setDefaults();
  setCover(syntheticCover());
  $("g-cipher").onchange = guard(() => {
    fillRegisters();
    drawGrid();
  });
  for (const id of ["g-mode", "g-reg", "g-cycles", "g-pol"]) $(id).onchange = guard(drawGrid);
  for (const id of ["c-cipher", "c-nmax", "c-metric"]) $(id).onchange = guard(drawCurves);
  $("k-cipher").onchange = guard(setDefaults);
  $("k-run").onclick = guard(runKeystream);
  $("s-embed").onclick = guard(embed);
  $("s-extract").onclick = guard(extract);
  $("s-file").onchange = guard((e) => e.target.files[0] && loadFile(e.target.files[0]));
  guard(drawGrid)();
  guard(drawCurves)();
}

main().catch(fail);
