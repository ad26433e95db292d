import init, { gridPoints, freeWave, evolve, weightProfile } from "./pkg/kdv5_wasm.js";

const FRAMES = 21;
const $ = (id) => document.getElementById(id);
let frames = null;

function params() {
  return {
    hw: Number($("hw").value),
    n: Number($("n").value),
    amp: Number($("amp").value),
    width: Number($("width").value),
  };
}

function plot(canvas, xs, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  let lo = Infinity, hi = -Infinity;
  for (const { ys } of series) for (const y of ys) { lo = Math.min(lo, y); hi = Math.max(hi, y); }
  if (hi - lo < 1e-12) { hi += 1; lo -= 1; }
  const pad = 0.05 * (hi - lo);
  lo -= pad; hi += pad;
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => ((x - x0) / (x1 - x0)) * w;
  const py = (y) => h - ((y - lo) / (hi - lo)) * h;
  ctx.strokeStyle = "#ddd";
  ctx.beginPath(); ctx.moveTo(0, py(0)); ctx.lineTo(w, py(0)); ctx.stroke();
  for (const { ys, color } of series) {
    ctx.strokeStyle = color;
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
  }
}

function guard(f) {
  try { $("status").textContent = ""; f(); }
  catch (e) { $("status").textContent = String(e); }
}

function drawFree() {
  guard(() => {
    const p = params();
    const t = Number($("t").value);
    $("tval").textContent = t.toFixed(2);
    const xs = gridPoints(p.hw, p.n);
    const u0 = freeWave(p.hw, p.n, p.amp, p.width, 0);
    const ut = freeWave(p.hw, p.n, p.amp, p.width, t);
    plot($("wave"), xs, [{ ys: u0, color: "#bbb" }, { ys: ut, color: "#06c" }]);
    frames = null;
  });
}

function drawFrame() {
  if (!frames) return;
  guard(() => {
    const p = params();
    const xs = gridPoints(p.hw, p.n);
    const j = Number($("frame").value);
    const at = (i) => frames.subarray(i * p.n, (i + 1) * p.n);
    plot($("wave"), xs, [{ ys: at(0), color: "#bbb" }, { ys: at(j), color: "#c30" }]);
  });
}

function runEvolve() {
  guard(() => {
    const p = params();
    frames = evolve(p.hw, p.n, Number($("k").value), p.amp, p.width, Number($("tf").value), FRAMES);
    $("frame").max = FRAMES - 1;
    $("frame").value = FRAMES - 1;
    drawFrame();
  });
}

function drawWeight() {
  guard(() => {
    const p = params();
    const trunc = Number($("trunc").value);
    $("nval").textContent = trunc;
    const xs = gridPoints(p.hw, p.n);
    const w = weightProfile(p.hw, p.n, trunc);
    const bracket = xs.map((x) => Math.sqrt(1 + x * x));
    plot($("weight"), xs, [{ ys: bracket, color: "#bbb" }, { ys: w, color: "#080" }]);
  });
}

await init();
$("t").addEventListener("input", drawFree);
$("run").addEventListener("click", runEvolve);
$("frame").addEventListener("input", drawFrame);
$("trunc").addEventListener("input", drawWeight);
for (const id of ["hw", "n", "amp", "width"]) $(id).addEventListener("change", () => { drawFree(); drawWeight(); });
drawFree();
drawWeight();
