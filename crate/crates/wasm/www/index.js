import init, { dualCurves, accuracyProfile, Projection } from "./pkg/dualbern_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(id, text, bad = false) {
  $(id).textContent = text;
  $(id).className = bad ? "status error" : "status";
}

// Draws each series [[x, y], ...] scaled to the joint bounding box.
function plot(canvas, series, { ymin, ymax } = {}) {
  const g = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  g.clearRect(0, 0, w, h);
  const ys = series.flatMap((s) => s.points.map((p) => p[1])).filter(Number.isFinite);
  const lo = ymin ?? Math.min(...ys), hi = ymax ?? Math.max(...ys);
  const span = hi - lo || 1;
  const sx = (x) => pad + x * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - lo) / span) * (h - 2 * pad);

  g.strokeStyle = "#bbb";
  g.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  if (lo < 0 && hi > 0) {
    g.beginPath(); g.moveTo(sx(0), sy(0)); g.lineTo(sx(1), sy(0)); g.stroke();
  }
  g.fillStyle = "#666";
  g.fillText(hi.toPrecision(3), 2, pad - 4);
  g.fillText(lo.toPrecision(3), 2, h - pad + 12);

  for (const s of series) {
    g.strokeStyle = s.color;
    g.lineWidth = s.width ?? 1.5;
    g.beginPath();
    s.points.forEach(([x, y], k) => (k ? g.lineTo(sx(x), sy(y)) : g.moveTo(sx(x), sy(y))));
    g.stroke();
  }
}

const hue = (k, n) => `hsl(${(300 * k) / Math.max(n, 1)}, 70%, 45%)`;

function drawCurves() {
  const n = num("curve-n"), samples = 401;
  try {
    const t0 = performance.now();
    const v = dualCurves(n, num("alpha"), num("beta"), samples);
    const ms = (performance.now() - t0).toFixed(1);
    const series = [];
    for (let i = 0; i <= n; i++) {
      const points = [];
      for (let k = 0; k < samples; k++) points.push([k / (samples - 1), v[k * (n + 1) + i]]);
      series.push({ points, color: hue(i, n) });
    }
    plot($("curves"), series);
    status("curve-status", `${n + 1} curves at ${samples} points in ${ms} ms`);
  } catch (e) {
    status("curve-status", String(e), true);
  }
}

function drawAccuracy() {
  status("acc-status", "computing reference…");
  // let the status paint before the blocking call
  setTimeout(() => {
    try {
      const v = accuracyProfile(num("acc-n"), num("alpha"), num("beta"), num("acc-ref"));
      const min = [], mean = [];
      for (let k = 0; k < v.length; k += 3) {
        min.push([v[k], v[k + 1]]);
        mean.push([v[k], v[k + 2]]);
      }
      plot($("accuracy"), [
        { points: mean, color: "#1565c0" },
        { points: min, color: "#c62828" },
      ], { ymin: 0, ymax: 17 });
      const worst = Math.min(...min.map((p) => p[1]));
      status("acc-status", `digits: mean (blue), min (red); worst ${worst.toFixed(2)}`);
    } catch (e) {
      status("acc-status", String(e), true);
    }
  }, 10);
}

function drawProjection() {
  const f = $("proj-f").value, samples = 401;
  let p;
  try {
    p = new Projection(f, num("proj-n"), num("alpha"), num("beta"));
    const v = p.sample(samples);
    const approx = [], target = [];
    for (let k = 0; k < samples; k++) {
      const x = k / (samples - 1);
      approx.push([x, v[2 * k]]);
      target.push([x, v[2 * k + 1]]);
    }
    const c = p.coeffs();
    const poly = Array.from(c, (y, k) => [c.length > 1 ? k / (c.length - 1) : 0.5, y]);
    plot($("projection"), [
      { points: poly, color: "#aaa", width: 1 },
      { points: target, color: "#222" },
      { points: approx, color: "#2e7d32", width: 2 },
    ]);
    status("proj-status", `weighted squared error ${p.errorSq.toExponential(3)}`);
  } catch (e) {
    status("proj-status", String(e), true);
  } finally {
    p?.free();
  }
}

await init();
$("curve-go").onclick = drawCurves;
$("acc-go").onclick = drawAccuracy;
$("proj-go").onclick = drawProjection;
for (const id of ["alpha", "beta"]) $(id).onchange = drawCurves;
drawCurves();
drawProjection();
