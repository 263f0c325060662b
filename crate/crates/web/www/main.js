import init, { trace_orbit, basin_map, lyapunov_scan, attractor_summary } from "./pkg/cubic_rds_web.js";

const BASIN_STRIDE = 7;
const SCAN_STRIDE = 5;
const $ = (id) => document.getElementById(id);

// Simplex vertices e1 (bottom left), e2 (bottom right), e3 (top).
function simplexFrame(canvas) {
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = w * Math.sqrt(3) / 2;
  const top = (canvas.height - h) / 2;
  const v = [[pad, top + h], [pad + w, top + h], [pad + w / 2, top]];
  const map = ([a, b, c]) => [a * v[0][0] + b * v[1][0] + c * v[2][0], a * v[0][1] + b * v[1][1] + c * v[2][1]];
  return { v, map };
}

function drawSimplex(ctx, frame) {
  const { v, map } = frame;
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.strokeStyle = "#444";
  ctx.beginPath();
  ctx.moveTo(...v[0]); ctx.lineTo(...v[1]); ctx.lineTo(...v[2]); ctx.closePath();
  ctx.stroke();
  ctx.strokeStyle = "#ccc";
  for (const [p, q] of [[[1, 0, 0], [0, 0.5, 0.5]], [[0, 1, 0], [0.5, 0, 0.5]], [[0, 0, 1], [0.5, 0.5, 0]]]) {
    ctx.beginPath(); ctx.moveTo(...map(p)); ctx.lineTo(...map(q)); ctx.stroke();
  }
  ctx.fillStyle = "#222";
  ctx.font = "13px sans-serif";
  ctx.fillText("e1", v[0][0] - 18, v[0][1] + 4);
  ctx.fillText("e2", v[1][0] + 6, v[1][1] + 4);
  ctx.fillText("e3", v[2][0] - 6, v[2][1] - 8);
}

function fail(target, err) {
  target.textContent = String(err.message ?? err);
}

function runOrbit() {
  const canvas = $("orbit-canvas");
  const ctx = canvas.getContext("2d");
  const frame = simplexFrame(canvas);
  drawSimplex(ctx, frame);
  try {
    const x0 = $("orbit-x0").value.split(",").map(Number);
    const trace = trace_orbit($("orbit-dist").value, x0[0], x0[1], x0[2], Number($("orbit-steps").value), BigInt($("orbit-seed").value));
    const pts = trace.points;
    ctx.strokeStyle = "rgba(31,119,180,0.6)";
    ctx.beginPath();
    for (let i = 0; i < pts.length; i += 3) {
      const [x, y] = frame.map([pts[i], pts[i + 1], pts[i + 2]]);
      if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    }
    ctx.stroke();
    const n = pts.length;
    ctx.fillStyle = "#2ca02c";
    ctx.beginPath(); ctx.arc(...frame.map([pts[0], pts[1], pts[2]]), 4, 0, 2 * Math.PI); ctx.fill();
    ctx.fillStyle = "#d62728";
    ctx.beginPath(); ctx.arc(...frame.map([pts[n - 3], pts[n - 2], pts[n - 1]]), 4, 0, 2 * Math.PI); ctx.fill();
    const last = [pts[n - 3], pts[n - 2], pts[n - 1]].map((v) => v.toPrecision(6)).join(", ");
    $("orbit-info").textContent = `verdict: ${trace.verdict}\nfinal state: ${last}\nstored points: ${n / 3}`;
  } catch (e) {
    fail($("orbit-info"), e);
  }
}

function runBasin() {
  const canvas = $("basin-canvas");
  const ctx = canvas.getContext("2d");
  const frame = simplexFrame(canvas);
  drawSimplex(ctx, frame);
  const dist = $("basin-dist").value;
  const grid = Number($("basin-grid").value);
  try {
    $("basin-info").textContent = attractor_summary(dist);
    const v = basin_map(dist, grid, Number($("basin-trials").value), BigInt($("basin-seed").value), 100000);
    const radius = Math.max(2, 180 / grid);
    for (let i = 0; i < v.length; i += BASIN_STRIDE) {
      const [pe1, pc12, pc, other] = [v[i + 3], v[i + 4], v[i + 5], v[i + 6]];
      const r = Math.round(214 * pe1 + 44 * pc12 + 31 * pc + 153 * other);
      const g = Math.round(39 * pe1 + 160 * pc12 + 119 * pc + 153 * other);
      const b = Math.round(40 * pe1 + 44 * pc12 + 180 * pc + 153 * other);
      ctx.fillStyle = `rgb(${r},${g},${b})`;
      ctx.beginPath();
      ctx.arc(...frame.map([v[i], v[i + 1], v[i + 2]]), radius, 0, 2 * Math.PI);
      ctx.fill();
    }
  } catch (e) {
    fail($("basin-info"), e);
  }
}

function runScan() {
  const canvas = $("scan-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let v;
  try {
    v = lyapunov_scan(Number($("scan-from").value), Number($("scan-to").value), Number($("scan-step").value), Number($("scan-offset").value));
  } catch (e) {
    ctx.fillStyle = "#d62728";
    ctx.fillText(String(e.message ?? e), 20, 30);
    return;
  }
  const rows = v.length / SCAN_STRIDE;
  const pad = 40;
  let lo = 0, hi = 0;
  for (let i = 0; i < v.length; i += SCAN_STRIDE) {
    for (let k = 1; k < SCAN_STRIDE; k++) { lo = Math.min(lo, v[i + k]); hi = Math.max(hi, v[i + k]); }
  }
  const t0 = v[0], t1 = v[(rows - 1) * SCAN_STRIDE];
  const sx = (t) => pad + (canvas.width - 2 * pad) * (t1 > t0 ? (t - t0) / (t1 - t0) : 0.5);
  const sy = (y) => canvas.height - pad - (canvas.height - 2 * pad) * (y - lo) / (hi - lo || 1);
  ctx.strokeStyle = "#999";
  ctx.beginPath(); ctx.moveTo(pad, sy(0)); ctx.lineTo(canvas.width - pad, sy(0)); ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.font = "12px sans-serif";
  ctx.fillText(t0.toFixed(3), pad - 10, canvas.height - 15);
  ctx.fillText(t1.toFixed(3), canvas.width - pad - 20, canvas.height - 15);
  ctx.fillText(hi.toFixed(3), 2, sy(hi) + 4);
  ctx.fillText(lo.toFixed(3), 2, sy(lo) + 4);
  const colors = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e"];
  for (let k = 1; k < SCAN_STRIDE; k++) {
    ctx.strokeStyle = colors[k - 1];
    ctx.beginPath();
    for (let r = 0; r < rows; r++) {
      const i = r * SCAN_STRIDE;
      if (r === 0) ctx.moveTo(sx(v[i]), sy(v[i + k])); else ctx.lineTo(sx(v[i]), sy(v[i + k]));
    }
    ctx.stroke();
  }
}

await init();
$("orbit-run").addEventListener("click", runOrbit);
$("basin-run").addEventListener("click", runBasin);
$("scan-run").addEventListener("click", runScan);
runOrbit();
runBasin();
runScan();
