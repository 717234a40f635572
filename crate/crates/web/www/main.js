import init, { spinOrbitCurve, heisenbergMarginCurve, uniquenessSlice } from "./pkg/hybrid_bracket_web.js";

const num = (id) => parseFloat(document.getElementById(id).value);

function axes(ctx, w, h, xmax, ymin, ymax) {
  const pad = 30;
  const sx = (x) => pad + (x / xmax) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - ymin) / (ymax - ymin)) * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0)); ctx.lineTo(w - pad, sy(0));
  ctx.moveTo(pad, pad); ctx.lineTo(pad, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(ymax.toPrecision(3), 2, pad);
  ctx.fillText(ymin.toPrecision(3), 2, h - pad);
  ctx.fillText(xmax.toPrecision(3), w - pad - 10, h - pad + 15);
  return { sx, sy };
}

function line(ctx, sx, sy, xs, ys, color, dash = []) {
  ctx.strokeStyle = color;
  ctx.setLineDash(dash);
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
  ctx.setLineDash([]);
}

function plotSpinOrbit() {
  const c = JSON.parse(spinOrbitCurve(num("so-g"), num("so-l1"), num("so-l2"), num("so-l3"), num("so-t"), 400));
  const cv = document.getElementById("so-canvas");
  const ctx = cv.getContext("2d");
  const { sx, sy } = axes(ctx, cv.width, cv.height, c.t[c.t.length - 1], -1.1, 1.1);
  const colors = ["#c33", "#393", "#36c"];
  for (let k = 0; k < 3; k++) {
    line(ctx, sx, sy, c.t, c.spin.map((v) => v[k]), colors[k]);
    line(ctx, sx, sy, c.t, c.orbital.map((v) => v[k]), colors[k], [4, 3]);
  }
}

function plotMargin() {
  const c = JSON.parse(heisenbergMarginCurve(num("pm-g"), num("pm-c"), num("pm-r"), 120, num("pm-t"), 300));
  const cv = document.getElementById("pm-canvas");
  const ctx = cv.getContext("2d");
  const lo = Math.min(0, ...c.margin), hi = Math.max(0, ...c.margin);
  const span = hi - lo || 1;
  const { sx, sy } = axes(ctx, cv.width, cv.height, c.t[c.t.length - 1], lo - 0.05 * span, hi + 0.05 * span);
  line(ctx, sx, sy, c.t, c.margin, "#36c");
  const out = document.getElementById("pm-out");
  if (c.t_star === null) {
    out.textContent = "no violation up to t max";
  } else {
    ctx.fillStyle = "#c33";
    ctx.beginPath();
    ctx.arc(sx(c.t_star), sy(0), 4, 0, 2 * Math.PI);
    ctx.fill();
    out.textContent = `first negative eigenvalue at t* ≈ ${c.t_star.toPrecision(4)}`;
  }
}

function plotSlice() {
  const r = num("uq-r");
  const p = Math.max(3, Math.min(41, Math.round(num("uq-p"))));
  const n = parseInt(document.getElementById("uq-n").value, 10);
  const s = JSON.parse(uniquenessSlice(n, num("uq-b"), -r, r, p, 11n));
  const cv = document.getElementById("uq-canvas");
  const ctx = cv.getContext("2d");
  const logs = s.residual.map((v) => Math.log10(v + 1e-16));
  const lo = Math.min(...logs), hi = Math.max(...logs);
  const cell = cv.width / p;
  logs.forEach((v, idx) => {
    const i = idx % p, j = Math.floor(idx / p);
    const shade = Math.round(255 * (v - lo) / (hi - lo || 1));
    ctx.fillStyle = `rgb(${shade},${shade},${Math.min(255, shade + 40)})`;
    ctx.fillRect(i * cell, cv.height - (j + 1) * cell, cell + 1, cell + 1);
  });
  let best = 0;
  s.residual.forEach((v, k) => { if (v < s.residual[best]) best = k; });
  document.getElementById("uq-out").textContent =
    `α across, γ up; smallest residual ${s.residual[best].toExponential(2)} at α=${s.alpha[best % p].toFixed(2)}, γ=${s.gamma[Math.floor(best / p)].toFixed(2)}`;
}

await init();
document.getElementById("so-run").onclick = plotSpinOrbit;
document.getElementById("pm-run").onclick = plotMargin;
document.getElementById("uq-run").onclick = plotSlice;
plotSpinOrbit();
plotMargin();
plotSlice();
