import init, { analyzeSentence, countingCurve, tractabilityCurve } from "./pkg/avgtime_web.js";

const $ = (id) => document.getElementById(id);

function show(el, text, isError = false) {
  el.textContent = text;
  el.className = isError ? "err" : "";
}

function plot(canvas, series, { logY = false, logX = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 44;
  ctx.clearRect(0, 0, w, h);
  const tx = (x) => (logX ? Math.log10(x) : x);
  const ty = (y) => (logY ? Math.log10(y) : y);
  const pts = series.flatMap((s) => s.points).filter(([x, y]) => isFinite(tx(x)) && isFinite(ty(y)));
  if (pts.length === 0) return;
  let [x0, x1] = [Math.min(...pts.map((p) => tx(p[0]))), Math.max(...pts.map((p) => tx(p[0])))];
  let [y0, y1] = [Math.min(...pts.map((p) => ty(p[1]))), Math.max(...pts.map((p) => ty(p[1])))];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const sx = (x) => pad + ((tx(x) - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((ty(y) - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  const label = (v, log) => (log ? "1e" + v.toFixed(1) : v.toPrecision(4));
  ctx.fillText(label(y1, logY), 2, pad + 4);
  ctx.fillText(label(y0, logY), 2, h - pad);
  ctx.fillText(label(x0, logX), pad, h - pad + 16);
  ctx.fillText(label(x1, logX), w - pad - 40, h - pad + 16);

  series.forEach((s, i) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach(([x, y], j) => (j ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.name, pad + 8, pad + 16 + 14 * i);
  });
}

function runSentence() {
  const out = $("sentence-out");
  try {
    const r = analyzeSentence($("rpn").value.trim());
    const models = Array.from(r.models);
    show(out, [
      `canonical      ${r.canonical}`,
      `size           ${r.sizeBits} bits`,
      `variables α    ${r.alpha}`,
      `tabulator time ${r.tabulateTime}  (2^α · size)`,
      `scanner time   ${r.scanTime}  (size · (first model + 1))`,
      `first model    ${r.witness ?? "none"}`,
      `models         ${models.length ? models.join(" ") : "none"}`,
    ].join("\n"));
    r.free();
  } catch (e) {
    show(out, String(e), true);
  }
}

function runCounting() {
  const out = $("count-out");
  try {
    const n = Number($("count-n").value);
    const p = Number($("count-p").value);
    const flat = countingCurve(n, p);
    const ratio = [], sums = [];
    for (let i = 0; i < flat.length; i += 2) {
      ratio.push([i / 2, flat[i]]);
      sums.push([i / 2, flat[i + 1]]);
    }
    plot($("count-canvas"), [
      { name: "F(N)", color: "#c33", points: ratio },
      { name: "Σ F", color: "#36c", points: sums },
    ], { logY: true });
    const last = sums[sums.length - 1][1];
    show(out, `F(${n}) = ${ratio[ratio.length - 1][1].toPrecision(6)}, partial sum = ${last.toPrecision(6)}`);
  } catch (e) {
    show(out, String(e), true);
  }
}

function runTractability() {
  const out = $("tract-out");
  try {
    const c = tractabilityCurve($("tract-example").value, Number($("tract-terms").value), 200);
    const ks = Array.from(c.ks), vs = Array.from(c.values);
    plot($("tract-canvas"), [
      { name: "partial average", color: "#393", points: ks.map((k, i) => [k, vs[i]]) },
    ], { logX: true });
    show(out, `verdict ${c.verdict}; last value ${vs[vs.length - 1].toPrecision(8)} at k = ${ks[ks.length - 1]}`);
    c.free();
  } catch (e) {
    show(out, String(e), true);
  }
}

await init();
document.querySelectorAll("[data-sym]").forEach((b) =>
  b.addEventListener("click", () => {
    const input = $("rpn");
    input.value = (input.value.trimEnd() + " " + b.dataset.sym).trimStart();
    input.focus();
  }));
$("analyze").addEventListener("click", runSentence);
$("rpn").addEventListener("keydown", (e) => e.key === "Enter" && runSentence());
$("count").addEventListener("click", runCounting);
$("tract").addEventListener("click", runTractability);
runSentence();
runCounting();
runTractability();
