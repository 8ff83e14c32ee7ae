import init, { expand_spec, kappa_curve, psi_check } from "./pkg/kappa_expand_web.js";

const $ = (id) => document.getElementById(id);

function show(target, fn) {
  try {
    target.classList.remove("error");
    return fn();
  } catch (e) {
    target.classList.add("error");
    target.textContent = String(e);
    return null;
  }
}

function runExpand() {
  const out = $("series");
  show(out, () => {
    out.textContent = expand_spec($("spec").value, Number($("order").value), $("dimension").value, $("format").value);
  });
}

// relative deviation of each partial sum from quadrature, log scale
function runPlot() {
  const legend = $("legend");
  const curve = show(legend, () =>
    JSON.parse(kappa_curve($("spec").value, Number($("order").value), $("dimension").value,
      Number($("kmax").value), Number($("points").value), Number($("nodes").value), $("invariants").value)));
  if (!curve) return;
  const canvas = $("canvas");
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 50;
  ctx.clearRect(0, 0, w, h);

  const series = curve.partial.map((row) =>
    row.map((v, i) => Math.max(Math.abs(v / curve.quadrature[i] - 1), 1e-16)));
  const all = series.flat();
  const lo = Math.floor(Math.log10(Math.min(...all)));
  const hi = Math.ceil(Math.log10(Math.max(...all)));
  const kmax = curve.kappa[curve.kappa.length - 1];
  const x = (k) => pad + (w - 2 * pad) * (k / kmax);
  const y = (v) => h - pad - (h - 2 * pad) * ((Math.log10(v) - lo) / Math.max(hi - lo, 1));

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  for (let e = lo; e <= hi; e += Math.max(1, Math.round((hi - lo) / 8))) {
    ctx.fillText(`1e${e}`, 4, y(10 ** e) + 4);
  }
  for (let i = 0; i <= 4; i++) {
    const k = (kmax * i) / 4;
    ctx.fillText(k.toFixed(3), x(k) - 12, h - pad + 16);
  }
  ctx.fillText("κ", w - pad + 8, h - pad + 4);

  series.forEach((row, j) => {
    ctx.strokeStyle = `hsl(${(j * 360) / series.length}, 70%, 45%)`;
    ctx.beginPath();
    row.forEach((v, i) => (i ? ctx.lineTo(x(curve.kappa[i]), y(v)) : ctx.moveTo(x(curve.kappa[i]), y(v))));
    ctx.stroke();
  });
  legend.textContent =
    `|partial sum / quadrature − 1| for orders 0..${series.length - 1} (red → violet). ` +
    `Largest quadrature error estimate: ${Math.max(...curve.quadrature_error).toExponential(2)}.`;
}

function runPsi() {
  const table = $("psi-table");
  const rows = show(table, () => JSON.parse(psi_check($("power").value, Number($("psi-order").value))));
  if (!rows) return;
  table.innerHTML = "<tr><th>κ</th><th>expansion</th><th>oracle</th><th></th></tr>";
  for (const r of rows) {
    const tr = document.createElement("tr");
    for (const cell of [r.kappa, r.expansion, r.oracle, r.agree ? "✓" : "✗"]) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
}

await init();
$("expand").onclick = runExpand;
$("plot").onclick = runPlot;
$("psi").onclick = runPsi;
runExpand();
