import init, { fidelityCurve, thresholdTable, compileSchedule } from "./pkg/ising_composite_wasm.js";

const FAMILIES = [
  ["simple", "#888", [6, 4]],
  ["bb1", "#1f77b4", []],
  ["nb1", "#2ca02c", []],
  ["pb1", "#d62728", []],
];
const SAMPLES = 801;
const $ = (id) => document.getElementById(id);

function drawCurves() {
  const theta = Number($("c-theta").value);
  const ideal = $("c-ideal").value === "theta" ? theta : 0;
  const gmin = Number($("c-gmin").value);
  const gmax = Number($("c-gmax").value);
  const log = $("c-log").checked;
  const canvas = $("c-plot");
  const ctx = canvas.getContext("2d");
  const pad = { l: 60, r: 15, t: 10, b: 35 };
  const w = canvas.width - pad.l - pad.r;
  const h = canvas.height - pad.t - pad.b;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  $("c-err").textContent = "";

  // Log mode plots log10(1 - F) from 1e-16 (bottom) to 1 (top).
  const yOfLog = (v) => pad.t + h - ((v + 16) / 16) * h;
  const yOf = (f) => (log ? yOfLog(Math.log10(Math.max(1 - f, 1e-16))) : pad.t + (1 - f) * h);
  const xOf = (g) => pad.l + ((g - gmin) / (gmax - gmin)) * w;

  ctx.strokeStyle = "#000";
  ctx.strokeRect(pad.l, pad.t, w, h);
  ctx.fillStyle = "#000";
  ctx.font = "12px system-ui";
  for (let i = 0; i <= 4; i++) {
    const g = gmin + ((gmax - gmin) * i) / 4;
    ctx.fillText(g.toFixed(2), xOf(g) - 12, pad.t + h + 15);
  }
  ctx.fillText("g", pad.l + w / 2, pad.t + h + 30);
  const ticks = log ? [-16, -12, -8, -6, -4, -2, 0] : [0, 0.25, 0.5, 0.75, 1];
  for (const t of ticks) {
    const y = log ? yOfLog(t) : yOf(t);
    ctx.fillText(log ? `1e${t}` : t.toFixed(2), 5, y + 4);
  }

  const legend = [];
  for (const [family, color, dash] of FAMILIES) {
    let values;
    try {
      values = fidelityCurve(family, theta, ideal, gmin, gmax, SAMPLES);
    } catch (e) {
      $("c-err").textContent = e.message;
      return;
    }
    ctx.beginPath();
    ctx.setLineDash(dash);
    ctx.strokeStyle = color;
    values.forEach((f, i) => {
      const g = gmin + ((gmax - gmin) * i) / (SAMPLES - 1);
      const y = yOf(f);
      i === 0 ? ctx.moveTo(xOf(g), y) : ctx.lineTo(xOf(g), y);
    });
    ctx.stroke();
    legend.push(`<span style="color:${color}">— ${family}</span>`);
  }
  ctx.setLineDash([]);
  $("c-legend").innerHTML = legend.join("");
}

function showThresholds() {
  $("t-err").textContent = "";
  let rows;
  try {
    rows = JSON.parse(thresholdTable(Number($("t-theta").value), Number($("t-tol").value)));
  } catch (e) {
    $("t-err").textContent = e.message;
    return;
  }
  const fmt = (v) => (typeof v === "number" ? v.toFixed(4) : v);
  $("t-table").innerHTML =
    "<tr><th>family</th><th>ε (rate error)</th><th>δ (weak coupling)</th></tr>" +
    rows.map((r) => `<tr><td>${r.family}</td><td>${fmt(r.epsilon)}</td><td>${fmt(r.delta)}</td></tr>`).join("");
}

function drawSchedule() {
  $("s-err").textContent = "";
  let view;
  try {
    view = JSON.parse(compileSchedule($("s-family").value, Number($("s-theta").value), Number($("s-spin").value)));
  } catch (e) {
    $("s-err").textContent = e.message;
    return;
  }
  const { schedule, max_deviation } = view;
  const canvas = $("s-plot");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pulseWidth = 34;
  const pulses = schedule.items.filter((it) => it.type === "pulse").length;
  const unit = (canvas.width - 20 - pulses * (pulseWidth + 4)) / Math.max(schedule.total_t_units, 1);
  const rowY = (spin) => (spin === 0 ? 40 : 100);
  ctx.font = "11px system-ui";
  ctx.strokeStyle = "#000";
  for (const spin of [0, 1]) {
    ctx.beginPath();
    ctx.moveTo(10, rowY(spin));
    ctx.lineTo(canvas.width - 10, rowY(spin));
    ctx.stroke();
  }
  let x = 10;
  for (const it of schedule.items) {
    if (it.type === "delay") {
      const len = it.t_units * unit;
      ctx.fillStyle = "#555";
      ctx.fillText(`${+it.t_units.toFixed(3)}t`, x + len / 2 - 8, 72);
      x += len;
    } else {
      const y = rowY(it.spin);
      ctx.fillStyle = it.axis === "+y" ? "#fdd" : "#ddf";
      ctx.fillRect(x + 2, y - 14, pulseWidth, 28);
      ctx.strokeRect(x + 2, y - 14, pulseWidth, 28);
      ctx.fillStyle = "#000";
      ctx.fillText(it.axis, x + 10, y - 2);
      ctx.fillText(`${it.angle_deg.toFixed(1)}°`, x + 4, y + 10);
      x += pulseWidth + 4;
    }
  }
  $("s-info").textContent =
    `${schedule.family}: total ${+schedule.total_t_units.toFixed(4)} t units (t = 1/4J), ` +
    `max |F_propagator − F_quaternion| = ${max_deviation.toExponential(2)}`;
}

await init();
for (const id of ["c-theta", "c-ideal", "c-gmin", "c-gmax", "c-log"]) $(id).addEventListener("change", drawCurves);
for (const id of ["t-theta", "t-tol"]) $(id).addEventListener("change", showThresholds);
for (const id of ["s-family", "s-theta", "s-spin"]) $(id).addEventListener("change", drawSchedule);
drawCurves();
showThresholds();
drawSchedule();
