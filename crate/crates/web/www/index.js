import init, { reflection_curve, potential_profile, lz_trajectory } from "./pkg/semiref_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

// Minimal line plot. series: [{ name, x, y }], nulls are skipped.
function plot(canvas, series, { xlabel = "", ylabel = "", vlines = [] } = {}) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const ctx = canvas.getContext("2d");
  ctx.scale(dpr, dpr);
  ctx.clearRect(0, 0, w, h);

  const pts = series.flatMap(s => s.x.map((x, i) => [x, s.y[i]])).filter(([, y]) => y !== null && isFinite(y));
  if (!pts.length) return;
  let [x0, x1] = [Math.min(...pts.map(p => p[0])), Math.max(...pts.map(p => p[0]))];
  let [y0, y1] = [Math.min(...pts.map(p => p[1])), Math.max(...pts.map(p => p[1]))];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const pad = { l: 54, r: 10, t: 10, b: 34 };
  const sx = x => pad.l + (x - x0) / (x1 - x0) * (w - pad.l - pad.r);
  const sy = y => h - pad.b - (y - y0) / (y1 - y0) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  for (let k = 0; k <= 4; k++) {
    const xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    ctx.fillText(xv.toPrecision(3), sx(xv) - 12, h - pad.b + 14);
    ctx.fillText(yv.toPrecision(3), 4, sy(yv) + 4);
  }
  ctx.fillText(xlabel, w / 2, h - 4);
  ctx.save();
  ctx.translate(12, h / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();

  ctx.setLineDash([4, 4]);
  for (const v of vlines) {
    if (v < x0 || v > x1) continue;
    ctx.beginPath();
    ctx.moveTo(sx(v), pad.t);
    ctx.lineTo(sx(v), h - pad.b);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.lineWidth = 1.6;
    ctx.beginPath();
    let pen = false;
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y === null || !isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
      pen = true;
    });
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.name, w - pad.r - 90, pad.t + 14 + 14 * k);
  });
}

const num = (form, name) => parseFloat(form.elements[name].value);

function guard(note, fn) {
  note.classList.remove("err");
  try {
    fn();
  } catch (e) {
    note.textContent = String(e);
    note.classList.add("err");
  }
}

function curve() {
  const f = document.getElementById("curve-form");
  const note = document.getElementById("curve-note");
  guard(note, () => {
    const d = JSON.parse(reflection_curve(f.elements.model.value, num(f, "alpha"), num(f, "v0"), num(f, "a"),
      num(f, "hbar"), 1, num(f, "emin"), num(f, "emax"), 60));
    plot(document.getElementById("curve"), [
      { name: "momentum", x: d.energy, y: d.momentum },
      { name: "contour", x: d.energy, y: d.contour },
      { name: "closed form", x: d.energy, y: d.closed },
      { name: d.reference_name, x: d.energy, y: d.reference },
    ], { xlabel: "E", ylabel: "ln |R|^2" });
    note.textContent = `${d.reference_name} is the exact reference; the other three are the semiclassical routes.`;
  });
}

function profile() {
  const f = document.getElementById("profile-form");
  const note = document.getElementById("profile-note");
  guard(note, () => {
    const d = JSON.parse(potential_profile(f.elements.model.value, num(f, "alpha"), num(f, "v0"), num(f, "a"),
      num(f, "energy"), 1, 1));
    plot(document.getElementById("pot"), [
      { name: "V(x)", x: d.x, y: d.v },
      { name: "V(iy)", x: d.y, y: d.v_imag },
    ], { xlabel: "x, y", ylabel: "V", vlines: [d.y0] });
    plot(document.getElementById("imv"), [
      { name: "Im V^-1", x: d.p, y: d.im_v_inverse },
    ], { xlabel: "p", ylabel: "Im V^-1(E - p^2/2m)", vlines: [-d.p0, d.p0] });
    const pole = d.pole === null ? "none" : d.pole.toPrecision(5);
    note.textContent = `turning point y0 = ${d.y0.toPrecision(6)}, pole at y = ${pole}, p0 = ${d.p0.toPrecision(5)}`;
  });
}

function lz() {
  const f = document.getElementById("lz-form");
  const note = document.getElementById("lz-note");
  guard(note, () => {
    const d = JSON.parse(lz_trajectory(f.elements.profile.value, num(f, "scale"), num(f, "esat"), num(f, "eps"),
      num(f, "hbar")));
    plot(document.getElementById("lz"), [
      { name: "upper", x: d.t, y: d.upper },
      { name: "lower", x: d.t, y: d.lower },
    ], { xlabel: "t", ylabel: "adiabatic population" });
    const fmt = v => (v === null ? "n/a" : v.toFixed(5));
    note.textContent = `ln P: tdse ${fmt(d.tdse_log)}, adiabatic ${fmt(d.adiabatic_log)}, closed ${fmt(d.closed_log)}`;
  });
}

await init();
for (const [id, run] of [["curve-form", curve], ["profile-form", profile], ["lz-form", lz]]) {
  document.getElementById(id).addEventListener("submit", e => { e.preventDefault(); run(); });
}
curve();
profile();
lz();
