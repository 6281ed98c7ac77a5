import init, { simulate, covarianceCurve, cfCheck } from "./pkg/gneiting_web_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const model = () => [$("family").value, num("param"), num("r")];

function fail(el, e) {
  el.className = "err";
  el.textContent = String(e.message ?? e);
}

// diverging blue/white/red over [-4, 4]
function color(v) {
  const x = Math.max(-1, Math.min(1, v / 4));
  const c = Math.round(255 * (1 - Math.abs(x)));
  return x < 0 ? [c, c, 255] : [255, c, c];
}

function runSimulation() {
  const nx = 150, ny = 100, nt = 6;
  const msg = $("simmsg");
  msg.className = "";
  const t0 = performance.now();
  let values;
  try {
    values = simulate(...model(), $("method").value === "substitution",
      num("p"), BigInt(num("seed")), nx, ny, nt, num("dt"));
  } catch (e) {
    return fail(msg, e);
  }
  const frames = $("frames");
  frames.replaceChildren();
  for (let m = 0; m < nt; m++) {
    const cv = document.createElement("canvas");
    cv.width = nx; cv.height = ny;
    cv.style.width = `${2 * nx}px`;
    const ctx = cv.getContext("2d");
    const img = ctx.createImageData(nx, ny);
    for (let i = 0; i < nx * ny; i++) {
      const [r, g, b] = color(values[m * nx * ny + i]);
      img.data.set([r, g, b, 255], 4 * i);
    }
    ctx.putImageData(img, 0, 0);
    cv.title = `t = ${(m * num("dt")).toFixed(2)}`;
    frames.appendChild(cv);
  }
  msg.textContent = `${values.length} values in ${(performance.now() - t0).toFixed(0)} ms`;
}

function plotCovariance() {
  const msg = $("covmsg");
  msg.className = "";
  const step = 0.01;
  let out;
  try {
    out = covarianceCurve(...model(), num("hx"), num("hy"), num("umax"), step);
  } catch (e) {
    return fail(msg, e);
  }
  const n = out.length - 2;
  const curve = out.slice(0, n);
  const cv = $("covplot"), ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const hi = Math.max(...curve) * 1.05 || 1;
  ctx.beginPath();
  curve.forEach((c, i) => {
    const x = 10 + (i / (n - 1 || 1)) * (cv.width - 20);
    const y = cv.height - 10 - (c / hi) * (cv.height - 20);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
  msg.textContent = out[n] === 1
    ? `hole effect: maximum at u = ${out[n + 1].toFixed(2)}, C(h,0) = ${curve[0].toPrecision(5)}`
    : `no hole effect: C(h,u) is maximal at u = 0 (${curve[0].toPrecision(5)})`;
}

function checkCf() {
  const el = $("cfout");
  el.className = "";
  let out;
  try {
    out = cfCheck($("family").value, num("param"), num("lambda"), num("draws"), 7n);
  } catch (e) {
    return fail(el, e);
  }
  const tol = out[out.length - 1];
  const lines = ["     u   empirical   exp(-λγ(u))   |diff|"];
  for (let i = 0; i + 3 <= out.length - 1; i += 3) {
    const [u, e, a] = out.slice(i, i + 3);
    lines.push(`${u.toFixed(2).padStart(6)}  ${e.toFixed(5).padStart(10)}  ${a.toFixed(5).padStart(12)}  ${Math.abs(e - a).toFixed(5)}`);
  }
  lines.push(`tolerance 4/√N = ${tol.toFixed(5)}`);
  el.textContent = lines.join("\n");
}

await init();
$("run").onclick = runSimulation;
$("cov").onclick = plotCovariance;
$("cf").onclick = checkCf;
plotCovariance();
