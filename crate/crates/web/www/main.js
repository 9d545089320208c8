// Build the wasm package first:
//   cargo build -p spatch-web --release --target wasm32-unknown-unknown
//   wasm-bindgen --target web --out-dir crates/web/www/pkg \
//       target/wasm32-unknown-unknown/release/spatch_web.wasm
import init, { Demo } from "./pkg/spatch_web.js";

const $ = (id) => document.getElementById(id);
const view = $("view");
const ctx = view.getContext("2d");
const dctx = $("domain").getContext("2d");
const LIGHT = normalize([0.35, 0.45, 0.82]);

let demo;
let mesh = null;        // { pos, nrm, idx, center, scale }
let curves = null;
let ribbonPts = null;
let probe = null;       // [x, y, z, nx, ny, nz]
let yaw = 0.6, pitch = -0.9, zoom = 1;

function normalize(v) {
  const l = Math.hypot(v[0], v[1], v[2]) || 1;
  return [v[0] / l, v[1] / l, v[2] / l];
}

function status(text) { $("status").textContent = text; }

function guarded(f) {
  try { f(); } catch (e) { status("error: " + (e.message || e)); }
}

function rebuildMesh() {
  const t0 = performance.now();
  demo.remesh(+$("resolution").value);
  const pos = demo.positions();
  const lo = [Infinity, Infinity, Infinity], hi = [-Infinity, -Infinity, -Infinity];
  for (let i = 0; i < pos.length; i += 3) {
    for (let k = 0; k < 3; k++) {
      lo[k] = Math.min(lo[k], pos[i + k]);
      hi[k] = Math.max(hi[k], pos[i + k]);
    }
  }
  mesh = {
    pos, nrm: demo.normals(), idx: demo.indices(),
    center: lo.map((v, k) => (v + hi[k]) / 2),
    scale: Math.hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]) || 1,
  };
  curves = demo.boundaryCurves(40);
  ribbonPts = demo.ribbonPoints();
  const s = JSON.parse(demo.summary());
  status(`n=${s.n} d=${s.d} depth=${s.depth} points=${s.points} ${s.continuity}/${s.mask} · ` +
         `${mesh.idx.length / 3} triangles in ${(performance.now() - t0).toFixed(0)} ms`);
  $("report").textContent = "";
  $("verdict").textContent = "";
  draw();
  drawDomain();
}

function refill() {
  guarded(() => {
    demo.setFill($("continuity").value, $("mask").value);
    demo.setCoords($("coords").value);
    probe = null;
    rebuildMesh();
  });
}

function regenerate() {
  guarded(() => {
    demo.regenerate(+$("n").value, +$("d").value, +$("seed").value);
    probe = null;
    refill();
  });
}

function project(p) {
  const [cx, cy, cz] = mesh.center;
  let x = (p[0] - cx) / mesh.scale, y = (p[1] - cy) / mesh.scale, z = (p[2] - cz) / mesh.scale;
  const cyw = Math.cos(yaw), syw = Math.sin(yaw);
  [x, y] = [cyw * x - syw * y, syw * x + cyw * y];
  const cp = Math.cos(pitch), sp = Math.sin(pitch);
  [y, z] = [cp * y - sp * z, sp * y + cp * z];
  const s = Math.min(view.width, view.height) * 1.1 * zoom;
  return [view.width / 2 + s * x, view.height / 2 - s * y, z];
}

// Isophotes: bands of constant normal·light, fixed to the object so they
// deform with the surface; kinks in the bands expose normal discontinuities.
function shade(n) {
  const c = n[0] * LIGHT[0] + n[1] * LIGHT[1] + n[2] * LIGHT[2];
  const diffuse = 0.35 + 0.65 * Math.abs(c);
  const stripes = +$("stripes").value;
  const band = stripes > 0 && Math.floor((c + 1) * stripes) % 2 === 1 ? 0.55 : 1;
  const g = Math.round(255 * diffuse * band);
  return `rgb(${Math.round(g * 0.8)},${Math.round(g * 0.9)},${g})`;
}

function draw() {
  const dpr = window.devicePixelRatio || 1;
  const w = view.clientWidth * dpr, h = view.clientHeight * dpr;
  if (view.width !== w || view.height !== h) { view.width = w; view.height = h; }
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, w, h);
  if (!mesh) return;
  const { pos, nrm, idx } = mesh;
  const screen = [];
  for (let i = 0; i < pos.length; i += 3) screen.push(project([pos[i], pos[i + 1], pos[i + 2]]));
  const tris = [];
  for (let t = 0; t < idx.length; t += 3) {
    const [a, b, c] = [idx[t], idx[t + 1], idx[t + 2]];
    tris.push([a, b, c, screen[a][2] + screen[b][2] + screen[c][2]]);
  }
  tris.sort((u, v) => u[3] - v[3]);
  for (const [a, b, c] of tris) {
    const n = normalize([0, 1, 2].map((k) => nrm[3 * a + k] + nrm[3 * b + k] + nrm[3 * c + k]));
    ctx.fillStyle = ctx.strokeStyle = shade(n);
    ctx.beginPath();
    ctx.moveTo(screen[a][0], screen[a][1]);
    ctx.lineTo(screen[b][0], screen[b][1]);
    ctx.lineTo(screen[c][0], screen[c][1]);
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
  }
  if ($("showRibbon").checked) drawRibbon();
  if (probe) {
    const p = project(probe);
    const q = project([0, 1, 2].map((k) => probe[k] + 0.15 * mesh.scale * probe[3 + k]));
    ctx.strokeStyle = "#d00";
    ctx.lineWidth = 2;
    ctx.beginPath(); ctx.moveTo(p[0], p[1]); ctx.lineTo(q[0], q[1]); ctx.stroke();
    ctx.fillStyle = "#d00";
    ctx.beginPath(); ctx.arc(p[0], p[1], 4, 0, 2 * Math.PI); ctx.fill();
    ctx.lineWidth = 1;
  }
}

function drawRibbon() {
  const n = JSON.parse(demo.summary()).n;
  const per = curves.length / 3 / n;
  ctx.strokeStyle = "#222";
  ctx.lineWidth = 2;
  for (let s = 0; s < n; s++) {
    ctx.beginPath();
    for (let k = 0; k < per; k++) {
      const i = 3 * (s * per + k);
      const p = project([curves[i], curves[i + 1], curves[i + 2]]);
      k ? ctx.lineTo(p[0], p[1]) : ctx.moveTo(p[0], p[1]);
    }
    ctx.stroke();
  }
  ctx.lineWidth = 1;
  // inner rows: second half of each side's block
  const row = ribbonPts.length / 3 / n / 2;
  ctx.fillStyle = "#c60";
  for (let s = 0; s < n; s++) {
    for (let k = 0; k < row; k++) {
      const i = 3 * (s * 2 * row + row + k);
      const p = project([ribbonPts[i], ribbonPts[i + 1], ribbonPts[i + 2]]);
      ctx.fillRect(p[0] - 2, p[1] - 2, 4, 4);
    }
  }
}

const DOMAIN_SCALE = 90;
function drawDomain() {
  const c = $("domain");
  dctx.clearRect(0, 0, c.width, c.height);
  const v = demo.domainVertices();
  dctx.strokeStyle = "#333";
  dctx.beginPath();
  for (let k = 0; k < v.length; k += 2) {
    const x = c.width / 2 + DOMAIN_SCALE * v[k], y = c.height / 2 - DOMAIN_SCALE * v[k + 1];
    k ? dctx.lineTo(x, y) : dctx.moveTo(x, y);
  }
  dctx.closePath();
  dctx.stroke();
  if (probe && probe.uv) {
    dctx.fillStyle = "#d00";
    dctx.beginPath();
    dctx.arc(c.width / 2 + DOMAIN_SCALE * probe.uv[0], c.height / 2 - DOMAIN_SCALE * probe.uv[1], 3, 0, 2 * Math.PI);
    dctx.fill();
  }
}

$("domain").addEventListener("click", (e) => {
  const c = $("domain"), r = c.getBoundingClientRect();
  const x = (e.clientX - r.left - c.width / 2) / DOMAIN_SCALE;
  const y = -(e.clientY - r.top - c.height / 2) / DOMAIN_SCALE;
  try {
    probe = Array.from(demo.probe(x, y));
    probe.uv = [x, y];
    const f = (a) => a.map((t) => t.toFixed(6)).join(", ");
    $("probe").textContent = `uv     ${x.toFixed(4)}, ${y.toFixed(4)}\npoint  ${f(probe.slice(0, 3))}\nnormal ${f(probe.slice(3))}`;
  } catch (err) {
    probe = null;
    $("probe").textContent = err.message || String(err);
  }
  draw();
  drawDomain();
});

$("check").addEventListener("click", () => guarded(() => {
  const report = JSON.parse(demo.check());
  $("verdict").textContent = report.pass ? "PASS" : "FAIL";
  $("verdict").className = report.pass ? "pass" : "fail";
  const g1 = report.g1 ? `G1 max angle per offset: ${report.g1.max.map((a) => a.toExponential(2)).join(", ")} rad\n` : "";
  $("report").textContent = g1 + JSON.stringify(report, null, 1);
}));

let drag = null;
view.addEventListener("pointerdown", (e) => { drag = [e.clientX, e.clientY]; view.setPointerCapture(e.pointerId); });
view.addEventListener("pointerup", () => { drag = null; });
view.addEventListener("pointermove", (e) => {
  if (!drag) return;
  yaw += (e.clientX - drag[0]) * 0.01;
  pitch = Math.max(-Math.PI, Math.min(0, pitch + (e.clientY - drag[1]) * 0.01));
  drag = [e.clientX, e.clientY];
  draw();
});
view.addEventListener("wheel", (e) => { e.preventDefault(); zoom *= Math.exp(-e.deltaY * 0.001); draw(); }, { passive: false });
window.addEventListener("resize", draw);

$("generate").addEventListener("click", regenerate);
for (const id of ["continuity", "mask", "coords"]) $(id).addEventListener("change", refill);
$("resolution").addEventListener("change", () => guarded(rebuildMesh));
$("stripes").addEventListener("input", draw);
$("showRibbon").addEventListener("change", draw);

await init();
demo = new Demo(+$("n").value, +$("d").value, +$("seed").value);
refill();
