import init, { denoiseSynthetic, tsvtSpectrum, phaseCell } from "./pkg/trpca_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const SIZE = 64;

function drawRgba(bytes, size, caption) {
  const fig = document.createElement("figure");
  const canvas = document.createElement("canvas");
  canvas.width = size;
  canvas.height = size;
  canvas.style.width = canvas.style.height = `${3 * size}px`;
  canvas.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(bytes), size, size), 0, 0);
  const cap = document.createElement("figcaption");
  cap.textContent = caption;
  fig.append(canvas, cap);
  return fig;
}

function runDenoise() {
  const fraction = Number($("fraction").value);
  const seed = Number($("denoise-seed").value) >>> 0;
  const t0 = performance.now();
  const d = denoiseSynthetic(SIZE, fraction, seed);
  const ms = performance.now() - t0;
  const db = (v) => (Number.isFinite(v) ? v.toFixed(2) : "∞");
  $("images").replaceChildren(
    drawRgba(d.clean(), SIZE, "clean"),
    drawRgba(d.corrupted(), SIZE, `corrupted ${db(d.psnrCorrupted)} dB`),
    drawRgba(d.recovered(), SIZE, `TRPCA ${db(d.psnrTrpca)} dB`),
    drawRgba(d.sparse(), SIZE, "|E|"),
    drawRgba(d.baseline(), SIZE, `per-channel RPCA ${db(d.psnrBaseline)} dB`),
  );
  $("denoise-report").textContent = `${d.iterations} iterations, ${ms.toFixed(0)} ms`;
  d.free();
}

function runSpectrum() {
  const rank = Number($("rank").value);
  const noise = Number($("noise").value);
  const tau = Number($("tau").value);
  const s = tsvtSpectrum(24, 6, rank, noise, tau, 7);
  const before = s.before();
  const after = s.after();
  const slices = s.slices;
  const per = s.perSlice;
  const canvas = $("spectrum");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const top = Math.max(...before, 1e-12);
  const groupW = canvas.width / slices;
  const barW = (groupW - 10) / per;
  const h = canvas.height - 20;
  for (let k = 0; k < slices; k++) {
    for (let i = 0; i < per; i++) {
      const x = k * groupW + i * barW;
      ctx.fillStyle = "#cbd5e1";
      ctx.fillRect(x, h - (h * before[k * per + i]) / top, barW - 1, (h * before[k * per + i]) / top);
      ctx.fillStyle = "#2563eb";
      ctx.fillRect(x, h - (h * after[k * per + i]) / top, barW - 1, (h * after[k * per + i]) / top);
    }
    ctx.fillStyle = "#555";
    ctx.fillText(`slice ${k}`, k * groupW, canvas.height - 4);
  }
  ctx.strokeStyle = "#dc2626";
  ctx.beginPath();
  ctx.moveTo(0, h - (h * tau) / top);
  ctx.lineTo(canvas.width, h - (h * tau) / top);
  ctx.stroke();
  $("spectrum-report").textContent =
    `tubal rank ${s.rankBefore} → ${s.rankAfter}, tensor nuclear norm ${s.tnnBefore.toFixed(3)} → ${s.tnnAfter.toFixed(3)}`;
  s.free();
}

async function runGrid() {
  const axis = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4];
  const table = $("grid");
  table.replaceChildren();
  const head = table.insertRow();
  head.insertCell().textContent = "ρ \\ r/n";
  for (const r of axis) head.insertCell().textContent = r;
  for (const rho of axis) {
    const row = table.insertRow();
    row.insertCell().textContent = rho;
    for (const r of axis) {
      const cell = row.insertCell();
      cell.textContent = "…";
      await new Promise((ok) => setTimeout(ok, 0));
      const t = phaseCell(24, 8, r, rho, 11);
      cell.textContent = t.success ? "✓" : "✗";
      cell.title = `rank ${t.rank}, rel. error ${t.relErrL.toExponential(2)}, ${t.iterations} iterations`;
      cell.style.background = t.success ? "#bbf7d0" : "#fecaca";
      t.free();
    }
  }
}

function bindOutput(input, output, digits) {
  const update = () => ($(output).textContent = Number($(input).value).toFixed(digits));
  $(input).addEventListener("input", update);
  update();
}

await init();
$("status").textContent = "";
bindOutput("fraction", "fraction-out", 2);
bindOutput("noise", "noise-out", 2);
bindOutput("tau", "tau-out", 2);
$("denoise-run").addEventListener("click", runDenoise);
$("fraction").addEventListener("change", runDenoise);
for (const id of ["rank", "noise", "tau"]) $(id).addEventListener("input", runSpectrum);
$("grid-run").addEventListener("click", runGrid);
runDenoise();
runSpectrum();
