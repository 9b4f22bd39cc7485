import init, { evaluate, r_matrix, image_order } from "./pkg/gyb_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseInt($(id).value, 10);

function draw(canvas, matrix) {
  const { dim, abs, arg } = matrix;
  const ctx = canvas.getContext("2d");
  const cell = canvas.width / dim;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let r = 0; r < dim; r++) {
    for (let c = 0; c < dim; c++) {
      const k = r * dim + c;
      const hue = ((arg[k] / (2 * Math.PI)) * 360 + 360) % 360;
      ctx.fillStyle = `hsl(${hue}, 80%, ${100 - 50 * Math.min(abs[k], 1)}%)`;
      ctx.fillRect(c * cell, r * cell, cell, cell);
    }
  }
}

function guard(out, f) {
  out.classList.remove("err");
  try {
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

function showR() {
  guard($("r-out"), () => {
    const v = JSON.parse(r_matrix(num("r-m")));
    draw($("r-canvas"), v.matrix);
    $("r-out").textContent =
      `gYB residual          ${v.gyb_residual.toExponential(2)}\n` +
      `gate product residual ${v.decomposition_residual.toExponential(2)}\n` +
      `order of R            ${v.order}`;
  });
}

function showWord() {
  guard($("e-out"), () => {
    const v = JSON.parse(evaluate(num("e-n"), num("e-m"), $("e-word").value));
    draw($("e-canvas"), v.matrix);
    $("e-out").textContent =
      `word        "${v.word}"\n` +
      `normal form ${v.normal_form_text}\n` +
      `order       ${v.order ?? "> 2^20"}\n` +
      `|matrix - normal form matrix| = ${v.residual.toExponential(2)}`;
  });
}

function showImage() {
  $("i-out").textContent = "enumerating...";
  // let the status text paint before the blocking call
  setTimeout(() => guard($("i-out"), () => {
    const v = JSON.parse(image_order(num("i-n"), num("i-m"), $("i-backend").value, 2_000_000));
    $("i-out").textContent =
      `found ${v.order_found}, predicted ${v.order_predicted}: ${v.pass ? "match" : "MISMATCH"}\n` +
      `BFS levels ${v.level_sizes.length}, widest level ${Math.max(...v.level_sizes)}`;
  }), 0);
}

await init();
$("r-go").onclick = showR;
$("e-go").onclick = showWord;
$("i-go").onclick = showImage;
showR();
showWord();
