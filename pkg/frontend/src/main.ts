import { ArenaView } from "./arena";
import { TempChart } from "./chart";
import { ProgramEditor } from "./editor";
import { ConsoleClient, defaultServerUrl } from "./net";
import {
  buildLoadProgram,
  buildSetFieldSign,
  type ServerMessage,
  type Target,
} from "./protocol";
import {
  applySnapshot,
  gradientAvailable,
  initialView,
  targetedRobotIds,
  typeCodes,
} from "./state";
import { TEMPLATES, templateByName } from "./templates";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const view = initialView();
const arena = new ArenaView(el<HTMLCanvasElement>("arena"));
const chart = new TempChart(el<HTMLCanvasElement>("chart"));
const editor = new ProgramEditor(
  el<HTMLTextAreaElement>("source"),
  el("highlight"),
  el("asm-messages"),
);

const banner = el("banner");
const status = el("status");
const sendStatus = el("send-status");
const pauseButton = el<HTMLButtonElement>("pause");
const gradientButton = el<HTMLButtonElement>("gradient");
const fieldInfo = el("field-info");
const speedInput = el<HTMLInputElement>("speed");
const speedLabel = el("speed-label");
const targetSelect = el<HTMLSelectElement>("target");
const templateSelect = el<HTMLSelectElement>("template");
const badges = el("robot-badges");

for (const t of TEMPLATES) {
  const option = document.createElement("option");
  option.value = t.name;
  option.textContent = t.label;
  templateSelect.appendChild(option);
}
templateSelect.addEventListener("change", () => {
  const t = templateByName(templateSelect.value);
  if (t) editor.source = t.source;
});
editor.source = TEMPLATES[0].source;

function currentTarget(): Target {
  return targetSelect.value === "global" ? "global" : Number(targetSelect.value);
}

function refreshTargetOptions(): void {
  const codes = typeCodes(view);
  const want = ["global", ...codes.map(String)];
  const have = [...targetSelect.options].map((o) => o.value);
  if (want.join() === have.join()) return;
  const selected = targetSelect.value || "global";
  targetSelect.innerHTML = "";
  for (const value of want) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value === "global" ? "all robots (global)" : `type ${value}`;
    targetSelect.appendChild(option);
  }
  targetSelect.value = want.includes(selected) ? selected : "global";
}

function renderBadges(): void {
  const targeted = targetedRobotIds(view);
  badges.innerHTML = "";
  for (const robot of view.snapshot?.robots ?? []) {
    const div = document.createElement("div");
    div.className = targeted.has(robot.id) ? "badge targeted" : "badge";
    const temp =
      robot.temp_code === null ? "—" : `${(10 + 0.2 * robot.temp_code).toFixed(1)} °C`;
    div.textContent =
      `#${robot.id} type ${robot.type_code} · ${robot.mode} · ` +
      `cfg ${robot.enable_mask.toString(16)}/${robot.polarity_mask.toString(16)} · ${temp}`;
    badges.appendChild(div);
  }
}

function render(): void {
  const snap = view.snapshot;
  if (!snap) return;
  refreshTargetOptions();
  arena.render(snap, targetedRobotIds(view));
  chart.render(view.tempHistory, snap.t_s);
  renderBadges();
  status.textContent =
    `t = ${snap.t_s.toFixed(1)} s · ${snap.paused ? "paused" : "running"} · ` +
    `×${snap.multiplier} · ${snap.robots.length} robot(s)`;
  pauseButton.textContent = snap.paused ? "resume" : "pause";
  gradientButton.disabled = !gradientAvailable(view);
  fieldInfo.textContent =
    snap.field.kind === "linear_gradient"
      ? `gradient sign ${snap.field.sign ?? 1 > 0 ? "+" : ""}${snap.field.sign ?? 1}`
      : snap.field.kind;
}

const client = new ConsoleClient(defaultServerUrl(), {
  onMessage(msg: ServerMessage): void {
    switch (msg.type) {
      case "snapshot":
        applySnapshot(view, msg);
        render();
        break;
      case "ack":
        if (msg.cmd === "load_program") {
          editor.clearErrors();
          sendStatus.textContent = `sent (${msg.words} words)`;
        }
        break;
      case "asm_error":
        editor.setErrors(msg.errors);
        sendStatus.textContent = "assembly failed";
        break;
      case "error":
        sendStatus.textContent = msg.message;
        break;
    }
  },
  onConnection(up: boolean): void {
    view.connection = up ? "connected" : "lost";
    banner.classList.toggle("hidden", up);
  },
  onProtocolError(detail: string): void {
    console.warn(detail);
  },
});
client.connect();

el<HTMLButtonElement>("send").addEventListener("click", () => {
  sendStatus.textContent = "";
  client.send(
    buildLoadProgram(
      editor.source,
      currentTarget(),
      el<HTMLInputElement>("clock-lock").checked,
    ),
  );
});

pauseButton.addEventListener("click", () => {
  client.send({ type: view.snapshot?.paused ? "resume" : "pause" });
});

gradientButton.addEventListener("click", () => {
  const sign = view.snapshot?.field.sign ?? 1;
  client.send(buildSetFieldSign(sign > 0 ? -1 : 1));
});

speedInput.addEventListener("change", () => {
  const multiplier = Math.round(10 ** Number(speedInput.value));
  speedLabel.textContent = String(multiplier);
  client.send({ type: "set_speed", multiplier });
});

targetSelect.addEventListener("change", renderBadges);

el<HTMLButtonElement>("set-light").addEventListener("click", () => {
  client.send({
    type: "set_intensity",
    power_wm2: Number(el<HTMLInputElement>("power").value),
    comms_wm2: Number(el<HTMLInputElement>("comms").value),
  });
});
