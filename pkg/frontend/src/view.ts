// DOM layer: builds the static page once, then repaints from ConsoleState.

import { ConsoleState, formatAverage, formatS, shotString } from "./model.js";
import { KeyInfo, keyboardLayout } from "./keymap.js";
import { Player } from "./protocol.js";

export interface NoteHandler {
  (player: Player, note: number, pressed: boolean): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function buildKeyboard(root: HTMLElement, player: Player, onNote: NoteHandler): Map<number, HTMLElement> {
  const keys = new Map<number, HTMLElement>();
  const board = el("div", "keyboard");
  board.dataset.player = player;
  keyboardLayout(player).forEach((key: KeyInfo) => {
    const node = el("div", key.black ? "key black" : "key white");
    node.dataset.note = String(key.note);
    if (!key.black) node.appendChild(el("span", "key-label", key.label));
    let held = false;
    const press = (event: Event) => {
      event.preventDefault();
      if (held) return;
      held = true;
      onNote(player, key.note, true);
    };
    const release = () => {
      if (!held) return;
      held = false;
      onNote(player, key.note, false);
    };
    node.addEventListener("pointerdown", press);
    node.addEventListener("pointerup", release);
    node.addEventListener("pointerleave", release);
    board.appendChild(node);
    keys.set(key.note, node);
  });
  root.appendChild(board);
  return keys;
}

export class ConsoleView {
  private status: HTMLElement;
  private needle: HTMLElement;
  private gaugeText: HTMLElement;
  private weights: HTMLElement;
  private shotStrip: HTMLElement;
  private bars: Record<Player, { fill: HTMLElement; marker: HTMLElement; text: HTMLElement }>;
  private averages: Record<Player, HTMLElement>;
  private log: HTMLElement;
  private errorLine: HTMLElement;
  private keyNodes: Record<Player, Map<number, HTMLElement>>;
  readonly audioButton: HTMLButtonElement;

  constructor(root: HTMLElement, onNote: NoteHandler) {
    this.status = el("div", "status", "connecting…");
    root.appendChild(this.status);

    const telemetry = el("div", "telemetry");

    const gauge = el("div", "gauge-block");
    const gaugeLabels = el("div", "gauge-labels");
    gaugeLabels.appendChild(el("span", "", "Φ⁺ correlated"));
    gaugeLabels.appendChild(el("span", "", "Ψ⁺ anti-correlated"));
    const track = el("div", "gauge-track");
    this.needle = el("div", "gauge-needle");
    track.appendChild(this.needle);
    this.gaugeText = el("div", "gauge-text", "s = –");
    this.weights = el("div", "weights", "");
    gauge.append(gaugeLabels, track, this.gaugeText, this.weights);
    telemetry.appendChild(gauge);

    const makeBar = (player: Player) => {
      const block = el("div", "cc-block");
      block.appendChild(el("div", "cc-title", `instrument ${player}`));
      const track = el("div", "cc-track");
      const fill = el("div", "cc-fill");
      const marker = el("div", "cc-marker");
      track.append(fill, marker);
      const text = el("div", "cc-text", "0 → 0");
      const avg = el("div", "avg-text", "avg: no notes yet");
      block.append(track, text, avg);
      telemetry.appendChild(block);
      return { fill, marker, text, avg };
    };
    const barA = makeBar("A");
    const barB = makeBar("B");
    this.bars = { A: barA, B: barB };
    this.averages = { A: barA.avg, B: barB.avg };

    const shots = el("div", "shots-block");
    shots.appendChild(el("div", "cc-title", "last shots (A / B bits)"));
    this.shotStrip = el("div", "shot-strip", "–");
    shots.appendChild(this.shotStrip);
    telemetry.appendChild(shots);
    root.appendChild(telemetry);

    this.audioButton = el("button", "audio-toggle") as HTMLButtonElement;
    this.audioButton.textContent = "enable audio";
    root.appendChild(this.audioButton);

    const boards = el("div", "boards");
    const sideA = el("div", "board-side");
    sideA.appendChild(el("div", "board-title", "player A (row QWERTY…)"));
    const sideB = el("div", "board-side");
    sideB.appendChild(el("div", "board-title", "player B (row ZXCV…)"));
    this.keyNodes = {
      A: buildKeyboard(sideA, "A", onNote),
      B: buildKeyboard(sideB, "B", onNote),
    };
    boards.append(sideA, sideB);
    root.appendChild(boards);

    this.errorLine = el("div", "error-line", "");
    root.appendChild(this.errorLine);
    this.log = el("div", "sim-log");
    root.appendChild(this.log);
  }

  render(state: ConsoleState): void {
    const open = state.connection === "open";
    this.status.textContent = open
      ? "connected"
      : state.connection === "connecting"
        ? "connecting…"
        : "disconnected – input disabled, retrying…";
    this.status.className = `status ${state.connection}`;

    const server = state.server;
    if (server) {
      this.needle.style.left = `${server.s * 100}%`;
      this.gaugeText.textContent = `s = ${formatS(server.s)}`;
      this.weights.textContent =
        `Φ⁺ ${server.phi_plus_weight.toFixed(3)}  ·  ` +
        `Ψ⁺ ${server.psi_plus_weight.toFixed(3)}`;
      this.shotStrip.textContent = shotString(server.shots);
      (["A", "B"] as Player[]).forEach((player) => {
        const bar = this.bars[player];
        bar.fill.style.width = `${(server.cc[player] / 127) * 100}%`;
        bar.marker.style.left = `${(server.target_cc[player] / 127) * 100}%`;
        bar.text.textContent = `${server.cc[player]} → ${server.target_cc[player]}`;
        this.averages[player].textContent = `avg: ${formatAverage(server.avg[player])}`;
      });
    }

    this.errorLine.textContent = state.lastError ? `server: ${state.lastError}` : "";

    (["A", "B"] as Player[]).forEach((player) => {
      this.keyNodes[player].forEach((node, note) => {
        node.classList.toggle("active", state.activeNotes[player].has(note));
      });
    });

    const lines = state.simLog.map(
      (entry) =>
        `${String(entry.t_ms).padStart(6)}ms  s=${entry.s.toFixed(3)}  ` +
        `${shotString(entry.shots)}  A→${entry.valueA} B→${entry.valueB}`,
    );
    this.log.textContent = lines.join("\n");
  }
}
