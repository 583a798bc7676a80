// Wiring: websocket client, keyboard input, render loop. One user gesture
// maps to exactly one protocol message; all state shown comes from the
// server's broadcasts.

import { AudioEngine } from "./audio.js";
import { computerKeyBindings } from "./keymap.js";
import {
  applyServerMessage,
  ConsoleState,
  initialState,
  noteInput,
  setConnection,
} from "./model.js";
import { encodeNote, parseServerMessage, Player } from "./protocol.js";
import { ConsoleView } from "./view.js";

let state: ConsoleState = initialState();
let socket: WebSocket | null = null;
let reconnectDelayMs = 250;
let renderQueued = false;

const audio = new AudioEngine();
const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

function scheduleRender(): void {
  if (renderQueued) return;
  renderQueued = true;
  requestAnimationFrame(() => {
    renderQueued = false;
    view.render(state);
  });
}

function update(next: ConsoleState): void {
  state = next;
  scheduleRender();
}

function sendNote(player: Player, note: number, pressed: boolean): void {
  if (!socket || socket.readyState !== WebSocket.OPEN) {
    update(setConnection(state, socket ? "connecting" : "closed"));
    return;
  }
  socket.send(encodeNote(player, note, pressed));
  update(noteInput(state, player, note, pressed));
  if (pressed) audio.noteOn(player, note);
  else audio.noteOff(player, note);
}

const view = new ConsoleView(root, sendNote);

view.audioButton.addEventListener("click", () => {
  if (audio.enable()) {
    view.audioButton.textContent = "audio on";
    view.audioButton.disabled = true;
    if (state.server) {
      audio.setCc("A", state.server.cc.A);
      audio.setCc("B", state.server.cc.B);
    }
  } else {
    view.audioButton.textContent = "audio unavailable";
    view.audioButton.disabled = true;
  }
});

function connect(): void {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  socket = new WebSocket(`${scheme}://${location.host}/ws`);
  update(setConnection(state, "connecting"));

  socket.onopen = () => {
    reconnectDelayMs = 250;
    update(setConnection(state, "open"));
  };

  socket.onmessage = (event: MessageEvent) => {
    const message = typeof event.data === "string" ? event.data : "";
    const parsed = message ? parseOrLog(message) : null;
    if (!parsed) return;
    update(applyServerMessage(state, parsed));
    if (parsed.type === "state") {
      audio.setCc("A", parsed.cc.A);
      audio.setCc("B", parsed.cc.B);
    }
  };

  socket.onclose = () => {
    audio.allOff();
    update(setConnection(state, "closed"));
    setTimeout(connect, reconnectDelayMs);
    reconnectDelayMs = Math.min(reconnectDelayMs * 2, 5000);
  };
}

function parseOrLog(raw: string) {
  const parsed = parseServerMessage(raw);
  if (parsed === null) console.warn("malformed server message ignored:", raw);
  return parsed;
}

const bindings = computerKeyBindings();
const heldKeys = new Set<string>();

window.addEventListener("keydown", (event: KeyboardEvent) => {
  if (event.repeat || event.metaKey || event.ctrlKey || event.altKey) return;
  const binding = bindings.get(event.key.toLowerCase());
  if (!binding || heldKeys.has(event.key)) return;
  heldKeys.add(event.key);
  sendNote(binding.player, binding.note, true);
});

window.addEventListener("keyup", (event: KeyboardEvent) => {
  const binding = bindings.get(event.key.toLowerCase());
  if (!binding) return;
  heldKeys.delete(event.key);
  sendNote(binding.player, binding.note, false);
});

connect();
scheduleRender();
