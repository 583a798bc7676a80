// Console state and its reducer. Pure data in, new state out: the DOM layer
// renders whatever is here and adds nothing of its own.

import { Player, ServerMessage, StateMessage } from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface SimLogEntry {
  t_ms: number;
  s: number;
  shots: [number, number][];
  valueA: number;
  valueB: number;
}

export interface ConsoleState {
  connection: Connection;
  server: StateMessage | null;
  activeNotes: Record<Player, Set<number>>;
  simLog: SimLogEntry[];
  lastError: string | null;
}

export const SIM_LOG_LIMIT = 24;

export function initialState(): ConsoleState {
  return {
    connection: "connecting",
    server: null,
    activeNotes: { A: new Set(), B: new Set() },
    simLog: [],
    lastError: null,
  };
}

export function setConnection(state: ConsoleState, connection: Connection): ConsoleState {
  const next = { ...state, connection };
  if (connection !== "open") {
    // server-side note state is gone; do not pretend keys are still held
    next.activeNotes = { A: new Set(), B: new Set() };
  }
  return next;
}

export function noteInput(
  state: ConsoleState,
  player: Player,
  note: number,
  pressed: boolean,
): ConsoleState {
  const notes = new Set(state.activeNotes[player]);
  if (pressed) notes.add(note);
  else notes.delete(note);
  return { ...state, activeNotes: { ...state.activeNotes, [player]: notes } };
}

function isNewSimulation(previous: StateMessage | null, next: StateMessage): boolean {
  if (next.shots.length === 0) return false;
  if (previous === null) return true;
  return (
    previous.target_cc.A !== next.target_cc.A ||
    previous.target_cc.B !== next.target_cc.B ||
    previous.s !== next.s ||
    JSON.stringify(previous.shots) !== JSON.stringify(next.shots)
  );
}

export function applyServerMessage(state: ConsoleState, message: ServerMessage): ConsoleState {
  if (message.type === "error") {
    return { ...state, lastError: message.message };
  }
  let simLog = state.simLog;
  if (isNewSimulation(state.server, message)) {
    const entry: SimLogEntry = {
      t_ms: message.t_ms,
      s: message.s,
      shots: message.shots,
      valueA: message.target_cc.A,
      valueB: message.target_cc.B,
    };
    simLog = [entry, ...simLog].slice(0, SIM_LOG_LIMIT);
  }
  return { ...state, server: message, simLog };
}

// Display helpers: formatting belongs with the data, not in the DOM code.

export function formatAverage(avg: number | null): string {
  return avg === null ? "no notes yet" : avg.toFixed(2);
}

export function formatS(s: number): string {
  const twelfths = Math.round(s * 12);
  return `${s.toFixed(3)} (${twelfths}/12)`;
}

export function shotString(shots: [number, number][]): string {
  if (shots.length === 0) return "-";
  const top = shots.map((pair) => pair[0]).join("");
  const bottom = shots.map((pair) => pair[1]).join("");
  return `${top} / ${bottom}`;
}
