// Wire protocol for the qduet websocket service. The console is a pure
// view/controller: it renders exactly what the server broadcasts and never
// recomputes s, weights or CC values locally.

export type Player = "A" | "B";

export interface NoteMessage {
  type: "note_on" | "note_off";
  player: Player;
  note: number;
  velocity: number;
}

export interface StateMessage {
  type: "state";
  t_ms: number;
  s: number;
  phi_plus_weight: number;
  psi_plus_weight: number;
  shots: [number, number][];
  cc: Record<Player, number>;
  target_cc: Record<Player, number>;
  avg: Record<Player, number | null>;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ErrorMessage;

export function encodeNote(player: Player, note: number, pressed: boolean): string {
  const message: NoteMessage = {
    type: pressed ? "note_on" : "note_off",
    player,
    note,
    velocity: pressed ? 100 : 0,
  };
  return JSON.stringify(message);
}

function isMidiValue(value: unknown): value is number {
  return typeof value === "number" && Number.isInteger(value) && value >= 0 && value <= 127;
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function isPlayerRecord(
  value: unknown,
  check: (v: unknown) => boolean,
): value is Record<Player, never> {
  if (typeof value !== "object" || value === null) return false;
  const record = value as Record<string, unknown>;
  return check(record["A"]) && check(record["B"]);
}

function isShotList(value: unknown): value is [number, number][] {
  return (
    Array.isArray(value) &&
    value.every(
      (pair) =>
        Array.isArray(pair) &&
        pair.length === 2 &&
        pair.every((bit) => bit === 0 || bit === 1),
    )
  );
}

// Returns null for anything that is not a well-formed server message; the
// caller logs and ignores those so a bad frame can never corrupt the view.
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;

  if (msg.type === "error") {
    return typeof msg.message === "string" ? { type: "error", message: msg.message } : null;
  }
  if (msg.type !== "state") return null;

  const ok =
    isFiniteNumber(msg.t_ms) &&
    isFiniteNumber(msg.s) &&
    msg.s >= 0 &&
    msg.s <= 1 &&
    isFiniteNumber(msg.phi_plus_weight) &&
    isFiniteNumber(msg.psi_plus_weight) &&
    isShotList(msg.shots) &&
    isPlayerRecord(msg.cc, isMidiValue) &&
    isPlayerRecord(msg.target_cc, isMidiValue) &&
    isPlayerRecord(msg.avg, (v) => v === null || isFiniteNumber(v));
  if (!ok) return null;

  return {
    type: "state",
    t_ms: msg.t_ms as number,
    s: msg.s as number,
    phi_plus_weight: msg.phi_plus_weight as number,
    psi_plus_weight: msg.psi_plus_weight as number,
    shots: msg.shots as [number, number][],
    cc: msg.cc as Record<Player, number>,
    target_cc: msg.target_cc as Record<Player, number>,
    avg: msg.avg as Record<Player, number | null>,
  };
}
