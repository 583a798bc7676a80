// Keyboard geometry: two 25-key (two octave) on-screen keyboards plus one
// computer-keyboard row per player, DAW style.

import { Player } from "./protocol.js";

export const OCTAVES = 2;
export const KEYS_PER_BOARD = OCTAVES * 12 + 1; // C to C inclusive
export const BASE_NOTE: Record<Player, number> = { A: 60, B: 60 }; // both start at C4

const BLACK_IN_OCTAVE = new Set([1, 3, 6, 8, 10]);
const NOTE_NAMES = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"];

export interface KeyInfo {
  note: number;
  black: boolean;
  label: string;
}

export function keyboardLayout(player: Player): KeyInfo[] {
  const base = BASE_NOTE[player];
  const keys: KeyInfo[] = [];
  for (let i = 0; i < KEYS_PER_BOARD; i++) {
    const note = base + i;
    const pitchClass = i % 12;
    keys.push({
      note,
      black: BLACK_IN_OCTAVE.has(pitchClass),
      label: `${NOTE_NAMES[pitchClass]}${Math.floor(note / 12) - 1}`,
    });
  }
  return keys;
}

// player A: QWERTY row with the digit row for sharps; player B: ZXCV row
// with the home row for sharps. One physical key = one semitone offset.
const ROW_A = ["q", "2", "w", "3", "e", "r", "5", "t", "6", "y", "7", "u", "i", "9", "o", "0", "p"];
const ROW_B = ["z", "s", "x", "d", "c", "v", "g", "b", "h", "n", "j", "m", ",", "l", ".", ";", "/"];

export function computerKeyBindings(): Map<string, { player: Player; note: number }> {
  const bindings = new Map<string, { player: Player; note: number }>();
  ROW_A.forEach((key, offset) => bindings.set(key, { player: "A", note: BASE_NOTE.A + offset }));
  ROW_B.forEach((key, offset) => bindings.set(key, { player: "B", note: BASE_NOTE.B + offset }));
  return bindings;
}
