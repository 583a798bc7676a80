import { describe, expect, it } from "vitest";

import { encodeNote, parseServerMessage, StateMessage } from "./protocol.js";

const validState = {
  type: "state",
  t_ms: 120,
  s: 0.5,
  phi_plus_weight: 0.5,
  psi_plus_weight: 0.5,
  shots: [
    [0, 0],
    [1, 0],
    [1, 1],
  ],
  cc: { A: 64, B: 63 },
  target_cc: { A: 90, B: 37 },
  avg: { A: 60, B: 66 },
};

describe("encodeNote", () => {
  it("encodes a press as note_on with velocity 100", () => {
    expect(JSON.parse(encodeNote("A", 60, true))).toEqual({
      type: "note_on",
      player: "A",
      note: 60,
      velocity: 100,
    });
  });

  it("encodes a release as note_off with velocity 0", () => {
    expect(JSON.parse(encodeNote("B", 72, false))).toEqual({
      type: "note_off",
      player: "B",
      note: 72,
      velocity: 0,
    });
  });
});

describe("parseServerMessage", () => {
  it("accepts a well-formed state broadcast", () => {
    const parsed = parseServerMessage(JSON.stringify(validState)) as StateMessage;
    expect(parsed).not.toBeNull();
    expect(parsed.type).toBe("state");
    expect(parsed.s).toBe(0.5);
    expect(parsed.cc.A).toBe(64);
    expect(parsed.avg.B).toBe(66);
  });

  it("accepts null averages", () => {
    const message = { ...validState, avg: { A: null, B: null } };
    const parsed = parseServerMessage(JSON.stringify(message)) as StateMessage;
    expect(parsed.avg).toEqual({ A: null, B: null });
  });

  it("accepts error messages", () => {
    expect(parseServerMessage('{"type":"error","message":"nope"}')).toEqual({
      type: "error",
      message: "nope",
    });
  });

  it.each([
    ["not json", "{oops"],
    ["non-object", '"state"'],
    ["unknown type", JSON.stringify({ ...validState, type: "telemetry" })],
    ["s out of range", JSON.stringify({ ...validState, s: 1.5 })],
    ["missing cc side", JSON.stringify({ ...validState, cc: { A: 64 } })],
    ["cc out of range", JSON.stringify({ ...validState, cc: { A: 400, B: 0 } })],
    ["non-bit shots", JSON.stringify({ ...validState, shots: [[0, 2]] })],
    ["string average", JSON.stringify({ ...validState, avg: { A: "60", B: null } })],
    ["error without message", '{"type":"error"}'],
  ])("rejects %s", (_name, raw) => {
    expect(parseServerMessage(raw)).toBeNull();
  });
});
