// Two simple WebAudio voices, one per player, shaped by the entangled CC
// stream: player A's CC crossfades its oscillator waveform (triangle vs
// sawtooth), player B's CC sets the level of a second oscillator one octave
// up. Held notes come from the local keyboards; CC values from the server.

import { Player } from "./protocol.js";

const GLIDE_S = 0.01; // matches the server's 10ms ramp tick
const VOICE_GAIN = 0.18;

interface VoiceA {
  primary: OscillatorNode;
  secondary: OscillatorNode;
  primaryGain: GainNode;
  secondaryGain: GainNode;
  envelope: GainNode;
}

interface VoiceB {
  main: OscillatorNode;
  overtone: OscillatorNode;
  overtoneGain: GainNode;
  envelope: GainNode;
}

function midiToHz(note: number): number {
  return 440 * Math.pow(2, (note - 69) / 12);
}

export class AudioEngine {
  private context: AudioContext | null = null;
  private master: GainNode | null = null;
  private voicesA = new Map<number, VoiceA>();
  private voicesB = new Map<number, VoiceB>();
  private cc: Record<Player, number> = { A: 0, B: 0 };

  get enabled(): boolean {
    return this.context !== null;
  }

  // Must be called from a user gesture; browsers refuse autoplaying audio.
  enable(): boolean {
    if (this.context) return true;
    try {
      this.context = new AudioContext();
      this.master = this.context.createGain();
      this.master.gain.value = 0.5;
      this.master.connect(this.context.destination);
      return true;
    } catch {
      this.context = null;
      this.master = null;
      return false;
    }
  }

  setCc(player: Player, value: number): void {
    this.cc[player] = value;
    if (!this.context) return;
    const now = this.context.currentTime;
    const amount = value / 127;
    if (player === "A") {
      for (const voice of this.voicesA.values()) {
        voice.primaryGain.gain.setTargetAtTime(1 - amount, now, GLIDE_S);
        voice.secondaryGain.gain.setTargetAtTime(amount, now, GLIDE_S);
      }
    } else {
      for (const voice of this.voicesB.values()) {
        voice.overtoneGain.gain.setTargetAtTime(amount, now, GLIDE_S);
      }
    }
  }

  noteOn(player: Player, note: number): void {
    if (!this.context || !this.master) return;
    this.noteOff(player, note);
    const ctx = this.context;
    const now = ctx.currentTime;
    const envelope = ctx.createGain();
    envelope.gain.setValueAtTime(0, now);
    envelope.gain.linearRampToValueAtTime(VOICE_GAIN, now + 0.01);
    envelope.connect(this.master);

    if (player === "A") {
      const amount = this.cc.A / 127;
      const primary = ctx.createOscillator();
      primary.type = "triangle";
      const secondary = ctx.createOscillator();
      secondary.type = "sawtooth";
      primary.frequency.value = midiToHz(note);
      secondary.frequency.value = midiToHz(note);
      const primaryGain = ctx.createGain();
      primaryGain.gain.value = 1 - amount;
      const secondaryGain = ctx.createGain();
      secondaryGain.gain.value = amount;
      primary.connect(primaryGain).connect(envelope);
      secondary.connect(secondaryGain).connect(envelope);
      primary.start();
      secondary.start();
      this.voicesA.set(note, { primary, secondary, primaryGain, secondaryGain, envelope });
    } else {
      const main = ctx.createOscillator();
      main.type = "square";
      main.frequency.value = midiToHz(note);
      const overtone = ctx.createOscillator();
      overtone.type = "sine";
      overtone.frequency.value = midiToHz(note + 12);
      const overtoneGain = ctx.createGain();
      overtoneGain.gain.value = this.cc.B / 127;
      main.connect(envelope);
      overtone.connect(overtoneGain).connect(envelope);
      main.start();
      overtone.start();
      this.voicesB.set(note, { main, overtone, overtoneGain, envelope });
    }
  }

  noteOff(player: Player, note: number): void {
    if (!this.context) return;
    const now = this.context.currentTime;
    if (player === "A") {
      const voice = this.voicesA.get(note);
      if (!voice) return;
      this.voicesA.delete(note);
      voice.envelope.gain.setTargetAtTime(0, now, 0.02);
      voice.primary.stop(now + 0.2);
      voice.secondary.stop(now + 0.2);
    } else {
      const voice = this.voicesB.get(note);
      if (!voice) return;
      this.voicesB.delete(note);
      voice.envelope.gain.setTargetAtTime(0, now, 0.02);
      voice.main.stop(now + 0.2);
      voice.overtone.stop(now + 0.2);
    }
  }

  allOff(): void {
    for (const note of [...this.voicesA.keys()]) this.noteOff("A", note);
    for (const note of [...this.voicesB.keys()]) this.noteOff("B", note);
  }
}
