import { describe, expect, it } from "vitest";

import {
  TARGET_SAMPLE_RATE,
  captureToWav,
  downmixToMono,
  encodeWavPcm16,
  resampleLinear,
} from "../src/wav.js";

function ascii(view: DataView, offset: number, length: number): string {
  let out = "";
  for (let i = 0; i < length; i++) {
    out += String.fromCharCode(view.getUint8(offset + i));
  }
  return out;
}

describe("downmixToMono", () => {
  it("averages channels sample by sample", () => {
    const left = new Float32Array([1, 0, -1, 0.5]);
    const right = new Float32Array([0, 0, 1, 0.5]);
    const mono = downmixToMono([left, right]);
    expect(Array.from(mono)).toEqual([0.5, 0, 0, 0.5]);
  });

  it("passes a single channel through unchanged", () => {
    const only = new Float32Array([0.25, -0.25]);
    expect(downmixToMono([only])).toBe(only);
  });
});

describe("resampleLinear", () => {
  it("keeps the signal when rates match", () => {
    const samples = new Float32Array([0.1, 0.2, 0.3]);
    expect(resampleLinear(samples, 16000, 16000)).toBe(samples);
  });

  it("produces round(n * to / from) samples", () => {
    const samples = new Float32Array(48000);
    const out = resampleLinear(samples, 48000, 16000);
    expect(out.length).toBe(16000);
    expect(resampleLinear(new Float32Array(44100), 44100, 16000).length).toBe(16000);
  });

  it("interpolates between neighbours when upsampling", () => {
    // endpoint-aligned: first and last samples survive exactly
    const out = resampleLinear(new Float32Array([0, 1]), 1, 2);
    expect(out.length).toBe(4);
    expect(out[0]).toBeCloseTo(0, 5);
    expect(out[1]).toBeCloseTo(1 / 3, 5);
    expect(out[2]).toBeCloseTo(2 / 3, 5);
    expect(out[3]).toBeCloseTo(1, 5);
  });
});

describe("encodeWavPcm16", () => {
  it("writes a canonical little-endian PCM header", () => {
    const samples = new Float32Array([0, 0.5, -0.5, 1, -1]);
    const bytes = encodeWavPcm16(samples, 16000);
    const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);

    expect(ascii(view, 0, 4)).toBe("RIFF");
    expect(view.getUint32(4, true)).toBe(36 + samples.length * 2);
    expect(ascii(view, 8, 4)).toBe("WAVE");
    expect(ascii(view, 12, 4)).toBe("fmt ");
    expect(view.getUint32(16, true)).toBe(16);
    expect(view.getUint16(20, true)).toBe(1);
    expect(view.getUint16(22, true)).toBe(1);
    expect(view.getUint32(24, true)).toBe(16000);
    expect(view.getUint32(28, true)).toBe(16000 * 2);
    expect(view.getUint16(32, true)).toBe(2);
    expect(view.getUint16(34, true)).toBe(16);
    expect(ascii(view, 36, 4)).toBe("data");
    expect(view.getUint32(40, true)).toBe(samples.length * 2);
    expect(bytes.length).toBe(44 + samples.length * 2);
  });

  it("scales and clamps samples to signed 16-bit", () => {
    // symmetric scale: +1 and -1 map to +/-32767, out-of-range input clamps
    const bytes = encodeWavPcm16(new Float32Array([0, 1, -1, 2, -2]), 16000);
    const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
    expect(view.getInt16(44, true)).toBe(0);
    expect(view.getInt16(46, true)).toBe(32767);
    expect(view.getInt16(48, true)).toBe(-32767);
    expect(view.getInt16(50, true)).toBe(32767);
    expect(view.getInt16(52, true)).toBe(-32767);
  });
});

describe("captureToWav", () => {
  it("downmixes, resamples to 16 kHz, and encodes in one pass", () => {
    const seconds = 0.5;
    const captureRate = 48000;
    const n = captureRate * seconds;
    const left = new Float32Array(n).fill(0.5);
    const right = new Float32Array(n).fill(-0.5);
    const bytes = captureToWav([left, right], captureRate);

    const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
    expect(view.getUint32(24, true)).toBe(TARGET_SAMPLE_RATE);
    expect(view.getUint16(22, true)).toBe(1);
    expect(view.getUint32(40, true)).toBe(TARGET_SAMPLE_RATE * seconds * 2);
    // a perfectly opposed stereo pair cancels to silence
    expect(view.getInt16(44, true)).toBe(0);
  });
});
