import { describe, expect, it } from "vitest";

import { decodePng, encodePng } from "../src/png";

describe("png codec", () => {
  it("round-trips pixel data", () => {
    const width = 13;
    const height = 7;
    const rgb = new Uint8Array(width * height * 3);
    for (let i = 0; i < rgb.length; i++) {
      rgb[i] = (i * 37 + 11) % 256;
    }
    const decoded = decodePng(encodePng(width, height, rgb));
    expect(decoded.width).toBe(width);
    expect(decoded.height).toBe(height);
    expect(Buffer.from(decoded.rgb).equals(Buffer.from(rgb))).toBe(true);
  });

  it("is deterministic", () => {
    const rgb = new Uint8Array(4 * 4 * 3).fill(200);
    const a = encodePng(4, 4, rgb);
    const b = encodePng(4, 4, rgb);
    expect(a.equals(b)).toBe(true);
  });

  it("rejects wrong buffer sizes and non-PNG input", () => {
    expect(() => encodePng(2, 2, new Uint8Array(5))).toThrow(/pixel buffer/);
    expect(() => decodePng(Buffer.from("not a png at all"))).toThrow(/not a PNG/);
  });
});
