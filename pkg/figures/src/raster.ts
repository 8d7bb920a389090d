/** Tiny software raster surface backing all figure kinds. */

import { Rgb, WHITE } from "./colormap";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly rgb: Uint8Array;

  constructor(width: number, height: number, fill: Rgb = WHITE) {
    this.width = width;
    this.height = height;
    this.rgb = new Uint8Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      this.rgb[3 * i] = fill[0];
      this.rgb[3 * i + 1] = fill[1];
      this.rgb[3 * i + 2] = fill[2];
    }
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return;
    }
    const i = 3 * (y * this.width + x);
    this.rgb[i] = color[0];
    this.rgb[i + 1] = color[1];
    this.rgb[i + 2] = color[2];
  }

  get(x: number, y: number): Rgb {
    const i = 3 * (y * this.width + x);
    return [this.rgb[i], this.rgb[i + 1], this.rgb[i + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, color: Rgb): void {
    for (let yy = y; yy < y + h; yy++) {
      for (let xx = x; xx < x + w; xx++) {
        this.set(xx, yy, color);
      }
    }
  }

  /** Bresenham segment, endpoints included. */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(x, y, color);
      if (x === xe && y === ye) {
        break;
      }
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  circle(cx: number, cy: number, r: number, color: Rgb): void {
    let x = r;
    let y = 0;
    let err = 1 - r;
    while (x >= y) {
      for (const [px, py] of [
        [x, y], [y, x], [-y, x], [-x, y],
        [-x, -y], [-y, -x], [y, -x], [x, -y],
      ]) {
        this.set(cx + px, cy + py, color);
      }
      y += 1;
      if (err < 0) {
        err += 2 * y + 1;
      } else {
        x -= 1;
        err += 2 * (y - x) + 1;
      }
    }
  }

  marker(cx: number, cy: number, color: Rgb, half = 1): void {
    this.fillRect(cx - half, cy - half, 2 * half + 1, 2 * half + 1, color);
  }
}
