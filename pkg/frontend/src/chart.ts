/** Figure model and its rasterization: axes with 1-2-5 ticks, polylines,
 *  markers for degenerate single-point series, and a legend box. */

import { BLACK, Color, GLYPH_H, GLYPH_W, Raster, SERIES_COLORS } from "./raster.js";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  dashed?: boolean;
}

export interface FigureModel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  showLegend: boolean;
}

export const WIDTH = 900;
export const HEIGHT = 600;
const MARGIN = { left: 80, right: 30, top: 40, bottom: 60 };

function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1.0;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (rawStep <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(1).replace("e", "E");
  }
  const s = Number(v.toPrecision(4));
  return String(s);
}

function dataRange(series: Series[], pick: (s: Series) => number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const v of pick(s)) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo)) throw new Error("no finite data to plot");
  if (lo === hi) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1.0;
    return [lo - pad, hi + pad];
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

export function renderFigure(model: FigureModel): Raster {
  const r = new Raster(WIDTH, HEIGHT);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const [xLo, xHi] = dataRange(model.series, (s) => s.x);
  const [yLo, yHi] = dataRange(model.series, (s) => s.y);
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  // frame
  r.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, BLACK);
  r.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);
  r.line(MARGIN.left + plotW, MARGIN.top, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);
  r.line(MARGIN.left, MARGIN.top, MARGIN.left + plotW, MARGIN.top, BLACK);

  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    r.line(x, MARGIN.top + plotH, x, MARGIN.top + plotH + 5, BLACK);
    const label = formatTick(t);
    r.text(x - r.textWidth(label) / 2, MARGIN.top + plotH + 10, label, BLACK);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = py(t);
    r.line(MARGIN.left - 5, y, MARGIN.left, y, BLACK);
    const label = formatTick(t);
    r.text(MARGIN.left - 8 - r.textWidth(label), y - GLYPH_H / 2, label, BLACK);
  }
  r.text(MARGIN.left + plotW / 2 - r.textWidth(model.xLabel) / 2,
         HEIGHT - GLYPH_H - 8, model.xLabel, BLACK);
  r.text(8, MARGIN.top - GLYPH_H - 8, model.yLabel, BLACK);
  r.text(MARGIN.left + plotW / 2 - r.textWidth(model.title) / 2, 10, model.title, BLACK);

  model.series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    if (s.x.length === 1) {
      r.marker(px(s.x[0]), py(s.y[0]), color, 3);
      return;
    }
    for (let k = 1; k < s.x.length; k++) {
      if (s.dashed && k % 3 === 0) continue;
      r.line(px(s.x[k - 1]), py(s.y[k - 1]), px(s.x[k]), py(s.y[k]), color, 2);
    }
  });

  if (model.showLegend && model.series.length > 1) {
    const entries = model.series.map((s) => s.label);
    const boxW = Math.max(...entries.map((e) => r.textWidth(e))) + 40;
    const boxH = entries.length * (GLYPH_H + 6) + 10;
    const bx = MARGIN.left + plotW - boxW - 10;
    const by = MARGIN.top + 10;
    r.fillRect(bx, by, boxW, boxH, [255, 255, 255]);
    r.line(bx, by, bx + boxW, by, BLACK);
    r.line(bx, by + boxH, bx + boxW, by + boxH, BLACK);
    r.line(bx, by, bx, by + boxH, BLACK);
    r.line(bx + boxW, by, bx + boxW, by + boxH, BLACK);
    model.series.forEach((s, i) => {
      const y = by + 8 + i * (GLYPH_H + 6);
      const color: Color = SERIES_COLORS[i % SERIES_COLORS.length];
      r.line(bx + 6, y + 3, bx + 26, y + 3, color, 2);
      r.text(bx + 32, y, s.label, BLACK);
    });
  }
  return r;
}
