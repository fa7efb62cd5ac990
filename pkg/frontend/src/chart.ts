/**
 * Minimal SVG line chart for the figure datasets: one polyline per CSV
 * column, axes with nice ticks, optional horizontal reference line at 1.0
 * and a legend with the column labels taken verbatim from the header.
 *
 * The raw CSV body is embedded in a <metadata> CDATA block so the plotted
 * data round-trips byte-for-byte from the output file.
 */

import { Dataset } from "./csv";

export interface ChartOptions {
  title: string;
  yLabel: string;
  referenceLine: boolean;
}

const W = 720;
const H = 420;
const ML = 64;
const MR = 24;
const MT = 40;
const MB = 52;

const COLORS = ["#4361ee", "#e63946", "#2d6a4f", "#f4a261", "#7b2cbf", "#118ab2"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const magnitude = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * magnitude).find((s) => s >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) ticks.push(v);
  return ticks;
}

function fmtTick(v: number): string {
  const rounded = Math.abs(v) < 1e-12 ? 0 : v;
  return Number(rounded.toPrecision(6)).toString();
}

export function buildChart(data: Dataset, opts: ChartOptions): string {
  const pw = W - ML - MR;
  const ph = H - MT - MB;
  const t = data.rows.map((row) => row[0]);
  const nCurves = data.header.length - 1;

  const tMin = Math.min(...t);
  const tMax = Math.max(...t);
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const row of data.rows) {
    for (let c = 1; c < row.length; c++) {
      if (row[c] < yMin) yMin = row[c];
      if (row[c] > yMax) yMax = row[c];
    }
  }
  if (opts.referenceLine) {
    yMin = Math.min(yMin, 1.0);
    yMax = Math.max(yMax, 1.0);
  }
  const pad = (yMax - yMin || 1) * 0.05;
  yMin -= pad;
  yMax += pad;

  const xOf = (v: number) => ML + ((v - tMin) / (tMax - tMin || 1)) * pw;
  const yOf = (v: number) => MT + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<metadata id="source-data"><![CDATA[${data.raw}]]></metadata>\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="${MT - 16}" font-size="14" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  // grid and y ticks
  for (const v of niceTicks(yMin, yMax, 6)) {
    const y = yOf(v);
    s += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ML - 6}" y="${(y + 3.5).toFixed(1)}" text-anchor="end" font-size="10" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }
  // x ticks
  for (const v of niceTicks(tMin, tMax, 8)) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${MT + ph}" x2="${x.toFixed(1)}" y2="${MT + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${MT + ph + 16}" text-anchor="middle" font-size="10" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }

  if (opts.referenceLine) {
    const y = yOf(1.0).toFixed(1);
    s += `<line class="reference" x1="${ML}" y1="${y}" x2="${ML + pw}" y2="${y}" stroke="#555" stroke-width="1" stroke-dasharray="6,4"/>\n`;
    s += `<text x="${ML + pw - 4}" y="${(yOf(1.0) - 4).toFixed(1)}" text-anchor="end" font-size="9" fill="#555">1.0</text>\n`;
  }

  for (let c = 1; c <= nCurves; c++) {
    const color = COLORS[(c - 1) % COLORS.length];
    const points = data.rows
      .map((row) => `${xOf(row[0]).toFixed(2)},${yOf(row[c]).toFixed(2)}`)
      .join(" ");
    s += `<polyline class="curve" fill="none" stroke="${color}" stroke-width="1.4" points="${points}"/>\n`;
  }

  // axes frame
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ML}" y1="${MT + ph}" x2="${ML + pw}" y2="${MT + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<text x="${ML + pw / 2}" y="${H - 10}" text-anchor="middle" font-size="12" fill="#333">t</text>\n`;
  s += `<text x="18" y="${MT + ph / 2}" text-anchor="middle" font-size="12" fill="#333" transform="rotate(-90,18,${MT + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // legend, labels verbatim from the header
  const legendX = ML + pw - 150;
  let legendY = MT + 12;
  for (let c = 1; c <= nCurves; c++) {
    const color = COLORS[(c - 1) % COLORS.length];
    s += `<line x1="${legendX}" y1="${legendY}" x2="${legendX + 20}" y2="${legendY}" stroke="${color}" stroke-width="1.6"/>\n`;
    s += `<text x="${legendX + 26}" y="${legendY + 3.5}" font-size="10" fill="#333">${esc(data.header[c])}</text>\n`;
    legendY += 14;
  }

  s += `</svg>\n`;
  return s;
}
