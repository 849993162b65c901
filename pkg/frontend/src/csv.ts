/** CSV loading for the scenario outputs: '#'-prefixed metadata header
 *  comments, one header row, decimal columns. */

import { readFileSync } from "node:fs";

export interface ScenarioTable {
  metadata: Map<string, string>;
  columns: string[];
  rows: number[][];
}

export function column(table: ScenarioTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column "${name}" (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[idx]);
}

export function hasColumn(table: ScenarioTable, name: string): boolean {
  return table.columns.includes(name);
}

export function parseCsv(text: string): ScenarioTable {
  const metadata = new Map<string, string>();
  const lines = text.split("\n").filter((l) => l.length > 0);
  let i = 0;
  for (; i < lines.length && lines[i].startsWith("#"); i++) {
    const body = lines[i].slice(1).trim();
    const eq = body.indexOf("=");
    if (eq > 0) {
      metadata.set(body.slice(0, eq).trim(), body.slice(eq + 1).trim());
    }
  }
  if (i >= lines.length) {
    throw new Error("empty CSV: no header row");
  }
  const columns = lines[i++].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${rows.length + 1}: expected ${columns.length} fields, got ${parts.length}`);
    }
    const row = parts.map((p) => Number(p));
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`row ${rows.length + 1}: non-numeric value`);
    }
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error("empty CSV: no data rows");
  }
  return { metadata, columns, rows };
}

export function loadCsv(path: string): ScenarioTable {
  return parseCsv(readFileSync(path, "utf-8"));
}
