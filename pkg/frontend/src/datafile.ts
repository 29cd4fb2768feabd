/**
 * Parser for the '%'-commented whitespace data files emitted by the gittins
 * CLI (sweep results, index curves, two-armed decisions).
 *
 * Format: comment lines start with '%'; a comment of the form
 * "% columns: a b c" names the columns; every non-comment line is one row of
 * whitespace-separated numbers.
 */

import { readFileSync } from "fs";

export interface DataFile {
  columns: string[];
  rows: number[][];
}

export function parseDataFile(text: string, source = "<data>"): DataFile {
  let columns: string[] = [];
  const rows: number[][] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0) continue;
    if (line.startsWith("%")) {
      const m = line.match(/^%\s*columns:\s*(.+)$/);
      if (m) columns = m[1].trim().split(/\s+/);
      continue;
    }
    const parts = line.split(/\s+/);
    const row = parts.map(Number);
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`${source}:${i + 1}: non-numeric row: ${line}`);
    }
    rows.push(row);
  }
  if (columns.length === 0) {
    throw new Error(`${source}: no '% columns:' header found`);
  }
  for (let i = 0; i < rows.length; i++) {
    if (rows[i].length !== columns.length) {
      throw new Error(
        `${source}: row ${i + 1} has ${rows[i].length} values, expected ${columns.length}`,
      );
    }
  }
  return { columns, rows };
}

export function loadDataFile(path: string): DataFile {
  return parseDataFile(readFileSync(path, "utf8"), path);
}

export function column(data: DataFile, name: string): number[] {
  const idx = data.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `missing column '${name}' (have: ${data.columns.join(", ")})`,
    );
  }
  return data.rows.map((r) => r[idx]);
}
