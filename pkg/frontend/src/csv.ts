/** Strict CSV reading for the simulator's outputs (no quoting, numeric cells). */

import { readFileSync } from "node:fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export class CsvSchemaError extends Error {
  constructor(path: string, detail: string) {
    super(`${path}: ${detail}`);
    this.name = "CsvSchemaError";
  }
}

export function parseCsv(text: string, path = "<memory>"): Table {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError(path, "file is empty");
  }
  const columns = lines[0].split(",");
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new CsvSchemaError(
        path,
        `row ${i} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    rows.push(cells.map((c) => Number(c)));
  }
  if (rows.length === 0) {
    throw new CsvSchemaError(path, "no data rows");
  }
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

/** Column vector by name; throws naming the missing column. */
export function column(table: Table, name: string, path = "<table>"): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvSchemaError(
      path,
      `missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((r) => r[idx]);
}

export function requireColumns(table: Table, names: string[], path: string): void {
  for (const n of names) {
    if (!table.columns.includes(n)) {
      throw new CsvSchemaError(
        path,
        `missing column '${n}' (have: ${table.columns.join(", ")})`,
      );
    }
  }
}

/** Distinct values of a column, in first-appearance order. */
export function distinct(values: number[]): number[] {
  const seen = new Set<number>();
  const out: number[] = [];
  for (const v of values) {
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}

/** Rows where column `name` equals `value` (exact match on parsed floats). */
export function filterRows(table: Table, name: string, value: number, path = "<table>"): Table {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvSchemaError(path, `missing column '${name}'`);
  }
  return { columns: table.columns, rows: table.rows.filter((r) => r[idx] === value) };
}
