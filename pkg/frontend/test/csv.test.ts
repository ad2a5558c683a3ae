import { describe, expect, it } from "vitest";

import { CsvSchemaError, column, distinct, filterRows, parseCsv } from "../src/csv.js";

describe("parseCsv", () => {
  it("parses numeric tables", () => {
    const t = parseCsv("a,b\n1,2\n3,4.5\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      [1, 2],
      [3, 4.5],
    ]);
  });

  it("rejects empty files", () => {
    expect(() => parseCsv("", "x.csv")).toThrow(CsvSchemaError);
  });

  it("rejects header-only files", () => {
    expect(() => parseCsv("a,b\n", "x.csv")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n", "x.csv")).toThrow(/row 1/);
  });
});

describe("column", () => {
  it("extracts by name", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(column(t, "b")).toEqual([2, 4]);
  });

  it("names the missing column in the error", () => {
    const t = parseCsv("a,b\n1,2\n");
    expect(() => column(t, "c", "f.csv")).toThrow(/missing column 'c'/);
  });
});

describe("helpers", () => {
  it("distinct preserves first-appearance order", () => {
    expect(distinct([3, 1, 3, 2, 1])).toEqual([3, 1, 2]);
  });

  it("filterRows matches exact values", () => {
    const t = parseCsv("t,v\n0,1\n0,2\n10,3\n");
    expect(filterRows(t, "t", 0).rows).toEqual([
      [0, 1],
      [0, 2],
    ]);
  });
});
