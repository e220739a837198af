import { EmptyInput, MissingColumn } from "./errors.js";

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, file?: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new EmptyInput(file);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  return { header, rows };
}

/** Numeric column, validating presence up front so errors name the column. */
export function numberColumn(table: Table, name: string, file?: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumn(name, file);
  }
  return table.rows.map((r) => Number(r[idx]));
}

export function stringColumn(table: Table, name: string, file?: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumn(name, file);
  }
  return table.rows.map((r) => r[idx]);
}
