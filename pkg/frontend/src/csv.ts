/**
 * Strict CSV reader for the simulator's figure datasets.
 *
 * Layout contract: one header line `t,<label>,...`, then purely numeric
 * rows, LF endings. Anything else raises a CsvError carrying the file
 * name and 1-based line number so the CLI can report it precisely.
 */

export class CsvError extends Error {
  constructor(
    public readonly file: string,
    public readonly line: number,
    detail: string,
  ) {
    super(`${file}:${line}: ${detail}`);
    this.name = "CsvError";
  }
}

export interface Dataset {
  /** Column labels, header verbatim (first is "t"). */
  header: string[];
  /** Row-major numeric values, one entry per header column. */
  rows: number[][];
  /** Raw file body, byte-for-byte (embedded into the SVG metadata). */
  raw: string;
}

export function parseCsv(raw: string, file: string): Dataset {
  const lines = raw.split("\n");
  if (lines[lines.length - 1] === "") lines.pop(); // trailing newline
  if (lines.length === 0) {
    throw new CsvError(file, 1, "empty file");
  }
  const header = lines[0].split(",");
  if (header.length < 2 || header[0] !== "t") {
    throw new CsvError(file, 1, `expected header "t,<label>,...", got "${lines[0]}"`);
  }
  if (lines.length === 1) {
    throw new CsvError(file, 1, "no data rows");
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        file,
        i + 1,
        `expected ${header.length} columns, got ${cells.length}`,
      );
    }
    const row = cells.map((cell) => {
      const value = Number(cell);
      if (cell.trim() === "" || Number.isNaN(value)) {
        throw new CsvError(file, i + 1, `not a number: "${cell}"`);
      }
      return value;
    });
    rows.push(row);
  }
  return { header, rows, raw };
}
