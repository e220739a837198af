export class MissingColumn extends Error {
  constructor(public readonly column: string, file?: string) {
    super(`missing column "${column}"${file ? ` in ${file}` : ""}`);
    this.name = "MissingColumn";
  }
}

export class EmptyInput extends Error {
  constructor(file?: string) {
    super(`no data rows${file ? ` in ${file}` : ""}`);
    this.name = "EmptyInput";
  }
}
