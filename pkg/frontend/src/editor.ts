// Program editor: a textarea with a mirrored highlight layer so assembler
// diagnostics tint the offending lines in place.

import type { AsmErrorEntry } from "./protocol";

export function errorLineSet(errors: AsmErrorEntry[]): Set<number> {
  return new Set(errors.map((e) => e.line));
}

export class ProgramEditor {
  private errors: AsmErrorEntry[] = [];

  constructor(
    private readonly textarea: HTMLTextAreaElement,
    private readonly highlight: HTMLElement,
    private readonly messages: HTMLElement,
  ) {
    textarea.addEventListener("input", () => this.redraw());
    textarea.addEventListener("scroll", () => {
      highlight.scrollTop = textarea.scrollTop;
      highlight.scrollLeft = textarea.scrollLeft;
    });
    this.redraw();
  }

  get source(): string {
    return this.textarea.value;
  }

  set source(text: string) {
    this.textarea.value = text;
    this.clearErrors();
  }

  setErrors(errors: AsmErrorEntry[]): void {
    this.errors = errors;
    this.redraw();
    if (errors.length) this.jumpToLine(errors[0].line);
  }

  clearErrors(): void {
    this.errors = [];
    this.redraw();
  }

  private jumpToLine(line: number): void {
    const lines = this.textarea.value.split("\n");
    let pos = 0;
    for (let i = 0; i < Math.min(line - 1, lines.length); i++) pos += lines[i].length + 1;
    this.textarea.focus();
    this.textarea.setSelectionRange(pos, pos);
  }

  private redraw(): void {
    const bad = errorLineSet(this.errors);
    const lines = this.textarea.value.split("\n");
    this.highlight.innerHTML = lines
      .map((text, i) => {
        const cls = bad.has(i + 1) ? "line err" : "line";
        return `<div class="${cls}">${escapeHtml(text) || "&nbsp;"}</div>`;
      })
      .join("");
    this.messages.innerHTML = this.errors
      .map((e) => `<div class="asm-msg">line ${e.line}: ${escapeHtml(e.message)}</div>`)
      .join("");
  }
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
