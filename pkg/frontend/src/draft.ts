/**
 * SpecDraft: the working copy of a structure document under edit.
 *
 * The editable source of truth is the flat dotted-key form; the radar view
 * derives per-primitive assignments from it for presentation only. Edits
 * to enumerated keys are checked locally against the key's domain so a bad
 * value raises inline and leaves the draft unchanged; full validation
 * state comes from the service and gates submission.
 */

import type { FlatElement, StructureDoc, ValidationReport } from "./types.js";

/** Enumerable dotted keys and their accepted spellings. */
export const KEY_DOMAINS: Record<string, string[]> = {
  "inter-block.fanout.type": ["fixed", "function", "unlimited", "terminal"],
  "inter-block.orderMaintenance.type": ["none", "sorted", "k-ary"],
  "inter-block.partitioning.type": [
    "none", "function", "dd_function", "range", "radix", "temporal", "append_bw",
  ],
  "intra-block.blockProperties.location": ["", "inline", "pointed", "doublePointed"],
  "intra-block.blockProperties.layout": ["", "inline", "scatter", "BFS", "bfs_layer"],
  "intra-block.capacity.type": ["fixed", "balanced", "variable", "function"],
  "intra-block.dataRetention.keyRetention.type": ["none", "full", "function"],
  "intra-block.dataRetention.valueRetention.type": ["none", "full", "function"],
  "intra-block.dataRetention.retainedDataLayout": ["", "dump", "columnar", "rows", "col_row_groups"],
  "intra-block.filters.filtersMemoryLayout": ["consolidate", "scatter"],
  "intra-block.links.linksMemoryLayout": ["consolidate", "scatter"],
  "intra-block.links.skipLinks.type": ["none", "perfect", "randomized", "function"],
  "intra-block.utilization.constraint": ["none", "leq_capacity", "geq"],
  "inter-block.recursion.type": ["none", "yes"],
};

export class DomainError extends Error {}

export interface DraftState {
  doc: StructureDoc;
  dirty: Set<string>; // element names touched since the last validation
  validation: ValidationReport | null;
}

export class SpecDraft {
  private history: StructureDoc[] = [];
  doc: StructureDoc;
  dirty = new Set<string>();
  validation: ValidationReport | null = null;

  constructor(doc: StructureDoc) {
    this.doc = structuredClone(doc);
  }

  element(name: string): FlatElement {
    const elem = this.doc.elements[name];
    if (!elem) throw new DomainError(`unknown element ${name}`);
    return elem;
  }

  /** Set one dotted key. Bad enumerated values throw; the draft is untouched. */
  editPrimitive(element: string, key: string, value: string | number | boolean): void {
    const elem = this.element(element);
    const domain = KEY_DOMAINS[key];
    if (domain && !domain.includes(String(value))) {
      throw new DomainError(`${key} cannot be ${JSON.stringify(value)}; one of ${domain.join(" | ")}`);
    }
    if (typeof elem[key] === "number" && typeof value !== "number") {
      const parsed = Number(value);
      if (!Number.isFinite(parsed)) {
        throw new DomainError(`${key} expects a number`);
      }
      value = parsed;
    }
    this.history.push(structuredClone(this.doc));
    elem[key] = value;
    this.dirty.add(element);
    this.validation = null; // unknown until the service re-validates
  }

  undo(): boolean {
    const prev = this.history.pop();
    if (!prev) return false;
    this.doc = prev;
    this.validation = null;
    return true;
  }

  setValidation(report: ValidationReport): void {
    this.validation = report;
    if (report.ok) this.dirty.clear();
  }

  get submittable(): boolean {
    return this.validation !== null && this.validation.ok;
  }

  /**
   * Canonical export: key-sorted JSON of the structure document. Matches
   * the engine's file format byte for byte for documents that round-trip
   * through it.
   */
  exportText(): string {
    return canonicalJson(this.doc) + "\n";
  }
}

export function canonicalJson(value: unknown, indent = 0): string {
  const pad = "  ".repeat(indent + 1);
  const close = "  ".repeat(indent);
  if (Array.isArray(value)) {
    if (value.length === 0) return "[]";
    const items = value.map((v) => pad + canonicalJson(v, indent + 1));
    return "[\n" + items.join(",\n") + "\n" + close + "]";
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>).sort(([a], [b]) =>
      a < b ? -1 : a > b ? 1 : 0,
    );
    if (entries.length === 0) return "{}";
    const items = entries.map(
      ([k, v]) => `${pad}${JSON.stringify(k)}: ${canonicalJson(v, indent + 1)}`,
    );
    return "{\n" + items.join(",\n") + "\n" + close + "}";
  }
  return JSON.stringify(value);
}
