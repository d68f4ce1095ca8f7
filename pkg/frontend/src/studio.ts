/**
 * DOM wiring for the design studio: element editor with radar preview,
 * what-if runner with per-depth latency bars and the compact trace, and
 * the design auto-completion panel. Everything numeric on screen is a
 * service response relayed verbatim.
 */

import { StudioClient } from "./client.js";
import { SpecDraft } from "./draft.js";
import { CompletePanel, WhatIfPanel } from "./panels.js";
import { radarAxes } from "./radar.js";
import { SessionHistory } from "./session.js";
import type { CatalogDoc, StructureDoc, WorkloadDoc } from "./types.js";

const DEFAULT_WORKLOAD: WorkloadDoc = {
  data: { entry_count: 100000 },
  operations: [{ op: "get", count: 100 }],
  seed: 42,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function fmtSeconds(s: number): string {
  if (s >= 1) return `${s.toFixed(3)} s`;
  if (s >= 1e-3) return `${(s * 1e3).toFixed(3)} ms`;
  if (s >= 1e-6) return `${(s * 1e6).toFixed(3)} us`;
  return `${(s * 1e9).toFixed(1)} ns`;
}

export class Studio {
  client: StudioClient;
  history = new SessionHistory();
  draft: SpecDraft | null = null;
  catalog: CatalogDoc | null = null;
  profile = "";
  whatIfPanel: WhatIfPanel;
  completePanel: CompletePanel;

  constructor(baseUrl: string) {
    this.client = new StudioClient(baseUrl);
    this.whatIfPanel = new WhatIfPanel(this.client, this.history, {
      render: () => this.renderWhatIf(),
      error: (m) => this.flash(m),
    });
    this.completePanel = new CompletePanel(this.client, this.history, {
      render: () => this.renderComplete(),
      error: (m) => this.flash(m),
    });
  }

  async boot(): Promise<void> {
    this.catalog = await this.client.catalog();
    const [profiles, specs] = await Promise.all([
      this.client.profiles(),
      this.client.bundledSpecs(),
    ]);
    const select = el<HTMLSelectElement>("profile-select");
    for (const p of profiles.profiles) {
      const opt = document.createElement("option");
      opt.value = p.id;
      opt.textContent = `${p.id} (${p.machine_id})`;
      select.appendChild(opt);
    }
    this.profile = profiles.profiles[0]?.id ?? "";
    select.addEventListener("change", () => {
      this.profile = select.value;
      void this.runWhatIf(); // profile swap re-renders without re-editing
    });

    const specSelect = el<HTMLSelectElement>("spec-select");
    for (const name of Object.keys(specs.specs)) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      specSelect.appendChild(opt);
    }
    specSelect.addEventListener("change", () => this.loadSpec(specs.specs[specSelect.value]));
    this.loadSpec(specs.specs[specSelect.value ?? "btree"] ?? Object.values(specs.specs)[0]);

    el<HTMLButtonElement>("run-whatif").addEventListener("click", () => void this.runWhatIf());
    el<HTMLButtonElement>("undo-edit").addEventListener("click", () => {
      if (this.draft?.undo()) this.renderEditor();
    });
    el<HTMLButtonElement>("export-spec").addEventListener("click", () => {
      if (this.draft) el<HTMLTextAreaElement>("export-area").value = this.draft.exportText();
    });
    el<HTMLButtonElement>("run-complete").addEventListener("click", () => void this.runComplete());
  }

  loadSpec(doc: StructureDoc): void {
    this.draft = new SpecDraft(doc);
    void this.revalidate();
    this.renderEditor();
  }

  async revalidate(): Promise<void> {
    if (!this.draft) return;
    const report = await this.client.validate(this.draft.doc);
    this.draft.setValidation(report);
    this.history.record("validate", { spec: this.draft.doc }, report);
    el("validation-state").textContent = report.ok
      ? "valid"
      : report.violations.map(([who, what]) => `${who}: ${what}`).join("; ");
    el("validation-state").className = report.ok ? "ok" : "bad";
  }

  edit(element: string, key: string, value: string): void {
    if (!this.draft) return;
    try {
      this.draft.editPrimitive(element, key, value);
    } catch (err) {
      this.flash(String((err as Error).message));
      return; // draft unchanged on domain errors
    }
    void this.revalidate();
    this.renderEditor();
  }

  renderEditor(): void {
    if (!this.draft || !this.catalog) return;
    const host = el("elements");
    host.textContent = "";
    for (const [name, flat] of Object.entries(this.draft.doc.elements)) {
      const box = document.createElement("details");
      box.open = true;
      const summary = document.createElement("summary");
      summary.textContent = `${name}${this.draft.dirty.has(name) ? " *" : ""}`;
      box.appendChild(summary);
      box.appendChild(this.renderRadar(flat));
      const table = document.createElement("table");
      for (const [key, value] of Object.entries(flat).sort()) {
        const row = document.createElement("tr");
        const keyCell = document.createElement("td");
        keyCell.textContent = key;
        const valCell = document.createElement("td");
        const input = document.createElement("input");
        input.value = String(value);
        input.addEventListener("change", () => this.edit(name, key, input.value));
        valCell.appendChild(input);
        row.append(keyCell, valCell);
        table.appendChild(row);
      }
      box.appendChild(table);
      host.appendChild(box);
    }
  }

  renderRadar(flat: Record<string, string | number | boolean>): SVGSVGElement {
    const axes = radarAxes(flat, this.catalog!.primitives, 80);
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "-110 -110 220 220");
    svg.setAttribute("class", "radar");
    const points = axes.map((a) => `${a.x.toFixed(1)},${a.y.toFixed(1)}`).join(" ");
    const poly = document.createElementNS(svg.namespaceURI, "polygon");
    poly.setAttribute("points", points);
    poly.setAttribute("class", "radar-shape");
    svg.appendChild(poly);
    for (const axis of axes) {
      const tip = document.createElementNS(svg.namespaceURI, "title");
      tip.textContent = `${axis.primitive} = ${axis.tag}`;
      const dot = document.createElementNS(svg.namespaceURI, "circle");
      dot.setAttribute("cx", axis.x.toFixed(1));
      dot.setAttribute("cy", axis.y.toFixed(1));
      dot.setAttribute("r", "2.5");
      dot.appendChild(tip);
      svg.appendChild(dot);
    }
    return svg as SVGSVGElement;
  }

  currentWorkload(): WorkloadDoc {
    try {
      return JSON.parse(el<HTMLTextAreaElement>("workload-area").value) as WorkloadDoc;
    } catch {
      return DEFAULT_WORKLOAD;
    }
  }

  async runWhatIf(): Promise<void> {
    if (!this.draft || !this.profile) return;
    if (!this.draft.submittable) {
      this.flash("draft failing validation; fix it before costing");
      return;
    }
    const deltaText = el<HTMLTextAreaElement>("delta-area").value.trim();
    const body = {
      spec: this.draft.doc,
      workload: this.currentWorkload(),
      profile: this.profile,
      layout_delta: deltaText ? JSON.parse(deltaText) : {},
    };
    await this.whatIfPanel.run(body);
  }

  renderWhatIf(): void {
    const report = this.whatIfPanel.report;
    if (!report) return;
    el("whatif-total").textContent =
      `base ${fmtSeconds(report.base.total_seconds)} -> variant ` +
      `${fmtSeconds(report.variant.total_seconds)} (delta ${fmtSeconds(Math.abs(report.delta_seconds))}` +
      `${report.delta_seconds <= 0 ? " saved" : " added"})`;
    const bars = el("whatif-bars");
    bars.textContent = "";
    const rows = this.whatIfPanel.breakdown();
    const peak = Math.max(...rows.map((r) => Math.max(r.base, r.variant)), 1e-12);
    for (const row of rows) {
      const line = document.createElement("div");
      line.className = "bar-row";
      const label = document.createElement("span");
      label.textContent = `depth ${row.depth}`;
      const base = document.createElement("div");
      base.className = "bar base";
      base.style.width = `${(100 * row.base) / peak}%`;
      base.title = fmtSeconds(row.base);
      const variant = document.createElement("div");
      variant.className = "bar variant";
      variant.style.width = `${(100 * row.variant) / peak}%`;
      variant.title = fmtSeconds(row.variant);
      line.append(label, base, variant);
      bars.appendChild(line);
    }
    el("history-count").textContent = String(this.history.length);
  }

  async runComplete(): Promise<void> {
    let candidates;
    try {
      candidates = JSON.parse(el<HTMLTextAreaElement>("candidates-area").value);
    } catch {
      this.flash("candidates must be a JSON object of flat elements");
      return;
    }
    await this.completePanel.run({
      workload: this.currentWorkload(),
      candidates,
      profile: this.profile,
      depth_limit: Number(el<HTMLInputElement>("depth-input").value || 3),
    });
  }

  renderComplete(): void {
    const result = this.completePanel.result;
    if (!result) return;
    const host = el("design-tree");
    host.textContent = "";
    const render = (node: typeof result.design, indent: number): void => {
      const line = document.createElement("div");
      line.style.marginLeft = `${indent * 16}px`;
      line.textContent = `${node.element}  ${fmtSeconds(node.cost)}`;
      host.appendChild(line);
      for (const child of Object.values(node.children)) render(child, indent + 1);
    };
    render(result.design, 0);
    el("history-count").textContent = String(this.history.length);
  }

  flash(message: string): void {
    const node = el("flash");
    node.textContent = message;
    node.className = "bad";
    setTimeout(() => (node.textContent = ""), 6000);
  }
}

if (typeof document !== "undefined" && document.getElementById("studio-root")) {
  const studio = new Studio(window.location.origin);
  void studio.boot();
  (window as unknown as { studio: Studio }).studio = studio;
}
