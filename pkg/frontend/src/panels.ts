/**
 * Panel state machines, DOM-free so they are testable headlessly. Each
 * panel keeps at most one in-flight request and discards stale responses
 * by request id. No panel ever computes a cost locally: every number
 * comes from a service response and is recorded in the session history.
 */

import type { StudioClient } from "./client.js";
import type { SessionHistory } from "./session.js";
import type {
  ComparisonReportDoc,
  CompleteResponse,
  FlatElement,
  LayoutDelta,
  StructureDoc,
  WorkloadDoc,
} from "./types.js";

export interface PanelView {
  render(): void;
  error(message: string): void;
}

const NULL_VIEW: PanelView = { render: () => undefined, error: () => undefined };

export class WhatIfPanel {
  report: ComparisonReportDoc | null = null;
  lastError: string | null = null;
  private requestId = 0;

  constructor(
    private client: StudioClient,
    private history: SessionHistory,
    private view: PanelView = NULL_VIEW,
  ) {}

  /** Latency bars: per-depth base/variant pairs from the last report. */
  breakdown(): { depth: string; base: number; variant: number; delta: number }[] {
    if (!this.report) return [];
    const depths = new Set([
      ...Object.keys(this.report.base.by_depth),
      ...Object.keys(this.report.variant.by_depth),
    ]);
    return [...depths]
      .sort((a, b) => Number(a) - Number(b))
      .map((depth) => ({
        depth,
        base: this.report!.base.by_depth[depth] ?? 0,
        variant: this.report!.variant.by_depth[depth] ?? 0,
        delta: this.report!.depth_deltas[depth] ?? 0,
      }));
  }

  async run(body: {
    spec: StructureDoc | string;
    workload: WorkloadDoc;
    profile: string;
    mode?: string;
    seed?: number;
    layout_delta?: LayoutDelta;
    profile_swap?: string;
    workload_delta?: WorkloadDoc;
  }): Promise<ComparisonReportDoc | null> {
    const id = ++this.requestId;
    try {
      const report = await this.client.whatIf(body);
      if (id !== this.requestId) return null; // stale: a newer request won
      this.report = report;
      this.lastError = null;
      this.history.record("whatif", body, report);
      this.view.render();
      return report;
    } catch (err) {
      if (id !== this.requestId) return null;
      this.lastError = String((err as Error).message ?? err);
      this.view.error(this.lastError);
      return null;
    }
  }
}

export class CompletePanel {
  result: CompleteResponse | null = null;
  lastError: string | null = null;
  private requestId = 0;

  constructor(
    private client: StudioClient,
    private history: SessionHistory,
    private view: PanelView = NULL_VIEW,
  ) {}

  async run(body: {
    workload: WorkloadDoc;
    candidates: Record<string, FlatElement>;
    profile: string;
    depth_limit?: number;
    partial?: string[];
  }): Promise<CompleteResponse | null> {
    const id = ++this.requestId;
    const hasTerminal = Object.values(body.candidates).some(
      (flat) =>
        flat["inter-block.fanout.type"] === "terminal" ||
        (flat["intra-block.dataRetention.keyRetention.type"] === "full" &&
          flat["intra-block.dataRetention.valueRetention.type"] === "full"),
    );
    if (!hasTerminal) {
      this.lastError = "no terminal candidate: add a data-page element";
      this.view.error(this.lastError);
      return null;
    }
    try {
      const result = await this.client.complete(body);
      if (id !== this.requestId) return null;
      this.result = result;
      this.lastError = null;
      this.history.record("complete", body, result);
      this.view.render();
      return result;
    } catch (err) {
      if (id !== this.requestId) return null;
      this.lastError = String((err as Error).message ?? err);
      this.view.error(this.lastError);
      return null;
    }
  }
}
