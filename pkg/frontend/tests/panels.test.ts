import { describe, expect, it } from "vitest";

import type { StudioClient } from "../src/client.js";
import { CompletePanel, WhatIfPanel } from "../src/panels.js";
import { SessionHistory } from "../src/session.js";
import type { ComparisonReportDoc, WorkloadDoc } from "../src/types.js";

const WORKLOAD: WorkloadDoc = {
  data: { entry_count: 10 },
  operations: [{ op: "get", count: 1 }],
  seed: 1,
};

function report(total: number): ComparisonReportDoc {
  return {
    axis: "design",
    base: { total_seconds: 1, by_operation: {}, by_depth: { "0": 1 }, operations: 1, extrapolated: false },
    variant: {
      total_seconds: total,
      by_operation: {},
      by_depth: { "0": total },
      operations: 1,
      extrapolated: false,
    },
    delta_seconds: total - 1,
    depth_deltas: { "0": total - 1 },
  };
}

function fakeClient(responses: (() => Promise<ComparisonReportDoc>)[]): StudioClient {
  let i = 0;
  return {
    whatIf: () => responses[i++](),
  } as unknown as StudioClient;
}

describe("WhatIfPanel", () => {
  it("keeps only the newest in-flight response", async () => {
    let releaseFirst!: (r: ComparisonReportDoc) => void;
    const first = new Promise<ComparisonReportDoc>((resolve) => (releaseFirst = resolve));
    const second = Promise.resolve(report(5));
    const panel = new WhatIfPanel(
      fakeClient([() => first, () => second]),
      new SessionHistory(),
    );
    const p1 = panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    const p2 = panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    await p2;
    releaseFirst(report(111)); // stale response arrives late
    expect(await p1).toBeNull();
    expect(panel.report?.variant.total_seconds).toBe(5);
  });

  it("updates the breakdown in place across runs", async () => {
    const history = new SessionHistory();
    const panel = new WhatIfPanel(
      fakeClient([() => Promise.resolve(report(2)), () => Promise.resolve(report(7))]),
      history,
    );
    await panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    const firstRows = panel.breakdown();
    expect(firstRows[0].variant).toBe(2);
    await panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    expect(panel.breakdown()[0].variant).toBe(7);
    expect(history.length).toBe(2); // every displayed number was recorded
  });

  it("surfaces service errors without clobbering the last report", async () => {
    const panel = new WhatIfPanel(
      fakeClient([
        () => Promise.resolve(report(2)),
        () => Promise.reject(new Error("spec: boom")),
      ]),
      new SessionHistory(),
    );
    await panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    await panel.run({ spec: "btree", workload: WORKLOAD, profile: "p" });
    expect(panel.lastError).toContain("boom");
    expect(panel.report?.variant.total_seconds).toBe(2);
  });
});

describe("CompletePanel", () => {
  it("names the missing terminal candidate before calling the service", async () => {
    const panel = new CompletePanel({} as StudioClient, new SessionHistory());
    const result = await panel.run({
      workload: WORKLOAD,
      candidates: { h: { "inter-block.fanout.type": "fixed" } },
      profile: "p",
    });
    expect(result).toBeNull();
    expect(panel.lastError).toMatch(/terminal/);
  });
});
