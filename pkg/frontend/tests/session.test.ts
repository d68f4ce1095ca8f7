import { describe, expect, it } from "vitest";

import { replaySession, SessionHistory } from "../src/session.js";

describe("SessionHistory", () => {
  it("is append-only with increasing sequence numbers", () => {
    const history = new SessionHistory();
    history.record("cost", { spec: "btree" }, { total: 1 });
    history.record("whatif", { spec: "btree" }, { delta: 0 });
    expect(history.length).toBe(2);
    expect(history.all().map((e) => e.seq)).toEqual([1, 2]);
  });

  it("snapshots requests and responses against later mutation", () => {
    const history = new SessionHistory();
    const req = { spec: { name: "x" } };
    history.record("validate", req, { ok: true, violations: [] });
    req.spec.name = "mutated";
    expect((history.all()[0].request as { spec: { name: string } }).spec.name).toBe("x");
  });

  it("pins entries for comparison", () => {
    const history = new SessionHistory();
    history.record("cost", {}, { total: 1 });
    history.record("cost", {}, { total: 2 });
    history.pin(2);
    expect(history.pinned().map((e) => e.seq)).toEqual([2]);
    expect(() => history.pin(9)).toThrow(RangeError);
  });

  it("round-trips through export/import", () => {
    const history = new SessionHistory();
    history.record("cost", { a: 1 }, { total: 3.5 });
    const again = SessionHistory.import(history.export());
    expect(again.length).toBe(1);
    expect(again.all()[0].response).toEqual({ total: 3.5 });
  });

  it("replay flags responses that no longer match", async () => {
    const history = new SessionHistory();
    history.record("cost", { q: 1 }, { total: 10 });
    history.record("cost", { q: 2 }, { total: 20 });
    const mismatches = await replaySession(history, async (_kind, request) => {
      const q = (request as { q: number }).q;
      return { total: q === 1 ? 10 : 999 };
    });
    expect(mismatches).toEqual([2]);
  });
});
