/**
 * Append-only session history. Every displayed number traces back to one
 * recorded (request, response) pair, so a session can be replayed against
 * the service and checked for exact agreement.
 */

export interface SessionEntry {
  seq: number;
  kind: "validate" | "cost" | "whatif" | "complete";
  request: unknown;
  response: unknown;
  at: string;
}

export class SessionHistory {
  private entries: SessionEntry[] = [];
  private pins = new Set<number>();

  record(kind: SessionEntry["kind"], request: unknown, response: unknown): SessionEntry {
    const entry: SessionEntry = {
      seq: this.entries.length + 1,
      kind,
      request: structuredClone(request),
      response: structuredClone(response),
      at: new Date().toISOString(),
    };
    this.entries.push(entry);
    return entry;
  }

  get length(): number {
    return this.entries.length;
  }

  all(): readonly SessionEntry[] {
    return this.entries;
  }

  pin(seq: number): void {
    if (seq < 1 || seq > this.entries.length) throw new RangeError(`no entry ${seq}`);
    this.pins.add(seq);
  }

  pinned(): SessionEntry[] {
    return this.entries.filter((e) => this.pins.has(e.seq));
  }

  export(): string {
    return JSON.stringify({ entries: this.entries }, null, 1);
  }

  static import(text: string): SessionHistory {
    const doc = JSON.parse(text) as { entries: SessionEntry[] };
    const history = new SessionHistory();
    for (const e of doc.entries) {
      history.record(e.kind, e.request, e.response);
    }
    return history;
  }
}

/**
 * Re-issue every recorded request and compare responses. Returns the
 * sequence numbers whose replayed response differs from the recorded one.
 */
export async function replaySession(
  history: SessionHistory,
  issue: (kind: SessionEntry["kind"], request: unknown) => Promise<unknown>,
): Promise<number[]> {
  const mismatches: number[] = [];
  for (const entry of history.all()) {
    const fresh = await issue(entry.kind, entry.request);
    if (JSON.stringify(fresh) !== JSON.stringify(entry.response)) {
      mismatches.push(entry.seq);
    }
  }
  return mismatches;
}
