/** Thin fetch client for the calculator service. */

import type {
  CatalogDoc,
  ComparisonReportDoc,
  CompleteResponse,
  CostResponse,
  FlatElement,
  LayoutDelta,
  StructureDoc,
  ValidationReport,
  WorkloadDoc,
} from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class StudioClient {
  constructor(private baseUrl: string, private fetchImpl: typeof fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await res.json();
    if (!res.ok) {
      throw new ServiceError(res.status, String(payload.detail ?? res.statusText));
    }
    return payload as T;
  }

  health(): Promise<{ status: string; profiles: string[] }> {
    return this.request("GET", "/health");
  }

  catalog(): Promise<CatalogDoc> {
    return this.request("GET", "/catalog");
  }

  bundledSpecs(): Promise<{ specs: Record<string, StructureDoc> }> {
    return this.request("GET", "/specs");
  }

  profiles(): Promise<{ profiles: { id: string; machine_id: string }[] }> {
    return this.request("GET", "/profiles");
  }

  validate(spec: StructureDoc): Promise<ValidationReport> {
    return this.request("POST", "/validate", { spec });
  }

  cost(
    spec: StructureDoc | string,
    workload: WorkloadDoc,
    profile: string,
    mode = "set",
    seed = 0,
  ): Promise<CostResponse> {
    return this.request("POST", "/cost", { spec, workload, profile, mode, seed });
  }

  whatIf(body: {
    spec: StructureDoc | string;
    workload: WorkloadDoc;
    profile: string;
    mode?: string;
    seed?: number;
    layout_delta?: LayoutDelta;
    profile_swap?: string;
    workload_delta?: WorkloadDoc;
  }): Promise<ComparisonReportDoc> {
    return this.request("POST", "/whatif", body);
  }

  complete(body: {
    workload: WorkloadDoc;
    candidates: Record<string, FlatElement>;
    profile: string;
    depth_limit?: number;
    partial?: string[];
  }): Promise<CompleteResponse> {
    return this.request("POST", "/complete", body);
  }
}
