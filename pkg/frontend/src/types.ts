/**
 * Types mirroring the calculator service's JSON contracts.
 * The file formats are the only coupling to the engine.
 */

export type FlatElement = Record<string, string | number | boolean>;

export interface StructureDoc {
  name: string;
  description?: string;
  root: string;
  edges: Record<string, string>;
  elements: Record<string, FlatElement>;
}

export interface DomainTag {
  tag: string;
  arity: number;
  params: string[];
}

export interface PrimitiveDef {
  name: string;
  class: string;
  domain: DomainTag[];
}

export interface CatalogDoc {
  primitives: PrimitiveDef[];
}

export interface ValidationReport {
  ok: boolean;
  violations: [string, string][];
}

export interface CostedCallDoc {
  kind: string;
  layout: string;
  count: number;
  bytes: number;
  role: string;
  depth: number;
  variant: string;
  seconds: number;
  multiplicity: number;
  extrapolated: boolean;
}

export interface CostedTreeDoc {
  operation: string;
  machine_id: string;
  total_seconds: number;
  extrapolated: boolean;
  psb: string;
  calls: CostedCallDoc[];
}

export interface WorkloadReportDoc {
  total_seconds: number;
  by_operation: Record<string, number>;
  by_depth: Record<string, number>;
  operations: number;
  extrapolated: boolean;
}

export interface CostResponse {
  machine_id: string;
  mode: string;
  seed: number;
  report: WorkloadReportDoc;
  sample_traces: Record<string, CostedTreeDoc>;
  instance: {
    height: number;
    nodes_per_level: number[];
    bytes_per_level: number[];
    cumulative_bytes: number[];
    total_bytes: number;
    total_nodes: number;
  };
}

export interface ComparisonReportDoc {
  axis: string;
  base: WorkloadReportDoc;
  variant: WorkloadReportDoc;
  delta_seconds: number;
  depth_deltas: Record<string, number>;
}

export interface DesignNodeDoc {
  element: string;
  cost: number;
  children: Record<string, DesignNodeDoc>;
}

export interface CompleteResponse {
  cost: number;
  design: DesignNodeDoc;
  spec: StructureDoc;
  cache_hits: number;
  evaluated: number;
}

export interface WorkloadDoc {
  data: { entry_count: number; [k: string]: unknown };
  operations: { op: string; count: number; [k: string]: unknown }[];
  seed: number;
}

export type LayoutDelta = Record<string, Record<string, string | (string | number)[]>>;
