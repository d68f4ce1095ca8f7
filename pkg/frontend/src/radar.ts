/**
 * Radar presentation of one element: 21 axes, one per layout primitive,
 * each axis showing which of the primitive's domain values is chosen.
 * Pure geometry; presentation only. The dotted-key form stays the source
 * of truth and the engine never sees anything produced here.
 */

import type { FlatElement, PrimitiveDef } from "./types.js";

export interface RadarAxis {
  primitive: string;
  tag: string;
  /** chosen index within the primitive's domain, 0-based */
  index: number;
  /** domain size, for rendering ring marks */
  size: number;
  angle: number; // radians
  x: number;
  y: number;
}

/** Derive the 21 assignments from a flat element document (display only). */
export function deriveAssignments(elem: FlatElement): Record<string, string> {
  const b = (k: string) => Boolean(elem[k]);
  const s = (k: string) => String(elem[k] ?? "");
  const retention = (prefix: string) => {
    const t = s(`intra-block.dataRetention.${prefix}.type`);
    return t === "" ? "none" : t === "function" ? "func" : t;
  };
  const zone = b("intra-block.filters.zoneMaps.exact")
    ? "exact"
    : b("intra-block.filters.zoneMaps.min") && b("intra-block.filters.zoneMaps.max")
      ? "both"
      : b("intra-block.filters.zoneMaps.min")
        ? "min"
        : b("intra-block.filters.zoneMaps.max")
          ? "max"
          : "off";
  const layoutRaw = s("intra-block.dataRetention.retainedDataLayout");
  const partType = s("inter-block.partitioning.type");
  const order = s("inter-block.orderMaintenance.type");
  const partitioning =
    partType === "function"
      ? "di_func"
      : partType === "dd_function"
        ? "dd_func"
        : partType === "range" || partType === "radix" || partType === "temporal"
          ? partType
          : order === "sorted"
            ? "sorted"
            : order === "k-ary"
              ? "k_ary"
              : "append_fw";
  const fanoutType = s("inter-block.fanout.type");
  const retainsAll = retention("keyRetention") === "full" && retention("valueRetention") === "full";
  const loc = s("intra-block.blockProperties.storage") || s("intra-block.blockProperties.location");
  const links = (nk: string, pk: string, bothTag: string, n: string, p: string) =>
    b(nk) && b(pk) ? bothTag : b(nk) ? n : b(pk) ? p : "none";
  return {
    key_retention: retention("keyRetention"),
    value_retention: retention("valueRetention"),
    key_value_layout:
      layoutRaw === "columnar" ? "columnar" : layoutRaw === "col_row_groups" ? "col_row_groups" : "row_wise",
    intra_node_access: b("inter-block.blockAccess.direct")
      ? "direct"
      : b("inter-block.blockAccess.headLink")
        ? "head_link"
        : b("inter-block.blockAccess.tailLink")
          ? "tail_link"
          : "direct",
    utilization: s("intra-block.utilization.function")
      ? "func"
      : s("intra-block.utilization.constraint") || "none",
    bloom_filters: b("intra-block.filters.bloomFilter.active") ? "on" : "off",
    zone_maps: zone,
    filters_layout: s("intra-block.filters.filtersMemoryLayout") || "scatter",
    fanout: fanoutType === "fixed" && retainsAll ? "terminal" : fanoutType || "fixed",
    partitioning,
    sub_block_capacity:
      s("intra-block.capacity.type") === "variable"
        ? "unrestricted"
        : s("intra-block.capacity.type") === "function"
          ? "func"
          : s("intra-block.capacity.type") || "balanced",
    immediate_links: links("intra-block.links.next", "intra-block.links.prev", "both", "next", "prev"),
    skip_links: s("intra-block.links.skipLinks.type") === "function"
      ? "func"
      : s("intra-block.links.skipLinks.type") || "none",
    area_links: links("external.links.next", "external.links.prev", "both", "forward", "backward"),
    sub_block_location:
      loc === "" ? "none" : loc === "doublePointed" ? "double_pointed" : loc,
    sub_block_layout:
      s("intra-block.blockProperties.layout") === "BFS" || s("intra-block.blockProperties.layout") === "inline"
        ? "bfs"
        : s("intra-block.blockProperties.layout") === "bfs_layer"
          ? "bfs_layer"
          : "scatter",
    sub_blocks_homogeneous: b("intra-block.blockProperties.homogeneous") ? "true" : "false",
    sub_block_consolidation: b("layout.oneChildCompression") ? "true" : "false",
    sub_block_instantiation: b("layout.zeroElementNullable") ? "lazy" : "eager",
    links_layout: s("intra-block.links.linksMemoryLayout") || "scatter",
    recursion: s("inter-block.recursion.type") === "yes" ? "yes" : "none",
  };
}

export function radarAxes(
  elem: FlatElement,
  primitives: PrimitiveDef[],
  radius = 100,
): RadarAxis[] {
  const assignments = deriveAssignments(elem);
  const n = primitives.length;
  return primitives.map((prim, i) => {
    const tag = assignments[prim.name] ?? prim.domain[0].tag;
    let index = prim.domain.findIndex((t) => t.tag === tag);
    if (index < 0) index = 0;
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    const r = ((index + 1) / prim.domain.length) * radius;
    return {
      primitive: prim.name,
      tag,
      index,
      size: prim.domain.length,
      angle,
      x: Math.cos(angle) * r,
      y: Math.sin(angle) * r,
    };
  });
}
