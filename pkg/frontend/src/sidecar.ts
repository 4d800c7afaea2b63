import { SchemaError } from "./errors.js";
import type { GeometryEntry } from "./walker.js";

export const SIDECAR_VERSION = 1;

export interface Viewport {
  width: number;
  height: number;
}

export interface SidecarDocument {
  v: number;
  viewport: Viewport;
  nodes: GeometryEntry[];
  renderedHtml?: string;
}

export function buildSidecar(
  viewport: Viewport,
  nodes: GeometryEntry[],
  renderedHtml?: string,
): SidecarDocument {
  const doc: SidecarDocument = {
    v: SIDECAR_VERSION,
    viewport: { width: viewport.width, height: viewport.height },
    nodes,
  };
  if (renderedHtml !== undefined) {
    doc.renderedHtml = renderedHtml;
  }
  return doc;
}

function isNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function require(cond: boolean, message: string): asserts cond {
  if (!cond) {
    throw new SchemaError(message);
  }
}

/**
 * Check a sidecar document against the format the extractor consumes.
 *
 * Per-node path resolution needs the parsed tree and is the consumer's job;
 * everything else (version, viewport, node entries, duplicate paths, the
 * optional renderedHtml) is checked here, mirroring the consumer's own
 * rejections so a document that passes never bounces on the other side
 * for a reason this side could have seen.
 */
export function validateSidecar(doc: unknown): asserts doc is SidecarDocument {
  require(isObject(doc), "sidecar must be a JSON object");
  require(
    doc.v === SIDECAR_VERSION,
    `unsupported sidecar version ${JSON.stringify(doc.v)}`,
  );
  const vp = doc.viewport;
  require(isObject(vp), "sidecar viewport must be an object");
  require(
    isNumber(vp.width) && isNumber(vp.height) && vp.width > 0 && vp.height > 0,
    "sidecar viewport must have positive width and height",
  );
  const nodes = doc.nodes;
  require(Array.isArray(nodes), "sidecar nodes must be a list");
  const seen = new Set<string>();
  for (let pos = 0; pos < nodes.length; pos++) {
    const entry: unknown = nodes[pos];
    require(isObject(entry), `sidecar node ${pos} must be an object`);
    const path = entry.path;
    require(
      Array.isArray(path) &&
        path.every((i) => typeof i === "number" && Number.isInteger(i) && i >= 0),
      `sidecar node ${pos} path must be a list of non-negative integers`,
    );
    const key = path.join(",");
    require(!seen.has(key), `sidecar node ${pos} repeats path [${key}]`);
    seen.add(key);
    const rect = entry.rect;
    require(
      Array.isArray(rect) && rect.length === 4 && rect.every(isNumber),
      `sidecar node ${pos} rect must be [x, y, w, h]`,
    );
    require(
      (rect[2] as number) >= 0 && (rect[3] as number) >= 0,
      `sidecar node ${pos} rect has negative dimensions`,
    );
    const size = entry.fontSize;
    require(
      isNumber(size) && size > 0,
      `sidecar node ${pos} fontSize must be a positive number`,
    );
  }
  if ("renderedHtml" in doc && doc.renderedHtml !== undefined) {
    require(
      typeof doc.renderedHtml === "string",
      "sidecar renderedHtml must be a string",
    );
  }
}

export function serializeSidecar(doc: SidecarDocument): string {
  return JSON.stringify(doc) + "\n";
}
