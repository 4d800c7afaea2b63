export { collectGeometry } from "./walker.js";
export type {
  GeometryEntry,
  NodeLike,
  DocumentLike,
  WindowLike,
} from "./walker.js";
export {
  buildSidecar,
  serializeSidecar,
  validateSidecar,
  SIDECAR_VERSION,
} from "./sidecar.js";
export type { SidecarDocument, Viewport } from "./sidecar.js";
export { dump, launchBrowser } from "./dump.js";
export type { DumpRequest, WaitStrategy } from "./dump.js";
export { resolveInput } from "./request.js";
export { writeAtomic } from "./write.js";
export {
  BrowserUnavailable,
  LoadTimeout,
  NavigationError,
  SchemaError,
  UsageError,
} from "./errors.js";
