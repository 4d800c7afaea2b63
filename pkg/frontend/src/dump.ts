import { chromium, errors as pwErrors } from "playwright-core";
import type { Browser, LaunchOptions } from "playwright-core";

import { BrowserUnavailable, LoadTimeout, NavigationError } from "./errors.js";
import { resolveInput } from "./request.js";
import {
  buildSidecar,
  serializeSidecar,
  validateSidecar,
  type SidecarDocument,
  type Viewport,
} from "./sidecar.js";
import { collectGeometry, type GeometryEntry } from "./walker.js";
import { writeAtomic } from "./write.js";

export type WaitStrategy =
  | { kind: "network-idle" }
  | { kind: "delay"; ms: number };

export interface DumpRequest {
  /** Local HTML file or URL. */
  input: string;
  viewport: Viewport;
  /** Where the sidecar JSON is written. */
  output: string;
  /** How to decide the page has settled. Default: network-idle. */
  wait?: WaitStrategy;
  /** Navigation budget in ms. Default 30000. */
  timeoutMs?: number;
  /** Embed the post-render serialized DOM. Default true. */
  embedHtml?: boolean;
  /** Explicit browser executable; overrides discovery. */
  browserPath?: string;
}

const DEFAULT_TIMEOUT_MS = 30000;

/**
 * Try an explicit executable first (flag, then GEOMDUMP_BROWSER), then the
 * default managed install, then system Chrome and Edge.
 */
export async function launchBrowser(browserPath?: string): Promise<Browser> {
  const explicit = browserPath ?? process.env.GEOMDUMP_BROWSER;
  const attempts: LaunchOptions[] = explicit
    ? [{ executablePath: explicit }]
    : [{}, { channel: "chrome" }, { channel: "msedge" }];
  let lastError: unknown;
  for (const options of attempts) {
    try {
      return await chromium.launch({ ...options, headless: true });
    } catch (err) {
      lastError = err;
    }
  }
  throw new BrowserUnavailable(
    "no usable browser: install one with `npx playwright install chromium`, " +
      "or point --browser / GEOMDUMP_BROWSER at a Chromium executable " +
      `(last error: ${lastError instanceof Error ? lastError.message.split("\n")[0] : lastError})`,
  );
}

/**
 * Render the page in a fresh browser context, measure every element and
 * write the sidecar. Nothing is written unless the whole dump succeeded.
 */
export async function dump(request: DumpRequest): Promise<SidecarDocument> {
  const url = resolveInput(request.input);
  const wait = request.wait ?? { kind: "network-idle" };
  const timeout = request.timeoutMs ?? DEFAULT_TIMEOUT_MS;
  const browser = await launchBrowser(request.browserPath);
  try {
    const context = await browser.newContext({
      viewport: {
        width: request.viewport.width,
        height: request.viewport.height,
      },
    });
    const page = await context.newPage();
    try {
      await page.goto(url, {
        waitUntil: wait.kind === "network-idle" ? "networkidle" : "load",
        timeout,
      });
    } catch (err) {
      if (err instanceof pwErrors.TimeoutError) {
        throw new LoadTimeout(`page did not settle within ${timeout}ms: ${url}`);
      }
      const message = err instanceof Error ? err.message.split("\n")[0] : String(err);
      throw new NavigationError(`navigation failed: ${message}`);
    }
    if (wait.kind === "delay") {
      await page.waitForTimeout(wait.ms);
    }
    const entries = (await page.evaluate(
      `(${collectGeometry.toString()})(document, window)`,
    )) as GeometryEntry[];
    const renderedHtml =
      request.embedHtml === false
        ? undefined
        : ((await page.evaluate(
            "document.documentElement.outerHTML",
          )) as string);
    const doc = buildSidecar(request.viewport, entries, renderedHtml);
    validateSidecar(doc);
    await writeAtomic(request.output, serializeSidecar(doc));
    return doc;
  } finally {
    await browser.close();
  }
}
