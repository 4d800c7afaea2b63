#!/usr/bin/env node
import { parseArgs } from "node:util";
import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { dump, type DumpRequest, type WaitStrategy } from "./dump.js";
import { UsageError } from "./errors.js";
import type { Viewport } from "./sidecar.js";

const USAGE = `usage: geomdump dump --in PATH_OR_URL --out PATH
                     [--viewport WxH] [--wait networkidle|MS]
                     [--timeout MS] [--no-embed-html] [--browser PATH]

Renders the page headlessly and writes a JSON sidecar mapping every element
to its bounding rect (CSS pixels, document-top origin) and computed font
size in px.

options:
  --in PATH_OR_URL     local HTML file or URL (required)
  --out PATH           sidecar output path (required)
  --viewport WxH       browser viewport (default 1280x1024)
  --wait networkidle|MS  settle on network idle, or a fixed delay in ms
                       after load (default networkidle)
  --timeout MS         navigation budget in ms (default 30000)
  --no-embed-html      skip embedding the post-render DOM serialization
  --browser PATH       Chromium executable (default: managed install, then
                       system Chrome/Edge; GEOMDUMP_BROWSER also works)
`;

export function parseViewport(value: string): Viewport {
  const m = /^(\d+)x(\d+)$/.exec(value);
  if (!m) {
    throw new UsageError(`--viewport must look like 1280x1024, got ${value!}`);
  }
  const width = Number(m[1]);
  const height = Number(m[2]);
  if (width <= 0 || height <= 0) {
    throw new UsageError(`--viewport must be positive, got ${value}`);
  }
  return { width, height };
}

export function parseWait(value: string): WaitStrategy {
  if (value === "networkidle" || value === "network-idle") {
    return { kind: "network-idle" };
  }
  if (/^\d+$/.test(value)) {
    return { kind: "delay", ms: Number(value) };
  }
  throw new UsageError(
    `--wait must be 'networkidle' or a delay in ms, got ${value}`,
  );
}

export function parseDumpArgs(argv: string[]): DumpRequest {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        viewport: { type: "string", default: "1280x1024" },
        wait: { type: "string", default: "networkidle" },
        timeout: { type: "string", default: "30000" },
        "no-embed-html": { type: "boolean", default: false },
        browser: { type: "string" },
        help: { type: "boolean", default: false },
      },
      allowPositionals: false,
    });
  } catch (err) {
    throw new UsageError(err instanceof Error ? err.message : String(err));
  }
  const values = parsed.values;
  if (values.help) {
    throw new UsageError(USAGE);
  }
  if (!values.in) {
    throw new UsageError("--in is required");
  }
  if (!values.out) {
    throw new UsageError("--out is required");
  }
  if (!/^\d+$/.test(values.timeout!)) {
    throw new UsageError(`--timeout must be a number of ms, got ${values.timeout}`);
  }
  return {
    input: values.in,
    output: values.out,
    viewport: parseViewport(values.viewport!),
    wait: parseWait(values.wait!),
    timeoutMs: Number(values.timeout),
    embedHtml: !values["no-embed-html"],
    browserPath: values.browser,
  };
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    if (command === "--help" || command === "-h" || command === undefined) {
      process.stdout.write(USAGE);
      return command === undefined ? 2 : 0;
    }
    if (command !== "dump") {
      throw new UsageError(`unknown command ${command}; try 'dump'`);
    }
    const request = parseDumpArgs(rest);
    const doc = await dump(request);
    process.stdout.write(
      `wrote ${request.output} (${doc.nodes.length} nodes)\n`,
    );
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    const name = err instanceof Error ? err.name : "Error";
    const message = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: ${name}: ${message}\n`);
    return 1;
  }
}

const isDirectRun = (() => {
  const entry = process.argv[1];
  if (!entry) {
    return false;
  }
  try {
    return import.meta.url === pathToFileURL(realpathSync(entry)).href;
  } catch {
    return false;
  }
})();

if (isDirectRun) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
