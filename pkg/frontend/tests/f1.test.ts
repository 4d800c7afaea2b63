import { spawnSync } from "node:child_process";
import { existsSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeAll, describe, expect, it } from "vitest";

import { serializeSidecar, buildSidecar, validateSidecar } from "../src/sidecar.js";
import { collectGeometry } from "../src/walker.js";
import { el, fakePage, text, type Box, type FakeNode } from "./fakedom.js";

const FIXTURE = join(
  fileURLToPath(new URL(".", import.meta.url)),
  "..",
  "..",
  "tests",
  "fixtures",
  "F1.html",
);

function box(left: number, top: number, width: number, height: number): Box {
  return { left, top, width, height };
}

/**
 * The F1 fixture as a browser holds it after parsing: whitespace text nodes
 * between tags are present (the walker must skip them), and every element
 * carries the rect a 1280x1024 render produces.
 */
function f1Dom(): FakeNode {
  const nl = () => text("\n");
  return el(
    "html",
    { rect: box(0, 0, 1280, 155), font: 16 },
    el(
      "head",
      {},
      nl(),
      el("meta"),
      nl(),
      el("title", {}, text("First post")),
      nl(),
    ),
    nl(),
    el(
      "body",
      { rect: box(0, 0, 1280, 155), font: 16 },
      nl(),
      el("div", { rect: box(0, 0, 1280, 50), font: 16 }, text("My Blog")),
      nl(),
      el(
        "div",
        { rect: box(0, 50, 600, 85), font: 16 },
        nl(),
        el("h2", { rect: box(0, 50, 600, 30), font: 24 }, text("First post title")),
        nl(),
        el(
          "p",
          { rect: box(0, 80, 600, 40), font: 16 },
          text(
            "Pinned body copy that is long enough to wrap onto a second line of text.",
          ),
        ),
        nl(),
        el("div", { rect: box(0, 120, 600, 15), font: 12 }, text("posted by sam")),
        nl(),
      ),
      nl(),
      el("div", { rect: box(0, 135, 1280, 20), font: 12 }, text("copyright 2026")),
      nl(),
    ),
  );
}

function pythonSideAvailable(): boolean {
  const probe = spawnSync("python3", ["-c", "import blogextract"], {
    timeout: 30000,
  });
  return probe.status === 0;
}

describe("F1 fixture through the walker", () => {
  let entries: ReturnType<typeof collectGeometry>;

  beforeAll(() => {
    const { doc, win } = fakePage(f1Dom());
    entries = collectGeometry(doc, win);
  });

  it("emits exactly the element set, in document order", () => {
    expect(entries.map((e) => e.path)).toEqual([
      [],
      [0],
      [0, 0],
      [0, 1],
      [1],
      [1, 0],
      [1, 1],
      [1, 1, 0],
      [1, 1, 1],
      [1, 1, 2],
      [1, 2],
    ]);
  });

  it("measures the heading within 2px of the hand measurement", () => {
    const h2 = entries.find((e) => e.path.join(",") === "1,1,0")!;
    const expected = [0, 50, 600, 30];
    for (let i = 0; i < 4; i++) {
      expect(Math.abs(h2.rect[i]! - expected[i]!)).toBeLessThanOrEqual(2);
    }
    expect(h2.fontSize).toBe(24);
  });

  it("builds a sidecar that passes validation", () => {
    const doc = buildSidecar({ width: 1280, height: 1024 }, entries);
    expect(() => validateSidecar(doc)).not.toThrow();
  });

  describe.skipIf(!existsSync(FIXTURE) || !pythonSideAvailable())(
    "consumed by the extractor",
    () => {
      it("every path resolves and the heading rect survives the trip", () => {
        const doc = buildSidecar({ width: 1280, height: 1024 }, entries);
        const script = [
          "import json, sys",
          "from blogextract import NodePath, load_sidecar, node_at_path, parse_html",
          "html = open(sys.argv[1], 'rb').read()",
          "tree = parse_html(html)",
          "geom = load_sidecar(sys.stdin.buffer.read(), tree)",
          "nid = node_at_path(tree, NodePath([1, 1, 0]))",
          "r = geom.rects[nid]",
          "out = {'h2': [r.x, r.y, r.width, r.height],",
          "       'font': geom.font_sizes[nid], 'source': geom.source}",
          "print(json.dumps(out))",
        ].join("\n");
        const run = spawnSync("python3", ["-c", script, FIXTURE], {
          input: serializeSidecar(doc),
          timeout: 60000,
          encoding: "utf-8",
        });
        expect(run.stderr).toBe("");
        expect(run.status).toBe(0);
        const result = JSON.parse(run.stdout);
        expect(result.source).toBe("sidecar");
        expect(result.h2).toEqual([0, 50, 600, 30]);
        expect(result.font).toBe(24);
      });
    },
  );
});
