import { describe, expect, it } from "vitest";

import { collectGeometry } from "../src/walker.js";
import { comment, el, fakePage, pi, text } from "./fakedom.js";

function paths(entries: { path: number[] }[]): string[] {
  return entries.map((e) => e.path.join(","));
}

describe("collectGeometry", () => {
  it("emits the bare root at path []", () => {
    const { doc, win } = fakePage(
      el("html", { rect: { left: 0, top: 0, width: 800, height: 600 }, font: 16 }),
    );
    const entries = collectGeometry(doc, win);
    expect(entries).toHaveLength(1);
    expect(entries[0]).toEqual({
      path: [],
      rect: [0, 0, 800, 600],
      fontSize: 16,
    });
  });

  it("counts elements, comments and non-blank text when indexing", () => {
    const root = el(
      "html",
      {},
      el(
        "body",
        {},
        text("a"),
        comment("note"),
        text("  \n  "),
        el("span", { font: 12 }),
        text("b"),
        el("p"),
      ),
    );
    const { doc, win } = fakePage(root);
    const entries = collectGeometry(doc, win);
    // span sits after text "a" (0) and the comment (1); the blank text
    // is not counted, so the span is index 2 and "b" pushes p to 4.
    expect(paths(entries)).toEqual(["", "0", "0,2", "0,4"]);
  });

  it("emits in document order, depth first", () => {
    const root = el(
      "html",
      {},
      el("head", {}, el("title")),
      el("body", {}, el("div", {}, el("p")), el("div")),
    );
    const { doc, win } = fakePage(root);
    expect(paths(collectGeometry(doc, win))).toEqual([
      "",
      "0",
      "0,0",
      "1",
      "1,0",
      "1,0,0",
      "1,1",
    ]);
  });

  it("uses the whitespace-only test of the extractor parser", () => {
    const nbspOnly = "\xa0 \xa0";
    const ogham = String.fromCharCode(0x1680);
    const fileSep = "\x1c\x1d";
    const bom = String.fromCharCode(0xfeff);
    const root = el(
      "body",
      {},
      text(nbspOnly), // whitespace: skipped
      text(ogham), // whitespace: skipped
      text(fileSep), // whitespace: skipped
      text(bom), // NOT whitespace: counted
      el("p"),
    );
    const { doc, win } = fakePage(root);
    // Only the BOM text occupies an index before p.
    expect(paths(collectGeometry(doc, win))).toEqual(["", "1"]);
  });

  it("ignores node kinds that never occur in parsed HTML", () => {
    const root = el("body", {}, pi("xml-stylesheet"), el("p"));
    const { doc, win } = fakePage(root);
    expect(paths(collectGeometry(doc, win))).toEqual(["", "0"]);
  });

  it("walks template children through the content fragment", () => {
    const hidden = el("div", { font: 14 });
    const root = el(
      "body",
      {},
      el("template", { templateContent: [text("x"), hidden] }),
      el("p"),
    );
    const { doc, win } = fakePage(root);
    expect(paths(collectGeometry(doc, win))).toEqual(["", "0", "0,1", "1"]);
  });

  it("adds scroll offsets so rects use the document-top origin", () => {
    const root = el(
      "html",
      { rect: { left: -3, top: -120, width: 800, height: 2000 } },
      el("body", { rect: { left: 5, top: -70, width: 790, height: 1900 } }),
    );
    const { doc, win } = fakePage(root, { scrollX: 3, scrollY: 120 });
    const entries = collectGeometry(doc, win);
    expect(entries[0]!.rect).toEqual([0, 0, 800, 2000]);
    expect(entries[1]!.rect).toEqual([8, 50, 790, 1900]);
  });

  it("floors non-positive and unparseable font sizes", () => {
    const zero = el("span", { font: 0 });
    const detached = el("i");
    detached.fontSizePx = "";
    const root = el("body", { font: 16 }, zero, detached);
    const { doc, win } = fakePage(root);
    const entries = collectGeometry(doc, win);
    expect(entries.map((e) => e.fontSize)).toEqual([16, 0.01, 0.01]);
  });

  it("reads pageXOffset when scrollX is absent", () => {
    const root = el("html", { rect: { left: -7, top: 0, width: 10, height: 10 } });
    const doc = { documentElement: root };
    const win = {
      pageXOffset: 7,
      pageYOffset: 0,
      getComputedStyle: () => ({ fontSize: "16px" }),
    };
    expect(collectGeometry(doc, win)[0]!.rect[0]).toBe(0);
  });

  it("has a self-contained body safe to serialize into a page", () => {
    const src = collectGeometry.toString();
    // Serialization relies on the function not closing over module scope.
    const rebuilt = new Function(`return (${src});`)() as typeof collectGeometry;
    const root = el("html", {}, el("body", {}, text("hello"), el("p")));
    const { doc, win } = fakePage(root);
    expect(rebuilt(doc, win)).toEqual(collectGeometry(doc, win));
  });
});
