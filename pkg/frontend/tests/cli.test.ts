import { describe, expect, it } from "vitest";

import { parseDumpArgs, parseViewport, parseWait } from "../src/cli.js";
import { UsageError } from "../src/errors.js";

describe("parseViewport", () => {
  it("parses WxH", () => {
    expect(parseViewport("1280x1024")).toEqual({ width: 1280, height: 1024 });
    expect(parseViewport("360x640")).toEqual({ width: 360, height: 640 });
  });

  it("rejects malformed or non-positive sizes", () => {
    for (const bad of ["1280", "1280x", "x1024", "0x600", "800x0", "axb", "800X600"]) {
      expect(() => parseViewport(bad)).toThrowError(UsageError);
    }
  });
});

describe("parseWait", () => {
  it("accepts network idle spellings and fixed delays", () => {
    expect(parseWait("networkidle")).toEqual({ kind: "network-idle" });
    expect(parseWait("network-idle")).toEqual({ kind: "network-idle" });
    expect(parseWait("250")).toEqual({ kind: "delay", ms: 250 });
    expect(parseWait("0")).toEqual({ kind: "delay", ms: 0 });
  });

  it("rejects anything else", () => {
    for (const bad of ["soon", "-5", "2.5", ""]) {
      expect(() => parseWait(bad)).toThrowError(UsageError);
    }
  });
});

describe("parseDumpArgs", () => {
  it("builds a request with defaults", () => {
    const req = parseDumpArgs(["--in", "page.html", "--out", "page.geom"]);
    expect(req).toEqual({
      input: "page.html",
      output: "page.geom",
      viewport: { width: 1280, height: 1024 },
      wait: { kind: "network-idle" },
      timeoutMs: 30000,
      embedHtml: true,
      browserPath: undefined,
    });
  });

  it("honors every flag", () => {
    const req = parseDumpArgs([
      "--in", "https://blog.example/",
      "--out", "/tmp/d.geom",
      "--viewport", "800x600",
      "--wait", "500",
      "--timeout", "5000",
      "--no-embed-html",
      "--browser", "/usr/bin/chromium",
    ]);
    expect(req.viewport).toEqual({ width: 800, height: 600 });
    expect(req.wait).toEqual({ kind: "delay", ms: 500 });
    expect(req.timeoutMs).toBe(5000);
    expect(req.embedHtml).toBe(false);
    expect(req.browserPath).toBe("/usr/bin/chromium");
  });

  it("rejects missing required flags and unknown flags", () => {
    expect(() => parseDumpArgs(["--out", "x"])).toThrowError("--in is required");
    expect(() => parseDumpArgs(["--in", "x"])).toThrowError("--out is required");
    expect(() => parseDumpArgs(["--in", "x", "--out", "y", "--shiny"]))
      .toThrowError(UsageError);
    expect(() => parseDumpArgs(["--in", "x", "--out", "y", "extra"]))
      .toThrowError(UsageError);
    expect(() => parseDumpArgs(["--in", "x", "--out", "y", "--timeout", "fast"]))
      .toThrowError("--timeout must be a number");
  });
});
