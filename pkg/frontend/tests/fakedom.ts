import type { DocumentLike, NodeLike, WindowLike } from "../src/walker.js";

export interface FakeNode extends NodeLike {
  childNodes: FakeNode[];
  content?: { childNodes: FakeNode[] } | null;
  fontSizePx?: string;
}

export interface Box {
  left: number;
  top: number;
  width: number;
  height: number;
}

export function el(
  tag: string,
  opts: { rect?: Box; font?: number; templateContent?: FakeNode[] } = {},
  ...children: FakeNode[]
): FakeNode {
  const rect = opts.rect ?? { left: 0, top: 0, width: 0, height: 0 };
  const node: FakeNode = {
    nodeType: 1,
    tagName: tag.toUpperCase(),
    childNodes: children,
    getBoundingClientRect: () => rect,
    fontSizePx: opts.font === undefined ? "16px" : `${opts.font}px`,
  };
  if (opts.templateContent) {
    node.content = { childNodes: opts.templateContent };
  }
  return node;
}

export function text(data: string): FakeNode {
  return { nodeType: 3, data, childNodes: [] };
}

export function comment(data: string): FakeNode {
  return { nodeType: 8, data, childNodes: [] };
}

/** Processing instruction; only appears when parsing XML documents. */
export function pi(data: string): FakeNode {
  return { nodeType: 7, data, childNodes: [] };
}

export function fakePage(
  root: FakeNode,
  opts: { scrollX?: number; scrollY?: number } = {},
): { doc: DocumentLike; win: WindowLike } {
  return {
    doc: { documentElement: root },
    win: {
      scrollX: opts.scrollX ?? 0,
      scrollY: opts.scrollY ?? 0,
      getComputedStyle: (node: NodeLike) => ({
        fontSize: (node as FakeNode).fontSizePx ?? "",
      }),
    },
  };
}
