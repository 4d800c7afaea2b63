/** One measured element: child-index path, page-coordinate rect, font size. */
export interface GeometryEntry {
  path: number[];
  rect: [number, number, number, number];
  fontSize: number;
}

interface RectLike {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Structural subset of a DOM node, so tests can walk hand-built trees. */
export interface NodeLike {
  nodeType: number;
  tagName?: string;
  data?: string | null;
  nodeValue?: string | null;
  childNodes: ArrayLike<NodeLike>;
  content?: { childNodes: ArrayLike<NodeLike> } | null;
  getBoundingClientRect?: () => RectLike;
}

export interface DocumentLike {
  documentElement: NodeLike;
}

export interface WindowLike {
  scrollX?: number;
  pageXOffset?: number;
  scrollY?: number;
  pageYOffset?: number;
  getComputedStyle(el: NodeLike): { fontSize: string };
}

/**
 * Walk the rendered DOM and measure every element.
 *
 * Child indices count elements, comments and text nodes holding at least one
 * non-whitespace character; whitespace-only text is skipped, as are node
 * kinds that only occur in XML documents (doctype, CDATA, processing
 * instructions).  This is the same counting rule the extractor's HTML parser
 * uses, so emitted paths resolve in its tree.  The root element's path is [].
 *
 * Rects are in CSS pixels with a document-top origin: the current scroll
 * offset is added back to viewport-relative measurements.
 *
 * This function is serialized into the page with Function.prototype.toString,
 * so its body must not reference anything from module scope.
 */
export function collectGeometry(
  doc: DocumentLike,
  win: WindowLike,
): GeometryEntry[] {
  // The whitespace set matches Python's str.isspace (the extractor drops
  // text nodes that are whitespace-only under that definition).  Notably
  // U+FEFF is NOT whitespace there, while U+001C..001F and U+0085 are.
  const blank =
    /^[\t\n\x0b\x0c\r \x1c-\x1f\x85\xa0\u1680\u2000-\u200a\u2028\u2029\u202f\u205f\u3000]*$/;
  const scrollX = win.scrollX ?? win.pageXOffset ?? 0;
  const scrollY = win.scrollY ?? win.pageYOffset ?? 0;
  const out: GeometryEntry[] = [];

  const visit = (el: NodeLike, path: number[]): void => {
    const r = el.getBoundingClientRect
      ? el.getBoundingClientRect()
      : { left: 0, top: 0, width: 0, height: 0 };
    let size = parseFloat(win.getComputedStyle(el).fontSize);
    // The sidecar format requires a positive font size; computed
    // font-size:0 is legal CSS (hidden text), so floor it.
    if (!Number.isFinite(size) || size <= 0) {
      size = 0.01;
    }
    out.push({
      path,
      rect: [r.left + scrollX, r.top + scrollY, r.width, r.height],
      fontSize: size,
    });
    // Template children live in the content fragment; the extractor parses
    // them as ordinary children, so the walk follows the fragment.
    const kids =
      el.tagName === "TEMPLATE" && el.content
        ? el.content.childNodes
        : el.childNodes;
    let index = 0;
    for (let i = 0; i < kids.length; i++) {
      const child = kids[i] as NodeLike;
      if (child.nodeType === 1) {
        visit(child, path.concat(index));
        index += 1;
      } else if (child.nodeType === 8) {
        index += 1;
      } else if (child.nodeType === 3) {
        const data = child.data ?? child.nodeValue ?? "";
        if (!blank.test(data)) {
          index += 1;
        }
      }
    }
  };

  visit(doc.documentElement, []);
  return out;
}
