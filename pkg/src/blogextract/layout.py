"""Deterministic heuristic box layout and loading of measured geometry.

Two sources of geometry feed the feature stage:

* :func:`estimate_layout` — a small flow-layout model.  Block elements span
  their parent's content width and stack vertically; inline text advances a
  cursor at half-a-font-size per glyph and wraps at the parent width; boxes
  are placed on a 1/10 px grid.  It knows nothing about floats, tables or
  stylesheets beyond inline ``style`` attributes, which is enough to give
  every node a stable, plausible rectangle.
* :func:`load_sidecar` — exact rectangles measured by a real browser and
  written as a JSON sidecar keyed by node paths.

Both produce the same :class:`Geometry` value so downstream code never
cares which one ran.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from . import dom
from .dom import DomTree, NodePath, node_at_path
from .errors import PathMismatch, SchemaError

LINE_HEIGHT_FACTOR = 1.2
GLYPH_ADVANCE_FACTOR = 0.5
BASE_FONT_SIZE = 16.0
SIDECAR_VERSION = 1

# Browser default heading sizes, rounded to whole pixels.  Every other tag
# inherits its parent's size.
_FONT_DEFAULTS = {
    "h1": 32.0, "h2": 24.0, "h3": 19.0, "h4": 16.0, "h5": 13.0, "h6": 11.0,
}

_BLOCK_TAGS = frozenset({
    "html", "body", "div", "p", "h1", "h2", "h3", "h4", "h5", "h6",
    "ul", "ol", "li", "dl", "dt", "dd", "table", "thead", "tbody", "tfoot",
    "tr", "td", "th", "header", "footer", "section", "article", "aside",
    "nav", "main", "blockquote", "pre", "form", "fieldset", "figure",
    "figcaption", "address", "hr", "center",
})

_PX_RE = re.compile(r"^\s*([0-9]+(?:\.[0-9]+)?)\s*px\s*$", re.IGNORECASE)
_BARE_NUM_RE = re.compile(r"^\s*([0-9]+(?:\.[0-9]+)?)\s*$")


@dataclass(frozen=True)
class Viewport:
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("viewport dimensions must be positive")

    @property
    def center(self) -> tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)

    @property
    def center_norm(self) -> float:
        cx, cy = self.center
        return math.hypot(cx, cy)


DEFAULT_VIEWPORT = Viewport(1280, 1024)


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width < 0 or self.height < 0:
            raise ValueError("rect dimensions must be non-negative")

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center_x(self) -> float:
        return self.x + self.width / 2.0

    @property
    def center_y(self) -> float:
        return self.y + self.height / 2.0

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, other: "Rect", slack: float = 1e-6) -> bool:
        return (
            self.x <= other.x + slack
            and self.y <= other.y + slack
            and self.right >= other.right - slack
            and self.bottom >= other.bottom - slack
        )


ZERO_RECT = Rect(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class NormalizedCenter:
    cx: float
    cy: float


def normalized_center(rect: Rect, viewport: Viewport) -> NormalizedCenter:
    """Center offset from the viewport center, scaled by its distance to origin.

    A rect centered on the viewport center maps to exactly (0, 0); the
    viewport corners map to (+-w, +-h) / hypot(w, h) halves.
    """
    bx, by = viewport.center
    norm = viewport.center_norm
    return NormalizedCenter(
        (rect.center_x - bx) / norm,
        (rect.center_y - by) / norm,
    )


@dataclass
class Geometry:
    """Per-node rectangles and font sizes for one rendered page."""

    rects: dict[int, Rect]
    font_sizes: dict[int, float]
    viewport: Viewport
    source: str  # "heuristic" or "sidecar"
    ignored_declarations: int = 0

    def rect(self, node_id: int) -> Rect | None:
        return self.rects.get(node_id)

    def font_size(self, node_id: int) -> float | None:
        return self.font_sizes.get(node_id)


def _round1(v: float) -> float:
    return round(v, 1)


def _union(rects: list[Rect]) -> Rect | None:
    """Bounding box of the positive-area rects; None when there are none."""
    live = [r for r in rects if r.width > 0 and r.height > 0]
    if not live:
        return None
    x = min(r.x for r in live)
    y = min(r.y for r in live)
    right = max(r.right for r in live)
    bottom = max(r.bottom for r in live)
    return Rect(x, y, right - x, bottom - y)


class _Flow:
    """One inline formatting context: a cursor filling lines left to right."""

    def __init__(self, x: float, y: float, width: float):
        self.origin_x = x
        self.y = y
        self.width = width
        self.line_x = 0.0
        self.line_h = 0.0
        self.max_right = x

    def place_run(self, glyphs: int, font: float) -> list[Rect]:
        """Place a run of glyphs, wrapping greedily; returns its line boxes."""
        adv = round(GLYPH_ADVANCE_FACTOR * font, 1)
        line_height = round(LINE_HEIGHT_FACTOR * font, 1)
        boxes: list[Rect] = []
        remaining = glyphs
        while remaining > 0:
            space = self.width - self.line_x
            fit = int((space + 1e-6) // adv) if adv > 0 else remaining
            if fit <= 0:
                if self.line_x > 0:
                    self.newline(font)
                    continue
                fit = remaining  # container narrower than one glyph: no wrap
            take = min(fit, remaining)
            run_w = take * adv
            boxes.append(
                Rect(
                    _round1(self.origin_x + self.line_x),
                    _round1(self.y),
                    _round1(run_w),
                    line_height,
                )
            )
            self.line_x += run_w
            self.line_h = max(self.line_h, line_height)
            self.max_right = max(self.max_right, self.origin_x + self.line_x)
            remaining -= take
            if remaining > 0:
                self.newline(font)
        return boxes

    def place_box(self, w: float, h: float, font: float) -> Rect:
        """Place one atomic inline box (an image)."""
        if self.line_x > 0 and self.line_x + w > self.width + 1e-6:
            self.newline(font)
        box = Rect(_round1(self.origin_x + self.line_x), _round1(self.y), w, h)
        self.line_x += w
        self.line_h = max(self.line_h, h)
        self.max_right = max(self.max_right, self.origin_x + self.line_x)
        return box

    def cursor(self) -> tuple[float, float]:
        return (self.origin_x + self.line_x, self.y)

    def newline(self, font: float) -> None:
        advance = self.line_h if self.line_h > 0 else round(LINE_HEIGHT_FACTOR * font, 1)
        self.y += advance
        self.line_x = 0.0
        self.line_h = 0.0

    def finish(self) -> float:
        """Bottom edge of the flow once no more content will be added."""
        return self.y + self.line_h


class _Engine:
    def __init__(self, tree: DomTree, viewport: Viewport):
        self.tree = tree
        self.viewport = viewport
        self.rects: dict[int, Rect] = {}
        self.fonts: dict[int, float] = {}
        self.ignored = 0
        self._styles: dict[int, dict[str, str]] = {}

    def run(self) -> None:
        self._layout_block(self.tree.root, 0.0, 0.0, float(self.viewport.width), BASE_FONT_SIZE)

    # -- style helpers ----------------------------------------------------

    def _style(self, node: dom.DomNode) -> dict[str, str]:
        cached = self._styles.get(node.id)
        if cached is not None:
            return cached
        parsed: dict[str, str] = {}
        raw = node.attr("style") if node.is_element else None
        if raw:
            for decl in raw.split(";"):
                if ":" not in decl:
                    continue
                key, value = decl.split(":", 1)
                parsed[key.strip().lower()] = value.strip()
        self._styles[node.id] = parsed
        return parsed

    def _px(self, value: str | None) -> float | None:
        """Parse a pixel length; anything else is counted and ignored."""
        if value is None:
            return None
        m = _PX_RE.match(value) or _BARE_NUM_RE.match(value)
        if m:
            return float(m.group(1))
        self.ignored += 1
        return None

    def _length(self, node: dom.DomNode, prop: str) -> float | None:
        """Length from inline style, falling back to the matching attribute."""
        v = self._px(self._style(node).get(prop))
        if v is not None:
            return v
        if prop in ("width", "height"):
            return self._px(node.attr(prop))
        return v

    def _hidden(self, node: dom.DomNode) -> bool:
        if node.non_rendered:
            return True
        style = self._style(node)
        return style.get("display") == "none" or style.get("visibility") == "hidden"

    def _font_size(self, node: dom.DomNode, parent_font: float) -> float:
        explicit = self._px(self._style(node).get("font-size"))
        if explicit is not None and explicit > 0:
            return explicit
        default = _FONT_DEFAULTS.get(node.tag or "")
        if default is not None:
            return default
        return parent_font

    def _is_block(self, node: dom.DomNode) -> bool:
        return node.tag in _BLOCK_TAGS

    # -- layout -----------------------------------------------------------

    def _zero_subtree(self, node_id: int, parent_font: float) -> None:
        node = self.tree.node(node_id)
        font = self._font_size(node, parent_font) if node.is_element else parent_font
        self.rects[node_id] = ZERO_RECT
        self.fonts[node_id] = font
        for child in node.children:
            self._zero_subtree(child, font)

    def _layout_block(
        self, node_id: int, x: float, y: float, avail_w: float, parent_font: float
    ) -> Rect:
        node = self.tree.node(node_id)
        margin_left = self._px(self._style(node).get("margin-left")) or 0.0
        margin_top = self._px(self._style(node).get("margin-top")) or 0.0
        bx = x + margin_left
        by = y + margin_top
        explicit_w = self._length(node, "width")
        width = explicit_w if explicit_w is not None else max(avail_w - margin_left, 0.0)
        font = self._font_size(node, parent_font)
        self.fonts[node_id] = font

        flow: _Flow | None = None
        cur_y = by
        max_right = bx + width
        for child_id in node.children:
            child = self.tree.node(child_id)
            if child.is_text:
                if child.is_comment or child.non_rendered:
                    self.rects[child_id] = ZERO_RECT
                    self.fonts[child_id] = font
                    continue
                flow = flow or _Flow(bx, cur_y, width)
                self._layout_text(child_id, child.text or "", flow, font)
            elif self._hidden(child):
                self._zero_subtree(child_id, font)
            elif self._is_block(child):
                if flow is not None:
                    cur_y = flow.finish()
                    max_right = max(max_right, flow.max_right)
                    flow = None
                child_rect = self._layout_block(child_id, bx, cur_y, width, font)
                cur_y = max(cur_y, child_rect.bottom)
                max_right = max(max_right, child_rect.right)
            else:
                flow = flow or _Flow(bx, cur_y, width)
                self._layout_inline(child_id, flow, font)
        if flow is not None:
            cur_y = flow.finish()
            max_right = max(max_right, flow.max_right)

        content_h = max(cur_y - by, 0.0)
        explicit_h = self._length(node, "height")
        # An explicit height is a minimum: children still grow the box so
        # that every box contains its children.
        height = max(explicit_h, content_h) if explicit_h is not None else content_h
        final_w = max(width, max_right - bx)
        rect = Rect(_round1(bx), _round1(by), _round1(final_w), _round1(height))
        self.rects[node_id] = rect
        return rect

    def _layout_text(self, node_id: int, raw: str, flow: _Flow, font: float) -> None:
        text = dom._WS_RE.sub(" ", raw).strip()
        self.fonts[node_id] = font
        if not text:
            cx, cy = flow.cursor()
            self.rects[node_id] = Rect(_round1(cx), _round1(cy), 0.0, 0.0)
            return
        boxes = flow.place_run(len(text), font)
        self.rects[node_id] = _union(boxes) or ZERO_RECT

    def _layout_inline(self, node_id: int, flow: _Flow, parent_font: float) -> None:
        node = self.tree.node(node_id)
        if self._hidden(node):
            self._zero_subtree(node_id, parent_font)
            return
        font = self._font_size(node, parent_font)
        self.fonts[node_id] = font
        if node.tag == "br":
            cx, cy = flow.cursor()
            self.rects[node_id] = Rect(_round1(cx), _round1(cy), 0.0, 0.0)
            flow.newline(font)
            return
        if node.tag == "img":
            w = self._length(node, "width")
            h = self._length(node, "height")
            if w and h and w > 0 and h > 0:
                self.rects[node_id] = flow.place_box(w, h, font)
            else:
                cx, cy = flow.cursor()
                self.rects[node_id] = Rect(_round1(cx), _round1(cy), 0.0, 0.0)
            return
        for child_id in node.children:
            child = self.tree.node(child_id)
            if child.is_text:
                if child.is_comment or child.non_rendered:
                    self.rects[child_id] = ZERO_RECT
                    self.fonts[child_id] = font
                else:
                    self._layout_text(child_id, child.text or "", flow, font)
            else:
                # Treat any element inside an inline context as inline; a
                # block child of a span is rare in blog markup and flowing
                # its text keeps the model simple.
                self._layout_inline(child_id, flow, font)
        child_rects = [self.rects[c] for c in node.children]
        merged = _union(child_rects)
        if merged is None:
            cx, cy = flow.cursor()
            merged = Rect(_round1(cx), _round1(cy), 0.0, 0.0)
        self.rects[node_id] = merged


def estimate_layout(tree: DomTree, viewport: Viewport = DEFAULT_VIEWPORT) -> Geometry:
    """Assign a rectangle and a font size to every node of the tree.

    Deterministic: the same tree and viewport always produce identical
    geometry.  Non-rendered and hidden subtrees get zero rects.
    """
    engine = _Engine(tree, viewport)
    engine.run()
    return Geometry(
        rects=engine.rects,
        font_sizes=engine.fonts,
        viewport=viewport,
        source="heuristic",
        ignored_declarations=engine.ignored,
    )


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def load_sidecar(data: bytes, tree: DomTree) -> Geometry:
    """Build Geometry from a measured-geometry JSON sidecar.

    The sidecar carries a version marker, the viewport, and one entry per
    measured node: its path, its rectangle in page coordinates and its
    computed font size.  Tree nodes absent from the sidecar get zero rects,
    which excludes them from candidacy downstream.
    """
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise SchemaError(f"sidecar is not valid JSON: {exc}") from None
    _require(isinstance(doc, dict), "sidecar must be a JSON object")
    _require(
        doc.get("v") == SIDECAR_VERSION,
        f"unsupported sidecar version {doc.get('v')!r}",
    )
    vp = doc.get("viewport")
    _require(isinstance(vp, dict), "sidecar viewport must be an object")
    w, h = vp.get("width"), vp.get("height")
    _require(
        _is_number(w) and _is_number(h) and w > 0 and h > 0,
        "sidecar viewport must have positive width and height",
    )
    viewport = Viewport(int(w), int(h))
    entries = doc.get("nodes")
    _require(isinstance(entries, list), "sidecar nodes must be a list")

    rects: dict[int, Rect] = {}
    fonts: dict[int, float] = {}
    for pos, entry in enumerate(entries):
        _require(isinstance(entry, dict), f"sidecar node {pos} must be an object")
        path = entry.get("path")
        _require(
            isinstance(path, list) and all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in path),
            f"sidecar node {pos} path must be a list of non-negative integers",
        )
        try:
            node_id = node_at_path(tree, NodePath(path))
        except Exception as exc:
            depth = getattr(exc, "depth", 0)
            raise PathMismatch(
                f"sidecar node {pos} path {path} does not resolve at depth {depth}",
                depth=depth,
            ) from None
        _require(node_id not in rects, f"sidecar node {pos} repeats path {path}")
        rect = entry.get("rect")
        _require(
            isinstance(rect, list) and len(rect) == 4 and all(_is_number(v) for v in rect),
            f"sidecar node {pos} rect must be [x, y, w, h]",
        )
        _require(
            rect[2] >= 0 and rect[3] >= 0,
            f"sidecar node {pos} rect has negative dimensions",
        )
        size = entry.get("fontSize")
        _require(
            _is_number(size) and size > 0,
            f"sidecar node {pos} fontSize must be a positive number",
        )
        rects[node_id] = Rect(float(rect[0]), float(rect[1]), float(rect[2]), float(rect[3]))
        fonts[node_id] = float(size)

    # Unmeasured nodes inherit the nearest measured ancestor's font size
    # (document order resolves the parent first), so text under a measured
    # element is still counted at that element's size.
    for nid in tree.walk():
        if nid not in rects:
            rects[nid] = ZERO_RECT
        if nid not in fonts:
            parent = tree.nodes[nid].parent
            fonts[nid] = (
                fonts[parent] if parent is not None else BASE_FONT_SIZE
            )
    return Geometry(
        rects=rects,
        font_sizes=fonts,
        viewport=viewport,
        source="sidecar",
    )


def sidecar_rendered_html(data: bytes) -> bytes | None:
    """The browser-serialized DOM embedded in a sidecar, when present."""
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError):
        return None
    if isinstance(doc, dict) and isinstance(doc.get("renderedHtml"), str):
        return doc["renderedHtml"].encode("utf-8")
    return None
