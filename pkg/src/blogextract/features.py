"""Spatial and content features for title and body candidates.

Title candidates are described by where they sit relative to the viewport
center, how large their text is drawn, how long it is, what kind of link
they carry and whether they end in a title-style mark.  Body candidates
additionally get features relative to the already-identified title blocks:
vertical gaps to the nearest title above and below, and how far the nearest
title's horizontal center falls outside the candidate's span.  Pages with
no identified titles use a sentinel of +2.0 for the relative features,
well outside their natural [0, 1] range.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urljoin, urlparse

import numpy as np

from . import dom
from .dom import DomTree
from .errors import MissingGeometry
from .layout import BASE_FONT_SIZE, Geometry, Rect, Viewport, normalized_center

NO_TITLE_SENTINEL = 2.0

LINK_NONE = "no_link"
LINK_INTERNAL = "internal"
LINK_EXTERNAL = "external"

TITLE_FEATURE_NAMES = (
    "cx", "cy", "font_size", "title_len",
    "link_none", "link_internal", "link_external", "end_with_mark",
)
BODY_FEATURE_NAMES = (
    "widthper", "rel_v_above", "rel_v_below", "rel_h",
    "cx", "cy", "body_len", "marks_num", "ends_ellipsis",
)

# Punctuation counted by marks_num: common ASCII marks plus their
# full-width forms used in CJK text.
PUNCTUATION_MARKS = frozenset(
    '.,;:!?"\'()' + "。，、；：！？"
    + "“”‘’（）…"
)

# Marks that end a title-style line: colon, semicolon, full stop, plus
# their full-width forms.
_TITLE_END_MARKS = (":", ";", ".", "：", "；", "。", "．")

_ELLIPSES = ("...", "…")

# Script ranges whose characters count as one word each (no spaces between
# words): CJK ideographs and Japanese kana.
_CJK_RANGES = (
    (0x3040, 0x30FF),   # hiragana, katakana
    (0x3400, 0x4DBF),   # CJK extension A
    (0x4E00, 0x9FFF),   # CJK unified ideographs
    (0xF900, 0xFAFF),   # CJK compatibility ideographs
)

# Country-code TLDs that register names at the second level; needed so
# "blog.example.com.cn" and "www.example.com.cn" compare equal.
_SECOND_LEVEL_SUFFIXES = frozenset({
    "co.uk", "org.uk", "ac.uk", "gov.uk", "net.uk",
    "com.cn", "net.cn", "org.cn", "gov.cn", "edu.cn",
    "com.au", "net.au", "org.au", "co.jp", "ne.jp", "or.jp",
    "co.kr", "or.kr", "com.tw", "org.tw", "com.hk",
    "com.br", "com.mx", "co.in", "co.nz",
})


def _is_cjk(ch: str) -> bool:
    code = ord(ch)
    return any(lo <= code <= hi for lo, hi in _CJK_RANGES)


def count_words(text: str) -> int:
    """Words in mixed-script text.

    Space-separated tokens containing at least one alphanumeric character
    count as one word each; CJK ideographs and kana count as one word per
    character, since those scripts do not separate words with spaces.
    """
    cjk_chars = sum(1 for ch in text if _is_cjk(ch))
    word_tokens = sum(
        1
        for token in text.split()
        if any(ch.isalnum() and not _is_cjk(ch) for ch in token)
    )
    return cjk_chars + word_tokens


def count_marks(text: str) -> int:
    """Occurrences of punctuation marks, ASCII and full-width alike."""
    return sum(1 for ch in text if ch in PUNCTUATION_MARKS)


def ends_with_title_mark(text: str) -> bool:
    return text.endswith(_TITLE_END_MARKS)


def ends_with_ellipsis(text: str) -> bool:
    return text.endswith(_ELLIPSES)


def _registrable_domain(host: str) -> str:
    labels = host.lower().rstrip(".").split(".")
    if len(labels) <= 2:
        return ".".join(labels)
    if ".".join(labels[-2:]) in _SECOND_LEVEL_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


def classify_link(tree: DomTree, node_id: int, source_url: str | None = None) -> str:
    """Link kind of a subtree: the first anchor with an href decides.

    Without a source URL there is no notion of "same site", so any link is
    external.  A link to the same registrable domain is internal.
    """
    if source_url is None:
        source_url = tree.source_url
    for nid in tree.walk(node_id):
        node = tree.nodes[nid]
        if not node.is_element or node.non_rendered or node.tag != "a":
            continue
        href = node.attr("href")
        if href is None:
            continue
        return _classify_href(href, source_url)
    return LINK_NONE


def _classify_href(href: str, source_url: str | None) -> str:
    if source_url is None:
        return LINK_EXTERNAL
    target = urljoin(source_url, href.strip())
    parsed = urlparse(target)
    host = parsed.hostname
    if host is None:
        # javascript: pseudo-links stay on the page; mailto:/tel: leave it.
        return LINK_INTERNAL if parsed.scheme == "javascript" else LINK_EXTERNAL
    base_host = urlparse(source_url).hostname
    if base_host is None:
        return LINK_EXTERNAL
    if _registrable_domain(host) == _registrable_domain(base_host):
        return LINK_INTERNAL
    return LINK_EXTERNAL


def effective_font_size(tree: DomTree, geometry: Geometry, node_id: int) -> float:
    """Largest font size at which any of the subtree's text is drawn.

    Sidecars may only carry element entries, so when no text-node sizes are
    recorded the elements that directly parent a text node stand in.
    """
    sizes: list[float] = []
    for nid in tree.walk(node_id):
        node = tree.nodes[nid]
        if node.is_text and not node.is_comment and not node.non_rendered:
            size = geometry.font_sizes.get(nid)
            if size:
                sizes.append(size)
    if not sizes:
        for nid in tree.walk(node_id):
            node = tree.nodes[nid]
            if not node.is_element or node.non_rendered:
                continue
            has_text_child = any(
                tree.nodes[c].is_text
                and not tree.nodes[c].is_comment
                and not tree.nodes[c].non_rendered
                for c in node.children
            )
            if has_text_child:
                size = geometry.font_sizes.get(nid)
                if size:
                    sizes.append(size)
    if not sizes:
        return geometry.font_sizes.get(node_id) or BASE_FONT_SIZE
    return max(sizes)


@dataclass(frozen=True)
class TitleBlock:
    """A node accepted as a title, with the rectangle it was drawn in."""

    node: int
    rect: Rect

    def __post_init__(self) -> None:
        if self.rect.area <= 0:
            raise ValueError("a title block must have a positive-area rect")


@dataclass(frozen=True)
class TitleFeatures:
    cx: float
    cy: float
    font_size: float
    title_len: float
    link_none: float
    link_internal: float
    link_external: float
    end_with_mark: float

    def as_vector(self) -> np.ndarray:
        return np.array(
            [
                self.cx, self.cy, self.font_size, self.title_len,
                self.link_none, self.link_internal, self.link_external,
                self.end_with_mark,
            ],
            dtype=np.float64,
        )


@dataclass(frozen=True)
class BodyFeatures:
    widthper: float
    rel_v_above: float
    rel_v_below: float
    rel_h: float
    cx: float
    cy: float
    body_len: float
    marks_num: float
    ends_ellipsis: float

    def as_vector(self) -> np.ndarray:
        return np.array(
            [
                self.widthper, self.rel_v_above, self.rel_v_below, self.rel_h,
                self.cx, self.cy, self.body_len, self.marks_num,
                self.ends_ellipsis,
            ],
            dtype=np.float64,
        )


def _rect_or_raise(geometry: Geometry, node_id: int) -> Rect:
    rect = geometry.rect(node_id)
    if rect is None:
        raise MissingGeometry(f"node {node_id} has no geometry entry")
    return rect


def title_features(
    tree: DomTree,
    geometry: Geometry,
    node_id: int,
    *,
    viewport: Viewport | None = None,
    text: str | None = None,
) -> TitleFeatures:
    rect = _rect_or_raise(geometry, node_id)
    vp = viewport or geometry.viewport
    center = normalized_center(rect, vp)
    if text is None:
        text = dom.text_content(tree, node_id)
    link = classify_link(tree, node_id)
    # Candidates always carry text, but punctuation-only text has zero
    # words; clamp so the length feature stays at least one.
    length = max(1, count_words(text))
    return TitleFeatures(
        cx=center.cx,
        cy=center.cy,
        font_size=effective_font_size(tree, geometry, node_id),
        title_len=float(length),
        link_none=1.0 if link == LINK_NONE else 0.0,
        link_internal=1.0 if link == LINK_INTERNAL else 0.0,
        link_external=1.0 if link == LINK_EXTERNAL else 0.0,
        end_with_mark=1.0 if ends_with_title_mark(text) else 0.0,
    )


def _nearest_above(rect: Rect, titles: list[TitleBlock]) -> TitleBlock | None:
    above = [t for t in titles if t.rect.bottom <= rect.y]
    if not above:
        return None
    return max(above, key=lambda t: t.rect.bottom)


def _nearest_below(rect: Rect, titles: list[TitleBlock]) -> TitleBlock | None:
    below = [t for t in titles if t.rect.y >= rect.bottom]
    if not below:
        return None
    return min(below, key=lambda t: t.rect.y)


def _vertical_gap(rect: Rect, title: TitleBlock) -> float:
    if title.rect.bottom <= rect.y:
        return rect.y - title.rect.bottom
    if title.rect.y >= rect.bottom:
        return title.rect.y - rect.bottom
    return 0.0


def body_features(
    tree: DomTree,
    geometry: Geometry,
    node_id: int,
    titles: list[TitleBlock],
    *,
    viewport: Viewport | None = None,
    text: str | None = None,
) -> BodyFeatures:
    rect = _rect_or_raise(geometry, node_id)
    vp = viewport or geometry.viewport
    center = normalized_center(rect, vp)
    if text is None:
        text = dom.text_content(tree, node_id)

    if titles:
        above = _nearest_above(rect, titles)
        below = _nearest_below(rect, titles)
        rel_v_above = (
            (rect.y - above.rect.bottom) / vp.height
            if above is not None
            else NO_TITLE_SENTINEL
        )
        rel_v_below = (
            (below.rect.y - rect.bottom) / vp.height
            if below is not None
            else NO_TITLE_SENTINEL
        )
        nearest = min(titles, key=lambda t: _vertical_gap(rect, t))
        tx = nearest.rect.center_x
        violation = max(0.0, rect.x - tx, tx - rect.right)
        rel_h = violation / vp.width
    else:
        rel_v_above = NO_TITLE_SENTINEL
        rel_v_below = NO_TITLE_SENTINEL
        rel_h = NO_TITLE_SENTINEL

    return BodyFeatures(
        widthper=rect.width / vp.width,
        rel_v_above=rel_v_above,
        rel_v_below=rel_v_below,
        rel_h=rel_h,
        cx=center.cx,
        cy=center.cy,
        body_len=float(count_words(text)),
        marks_num=float(count_marks(text)),
        ends_ellipsis=1.0 if ends_with_ellipsis(text) else 0.0,
    )


def title_matrix(
    tree: DomTree,
    geometry: Geometry,
    node_ids,
    *,
    viewport: Viewport | None = None,
    texts: dict[int, str] | None = None,
) -> np.ndarray:
    """Stack title feature vectors for the given nodes into an (n, 8) array."""
    rows = [
        title_features(
            tree, geometry, nid, viewport=viewport,
            text=None if texts is None else texts.get(nid),
        ).as_vector()
        for nid in node_ids
    ]
    if not rows:
        return np.empty((0, len(TITLE_FEATURE_NAMES)), dtype=np.float64)
    return np.vstack(rows)


def body_matrix(
    tree: DomTree,
    geometry: Geometry,
    node_ids,
    titles: list[TitleBlock],
    *,
    viewport: Viewport | None = None,
    texts: dict[int, str] | None = None,
) -> np.ndarray:
    """Stack body feature vectors for the given nodes into an (n, 9) array."""
    rows = [
        body_features(
            tree, geometry, nid, titles, viewport=viewport,
            text=None if texts is None else texts.get(nid),
        ).as_vector()
        for nid in node_ids
    ]
    if not rows:
        return np.empty((0, len(BODY_FEATURE_NAMES)), dtype=np.float64)
    return np.vstack(rows)
