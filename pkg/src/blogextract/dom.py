"""Error-tolerant HTML parsing into an immutable, path-addressable DOM tree.

The parser accepts the kind of HTML that real blog pages ship: unclosed
paragraphs, stray end tags, missing ``<html>``/``<head>``/``<body>``,
unquoted attributes.  It never raises on malformed markup; the only parse
error is :class:`~blogextract.errors.EmptyDocument` for input with no
element content at all.

Script/style/noscript/template subtrees and comments are kept in the tree
(so node paths stay aligned with what a real browser would produce) but are
flagged ``non_rendered`` and contribute nothing to rendered text.
"""

from __future__ import annotations

import codecs
import html as _html
import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import EmptyDocument, InvalidPath

ELEMENT = "element"
TEXT = "text"

VOID_TAGS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
})

# Content of these is captured verbatim, never tokenized as markup.
RAW_TEXT_TAGS = frozenset({"script", "style", "textarea", "title"})

# These subtrees exist in the tree but do not render.
NON_RENDERED_TAGS = frozenset({"script", "style", "noscript", "template", "head"})

# Tags that belong in <head>; anything else forces <body> open.
_HEAD_TAGS = frozenset({
    "base", "link", "meta", "title", "style", "script", "noscript", "template",
})

# An open <p> is implicitly closed when one of these starts.
_P_CLOSERS = frozenset({
    "address", "article", "aside", "blockquote", "div", "dl", "fieldset",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
    "h6", "header", "hr", "main", "nav", "ol", "p", "pre", "section",
    "table", "ul",
})

_WS = " \t\r\n\f"
_WS_RE = re.compile(r"\s+")
_TAG_NAME_RE = re.compile(r"<([a-zA-Z][-a-zA-Z0-9:]*)")
_END_TAG_RE = re.compile(r"</\s*([a-zA-Z][-a-zA-Z0-9:]*)[^>]*>")
_CHARSET_RE = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?\s*([A-Za-z0-9_.:-]+)""", re.IGNORECASE
)


@dataclass(frozen=True)
class DomNode:
    """One node of a parsed tree; immutable, addressed by integer id."""

    id: int
    parent: int | None
    children: tuple[int, ...]
    tag: str | None = None
    attrs: dict[str, str] | None = None
    text: str | None = None
    non_rendered: bool = False
    is_comment: bool = False

    @property
    def kind(self) -> str:
        return ELEMENT if self.tag is not None else TEXT

    @property
    def is_element(self) -> bool:
        return self.tag is not None

    @property
    def is_text(self) -> bool:
        return self.tag is None

    def attr(self, name: str, default: str | None = None) -> str | None:
        if self.attrs is None:
            return default
        return self.attrs.get(name, default)


@dataclass(frozen=True)
class NodePath:
    """Child-index address of a node: root is (), first child of root is (0,).

    Indices count every child node: elements, retained comments and
    non-whitespace text nodes alike, so paths can be shared with any other
    producer that walks the same tree shape.
    """

    indices: tuple[int, ...]

    def __init__(self, indices=()):  # accepts any iterable of ints
        object.__setattr__(self, "indices", tuple(int(i) for i in indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def child(self, index: int) -> "NodePath":
        return NodePath(self.indices + (index,))

    def is_ancestor_of(self, other: "NodePath") -> bool:
        """True if self is a proper ancestor of other."""
        return (
            len(self.indices) < len(other.indices)
            and other.indices[: len(self.indices)] == self.indices
        )

    def as_list(self) -> list[int]:
        return list(self.indices)


@dataclass(frozen=True)
class DomTree:
    """Arena-backed immutable tree.  ``nodes[i].id == i`` for all nodes."""

    nodes: tuple[DomNode, ...]
    root: int
    source_url: str | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> DomNode:
        return self.nodes[node_id]

    def walk(self, start: int | None = None) -> Iterator[int]:
        """Preorder iteration of node ids, starting at ``start`` (default root)."""
        stack = [self.root if start is None else start]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def elements(self, start: int | None = None) -> Iterator[int]:
        for nid in self.walk(start):
            if self.nodes[nid].is_element:
                yield nid

    def find_all(self, tag: str, start: int | None = None) -> list[int]:
        return [nid for nid in self.elements(start) if self.nodes[nid].tag == tag]

    def find(self, tag: str, start: int | None = None) -> int | None:
        for nid in self.elements(start):
            if self.nodes[nid].tag == tag:
                return nid
        return None


def detect_encoding(data: bytes) -> str:
    """Pick a text encoding: byte-order mark, then meta charset, then UTF-8."""
    if data.startswith(codecs.BOM_UTF8):
        return "utf-8-sig"
    if data.startswith(codecs.BOM_UTF16_LE) or data.startswith(codecs.BOM_UTF16_BE):
        return "utf-16"
    m = _CHARSET_RE.search(data[:2048])
    if m:
        name = m.group(1).decode("ascii", "replace")
        try:
            codecs.lookup(name)
            return name
        except LookupError:
            pass
    return "utf-8"


class _Builder:
    """Mutable tree under construction; frozen into a DomTree at the end."""

    def __init__(self) -> None:
        self.parents: list[int | None] = []
        self.children: list[list[int]] = []
        self.tags: list[str | None] = []
        self.attrs: list[dict[str, str] | None] = []
        self.texts: list[str | None] = []
        self.non_rendered: list[bool] = []
        self.is_comment: list[bool] = []
        self.stack: list[int] = []  # open element ids
        self.saw_content = False

    def _new_node(self, parent: int | None) -> int:
        nid = len(self.parents)
        self.parents.append(parent)
        self.children.append([])
        self.tags.append(None)
        self.attrs.append(None)
        self.texts.append(None)
        self.non_rendered.append(False)
        self.is_comment.append(False)
        if parent is not None:
            self.children[parent].append(nid)
        return nid

    def _open(self, tag: str, attrs: dict[str, str] | None, push: bool) -> int:
        parent = self.stack[-1] if self.stack else None
        nid = self._new_node(parent)
        self.tags[nid] = tag
        self.attrs[nid] = attrs or {}
        inherited = parent is not None and self.non_rendered[parent]
        self.non_rendered[nid] = inherited or tag in NON_RENDERED_TAGS
        if push:
            self.stack.append(nid)
        return nid

    def _close_top(self) -> None:
        self.stack.pop()

    def _open_tags(self) -> list[str]:
        return [self.tags[nid] or "" for nid in self.stack]

    def _ensure_context(self, incoming: str | None) -> None:
        """Create implicit html/head/body and close head when content starts.

        ``incoming`` is the tag about to be inserted, or None for text,
        comments and raw content.
        """
        while True:
            open_tags = self._open_tags()
            if not open_tags:
                if incoming == "html":
                    return  # the real <html> tag will open it
                self._open("html", {}, push=True)
                continue
            if open_tags == ["html"]:
                if incoming in ("head", "body"):
                    return
                if incoming is not None and incoming in _HEAD_TAGS:
                    self._open("head", {}, push=True)
                else:
                    self._open("body", {}, push=True)
                continue
            if open_tags == ["html", "head"]:
                if incoming is None or incoming not in _HEAD_TAGS:
                    self._close_top()
                    continue
                return
            return

    def start_tag(self, tag: str, attrs: dict[str, str], self_closing: bool) -> None:
        self.saw_content = True
        if tag in ("html", "head", "body"):
            # Tolerate duplicates: merge attributes into the existing element.
            existing = next(
                (nid for nid in self.stack if self.tags[nid] == tag), None
            )
            if tag == "html" and self.stack:
                existing = self.stack[0] if self.tags[self.stack[0]] == "html" else existing
            if existing is not None:
                merged = dict(attrs)
                merged.update(self.attrs[existing] or {})
                self.attrs[existing] = merged
                return
            self._ensure_context(tag)
            self._open(tag, attrs, push=True)
            return
        self._ensure_context(tag)
        # Implicit closes for the common offenders in blog markup.
        if tag in _P_CLOSERS:
            while self.stack and self.tags[self.stack[-1]] == "p":
                self._close_top()
        if tag == "li":
            while self.stack and self.tags[self.stack[-1]] == "li":
                self._close_top()
        if tag in ("dt", "dd"):
            while self.stack and self.tags[self.stack[-1]] in ("dt", "dd"):
                self._close_top()
        if tag in ("td", "th", "tr"):
            while self.stack and self.tags[self.stack[-1]] in ("td", "th"):
                self._close_top()
            if tag == "tr":
                while self.stack and self.tags[self.stack[-1]] == "tr":
                    self._close_top()
        push = tag not in VOID_TAGS and not self_closing
        self._open(tag, attrs, push=push)

    def end_tag(self, tag: str) -> None:
        if tag in ("html", "body"):
            return  # closed implicitly at finish
        for depth in range(len(self.stack) - 1, -1, -1):
            if self.tags[self.stack[depth]] == tag:
                del self.stack[depth:]
                return
        # No matching open tag: ignore the stray end tag.

    def text(self, raw: str, *, raw_text: bool = False) -> None:
        if not raw.strip():
            return
        self.saw_content = True
        if not raw_text:
            self._ensure_context(None)
        parent = self.stack[-1] if self.stack else None
        if parent is None:
            self._ensure_context(None)
            parent = self.stack[-1]
        nid = self._new_node(parent)
        self.texts[nid] = raw if raw_text else _html.unescape(raw)
        self.non_rendered[nid] = self.non_rendered[parent]

    def comment(self, content: str) -> None:
        if not self.stack:
            self._open("html", {}, push=True)
        parent = self.stack[-1]
        nid = self._new_node(parent)
        self.texts[nid] = content
        self.non_rendered[nid] = True
        self.is_comment[nid] = True

    def finish(self, source_url: str | None) -> DomTree:
        if not self.saw_content or not self.parents:
            raise EmptyDocument("document has no element content")
        root = 0
        if self.tags[root] != "html":  # cannot happen; guard for safety
            raise EmptyDocument("document has no root element")
        nodes = tuple(
            DomNode(
                id=i,
                parent=self.parents[i],
                children=tuple(self.children[i]),
                tag=self.tags[i],
                attrs=self.attrs[i],
                text=self.texts[i],
                non_rendered=self.non_rendered[i],
                is_comment=self.is_comment[i],
            )
            for i in range(len(self.parents))
        )
        return DomTree(nodes=nodes, root=root, source_url=source_url)


def _scan_tag_body(src: str, i: int) -> tuple[dict[str, str], int, bool]:
    """Parse attributes from ``i`` (just past the tag name) to the closing '>'.

    Returns (attrs, next_index, self_closing).  Handles quoted and unquoted
    values and survives an unterminated tag at end of input.
    """
    attrs: dict[str, str] = {}
    n = len(src)
    self_closing = False
    while i < n:
        while i < n and src[i] in _WS:
            i += 1
        if i >= n:
            break
        c = src[i]
        if c == ">":
            return attrs, i + 1, self_closing
        if c == "/":
            if src.startswith("/>", i):
                return attrs, i + 2, True
            i += 1
            continue
        j = i
        while j < n and src[j] not in _WS and src[j] not in "=/>":
            j += 1
        name = src[i:j].lower()
        i = j
        while i < n and src[i] in _WS:
            i += 1
        value = ""
        if i < n and src[i] == "=":
            i += 1
            while i < n and src[i] in _WS:
                i += 1
            if i < n and src[i] in "\"'":
                quote = src[i]
                k = src.find(quote, i + 1)
                if k < 0:
                    value, i = src[i + 1 :], n
                else:
                    value, i = src[i + 1 : k], k + 1
            else:
                k = i
                while k < n and src[k] not in _WS and src[k] != ">":
                    k += 1
                value, i = src[i:k], k
        if name:
            attrs.setdefault(name, _html.unescape(value))
    return attrs, n, self_closing


def _parse_into(builder: _Builder, src: str) -> None:
    i, n = 0, len(src)
    while i < n:
        lt = src.find("<", i)
        if lt < 0:
            builder.text(src[i:])
            break
        if lt > i:
            builder.text(src[i:lt])
        if src.startswith("<!--", lt):
            end = src.find("-->", lt + 4)
            if end < 0:
                builder.comment(src[lt + 4 :])
                break
            builder.comment(src[lt + 4 : end])
            i = end + 3
            continue
        if src.startswith("<!", lt) or src.startswith("<?", lt):
            end = src.find(">", lt)
            i = n if end < 0 else end + 1
            continue
        if src.startswith("</", lt):
            m = _END_TAG_RE.match(src, lt)
            if m:
                builder.end_tag(m.group(1).lower())
                i = m.end()
            else:
                builder.text("<")
                i = lt + 1
            continue
        m = _TAG_NAME_RE.match(src, lt)
        if not m:
            builder.text("<")
            i = lt + 1
            continue
        tag = m.group(1).lower()
        attrs, i, self_closing = _scan_tag_body(src, m.end())
        builder.start_tag(tag, attrs, self_closing)
        if tag in RAW_TEXT_TAGS and not self_closing and tag not in VOID_TAGS:
            close_re = re.compile(r"</\s*%s\s*>" % re.escape(tag), re.IGNORECASE)
            m2 = close_re.search(src, i)
            if m2:
                builder.text(src[i : m2.start()], raw_text=True)
                builder.end_tag(tag)
                i = m2.end()
            else:
                builder.text(src[i:], raw_text=True)
                builder.end_tag(tag)
                i = n
    builder.stack.clear()


def parse_html(data: bytes | str, source_url: str | None = None) -> DomTree:
    """Parse an HTML byte sequence (or already-decoded string) into a DomTree.

    Whitespace-only text runs are dropped; everything else, including
    comments and script/style content, is retained.  Raises
    :class:`EmptyDocument` when the input has no element content.
    """
    if isinstance(data, bytes):
        encoding = detect_encoding(data)
        src = data.decode(encoding, errors="replace")
    else:
        src = data
    if not src.strip():
        raise EmptyDocument("document is empty")
    builder = _Builder()
    _parse_into(builder, src)
    return builder.finish(source_url)


def text_content(tree: DomTree, node_id: int) -> str:
    """Rendered text of a subtree: text nodes joined by single spaces.

    Comments and non-rendered subtrees contribute nothing.  Each retained
    text run is separated from the next by one space, then all whitespace
    runs are collapsed and the ends stripped, so every word of every
    rendered text node survives as a token.
    """
    parts: list[str] = []
    for nid in tree.walk(node_id):
        node = tree.nodes[nid]
        if node.is_text and not node.is_comment and not node.non_rendered:
            parts.append(node.text or "")
    return _WS_RE.sub(" ", " ".join(parts)).strip()


def subtree_texts(tree: DomTree) -> dict[int, str]:
    """text_content for every node, computed in one bottom-up pass."""
    out: dict[int, str] = {}
    order = list(tree.walk())
    for nid in reversed(order):
        node = tree.nodes[nid]
        if node.is_text:
            raw = "" if (node.is_comment or node.non_rendered) else (node.text or "")
            out[nid] = _WS_RE.sub(" ", raw).strip()
        else:
            joined = " ".join(
                t for t in (out[c] for c in node.children) if t
            )
            out[nid] = joined
    return out


def node_at_path(tree: DomTree, path: NodePath) -> int:
    """Resolve a child-index path from the root; InvalidPath on failure."""
    nid = tree.root
    for depth, index in enumerate(path):
        children = tree.nodes[nid].children
        if index < 0 or index >= len(children):
            raise InvalidPath(
                f"path component {index} at depth {depth} does not resolve "
                f"(node has {len(children)} children)",
                depth=depth,
            )
        nid = children[index]
    return nid


def path_of(tree: DomTree, node_id: int) -> NodePath:
    """Inverse of node_at_path: the child-index path from root to node."""
    indices: list[int] = []
    nid = node_id
    while True:
        parent = tree.nodes[nid].parent
        if parent is None:
            break
        indices.append(tree.nodes[parent].children.index(nid))
        nid = parent
    indices.reverse()
    return NodePath(indices)
