"""Labeled corpora: manifest format, label resolution and page accuracy.

A corpus is a directory of pages plus a JSON manifest.  Every page entry
names its site, its HTML file, an optional geometry sidecar, an optional
URL, and the labels: node paths of the true title and body subtrees.

Labels are validated against the candidate generator at load time.  A
title label that points at a wrapper whose text lives in a single child
(which minimality pruning removed from the candidate set) is remapped to
the surviving text-equal descendant, and the remap is recorded.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import dom, layout, pipeline
from .dom import NodePath
from .errors import MissingFile, SchemaError, UnresolvedLabel
from .layout import DEFAULT_VIEWPORT, Viewport
from .pipeline import PageAnalysis

log = logging.getLogger(__name__)

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class LabeledPage:
    page_id: str
    site_id: str
    html_path: Path
    sidecar_path: Path | None
    url: str | None
    title_paths: tuple[NodePath, ...]
    body_paths: tuple[NodePath, ...]


@dataclass
class Corpus:
    root: Path
    pages: list[LabeledPage]
    sites: list[str]  # unique, in first-seen order
    remaps: list[str] = field(default_factory=list)

    def pages_of(self, site_id: str) -> list[LabeledPage]:
        return [p for p in self.pages if p.site_id == site_id]

    def __len__(self) -> int:
        return len(self.pages)


class PageCache:
    """Parsed-and-analyzed pages, keyed by file path.

    Experiments revisit the same pages across splits, grid points and
    runs; analyses carry no model state, so one per page suffices.
    """

    def __init__(self, viewport: Viewport = DEFAULT_VIEWPORT):
        self.viewport = viewport
        self._entries: dict[str, PageAnalysis] = {}

    def analysis(self, page: LabeledPage) -> PageAnalysis:
        key = str(page.html_path)
        hit = self._entries.get(key)
        if hit is not None:
            return hit
        built = self._build(page)
        self._entries[key] = built
        return built

    def _build(self, page: LabeledPage) -> PageAnalysis:
        if not page.html_path.is_file():
            raise MissingFile(f"page file missing: {page.html_path}")
        html = page.html_path.read_bytes()
        sidecar = None
        if page.sidecar_path is not None:
            if not page.sidecar_path.is_file():
                raise MissingFile(f"sidecar file missing: {page.sidecar_path}")
            sidecar = page.sidecar_path.read_bytes()
        tree, geometry = pipeline.build_page(
            pipeline.PageInput(
                html=html, url=page.url, sidecar=sidecar, viewport=self.viewport
            )
        )
        return pipeline.analyze_page(tree, geometry)

    def store(self, page: LabeledPage, analysis: PageAnalysis) -> None:
        self._entries[str(page.html_path)] = analysis


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _parse_path_list(raw, page_id: str, kind: str) -> list[NodePath]:
    _require(
        isinstance(raw, list),
        f"page {page_id}: {kind} labels must be a list of paths",
    )
    out = []
    for item in raw:
        _require(
            isinstance(item, list)
            and all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in item),
            f"page {page_id}: each {kind} label must be a list of non-negative ints",
        )
        out.append(NodePath(item))
    return out


def _remap_title_label(
    analysis: PageAnalysis, node_id: int, page_id: str
) -> int:
    """Map a pruned wrapper label to its surviving text-equal descendant."""
    candidate_ids = set(analysis.title_candidates.nodes)
    text = analysis.texts[node_id]
    matches = [
        nid
        for nid in analysis.tree.walk(node_id)
        if nid != node_id and nid in candidate_ids and analysis.texts[nid] == text
    ]
    if not matches:
        raise UnresolvedLabel(
            f"page {page_id}: title label is not a candidate and has no "
            f"text-equal candidate descendant"
        )
    # The deepest match is the minimal carrier the pruning kept.
    return max(matches, key=lambda nid: len(dom.path_of(analysis.tree, nid)))


def resolve_labels(
    page: LabeledPage, analysis: PageAnalysis, remaps: list[str] | None = None
) -> tuple[set[int], set[int], tuple[NodePath, ...], tuple[NodePath, ...]]:
    """Node ids of a page's labels, remapping pruned title wrappers.

    Returns (title_ids, body_ids, title_paths, body_paths) where the paths
    reflect any remapping applied.
    """
    tree = analysis.tree
    title_ids: list[int] = []
    title_paths: list[NodePath] = []
    candidate_ids = set(analysis.title_candidates.nodes)
    for path in page.title_paths:
        try:
            nid = dom.node_at_path(tree, path)
        except Exception:
            raise UnresolvedLabel(
                f"page {page.page_id}: title label path {path.as_list()} "
                f"does not resolve"
            ) from None
        if nid not in candidate_ids:
            mapped = _remap_title_label(analysis, nid, page.page_id)
            record = (
                f"{page.page_id}: title label {path.as_list()} remapped to "
                f"{dom.path_of(tree, mapped).as_list()}"
            )
            if remaps is not None:
                remaps.append(record)
            log.info("%s", record)
            nid = mapped
        title_ids.append(nid)
        title_paths.append(dom.path_of(tree, nid))

    body_candidate_ids = set(analysis.body_candidates.nodes)
    body_ids: list[int] = []
    body_paths: list[NodePath] = []
    for path in page.body_paths:
        try:
            nid = dom.node_at_path(tree, path)
        except Exception:
            raise UnresolvedLabel(
                f"page {page.page_id}: body label path {path.as_list()} "
                f"does not resolve"
            ) from None
        if nid not in body_candidate_ids:
            raise UnresolvedLabel(
                f"page {page.page_id}: body label path {path.as_list()} "
                f"is not a div/span/p candidate"
            )
        body_ids.append(nid)
        body_paths.append(path)
    return set(title_ids), set(body_ids), tuple(title_paths), tuple(body_paths)


def load_corpus(
    manifest_path: str | Path,
    *,
    validate: bool = True,
    cache: PageCache | None = None,
) -> Corpus:
    """Read a manifest and (by default) validate every label on every page.

    Validation parses each page, so passing a shared ``cache`` lets later
    experiment runs reuse the work.  Labels remapped during validation are
    rewritten in the returned corpus and recorded in ``corpus.remaps``.
    """
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / "manifest.json"
    if not manifest_path.is_file():
        raise MissingFile(f"manifest not found: {manifest_path}")
    try:
        doc = json.loads(manifest_path.read_bytes())
    except ValueError as exc:
        raise SchemaError(f"manifest is not valid JSON: {exc}") from None
    _require(isinstance(doc, dict), "manifest must be a JSON object")
    _require(
        doc.get("v") == MANIFEST_VERSION,
        f"unsupported manifest version {doc.get('v')!r}",
    )
    entries = doc.get("pages")
    _require(isinstance(entries, list), "manifest pages must be a list")

    root = manifest_path.parent
    pages: list[LabeledPage] = []
    sites: list[str] = []
    seen_ids: set[str] = set()
    for pos, entry in enumerate(entries):
        _require(isinstance(entry, dict), f"manifest page {pos} must be an object")
        page_id = entry.get("id")
        site_id = entry.get("site")
        html_rel = entry.get("html")
        _require(
            isinstance(page_id, str) and page_id != "",
            f"manifest page {pos} needs a non-empty id",
        )
        _require(page_id not in seen_ids, f"duplicate page id {page_id!r}")
        seen_ids.add(page_id)
        _require(
            isinstance(site_id, str) and site_id != "",
            f"page {page_id}: needs a non-empty site",
        )
        _require(
            isinstance(html_rel, str) and html_rel != "",
            f"page {page_id}: needs an html file path",
        )
        sidecar_rel = entry.get("sidecar")
        _require(
            sidecar_rel is None or isinstance(sidecar_rel, str),
            f"page {page_id}: sidecar must be a path or null",
        )
        url = entry.get("url")
        _require(
            url is None or isinstance(url, str),
            f"page {page_id}: url must be a string or null",
        )
        page = LabeledPage(
            page_id=page_id,
            site_id=site_id,
            html_path=root / html_rel,
            sidecar_path=(root / sidecar_rel) if sidecar_rel else None,
            url=url,
            title_paths=tuple(_parse_path_list(entry.get("titles", []), page_id, "title")),
            body_paths=tuple(_parse_path_list(entry.get("bodies", []), page_id, "body")),
        )
        pages.append(page)
        if site_id not in sites:
            sites.append(site_id)

    corpus = Corpus(root=root, pages=pages, sites=sites)
    if validate:
        cache = cache or PageCache()
        validated: list[LabeledPage] = []
        for page in corpus.pages:
            analysis = cache.analysis(page)
            _, _, title_paths, body_paths = resolve_labels(
                page, analysis, corpus.remaps
            )
            validated.append(
                LabeledPage(
                    page_id=page.page_id,
                    site_id=page.site_id,
                    html_path=page.html_path,
                    sidecar_path=page.sidecar_path,
                    url=page.url,
                    title_paths=title_paths,
                    body_paths=body_paths,
                )
            )
        corpus.pages = validated
    return corpus


def write_manifest(corpus: Corpus, manifest_path: str | Path) -> None:
    """Write a corpus back out as a manifest with paths relative to it."""
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    entries = []
    for page in corpus.pages:
        entries.append(
            {
                "id": page.page_id,
                "site": page.site_id,
                "html": page.html_path.relative_to(root).as_posix(),
                "sidecar": (
                    page.sidecar_path.relative_to(root).as_posix()
                    if page.sidecar_path
                    else None
                ),
                "url": page.url,
                "titles": [p.as_list() for p in page.title_paths],
                "bodies": [p.as_list() for p in page.body_paths],
            }
        )
    doc = {"v": MANIFEST_VERSION, "pages": entries}
    manifest_path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def page_marks(
    page: LabeledPage,
    predicted_title_paths: set[tuple[int, ...]],
    predicted_body_paths: set[tuple[int, ...]],
) -> tuple[bool, bool]:
    """(titles exactly right, bodies exactly right) for one page."""
    want_titles = {p.indices for p in page.title_paths}
    want_bodies = {p.indices for p in page.body_paths}
    return (
        predicted_title_paths == want_titles,
        predicted_body_paths == want_bodies,
    )
