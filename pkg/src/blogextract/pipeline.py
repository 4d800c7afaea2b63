"""Two-stage extraction: classify title candidates, then body candidates.

Title candidates are featurized and scored first; the accepted title
blocks parameterize the body features (relative position features), and
body candidates are scored second.  Overlaps among positives are resolved
structurally: for titles the deepest positive wins, for bodies the
outermost positive wins.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import candidates as candidates_mod
from . import dom, features, layout
from .dom import DomTree, NodePath
from .errors import SchemaMismatch
from .features import TitleBlock
from .layout import DEFAULT_VIEWPORT, Geometry, Viewport
from .svm import SvmModel

log = logging.getLogger(__name__)

TITLE_SCHEMA_ID = "title_v1"
BODY_SCHEMA_ID = "body_v1"


@dataclass(frozen=True)
class PageInput:
    """One page to extract from.

    When ``sidecar`` is given, geometry comes from it instead of the
    heuristic layout, and its embedded rendered HTML (if any) replaces
    ``html`` so node paths line up with what the browser measured.
    """

    html: bytes
    url: str | None = None
    sidecar: bytes | None = None
    viewport: Viewport = DEFAULT_VIEWPORT


@dataclass(frozen=True)
class ExtractedBlock:
    path: NodePath
    text: str


@dataclass
class ExtractionResult:
    titles: list[ExtractedBlock]
    bodies: list[ExtractedBlock]
    diagnostics: dict


@dataclass
class PageAnalysis:
    """Everything about a page that does not depend on any model."""

    tree: DomTree
    geometry: Geometry
    texts: dict[int, str]
    title_nodes: list[int]  # classifiable title candidates, document order
    title_X: np.ndarray  # (len(title_nodes), 8)
    body_nodes: list[int]  # classifiable body candidates, document order
    title_candidates: candidates_mod.CandidateSet
    body_candidates: candidates_mod.CandidateSet

    def body_X(self, titles: list[TitleBlock]) -> np.ndarray:
        return features.body_matrix(
            self.tree, self.geometry, self.body_nodes, titles, texts=self.texts
        )


def analyze_page(tree: DomTree, geometry: Geometry) -> PageAnalysis:
    """Candidates and title features for a parsed, measured page.

    Candidates whose rect is missing or has zero area cannot be drawn on
    the page, so they are excluded from classification here.
    """
    texts = dom.subtree_texts(tree)
    title_set = candidates_mod.title_candidates(tree, texts)
    body_set = candidates_mod.body_candidates(tree)

    def classifiable(node_id: int) -> bool:
        rect = geometry.rect(node_id)
        return rect is not None and rect.area > 0

    title_nodes = [n for n in title_set if classifiable(n)]
    body_nodes = [n for n in body_set if classifiable(n)]
    title_X = features.title_matrix(tree, geometry, title_nodes, texts=texts)
    return PageAnalysis(
        tree=tree,
        geometry=geometry,
        texts=texts,
        title_nodes=title_nodes,
        title_X=title_X,
        body_nodes=body_nodes,
        title_candidates=title_set,
        body_candidates=body_set,
    )


def _check_schemas(title_model: SvmModel, body_model: SvmModel) -> None:
    if title_model.schema_id != TITLE_SCHEMA_ID:
        raise SchemaMismatch(
            f"title model has schema {title_model.schema_id!r}, "
            f"expected {TITLE_SCHEMA_ID!r}"
        )
    if body_model.schema_id != BODY_SCHEMA_ID:
        raise SchemaMismatch(
            f"body model has schema {body_model.schema_id!r}, "
            f"expected {BODY_SCHEMA_ID!r}"
        )


def _keep_deepest(tree: DomTree, nodes: list[int]) -> list[int]:
    """Drop every node that is a proper ancestor of another in the list."""
    paths = {n: dom.path_of(tree, n) for n in nodes}
    return [
        n
        for n in nodes
        if not any(
            m != n and paths[n].is_ancestor_of(paths[m]) for m in nodes
        )
    ]


def _keep_outermost(tree: DomTree, nodes: list[int]) -> list[int]:
    """Drop every node that is a proper descendant of another in the list."""
    paths = {n: dom.path_of(tree, n) for n in nodes}
    return [
        n
        for n in nodes
        if not any(
            m != n and paths[m].is_ancestor_of(paths[n]) for m in nodes
        )
    ]


def predict_title_nodes(
    analysis: PageAnalysis, title_model: SvmModel
) -> tuple[list[int], int]:
    """Accepted title nodes (document order) and the raw positive count."""
    if title_model.schema_id != TITLE_SCHEMA_ID:
        raise SchemaMismatch(
            f"title model has schema {title_model.schema_id!r}, "
            f"expected {TITLE_SCHEMA_ID!r}"
        )
    if not len(analysis.title_nodes):
        return [], 0
    scores = title_model.decision_values(analysis.title_X)
    positive = [n for n, v in zip(analysis.title_nodes, scores) if v > 0]
    return _keep_deepest(analysis.tree, positive), len(positive)


def title_blocks_for(analysis: PageAnalysis, nodes: list[int]) -> list[TitleBlock]:
    return [TitleBlock(n, analysis.geometry.rects[n]) for n in nodes]


def predict_body_nodes(
    analysis: PageAnalysis,
    body_model: SvmModel,
    title_blocks: list[TitleBlock],
) -> tuple[list[int], int]:
    """Accepted body nodes (document order) and the raw positive count."""
    if body_model.schema_id != BODY_SCHEMA_ID:
        raise SchemaMismatch(
            f"body model has schema {body_model.schema_id!r}, "
            f"expected {BODY_SCHEMA_ID!r}"
        )
    if not len(analysis.body_nodes):
        return [], 0
    scores = body_model.decision_values(analysis.body_X(title_blocks))
    positive = [n for n, v in zip(analysis.body_nodes, scores) if v > 0]
    return _keep_outermost(analysis.tree, positive), len(positive)


def extract_from_analysis(
    analysis: PageAnalysis,
    title_model: SvmModel,
    body_model: SvmModel,
) -> ExtractionResult:
    _check_schemas(title_model, body_model)
    tree = analysis.tree

    title_kept, title_positive = predict_title_nodes(analysis, title_model)
    title_blocks = title_blocks_for(analysis, title_kept)
    body_kept, body_positive = predict_body_nodes(
        analysis, body_model, title_blocks
    )

    def blocks(nodes: list[int]) -> list[ExtractedBlock]:
        return [
            ExtractedBlock(path=dom.path_of(tree, n), text=analysis.texts[n])
            for n in nodes
        ]

    return ExtractionResult(
        titles=blocks(title_kept),
        bodies=blocks(body_kept),
        diagnostics={
            "title_candidates": len(analysis.title_nodes),
            "title_positive": title_positive,
            "title_kept": len(title_kept),
            "body_candidates": len(analysis.body_nodes),
            "body_positive": body_positive,
            "body_kept": len(body_kept),
            "geometry_source": analysis.geometry.source,
        },
    )


def build_page(page: PageInput) -> tuple[DomTree, Geometry]:
    """Parse a page and measure it from its chosen geometry source."""
    html = page.html
    if page.sidecar is not None:
        rendered = layout.sidecar_rendered_html(page.sidecar)
        if rendered is not None:
            html = rendered
    tree = dom.parse_html(html, source_url=page.url)
    if page.sidecar is not None:
        geometry = layout.load_sidecar(page.sidecar, tree)
    else:
        geometry = layout.estimate_layout(tree, page.viewport)
    return tree, geometry


def extract(
    page: PageInput,
    title_model: SvmModel,
    body_model: SvmModel,
) -> ExtractionResult:
    """Titles and bodies of one page, in document order."""
    _check_schemas(title_model, body_model)
    tree, geometry = build_page(page)
    if (
        title_model.viewport.width != geometry.viewport.width
        or title_model.viewport.height != geometry.viewport.height
    ):
        log.warning(
            "model was trained at %dx%d but page is measured at %dx%d",
            title_model.viewport.width,
            title_model.viewport.height,
            geometry.viewport.width,
            geometry.viewport.height,
        )
    analysis = analyze_page(tree, geometry)
    return extract_from_analysis(analysis, title_model, body_model)


def result_to_json(result: ExtractionResult, *, url: str | None = None) -> dict:
    """JSON-ready dict with a stable field order."""
    doc: dict = {}
    if url is not None:
        doc["url"] = url
    doc["titles"] = [
        {"path": b.path.as_list(), "text": b.text} for b in result.titles
    ]
    doc["bodies"] = [
        {"path": b.path.as_list(), "text": b.text} for b in result.bodies
    ]
    doc["diagnostics"] = dict(sorted(result.diagnostics.items()))
    return doc
