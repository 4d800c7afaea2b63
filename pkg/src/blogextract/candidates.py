"""Candidate subtrees for title and body classification.

Title candidates are the minimal subtrees carrying text: every rendered
element whose subtree contains at least one text leaf, minus wrappers whose
entire text comes from a single text-bearing element child.  Body
candidates are simply all rendered ``div``/``span``/``p`` subtrees; no
minimality pruning, because a wrapper and its only child genuinely compete
at classification time and the overlap rules decide between them.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import dom
from .dom import DomTree

BODY_CANDIDATE_TAGS = frozenset({"div", "span", "p"})

# Structural roots never stand for a post title on their own.
_STRUCTURAL_TAGS = frozenset({"html", "head", "body"})


@dataclass(frozen=True)
class CandidateSet:
    kind: str  # "title" or "body"
    nodes: tuple[int, ...]  # document order

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __contains__(self, node_id: int) -> bool:
        return node_id in set(self.nodes)


def _rendered_elements(tree: DomTree) -> list[int]:
    return [
        nid
        for nid in tree.elements()
        if not tree.node(nid).non_rendered
    ]


def title_candidates(tree: DomTree, texts: dict[int, str] | None = None) -> CandidateSet:
    """Minimal text-bearing subtrees, in document order.

    ``texts`` may be a precomputed :func:`blogextract.dom.subtree_texts`
    map to avoid recomputation; callers that already walked the tree pass
    it in.
    """
    if texts is None:
        texts = dom.subtree_texts(tree)
    chosen: list[int] = []
    for nid in _rendered_elements(tree):
        node = tree.node(nid)
        if node.tag in _STRUCTURAL_TAGS:
            continue
        if not texts[nid]:
            continue
        textful_children = [
            c
            for c in node.children
            if tree.node(c).is_element and texts[c]
        ]
        if len(textful_children) == 1 and texts[textful_children[0]] == texts[nid]:
            continue  # pure wrapper: the child is the minimal carrier
        chosen.append(nid)
    return CandidateSet(kind="title", nodes=tuple(chosen))


def body_candidates(tree: DomTree) -> CandidateSet:
    """All rendered div/span/p subtrees, in document order."""
    chosen = [
        nid
        for nid in _rendered_elements(tree)
        if tree.node(nid).tag in BODY_CANDIDATE_TAGS
    ]
    return CandidateSet(kind="body", nodes=tuple(chosen))
