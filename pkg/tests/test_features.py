"""Feature definitions pinned by hand-computed cases."""

import numpy as np
import pytest

from blogextract import features
from blogextract.dom import parse_html
from blogextract.errors import MissingGeometry
from blogextract.features import (
    LINK_EXTERNAL,
    LINK_INTERNAL,
    LINK_NONE,
    NO_TITLE_SENTINEL,
    TitleBlock,
    body_features,
    body_matrix,
    classify_link,
    count_marks,
    count_words,
    effective_font_size,
    ends_with_ellipsis,
    ends_with_title_mark,
    title_features,
    title_matrix,
)
from blogextract.layout import Geometry, Rect, Viewport, normalized_center

VP = Viewport(1280, 1024)


def geo(rects, fonts=None):
    return Geometry(
        rects={k: v for k, v in rects.items()},
        font_sizes=dict(fonts or {}),
        viewport=VP,
        source="heuristic",
    )


# -- text measures --------------------------------------------------------


def test_count_words_mixed_scripts():
    assert count_words("你好。再见！") == 4  # one word per ideograph
    assert count_words("Hello 世界 x") == 4
    assert count_words("state-of-the-art") == 1
    assert count_words("...") == 0
    assert count_words("") == 0
    assert count_words("abc123 #tag") == 2
    assert count_words("ひらがな") == 4  # kana count like ideographs


def test_count_marks_full_width_and_ascii():
    assert count_marks("Hello, world!") == 2
    assert count_marks("你好。再见！") == 2
    assert count_marks('"quoted"') == 2
    assert count_marks("（注）") == 2
    assert count_marks("wait…") == 1
    assert count_marks("plain") == 0


def test_title_end_marks():
    for text in ("Intro:", "end.", "list;", "末尾。", "全角："):
        assert ends_with_title_mark(text), text
    for text in ("end", "end…", "end!", ""):
        assert not ends_with_title_mark(text), text


def test_ellipsis_detection():
    assert ends_with_ellipsis("cut short...")
    assert ends_with_ellipsis("省略…")
    assert not ends_with_ellipsis("full stop.")
    assert not ends_with_ellipsis("..middle..")


# -- link classification ---------------------------------------------------


def page_with_link(href):
    return parse_html(
        f'<div><a href="{href}">x</a></div>'.encode(),
        source_url="http://blog.example.com/post/1",
    )


def test_classify_link_kinds():
    tree = parse_html(b"<div><p>plain</p></div>")
    assert classify_link(tree, tree.root) == LINK_NONE

    cases = {
        "/about": LINK_INTERNAL,
        "http://example.com/x": LINK_INTERNAL,  # same registrable domain
        "http://www.example.com/x": LINK_INTERNAL,
        "http://other.net/x": LINK_EXTERNAL,
        "javascript:void(0)": LINK_INTERNAL,  # stays on the page
        "mailto:someone@example.com": LINK_EXTERNAL,
    }
    for href, want in cases.items():
        tree = page_with_link(href)
        assert classify_link(tree, tree.root) == want, href


def test_second_level_country_suffixes():
    tree = parse_html(
        b'<a href="http://www.example.com.cn/x">x</a>',
        source_url="http://blog.example.com.cn/",
    )
    assert classify_link(tree, tree.root) == LINK_INTERNAL
    tree = parse_html(
        b'<a href="http://example.org.cn/x">x</a>',
        source_url="http://blog.example.com.cn/",
    )
    assert classify_link(tree, tree.root) == LINK_EXTERNAL


def test_without_source_url_links_are_external():
    tree = parse_html(b'<a href="/local">x</a>')
    assert classify_link(tree, tree.root) == LINK_EXTERNAL


def test_first_href_decides():
    tree = parse_html(
        b'<div><a>bare</a><a href="http://other.net">1</a>'
        b'<a href="/in">2</a></div>',
        source_url="http://example.com/",
    )
    assert classify_link(tree, tree.root) == LINK_EXTERNAL


# -- font size ------------------------------------------------------------


def test_effective_font_size_prefers_text_nodes():
    tree = parse_html(b"<h2><a>text</a></h2>")
    h2, a = tree.find("h2"), tree.find("a")
    text = tree.nodes[a].children[0]
    g = geo({}, fonts={h2: 24.0, a: 22.0, text: 20.0})
    assert effective_font_size(tree, g, h2) == 20.0


def test_effective_font_size_element_fallback():
    # sidecars measure elements only: the text's direct parent stands in
    tree = parse_html(b"<h2><a>text</a></h2>")
    h2, a = tree.find("h2"), tree.find("a")
    g = geo({}, fonts={h2: 24.0, a: 22.0})
    assert effective_font_size(tree, g, h2) == 22.0
    g = geo({}, fonts={h2: 24.0})
    assert effective_font_size(tree, g, h2) == 24.0
    assert effective_font_size(tree, geo({}), h2) == 16.0


# -- title features ---------------------------------------------------------


def test_title_features_hand_case():
    tree = parse_html(
        b'<h2><a href="/a">Hello world:</a></h2>',
        source_url="http://x.com/",
    )
    h2 = tree.find("h2")
    text_id = tree.nodes[tree.find("a")].children[0]
    rect = Rect(100.0, 100.0, 300.0, 30.0)
    g = geo({h2: rect}, fonts={text_id: 24.0})
    f = title_features(tree, g, h2)
    center = normalized_center(rect, VP)
    assert (f.cx, f.cy) == (center.cx, center.cy)
    assert f.font_size == 24.0
    assert f.title_len == 2.0
    assert (f.link_none, f.link_internal, f.link_external) == (0.0, 1.0, 0.0)
    assert f.end_with_mark == 1.0
    assert f.as_vector().shape == (8,)


def test_title_length_clamps_to_one():
    tree = parse_html(b"<p>!!!</p>")
    p = tree.find("p")
    g = geo({p: Rect(0, 0, 10, 10)})
    assert title_features(tree, g, p).title_len == 1.0


def test_missing_rect_raises():
    tree = parse_html(b"<p>x</p>")
    with pytest.raises(MissingGeometry):
        title_features(tree, geo({}), tree.find("p"))


# -- body features ----------------------------------------------------------


def simple_tree():
    return parse_html(b"<p>Some text, truncated here...</p>")


def test_body_features_relative_to_title_above():
    tree = simple_tree()
    p = tree.find("p")
    rect = Rect(100.0, 150.0, 300.0, 100.0)
    titles = [TitleBlock(0, Rect(100.0, 100.0, 200.0, 30.0))]
    f = body_features(tree, geo({p: rect}), p, titles)
    assert f.widthper == 300.0 / 1280.0
    assert f.rel_v_above == (150.0 - 130.0) / 1024.0
    assert f.rel_v_below == NO_TITLE_SENTINEL  # no title below
    assert f.rel_h == 0.0  # title center x=200 within [100, 400]
    assert f.body_len == 4.0
    assert f.marks_num == 4.0  # comma and three dots
    assert f.ends_ellipsis == 1.0
    assert f.as_vector().shape == (9,)


def test_body_features_between_two_titles():
    tree = simple_tree()
    p = tree.find("p")
    titles = [
        TitleBlock(0, Rect(100.0, 100.0, 200.0, 30.0)),
        TitleBlock(1, Rect(100.0, 300.0, 200.0, 30.0)),
    ]
    f = body_features(tree, geo({p: Rect(100.0, 200.0, 200.0, 50.0)}), p, titles)
    assert f.rel_v_above == (200.0 - 130.0) / 1024.0
    assert f.rel_v_below == (300.0 - 250.0) / 1024.0


def test_body_beside_title_horizontal_violation():
    tree = simple_tree()
    p = tree.find("p")
    # vertically overlapping the title, far off to the right
    titles = [TitleBlock(0, Rect(100.0, 100.0, 200.0, 30.0))]
    f = body_features(tree, geo({p: Rect(500.0, 90.0, 100.0, 20.0)}), p, titles)
    assert f.rel_v_above == NO_TITLE_SENTINEL
    assert f.rel_v_below == NO_TITLE_SENTINEL
    assert f.rel_h == (500.0 - 200.0) / 1280.0


def test_body_features_without_titles_use_sentinel():
    tree = simple_tree()
    p = tree.find("p")
    f = body_features(tree, geo({p: Rect(0.0, 0.0, 100.0, 20.0)}), p, [])
    assert (f.rel_v_above, f.rel_v_below, f.rel_h) == (
        NO_TITLE_SENTINEL, NO_TITLE_SENTINEL, NO_TITLE_SENTINEL
    )
    assert f.widthper == 100.0 / 1280.0


def test_title_block_requires_area():
    with pytest.raises(ValueError):
        TitleBlock(0, Rect(0.0, 0.0, 0.0, 10.0))


# -- matrices ---------------------------------------------------------------


def test_matrices_stack_rows():
    tree = parse_html(b"<div><p>one two</p><p>three</p></div>")
    p1, p2 = tree.find_all("p")
    g = geo({p1: Rect(0, 0, 100, 20), p2: Rect(0, 30, 100, 20)})
    tm = title_matrix(tree, g, [p1, p2])
    assert tm.shape == (2, 8)
    assert np.array_equal(tm[0], title_features(tree, g, p1).as_vector())
    bm = body_matrix(tree, g, [p1, p2], [])
    assert bm.shape == (2, 9)
    assert np.array_equal(bm[1], body_features(tree, g, p2, []).as_vector())
    assert title_matrix(tree, g, []).shape == (0, 8)
    assert body_matrix(tree, g, [], []).shape == (0, 9)
