"""Parser behavior pinned against hand-derived tree shapes."""

import pytest

from blogextract import dom
from blogextract.dom import NodePath, parse_html
from blogextract.errors import EmptyDocument, InvalidPath

MESSY = b"""<!doctype html>
<html><head><title>T</title><script>var x = "<p>not markup</p>";</script></head>
<body>
<!-- note -->
<div id=main class="post wide">
<h2><a href="/a">Linked &amp; titled</a></h2>
<p>First para
<p>Second <span>inner</span> tail
</div>
</body></html>"""


def tags(tree):
    return [tree.nodes[i].tag for i in tree.walk()]


def test_unclosed_paragraphs_shape():
    # <p>a<p>b: the second <p> implicitly closes the first, both under an
    # implicit body.  Node ids are assigned in document order.
    tree = parse_html(b"<p>a<p>b")
    assert tags(tree) == ["html", "body", "p", None, "p", None]
    html, body, p1, a, p2, b = (tree.nodes[i] for i in range(6))
    assert html.children == (1,)
    assert body.children == (2, 4)
    assert p1.children == (3,) and a.text == "a"
    assert p2.children == (5,) and b.text == "b"
    assert a.parent == 2 and b.parent == 4


def test_head_synthesized_then_closed_by_content():
    tree = parse_html(b"<title>x</title>Hello")
    assert tags(tree) == ["html", "head", "title", None, "body", None]
    assert tree.nodes[3].text == "x"
    assert tree.nodes[3].non_rendered  # inherited from head
    assert tree.nodes[5].text == "Hello"
    assert not tree.nodes[5].non_rendered


def test_empty_inputs_raise():
    for raw in (b"", b"   \n\t", b"<!-- only a comment -->", b"<!doctype html>"):
        with pytest.raises(EmptyDocument):
            parse_html(raw)


def test_script_content_is_raw_and_non_rendered():
    tree = parse_html(MESSY)
    script = tree.find("script")
    assert script is not None
    assert tree.nodes[script].non_rendered
    # the markup inside the script was captured verbatim, not parsed
    (text_id,) = tree.nodes[script].children
    assert '<p>not markup</p>' in tree.nodes[text_id].text
    assert len(tree.find_all("p")) == 2


def test_comments_kept_but_silent():
    tree = parse_html(MESSY)
    comments = [n for n in tree.nodes if n.is_comment]
    assert len(comments) == 1
    assert "note" in comments[0].text
    assert comments[0].non_rendered
    assert "note" not in dom.text_content(tree, tree.root)


def test_attribute_forms():
    tree = parse_html(MESSY)
    div = tree.find("div")
    assert tree.nodes[div].attr("id") == "main"  # unquoted value
    assert tree.nodes[div].attr("class") == "post wide"
    assert tree.nodes[div].attr("missing") is None
    assert tree.nodes[div].attr("missing", "x") == "x"
    first_wins = parse_html(b"<div a=1 a=2>t</div>")
    assert first_wins.nodes[first_wins.find("div")].attr("a") == "1"
    entities = parse_html(b'<a href="/p?q=1&amp;r=2">x</a>')
    assert entities.nodes[entities.find("a")].attr("href") == "/p?q=1&r=2"


def test_text_entities_unescaped():
    tree = parse_html(MESSY)
    a = tree.find("a")
    assert dom.text_content(tree, a) == "Linked & titled"


def test_rendered_text():
    tree = parse_html(MESSY)
    div = tree.find("div")
    assert dom.text_content(tree, div) == (
        "Linked & titled First para Second inner tail"
    )


def test_every_rendered_word_survives_in_order():
    tree = parse_html(MESSY)
    want = []
    for nid in tree.walk():
        node = tree.nodes[nid]
        if node.is_text and not node.is_comment and not node.non_rendered:
            want.extend(node.text.split())
    assert dom.text_content(tree, tree.root).split() == want


def test_subtree_texts_matches_per_node_walks():
    tree = parse_html(MESSY)
    texts = dom.subtree_texts(tree)
    for nid in tree.walk():
        assert texts[nid] == dom.text_content(tree, nid)


def test_path_round_trip_every_node():
    tree = parse_html(MESSY)
    for nid in tree.walk():
        assert dom.node_at_path(tree, dom.path_of(tree, nid)) == nid
    assert dom.path_of(tree, tree.root).as_list() == []


def test_walk_is_document_order():
    tree = parse_html(MESSY)
    assert list(tree.walk()) == list(range(len(tree)))


def test_invalid_path_reports_depth():
    tree = parse_html(b"<p>a</p>")
    with pytest.raises(InvalidPath) as info:
        dom.node_at_path(tree, NodePath([9]))
    assert info.value.depth == 0
    with pytest.raises(InvalidPath) as info:
        dom.node_at_path(tree, NodePath([0, 0, 0, 9]))
    assert info.value.depth == 3


def test_node_path_helpers():
    p = NodePath([1, 2])
    assert p.child(0).as_list() == [1, 2, 0]
    assert p.is_ancestor_of(NodePath([1, 2, 5]))
    assert not p.is_ancestor_of(p)
    assert not p.is_ancestor_of(NodePath([1, 3, 0]))
    assert len(NodePath()) == 0


def test_stray_end_tags_ignored():
    tree = parse_html(b"</div><b>bold</i> text</b> tail")
    assert dom.text_content(tree, tree.root) == "bold text tail"


def test_duplicate_html_body_merge_attributes():
    tree = parse_html(b'<html lang=en><body class=a>x<body id=b>y</body></html>')
    assert tree.nodes[tree.root].attr("lang") == "en"
    body = tree.find("body")
    assert tree.nodes[body].attr("class") == "a"
    assert tree.nodes[body].attr("id") == "b"
    assert dom.text_content(tree, tree.root) == "x y"


def test_meta_charset_detection():
    raw = '<meta charset=gbk><p>你好</p>'.encode("gbk")
    assert dom.detect_encoding(raw) == "gbk"
    tree = parse_html(raw)
    assert dom.text_content(tree, tree.root) == "你好"


def test_bom_detection():
    raw = "<p>hi</p>".encode("utf-16")
    assert dom.detect_encoding(raw) == "utf-16"
    tree = parse_html(raw)
    assert dom.text_content(tree, tree.root) == "hi"


def test_unterminated_markup_survives():
    tree = parse_html(b"<div><p>text <a href='x")
    assert dom.text_content(tree, tree.root) == "text"
    tree = parse_html(b"<p>1 < 2 and 3 > 2")
    assert "1" in dom.text_content(tree, tree.root)
