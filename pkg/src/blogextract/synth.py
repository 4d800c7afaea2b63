"""Synthetic labeled blog corpus generator.

Nine hand-curated site templates span the axes real blog sites differ on:
index pages with several posts laid out flat versus permalink pages with
one wrapped post, title markup (h1/h2/h3/linked anchors), fonts, column
widths and offsets, sidebars, ad placement, Latin vs CJK text, truncated
bodies ending in ellipses, meta lines, and intro blocks above the first
post.  Every site
also carries "variant" page styles (an unlinked pinned title, colon-ended
titles, unusually short or long bodies, extra-wide ads) at a fixed
within-site rate, so that small training samples from a site are likely to
miss them while larger samples cover them.

Labels are derived by matching the generated title and body texts against
the candidate sets of the fully parsed and measured page, so every label
is a real candidate by construction and generation fails loudly if a page
turns out ambiguous.

Generation is deterministic: the same seed and parameters produce
byte-identical files and manifest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from . import dom, layout, pipeline
from .corpus import Corpus, LabeledPage, PageCache, write_manifest
from .layout import DEFAULT_VIEWPORT, Viewport

_LATIN_WORDS = (
    "about above acorn afternoon almost amber answer apple archive autumn "
    "bakery balance basket bicycle bird blanket bottle bread bridge bright "
    "brown cabin camera candle canvas care carpet cellar chalk chapter "
    "cinnamon circle city clay clock cloud coast coffee cold copper corner "
    "cotton creek curious dark december diary distance door draft dream "
    "dust early echo evening fabric familiar farm feather fence field first "
    "flood floor forest found fresh friday garden gentle ginger glass "
    "golden gravel green grey hammer harbor hearth heavy hill hollow home "
    "honey hour house idea india iron island january journal journey "
    "kitchen lantern late leaf letter library light lilac linen little "
    "local long lost loud low machine maple market meadow memory midnight "
    "mild mill minute mirror mist monday morning mountain museum music "
    "narrow nearly night north notebook notes ocean october old open "
    "orange orchard other oven paint pantry paper patient pebble pencil "
    "photo pine plain plan pocket porch postcard pottery quiet rain "
    "reading recipe record repair river road roast room rust saturday "
    "scarf school season second sentence september shadow shelf shore "
    "silver simple sketch slate slow small smoke snow soft sound south "
    "spring station stone storm story street string studio mellow summer "
    "sunday sunlight supper sweater table tea thread thursday ticket "
    "timber tiny tomorrow tower town train travel tuesday under valley "
    "velvet village vine walk warm water weather wednesday weekly west "
    "wheat whisper window winter wood wool workshop yellow yesterday"
).split()

_CJK_CHARS = (
    "的一是在不了有和人这中大为上个国我以要他时来用们生到作地于出就分对"
    "成会可主发年动同工也能下过子说产种面而方后多定行学法所民得经十三之"
    "进着等部度家电力里如水化高自二理起小物现实加量都两体制机当使点从业"
    "本去把性好应开它合还因由其些然前外天四日那社义事平形相全表间样与关"
    "各重新线内数正心反你明看原又么利比或但质气第向道命此变条只没结解问"
    "意建月公无系军很情者最立代想已通并提直题山风雨雪云星花草树木春夏秋"
    "冬晨昏夜路桥河湖海岛城乡书画茶饭笔墨纸砚"
)

_NAV_LATIN = ("Home", "About", "Archive", "Contact", "Links", "Gallery", "Feed")
_NAV_CJK = ("首页", "关于", "归档", "联系", "友链", "相册")

_SIDEBAR_HEADINGS_LATIN = ("Categories", "Archives", "Recent Posts", "Blogroll")
_SIDEBAR_HEADINGS_CJK = ("分类目录", "文章存档", "最新文章", "友情链接")

_AUTHORS_LATIN = (
    "jordan", "casey", "alex", "sam", "taylor", "morgan", "riley", "quinn",
)
_AUTHORS_CJK = ("小林", "王芳", "陈晨", "李雷", "韩梅")

_SITE_NAME_SUFFIXES = (
    "Chronicle", "Notebook", "Dispatch", "Journal", "Letters",
    "Gazette", "Almanac", "Register", "Weekly",
)

_AD_NETWORKS = ("adservice-hub.net", "clickbanner-media.com", "promo-reach.org")

_ENGINES = ("WordMill 2.8", "BlogCraft", "PressKit 1.4")


@dataclass(frozen=True)
class SiteTemplate:
    site_id: str
    domain: str
    lang: str  # "latin" or "cjk"
    title_tag: str  # "h1", "h2", "h3", or "a" (anchor inside a plain div)
    title_font: int | None  # inline font-size on the title element
    title_link: str  # "internal" or "none"
    header_font: int
    main_width: int
    main_margin: int
    sidebar: tuple[int, int] | None  # (margin-left, width)
    body_tag: str  # "p", "div" or "span"
    body_len: str  # "short" (excerpts), "normal" or "long"; fixed per site
    wrap_posts: bool  # each post inside its own div (permalink style)
    posts: tuple[int, int] | None  # per-page post count; None = generator default
    ellipsis_rate: float
    intro_rate: float
    ad_rate: float
    variants: tuple[tuple[str, float], ...]


# The nine base sites.  Index-style sites lay posts out flat in the main
# column (title, meta, entry as siblings); permalink-style sites carry a
# single post wrapped in its own div.  Fonts are chosen so that, within
# a site, post titles never share a font size with header or sidebar
# noise.
TEMPLATES: tuple[SiteTemplate, ...] = (
    SiteTemplate(
        site_id="alpha", domain="www.alpha-chronicle.com", lang="latin",
        title_tag="h2", title_font=None, title_link="internal",
        header_font=30, main_width=720, main_margin=40, sidebar=(840, 240),
        body_tag="p", body_len="normal", wrap_posts=False, posts=(3, 3),
        ellipsis_rate=0.6, intro_rate=0.0, ad_rate=0.25,
        variants=(("pinned_unlinked", 0.45), ("wide_ad", 0.4)),
    ),
    SiteTemplate(
        site_id="bravo", domain="bravo-notebook.com", lang="latin",
        title_tag="h3", title_font=22, title_link="internal",
        header_font=28, main_width=640, main_margin=0, sidebar=(700, 200),
        body_tag="div", body_len="short", wrap_posts=False, posts=(4, 4),
        ellipsis_rate=0.4, intro_rate=0.0, ad_rate=0.3,
        variants=(("meta_between", 0.45), ("wide_ad", 0.4)),
    ),
    SiteTemplate(
        site_id="charlie", domain="charlie-dispatch.com", lang="latin",
        title_tag="h1", title_font=None, title_link="none",
        header_font=26, main_width=800, main_margin=60, sidebar=None,
        body_tag="p", body_len="normal", wrap_posts=True, posts=(1, 1),
        ellipsis_rate=0.0, intro_rate=0.0, ad_rate=0.15,
        variants=(("colon_title", 0.45), ("wide_ad", 0.4)),
    ),
    SiteTemplate(
        site_id="delta", domain="www.delta-journal.com", lang="latin",
        title_tag="a", title_font=20, title_link="internal",
        header_font=27, main_width=760, main_margin=20, sidebar=(820, 220),
        body_tag="div", body_len="normal", wrap_posts=True, posts=(1, 1),
        ellipsis_rate=0.5, intro_rate=0.0, ad_rate=0.2,
        variants=(("meta_between", 0.45), ("wide_ad", 0.4)),
    ),
    SiteTemplate(
        site_id="echo", domain="blog.echo-site.com.cn", lang="cjk",
        title_tag="h2", title_font=None, title_link="internal",
        header_font=30, main_width=680, main_margin=30, sidebar=(760, 230),
        body_tag="p", body_len="short", wrap_posts=False, posts=(4, 4),
        ellipsis_rate=0.5, intro_rate=0.0, ad_rate=0.25,
        variants=(("wide_ad", 0.4), ("meta_between", 0.4)),
    ),
    SiteTemplate(
        site_id="foxtrot", domain="foxtrot-letters.com", lang="cjk",
        title_tag="h3", title_font=24, title_link="none",
        header_font=27, main_width=720, main_margin=0, sidebar=None,
        body_tag="div", body_len="long", wrap_posts=False, posts=(1, 1),
        ellipsis_rate=0.5, intro_rate=0.0, ad_rate=0.2,
        variants=(("colon_title", 0.45), ("meta_between", 0.4)),
    ),
    SiteTemplate(
        site_id="golf", domain="golf-gazette.com", lang="latin",
        title_tag="h2", title_font=26, title_link="internal",
        header_font=32, main_width=860, main_margin=10, sidebar=(890, 260),
        body_tag="p", body_len="normal", wrap_posts=False, posts=(3, 3),
        ellipsis_rate=0.2, intro_rate=0.0, ad_rate=0.3,
        variants=(("wide_ad", 0.45), ("meta_between", 0.4)),
    ),
    SiteTemplate(
        site_id="hotel", domain="www.hotel-almanac.com", lang="latin",
        title_tag="h3", title_font=20, title_link="none",
        header_font=26, main_width=700, main_margin=50, sidebar=(790, 230),
        body_tag="span", body_len="normal", wrap_posts=False, posts=(3, 3),
        ellipsis_rate=0.5, intro_rate=1.0, ad_rate=0.2,
        variants=(("linked_title", 0.45), ("meta_between", 0.4)),
    ),
    SiteTemplate(
        site_id="india", domain="india-register.com", lang="latin",
        title_tag="h2", title_font=None, title_link="internal",
        header_font=28, main_width=640, main_margin=120, sidebar=None,
        body_tag="p", body_len="long", wrap_posts=False, posts=(2, 2),
        ellipsis_rate=0.6, intro_rate=0.0, ad_rate=0.35,
        variants=(("double_post_ad", 0.4), ("wide_ad", 0.4)),
    ),
)


def _site_name(template: SiteTemplate) -> str:
    if template.lang == "cjk":
        fixed = {"echo": "回声小站", "foxtrot": "狐步手记"}
        return fixed.get(template.site_id, template.site_id + "博客")
    # hash() is salted per process, so derive the suffix from code points.
    index = sum(ord(ch) for ch in template.site_id)
    suffix = _SITE_NAME_SUFFIXES[index % len(_SITE_NAME_SUFFIXES)]
    return f"{template.site_id.capitalize()} {suffix}"


def _latin_title(rng: random.Random, n_words: int) -> str:
    words = [rng.choice(_LATIN_WORDS) for _ in range(n_words)]
    return " ".join(words).capitalize()


def _latin_sentences(rng: random.Random, total_words: int) -> str:
    sentences = []
    remaining = total_words
    while remaining > 0:
        n = min(remaining, rng.randint(5, 12))
        words = [rng.choice(_LATIN_WORDS) for _ in range(n)]
        if n >= 6 and rng.random() < 0.5:
            words[rng.randint(2, n - 2)] += ","
        if rng.random() < 0.2:
            k = rng.randrange(n)
            words[k] = f'"{words[k]}"'
        elif rng.random() < 0.15:
            k = rng.randrange(n)
            words[k] = f"({words[k]})"
        sentences.append(" ".join(words).capitalize() + ".")
        remaining -= n
    return " ".join(sentences)


def _cjk_title(rng: random.Random, n_chars: int) -> str:
    return "".join(rng.choice(_CJK_CHARS) for _ in range(n_chars))


def _cjk_sentences(rng: random.Random, total_chars: int) -> str:
    parts = []
    remaining = total_chars
    while remaining > 0:
        n = min(remaining, rng.randint(8, 18))
        chars = [rng.choice(_CJK_CHARS) for _ in range(n)]
        if n >= 8 and rng.random() < 0.6:
            chars.insert(rng.randint(3, n - 3), "，")
        parts.append("".join(chars) + "。")
        remaining -= n
    return "".join(parts)


def _truncate_with_ellipsis(text: str, lang: str) -> str:
    if lang == "cjk":
        return text.rstrip("。") + "…"
    return text.rstrip(".") + "..."


def _make_title_text(template: SiteTemplate, rng: random.Random,
                     colon: bool) -> str:
    if template.lang == "cjk":
        text = _cjk_title(rng, rng.randint(5, 10))
        return text + "：" if colon else text
    text = _latin_title(rng, rng.randint(3, 8))
    return text + ":" if colon else text


def _make_body_text(template: SiteTemplate, rng: random.Random,
                    length_mode: str) -> str:
    if template.lang == "cjk":
        sizes = {"short": (24, 45), "normal": (50, 160), "long": (180, 300)}
        lo, hi = sizes[length_mode]
        text = _cjk_sentences(rng, rng.randint(lo, hi))
    else:
        sizes = {"short": (8, 15), "normal": (25, 80), "long": (110, 170)}
        lo, hi = sizes[length_mode]
        text = _latin_sentences(rng, rng.randint(lo, hi))
    if rng.random() < template.ellipsis_rate:
        text = _truncate_with_ellipsis(text, template.lang)
    return text


def _meta_text(template: SiteTemplate, rng: random.Random) -> str:
    mm, dd = rng.randint(1, 12), rng.randint(1, 28)
    if template.lang == "cjk":
        author = rng.choice(_AUTHORS_CJK)
        return (
            f"发表于 2014-{mm:02d}-{dd:02d}，"
            f"作者：{author}，评论 {rng.randint(0, 40)} 条"
        )
    author = rng.choice(_AUTHORS_LATIN)
    return (
        f"Posted on 2014-{mm:02d}-{dd:02d} by {author}, "
        f"{rng.randint(0, 40)} comments"
    )


def _tags_text(template: SiteTemplate, rng: random.Random) -> str:
    if template.lang == "cjk":
        tags = "、".join(_cjk_title(rng, 2) for _ in range(3))
        return f"标签：{tags}"
    tags = ", ".join(rng.choice(_LATIN_WORDS) for _ in range(3))
    return f"filed under: {tags}"


def _ad_text(rng: random.Random) -> str:
    lead = rng.choice(("Sponsored", "Advertisement", "Special offer"))
    pitch = " ".join(rng.choice(_LATIN_WORDS) for _ in range(rng.randint(5, 12)))
    return f"{lead}: {pitch} now!"


def _wide_ad_text(rng: random.Random) -> str:
    pitch = " ".join(rng.choice(_LATIN_WORDS) for _ in range(rng.randint(16, 30)))
    return f"Limited time offer, {pitch}!!"


def _intro_text(template: SiteTemplate, rng: random.Random) -> str:
    if template.lang == "cjk":
        return _cjk_sentences(rng, rng.randint(40, 90))
    return _latin_sentences(rng, rng.randint(20, 55))


class _PageBuilder:
    def __init__(self, template: SiteTemplate, rng: random.Random,
                 page_index: int, posts_range: tuple[int, int]):
        self.t = template
        self.rng = rng
        self.page_index = page_index
        self.posts_range = template.posts or posts_range
        self.active = {
            name for name, rate in template.variants if rng.random() < rate
        }
        self.title_texts: list[str] = []
        self.body_texts: list[str] = []
        self.used_texts: set[str] = set()
        self.url = (
            f"https://{template.domain}/2014/"
            f"{(page_index % 12) + 1:02d}/index{page_index:03d}.html"
        )

    def _post_url(self, post_index: int) -> str:
        return (
            f"https://{self.t.domain}/2014/{(self.page_index % 12) + 1:02d}/"
            f"post-{self.page_index:03d}-{post_index}.html"
        )

    def _unique_title(self, colon: bool) -> str:
        for _ in range(64):
            text = _make_title_text(self.t, self.rng, colon)
            if text not in self.used_texts:
                self.used_texts.add(text)
                return text
        raise RuntimeError("could not draw a unique title text")

    def _title_html(self, post_index: int, unlinked_override: bool) -> str:
        t = self.t
        colon = "colon_title" in self.active
        text = self._unique_title(colon)
        self.title_texts.append(text)
        linked = t.title_link == "internal"
        if "linked_title" in self.active:
            linked = True
        if unlinked_override:
            linked = False
        style = f' style="font-size:{t.title_font}px"' if t.title_font else ""
        if t.title_tag == "a":
            inner = (
                f'<a{style} href="{self._post_url(post_index)}">{text}</a>'
                if linked
                else f'<span{style} class="title-text">{text}</span>'
            )
            return f'<div class="entry-title">{inner}</div>'
        tag = t.title_tag
        if linked:
            return (
                f'<{tag}{style} class="entry-title">'
                f'<a href="{self._post_url(post_index)}">{text}</a></{tag}>'
            )
        return f'<{tag}{style} class="entry-title">{text}</{tag}>'

    def _meta_html(self) -> str:
        text = _meta_text(self.t, self.rng)
        return f'<span class="meta" style="font-size:12px">{text}</span>'

    def _body_html(self) -> str:
        text = _make_body_text(self.t, self.rng, self.t.body_len)
        self.body_texts.append(text)
        tag = self.t.body_tag
        return f'<{tag} class="entry-body">{text}</{tag}>'

    def _post_html(self, post_index: int) -> str:
        unlinked = "pinned_unlinked" in self.active and post_index == 0
        parts = [self._title_html(post_index, unlinked), self._meta_html()]
        if "meta_between" in self.active:
            parts.append(
                f'<span class="tags" style="font-size:12px">'
                f"{_tags_text(self.t, self.rng)}</span>"
            )
        if self.t.body_tag == "span":
            parts.append("<br>")
        parts.append(self._body_html())
        if self.t.wrap_posts:
            return '<div class="post">\n' + "\n".join(parts) + "\n</div>"
        return "\n".join(parts)

    def _ad_html(self) -> str:
        network = self.rng.choice(_AD_NETWORKS)
        margin = max((self.t.main_width - 300) // 2, 0)
        return (
            f'<div class="ad" style="width:300px;margin-left:{margin}px">'
            f'{_ad_text(self.rng)} '
            f'<a href="https://{network}/c/{self.rng.randint(1000, 9999)}">more</a>'
            f"</div>"
        )

    def _nav_html(self) -> str:
        items = _NAV_CJK if self.t.lang == "cjk" else _NAV_LATIN
        count = self.rng.randint(4, min(6, len(items)))
        links = " ".join(
            f'<a href="https://{self.t.domain}/{i}.html">{label}</a>'
            for i, label in enumerate(items[:count])
        )
        return f'<div class="nav">{links}</div>'

    def _banner_html(self) -> str:
        name = _site_name(self.t)
        tagline = (
            _cjk_title(self.rng, 8)
            if self.t.lang == "cjk"
            else " ".join(self.rng.choice(_LATIN_WORDS) for _ in range(5))
        )
        return (
            '<div class="banner">'
            f'<div class="site-name" style="font-size:{self.t.header_font}px">{name}</div>'
            f'<div class="tagline" style="font-size:13px">{tagline}</div>'
            "</div>"
        )

    def _sidebar_html(self) -> str:
        t = self.t
        if t.sidebar is None:
            return ""
        ml, width = t.sidebar
        headings = (
            _SIDEBAR_HEADINGS_CJK if t.lang == "cjk" else _SIDEBAR_HEADINGS_LATIN
        )
        heading = self.rng.choice(headings)
        links = []
        for _ in range(self.rng.randint(4, 8)):
            label = (
                _cjk_title(self.rng, 3)
                if t.lang == "cjk"
                else self.rng.choice(_LATIN_WORDS)
            )
            links.append(
                f'<li><a href="https://{t.domain}/tag/{self.rng.randint(1, 99)}.html">'
                f"{label}</a></li>"
            )
        parts = [
            f'<div class="sidebar" style="margin-left:{ml}px;width:{width}px">',
            f'<div class="widget-title" style="font-size:17px">{heading}</div>',
            "<ul>",
            *links,
            "</ul>",
        ]
        if "wide_ad" in self.active:
            network = self.rng.choice(_AD_NETWORKS)
            parts.append(
                f'<div class="banner-ad" style="width:{width + 150}px">'
                f"{_wide_ad_text(self.rng)} "
                f'<a href="https://{network}/b/{self.rng.randint(100, 999)}">click</a>'
                "</div>"
            )
        parts.append("</div>")
        return "\n".join(parts)

    def _floating_wide_ad_html(self) -> str:
        """Wide ad for sites without a sidebar: offset right of the column."""
        t = self.t
        network = self.rng.choice(_AD_NETWORKS)
        margin = min(t.main_margin + t.main_width - 160, 820)
        return (
            f'<div class="banner-ad" style="margin-left:{margin}px;width:420px">'
            f"{_wide_ad_text(self.rng)} "
            f'<a href="https://{network}/b/{self.rng.randint(100, 999)}">click</a>'
            "</div>"
        )

    def _footer_html(self) -> str:
        # Several short lines, not one: a lone footer row is a cheap
        # outlier for a class-weighted learner, a cluster is not.
        t = self.t
        name = _site_name(t)
        engine = _ENGINES[sum(ord(ch) for ch in t.site_id) % len(_ENGINES)]
        if t.lang == "cjk":
            links = (
                '<a href="/about">关于本站</a> <a href="/archive">归档</a> '
                '<a href="/contact">联系我们</a>'
            )
            lines = [
                f"(c) 2014 {name} 版权所有",
                links,
                f"技术支持：{engine}",
            ]
        else:
            links = (
                '<a href="/about">about</a> <a href="/archive">archive</a> '
                '<a href="/contact">contact</a>'
            )
            lines = [
                f"(c) 2014 {name}, all rights reserved",
                links,
                f"powered by {engine}",
            ]
        inner = "".join(
            f'<div class="footer-line">{line}</div>' for line in lines
        )
        # Full width, like the banner and nav: lone geometry invites
        # false positives, shared geometry comes pre-covered.
        return f'<div class="footer" style="font-size:12px">{inner}</div>'

    def _css(self) -> str:
        # Realism only: the heuristic engine reads inline styles, not this.
        return (
            "body { margin: 0; font-family: Georgia, serif; }\n"
            ".post { padding: 4px 0; }\n"
            f".main {{ width: {self.t.main_width}px; }}\n"
            ".meta { color: #777; }\n"
        )

    def build(self) -> str:
        t = self.t
        rng = self.rng
        n_posts = rng.randint(*self.posts_range)
        chunks = []
        for i in range(n_posts):
            chunks.append(self._post_html(i))
            if i < n_posts - 1 and rng.random() < t.ad_rate:
                chunks.append(self._ad_html())
                if "double_post_ad" in self.active:
                    chunks.append(self._ad_html())
        main = (
            f'<div class="main" style="margin-left:{t.main_margin}px;'
            f'width:{t.main_width}px">\n' + "\n".join(chunks) + "\n</div>"
        )
        intro = ""
        if rng.random() < t.intro_rate:
            intro = (
                f'<div class="intro" style="margin-left:{t.main_margin}px;'
                f'width:{t.main_width}px"><p>{_intro_text(t, rng)}</p></div>'
            )
        wide_ad = ""
        if "wide_ad" in self.active and t.sidebar is None:
            wide_ad = self._floating_wide_ad_html()
        title = _site_name(t)
        return "\n".join(
            part
            for part in (
                "<!DOCTYPE html>",
                "<html>",
                "<head>",
                f'<meta charset="utf-8"><title>{title}</title>',
                f"<style>{self._css()}</style>",
                "</head>",
                "<body>",
                '<div class="page">',
                self._banner_html(),
                self._nav_html(),
                intro,
                main,
                self._sidebar_html(),
                wide_ad,
                self._footer_html(),
                "</div>",
                "</body>",
                "</html>",
            )
            if part
        )


def _extend_templates(n_sites: int) -> list[SiteTemplate]:
    templates = list(TEMPLATES[:n_sites])
    clone_index = 0
    while len(templates) < n_sites:
        base = TEMPLATES[clone_index % len(TEMPLATES)]
        clone_index += 1
        suffix = clone_index
        templates.append(
            SiteTemplate(
                site_id=f"{base.site_id}{suffix}",
                domain=f"v{suffix}.{base.domain.removeprefix('www.')}",
                lang=base.lang,
                title_tag=base.title_tag,
                title_font=base.title_font,
                title_link=base.title_link,
                header_font=base.header_font,
                main_width=base.main_width - 20 * (suffix % 3),
                main_margin=base.main_margin + 10 * (suffix % 4),
                sidebar=base.sidebar,
                body_tag=base.body_tag,
                body_len=base.body_len,
                wrap_posts=base.wrap_posts,
                posts=base.posts,
                ellipsis_rate=base.ellipsis_rate,
                intro_rate=base.intro_rate,
                ad_rate=base.ad_rate,
                variants=base.variants,
            )
        )
    return templates


def _label_page(
    template: SiteTemplate,
    builder: _PageBuilder,
    html: str,
    viewport: Viewport,
) -> tuple[pipeline.PageAnalysis, list[dom.NodePath], list[dom.NodePath]]:
    tree = dom.parse_html(html.encode("utf-8"), source_url=builder.url)
    geometry = layout.estimate_layout(tree, viewport)
    analysis = pipeline.analyze_page(tree, geometry)
    texts = analysis.texts

    def find_unique(candidate_ids, classifiable, text, kind):
        matches = [n for n in candidate_ids if texts[n] == text]
        if len(matches) != 1:
            raise RuntimeError(
                f"{template.site_id} page {builder.page_index}: {kind} text "
                f"matched {len(matches)} candidates: {text[:60]!r}"
            )
        if matches[0] not in classifiable:
            raise RuntimeError(
                f"{template.site_id} page {builder.page_index}: {kind} "
                f"candidate has no drawable rect"
            )
        return matches[0]

    title_class = set(analysis.title_nodes)
    body_class = set(analysis.body_nodes)
    title_paths = [
        dom.path_of(analysis.tree, find_unique(
            analysis.title_candidates.nodes, title_class, t, "title"))
        for t in builder.title_texts
    ]
    body_paths = [
        dom.path_of(analysis.tree, find_unique(
            analysis.body_candidates.nodes, body_class, t, "body"))
        for t in builder.body_texts
    ]
    return analysis, title_paths, body_paths


def generate_synthetic_corpus(
    out_dir: str | Path,
    *,
    seed: int = 7,
    n_sites: int = 9,
    pages_per_site: int = 250,
    posts_per_page: tuple[int, int] = (2, 4),
    viewport: Viewport = DEFAULT_VIEWPORT,
    cache: PageCache | None = None,
) -> Corpus:
    """Write a labeled corpus under ``out_dir`` and return it.

    The manifest lands at ``out_dir/manifest.json``.  When a ``cache`` is
    passed, the page analyses computed for labeling are stored in it so
    later experiment runs skip re-parsing.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be at least 1")
    if pages_per_site < 1:
        raise ValueError("pages_per_site must be at least 1")
    lo, hi = posts_per_page
    if lo < 1 or hi < lo:
        raise ValueError("posts_per_page must be a (low, high) range with low >= 1")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    templates = _extend_templates(n_sites)
    pages: list[LabeledPage] = []
    sites: list[str] = []
    for template in templates:
        sites.append(template.site_id)
        site_dir = out_dir / template.site_id
        site_dir.mkdir(parents=True, exist_ok=True)
        for page_index in range(pages_per_site):
            rng = random.Random(
                f"{seed}|{template.site_id}|{page_index}|synth-v1"
            )
            builder = _PageBuilder(template, rng, page_index, posts_per_page)
            html = builder.build()
            html_path = site_dir / f"page{page_index:03d}.html"
            html_path.write_bytes(html.encode("utf-8"))
            analysis, title_paths, body_paths = _label_page(
                template, builder, html, viewport
            )
            page = LabeledPage(
                page_id=f"{template.site_id}/page{page_index:03d}",
                site_id=template.site_id,
                html_path=html_path,
                sidecar_path=None,
                url=builder.url,
                title_paths=tuple(title_paths),
                body_paths=tuple(body_paths),
            )
            pages.append(page)
            if cache is not None:
                cache.store(page, analysis)
    result = Corpus(root=out_dir, pages=pages, sites=sites)
    write_manifest(result, out_dir / "manifest.json")
    return result
