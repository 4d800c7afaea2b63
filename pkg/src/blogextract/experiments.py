"""Training and evaluation protocols over a labeled corpus.

Four protocols are provided:

* single-site: train and test within one site, repeated for every site,
  at one or more training-set sizes.
* multi-site: pool a fixed number of training pages from every site and
  test on the remainder of each site.
* learning curve: the single-site protocol swept over a range of sizes,
  with nested training sets so curves are comparable across sizes.
* generalization: train on a global sample of pages, ignoring sites, and
  test on everything else.

A page is scored as two booleans: the predicted title path set exactly
matches the labeled one, and likewise for bodies.  Accuracies are the
fraction of test pages with an exact match, macro-averaged over sites.

Hyperparameters come from a small grid searched on a held-out tail of
the training pages; title models are ranked first, then body models are
ranked under the winning title model's predicted titles.  Body training
rows are always built against the *labeled* titles, so a sloppy title
model cannot poison body training.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import pipeline, svm
from .corpus import Corpus, LabeledPage, PageCache, page_marks, resolve_labels
from .errors import InsufficientPages
from .features import TitleBlock

GRID_C: tuple[float, ...] = (1.0, 10.0, 0.1)
GRID_GAMMA: tuple[object, ...] = ("auto", 0.1, 1.0)

# At least this many training pages are required before a validation
# tail is split off; below it the default hyperparameters are used.
MIN_PAGES_FOR_SEARCH = 3
VALIDATION_FRACTION = 0.2


@dataclass(frozen=True)
class SiteScores:
    pages: int
    title_accuracy: float
    body_accuracy: float
    joint_accuracy: float


@dataclass
class ExperimentReport:
    name: str
    train_size: int
    runs: int
    per_site: dict[str, SiteScores]
    title_accuracy: float
    body_accuracy: float
    joint_accuracy: float
    hyperparams: dict
    seconds: float

    def to_json(self) -> dict:
        return {
            "experiment": self.name,
            "train_size": self.train_size,
            "runs": self.runs,
            "sites": {
                site: {
                    "pages": s.pages,
                    "title_accuracy": s.title_accuracy,
                    "body_accuracy": s.body_accuracy,
                    "joint_accuracy": s.joint_accuracy,
                }
                for site, s in self.per_site.items()
            },
            "macro": {
                "title_accuracy": self.title_accuracy,
                "body_accuracy": self.body_accuracy,
                "joint_accuracy": self.joint_accuracy,
            },
            "hyperparams": self.hyperparams,
            "seconds": self.seconds,
        }

    def format_table(self) -> str:
        width = max([len("site")] + [len(s) for s in self.per_site])
        lines = [
            f"experiment: {self.name} "
            f"(train={self.train_size}, runs={self.runs})",
            f"{'site':<{width}}  pages  title  body   joint",
        ]
        for site, s in self.per_site.items():
            lines.append(
                f"{site:<{width}}  {s.pages:>5d}  "
                f"{s.title_accuracy:.3f}  {s.body_accuracy:.3f}  "
                f"{s.joint_accuracy:.3f}"
            )
        lines.append(
            f"{'macro':<{width}}  {'-':>5}  "
            f"{self.title_accuracy:.3f}  {self.body_accuracy:.3f}  "
            f"{self.joint_accuracy:.3f}"
        )
        lines.append(f"elapsed: {self.seconds:.1f}s")
        return "\n".join(lines)


@dataclass
class _PageRows:
    """Model-input rows for one labeled page; split-independent."""

    analysis: pipeline.PageAnalysis
    title_ids: set[int]
    body_ids: set[int]
    title_y: np.ndarray
    body_X: np.ndarray  # built against the labeled titles
    body_y: np.ndarray
    labeled_blocks: list[TitleBlock]


def _page_rows(page: LabeledPage, cache: PageCache) -> _PageRows:
    analysis = cache.analysis(page)
    title_ids, body_ids, _, _ = resolve_labels(page, analysis)
    title_y = np.array(
        [1.0 if n in title_ids else -1.0 for n in analysis.title_nodes]
    )
    labeled_blocks = pipeline.title_blocks_for(
        analysis, [n for n in analysis.title_nodes if n in title_ids]
    )
    body_y = np.array(
        [1.0 if n in body_ids else -1.0 for n in analysis.body_nodes]
    )
    return _PageRows(
        analysis=analysis,
        title_ids=title_ids,
        body_ids=body_ids,
        title_y=title_y,
        body_X=analysis.body_X(labeled_blocks),
        body_y=body_y,
        labeled_blocks=labeled_blocks,
    )


class _RowStore:
    """Per-page rows, computed once and shared across splits and sizes."""

    def __init__(self, cache: PageCache):
        self.cache = cache
        self._rows: dict[str, _PageRows] = {}

    def rows(self, page: LabeledPage) -> _PageRows:
        got = self._rows.get(page.page_id)
        if got is None:
            got = _page_rows(page, self.cache)
            self._rows[page.page_id] = got
        return got


def _stack_title(rows: list[_PageRows]) -> tuple[np.ndarray, np.ndarray]:
    X = np.vstack([r.analysis.title_X for r in rows])
    y = np.concatenate([r.title_y for r in rows])
    return X, y


def _stack_body(rows: list[_PageRows]) -> tuple[np.ndarray, np.ndarray]:
    X = np.vstack([r.body_X for r in rows])
    y = np.concatenate([r.body_y for r in rows])
    return X, y


def _train_title(rows, c, gamma, viewport, seed) -> svm.SvmModel:
    X, y = _stack_title(rows)
    config = svm.TrainConfig(c=c, gamma=gamma, rng_seed=seed)
    return svm.train(
        X, y, config, schema_id=pipeline.TITLE_SCHEMA_ID, viewport=viewport
    )


def _train_body(rows, c, gamma, viewport, seed) -> svm.SvmModel:
    X, y = _stack_body(rows)
    config = svm.TrainConfig(c=c, gamma=gamma, rng_seed=seed)
    return svm.train(
        X, y, config, schema_id=pipeline.BODY_SCHEMA_ID, viewport=viewport
    )


def _title_val(
    rows: list[_PageRows], model: svm.SvmModel
) -> tuple[float, float]:
    """(exact title-set accuracy, raw row accuracy) on validation pages.

    The row accuracy breaks ties between combos whose exact-set scores
    agree on a small validation split: a combo that leaves borderline
    false positives loses rows even when overlap resolution or luck
    saves the page-level score.
    """
    hits = errors = total = 0
    for r in rows:
        kept, _ = pipeline.predict_title_nodes(r.analysis, model)
        hits += set(kept) == r.title_ids
        scores = model.decision_values(r.analysis.title_X)
        errors += int(((scores > 0) != (r.title_y > 0)).sum())
        total += len(r.title_y)
    return hits / len(rows), 1.0 - errors / max(total, 1)


def _body_val(
    rows: list[_PageRows],
    model: svm.SvmModel,
    blocks_list: list[list[TitleBlock]],
) -> tuple[float, float]:
    hits = errors = total = 0
    for r, blocks in zip(rows, blocks_list):
        kept, _ = pipeline.predict_body_nodes(r.analysis, model, blocks)
        hits += set(kept) == r.body_ids
        scores = model.decision_values(r.analysis.body_X(blocks))
        errors += int(((scores > 0) != (r.body_y > 0)).sum())
        total += len(r.body_y)
    return hits / len(rows), 1.0 - errors / max(total, 1)


def _title_row_acc(rows: list[_PageRows], model: svm.SvmModel) -> float:
    """Raw row accuracy on the rows the model was fitted to.

    Last tie-break component.  A combo whose fit still misclassifies
    some of its own rows (soft margin, class weighting) is carrying
    borderline points that tend to flip on unseen pages, so among
    validation-tied combos the cleaner fit is preferred.
    """
    errors = total = 0
    for r in rows:
        scores = model.decision_values(r.analysis.title_X)
        errors += int(((scores > 0) != (r.title_y > 0)).sum())
        total += len(r.title_y)
    return 1.0 - errors / max(total, 1)


def _body_row_acc(rows: list[_PageRows], model: svm.SvmModel) -> float:
    errors = total = 0
    for r in rows:
        scores = model.decision_values(r.body_X)
        errors += int(((scores > 0) != (r.body_y > 0)).sum())
        total += len(r.body_y)
    return 1.0 - errors / max(total, 1)


def _combos(c, gamma) -> list[tuple[float, object]]:
    cs = GRID_C if c is None else (float(c),)
    gs = GRID_GAMMA if gamma is None else (gamma,)
    return list(product(cs, gs))


def fit_models(
    train_pages: list[LabeledPage],
    store: _RowStore,
    *,
    c: float | None = None,
    gamma: object = None,
    seed: int = 0,
) -> tuple[svm.SvmModel, svm.SvmModel, dict]:
    """Train a title and a body model, searching hyperparameters if free.

    With fewer than MIN_PAGES_FOR_SEARCH pages, or with both c and gamma
    pinned, no search happens.  Otherwise the last fifth of the training
    pages is held out, title combos are ranked by exact title-set
    accuracy on it, with validation row accuracy and then fit row
    accuracy breaking ties; body combos are ranked the same way under
    the winning title model's predictions.  Earlier grid entries win
    remaining ties, preferring the defaults.
    """
    if not train_pages:
        raise InsufficientPages("no training pages")
    viewport = store.cache.viewport
    rows = [store.rows(p) for p in train_pages]
    combos = _combos(c, gamma)
    if len(combos) == 1 or len(train_pages) < MIN_PAGES_FOR_SEARCH:
        c_title, gamma_title = combos[0]
        c_body, gamma_body = combos[0]
        title_score = body_score = None
        searched = False
    else:
        val_n = max(1, round(VALIDATION_FRACTION * len(train_pages)))
        sub, val = rows[:-val_n], rows[-val_n:]

        best_title = None
        title_score = (-1.0, -1.0, -1.0)
        for cc, gg in combos:
            model = _train_title(sub, cc, gg, viewport, seed)
            score = _title_val(val, model) + (_title_row_acc(sub, model),)
            if score > title_score:
                title_score = score
                best_title = (cc, gg, model)
        c_title, gamma_title, sub_title_model = best_title

        predicted_blocks = []
        for r in val:
            kept, _ = pipeline.predict_title_nodes(r.analysis, sub_title_model)
            predicted_blocks.append(pipeline.title_blocks_for(r.analysis, kept))

        best_body = None
        body_score = (-1.0, -1.0, -1.0)
        for cc, gg in combos:
            model = _train_body(sub, cc, gg, viewport, seed)
            score = _body_val(val, model, predicted_blocks) + (
                _body_row_acc(sub, model),
            )
            if score > body_score:
                body_score = score
                best_body = (cc, gg)
        c_body, gamma_body = best_body
        searched = True

    title_model = _train_title(rows, c_title, gamma_title, viewport, seed)
    body_model = _train_body(rows, c_body, gamma_body, viewport, seed)
    info = {
        "searched": searched,
        "title": {
            "c": c_title,
            "gamma": gamma_title,
            "val_accuracy": title_score[0] if searched else None,
        },
        "body": {
            "c": c_body,
            "gamma": gamma_body,
            "val_accuracy": body_score[0] if searched else None,
        },
    }
    return title_model, body_model, info


def train_models(
    pages: list[LabeledPage],
    *,
    cache: PageCache | None = None,
    c: float | None = None,
    gamma: object = None,
    seed: int = 0,
) -> tuple[svm.SvmModel, svm.SvmModel, dict]:
    """Public entry point: fit a title/body model pair on labeled pages."""
    store = _RowStore(cache if cache is not None else PageCache())
    return fit_models(pages, store, c=c, gamma=gamma, seed=seed)


@dataclass
class _Tally:
    pages: int = 0
    title_hits: int = 0
    body_hits: int = 0
    joint_hits: int = 0

    def add(self, title_ok: bool, body_ok: bool) -> None:
        self.pages += 1
        self.title_hits += title_ok
        self.body_hits += body_ok
        self.joint_hits += title_ok and body_ok

    def scores(self) -> SiteScores:
        n = max(self.pages, 1)
        return SiteScores(
            pages=self.pages,
            title_accuracy=self.title_hits / n,
            body_accuracy=self.body_hits / n,
            joint_accuracy=self.joint_hits / n,
        )


def _score_page(
    page: LabeledPage,
    store: _RowStore,
    title_model: svm.SvmModel,
    body_model: svm.SvmModel,
) -> tuple[bool, bool]:
    analysis = store.rows(page).analysis
    result = pipeline.extract_from_analysis(analysis, title_model, body_model)
    return page_marks(
        page,
        {b.path.indices for b in result.titles},
        {b.path.indices for b in result.bodies},
    )


def _macro(tallies: dict[str, _Tally]) -> tuple[dict[str, SiteScores], float, float, float]:
    per_site = {site: t.scores() for site, t in tallies.items()}
    n = max(len(per_site), 1)
    title = sum(s.title_accuracy for s in per_site.values()) / n
    body = sum(s.body_accuracy for s in per_site.values()) / n
    joint = sum(s.joint_accuracy for s in per_site.values()) / n
    return per_site, title, body, joint


def _require_pages(corpus: Corpus, needed: int) -> None:
    for site in corpus.sites:
        have = len(corpus.pages_of(site))
        if have < needed:
            raise InsufficientPages(
                f"site {site!r} has {have} pages, needs at least {needed}"
            )


def _sized_site_experiment(
    corpus: Corpus,
    name: str,
    train_sizes: tuple[int, ...],
    *,
    seed: int,
    runs: int,
    store: _RowStore,
    c: float | None,
    gamma: object,
) -> list[ExperimentReport]:
    # The shuffle key ignores the size, so the training sets for a given
    # (run, site) are nested across sizes and curves stay comparable.
    _require_pages(corpus, max(train_sizes) + 1)
    reports = []
    for size in train_sizes:
        started = time.perf_counter()
        tallies: dict[str, _Tally] = {}
        hyper: dict[str, dict] = {}
        for run in range(runs):
            for site in corpus.sites:
                pages = corpus.pages_of(site)
                rng = random.Random(f"single|{seed}|{run}|{site}")
                rng.shuffle(pages)
                train, test = pages[:size], pages[size:]
                title_model, body_model, info = fit_models(
                    train, store, c=c, gamma=gamma, seed=seed
                )
                hyper[site] = info
                tally = tallies.setdefault(site, _Tally())
                for page in test:
                    tally.add(*_score_page(page, store, title_model, body_model))
        per_site, title, body, joint = _macro(tallies)
        reports.append(
            ExperimentReport(
                name=name,
                train_size=size,
                runs=runs,
                per_site=per_site,
                title_accuracy=title,
                body_accuracy=body,
                joint_accuracy=joint,
                hyperparams=hyper,
                seconds=time.perf_counter() - started,
            )
        )
    return reports


def run_single_site_experiment(
    corpus: Corpus,
    *,
    train_sizes: tuple[int, ...] = (10, 40),
    seed: int = 0,
    runs: int = 1,
    cache: PageCache | None = None,
    c: float | None = None,
    gamma: object = None,
) -> list[ExperimentReport]:
    """Per-site models: train on ``size`` pages of a site, test on the rest."""
    store = _RowStore(cache if cache is not None else PageCache())
    return _sized_site_experiment(
        corpus, "single-site", tuple(train_sizes),
        seed=seed, runs=runs, store=store, c=c, gamma=gamma,
    )


def run_learning_curve(
    corpus: Corpus,
    *,
    sizes: tuple[int, ...] = tuple(range(2, 21, 2)),
    seed: int = 0,
    runs: int = 1,
    cache: PageCache | None = None,
    c: float | None = None,
    gamma: object = None,
) -> list[ExperimentReport]:
    """The single-site protocol swept over a range of training sizes."""
    store = _RowStore(cache if cache is not None else PageCache())
    return _sized_site_experiment(
        corpus, "learning-curve", tuple(sizes),
        seed=seed, runs=runs, store=store, c=c, gamma=gamma,
    )


def run_multi_site_experiment(
    corpus: Corpus,
    *,
    per_site_train: int = 40,
    seed: int = 0,
    runs: int = 1,
    cache: PageCache | None = None,
    c: float | None = None,
    gamma: object = None,
) -> ExperimentReport:
    """One model pair trained on pages pooled evenly from every site."""
    _require_pages(corpus, per_site_train + 1)
    store = _RowStore(cache if cache is not None else PageCache())
    started = time.perf_counter()
    tallies: dict[str, _Tally] = {}
    hyper: dict = {}
    for run in range(runs):
        train: list[LabeledPage] = []
        tests: list[tuple[str, list[LabeledPage]]] = []
        for site in corpus.sites:
            pages = corpus.pages_of(site)
            rng = random.Random(f"multi|{seed}|{run}|{site}")
            rng.shuffle(pages)
            train.extend(pages[:per_site_train])
            tests.append((site, pages[per_site_train:]))
        title_model, body_model, hyper = fit_models(
            train, store, c=c, gamma=gamma, seed=seed
        )
        for site, pages in tests:
            tally = tallies.setdefault(site, _Tally())
            for page in pages:
                tally.add(*_score_page(page, store, title_model, body_model))
    per_site, title, body, joint = _macro(tallies)
    return ExperimentReport(
        name="multi-site",
        train_size=per_site_train,
        runs=runs,
        per_site=per_site,
        title_accuracy=title,
        body_accuracy=body,
        joint_accuracy=joint,
        hyperparams=hyper,
        seconds=time.perf_counter() - started,
    )


def run_generalization_experiment(
    corpus: Corpus,
    *,
    n_train: int = 100,
    seed: int = 0,
    runs: int = 1,
    cache: PageCache | None = None,
    c: float | None = None,
    gamma: object = None,
) -> ExperimentReport:
    """Train on a global page sample, sites ignored; test on the rest."""
    if len(corpus.pages) <= n_train:
        raise InsufficientPages(
            f"corpus has {len(corpus.pages)} pages, needs more than {n_train}"
        )
    store = _RowStore(cache if cache is not None else PageCache())
    started = time.perf_counter()
    tallies: dict[str, _Tally] = {}
    hyper: dict = {}
    for run in range(runs):
        pages = list(corpus.pages)
        rng = random.Random(f"generalization|{seed}|{run}")
        rng.shuffle(pages)
        train, test = pages[:n_train], pages[n_train:]
        title_model, body_model, hyper = fit_models(
            train, store, c=c, gamma=gamma, seed=seed
        )
        for page in test:
            tally = tallies.setdefault(page.site_id, _Tally())
            tally.add(*_score_page(page, store, title_model, body_model))
    ordered = {
        site: tallies[site] for site in corpus.sites if site in tallies
    }
    per_site, title, body, joint = _macro(ordered)
    return ExperimentReport(
        name="generalization",
        train_size=n_train,
        runs=runs,
        per_site=per_site,
        title_accuracy=title,
        body_accuracy=body,
        joint_accuracy=joint,
        hyperparams=hyper,
        seconds=time.perf_counter() - started,
    )
