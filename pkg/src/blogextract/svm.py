"""Soft-margin SVM with a Gaussian RBF kernel, trained from scratch by SMO.

The solver is sequential minimal optimization in Platt's formulation: pick
a pair of multipliers, solve the two-variable subproblem analytically,
repeat until no multiplier violates the KKT conditions beyond a tolerance.
The second multiplier is chosen by the largest error difference, with
randomized fallback scans.  An incrementally maintained error cache and a
bounded kernel-row cache keep large trainings affordable; duplicate
(row, label) pairs are merged beforehand with their box constraints summed,
which leaves the dual optimum unchanged.

Inputs are standardized to zero mean and unit variance per column before
training, and models carry the standardizer so callers always pass raw
feature rows.
"""

from __future__ import annotations

import json
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import (
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    SingleClassInput,
    TooFewRows,
    UnknownSchema,
    UnknownVersion,
)
from .layout import DEFAULT_VIEWPORT, Viewport

MODEL_FORMAT = "rbf-svm"
MODEL_VERSION = 1
KNOWN_SCHEMAS = ("title_v1", "body_v1")

_EPS = 1e-12


@dataclass(frozen=True)
class Standardizer:
    """Column-wise affine map to zero mean and unit variance.

    Constant columns (population std below 1e-12) are centered but not
    scaled, so they transform to all zeros instead of NaN.
    """

    means: np.ndarray
    stds: np.ndarray  # 1.0 recorded for constant columns
    constant: np.ndarray  # bool mask of constant columns

    @property
    def width(self) -> int:
        return int(self.means.shape[0])

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.width:
            raise DimensionMismatch(
                f"expected {self.width} features, got {X.shape[-1]}"
            )
        return (X - self.means) / self.stds


def fit_standardizer(X) -> Standardizer:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("expected a 2-D array of feature rows")
    if X.shape[0] < 2:
        raise TooFewRows("standardization needs at least two rows")
    means = X.mean(axis=0)
    stds = X.std(axis=0)  # population std
    # Relative threshold: a column of identical values at magnitude 1e6
    # still computes a std of ~1e-10 from summation rounding alone.
    constant = stds <= 1e-12 * np.maximum(1.0, np.abs(means))
    return Standardizer(
        means=means,
        stds=np.where(constant, 1.0, stds),
        constant=constant,
    )


def rbf_kernel(a, b, gamma: float):
    """exp(-gamma * ||a - b||^2), elementwise over rows.

    1-D inputs are treated as single vectors and produce a float;
    2-D inputs produce the full (len(a), len(b)) Gram matrix.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    scalar = a.ndim == 1 and b.ndim == 1
    a2 = np.atleast_2d(a)
    b2 = np.atleast_2d(b)
    if a2.shape[1] != b2.shape[1]:
        raise DimensionMismatch(
            f"vector widths differ: {a2.shape[1]} vs {b2.shape[1]}"
        )
    sq = (
        np.sum(a2 * a2, axis=1)[:, None]
        + np.sum(b2 * b2, axis=1)[None, :]
        - 2.0 * (a2 @ b2.T)
    )
    np.maximum(sq, 0.0, out=sq)
    K = np.exp(-gamma * sq)
    return float(K[0, 0]) if scalar else K


@dataclass(frozen=True)
class TrainConfig:
    c: float = 1.0
    gamma: float | str = "auto"
    kkt_tolerance: float = 1e-3
    max_passes: int = 200
    class_weighting: str = "balanced"  # "balanced" or "none"
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.gamma != "auto" and (
            not isinstance(self.gamma, (int, float)) or self.gamma <= 0
        ):
            raise ValueError("gamma must be positive or 'auto'")
        if self.kkt_tolerance <= 0:
            raise ValueError("kkt_tolerance must be positive")
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")
        if self.class_weighting not in ("balanced", "none"):
            raise ValueError("class_weighting must be 'balanced' or 'none'")


@dataclass(frozen=True)
class SvmModel:
    """A trained classifier: support vectors live in standardized space."""

    support_vectors: np.ndarray  # (m, d)
    dual_coefs: np.ndarray  # (m,), alpha_i * y_i, nonzero
    bias: float
    gamma: float
    c: float
    class_weighting: str
    standardizer: Standardizer
    schema_id: str
    viewport: Viewport

    @property
    def n_features(self) -> int:
        return self.standardizer.width

    def decision_values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        Xs = self.standardizer.transform(X)
        if len(self.dual_coefs) == 0:
            return np.full(len(Xs), self.bias)
        K = rbf_kernel(Xs, self.support_vectors, self.gamma)
        return K @ self.dual_coefs + self.bias

    def decision_value(self, x) -> float:
        return float(self.decision_values(np.asarray(x, dtype=np.float64))[0])


def resolve_gamma(gamma: float | str, Xs: np.ndarray) -> float:
    """A concrete gamma: explicit value, or 1 / (d * mean column variance)."""
    if gamma != "auto":
        return float(gamma)
    d = Xs.shape[1]
    mean_var = float(Xs.var(axis=0).mean())
    if mean_var > 1e-12:
        return 1.0 / (d * mean_var)
    return 1.0 / d


def class_boxes(y: np.ndarray, c: float, class_weighting: str) -> np.ndarray:
    """Per-sample box constraint before duplicate merging."""
    n = len(y)
    if class_weighting == "balanced":
        n_pos = int((y > 0).sum())
        n_neg = n - n_pos
        w_pos = n / (2.0 * n_pos)
        w_neg = n / (2.0 * n_neg)
        return np.where(y > 0, c * w_pos, c * w_neg)
    return np.full(n, float(c))


class _KernelCache:
    """RBF kernel rows on demand, fully materialized for small problems."""

    _FULL_LIMIT = 2048
    _BYTE_BUDGET = 2 * 10**8

    def __init__(self, X: np.ndarray, gamma: float):
        self.X = X
        self.gamma = gamma
        self.sq = np.einsum("ij,ij->i", X, X)
        self.n = len(X)
        self.full: np.ndarray | None = None
        if self.n <= self._FULL_LIMIT:
            d = self.sq[:, None] + self.sq[None, :] - 2.0 * (X @ X.T)
            np.maximum(d, 0.0, out=d)
            self.full = np.exp(-gamma * d)
        self._rows: OrderedDict[int, np.ndarray] = OrderedDict()
        self._capacity = max(512, min(self.n, self._BYTE_BUDGET // (8 * max(self.n, 1))))

    def row(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        cached = self._rows.get(i)
        if cached is not None:
            self._rows.move_to_end(i)
            return cached
        d = self.sq + self.sq[i] - 2.0 * (self.X @ self.X[i])
        np.maximum(d, 0.0, out=d)
        row = np.exp(-self.gamma * d)
        self._rows[i] = row
        if len(self._rows) > self._capacity:
            self._rows.popitem(last=False)
        return row


class _SmoSolver:
    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        box: np.ndarray,
        gamma: float,
        tol: float,
        max_passes: int,
        seed: int,
    ):
        self.X = X
        self.y = y
        self.box = box
        self.tol = tol
        self.max_passes = max_passes
        self.n = len(y)
        self.kernel = _KernelCache(X, gamma)
        self.alphas = np.zeros(self.n)
        self.bias = 0.0
        # errors[i] = decision(x_i) - y_i, maintained incrementally
        self.errors = -y.astype(np.float64)
        self.rng = np.random.default_rng(seed)

    def _nonbound(self) -> np.ndarray:
        return np.nonzero(
            (self.alphas > _EPS) & (self.alphas < self.box - _EPS)
        )[0]

    def solve(self) -> tuple[np.ndarray, float]:
        examine_all = True
        for _ in range(self.max_passes):
            changed = 0
            indices = range(self.n) if examine_all else self._nonbound()
            for i in indices:
                changed += self._examine(int(i))
            if examine_all:
                if changed == 0:
                    break  # every multiplier satisfies KKT within tol
                examine_all = False
            elif changed == 0:
                examine_all = True
        self._polish_bias()
        return self.alphas, self.bias

    def _examine(self, i: int) -> int:
        alpha_i = self.alphas[i]
        error_i = self.errors[i]
        r = error_i * self.y[i]
        violates = (r < -self.tol and alpha_i < self.box[i] - _EPS) or (
            r > self.tol and alpha_i > _EPS
        )
        if not violates:
            return 0
        nonbound = self._nonbound()
        if len(nonbound) > 1:
            j = int(nonbound[int(np.argmax(np.abs(error_i - self.errors[nonbound])))])
            if j != i and self._step(i, j):
                return 1
        if len(nonbound):
            start = int(self.rng.integers(len(nonbound)))
            for k in range(len(nonbound)):
                j = int(nonbound[(start + k) % len(nonbound)])
                if j != i and self._step(i, j):
                    return 1
        start = int(self.rng.integers(self.n))
        for k in range(self.n):
            j = (start + k) % self.n
            if j != i and self._step(i, j):
                return 1
        return 0

    def _step(self, i: int, j: int) -> bool:
        y_i, y_j = self.y[i], self.y[j]
        a_i, a_j = self.alphas[i], self.alphas[j]
        c_i, c_j = self.box[i], self.box[j]
        e_i, e_j = self.errors[i], self.errors[j]
        s = y_i * y_j
        if s < 0:
            low = max(0.0, a_j - a_i)
            high = min(c_j, c_i + a_j - a_i)
        else:
            low = max(0.0, a_i + a_j - c_i)
            high = min(c_j, a_i + a_j)
        if low >= high - _EPS:
            return False
        row_i = self.kernel.row(i)
        row_j = self.kernel.row(j)
        k_ii = 1.0  # RBF diagonal
        k_jj = 1.0
        k_ij = row_i[j]
        eta = k_ii + k_jj - 2.0 * k_ij
        if eta > _EPS:
            a_j_new = a_j + y_j * (e_i - e_j) / eta
            a_j_new = min(max(a_j_new, low), high)
        else:
            # Degenerate curvature (duplicate-direction pair): compare the
            # objective at both segment ends.
            f1 = y_i * (e_i + self.bias) - a_i * k_ii - s * a_j * k_ij
            f2 = y_j * (e_j + self.bias) - s * a_i * k_ij - a_j * k_jj
            l1 = a_i + s * (a_j - low)
            h1 = a_i + s * (a_j - high)
            obj_low = (
                l1 * f1 + low * f2
                + 0.5 * l1 * l1 * k_ii + 0.5 * low * low * k_jj
                + s * low * l1 * k_ij
            )
            obj_high = (
                h1 * f1 + high * f2
                + 0.5 * h1 * h1 * k_ii + 0.5 * high * high * k_jj
                + s * high * h1 * k_ij
            )
            if obj_low < obj_high - _EPS:
                a_j_new = low
            elif obj_high < obj_low - _EPS:
                a_j_new = high
            else:
                return False
        if abs(a_j_new - a_j) < 1e-10:
            return False
        a_i_new = a_i + s * (a_j - a_j_new)
        a_i_new = min(max(a_i_new, 0.0), c_i)

        delta_i = y_i * (a_i_new - a_i)
        delta_j = y_j * (a_j_new - a_j)
        b1 = self.bias - e_i - delta_i * k_ii - delta_j * k_ij
        b2 = self.bias - e_j - delta_i * k_ij - delta_j * k_jj
        if _EPS < a_i_new < c_i - _EPS:
            new_bias = b1
        elif _EPS < a_j_new < c_j - _EPS:
            new_bias = b2
        else:
            new_bias = (b1 + b2) / 2.0
        self.errors += delta_i * row_i + delta_j * row_j + (new_bias - self.bias)
        self.bias = new_bias
        self.alphas[i] = a_i_new
        self.alphas[j] = a_j_new
        return True

    def _polish_bias(self) -> None:
        """Recompute the bias exactly from the support vector geometry.

        Free support vectors pin the bias through their margin equalities;
        use their mean.  When every multiplier sits at 0 or at its box the
        KKT inequalities only bracket the bias, and the value left behind
        by the last pair step may fall outside that bracket (the step
        formulas assume the stepped points end up free).  Take the bracket
        midpoint instead.
        """
        free = np.nonzero(
            (self.alphas > 1e-9) & (self.alphas < self.box - 1e-9)
        )[0]
        coef = self.alphas * self.y
        old = self.bias
        if len(free):
            vals = np.array([coef @ self.kernel.row(int(i)) for i in free])
            self.bias = float(np.mean(self.y[free] - vals))
        else:
            lo, hi = -np.inf, np.inf
            for i in range(self.n):
                edge = self.y[i] - float(coef @ self.kernel.row(i))
                # margin >= 1 at zero multipliers, <= 1 at boxed ones:
                # each point bounds the bias from one side.
                if (self.alphas[i] <= 1e-9) == (self.y[i] > 0):
                    lo = max(lo, edge)
                else:
                    hi = min(hi, edge)
            if np.isfinite(lo) and np.isfinite(hi):
                self.bias = (lo + hi) / 2.0
            elif np.isfinite(lo) or np.isfinite(hi):
                self.bias = lo if np.isfinite(lo) else hi
        self.errors += self.bias - old


def train(
    X,
    y,
    config: TrainConfig | None = None,
    *,
    schema_id: str = "title_v1",
    viewport: Viewport = DEFAULT_VIEWPORT,
) -> SvmModel:
    """Train a classifier on raw (unstandardized) feature rows.

    Labels must be -1/+1 with both classes present.  Exact duplicate
    (row, label) pairs are merged with their box constraints summed, which
    preserves the dual optimum while shrinking the working set.
    """
    if config is None:
        config = TrainConfig()
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array of feature rows")
    if len(X) != len(y):
        raise ValueError("X and y lengths differ")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data must be finite")
    label_values = set(np.unique(y).tolist())
    if not label_values <= {-1.0, 1.0}:
        raise ValueError("labels must be -1 or +1")
    if label_values != {-1.0, 1.0}:
        raise SingleClassInput("training data must contain both classes")

    standardizer = fit_standardizer(X)
    Xs = standardizer.transform(X)
    if bool(np.all(Xs == Xs[0])):
        raise DegenerateData(
            "all rows are identical after standardization but labels differ"
        )
    gamma = resolve_gamma(config.gamma, Xs)
    boxes = class_boxes(y, config.c, config.class_weighting)

    stacked = np.column_stack([Xs, y, boxes])
    merged, counts = np.unique(stacked, axis=0, return_counts=True)
    Xu = np.ascontiguousarray(merged[:, :-2])
    yu = merged[:, -2]
    box = merged[:, -1] * counts

    solver = _SmoSolver(
        Xu, yu, box, gamma,
        config.kkt_tolerance, config.max_passes, config.rng_seed,
    )
    alphas, bias = solver.solve()
    sv = alphas > _EPS
    return SvmModel(
        support_vectors=Xu[sv].copy(),
        dual_coefs=(alphas * yu)[sv],
        bias=float(bias),
        gamma=float(gamma),
        c=float(config.c),
        class_weighting=config.class_weighting,
        standardizer=standardizer,
        schema_id=schema_id,
        viewport=viewport,
    )


def decision_value(model: SvmModel, x) -> float:
    return model.decision_value(x)


def dual_objective(model: SvmModel) -> float:
    """Value of the dual objective at the model's multipliers."""
    if len(model.dual_coefs) == 0:
        return 0.0
    K = rbf_kernel(model.support_vectors, model.support_vectors, model.gamma)
    d = model.dual_coefs
    return float(np.abs(d).sum() - 0.5 * (d @ K @ d))


def _hex(v: float) -> str:
    return float(v).hex()


def _from_hex(v) -> float:
    if not isinstance(v, str):
        raise CorruptModel(f"expected a hex float string, got {type(v).__name__}")
    try:
        return float.fromhex(v)
    except ValueError as exc:
        raise CorruptModel(f"bad float value {v!r}") from None


def save_model(model: SvmModel, *, created: str = "") -> bytes:
    """Serialize a model to bytes; exact floats, stable key order.

    The same model always serializes to the same bytes (pass a fixed
    ``created`` stamp, or none, to keep runs reproducible).
    """
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "schema_id": model.schema_id,
        "created": created,
        "viewport": {
            "width": model.viewport.width,
            "height": model.viewport.height,
        },
        "c": _hex(model.c),
        "gamma": _hex(model.gamma),
        "bias": _hex(model.bias),
        "class_weighting": model.class_weighting,
        "standardizer": {
            "means": [_hex(v) for v in model.standardizer.means.tolist()],
            "stds": [_hex(v) for v in model.standardizer.stds.tolist()],
            "constant": [int(v) for v in model.standardizer.constant.tolist()],
        },
        "dual_coefs": [_hex(v) for v in model.dual_coefs.tolist()],
        "support_vectors": [
            [_hex(v) for v in row] for row in model.support_vectors.tolist()
        ],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("ascii")


def load_model(data: bytes) -> SvmModel:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError):
        raise CorruptModel("model file is not valid JSON") from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise CorruptModel("not a model file")
    if doc.get("version") != MODEL_VERSION:
        raise UnknownVersion(f"unsupported model version {doc.get('version')!r}")
    schema_id = doc.get("schema_id")
    if schema_id not in KNOWN_SCHEMAS:
        raise UnknownSchema(f"unknown feature schema {schema_id!r}")
    try:
        vp = doc["viewport"]
        viewport = Viewport(int(vp["width"]), int(vp["height"]))
        std = doc["standardizer"]
        means = np.array([_from_hex(v) for v in std["means"]], dtype=np.float64)
        stds = np.array([_from_hex(v) for v in std["stds"]], dtype=np.float64)
        constant = np.array([bool(v) for v in std["constant"]], dtype=bool)
        dual = np.array([_from_hex(v) for v in doc["dual_coefs"]], dtype=np.float64)
        sv_rows = [[_from_hex(v) for v in row] for row in doc["support_vectors"]]
        width = len(means)
        support = (
            np.array(sv_rows, dtype=np.float64)
            if sv_rows
            else np.empty((0, width), dtype=np.float64)
        )
        model = SvmModel(
            support_vectors=support,
            dual_coefs=dual,
            bias=_from_hex(doc["bias"]),
            gamma=_from_hex(doc["gamma"]),
            c=_from_hex(doc["c"]),
            class_weighting=str(doc.get("class_weighting", "balanced")),
            standardizer=Standardizer(means=means, stds=stds, constant=constant),
            schema_id=schema_id,
            viewport=viewport,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"malformed model file: {exc}") from None
    if len(stds) != width or len(constant) != width:
        raise CorruptModel("standardizer arrays disagree on width")
    if support.ndim != 2 or (len(support) and support.shape[1] != width):
        raise CorruptModel("support vector width disagrees with standardizer")
    if len(dual) != len(support):
        raise CorruptModel("dual coefficient count disagrees with support vectors")
    if model.gamma <= 0 or model.c <= 0:
        raise CorruptModel("gamma and c must be positive")
    return model
