"""Template-independent extraction of blog post titles and bodies.

Pages are parsed into a DOM tree, measured (either by the built-in
heuristic layout engine or from a browser-produced geometry sidecar),
reduced to candidate subtrees, featurized with spatial and content
features, and classified by two RBF-kernel support vector machines: one
for titles, then one for bodies using title-relative features.
"""

from .candidates import CandidateSet, body_candidates, title_candidates
from .corpus import (
    Corpus,
    LabeledPage,
    PageCache,
    load_corpus,
    page_marks,
    resolve_labels,
    write_manifest,
)
from .dom import (
    DomNode,
    DomTree,
    NodePath,
    node_at_path,
    parse_html,
    path_of,
    subtree_texts,
    text_content,
)
from .errors import (
    BlogExtractError,
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    EmptyDocument,
    InsufficientPages,
    InvalidPath,
    MissingFile,
    MissingGeometry,
    PathMismatch,
    SchemaError,
    SchemaMismatch,
    SingleClassInput,
    TooFewRows,
    UnknownSchema,
    UnknownVersion,
    UnresolvedLabel,
)
from .experiments import (
    ExperimentReport,
    SiteScores,
    run_generalization_experiment,
    run_learning_curve,
    run_multi_site_experiment,
    run_single_site_experiment,
    train_models,
)
from .features import (
    NO_TITLE_SENTINEL,
    BodyFeatures,
    TitleBlock,
    TitleFeatures,
    body_features,
    classify_link,
    count_words,
    effective_font_size,
    title_features,
)
from .layout import (
    DEFAULT_VIEWPORT,
    Geometry,
    NormalizedCenter,
    Rect,
    Viewport,
    estimate_layout,
    load_sidecar,
    normalized_center,
)
from .pipeline import (
    ExtractedBlock,
    ExtractionResult,
    PageAnalysis,
    PageInput,
    analyze_page,
    build_page,
    extract,
    extract_from_analysis,
    result_to_json,
)
from .svm import (
    SvmModel,
    Standardizer,
    TrainConfig,
    fit_standardizer,
    load_model,
    rbf_kernel,
    save_model,
    train,
)
from .synth import generate_synthetic_corpus

__version__ = "0.1.0"

__all__ = [
    "BlogExtractError",
    "BodyFeatures",
    "CandidateSet",
    "Corpus",
    "CorruptModel",
    "DEFAULT_VIEWPORT",
    "DegenerateData",
    "DimensionMismatch",
    "DomNode",
    "DomTree",
    "EmptyDocument",
    "ExperimentReport",
    "ExtractedBlock",
    "ExtractionResult",
    "Geometry",
    "InsufficientPages",
    "InvalidPath",
    "LabeledPage",
    "MissingFile",
    "MissingGeometry",
    "NO_TITLE_SENTINEL",
    "NodePath",
    "NormalizedCenter",
    "PageAnalysis",
    "PageCache",
    "PageInput",
    "PathMismatch",
    "Rect",
    "SchemaError",
    "SchemaMismatch",
    "SingleClassInput",
    "SiteScores",
    "Standardizer",
    "SvmModel",
    "TitleBlock",
    "TitleFeatures",
    "TooFewRows",
    "TrainConfig",
    "UnknownSchema",
    "UnknownVersion",
    "UnresolvedLabel",
    "Viewport",
    "analyze_page",
    "body_candidates",
    "body_features",
    "build_page",
    "classify_link",
    "count_words",
    "effective_font_size",
    "estimate_layout",
    "extract",
    "extract_from_analysis",
    "fit_standardizer",
    "generate_synthetic_corpus",
    "load_corpus",
    "load_model",
    "load_sidecar",
    "node_at_path",
    "normalized_center",
    "page_marks",
    "parse_html",
    "path_of",
    "rbf_kernel",
    "result_to_json",
    "resolve_labels",
    "run_generalization_experiment",
    "run_learning_curve",
    "run_multi_site_experiment",
    "run_single_site_experiment",
    "save_model",
    "subtree_texts",
    "text_content",
    "title_candidates",
    "title_features",
    "train",
    "train_models",
    "write_manifest",
]
