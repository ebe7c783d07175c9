"""Detect the event basis of information operations in news flows.

The library follows the flow from a timestamped corpus to its event
structure: filter a thematic flow, study its daily dynamics against a
lifecycle template, extract the terminological basis, narrow to event
documents, and cluster them around seeded event keywords.
"""

from .corpus import (
    Corpus,
    Document,
    FlowQuery,
    TokenizedDoc,
    filter_by_dates,
    filter_by_query,
    load_corpus,
    load_stopwords,
    normalize_term,
    save_corpus,
    tokenize,
    tokenize_corpus,
)
from .errors import ConfigError, DataError
from .eventcluster import (
    UNASSIGNED,
    Centroid,
    Clustering,
    DocVector,
    assign,
    kmeans_seeded,
    quality_q,
    recompute_centroids,
    seed_centroids,
    sim,
    vectorize,
)
from .flowseries import (
    DEFAULT_SMOOTHING_WINDOW,
    DEFAULT_TEMPLATE,
    Correlogram,
    DailySeries,
    LifecycleTemplate,
    Peak,
    build_daily_series,
    correlogram,
    detect_peaks,
    load_template,
    sample_template,
    smooth,
    window_correlation,
)
from .sourcegraph import (
    SourceGraph,
    VisibilityGraph,
    horizontal_visibility_graph,
    per_source_series,
    source_link_graph,
)
from .synthflow import (
    BurstSpec,
    ClusterDef,
    ClusterSpec,
    generate_burst_series,
    generate_cluster_corpus,
)
from .termbase import (
    DEFAULT_EVENT_LEXICON,
    EventLexicon,
    TermWeight,
    augment_query,
    compute_tfidf,
    document_frequencies,
    load_lexicon,
    match_event_terms,
)

__all__ = [
    "Corpus",
    "Document",
    "FlowQuery",
    "TokenizedDoc",
    "filter_by_dates",
    "filter_by_query",
    "load_corpus",
    "load_stopwords",
    "normalize_term",
    "save_corpus",
    "tokenize",
    "tokenize_corpus",
    "ConfigError",
    "DataError",
    "UNASSIGNED",
    "Centroid",
    "Clustering",
    "DocVector",
    "assign",
    "kmeans_seeded",
    "quality_q",
    "recompute_centroids",
    "seed_centroids",
    "sim",
    "vectorize",
    "DEFAULT_SMOOTHING_WINDOW",
    "DEFAULT_TEMPLATE",
    "Correlogram",
    "DailySeries",
    "LifecycleTemplate",
    "Peak",
    "build_daily_series",
    "correlogram",
    "detect_peaks",
    "load_template",
    "sample_template",
    "smooth",
    "window_correlation",
    "SourceGraph",
    "VisibilityGraph",
    "horizontal_visibility_graph",
    "per_source_series",
    "source_link_graph",
    "BurstSpec",
    "ClusterDef",
    "ClusterSpec",
    "generate_burst_series",
    "generate_cluster_corpus",
    "DEFAULT_EVENT_LEXICON",
    "EventLexicon",
    "TermWeight",
    "augment_query",
    "compute_tfidf",
    "document_frequencies",
    "load_lexicon",
    "match_event_terms",
]
