"""Command line front end for the flow-analysis stages.

Subcommands mirror the stages of the method: ``series`` (filter the
flow, write its daily dynamics), ``correlogram`` (template correlation
over shifts and scales, peak report), ``events`` (tf-idf term ranking,
event-lexicon match, query augmentation, event corpus, source graph),
``cluster`` (seeded k-means report), ``pipeline`` (all of the above in
order, with date narrowing to the best peak window and a digest
manifest), and ``synth`` (fixture generation).

Options can come from a flat ``key = value`` config file; command line
flags override file values.  Exit status: 0 success (warnings allowed),
1 usage or config error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from .corpus import (
    Corpus,
    FlowQuery,
    TokenizedDoc,
    filter_by_dates,
    filter_by_query,
    load_corpus,
    load_stopwords,
    normalize_term,
    save_corpus,
    tokenize_corpus,
)
from .errors import ConfigError, DataError
from .eventcluster import kmeans_seeded, seed_centroids, vectorize, write_cluster_report
from .flowseries import (
    DEFAULT_SMOOTHING_WINDOW,
    DEFAULT_TEMPLATE,
    build_daily_series,
    correlogram,
    detect_peaks,
    load_template,
    smooth,
    write_correlogram_csv,
    write_peaks_csv,
    write_series_csv,
)
from .sourcegraph import SourceGraph, source_link_graph, write_source_graph
from .synthflow import (
    DEFAULT_SOURCES,
    BurstSpec,
    ClusterDef,
    ClusterSpec,
    generate_burst_series,
    generate_cluster_corpus,
    write_ground_truth,
)
from .termbase import (
    DEFAULT_EVENT_LEXICON,
    DEFAULT_TOP_M,
    compute_tfidf,
    document_frequencies,
    load_lexicon,
    match_event_terms,
    write_term_report,
)

log = logging.getLogger(__name__)

FLOW_CORPUS = "flow_corpus.jsonl"
SERIES_RAW = "series_raw.csv"
SERIES_SMOOTHED = "series_smoothed.csv"
CORRELOGRAM_CSV = "correlogram.csv"
PEAKS_CSV = "peaks.csv"
NARROWED_CORPUS = "narrowed_corpus.jsonl"
TERMS_TSV = "terms.tsv"
EVENT_TERMS_TXT = "event_terms.txt"
AUGMENTED_QUERY_JSON = "augmented_query.json"
EVENT_CORPUS = "event_corpus.jsonl"
SOURCE_EDGES_TSV = "source_edges.tsv"
SOURCE_NODES_TSV = "source_nodes.tsv"
CLUSTERS_JSON = "clusters.json"
MANIFEST_TXT = "manifest.txt"

PIPELINE_ARTIFACTS = (
    FLOW_CORPUS,
    SERIES_RAW,
    SERIES_SMOOTHED,
    CORRELOGRAM_CSV,
    PEAKS_CSV,
    NARROWED_CORPUS,
    TERMS_TSV,
    EVENT_TERMS_TXT,
    AUGMENTED_QUERY_JSON,
    EVENT_CORPUS,
    SOURCE_EDGES_TSV,
    SOURCE_NODES_TSV,
    CLUSTERS_JSON,
)


@dataclass
class PipelineConfig:
    """Everything a stage needs; assembled from config file plus flags."""

    corpus: Path | None = None
    out_dir: Path | None = None
    query: str = ""
    exclude: str = ""
    stopwords: Path | None = None
    lexicon: Path | None = None
    template: Path | None = None
    window: int = DEFAULT_SMOOTHING_WINDOW
    scales: str = ""
    shifts: str = ""
    threshold: float = 0.8
    top_n: int = 10
    top_m: int = DEFAULT_TOP_M
    top_t: int = 25
    max_iter: int = 50
    terms: Path | None = None


_PATH_KEYS = {"corpus", "out_dir", "stopwords", "lexicon", "template", "terms"}
_INT_KEYS = {"window", "top_n", "top_m", "top_t", "max_iter"}
_FLOAT_KEYS = {"threshold"}
_STR_KEYS = {"query", "exclude", "scales", "shifts"}
_ALL_KEYS = _PATH_KEYS | _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; remap to 1."""

    def error(self, message: str):
        raise ConfigError(message)


def read_kv_file(path: Path) -> list[tuple[str, str]]:
    """Flat "key = value" lines; '#' comments and blanks ignored.

    Returned as pairs because some consumers allow repeated keys.
    """
    pairs = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _coerce(key: str, value: str, where: str):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except ValueError:
        raise ConfigError(f"{where}: key {key!r} needs a number, got {value!r}") from None
    if key in _PATH_KEYS:
        return Path(value)
    return value


def build_config(args: argparse.Namespace) -> PipelineConfig:
    values: dict = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        for key, value in read_kv_file(config_path):
            if key not in _ALL_KEYS:
                raise ConfigError(f"{config_path}: unknown config key {key!r}")
            values[key] = _coerce(key, value, str(config_path))
    for key in _ALL_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return PipelineConfig(**values)


def validate_config(config: PipelineConfig) -> None:
    if config.corpus is None:
        raise ConfigError("a corpus file is required (--corpus or config key 'corpus')")
    if config.out_dir is None:
        raise ConfigError("an output directory is required (--out-dir or 'out_dir')")
    for label, path in (
        ("corpus", config.corpus),
        ("stopwords", config.stopwords),
        ("lexicon", config.lexicon),
        ("template", config.template),
    ):
        if path is not None and not Path(path).is_file():
            raise ConfigError(f"{label} file not found: {path}")
    if config.window < 1 or config.window % 2 == 0:
        raise ConfigError(
            f"smoothing window must be odd and positive, got {config.window}"
        )
    for label, value in (
        ("top_n", config.top_n),
        ("top_m", config.top_m),
        ("top_t", config.top_t),
        ("max_iter", config.max_iter),
    ):
        if value < 1:
            raise ConfigError(f"{label} must be >= 1, got {value}")
    try:
        Path(config.out_dir).mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {config.out_dir}: {exc}") from None


def parse_query(query_text: str, exclude_text: str = "") -> FlowQuery | None:
    """";" separates AND-groups, "," separates OR-terms in a group.

    Empty query text means "no filtering" and returns None.
    """
    groups = []
    for part in (query_text or "").split(";"):
        if not part.strip():
            continue
        terms = set()
        for piece in part.split(","):
            if not piece.strip():
                continue
            term = normalize_term(piece)
            if not term:
                raise ConfigError(f"query term {piece.strip()!r} contains no usable tokens")
            terms.add(term)
        if terms:
            groups.append(frozenset(terms))
    excluded = set()
    for piece in (exclude_text or "").split(","):
        if not piece.strip():
            continue
        term = normalize_term(piece)
        if not term:
            raise ConfigError(f"excluded term {piece.strip()!r} contains no usable tokens")
        excluded.add(term)
    if not groups:
        if excluded:
            raise ConfigError("excluded terms need a base query")
        return None
    try:
        return FlowQuery(required_groups=groups, excluded_terms=frozenset(excluded))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_grid(text: str, name: str) -> list[int]:
    """"a..b" for an inclusive range, or a comma list of integers."""
    text = text.strip()
    try:
        if ".." in text:
            lo_text, _, hi_text = text.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        values = sorted({int(piece) for piece in text.split(",") if piece.strip()})
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise ConfigError(
            f"bad {name} grid {text!r}: use 'a..b' or a comma list of integers"
        ) from None


def resolve_grids(config: PipelineConfig, n: int) -> tuple[list[int], list[int]]:
    """Concrete scale/shift lists for a series of length n."""
    if n < 2:
        raise DataError(f"series of {n} day(s) is too short for correlation")
    if config.scales:
        scales = parse_grid(config.scales, "scale")
        bad = [k for k in scales if k < 2 or k > n]
        if bad:
            raise ConfigError(f"scales {bad} outside the valid range [2, {n}]")
    else:
        scales = list(range(min(7, n), n + 1)) if n >= 7 else list(range(2, n + 1))
    if config.shifts:
        shifts = parse_grid(config.shifts, "shift")
        bad = [l for l in shifts if l < 0 or l > n - 2]
        if bad:
            raise ConfigError(f"shifts {bad} outside the valid range [0, {n - 2}]")
    else:
        shifts = list(range(0, n - min(scales) + 1))
    return scales, shifts


def _load_template_for(config: PipelineConfig):
    if config.template is not None:
        return load_template(config.template)
    return DEFAULT_TEMPLATE


def _load_lexicon_for(config: PipelineConfig):
    if config.lexicon is not None:
        return load_lexicon(config.lexicon)
    return DEFAULT_EVENT_LEXICON


def _load_inputs(config: PipelineConfig) -> tuple[Corpus, dict[str, TokenizedDoc]]:
    corpus = load_corpus(config.corpus)
    stopwords = load_stopwords(config.stopwords) if config.stopwords else frozenset()
    return corpus, tokenize_corpus(corpus, stopwords)


def _flow(config: PipelineConfig) -> tuple[Corpus, dict[str, TokenizedDoc], FlowQuery | None]:
    corpus, tokenized = _load_inputs(config)
    query = parse_query(config.query, config.exclude)
    flow = filter_by_query(corpus, query, tokenized) if query is not None else corpus
    if len(flow) == 0:
        raise DataError("empty flow: the query matched no documents")
    return flow, tokenized, query


def cmd_series(config: PipelineConfig) -> int:
    """Write raw and smoothed daily dynamics of the filtered flow."""
    validate_config(config)
    flow, _, _ = _flow(config)
    series = build_daily_series(flow)
    out = Path(config.out_dir)
    write_series_csv(series, out / SERIES_RAW)
    write_series_csv(smooth(series, config.window), out / SERIES_SMOOTHED)
    log.info("series: %d docs over %d days", len(flow), len(series.values))
    return 0


def cmd_correlogram(config: PipelineConfig) -> int:
    """Write template correlation over the grid, plus the peak report."""
    validate_config(config)
    flow, _, _ = _flow(config)
    series = build_daily_series(flow)
    template = _load_template_for(config)
    scales, shifts = resolve_grids(config, len(series.values))
    corr = correlogram(series, template, scales=scales, shifts=shifts)
    out = Path(config.out_dir)
    write_correlogram_csv(corr, out / CORRELOGRAM_CSV)
    peaks = detect_peaks(corr, config.threshold, config.top_n)
    write_peaks_csv(peaks, out / PEAKS_CSV)
    if not corr.defined_cells():
        log.warning("correlogram: every window is flat, no defined cells")
    elif not peaks:
        log.warning("correlogram: no peak at or above threshold %g", config.threshold)
    else:
        best = peaks[0]
        log.info(
            "correlogram: best peak l=%d k=%d c=%.4f (%s..%s)",
            best.shift, best.scale, best.value, best.window_start, best.window_end,
        )
    return 0


def _write_event_terms(terms: list[str], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for term in terms:
            handle.write(term + "\n")


def _write_augmented_query(
    query: FlowQuery | None, event_terms: list[str], path: Path
) -> None:
    groups = [sorted(g) for g in query.required_groups] if query is not None else []
    excluded = sorted(query.excluded_terms) if query is not None else []
    if event_terms:
        groups = groups + [sorted(event_terms)]
    payload = {
        "required_groups": groups,
        "excluded_terms": excluded,
        "event_terms": list(event_terms),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def cmd_events(config: PipelineConfig) -> int:
    """Rank terms, match the event lexicon, narrow to event documents,
    and project the event flow onto sources."""
    validate_config(config)
    flow, tokenized, query = _flow(config)
    lexicon = _load_lexicon_for(config)
    tok_list = [tokenized[doc.id] for doc in flow]
    ranked = compute_tfidf(tok_list)
    out = Path(config.out_dir)
    write_term_report(ranked, out / TERMS_TSV)
    matched = match_event_terms(ranked, lexicon, top_m=config.top_m, tokenized=tok_list)
    _write_event_terms(matched, out / EVENT_TERMS_TXT)
    _write_augmented_query(query, matched, out / AUGMENTED_QUERY_JSON)
    if matched:
        event_query = FlowQuery(required_groups=[frozenset(matched)])
        event_corpus = filter_by_query(flow, event_query, tokenized)
    else:
        log.warning(
            "events: no lexicon term among the top %d ranked terms", config.top_m
        )
        event_corpus = Corpus([])
    save_corpus(event_corpus, out / EVENT_CORPUS)
    if len(event_corpus):
        graph = source_link_graph(event_corpus)
    else:
        graph = SourceGraph(nodes={}, edges={})
    write_source_graph(graph, out / SOURCE_EDGES_TSV, out / SOURCE_NODES_TSV)
    log.info(
        "events: %d matched terms, %d event docs, %d source links",
        len(matched), len(event_corpus), len(graph.edges),
    )
    return 0


def _read_event_terms(path: Path) -> list[str]:
    terms = []
    for line in path.read_text(encoding="utf-8").splitlines():
        term = normalize_term(line)
        if term:
            terms.append(term)
    return terms


def cmd_cluster(config: PipelineConfig) -> int:
    """Seeded k-means over the given corpus; one cluster per event term."""
    validate_config(config)
    terms_path = Path(config.terms) if config.terms else Path(config.out_dir) / EVENT_TERMS_TXT
    if not terms_path.is_file():
        raise ConfigError(
            f"no event terms at {terms_path}: run the events subcommand first,"
            " or point --terms at a term file"
        )
    seeds_terms = _read_event_terms(terms_path)
    if not seeds_terms:
        raise ConfigError(
            f"event term file {terms_path} is empty: run the events subcommand"
            " on a corpus that matches the lexicon, or pass --terms"
        )
    corpus, tokenized = _load_inputs(config)
    tok_list = [tokenized[doc.id] for doc in corpus]
    df = document_frequencies(tok_list)
    vectors = vectorize(tok_list, df, len(tok_list))
    vectorized_ids = {v.doc_id for v in vectors}
    omitted = [doc.id for doc in corpus if doc.id not in vectorized_ids]
    seeds = seed_centroids(seeds_terms)
    clustering = kmeans_seeded(
        vectors, seeds, max_iter=config.max_iter, top_t=config.top_t
    )
    write_cluster_report(
        clustering, vectors, Path(config.out_dir) / CLUSTERS_JSON, omitted_doc_ids=omitted
    )
    log.info(
        "cluster: k=%d, %d docs, %d iterations, Q=%.4f",
        len(seeds), len(vectors), clustering.iterations,
        clustering.q_history[-1] if clustering.q_history else 0.0,
    )
    return 0


def _read_top_peak(path: Path):
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        return None
    row = rows[0]
    return (
        int(row["l"]),
        int(row["k"]),
        float(row["c"]),
        date.fromisoformat(row["window_start"]),
        date.fromisoformat(row["window_end"]),
    )


def _write_manifest(out_dir: Path, notes: list[str]) -> None:
    lines = [f"# {note}" for note in notes]
    for name in sorted(PIPELINE_ARTIFACTS):
        path = out_dir / name
        if path.is_file():
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            lines.append(f"{name}\t{digest}")
    (out_dir / MANIFEST_TXT).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_pipeline(config: PipelineConfig) -> int:
    """All stages in order, sharing one output directory, ending with a
    digest manifest.  A stage failure aborts with the stage name; files
    already written stay in place."""
    validate_config(config)
    out = Path(config.out_dir)
    for name in PIPELINE_ARTIFACTS + (MANIFEST_TXT,):
        (out / name).unlink(missing_ok=True)
    notes: list[str] = []

    def run_stage(name: str, fn):
        try:
            return fn()
        except ConfigError as exc:
            raise ConfigError(f"stage {name}: {exc}") from exc
        except DataError as exc:
            raise type(exc)(f"stage {name}: {exc}") from exc
        except ValueError as exc:
            raise DataError(f"stage {name}: {exc}") from exc

    def stage_flow() -> Corpus:
        flow, _, _ = _flow(config)
        save_corpus(flow, out / FLOW_CORPUS)
        return flow

    flow = run_stage("flow", stage_flow)
    flow_config = dataclasses.replace(config, corpus=out / FLOW_CORPUS)

    def stage_dynamics() -> None:
        cmd_series(flow_config)
        cmd_correlogram(flow_config)

    run_stage("dynamics", stage_dynamics)

    def stage_narrowing() -> Path:
        peak = _read_top_peak(out / PEAKS_CSV)
        if peak is None:
            notes.append("narrowing: none (no peak at or above threshold)")
            return out / FLOW_CORPUS
        l, k, c, window_start, window_end = peak
        narrowed = filter_by_dates(flow, window_start, window_end)
        if len(narrowed) == 0:
            notes.append(
                f"narrowing: none (peak window {window_start}..{window_end} holds no documents)"
            )
            return out / FLOW_CORPUS
        save_corpus(narrowed, out / NARROWED_CORPUS)
        notes.append(
            f"narrowing: {window_start}..{window_end} (peak l={l} k={k} c={c!r})"
        )
        return out / NARROWED_CORPUS

    stage4_corpus = run_stage("narrowing", stage_narrowing)

    run_stage(
        "terms",
        lambda: cmd_events(dataclasses.replace(config, corpus=stage4_corpus)),
    )

    def stage_clustering() -> None:
        event_terms = _read_event_terms(out / EVENT_TERMS_TXT)
        if not event_terms:
            notes.append("clustering: skipped (no event terms matched)")
            return
        cluster_config = dataclasses.replace(
            config,
            corpus=out / EVENT_CORPUS,
            terms=out / EVENT_TERMS_TXT,
            query="",
            exclude="",
        )
        cmd_cluster(cluster_config)

    run_stage("clustering", stage_clustering)
    _write_manifest(out, notes)
    log.info("pipeline: done, manifest at %s", out / MANIFEST_TXT)
    return 0


def _spec_value(pairs: list[tuple[str, str]], key: str, default: str | None = None) -> str | None:
    hits = [value for k, value in pairs if k == key]
    if not hits:
        return default
    return hits[-1]


def _spec_number(pairs, key, default, caster, where):
    raw = _spec_value(pairs, key)
    if raw is None:
        return default
    try:
        return caster(raw)
    except ValueError:
        raise ConfigError(f"{where}: key {key!r} needs a number, got {raw!r}") from None


def load_burst_spec(path: Path, seed_override: int | None = None) -> BurstSpec:
    pairs = read_kv_file(path)
    known = {
        "length_days", "plant_shift", "plant_scale", "amplitude",
        "baseline", "noise_sigma", "seed", "start_date",
    }
    for key, _ in pairs:
        if key not in known:
            raise ConfigError(f"{path}: unknown burst spec key {key!r}")
    for key in ("length_days", "plant_shift", "plant_scale", "amplitude"):
        if _spec_value(pairs, key) is None:
            raise ConfigError(f"{path}: burst spec is missing key {key!r}")
    raw_start = _spec_value(pairs, "start_date", "2016-06-01")
    try:
        start = date.fromisoformat(raw_start)
    except ValueError:
        raise ConfigError(f"{path}: bad start_date {raw_start!r}") from None
    seed = _spec_number(pairs, "seed", 0, int, str(path))
    if seed_override is not None:
        seed = seed_override
    try:
        return BurstSpec(
            length_days=_spec_number(pairs, "length_days", None, int, str(path)),
            plant_shift=_spec_number(pairs, "plant_shift", None, int, str(path)),
            plant_scale=_spec_number(pairs, "plant_scale", None, int, str(path)),
            amplitude=_spec_number(pairs, "amplitude", None, float, str(path)),
            baseline=_spec_number(pairs, "baseline", 0.0, float, str(path)),
            noise_sigma=_spec_number(pairs, "noise_sigma", 0.0, float, str(path)),
            rng_seed=seed,
            start_date=start,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def load_cluster_spec(path: Path, seed_override: int | None = None) -> ClusterSpec:
    """Cluster spec: repeatable "cluster = keyword:count" lines plus
    sizing knobs; vocabularies are generated from the keywords."""
    pairs = read_kv_file(path)
    known = {
        "cluster", "vocab_size", "shared_size", "topical_terms_per_doc",
        "shared_terms_per_doc", "seed", "sources",
    }
    for key, _ in pairs:
        if key not in known:
            raise ConfigError(f"{path}: unknown cluster spec key {key!r}")
    cluster_lines = [value for key, value in pairs if key == "cluster"]
    if not cluster_lines:
        raise ConfigError(f"{path}: at least one 'cluster = keyword:count' line is required")
    vocab_size = _spec_number(pairs, "vocab_size", 20, int, str(path))
    shared_size = _spec_number(pairs, "shared_size", 50, int, str(path))
    seed = _spec_number(pairs, "seed", 0, int, str(path))
    if seed_override is not None:
        seed = seed_override
    defs = []
    for line in cluster_lines:
        keyword_text, sep, count_text = line.rpartition(":")
        if not sep:
            raise ConfigError(f"{path}: cluster line {line!r} is not 'keyword:count'")
        keyword = normalize_term(keyword_text)
        if not keyword:
            raise ConfigError(f"{path}: cluster keyword {keyword_text!r} has no tokens")
        try:
            count = int(count_text)
        except ValueError:
            raise ConfigError(f"{path}: cluster count {count_text!r} is not an integer") from None
        compact = keyword.replace(" ", "")
        vocab = tuple(f"{compact}topic{i:02d}" for i in range(vocab_size))
        try:
            defs.append(ClusterDef(keyword=keyword, topical_vocab=vocab, doc_count=count))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    sources_text = _spec_value(pairs, "sources")
    sources = (
        tuple(s.strip() for s in sources_text.split(",") if s.strip())
        if sources_text
        else DEFAULT_SOURCES
    )
    try:
        return ClusterSpec(
            clusters=tuple(defs),
            shared_vocab=tuple(f"common{i:02d}" for i in range(shared_size)),
            rng_seed=seed,
            topical_terms_per_doc=_spec_number(
                pairs, "topical_terms_per_doc", 12, int, str(path)
            ),
            shared_terms_per_doc=_spec_number(
                pairs, "shared_terms_per_doc", 5, int, str(path)
            ),
            sources=sources,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def cmd_synth(args: argparse.Namespace) -> int:
    """Generate a planted series (and optionally a planted corpus)."""
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    if not Path(args.burst_spec).is_file():
        raise ConfigError(f"burst spec file not found: {args.burst_spec}")
    burst = load_burst_spec(args.burst_spec, args.seed)
    template = load_template(args.template) if args.template else DEFAULT_TEMPLATE
    series = generate_burst_series(template, burst)
    write_series_csv(series, out / "synth_series.csv")
    log.info("synth: series of %d days written", len(series.values))
    if args.cluster_spec is not None:
        if not Path(args.cluster_spec).is_file():
            raise ConfigError(f"cluster spec file not found: {args.cluster_spec}")
        spec = load_cluster_spec(args.cluster_spec, args.seed)
        corpus, truth = generate_cluster_corpus(spec, template, burst)
        save_corpus(corpus, out / "synth_corpus.jsonl")
        write_ground_truth(truth, out / "synth_truth.tsv")
        log.info("synth: corpus of %d docs in %d clusters written",
                 len(corpus), len(spec.clusters))
    return 0


def _add_common_options(sub: argparse.ArgumentParser, with_terms: bool = False) -> None:
    sub.add_argument("--config", type=Path, help="flat key = value config file")
    sub.add_argument("--corpus", type=Path, help="JSONL corpus file")
    sub.add_argument("--query", help="AND-groups split by ';', OR-terms by ','")
    sub.add_argument("--exclude", help="comma list of excluded terms")
    sub.add_argument("--stopwords", type=Path, help="stopword file, one per line")
    sub.add_argument("--lexicon", type=Path, help="event lexicon file (default: built-in)")
    sub.add_argument("--template", type=Path, help="lifecycle template file (default: built-in)")
    sub.add_argument("--window", type=int, help=f"smoothing window in days (default {DEFAULT_SMOOTHING_WINDOW})")
    sub.add_argument("--scales", help="scale grid, 'a..b' or comma list (default 7..n)")
    sub.add_argument("--shifts", help="shift grid, 'a..b' or comma list (default all)")
    sub.add_argument("--threshold", type=float, help="peak threshold (default 0.8)")
    sub.add_argument("--top-n", type=int, dest="top_n", help="max peaks reported (default 10)")
    sub.add_argument("--top-m", type=int, dest="top_m", help="ranked terms searched for events (default 200)")
    sub.add_argument("--top-t", type=int, dest="top_t", help="terms kept per centroid (default 25)")
    sub.add_argument("--max-iter", type=int, dest="max_iter", help="k-means iteration cap (default 50)")
    sub.add_argument("--out-dir", type=Path, dest="out_dir", help="output directory")
    if with_terms:
        sub.add_argument("--terms", type=Path, help="event term file (default: out dir's)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="opflow",
        description="Detect the event basis of information operations in news flows.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    handlers = {
        "series": (cmd_series, "write raw and smoothed daily dynamics"),
        "correlogram": (cmd_correlogram, "correlate the flow with the lifecycle template"),
        "events": (cmd_events, "rank terms, match the event lexicon, build the source graph"),
        "cluster": (cmd_cluster, "seeded k-means over event documents"),
        "pipeline": (cmd_pipeline, "run every stage in order and write a manifest"),
    }
    for name, (handler, description) in handlers.items():
        sub = commands.add_parser(name, help=description)
        _add_common_options(sub, with_terms=(name in ("cluster", "pipeline")))
        sub.set_defaults(func=lambda args, h=handler: h(build_config(args)))

    synth = commands.add_parser("synth", help="generate planted fixtures")
    synth.add_argument("--burst-spec", type=Path, required=True, dest="burst_spec")
    synth.add_argument("--cluster-spec", type=Path, dest="cluster_spec")
    synth.add_argument("--template", type=Path, help="lifecycle template file (default: built-in)")
    synth.add_argument("--out-dir", type=Path, dest="out_dir", required=True)
    synth.add_argument("--seed", type=int, help="override the seeds in the spec files")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return 1
    except (DataError, ValueError) as exc:
        log.error("%s", exc)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        return 2
    except Exception:  # pragma: no cover - defensive
        log.exception("internal error")
        return 3


if __name__ == "__main__":
    sys.exit(main())
