"""Horizontal visibility graph of the event flow, projected onto sources.

Two days of the daily series see each other when every day strictly
between them sits strictly below both; ties block the line of sight.
Each visibility edge is then attributed to the dominant source (most
documents, ties to the lexicographically smallest name) of its two
days, producing a weighted graph over sources.  Days without documents
have no dominant source and contribute no source edges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .flowseries import DailySeries, build_daily_series


@dataclass
class VisibilityGraph:
    """Undirected graph over day indices of a series."""

    node_count: int
    edges: set[tuple[int, int]]  # (i, j) with i < j

    def degree(self, i: int) -> int:
        return sum(1 for a, b in self.edges if a == i or b == i)


@dataclass
class SourceGraph:
    """Undirected weighted graph over source names."""

    nodes: dict[str, int]  # source -> document count
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def weight(self, a: str, b: str) -> int:
        if a > b:
            a, b = b, a
        return self.edges.get((a, b), 0)


def horizontal_visibility_graph(series: DailySeries) -> VisibilityGraph:
    """Stack scan: maintain a strictly decreasing stack of open indices.

    Arriving at j, every stacked index strictly below x[j] is fully
    shadowed from anything to the right of j, so it links to j and pops.
    The surviving top (if any) still sees j; it pops too when its value
    only ties x[j], since the tie blocks its view past j.
    """
    values = series.values
    n = len(values)
    edges: set[tuple[int, int]] = set()
    stack: list[int] = []
    for j in range(n):
        while stack and values[stack[-1]] < values[j]:
            edges.add((stack.pop(), j))
        if stack:
            edges.add((stack[-1], j))
            if values[stack[-1]] == values[j]:
                stack.pop()
        stack.append(j)
    return VisibilityGraph(node_count=n, edges=edges)


def per_source_series(corpus: Corpus) -> dict[str, DailySeries]:
    """Daily document counts per source, all on the corpus-wide span."""
    whole = build_daily_series(corpus)
    start = whole.start_date
    n = len(whole.values)
    counts: dict[str, list[float]] = {}
    for doc in corpus.documents:
        per = counts.setdefault(doc.source, [0.0] * n)
        per[(doc.day() - start).days] += 1.0
    return {
        source: DailySeries(start_date=start, values=vals)
        for source, vals in counts.items()
    }


def _dominant_sources(corpus: Corpus, n: int, start) -> list[str | None]:
    by_day: list[Counter] = [Counter() for _ in range(n)]
    for doc in corpus.documents:
        by_day[(doc.day() - start).days][doc.source] += 1
    dominant: list[str | None] = []
    for c in by_day:
        if not c:
            dominant.append(None)
            continue
        # most documents wins; ties to the smallest name
        dominant.append(min(c, key=lambda s: (-c[s], s)))
    return dominant


def source_link_graph(corpus: Corpus) -> SourceGraph:
    """Project the flow's visibility edges onto per-day dominant sources."""
    series = build_daily_series(corpus)
    vg = horizontal_visibility_graph(series)
    dominant = _dominant_sources(corpus, len(series.values), series.start_date)
    nodes = Counter(doc.source for doc in corpus.documents)
    edges: dict[tuple[str, str], int] = {}
    for i, j in vg.edges:
        a, b = dominant[i], dominant[j]
        if a is None or b is None or a == b:
            continue
        if a > b:
            a, b = b, a
        edges[(a, b)] = edges.get((a, b), 0) + 1
    return SourceGraph(nodes=dict(nodes), edges=edges)


def write_source_graph(graph: SourceGraph, edges_path: str | Path, nodes_path: str | Path) -> None:
    """Tab-separated edge and node lists, sorted for stable output."""
    with open(edges_path, "w", encoding="utf-8") as handle:
        handle.write("source_a\tsource_b\tweight\n")
        for (a, b), w in sorted(graph.edges.items()):
            handle.write(f"{a}\t{b}\t{w}\n")
    with open(nodes_path, "w", encoding="utf-8") as handle:
        handle.write("source\tdoc_count\n")
        for source, count in sorted(graph.nodes.items()):
            handle.write(f"{source}\t{count}\n")
