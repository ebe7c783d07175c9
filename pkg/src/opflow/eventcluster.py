"""Keyword-seeded k-means over sparse tf-idf document vectors.

Documents are L2-normalized sparse term vectors; each cluster centroid
starts as a unit vector spread uniformly over one seed keyword group
and is re-estimated as the truncated, renormalized mean of its members.
Similarity is the plain dot product (cosine, since all vectors are unit
length with non-negative weights), so one assignment pass costs exactly
k*N similarity evaluations; these are counted so the linear per-pass
cost is checkable, not just claimed.

Documents orthogonal to every centroid go to a reserved "unassigned"
bucket (index 0) and never contribute to the clustering quality Q.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

UNASSIGNED = 0


class SimCounter:
    """Counts similarity evaluations; lets tests audit the per-pass work."""

    def __init__(self) -> None:
        self.count = 0

    def reset(self) -> None:
        self.count = 0


SIM_EVALUATIONS = SimCounter()


@dataclass
class DocVector:
    """Sparse, L2-normalized term-weight vector of one document."""

    doc_id: str
    weights: dict[str, float]

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))


@dataclass
class Centroid:
    """Unit-length representative vector of one cluster."""

    cluster_index: int
    weights: dict[str, float]
    seed_terms: list[str] = field(default_factory=list)


@dataclass
class Clustering:
    """Result of a seeded k-means run."""

    assignments: dict[str, int]
    centroids: list[Centroid]
    q_history: list[float]
    iterations: int

    def members(self, cluster_index: int) -> list[str]:
        return sorted(d for d, j in self.assignments.items() if j == cluster_index)


def vectorize(
    tokenized: list,  # list[TokenizedDoc]
    df: dict[str, int],
    n_docs: int,
) -> list[DocVector]:
    """tf * ln(N/df) weights per document, L2-normalized.

    Documents whose every term has zero idf (df == N) reduce to the zero
    vector; they are left out of the result and logged.
    """
    if n_docs < 1:
        raise ValueError("corpus size must be >= 1")
    idf = {}
    vectors = []
    omitted = []
    for tok in tokenized:
        weights: dict[str, float] = {}
        for term, tf in tok.term_counts.items():
            if term not in idf:
                idf[term] = math.log(n_docs / df[term])
            w = tf * idf[term]
            if w > 0.0:
                weights[term] = w
        if not weights:
            omitted.append(tok.doc_id)
            continue
        norm = math.sqrt(sum(w * w for w in weights.values()))
        vectors.append(
            DocVector(doc_id=tok.doc_id, weights={t: w / norm for t, w in weights.items()})
        )
    if omitted:
        log.warning("vectorize: omitted %d zero-weight docs: %s",
                    len(omitted), omitted[:5])
    return vectors


def seed_centroids(
    event_terms: list[str], groups: list[list[str]] | None = None
) -> list[Centroid]:
    """One centroid per keyword group (default: one group per term).

    A group's centroid is uniform over the distinct tokens of its terms
    (phrases contribute each constituent token), L2-normalized.
    """
    if not event_terms:
        raise ValueError("at least one event term is required")
    if groups is None:
        groups = [[t] for t in event_terms]
    seen: set[str] = set()
    for group in groups:
        if not group:
            raise ValueError("seed groups must be non-empty")
        for term in group:
            if term in seen:
                raise ValueError(f"term {term!r} appears in more than one seed group")
            seen.add(term)
    if seen != set(event_terms):
        raise ValueError("seed groups must cover exactly the event terms")
    centroids = []
    for j, group in enumerate(groups, start=1):
        tokens = sorted({tok for term in group for tok in term.split(" ")})
        w = 1.0 / math.sqrt(len(tokens))
        centroids.append(
            Centroid(cluster_index=j, weights={t: w for t in tokens}, seed_terms=list(group))
        )
    return centroids


def sim(d: DocVector, c: Centroid) -> float:
    """Dot product of the sparse weight maps; in [0, 1] for unit vectors
    with non-negative weights."""
    SIM_EVALUATIONS.count += 1
    a, b = d.weights, c.weights
    if len(b) < len(a):
        a, b = b, a
    return sum(w * b[t] for t, w in a.items() if t in b)


def _assign_with_sims(
    vectors: list[DocVector], centroids: list[Centroid]
) -> tuple[dict[str, int], dict[str, float]]:
    """One assignment pass; returns (assignments, best sim per doc).

    Exactly len(centroids) * len(vectors) sim evaluations.
    """
    assignments: dict[str, int] = {}
    best_sims: dict[str, float] = {}
    for vec in vectors:
        best_j = UNASSIGNED
        best_s = 0.0
        for c in centroids:
            s = sim(vec, c)
            if s > best_s:
                best_s = s
                best_j = c.cluster_index
        assignments[vec.doc_id] = best_j
        best_sims[vec.doc_id] = best_s
    return assignments, best_sims


def assign(vectors: list[DocVector], centroids: list[Centroid]) -> dict[str, int]:
    """Map each doc to the centroid with the largest similarity.

    Ties go to the smallest cluster index; docs with zero similarity to
    every centroid go to the UNASSIGNED bucket.
    """
    if not centroids:
        raise ValueError("at least one centroid is required")
    assignments, _ = _assign_with_sims(vectors, centroids)
    return assignments


def recompute_centroids(
    assignments: dict[str, int],
    vectors: list[DocVector],
    top_t: int,
    previous: list[Centroid],
) -> list[Centroid]:
    """Per cluster: mean of member vectors, truncated to the top_t
    heaviest terms (ties broken by term), renormalized.  Empty clusters
    keep their previous centroid."""
    if top_t < 1:
        raise ValueError(f"top_t must be >= 1, got {top_t}")
    by_id = {v.doc_id: v for v in vectors}
    members: dict[int, list[str]] = {c.cluster_index: [] for c in previous}
    for doc_id, j in assignments.items():
        if j != UNASSIGNED:
            members[j].append(doc_id)
    out = []
    for c in previous:
        ids = sorted(members[c.cluster_index])
        if not ids:
            out.append(c)
            continue
        sums: dict[str, float] = {}
        for doc_id in ids:
            for term, w in by_id[doc_id].weights.items():
                sums[term] = sums.get(term, 0.0) + w
        count = len(ids)
        mean = {t: s / count for t, s in sums.items()}
        kept = sorted(mean.items(), key=lambda item: (-item[1], item[0]))[:top_t]
        norm = math.sqrt(sum(w * w for _, w in kept))
        out.append(
            Centroid(
                cluster_index=c.cluster_index,
                weights={t: w / norm for t, w in kept},
                seed_terms=list(c.seed_terms),
            )
        )
    return out


def quality_q(
    assignments: dict[str, int],
    vectors: list[DocVector],
    centroids: list[Centroid],
) -> float:
    """Sum of member-to-centroid similarities; unassigned docs excluded."""
    by_index = {c.cluster_index: c for c in centroids}
    total = 0.0
    for vec in vectors:
        j = assignments.get(vec.doc_id, UNASSIGNED)
        if j != UNASSIGNED:
            total += sim(vec, by_index[j])
    return total


def kmeans_seeded(
    vectors: list[DocVector],
    seeds: list[Centroid],
    max_iter: int = 50,
    top_t: int = 25,
) -> Clustering:
    """Alternate assignment and centroid re-estimation until the
    assignment is a fixed point (or max_iter passes have run).

    q_history records Q of each pass, i.e. the sum of winning
    similarities against the centroids that produced the assignment.
    """
    if not seeds:
        raise ValueError("at least one seed centroid is required")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    centroids = list(seeds)
    q_history: list[float] = []
    prev: dict[str, int] | None = None
    iterations = 0
    assignments: dict[str, int] = {}
    for it in range(1, max_iter + 1):
        assignments, best_sims = _assign_with_sims(vectors, centroids)
        q = 0.0
        for vec in vectors:
            if assignments[vec.doc_id] != UNASSIGNED:
                q += best_sims[vec.doc_id]
        q_history.append(q)
        iterations = it
        if assignments == prev or it == max_iter:
            # centroids now in hand are the ones the final pass used
            break
        centroids = recompute_centroids(assignments, vectors, top_t, centroids)
        prev = assignments
    return Clustering(
        assignments=assignments,
        centroids=centroids,
        q_history=q_history,
        iterations=iterations,
    )


def write_cluster_report(
    clustering: Clustering,
    vectors: list[DocVector],
    path: str | Path,
    omitted_doc_ids: list[str] | None = None,
) -> None:
    """One JSON document describing clusters, members, and the Q trace."""
    by_id = {v.doc_id: v for v in vectors}
    clusters = []
    for c in clustering.centroids:
        member_ids = clustering.members(c.cluster_index)
        members = [
            {"doc_id": doc_id, "sim": sim(by_id[doc_id], c)} for doc_id in member_ids
        ]
        centroid_terms = [
            {"term": t, "weight": w}
            for t, w in sorted(c.weights.items(), key=lambda item: (-item[1], item[0]))
        ]
        clusters.append(
            {
                "index": c.cluster_index,
                "seed_terms": list(c.seed_terms),
                "centroid_terms": centroid_terms,
                "member_count": len(member_ids),
                "members": members,
            }
        )
    report = {
        "iterations": clustering.iterations,
        "q_history": clustering.q_history,
        "clusters": clusters,
        "unassigned_doc_ids": clustering.members(UNASSIGNED),
        "omitted_doc_ids": sorted(omitted_doc_ids or []),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")
