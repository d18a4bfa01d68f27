"""Set-based analytics over a normalized corpus.

All metrics operate on exact post-normalization identities: concepts as
(category, term) pairs and triples as (s, p, o).  Nothing here scores
correctness; the numbers describe how much the models' outputs overlap
and diverge.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InsufficientModels, ProvenanceWarning, TooFewSlides, UnknownBaselineModel
from .records import Corpus, ProvenanceRecord, SlideKey

SetKind = Literal["concepts", "triples"]

# Jaccard of two empty sets.  Pinned to 1.0: two extractors that both
# return nothing are in perfect agreement, which is also what makes
# dual-run comparisons of empty triple sets report 1.0.
EMPTY_SET_JACCARD = 1.0

STABLE = "Stable"
MODERATE = "Moderate"
UNSTABLE = "Unstable"


def jaccard(a: frozenset, b: frozenset) -> float:
    """|a ∩ b| / |a ∪ b|, with the empty/empty convention above."""
    if not a and not b:
        return EMPTY_SET_JACCARD
    return len(a & b) / len(a | b)


def _model_set(record: ProvenanceRecord, model: str, kind: SetKind) -> frozenset:
    ext = record.models.get(model)
    if ext is None:
        return frozenset()  # missing model contributes an empty set
    return ext.concept_identities() if kind == "concepts" else ext.triple_identities()


def corpus_models(corpus: Corpus) -> list[str]:
    """All model names appearing anywhere in the corpus, sorted."""
    names: set[str] = set()
    for record in corpus.values():
        names.update(record.models)
    return sorted(names)


# --------------------------------------------------------------------------
# disagreement


@dataclass(frozen=True)
class SlideDisagreement:
    key: SlideKey
    concept_union_size: int
    triple_union_size: int


def disagreement(record: ProvenanceRecord) -> SlideDisagreement:
    """Size of the union of all models' sets: total semantic breadth."""
    concepts: set = set()
    triples: set = set()
    for ext in record.models.values():
        concepts |= ext.concept_identities()
        triples |= ext.triple_identities()
    return SlideDisagreement(record.key, len(concepts), len(triples))


def corpus_disagreement(corpus: Corpus) -> dict[SlideKey, SlideDisagreement]:
    return {key: disagreement(corpus[key]) for key in sorted(corpus)}


# --------------------------------------------------------------------------
# pairwise similarity


@dataclass
class JaccardMatrix:
    models: list[str]
    values: np.ndarray  # symmetric, diagonal 1.0
    kind: SetKind

    def pair_mean(self, a: str, b: str) -> float:
        return float(self.values[self.models.index(a), self.models.index(b)])


def pairwise_jaccard(
    corpus: Corpus, kind: SetKind
) -> tuple[JaccardMatrix, dict[tuple[str, str], dict[SlideKey, float]]]:
    """Per-slide Jaccard for every unordered model pair plus per-pair means.

    Means are unweighted across all slides; a model missing from a slide
    contributes an empty set.  Raises InsufficientModels when fewer than
    two models appear corpus-wide.
    """
    models = corpus_models(corpus)
    if len(models) < 2:
        raise InsufficientModels(f"pairwise similarity needs >= 2 models, found {len(models)}")

    keys = sorted(corpus)
    per_slide: dict[tuple[str, str], dict[SlideKey, float]] = {}
    n = len(models)
    values = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            pair = (models[i], models[j])
            slide_values = {
                key: jaccard(_model_set(corpus[key], models[i], kind),
                             _model_set(corpus[key], models[j], kind))
                for key in keys
            }
            per_slide[pair] = slide_values
            mean = sum(slide_values.values()) / len(keys)
            values[i, j] = values[j, i] = mean
    return JaccardMatrix(models=models, values=values, kind=kind), per_slide


# --------------------------------------------------------------------------
# lecture aggregation


@dataclass(frozen=True)
class LectureAggregate:
    lecture_id: int
    slide_count: int
    mean_concept_disagreement: float
    mean_triple_disagreement: float


def lecture_aggregate(corpus: Corpus) -> dict[int, LectureAggregate]:
    """Arithmetic mean of per-slide disagreement within each lecture."""
    by_lecture: dict[int, list[SlideDisagreement]] = {}
    for key in sorted(corpus):
        by_lecture.setdefault(key.lecture_id, []).append(disagreement(corpus[key]))
    return {
        lecture_id: LectureAggregate(
            lecture_id=lecture_id,
            slide_count=len(items),
            mean_concept_disagreement=sum(d.concept_union_size for d in items) / len(items),
            mean_triple_disagreement=sum(d.triple_union_size for d in items) / len(items),
        )
        for lecture_id, items in sorted(by_lecture.items())
    }


# --------------------------------------------------------------------------
# stability classification


@dataclass(frozen=True)
class StabilityLabel:
    key: SlideKey
    label: str  # STABLE / MODERATE / UNSTABLE
    d_concept: int


def stability_bands(values: list[int]) -> tuple[float, float]:
    """(Q1, Q3) of the values, linear interpolation between order statistics."""
    q1, q3 = np.percentile(np.asarray(values, dtype=float), [25, 75])
    return float(q1), float(q3)


def classify_stability(corpus: Corpus) -> list[StabilityLabel]:
    """Three-band labels from quartiles of concept disagreement.

    d <= Q1 is Stable, d > Q3 is Unstable, anything between is Moderate;
    every slide receives exactly one label.
    """
    if len(corpus) < 4:
        raise TooFewSlides(f"stability classification needs >= 4 slides, got {len(corpus)}")
    keys = sorted(corpus)
    d_values = [disagreement(corpus[key]).concept_union_size for key in keys]
    q1, q3 = stability_bands(d_values)
    labels = []
    for key, d in zip(keys, d_values):
        if d <= q1:
            label = STABLE
        elif d > q3:
            label = UNSTABLE
        else:
            label = MODERATE
        labels.append(StabilityLabel(key, label, d))
    return labels


# --------------------------------------------------------------------------
# per-model footprint


@dataclass(frozen=True)
class ModelFootprint:
    model: str
    mean_concepts: float
    mean_triples: float


def model_footprint(corpus: Corpus) -> dict[str, ModelFootprint]:
    """Per-model mean concept/triple counts over all slides.

    A model missing from a slide counts as zero on that slide; one
    warning is emitted per model with missing slides.
    """
    models = corpus_models(corpus)
    keys = sorted(corpus)
    result: dict[str, ModelFootprint] = {}
    for model in models:
        concept_counts = []
        triple_counts = []
        missing = 0
        for key in keys:
            ext = corpus[key].models.get(model)
            if ext is None:
                missing += 1
                concept_counts.append(0)
                triple_counts.append(0)
            else:
                concept_counts.append(len(ext.concepts))
                triple_counts.append(len(ext.triples))
        if missing:
            warnings.warn(
                f"model {model!r} missing from {missing} of {len(keys)} slides; counted as 0",
                ProvenanceWarning,
                stacklevel=2,
            )
        result[model] = ModelFootprint(
            model=model,
            mean_concepts=sum(concept_counts) / len(keys),
            mean_triples=sum(triple_counts) / len(keys),
        )
    return result


def densest_model(corpus: Corpus) -> str:
    """Model with the highest mean concept count (ties break lexicographically)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProvenanceWarning)
        footprints = model_footprint(corpus)
    return max(sorted(footprints), key=lambda m: footprints[m].mean_concepts)


# --------------------------------------------------------------------------
# single-model coverage loss


@dataclass(frozen=True)
class CoverageLoss:
    key: SlideKey
    concept_loss: float
    triple_loss: float
    baseline_model: str


@dataclass
class CoverageReport:
    baseline_model: str
    losses: list[CoverageLoss]
    concept_mean: float
    concept_median: float
    triple_mean: float
    triple_median: float


def coverage_loss(corpus: Corpus, baseline_model: str | None = None) -> CoverageReport:
    """Fraction of the multi-model union missed by a single baseline model.

    loss = |U \\ S_baseline| / |U| per slide, defined 0 when U is empty.
    The default baseline is the densest model by mean concept count.
    """
    if baseline_model is None:
        baseline_model = densest_model(corpus)
    elif baseline_model not in corpus_models(corpus):
        raise UnknownBaselineModel(f"baseline model {baseline_model!r} not present in corpus")

    losses: list[CoverageLoss] = []
    for key in sorted(corpus):
        record = corpus[key]
        concept_union: set = set()
        triple_union: set = set()
        for ext in record.models.values():
            concept_union |= ext.concept_identities()
            triple_union |= ext.triple_identities()
        base_concepts = _model_set(record, baseline_model, "concepts")
        base_triples = _model_set(record, baseline_model, "triples")
        c_loss = len(concept_union - base_concepts) / len(concept_union) if concept_union else 0.0
        t_loss = len(triple_union - base_triples) / len(triple_union) if triple_union else 0.0
        losses.append(CoverageLoss(key, c_loss, t_loss, baseline_model))

    c_vals = [l.concept_loss for l in losses]
    t_vals = [l.triple_loss for l in losses]
    return CoverageReport(
        baseline_model=baseline_model,
        losses=losses,
        concept_mean=sum(c_vals) / len(c_vals),
        concept_median=float(np.median(c_vals)),
        triple_mean=sum(t_vals) / len(t_vals),
        triple_median=float(np.median(t_vals)),
    )
