"""Audit protocols: hash verification, tamper injection, time gaps, dual runs.

Tampering operates on in-memory copies only; persisting a tampered
record back to disk is an explicit, separate step used by destructive
demos.  All randomized choices flow from a caller-supplied seed so every
experiment replays exactly.
"""

from __future__ import annotations

import copy
import random
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .commitment import Commitment, commit_record
from .errors import DisjointCorpora, ProvenanceWarning, UnregisteredCorpus
from .ledger import Ledger
from .metrics import jaccard
from .records import (
    Concept,
    Corpus,
    ProvenanceRecord,
    SlideKey,
    Triple,
    canonical_bytes,
    load_corpus,
    record_path,
)

MATCH = "Match"
MISMATCH = "Mismatch"
UNREGISTERED = "Unregistered"


@dataclass(frozen=True)
class VerificationResult:
    key: SlideKey
    recomputed: Commitment
    on_chain: str | None
    verdict: str


def verify_slide(record: ProvenanceRecord, ledger: Ledger) -> VerificationResult:
    """Recompute the record's commitment and compare with the stored hash.

    Hex comparison is case-insensitive; absence of a registry entry is a
    value (Unregistered), not an error.
    """
    recomputed = commit_record(record)
    stored = ledger.get_slide(record.key)
    if stored is None:
        return VerificationResult(record.key, recomputed, None, UNREGISTERED)
    verdict = MATCH if recomputed.matches_hex(stored.slide_hash) else MISMATCH
    return VerificationResult(record.key, recomputed, stored.slide_hash, verdict)


def verify_corpus(corpus: Corpus, ledger: Ledger) -> list[VerificationResult]:
    return [verify_slide(corpus[key], ledger) for key in sorted(corpus)]


# --------------------------------------------------------------------------
# tamper injection


class TamperKind(Enum):
    MODIFY_CONCEPT_TERM = "ModifyConceptTerm"
    ALTER_TRIPLE = "AlterTriple"
    DELETE_TRIPLE = "DeleteTriple"
    INJECT_SPURIOUS_ELEMENT = "InjectSpuriousElement"
    EDIT_EVIDENCE = "EditEvidence"


@dataclass(frozen=True)
class TamperOp:
    kind: TamperKind
    target: str   # path into the record, e.g. models/<name>/triples/2
    payload: str  # replacement or injected text ("" for deletions)


def applicable_kinds(record: ProvenanceRecord) -> list[TamperKind]:
    """Tamper kinds that have material to act on in this record."""
    kinds = [TamperKind.INJECT_SPURIOUS_ELEMENT]
    if any(ext.concepts for ext in record.models.values()):
        kinds.append(TamperKind.MODIFY_CONCEPT_TERM)
    if any(ext.triples for ext in record.models.values()):
        kinds.append(TamperKind.ALTER_TRIPLE)
        kinds.append(TamperKind.DELETE_TRIPLE)
    if any(ext.evidence for ext in record.models.values()):
        kinds.append(TamperKind.EDIT_EVIDENCE)
    return sorted(kinds, key=lambda k: k.value)


def _models_with(record: ProvenanceRecord, attr: str) -> list[str]:
    return sorted(name for name, ext in record.models.items() if getattr(ext, attr))


def _fresh_suffix(rng: random.Random) -> str:
    return f"tampered {rng.randrange(10**6)}"


def tamper_record(
    record: ProvenanceRecord, kind: TamperKind, rng: random.Random
) -> tuple[ProvenanceRecord, TamperOp]:
    """Apply one perturbation of the given kind to a copy of the record.

    The returned record is guaranteed to have different canonical bytes.
    Raises ValueError when the record lacks material for the kind.
    """
    if kind not in applicable_kinds(record):
        raise ValueError(f"{kind.value} not applicable to record {record.key}")
    tampered = copy.deepcopy(record)

    if kind is TamperKind.MODIFY_CONCEPT_TERM:
        name = rng.choice(_models_with(tampered, "concepts"))
        ext = tampered.models[name]
        idx = rng.randrange(len(ext.concepts))
        old = ext.concepts[idx]
        identities = ext.concept_identities()
        while True:
            new_term = f"{old.term} {_fresh_suffix(rng)}"
            if (old.category, new_term) not in identities:
                break
        concepts = list(ext.concepts)
        concepts[idx] = Concept(old.category, new_term, old.evidence)
        tampered.models[name] = _replace_ext(ext, concepts=tuple(concepts))
        op = TamperOp(kind, f"models/{name}/concepts/{idx}/term", new_term)

    elif kind is TamperKind.ALTER_TRIPLE:
        name = rng.choice(_models_with(tampered, "triples"))
        ext = tampered.models[name]
        idx = rng.randrange(len(ext.triples))
        old = ext.triples[idx]
        identities = ext.triple_identities()
        while True:
            new_o = f"{old.o} {_fresh_suffix(rng)}"
            if (old.s, old.p, new_o) not in identities:
                break
        triples = list(ext.triples)
        triples[idx] = Triple(old.s, old.p, new_o, old.confidence)
        tampered.models[name] = _replace_ext(ext, triples=tuple(triples))
        op = TamperOp(kind, f"models/{name}/triples/{idx}/o", new_o)

    elif kind is TamperKind.DELETE_TRIPLE:
        name = rng.choice(_models_with(tampered, "triples"))
        ext = tampered.models[name]
        idx = rng.randrange(len(ext.triples))
        triples = list(ext.triples)
        del triples[idx]
        tampered.models[name] = _replace_ext(ext, triples=tuple(triples))
        op = TamperOp(kind, f"models/{name}/triples/{idx}", "")

    elif kind is TamperKind.INJECT_SPURIOUS_ELEMENT:
        name = rng.choice(sorted(tampered.models))
        ext = tampered.models[name]
        if rng.random() < 0.5:
            identities = ext.concept_identities()
            while True:
                term = f"spurious {rng.randrange(10**6)}"
                if ("tampered", term) not in identities:
                    break
            injected = Concept("tampered", term)
            tampered.models[name] = _replace_ext(ext, concepts=ext.concepts + (injected,))
            op = TamperOp(kind, f"models/{name}/concepts/+", term)
        else:
            identities = ext.triple_identities()
            while True:
                subject = f"spurious {rng.randrange(10**6)}"
                if (subject, "relates to", "tampered target") not in identities:
                    break
            injected_t = Triple(subject, "relates to", "tampered target")
            tampered.models[name] = _replace_ext(ext, triples=ext.triples + (injected_t,))
            op = TamperOp(kind, f"models/{name}/triples/+", subject)

    elif kind is TamperKind.EDIT_EVIDENCE:
        name = rng.choice(_models_with(tampered, "evidence"))
        ext = tampered.models[name]
        idx = rng.randrange(len(ext.evidence))
        edited = ext.evidence[idx] + f" [{_fresh_suffix(rng)}]"
        evidence = list(ext.evidence)
        evidence[idx] = edited
        tampered.models[name] = _replace_ext(ext, evidence=tuple(evidence))
        op = TamperOp(kind, f"models/{name}/evidence/{idx}", edited)

    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(f"unknown tamper kind {kind}")

    if canonical_bytes(tampered) == canonical_bytes(record):
        raise AssertionError(f"tamper op {op} produced identical canonical bytes")
    return tampered, op


def _replace_ext(ext, **changes):
    from dataclasses import replace

    return replace(ext, **changes)


@dataclass(frozen=True)
class TamperTrial:
    key: SlideKey
    op: TamperOp
    verdict: str
    tampered: ProvenanceRecord


@dataclass
class TamperReport:
    trials: list[TamperTrial]
    seed: int

    @property
    def total(self) -> int:
        return len(self.trials)

    @property
    def detected(self) -> int:
        return sum(1 for t in self.trials if t.verdict == MISMATCH)

    @property
    def detection_rate(self) -> float:
        # vacuously perfect for the empty protocol (0/0)
        return self.detected / self.total if self.total else 1.0


def tamper_experiment(corpus: Corpus, ledger: Ledger, n: int, seed: int) -> TamperReport:
    """Seeded tamper-detection protocol.

    Selects n slides, applies one randomly chosen applicable perturbation
    to an in-memory copy of each, and verifies the copies against the
    registry.  Requires every corpus slide to be registered.
    """
    if n < 0 or n > len(corpus):
        raise ValueError(f"tamper count {n} out of range for corpus of {len(corpus)}")
    missing = [key for key in sorted(corpus) if not ledger.is_registered(key)]
    if missing:
        raise UnregisteredCorpus(f"{len(missing)} corpus slides unregistered, first: {missing[0]}")

    rng = random.Random(seed)
    chosen = rng.sample(sorted(corpus), n)
    trials: list[TamperTrial] = []
    for key in chosen:
        record = corpus[key]
        kind = rng.choice(applicable_kinds(record))
        tampered, op = tamper_record(record, kind, rng)
        result = verify_slide(tampered, ledger)
        trials.append(TamperTrial(key, op, result.verdict, tampered))
    return TamperReport(trials=trials, seed=seed)


def write_tampered(record: ProvenanceRecord, root: Path | str) -> Path:
    """Destructively persist a tampered record over its corpus file."""
    path = record_path(root, record.key)
    path.write_bytes(canonical_bytes(record))
    return path


# --------------------------------------------------------------------------
# time gaps


@dataclass(frozen=True)
class TimeGap:
    key: SlideKey
    delta_seconds: float  # chain time minus local time
    anomaly: bool         # chain earlier than local


@dataclass(frozen=True)
class TimeGapSummary:
    count: int
    mean: float
    minimum: float
    maximum: float
    stddev: float
    anomalies: int


def time_gaps(
    local_times: dict[SlideKey, float], ledger: Ledger
) -> tuple[list[TimeGap], TimeGapSummary]:
    """Per-slide chain-minus-local deltas with distribution summary.

    Negative deltas (chain earlier than local creation) are flagged as
    ordering anomalies.  Every slide in ``local_times`` must be
    registered.
    """
    missing = [key for key in sorted(local_times) if not ledger.is_registered(key)]
    if missing:
        raise UnregisteredCorpus(f"{len(missing)} slides unregistered, first: {missing[0]}")
    gaps = []
    for key in sorted(local_times):
        stored = ledger.get_slide(key)
        delta = float(stored.timestamp - local_times[key])
        gaps.append(TimeGap(key, delta, delta < 0))
    deltas = np.array([g.delta_seconds for g in gaps])
    summary = TimeGapSummary(
        count=len(gaps),
        mean=float(deltas.mean()),
        minimum=float(deltas.min()),
        maximum=float(deltas.max()),
        stddev=float(deltas.std()),  # population stddev
        anomalies=sum(1 for g in gaps if g.anomaly),
    )
    return gaps, summary


def local_mtimes(root: Path | str) -> dict[SlideKey, float]:
    """Filesystem mtimes of each slide file under the corpus layout."""
    result = load_corpus(root)
    return {
        key: record_path(root, key).stat().st_mtime for key in sorted(result.records)
    }


def load_time_manifest(path: Path | str) -> dict[SlideKey, float]:
    """Read local creation times from a JSON manifest.

    Format: a list of objects with lecture_id, slide_id, and t_local
    (seconds).  Manifests make time-gap experiments reproducible where
    mtimes are not portable.
    """
    import json

    entries = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(entries, list):
        raise ValueError("time manifest must be a JSON list")
    result: dict[SlideKey, float] = {}
    for entry in entries:
        key = SlideKey(int(entry["lecture_id"]), int(entry["slide_id"]))
        result[key] = float(entry["t_local"])
    return result


# --------------------------------------------------------------------------
# dual-run comparison


@dataclass(frozen=True)
class RunPair:
    key: SlideKey
    model: str
    concept_jaccard: float
    triple_jaccard: float


@dataclass(frozen=True)
class AsymmetricPair:
    key: SlideKey
    model: str
    present_in: str  # "a" or "b"


@dataclass
class RunComparison:
    pairs: list[RunPair]
    asymmetric: list[AsymmetricPair]
    byte_equal: dict[SlideKey, bool]
    only_in_a: list[SlideKey]
    only_in_b: list[SlideKey]

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_concept_perfect(self) -> int:
        return sum(1 for p in self.pairs if p.concept_jaccard == 1.0)

    @property
    def n_triple_perfect(self) -> int:
        return sum(1 for p in self.pairs if p.triple_jaccard == 1.0)

    @property
    def n_perfect(self) -> int:
        return sum(1 for p in self.pairs if p.concept_jaccard == 1.0 and p.triple_jaccard == 1.0)

    @property
    def n_byte_equal(self) -> int:
        return sum(1 for equal in self.byte_equal.values() if equal)

    @property
    def identical(self) -> bool:
        return (
            not self.asymmetric
            and self.n_perfect == self.n_pairs
            and self.n_byte_equal == len(self.byte_equal)
        )


def compare_corpora(corpus_a: Corpus, corpus_b: Corpus) -> RunComparison:
    """Model-by-model Jaccard between two runs over their common slides."""
    common = sorted(set(corpus_a) & set(corpus_b))
    if not common:
        raise DisjointCorpora("runs share no slide keys")

    pairs: list[RunPair] = []
    asymmetric: list[AsymmetricPair] = []
    byte_equal: dict[SlideKey, bool] = {}
    for key in common:
        rec_a, rec_b = corpus_a[key], corpus_b[key]
        byte_equal[key] = canonical_bytes(rec_a) == canonical_bytes(rec_b)
        for model in sorted(set(rec_a.models) | set(rec_b.models)):
            in_a, in_b = model in rec_a.models, model in rec_b.models
            if in_a and in_b:
                pairs.append(
                    RunPair(
                        key,
                        model,
                        jaccard(rec_a.models[model].concept_identities(),
                                rec_b.models[model].concept_identities()),
                        jaccard(rec_a.models[model].triple_identities(),
                                rec_b.models[model].triple_identities()),
                    )
                )
            else:
                asymmetric.append(AsymmetricPair(key, model, "a" if in_a else "b"))
    if asymmetric:
        warnings.warn(
            f"{len(asymmetric)} (slide, model) pairs present in only one run; "
            "reported separately, excluded from similarity counts",
            ProvenanceWarning,
            stacklevel=2,
        )
    return RunComparison(
        pairs=pairs,
        asymmetric=asymmetric,
        byte_equal=byte_equal,
        only_in_a=sorted(set(corpus_a) - set(corpus_b)),
        only_in_b=sorted(set(corpus_b) - set(corpus_a)),
    )


def compare_runs(root_a: Path | str, root_b: Path | str) -> RunComparison:
    """Load two corpus directories and compare them slide by slide."""
    corpus_a = load_corpus(root_a).records
    corpus_b = load_corpus(root_b).records
    return compare_corpora(corpus_a, corpus_b)
