"""Ranking-accuracy evaluation of CA performance predictions.

CAs are ordered by increasing (observed or predicted) performance; the error
in sequence (EIS) of a prediction is the number of CA pairs it orders
differently from the observed sequence, i.e. the Kendall-tau distance. The
degree of confidence is ``(1 - EIS / C(n, 2)) * 100``.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .model import ValidationError

OBSERVED = ("observed-throughput", "observed-plr", "observed-md")
PREDICTED = ("predicted-tid", "predicted-cdal", "predicted-cxls")
BASES = OBSERVED + PREDICTED

# bases where a larger value means better performance
_ASCENDING = {"observed-throughput", "predicted-cxls"}

ALIASES = {
    "throughput": "observed-throughput", "plr": "observed-plr", "md": "observed-md",
    "tid": "predicted-tid", "cdal": "predicted-cdal", "cxls": "predicted-cxls",
}


def canonical_basis(name: str) -> str:
    basis = ALIASES.get(name, name)
    if basis not in BASES:
        raise ValidationError(f"unknown basis {name!r}; expected one of {BASES}")
    return basis


def short_name(basis: str) -> str:
    return basis.split("-", 1)[1]


@dataclass(frozen=True)
class CaSequence:
    """CA labels in increasing performance order."""

    labels: tuple[str, ...]
    basis: str
    ties: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("CA labels must be unique")

    def __len__(self):
        return len(self.labels)


def order_cas(values: Mapping[str, float], basis: str) -> CaSequence:
    """Order CAs by increasing performance under ``basis``.

    Ties go to the lexicographically smaller label first and are reported.
    """
    basis = canonical_basis(basis)
    if len(values) < 2:
        raise ValidationError("need at least two CAs to order")
    labels = list(values)
    if len(set(labels)) != len(labels):
        raise ValidationError("duplicate CA labels")
    for label, v in values.items():
        if not math.isfinite(v):
            raise ValidationError(f"{label}: value {v!r} is not finite")
    sign = 1 if basis in _ASCENDING else -1
    ordered = sorted(labels, key=lambda l: (sign * values[l], l))
    groups: dict[float, list[str]] = {}
    for l in ordered:
        groups.setdefault(values[l], []).append(l)
    ties = tuple(tuple(g) for g in groups.values() if len(g) > 1)
    return CaSequence(tuple(ordered), basis, ties)


def _as_labels(seq: CaSequence | Sequence[str]) -> tuple[str, ...]:
    return seq.labels if isinstance(seq, CaSequence) else tuple(seq)


def error_in_sequence(reference: CaSequence | Sequence[str],
                      predicted: CaSequence | Sequence[str]) -> int:
    """Count label pairs ordered differently in the two sequences."""
    ref, pred = _as_labels(reference), _as_labels(predicted)
    if len(set(ref)) != len(ref) or len(set(pred)) != len(pred):
        raise ValidationError("CA labels must be unique")
    if set(ref) != set(pred):
        raise ValidationError(
            f"label sets differ: {sorted(set(ref) ^ set(pred))}")
    rank = {label: i for i, label in enumerate(pred)}
    return _inversions([rank[label] for label in ref])


def _inversions(seq: list[int]) -> int:
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    count = _inversions(left) + _inversions(right)
    left.sort()
    right.sort()
    j = 0
    for a in left:
        while j < len(right) and right[j] < a:
            j += 1
        count += j
    return count


def degree_of_confidence(eis: int, n: int) -> Fraction:
    """Exact percentage of correctly ordered CA pairs."""
    if n < 2:
        raise ValidationError("need at least two CAs")
    pairs = math.comb(n, 2)
    if not 0 <= eis <= pairs:
        raise ValidationError(f"EIS {eis} outside 0..{pairs} for {n} CAs")
    return (1 - Fraction(eis, pairs)) * 100


def doc_2dp(eis: int, n: int) -> float:
    """DoC cut to two decimals (truncated, not rounded)."""
    return math.floor(degree_of_confidence(eis, n) * 100) / 100


def eis_from_doc(doc: float, n: int) -> int:
    """Invert the DoC formula; the result must reproduce ``doc`` to 2 decimals."""
    pairs = math.comb(n, 2)
    eis = round((1 - doc / 100) * pairs)
    if not 0 <= eis <= pairs or abs(doc_2dp(eis, n) - doc) > 1e-9:
        raise ValidationError(f"DoC {doc} is not attainable with {n} CAs")
    return eis


@dataclass
class EvalReport:
    eis: dict[tuple[str, str], int]
    doc: dict[tuple[str, str], float]
    n: int
    sequences: dict[str, CaSequence]
    values: dict[str, dict[str, float]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        rows = []
        for (pred, obs), e in self.eis.items():
            rows.append({"prediction": short_name(pred), "observed": short_name(obs),
                         "eis": e, "doc": self.doc[(pred, obs)]})
        return {
            "n": self.n,
            "pairs": math.comb(self.n, 2),
            "results": rows,
            "sequences": {short_name(b): list(s.labels) for b, s in self.sequences.items()},
            "ties": {short_name(b): [list(t) for t in s.ties]
                     for b, s in self.sequences.items() if s.ties},
        }

    def table(self) -> str:
        preds = [b for b in PREDICTED if b in self.sequences]
        obs = [b for b in OBSERVED if b in self.sequences]
        head = f"{'observed':<12}" + "".join(f"{short_name(p):>16}" for p in preds)
        lines = [f"n = {self.n} CAs, {math.comb(self.n, 2)} pairwise comparisons",
                 "EIS / DoC (%)", head]
        for o in obs:
            cells = "".join(f"{self.eis[(p, o)]:>6} / {self.doc[(p, o)]:6.2f}" for p in preds)
            lines.append(f"{short_name(o):<12}" + cells)
        return "\n".join(lines)

    def write_csv(self, directory: str | Path) -> list[Path]:
        """One scatter file per (prediction, observed) pair."""
        out_dir = Path(directory)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for pred, obs in self.eis:
            path = out_dir / f"{short_name(pred)}_vs_{short_name(obs)}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["ca_label", "predicted_value", "observed_value"])
                for label in sorted(self.values[pred]):
                    w.writerow([label, repr(self.values[pred][label]),
                                repr(self.values[obs][label])])
            written.append(path)
        return written


def build_report(observed: Mapping[str, Mapping[str, float]],
                 predicted: Mapping[str, Mapping[str, float]]) -> EvalReport:
    """EIS and DoC for every (prediction basis, observed metric) pair."""
    if not observed or not predicted:
        raise ValidationError("need at least one observed metric and one prediction")
    obs = {canonical_basis(k): dict(v) for k, v in observed.items()}
    pred = {canonical_basis(k): dict(v) for k, v in predicted.items()}
    for name in obs:
        if name not in OBSERVED:
            raise ValidationError(f"{name!r} is not an observed metric")
    for name in pred:
        if name not in PREDICTED:
            raise ValidationError(f"{name!r} is not a prediction basis")
    values = {**obs, **pred}
    labels = None
    for name, vals in values.items():
        if labels is None:
            labels = set(vals)
        elif set(vals) != labels:
            raise ValidationError(
                f"{short_name(name)}: CA labels differ from the others: "
                f"{sorted(set(vals) ^ labels)}")
    n = len(labels)
    sequences = {name: order_cas(vals, name) for name, vals in values.items()}
    eis, doc = {}, {}
    for p in PREDICTED:
        if p not in pred:
            continue
        for o in OBSERVED:
            if o not in obs:
                continue
            e = error_in_sequence(sequences[o], sequences[p])
            eis[(p, o)] = e
            doc[(p, o)] = doc_2dp(e, n)
    return EvalReport(eis, doc, n, sequences, values)
