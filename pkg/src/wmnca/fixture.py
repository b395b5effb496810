"""Regression check against the published 13-CA ranking results.

The bundled fixture holds two published CA sequences (observed throughput
and the CXLS_wt prediction), the published DoC table and the EIS counts
behind it. Counts for PLR and MD are not stated directly; they are the
unique integers that reproduce the DoC table at n = 13.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .evaluation import (build_report, canonical_basis, doc_2dp, eis_from_doc,
                         error_in_sequence)
from .model import ParseError, ValidationError

TOLERANCE = 0.01


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    actual: float | None
    passed: bool

    def line(self) -> str:
        actual = "n/a" if self.actual is None else f"{self.actual:g}"
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}={actual} (expected {self.expected:g}) {status}"


def load_fixture(path: str | Path | None = None) -> dict:
    try:
        if path is None:
            text = resources.files("wmnca").joinpath("data/published_results.json").read_text()
        else:
            text = Path(path).read_text()
        data = json.loads(text)
    except FileNotFoundError as exc:
        raise ParseError(f"fixture not found: {exc.filename}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"fixture line {exc.lineno}") from None
    for key in ("n", "sequences", "sequence_eis", "doc_table", "eis"):
        if key not in data:
            raise ParseError("missing field", f"fixture.{key}")
    return data


def reproduce_fixture(path: str | Path | None = None) -> tuple[dict, list[Check]]:
    """Recompute the fixture's EIS and DoC values; returns (report, checks)."""
    data = load_fixture(path)
    n = data["n"]
    checks = []

    seqs = {canonical_basis(k): v for k, v in data["sequences"].items()}
    target = data["sequence_eis"]
    obs_key = canonical_basis(target["observed"])
    pred_key = canonical_basis(target["prediction"])
    try:
        got = error_in_sequence(seqs[obs_key], seqs[pred_key])
    except (KeyError, ValidationError):
        got = None
    checks.append(Check(f"EIS({target['observed']}, {target['prediction']})",
                        target["eis"], got, got == target["eis"]))

    for metric, row in data["doc_table"].items():
        for basis, doc in row.items():
            eis = data["eis"].get(metric, {}).get(basis)
            got_doc = None if eis is None else doc_2dp(eis, n)
            ok = got_doc is not None and abs(got_doc - doc) <= TOLERANCE
            checks.append(Check(f"DoC({metric}, {basis})", doc, got_doc, ok))
            try:
                inverted = eis_from_doc(doc, n)
            except ValidationError:
                inverted = None
            checks.append(Check(f"EIS from DoC({metric}, {basis})", eis if eis is not None else -1,
                                inverted, inverted is not None and inverted == eis))

    report = None
    if len(seqs) >= 2 and got is not None:
        # sequence positions stand in for metric values (only ranks matter)
        values = {b: {label: float(i) for i, label in enumerate(s)} for b, s in seqs.items()}
        observed = {b: v for b, v in values.items() if b.startswith("observed")}
        predicted = {b: v for b, v in values.items() if b.startswith("predicted")}
        report = build_report(observed, predicted).as_dict()

    summary = {
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "expected": c.expected, "actual": c.actual,
                    "pass": c.passed} for c in checks],
        "report": report,
    }
    return summary, checks
