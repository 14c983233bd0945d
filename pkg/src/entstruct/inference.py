"""Three-step inference of an entanglement structure from measured data.

Step 1 tests the full system for genuine multipartite entanglement.
Step 2 bounds the number of separable groups (intactness) from above and
the entanglement depth from below.  Step 3 scans subsets, largest
plausible size first, accepting disjoint violating subsets greedily as
certified groups; leftover parties stay as singletons.

Input is either a list of MeasurementRecords (full counts, enabling the
subset scan via marginal estimators) or an ExpectationTable of
pre-computed expectation values, which may include subset entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .errors import CountsFormatError, UsageError
from .states import Partition
from .tomo import (
    Estimate,
    MeasurementRecord,
    estimate_mz,
    estimate_product_expectation,
)
from .witnesses import (
    DEFAULT_GAMMA_GRID,
    ExpectationPair,
    depth_witness_value,
    kprod_bound,
    msep_bound,
    optimal_alpha,
    separability_witness_value,
)

OBSERVABLES = ("MZ", "MX", "A", "APRIME")

ASSUMPTIONS = (
    "Conclusions assume the source prepares one fixed entanglement structure "
    "(not a convex mixture of different structures) and that each recorded "
    "setting faithfully implements its stated observables. The proposed "
    "partition is the minimal structure consistent with every violation "
    "observed at the configured confidence; coarser structures are never "
    "excluded by these data, and subsets without a violation are left as "
    "singletons rather than certified separable."
)


@dataclass(frozen=True)
class InferenceConfig:
    """Decision parameters for all three steps.

    The default confidence is intentionally stricter than the 1-sigma
    headline reporting of the witness module: the subset scan runs
    hundreds of tests, and the full-system steps feed the scan, so a
    uniform 3-sigma criterion keeps the family-wise false-accept rate
    negligible.
    """

    confidence_sigmas: float = 3.0
    scan_alpha: float = 2.0
    gamma_grid: tuple[float, ...] = DEFAULT_GAMMA_GRID
    max_subset_size: int | None = None


@dataclass(frozen=True)
class TableEntry:
    observable: str
    parties: tuple[int, ...]
    value: float
    sigma: float = 0.0

    def __post_init__(self) -> None:
        if self.observable not in OBSERVABLES:
            raise UsageError(
                f"observable must be one of {OBSERVABLES}, got {self.observable!r}"
            )
        parties = tuple(sorted(int(p) for p in self.parties))
        if not parties or len(set(parties)) != len(parties) or parties[0] < 1:
            raise UsageError(f"parties must be distinct positive ints, got {self.parties}")
        if self.sigma < 0:
            raise UsageError(f"sigma must be non-negative, got {self.sigma}")
        object.__setattr__(self, "parties", parties)


@dataclass(frozen=True)
class ExpectationTable:
    n: int
    entries: tuple[TableEntry, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        for e in entries:
            if e.parties[-1] > self.n:
                raise UsageError(
                    f"entry {e.observable}{e.parties} exceeds n={self.n}"
                )
        object.__setattr__(self, "entries", entries)

    def lookup(self, observable: str, parties) -> Estimate | None:
        key = tuple(sorted(int(p) for p in parties))
        for e in self.entries:
            if e.observable == observable and e.parties == key:
                return Estimate(e.value, e.sigma)
        return None


class _RecordEstimates:
    """Estimator backend over uniform-setting count records."""

    def __init__(self, records) -> None:
        records = list(records)
        if not records:
            raise UsageError("no measurement records given")
        self.n = records[0].setting.n
        merged: dict[str, MeasurementRecord] = {}
        for rec in records:
            if rec.setting.n != self.n:
                raise UsageError("records disagree on the party count")
            labels = set(rec.setting.labels)
            if len(labels) != 1:
                continue  # mixed settings are legal data but unused here
            lab = labels.pop()
            if lab in merged:
                counts = dict(merged[lab].counts)
                for k, v in rec.counts.items():
                    counts[k] = counts.get(k, 0) + v
                merged[lab] = MeasurementRecord(rec.setting, counts)
            else:
                merged[lab] = rec
        self._by_label = merged

    def mz(self, parties) -> Estimate | None:
        rec = self._by_label.get("Z")
        return estimate_mz(rec, parties) if rec is not None else None

    def mx(self, parties) -> Estimate | None:
        rec = self._by_label.get("X")
        return estimate_product_expectation(rec, parties) if rec is not None else None

    def depth_pair(self) -> ExpectationPair | None:
        amix = self._by_label.get("AMIX")
        aplus = self._by_label.get("APLUS")
        if amix is None or aplus is None:
            return None
        everyone = tuple(range(1, self.n + 1))
        a = estimate_product_expectation(amix, everyone)
        ap = estimate_product_expectation(aplus, everyone)
        return ExpectationPair(a.value, ap.value, a.sigma, ap.sigma)


class _TableEstimates:
    def __init__(self, table: ExpectationTable) -> None:
        self.n = table.n
        self._table = table

    def mz(self, parties) -> Estimate | None:
        return self._table.lookup("MZ", parties)

    def mx(self, parties) -> Estimate | None:
        return self._table.lookup("MX", parties)

    def depth_pair(self) -> ExpectationPair | None:
        everyone = tuple(range(1, self.n + 1))
        a = self._table.lookup("A", everyone)
        ap = self._table.lookup("APRIME", everyone)
        if a is None or ap is None:
            return None
        return ExpectationPair(a.value, ap.value, a.sigma, ap.sigma)


def _make_estimates(data):
    if isinstance(data, ExpectationTable):
        return _TableEstimates(data)
    return _RecordEstimates(data)


class ScanResult(NamedTuple):
    subset: tuple[int, ...]
    value: float
    sigma: float
    bound: float
    violated: bool
    sign: int


def _scan_size(est, pool, size: int, alpha: float, conf: float) -> list[ScanResult]:
    bound = msep_bound(alpha, 2)
    out = []
    for subset in combinations(pool, size):
        mz = est.mz(subset)
        mx = est.mx(subset)
        if mz is None or mx is None:
            continue
        pair = ExpectationPair(mz.value, mx.value, mz.sigma, mx.sigma)
        wv = separability_witness_value(pair, alpha)
        violated = wv.value > bound + conf * wv.sigma
        out.append(ScanResult(subset, wv.value, wv.sigma, bound, violated, wv.sign))
    return out


def subset_witness_scan(
    data, size: int, alpha: float = 2.0, confidence_sigmas: float = 3.0
) -> list[ScanResult]:
    """Evaluate the two-group separability witness on every size-s subset
    (lexicographic order); a violation certifies entanglement within the
    subset.  Subsets without both Z and X data are skipped."""
    est = _make_estimates(data)
    if not 2 <= size <= est.n:
        raise UsageError(f"subset size must lie in 2..{est.n}, got {size}")
    return _scan_size(est, tuple(range(1, est.n + 1)), size, alpha, confidence_sigmas)


@dataclass(frozen=True)
class Evidence:
    subset: tuple[int, ...]
    witness: str
    value: float
    sigma: float
    bound: float
    verdict: str  # "violated" or "not_violated"


@dataclass(frozen=True)
class StructureReport:
    n: int
    gme: bool
    gme_margin: float
    intactness_upper: int | None
    depth_lower: int | None
    proposed_partition: tuple[tuple[int, ...], ...]
    evidence: tuple[Evidence, ...]
    assumptions: str
    confidence_sigmas: float


def infer_structure(data, config: InferenceConfig | None = None) -> StructureReport:
    """Run the three-step inference; see the module docstring.

    Requires full-system Z and X data; AMIX/APLUS data enable the depth
    step and a deeper starting point for the subset scan.
    """
    cfg = config or InferenceConfig()
    est = _make_estimates(data)
    n = est.n
    everyone = tuple(range(1, n + 1))
    conf = cfg.confidence_sigmas
    evidence: list[Evidence] = []

    mz = est.mz(everyone)
    mx = est.mx(everyone)
    if mz is None or mx is None:
        raise UsageError("full-system Z-basis and X-basis data are required")
    pair_full = ExpectationPair(mz.value, mx.value, mz.sigma, mx.sigma)

    # Step 1: genuine multipartite entanglement
    wv = separability_witness_value(pair_full, cfg.scan_alpha)
    bound2 = msep_bound(cfg.scan_alpha, 2)
    gme = wv.value > bound2 + conf * wv.sigma
    evidence.append(
        Evidence(everyone, f"sep(alpha={cfg.scan_alpha:g})", wv.value, wv.sigma,
                 bound2, "violated" if gme else "not_violated")
    )
    if gme:
        return StructureReport(
            n=n, gme=True, gme_margin=wv.value - bound2,
            intactness_upper=1, depth_lower=n,
            proposed_partition=(everyone,),
            evidence=tuple(evidence), assumptions=ASSUMPTIONS,
            confidence_sigmas=conf,
        )

    # Step 2a: intactness upper bound at robustness-optimal alpha per m
    intactness: int | None = None
    for m in range(2, n + 1):
        alpha = optimal_alpha(m)
        wv_m = separability_witness_value(pair_full, alpha)
        bound_m = msep_bound(alpha, m)
        hit = wv_m.value > bound_m + conf * wv_m.sigma
        evidence.append(
            Evidence(everyone, f"sep(alpha={alpha:g},m={m})", wv_m.value,
                     wv_m.sigma, bound_m, "violated" if hit else "not_violated")
        )
        if hit:
            intactness = m - 1
            break

    # Step 2b: depth lower bound over the gamma grid.
    # The certified producibility bounds cover eight parties only, so the
    # depth step is skipped for other system sizes.
    depth: int | None = None
    depth_pair = est.depth_pair() if n == 8 else None
    if depth_pair is not None:
        for gamma in cfg.gamma_grid:
            wv_d = depth_witness_value(depth_pair, gamma, n=n)
            best_k = None
            for k in range(n - 1, 0, -1):
                if wv_d.value > kprod_bound(k, gamma) + conf * wv_d.sigma:
                    best_k = k
                    break
            shown = best_k if best_k is not None else 1
            evidence.append(
                Evidence(everyone, f"depth(gamma={gamma:g},k={shown})",
                         wv_d.value, wv_d.sigma, kprod_bound(shown, gamma),
                         "violated" if best_k else "not_violated")
            )
            if best_k is not None and (depth is None or best_k + 1 > depth):
                depth = best_k + 1

    # Step 3: greedy subset scan from the largest plausible group size.
    # With depth evidence the minimal compatible partition needs a block of
    # at least that size; without it every size up to n-1 is on the table.
    start = depth if depth is not None else n - 1
    if intactness is not None:
        # <= intactness groups forces a block of at least ceil(n/intactness)
        start = max(start, math.ceil(n / intactness))
    if cfg.max_subset_size is not None:
        start = min(start, cfg.max_subset_size)
    start = max(2, min(start, n - 1))

    unassigned = set(everyone)
    groups: list[tuple[int, ...]] = []
    for size in range(start, 1, -1):
        if size > len(unassigned):
            continue
        results = _scan_size(est, tuple(sorted(unassigned)), size,
                             cfg.scan_alpha, conf)
        for r in results:
            evidence.append(
                Evidence(r.subset, f"sep(alpha={cfg.scan_alpha:g})", r.value,
                         r.sigma, r.bound,
                         "violated" if r.violated else "not_violated")
            )
        hits = sorted(
            (r for r in results if r.violated),
            key=lambda r: (-(r.value - r.bound), r.subset),
        )
        for r in hits:
            if set(r.subset) <= unassigned:
                groups.append(r.subset)
                unassigned -= set(r.subset)
    groups.extend((p,) for p in sorted(unassigned))
    partition = tuple(sorted(groups, key=min))

    return StructureReport(
        n=n, gme=False, gme_margin=wv.value - bound2,
        intactness_upper=intactness, depth_lower=depth,
        proposed_partition=partition,
        evidence=tuple(evidence), assumptions=ASSUMPTIONS,
        confidence_sigmas=conf,
    )


def consistency_check(report: StructureReport) -> list[str]:
    """Cross-examine a report; returns human-readable findings (empty when
    everything hangs together).  Inconsistencies are reported, never fixed."""
    findings = []
    partition = None
    try:
        partition = Partition(report.proposed_partition)
    except Exception as exc:  # malformed partitions are exactly what we look for
        findings.append(f"proposed partition is not a valid partition: {exc}")
    if report.gme and report.intactness_upper != 1:
        findings.append(
            f"GME reported but intactness_upper is {report.intactness_upper}, not 1"
        )
    if report.gme and partition is not None and partition.num_groups != 1:
        findings.append("GME reported but the proposed partition is not one block")
    if partition is not None and report.depth_lower is not None:
        if partition.max_group < report.depth_lower:
            findings.append(
                f"certified depth >= {report.depth_lower} but the largest proposed "
                f"group has only {partition.max_group} parties"
            )
    if partition is not None and report.intactness_upper is not None:
        if partition.num_groups > report.intactness_upper:
            findings.append(
                f"intactness <= {report.intactness_upper} but the proposal has "
                f"{partition.num_groups} groups; the proposal is incomplete"
            )
    if partition is not None and not report.gme:
        violated = {
            ev.subset for ev in report.evidence if ev.verdict == "violated"
        }
        for g in partition.groups:
            if len(g) > 1 and tuple(sorted(g)) not in violated:
                findings.append(
                    f"group {g} carries no violating evidence entry"
                )
    return findings


def report_to_dict(report: StructureReport) -> dict:
    """JSON-ready form of a report (schema 'entstruct/1')."""
    return {
        "schema": "entstruct/1",
        "kind": "structure_report",
        "n": report.n,
        "gme": report.gme,
        "gme_margin": report.gme_margin,
        "intactness_upper": report.intactness_upper,
        "depth_lower": report.depth_lower,
        "proposed_partition": [list(g) for g in report.proposed_partition],
        "confidence_sigmas": report.confidence_sigmas,
        "assumptions": report.assumptions,
        "evidence": [
            {
                "subset": list(ev.subset),
                "witness": ev.witness,
                "value": ev.value,
                "sigma": ev.sigma,
                "bound": ev.bound,
                "verdict": ev.verdict,
            }
            for ev in report.evidence
        ],
    }


def load_expectation_table(path) -> ExpectationTable:
    """Read an expectation table: {"n": N, "expectations": [{"observable":
    "MZ", "parties": [1,2], "value": 0.5, "sigma": 0.01}, ...]}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CountsFormatError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise CountsFormatError(f"{path}: top level must be an object")
    extra = set(doc) - {"n", "expectations"}
    if extra:
        raise CountsFormatError(f"{path}: unknown top-level keys {sorted(extra)}")
    if "n" not in doc or "expectations" not in doc:
        raise CountsFormatError(f"{path}: required keys 'n' and 'expectations' missing")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise CountsFormatError(f"{path}: 'n' must be a positive integer")
    if not isinstance(doc["expectations"], list) or not doc["expectations"]:
        raise CountsFormatError(f"{path}: 'expectations' must be a non-empty list")
    entries = []
    for i, raw in enumerate(doc["expectations"]):
        where = f"{path}: expectation {i}"
        if not isinstance(raw, dict):
            raise CountsFormatError(f"{where}: must be an object")
        extra = set(raw) - {"observable", "parties", "value", "sigma"}
        if extra:
            raise CountsFormatError(f"{where}: unknown keys {sorted(extra)}")
        try:
            entries.append(
                TableEntry(
                    observable=raw.get("observable"),
                    parties=tuple(raw.get("parties", ())),
                    value=float(raw.get("value")),
                    sigma=float(raw.get("sigma", 0.0)),
                )
            )
        except (UsageError, TypeError, ValueError) as exc:
            raise CountsFormatError(f"{where}: {exc}") from exc
    try:
        return ExpectationTable(n, tuple(entries))
    except UsageError as exc:
        raise CountsFormatError(f"{path}: {exc}") from exc
