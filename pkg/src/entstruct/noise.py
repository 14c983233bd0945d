"""Closed-form noise robustness of the witness tests, and inversion of the
source noise model from measured expectations.

All thresholds are critical white-noise fractions p: the corresponding
test still fires strictly below them and stops firing at or above them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import check_party_count, expectation
from .errors import UsageError
from .states import Partition, StateDensity, product_structure, visibility_state
from .witnesses import (
    DepthWitness,
    SeparabilityWitness,
    build_depth_witness,
    build_separability_witness,
    kprod_bound,
    msep_bound,
)


def gme_noise_threshold(n: int, alpha: float = 2.0) -> float:
    """Critical white-noise fraction below which W_se(alpha) still detects
    genuine n-party entanglement of the noisy GHZ state."""
    check_party_count(n)
    if n < 2:
        raise UsageError("the GME test needs at least 2 parties")
    if not 0.0 < alpha <= 2.0:
        raise UsageError(f"alpha must lie in (0, 2], got {alpha}")
    return alpha / (2.0 + (2.0 - 2.0 ** (2 - n)) * alpha)


def intactness_noise_threshold(n: int, m: int) -> float:
    """Critical white-noise fraction below which the m-separability test
    (at the robustness-optimal alpha) still excludes m-separable states."""
    check_party_count(n)
    if not 2 <= m <= n:
        raise UsageError(f"m must lie in 2..{n}, got {m}")
    num = 2.0**m - 2.0
    den = 2.0 * (2.0**m - 2.0 ** (m - n) - 1.0)
    return num / den


def generalized_ghz_thresholds(
    n: int, theta: float, phi: float, m: int | None = None
) -> float:
    """Noise thresholds for the generalized GHZ state cos(theta)|0..0> +
    e^{i phi} sin(theta)|1..1>.

    With m=None returns the GME threshold, otherwise the m-separability
    threshold.  The effective coherence is s = sin(2 theta)|cos(phi)|;
    at phi = pi/2 or 3pi/2 a local phase rotation restores the full
    sin(2 theta), and that value is used instead.
    """
    check_party_count(n)
    if n < 2:
        raise UsageError("thresholds need at least 2 parties")
    s = float(np.sin(2 * theta) * abs(np.cos(phi)))
    if abs(np.cos(phi)) < 1e-12:
        s = float(abs(np.sin(2 * theta)))
    if m is None:
        return s / (2.0 + s - 2.0 ** (2 - n))
    if not 2 <= m <= n:
        raise UsageError(f"m must lie in 2..{n}, got {m}")
    num = 2.0**n * (2.0**m - 2.0) * s
    den = num + 2.0**m * (2.0**n - 2.0)
    if den == 0.0:
        return 0.0
    return num / den


class GammaEstimate(NamedTuple):
    gamma_w: float
    gamma_d: float
    valid: bool


def estimate_gammas(exp_z: float, exp_x: float, n: int) -> GammaEstimate:
    """Invert the dephasing + white-noise source model from measured
    <M_Z> and <M_X>.

    Values outside the physical simplex are returned as-is with
    valid=False; they signal model mismatch, not a computation error.
    """
    check_party_count(n)
    scale = 2.0 ** (n - 1) / (2.0 ** (n - 1) - 1.0)
    gamma_w = (1.0 - exp_z) * scale
    gamma_d = 1.0 - exp_x - gamma_w
    eps = 1e-12
    valid = (
        -eps <= gamma_w <= 1.0 + eps
        and -eps <= gamma_d <= 1.0 + eps
        and gamma_w + gamma_d <= 1.0 + eps
    )
    return GammaEstimate(gamma_w, gamma_d, valid)


@dataclass(frozen=True)
class MarginPoint:
    v1: float
    v2: float
    margin: float


def visibility_margin_curve(
    structure: Partition,
    witness: SeparabilityWitness | DepthWitness,
    v1_grid,
    v2_grid=(1.0,),
    target: int | None = None,
) -> list[MarginPoint]:
    """Witness value minus its applicable bound over a visibility grid.

    Every group of ``structure`` is prepared in the two-visibility noise
    model (group sizes must be even), so the zero crossing of the margin
    traces the detection boundary in the (v1, v2) plane.  ``target`` is
    the m to test against for the separability family (default 2, the
    GME test) or the k for the depth family (required).
    """
    if any(len(g) % 2 for g in structure.groups):
        raise UsageError("visibility model needs even group sizes")
    n = structure.n
    if witness.n != n:
        raise UsageError(
            f"witness acts on {witness.n} parties but structure has {n}"
        )
    if witness.family == "separability":
        m = 2 if target is None else int(target)
        bound = msep_bound(witness.alpha, m)
        op = build_separability_witness(witness)
    else:
        if target is None:
            raise UsageError("depth witness needs an explicit target k")
        bound = kprod_bound(int(target), witness.gamma)
        op = build_depth_witness(witness).witness
    points = []
    for v1 in v1_grid:
        for v2 in v2_grid:
            group_states = [
                visibility_state(len(g), float(v1), float(v2))
                for g in structure.groups
            ]
            state: StateDensity = product_structure(structure, group_states)
            margin = expectation(state, op) - bound
            points.append(MarginPoint(float(v1), float(v2), margin))
    return points
