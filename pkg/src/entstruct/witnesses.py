"""The two witness families and the classification rules built on them.

Separability family: W_se(alpha) = alpha*M_Z + M_X (or the sign-flipped
variant alpha*M_Z - M_X), with the m-separable bound
max{alpha, alpha/2^(m-1) + 1} for alpha in (0, 2].

Depth family: W_de(gamma) = gamma*kappa^n*A - A', built from two xy-plane
single-qubit settings; a measured value above the k-producibility bound
beta_{n,k}(gamma) certifies entanglement depth at least k+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kprod_table
from .core import (
    THETA_MINUS,
    THETA_PLUS,
    DenseOperator,
    check_party_count,
    kron,
    pauli_xy_observable,
    P0,
    P1,
    SX,
)
from .errors import UsageError, ValidationError


def kappa_from_angles(theta_plus: float, theta_minus: float) -> float:
    """Normalization of the mean of two xy observables at the given angles."""
    return float(np.cos((theta_plus - theta_minus) / 2.0))


KAPPA = kappa_from_angles(THETA_PLUS, THETA_MINUS)  # cos(3/10)


def mz_operator(n: int) -> DenseOperator:
    """Projector onto the all-|0> plus all-|1> populations."""
    check_party_count(n)
    return kron([P0] * n) + kron([P1] * n)


def mx_operator(n: int) -> DenseOperator:
    """sigma_x on every party."""
    check_party_count(n)
    return kron([SX] * n)


@dataclass(frozen=True)
class SeparabilityWitness:
    """Parameters of W_se: alpha in (0, 2], sign selects +/- M_X."""

    n: int
    alpha: float
    sign: int = +1
    family = "separability"

    def __post_init__(self) -> None:
        check_party_count(self.n)
        if not 0.0 < self.alpha <= 2.0:
            raise ValidationError(f"alpha must lie in (0, 2], got {self.alpha}")
        if self.sign not in (+1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class DepthWitness:
    """Parameters of W_de; kappa is derived from the two setting angles."""

    n: int
    gamma: float
    theta_plus: float = THETA_PLUS
    theta_minus: float = THETA_MINUS
    family = "depth"

    def __post_init__(self) -> None:
        check_party_count(self.n)
        if self.gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")
        if abs(self.kappa) < 1e-12:
            raise ValidationError("setting angles are antipodal: kappa vanishes")

    @property
    def kappa(self) -> float:
        return kappa_from_angles(self.theta_plus, self.theta_minus)


def build_separability_witness(spec: SeparabilityWitness) -> DenseOperator:
    return spec.alpha * mz_operator(spec.n) + float(spec.sign) * mx_operator(spec.n)


class DepthOperators(NamedTuple):
    witness: DenseOperator
    a_total: DenseOperator
    aprime_total: DenseOperator


def build_depth_witness(spec: DepthWitness) -> DepthOperators:
    """Assemble W_de together with its two product observables.

    A is the n-fold product of the normalized mean setting
    (A_- + A_+)/(2 kappa); A' is the n-fold product of the plus setting.
    """
    a_plus = pauli_xy_observable(spec.theta_plus).matrix
    a_minus = pauli_xy_observable(spec.theta_minus).matrix
    mean = (a_minus + a_plus) / (2.0 * spec.kappa)
    a_total = kron([mean] * spec.n)
    aprime_total = kron([a_plus] * spec.n)
    witness = (spec.gamma * spec.kappa**spec.n) * a_total - aprime_total
    return DepthOperators(witness, a_total, aprime_total)


def msep_bound(alpha: float, m: int) -> float:
    """Maximum of W_se(alpha) over m-separable states: max{alpha, alpha/2^(m-1)+1}."""
    if not 0.0 < alpha <= 2.0:
        raise UsageError(f"alpha must lie in (0, 2], got {alpha}")
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise UsageError(f"m must be an integer >= 2, got {m!r}")
    return max(float(alpha), float(alpha) / 2 ** (m - 1) + 1.0)


def optimal_alpha(m: int) -> float:
    """The alpha at which the two branches of the m-separable bound meet;
    using it maximizes noise robustness of the m-separability test."""
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise UsageError(f"m must be an integer >= 2, got {m!r}")
    return 2 ** (m - 1) / (2 ** (m - 1) - 1.0)


@dataclass(frozen=True)
class ExpectationPair:
    """A measured (population, coherence) pair with standard errors.

    For the separability family the slots hold <M_Z> and <M_X>; for the
    depth family they hold <A> and <A'>.
    """

    value_z_or_a: float
    value_x_or_aprime: float
    sigma_z_or_a: float = 0.0
    sigma_x_or_aprime: float = 0.0

    def __post_init__(self) -> None:
        for v, s, name in (
            (self.value_z_or_a, self.sigma_z_or_a, "first"),
            (self.value_x_or_aprime, self.sigma_x_or_aprime, "second"),
        ):
            if s < 0:
                raise ValidationError(f"{name} sigma must be non-negative, got {s}")
            if abs(v) > 1.0 + 3.0 * s:
                raise ValidationError(
                    f"{name} value {v} is outside [-1, 1] by more than 3 sigma"
                )


class WitnessValue(NamedTuple):
    value: float
    sigma: float
    sign: int


def separability_witness_value(pair: ExpectationPair, alpha: float) -> WitnessValue:
    """Evaluate alpha*<M_Z> + sign*<M_X> with the sign chosen to maximize it."""
    if not 0.0 < alpha <= 2.0:
        raise UsageError(f"alpha must lie in (0, 2], got {alpha}")
    z, x = pair.value_z_or_a, pair.value_x_or_aprime
    sign = +1 if x >= 0 else -1
    value = alpha * z + abs(x)
    sigma = math.sqrt((alpha * pair.sigma_z_or_a) ** 2 + pair.sigma_x_or_aprime**2)
    return WitnessValue(value, sigma, sign)


def depth_witness_value(
    pair: ExpectationPair, gamma: float, n: int = 8, kappa: float = KAPPA
) -> WitnessValue:
    """Evaluate gamma*kappa^n*<A> - <A'> with propagated standard error."""
    if gamma <= 0:
        raise UsageError(f"gamma must be positive, got {gamma}")
    coef = gamma * kappa**n
    value = coef * pair.value_z_or_a - pair.value_x_or_aprime
    sigma = math.sqrt((coef * pair.sigma_z_or_a) ** 2 + pair.sigma_x_or_aprime**2)
    return WitnessValue(value, sigma, +1)


class BoundEntry(NamedTuple):
    value: float
    source: str  # "tabulated" or "computed"


# Depth classification defaults to the certified cells only; pass an explicit
# grid to range over the computed curve as well.
DEFAULT_GAMMA_GRID = (1.6, 2.0)


def kprod_bound_entry(k: int, gamma: float) -> BoundEntry:
    """beta_{8,k}(gamma) with its provenance.

    Certified cells are served verbatim; anything else is linearly
    interpolated from the computed see-saw curve and flagged "computed".
    """
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= 7:
        raise UsageError(f"k must be an integer in 1..7, got {k!r}")
    if gamma <= 0:
        raise UsageError(f"gamma must be positive, got {gamma}")
    for (tk, tg), val in kprod_table.TABULATED.items():
        if tk == int(k) and abs(tg - gamma) < 1e-9:
            return BoundEntry(val, "tabulated")
    gammas = kprod_table.COMPUTED_GAMMAS
    betas = kprod_table.COMPUTED_BETA.get(int(k), ())
    if not gammas or not betas:
        raise UsageError(
            f"no tabulated bound for (k={k}, gamma={gamma}) and the computed "
            "curve is unavailable; regenerate it with tools/regen_kprod_table.py"
        )
    if gamma < gammas[0] - 1e-9 or gamma > gammas[-1] + 1e-9:
        raise UsageError(
            f"gamma={gamma} is outside the computed range "
            f"[{gammas[0]}, {gammas[-1]}]; extrapolation is not supported"
        )
    value = float(np.interp(gamma, gammas, betas))
    return BoundEntry(value, "computed")


def kprod_bound(k: int, gamma: float) -> float:
    return kprod_bound_entry(k, gamma).value


_DI_BOUNDS = {1: 1.0, 2: math.sqrt(2.0), 3: 5.0 / 3.0, 4: 1.8428}


def di_bound(k: int, gamma: float = 2.0) -> float:
    """Device-independent depth bounds, available for gamma = 2 and k <= 4."""
    if abs(gamma - 2.0) > 1e-9:
        raise UsageError(f"device-independent bounds are only known for gamma=2, got {gamma}")
    if k not in _DI_BOUNDS:
        raise UsageError(f"device-independent bounds cover k in 1..4, got {k!r}")
    return _DI_BOUNDS[k]


def intactness_upper_bound(
    pair: ExpectationPair, n: int, confidence_sigmas: float = 1.0
) -> int | None:
    """Largest number of separable groups compatible with the measurement.

    Scans m = 2..n at the robustness-optimal alpha; a violation of the
    m-separable bound (by more than confidence_sigmas standard errors)
    rules m out, so the intactness is at most m-1.  Returns None when no
    m is ruled out.
    """
    check_party_count(n)
    for m in range(2, n + 1):
        alpha = optimal_alpha(m)
        wv = separability_witness_value(pair, alpha)
        if wv.value > msep_bound(alpha, m) + confidence_sigmas * wv.sigma:
            return m - 1
    return None


def depth_lower_bound(
    pair: ExpectationPair,
    gamma_grid=None,
    confidence_sigmas: float = 1.0,
    n: int = 8,
    kappa: float = KAPPA,
) -> int | None:
    """Smallest entanglement depth certified by the depth witness.

    Evaluates the witness on every gamma in the grid and finds the largest
    k whose producibility bound is exceeded by more than
    confidence_sigmas standard errors; the depth is then at least k+1.
    Returns None when not even the 1-producible bound is violated.
    """
    if n != 8:
        raise UsageError("producibility bounds are available for n=8 only")
    grid = DEFAULT_GAMMA_GRID if gamma_grid is None else tuple(gamma_grid)
    if not grid:
        raise UsageError("gamma_grid must not be empty")
    best: int | None = None
    for gamma in grid:
        wv = depth_witness_value(pair, gamma, n=n, kappa=kappa)
        for k in range(7, 0, -1):
            bound = kprod_bound(k, gamma)
            if wv.value > bound + confidence_sigmas * wv.sigma:
                if best is None or k + 1 > best:
                    best = k + 1
                break
    return best
