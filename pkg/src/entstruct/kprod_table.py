"""Lookup data for the producibility bounds beta_{8,k}(gamma) of the
8-party depth witness.

TABULATED holds the certified reference cells.  COMPUTED_GAMMAS /
COMPUTED_BETA hold a curve produced by this package's own see-saw
optimizer (tools/regen_kprod_table.py); those values are lower estimates
of the true maxima, refined over many restarts, and are flagged as
"computed" wherever they are served.
"""

from __future__ import annotations

# (k, gamma) -> bound for the 8-party witness, certified reference values.
TABULATED: dict[tuple[int, float], float] = {
    (1, 2.0): 0.8365,
    (2, 2.0): 1.0450,
    (2, 1.6): 0.7904,
    (3, 2.0): 1.1699,
    (3, 1.6): 0.9137,
    (4, 2.0): 1.3856,
    (5, 2.0): 1.6357,
    (6, 2.0): 1.8858,
    (7, 2.0): 2.0578,
}


# See-saw curve over the canonical k-producible partitions.
COMPUTED_GAMMAS: tuple[float, ...] = ((0.1), (0.2), (0.3), (0.4), (0.5), (0.6), (0.7), (0.8), (0.9), (1.0), (1.1), (1.2), (1.3), (1.4), (1.5), (1.6), (1.7), (1.8), (1.9), (2.0))

COMPUTED_BETA: dict[int, tuple[float, ...]] = {
    1: (0.952761, 0.907371, 0.863891, 0.822360, 0.782800, 0.745210, 0.709573, 0.675853, 0.644001, 0.613954, 0.585642, 0.558987, 0.533908, 0.510320, 0.534730, 0.593160, 0.652683, 0.713157, 0.774461, 0.836492),
    2: (0.968763, 0.939384, 0.911771, 0.885828, 0.861455, 0.838552, 0.817021, 0.796768, 0.777703, 0.759741, 0.742802, 0.726812, 0.711702, 0.697408, 0.728020, 0.790353, 0.853283, 0.916741, 0.980668, 1.045011),
    3: (0.978742, 0.959128, 0.941023, 0.924300, 0.908840, 0.894533, 0.881279, 0.868985, 0.857568, 0.846952, 0.837068, 0.827854, 0.823399, 0.848291, 0.878557, 0.913661, 0.974173, 1.039085, 1.104325, 1.169859),
    4: (0.991412, 0.983769, 0.976938, 0.970809, 0.965287, 0.960292, 0.955759, 0.951752, 0.968187, 0.989226, 1.014583, 1.043943, 1.076979, 1.113363, 1.152779, 1.194926, 1.239527, 1.286325, 1.335090, 1.385614),
    5: (0.997878, 0.999413, 1.005719, 1.016383, 1.031324, 1.050423, 1.073525, 1.100439, 1.130947, 1.164813, 1.201787, 1.241614, 1.284046, 1.328841, 1.375773, 1.424629, 1.475217, 1.527360, 1.580899, 1.635693),
    6: (1.018009, 1.040342, 1.066728, 1.096875, 1.130481, 1.167248, 1.206888, 1.249126, 1.293708, 1.340400, 1.388990, 1.439285, 1.491113, 1.544320, 1.598767, 1.654333, 1.710908, 1.768395, 1.826709, 1.885772),
    7: (1.035108, 1.073322, 1.114376, 1.158011, 1.203984, 1.252065, 1.302042, 1.353722, 1.406928, 1.461503, 1.517304, 1.574205, 1.632092, 1.690866, 1.750437, 1.810727, 1.871666, 1.933193, 1.995252, 2.057794),
}
