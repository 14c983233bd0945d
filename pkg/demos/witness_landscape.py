#!/usr/bin/env python3
# Survey both witness families over the canonical 8-party structures.
#
# For each structure: the four canonical expectation values, the
# separability witness at the robustness-optimal alpha for each m,
# and the depth witness at gamma = 2.  Shows which class memberships
# each ideal state rules out.

import numpy as np

from entstruct import (
    DepthWitness,
    Partition,
    SeparabilityWitness,
    build_depth_witness,
    build_separability_witness,
    expectation,
    ghz,
    kprod_bound,
    msep_bound,
    mx_operator,
    mz_operator,
    optimal_alpha,
    product_structure,
)

STRUCTURES = {
    "8": (8,),
    "7+1": (7, 1),
    "6+2": (6, 2),
    "5+3": (5, 3),
    "4+4": (4, 4),
    "4+2+2": (4, 2, 2),
    "2+2+2+2": (2, 2, 2, 2),
}


def build(sizes):
    groups, start = [], 1
    for s in sizes:
        groups.append(tuple(range(start, start + s)))
        start += s
    part = Partition(tuple(groups))
    return product_structure(part, [ghz(len(g)) for g in part.groups])


def main():
    n = 8
    mz_op, mx_op = mz_operator(n), mx_operator(n)
    depth_ops = build_depth_witness(DepthWitness(n, 2.0))

    print("ideal expectation values")
    print(f"{'structure':>9}  {'<MZ>':>7}  {'<MX>':>7}  {'<A>':>8}  {'<A,>':>8}")
    states = {}
    for name, sizes in STRUCTURES.items():
        state = build(sizes)
        states[name] = state
        mz = expectation(state, mz_op)
        mx = expectation(state, mx_op)
        a = expectation(state, depth_ops.a_total)
        ap = expectation(state, depth_ops.aprime_total)
        print(f"{name:>9}  {mz:7.4f}  {mx:7.4f}  {a:8.4f}  {ap:8.4f}")

    print()
    print("separability family: witness minus bound at optimal alpha(m)")
    header = "  ".join(f"m={m:<2}" for m in range(2, 6))
    print(f"{'structure':>9}  {header}   (positive = m-separability excluded)")
    for name, state in states.items():
        margins = []
        for m in range(2, 6):
            alpha = optimal_alpha(m)
            w_op = build_separability_witness(SeparabilityWitness(n, alpha))
            margin = expectation(state, w_op.matrix) - msep_bound(alpha, m)
            margins.append(f"{margin:+5.2f}")
        print(f"{name:>9}  " + "  ".join(margins))

    print()
    print("depth family at gamma=2: witness minus k-producible bound")
    header = "  ".join(f"k={k:<2}" for k in range(1, 8))
    print(f"{'structure':>9}  {header}   (positive = depth > k)")
    for name, state in states.items():
        w = expectation(state, depth_ops.witness)
        margins = [f"{w - kprod_bound(k, 2.0):+5.2f}" for k in range(1, 8)]
        print(f"{name:>9}  " + "  ".join(margins))


if __name__ == "__main__":
    main()
