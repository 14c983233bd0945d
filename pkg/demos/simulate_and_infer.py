#!/usr/bin/env python3
# End-to-end pipeline on one simulated experiment, at two noise levels.
#
# Prepares the 6+2 interferometer geometry, samples the four canonical
# settings, and runs the structure inference.  At 1% white noise the
# pipeline recovers the preparation structure.  At 5% the depth
# certificate drops from 6 to 5, the subset scan can no longer justify a
# 6-party block, and the report flags the gap instead of inventing a
# partition: inconsistencies are reported, never papered over.

import argparse

from entstruct import (
    InferenceConfig,
    MeasurementSetting,
    consistency_check,
    geometry_to_structure,
    ghz,
    infer_structure,
    product_structure,
    sample_counts,
    white_noise_mix,
)

SETTINGS = ("Z", "X", "AMIX", "APLUS")


def run_once(partition, noise_p, shots, seed):
    blocks = [ghz(len(g)) for g in partition.groups]
    state = white_noise_mix(product_structure(partition, blocks), noise_p)
    records = [
        sample_counts(state, MeasurementSetting.uniform(lbl, 8), shots,
                      seed=[seed, i])
        for i, lbl in enumerate(SETTINGS)
    ]
    return infer_structure(records, InferenceConfig())


def show(report, partition):
    print(f"  gme: {report.gme}  intactness <= {report.intactness_upper}  "
          f"depth >= {report.depth_lower}")
    print(f"  proposed partition: {report.proposed_partition}")
    for ev in report.evidence:
        if ev.verdict != "violated":
            continue
        parties = "+".join(str(p) for p in ev.subset)
        print(f"    {ev.witness:<24} {parties:<17} value {ev.value:7.4f} "
              f"vs bound {ev.bound:7.4f}")
    findings = consistency_check(report)
    for finding in findings:
        print(f"  ! {finding}")
    matched = report.proposed_partition == partition.groups
    print(f"  matches the preparation: {matched}")
    return matched


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--shots", type=int, default=100000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    partition = geometry_to_structure(pbs1=True, pbs2=True, pbs3=False)
    print(f"geometry UUD -> structure {partition.groups}")

    print("\nwhite noise p = 0.01:")
    ok = show(run_once(partition, 0.01, args.shots, args.seed), partition)
    assert ok

    print("\nwhite noise p = 0.05:")
    show(run_once(partition, 0.05, args.shots, args.seed), partition)
    print("\nat 5% the data only certify depth >= 5, so a 6-party group is")
    print("no longer the minimal explanation; the scan stops at size 5 and")
    print("the consistency check reports the mismatch explicitly.")


if __name__ == "__main__":
    main()
