#!/usr/bin/env python3
"""Witness values for the four reference states under every propagation method.

Prints the comparison table for the bundled 2-qubit schedule along with
the training-set rms of each method.
"""

import argparse

from qnnwitness.fixtures import fixture_schedule
from qnnwitness.hamiltonian import load_schedule
from qnnwitness.trainer import rms_error
from qnnwitness.witness import (
    METHODS,
    PairStateKind,
    WITNESS_TARGETS,
    build_training_set,
    make_pair_state,
    witness_value,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--schedule", default="table2", help="schedule JSON path or bundled fixture name")
    args = parser.parse_args()
    schedule = fixture_schedule(args.schedule) if args.schedule in ("table2", "table3") else load_schedule(args.schedule)

    print(f"{'state':6s} {'target':>8s} " + " ".join(f"{m:>12s}" for m in METHODS))
    for kind in PairStateKind:
        state = make_pair_state(kind, (0, 1), schedule.n_qubits)
        values = [witness_value(state, (0, 1), schedule, m) for m in METHODS]
        print(f"{kind.value:6s} {WITNESS_TARGETS[kind]:8.3f} " + " ".join(f"{v:12.3e}" for v in values))

    ts = build_training_set(schedule.n_qubits)
    rms = {m: rms_error(schedule, ts, m) for m in ("exact", "chunked")}
    print(f"\nrms over {len(ts)} training items: " + "  ".join(f"{m}={v:.2e}" for m, v in rms.items()))


if __name__ == "__main__":
    main()
