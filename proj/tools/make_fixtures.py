"""Regenerates the virtual-device calibration fixtures in data/."""

import json
import pathlib
import random

ROWS, COLS = 4, 5
DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def grid_pairs(rows, cols):
    def index(r, c):
        return r * cols + (c if r % 2 == 0 else cols - 1 - c)

    pairs = set()
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pairs.add(tuple(sorted((index(r, c), index(r, c + 1)))))
            if r + 1 < rows:
                pairs.add(tuple(sorted((index(r, c), index(r + 1, c)))))
    return sorted(pairs)


def device(seed, f1, f2, ro, t1, t2_ratio, durations, crosstalk):
    rng = random.Random(seed)
    n = ROWS * COLS
    pairs = grid_pairs(ROWS, COLS)
    t1s = {q: rng.uniform(*t1) for q in range(n)}
    return {
        "qubits": n,
        "single_qubit_fidelity": {str(q): round(rng.uniform(*f1), 5) for q in range(n)},
        "two_qubit_fidelity": [[f"{a}-{b}", round(rng.uniform(*f2), 4)] for a, b in pairs],
        "readout_fidelity": {str(q): round(rng.uniform(*ro), 4) for q in range(n)},
        "t1_ns": {str(q): round(t1s[q], 0) for q in range(n)},
        "t2_ns": {str(q): round(t1s[q] * rng.uniform(*t2_ratio), 0) for q in range(n)},
        "gate_durations_ns": durations,
        "coupling_map": [list(p) for p in pairs],
        "crosstalk_strength": crosstalk,
    }


def halve_coherence(calib):
    stale = json.loads(json.dumps(calib))
    for key in ("t1_ns", "t2_ns"):
        stale[key] = {q: v / 2 for q, v in stale[key].items()}
    return stale


def main():
    one_q = {g: 40 for g in ("x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz")}
    a = device(
        seed=20,
        f1=(0.9993, 0.9999),
        f2=(0.985, 0.997),
        ro=(0.96, 0.99),
        t1=(40_000, 120_000),
        t2_ratio=(0.4, 0.9),
        durations={**one_q, "cx": 80, "cz": 60, "swap": 240, "measure": 500},
        crosstalk=0.02,
    )
    b = device(
        seed=21,
        f1=(0.9995, 0.99995),
        f2=(0.988, 0.998),
        ro=(0.95, 0.985),
        t1=(30_000, 90_000),
        t2_ratio=(0.3, 0.8),
        durations={**one_q, "cx": 100, "cz": 80, "swap": 300, "measure": 700},
        crosstalk=0.04,
    )
    for name, calib in (("vq20-a", a), ("vq20-b", b), ("vq20-a-stale", halve_coherence(a))):
        (DATA / f"{name}.json").write_text(json.dumps(calib, indent=2) + "\n")


if __name__ == "__main__":
    main()
