"""Two independent baths: half-chain purity is frozen while the pair decoheres."""
import argparse

import numpy as np

from pairdecay.experiments import (ExperimentSpec, build_configuration, half_purity_check,
                                   halves, run_trajectory)

p = argparse.ArgumentParser()
p.add_argument("--qubits", type=int, default=14)
p.add_argument("--steps", type=int, default=2000)
p.add_argument("--stride", type=int, default=100)
p.add_argument("--seed", type=int, default=2006)
args = p.parse_args()

spec = ExperimentSpec("c", "chaotic", args.qubits, 0.01, args.steps,
                      record_stride=args.stride, seed=args.seed)
chain = build_configuration(spec)
left, right = halves(spec)
rows = []
rec = run_trajectory(spec, args.seed, observer=lambda t, s: rows.append(
    (t, half_purity_check(s, left, chain), half_purity_check(s, right, chain))))
print(" t     P_pair    C_pair   P_left        P_right")
for (t, pl, pr), c, pp in zip(rows, rec.concurrence, rec.purity):
    print(f"{t:5d}  {pp:.6f}  {c:.6f}  {pl:.12f}  {pr:.12f}")
print("max |P_half - P_half(0)| =", np.max(np.abs(np.array(rows)[:, 1:] - rows[0][1:])))
