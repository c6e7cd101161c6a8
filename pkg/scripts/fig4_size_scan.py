"""Werner-curve deviation of a single chaotic trajectory vs environment size."""
import argparse

from pairdecay.experiments import ExperimentSpec, size_scan

p = argparse.ArgumentParser()
p.add_argument("--sizes", default="5,8,11,14")
p.add_argument("--coupling", type=float, default=0.01)
p.add_argument("--steps", type=int, default=4500)
p.add_argument("--seed", type=int, default=2006)
args = p.parse_args()

base = ExperimentSpec("a", "chaotic", 16, args.coupling, args.steps, seed=args.seed)
for n, dev in size_scan(base, [int(s) for s in args.sizes.split(",")]):
    print(f"environment {n:2d} qubits (L={n + 2:2d}): deviation {dev:.4f}")
