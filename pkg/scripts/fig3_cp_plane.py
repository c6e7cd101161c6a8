"""(C, P) trajectories of three regimes against the Werner curve (L=14, J_c=0.01)."""
import argparse
from pathlib import Path

from pairdecay.cli import emit_results
from pairdecay.experiments import ExperimentSpec, cp_curve_deviation, run_ensemble

p = argparse.ArgumentParser()
p.add_argument("--steps", type=int, default=4500)
p.add_argument("--ensemble", type=int, default=10)
p.add_argument("--seed", type=int, default=2006)
p.add_argument("--config", default="a")
p.add_argument("--out", default="out/fig3")
args = p.parse_args()

for regime in ("integrable", "intermediate", "chaotic"):
    spec = ExperimentSpec(args.config, regime, 14, 0.01, args.steps,
                          ensemble_size=args.ensemble, seed=args.seed)
    summary, records = run_ensemble(spec)
    emit_results(records, summary, Path(args.out) / regime, spec)
    print(f"{regime:>12}: RMS deviation (P in [0.5, 1]) = "
          f"{cp_curve_deviation(summary, (0.5, 1.0)):.4f}, min P = {summary.p_mean.min():.3f}")
