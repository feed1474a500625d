#!/usr/bin/env python3
"""Show how a mean-type aggregate hides one weak element.

A system where a single element scores low while the rest score high looks
healthy under a weighted mean, while the weakest element tells a different
story.  The script prints the three operator values and the adequacy gaps
for one such system, then sweeps the weak element across its range to show
how the nonlinear aggregate tracks it while the mean barely moves.
"""

import argparse

from aggeval.core import (
    EvaluationVector,
    Scale,
    adequacy_wem_nam,
    adequacy_wem_wlam,
    nam,
    wem,
    wlam,
)


def build(weak: float, strong: float, size: int, scale: Scale) -> EvaluationVector:
    return EvaluationVector.from_values(
        [weak] + [strong] * (size - 1), scale=scale
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--weak", type=float, default=10.0, help="score of the weak element"
    )
    parser.add_argument(
        "--strong", type=float, default=100.0, help="score of every other element"
    )
    parser.add_argument(
        "--size", type=int, default=3, help="number of elements (default 3)"
    )
    args = parser.parse_args()
    if args.size < 2:
        parser.error("--size must be at least 2")
    if args.weak < 0 or args.strong < 0:
        parser.error("scores must be nonnegative")

    scale = Scale(0.0, max(100.0, args.weak, args.strong))
    evals = build(args.weak, args.strong, args.size, scale)
    print(f"evaluations: {list(evals.values)}")
    print(f"  wem      {wem(evals):8.4f}  (weakest element)")
    print(f"  wlam     {wlam(evals):8.4f}  (weighted mean)")
    print(f"  nam      {nam(evals):8.4f}  (product over mean^(N-1))")
    print(f"  sigma_12 {adequacy_wem_wlam(evals):8.4f}  (gap hidden by the mean)")
    print(f"  sigma_13 {adequacy_wem_nam(evals):8.4f}  (gap left by nam)")
    print()

    print("weak value      wem     wlam      nam")
    top = scale.max
    for fraction in (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
        x = fraction * top
        point = build(x, args.strong, args.size, scale)
        print(
            f"{x:10.1f} {wem(point):8.2f} {wlam(point):8.2f} {nam(point):8.2f}"
        )


if __name__ == "__main__":
    main()
