"""Randomized numerical verification of the framework's exact identities.

Four checks, each over many independently seeded random instances:

1. pairwise expansion of the between-class scatter,
2. total = within + between scatter decomposition,
3. scatter form of the class-restricted mean discrepancy (trace route
   vs weighted-scatter route),
4. elementwise equality of ``weight * (l_v - l_w)`` with the class
   discrepancy matrix.

All four are identities in exact arithmetic, so residuals should sit at
rounding level (~1e-16).  Reports carry the worst instance's seed and
dimensions so any violation is reproducible from the printout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laplacians import build_class_set, class_set_discrepancy_gap
from .stats import (
    LabeledData,
    between_scatter_pairwise_residual,
    build_mc,
    classwise_mmd_scatter_residual,
    scatter_decomposition_residual,
)

CHECK_NAMES = (
    "between-scatter-pairwise",
    "scatter-decomposition",
    "classwise-discrepancy-scatter",
    "laplacian-vs-discrepancy-matrix",
)


@dataclass
class IdentityReport:
    """Worst-case residual of one check over a batch of random instances."""

    name: str
    trials: int
    max_residual: float
    worst_seed: int
    worst_dims: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = (
            f"{self.name}: max residual {self.max_residual:.3e} over "
            f"{self.trials} trials (tolerance {self.tolerance:.1e}) [{status}]"
        )
        if not self.passed:
            out += f" worst instance: seed={self.worst_seed} {self.worst_dims}"
        return out


def _random_labeled(rng, m, n, c):
    y = np.r_[np.arange(1, c + 1), rng.integers(1, c + 1, size=n - c)]
    rng.shuffle(y)
    return LabeledData(x=rng.normal(size=(m, n)), y=y, c=c)


def run_identity_suite(
    trials: int = 100, seed: int = 0, tolerance: float = 1e-8
) -> list[IdentityReport]:
    """Run all four identity checks over ``trials`` random instances each.

    Instance sizes: features <= 10, samples <= 50, classes <= 5, random
    projection width in 1..features.  Each trial uses its own derived
    seed so a failure names a single reproducible instance.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    worst = {
        name: {"residual": -1.0, "seed": -1, "dims": ""} for name in CHECK_NAMES
    }

    def note(name, residual, trial_seed, dims):
        if residual > worst[name]["residual"]:
            worst[name] = {"residual": residual, "seed": trial_seed, "dims": dims}

    for t in range(trials):
        trial_seed = seed * 1_000_003 + t
        rng = np.random.default_rng(trial_seed)
        m = int(rng.integers(2, 11))
        c = int(rng.integers(2, 6))
        n = int(rng.integers(max(c, 2), 51))
        k = int(rng.integers(1, m + 1))
        d = _random_labeled(rng, m, n, c)
        a = rng.normal(size=(m, k))
        dims = f"m={m} n={n} C={c} k={k}"

        note(
            CHECK_NAMES[0],
            between_scatter_pairwise_residual(d, a),
            trial_seed,
            dims,
        )
        note(CHECK_NAMES[1], scatter_decomposition_residual(d), trial_seed, dims)

        n_s = int(rng.integers(c, 26))
        n_t = int(rng.integers(c, 26))
        src = _random_labeled(rng, m, n_s, c)
        tgt = _random_labeled(rng, m, n_t, c)
        cls = int(rng.integers(1, c + 1))
        dims_pair = f"m={m} n_s={n_s} n_t={n_t} C={c} k={k} class={cls}"
        note(
            CHECK_NAMES[2],
            classwise_mmd_scatter_residual(src, tgt, a, cls),
            trial_seed,
            dims_pair,
        )

        cs = build_class_set(src.y, tgt.y, cls)
        mc = build_mc(src.y, tgt.y, cls)
        note(
            CHECK_NAMES[3],
            class_set_discrepancy_gap(cs, mc),
            trial_seed,
            dims_pair,
        )

    return [
        IdentityReport(
            name=name,
            trials=trials,
            max_residual=worst[name]["residual"],
            worst_seed=worst[name]["seed"],
            worst_dims=worst[name]["dims"],
            tolerance=tolerance,
        )
        for name in CHECK_NAMES
    ]
