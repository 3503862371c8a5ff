"""Sampling and coupling from the exact conditional law.

Two chains driven by the same randomness but started from opposite pasts
forget their disagreement quickly when the interaction is weak: the maximal
coupling reuses one uniform draw per site, so the chains merge as soon as
their conditional laws overlap enough.  The decile table shows where the
disagreements live; after coalescence the trajectories are identical.

Run:  python3 demos/coupling_mixing.py
"""

import math

import numpy as np

from artifact import (
    CouplingLaw,
    PairPotential,
    Word,
    couple_two_pasts,
    g_exact_markov,
    sample_chain,
)


def persistence_demo() -> None:
    p = PairPotential(beta=1.0, coupling=CouplingLaw.finite_table((1.0,)))
    g = g_exact_markov(p)
    run = sample_chain(g, Word(-1, (1,)), 100_000, seed=20260814)
    s = run.samples
    empirical = float(np.mean(s[1:] == s[:-1]))
    exact = math.exp(0.5) / (2.0 * math.cosh(0.5))
    print("nearest-neighbour chain, strength 1.0, 100k sites")
    print(f"  P(x_t = x_t-1)  sampled {empirical:.5f}   exact {exact:.5f}")
    print(f"  letter frequency  + {run.frequency(1):.5f}   - {run.frequency(-1):.5f}")


def coupling_demo() -> None:
    p = PairPotential(
        beta=0.3, coupling=CouplingLaw.power_law(2.0), truncation_range=6
    )
    g = g_exact_markov(p)
    past_plus = Word.constant(-6, 6, 1)
    past_minus = Word.constant(-6, 6, -1)
    print("\ncoupled chains from all-plus vs all-minus pasts, 10k sites")
    print(f"{'seed':>10}  {'disagreements':>13}  {'coalesced at':>12}  decile density")
    for seed in (7, 14, 21, 20260814):
        run = couple_two_pasts(g, past_plus, past_minus, 10_000, seed)
        deciles = run.disagreement_density(10)
        shown = " ".join(f"{d:.4f}" for d in deciles[:4]) + " ..."
        print(
            f"{seed:>10}  {int(run.disagree.sum()):>13}"
            f"  {run.first_coalescence():>12}  {shown}"
        )


if __name__ == "__main__":
    persistence_demo()
    coupling_demo()
