"""Tour of the uniqueness criteria across temperatures.

Inverse-square couplings are the interesting family: every criterion has a
sharp strength threshold there, and they disagree.  The product-series
criterion certifies uniqueness up to strength 1/4, the variation-slope
criterion up to 1/2, and both switch by exact rational comparison, so the
table below flips between adjacent rows with no tolerance involved.

Run:  python3 demos/threshold_tour.py
"""

from artifact import CouplingLaw, PairPotential, evaluate_all

BETAS = (0.10, 0.20, 0.25, 0.26, 0.30, 0.49, 0.50, 0.51, 0.75, 1.00)
MARK = {"Holds": "H", "Fails": "F", "Inconclusive": "."}


def main() -> None:
    reports = {
        beta: evaluate_all(
            PairPotential(beta=beta, coupling=CouplingLaw.power_law(2.0))
        )
        for beta in BETAS
    }
    names = [v.criterion for v in reports[BETAS[0]].verdicts]

    print("verdicts for J(n) = n**-2 (H holds, F fails, . inconclusive)\n")
    print(f"{'strength':<18}" + "".join(f"{b:>7.2f}" for b in BETAS))
    for name in names:
        row = [MARK[reports[b].by_name(name).outcome] for b in BETAS]
        print(f"{name:<18}" + "".join(f"{m:>7}" for m in row))

    print("\nstrongest certified conclusion per strength:")
    for beta in BETAS:
        strongest = reports[beta].strongest
        print(f"  {beta:.2f}  {strongest if strongest else '(none certified)'}")

    # the two headline thresholds, spelled out
    quarter = reports[0.25].by_name("berbee")
    print(f"\nberbee at 1/4:   {quarter.outcome}  ({quarter.certificate})")
    half = reports[0.49].by_name("variation_slope")
    print(f"slope at 0.49:   {half.outcome}  ({half.certificate})")
    half = reports[0.51].by_name("variation_slope")
    print(f"slope at 0.51:   {half.outcome}  ({half.certificate})")


if __name__ == "__main__":
    main()
