"""Verify the headline weighted Sobolev and Hardy inequalities.

Each check sweeps a deterministic 200-function family, records the worst
ratio of the weighted norm to the Cheeger energy, and assembles the
matching theoretical constant from measured profile data (doubling
exponent, empirical Poincare constant, covering overlap numbers, and the
covering-graph isoperimetric constant).  The theoretical constants are
explicit but far from sharp, so the margins are astronomical.
"""

from pilab.gallery import grid_quadrant, radial_profile
from pilab.verify import hardy_check, make_family, weighted_sobolev_check, write_reports_csv


def main():
    reports = []
    for name, sp in (("grid_quadrant(32)", grid_quadrant(32)),
                     ("radial_profile(256, eta=2)", radial_profile(256, 2.0))):
        fam = make_family(sp, 0, seed=0, count=200)
        for rep in (weighted_sobolev_check(sp, 0, 1.0, 2.0, fam),
                    hardy_check(sp, 0, 1.0, fam)):
            reports.append(rep)
            print(f"{name} {rep.inequality} (s={rep.s}, t={rep.t}): "
                  f"{'PASS' if rep.passed else 'FAIL'}")
            print(f"  empirical best {rep.empirical_best:.4g} (witness {rep.witness})")
            print(f"  theoretical constant {rep.theoretical:.4g} "
                  f"[Q1={rep.Q1:.0f}, Q2={rep.Q2:.0f}, C1={rep.C1:.3g}, C2={rep.C2:.3g}]")
            if rep.hypotheses_violated:
                print(f"  hypotheses violated: {rep.hypotheses_violated}")
            print()

    write_reports_csv(reports, "weighted_inequalities.csv")
    print("wrote weighted_inequalities.csv")


if __name__ == "__main__":
    main()
