#!/usr/bin/env python3
"""Pairwise concordance between the four published top-500 tables in the
fixture set: Spearman rho over shared institutions, for every system pair.

Interval positions (e.g. 201-300) resolve to their midpoints, so several
institutions can tie; rho uses midranks throughout.
"""

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bibliorank.concordance import spearman_rho
from bibliorank.errors import ConstantInputError, InsufficientDataError
from bibliorank.ranking import load_external_rankings

ROOT = Path(__file__).resolve().parent.parent
SYSTEMS = ["shanghai", "leiden", "qs", "ntu"]


def main() -> None:
    tables = load_external_rankings(ROOT / "fixtures" / "external_rankings.csv")
    print(f"{'pair':<20} {'shared':>6} {'rho':>8}")
    for sys_a, sys_b in itertools.combinations(SYSTEMS, 2):
        a = tables[(sys_a, "overall")]
        b = tables[(sys_b, "overall")]
        shared = sorted(a.institution_ids() & b.institution_ids())
        eff_a = {e.institution_id: e.rank.effective for e in a.entries}
        eff_b = {e.institution_id: e.rank.effective for e in b.entries}
        try:
            rho = f"{spearman_rho([eff_a[i] for i in shared], [eff_b[i] for i in shared]):8.3f}"
        except (InsufficientDataError, ConstantInputError):
            rho = "       *"
        print(f"{sys_a + '/' + sys_b:<20} {len(shared):>6} {rho}")


if __name__ == "__main__":
    main()
