"""The G2 bracket from operator commutators, plus what the non-simply-laced
cases do to integrality and to the linear deformation.
"""
import time

from qboson.pbw import PBWBasis, ls_relation
from qboson.poisson import (
    g2_table, generic_rank, hayashi_structure, linear_deformation_report, pois_bra_diagnostic,
)
from qboson.rootdata import build_root_datum

D = build_root_datum("G2")
t = time.perf_counter()
B = PBWBasis(D)
pi = hayashi_structure(B)
print(f"bracket computed in {time.perf_counter() - t:.2f}s")
for (i, j), v in sorted(pi.table.items()):
    print(f"{{x{i},x{j}}} = {v}")
print("matches the published table:", pi == g2_table())

# straightening coefficients with [3] in the denominator
for side in ("E", "F"):
    for i in range(1, B.N):
        for j in range(i + 1, B.N + 1):
            rel = ls_relation(B, i, j, side)
            for d, cert in rel.certificates.items():
                if not cert["laurent"]:
                    print(side, (i, j), d, rel.coeffs[d], "valuation", cert["valuation"])

print("corrected general formula agrees:", all(pois_bra_diagnostic(B).values()))
print("pi + c*lin(pi) Poisson for c in -2,-1,1,2:", linear_deformation_report(pi))
print("sampled rank", generic_rank(pi), "vs dim h^-w0", D.minus_w0_fixed_dim)
