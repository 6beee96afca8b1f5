"""Type A pencils: the Kirillov-Kostant bracket is twice the linear part, and
each root vector field deforms the bracket into a compatible one.
"""
from qboson.pbw import PBWBasis
from qboson.poisson import (
    interval_labels, is_poisson, kirillov_kostant, lie_derivative, linear_part, pencil_checks,
    hayashi_structure, vector_field,
)
from qboson.rootdata import build_root_datum

for n in (2, 3, 4):
    B = PBWBasis(build_root_datum("A", n))
    pi = hayashi_structure(B)
    kk = kirillov_kostant(n)
    print(f"A{n}: linear part == 2 KK: {linear_part(pi) == kk.scale(2)},",
          f"compatible: {pencil_checks(pi, kk)['compatible']},",
          f"pi - 2 KK Poisson: {is_poisson(pi - kk.scale(2))}")

B = PBWBasis(build_root_datum("A3"))
pi = hayashi_structure(B)
for k, (i, j) in enumerate(interval_labels(3), start=1):
    X = vector_field(B, k)
    rep = pencil_checks(pi, lie_derivative(X, pi), X)
    print(f"interval ({i},{j}):", rep)
