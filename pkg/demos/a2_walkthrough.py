"""Type A2 end to end: PBW data, Kashiwara operators, the bracket and its Casimir.

Run with: python demos/a2_walkthrough.py
"""
from qboson.boson import commutator_structure, kashiwara_matrix, quantum_casimir
from qboson.pbw import PBWBasis, expand_in_pbw, ls_relation
from qboson.poisson import casimir_check, casimir_psi, generic_rank, hayashi_structure
from qboson.rootdata import build_root_datum

D = build_root_datum("A2")
B = PBWBasis(D)
print("word", B.word.letters, "roots", B.roots)

alg = B.alg
print("E1 E2 =", expand_in_pbw(alg.E(1) * alg.E(2), B))
print("F1 F2 =", expand_in_pbw(alg.F(1) * alg.F(2), B))

# straightening E_1 E_3 - q^{(l1,l3)} E_3 E_1
rel = ls_relation(B, 1, 3, "E")
print("LS (1,3):", rel.coeffs, "certified" if rel.ok else "NOT certified")

M = kashiwara_matrix(B, (0, 0, 1), (1, 1))
for e in M.cols:
    print(f"r'_3(F^{list(e)}) =", M.column(e))

cs = commutator_structure(B, 1, 3)
print("[r'_1, r'_3] =", cs.h)
print("q -> 1 limit:", cs.bracket_terms())

pi = hayashi_structure(B)
names = ["x", "u", "y"]
for p in pi.to_json()["pairs"]:
    i, j = p["i"], p["j"]
    print(f"{{{names[i-1]},{names[j-1]}}} =", pi.entry(i, j).to_string(names))

print("Psi =", quantum_casimir(B))
psi = casimir_psi(2)
print("psi =", psi.to_string(names), "Casimir:", casimir_check(psi, pi))
print("generic rank:", generic_rank(pi))
