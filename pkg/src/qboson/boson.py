"""Kashiwara operators on U^- and the PBW calculus of the operator algebra C_q^+.

Two realizations of an operator are kept apart on purpose.

* Matrices: r'_d restricted to a weight piece, with entry
  (f, e) = <F^e, E^f E^d> / (<F^d, E^d> <F^f, E^f>).
* Adjoint elements: a homogeneous operator R of degree mu that lands in
  scalars on the piece of weight mu satisfies R(y) = <y, x_R> for a unique
  x_R in U^+_mu, and r^d = (r'_N)^{d_N} o ... o (r'_1)^{d_1} corresponds to
  E^d / prod_k <F_k, E_k>^{d_k}.  Composition of operators is the product of
  adjoint elements, so products in C_q^+ reduce to q-shuffles.

Identities between homogeneous operators are decided on the single weight
piece of their degree, where r^d(F^e) = delta_{d,e} s_e.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .pbw import CertificateError, PBWBasis, PBWElement, _unit, _vadd, _vsub
from .qscalar import ONE, ZERO, eval_at_one, in_integral_form, qpow, quantum_factorial
from .rootdata import apply_braid_move, type_a_interval

__all__ = [
    "KashiwaraMatrix", "OperatorElement", "CommutatorStructure", "BraidMoveUnsupported",
    "kashiwara_matrix", "mix_identity_check", "to_operator_pbw", "commutator_structure",
    "kashiwara_defining_check", "leibniz_check", "c_coefficients", "quantum_casimir",
    "centrality_check", "braid_move_identities", "single", "compose", "evaluation_scale",
]


class BraidMoveUnsupported(NotImplementedError):
    pass


@dataclass
class KashiwaraMatrix:
    basis: PBWBasis
    d: tuple
    mu: tuple
    divided: bool
    rows: list
    cols: list
    entries: dict

    @property
    def target(self):
        return _vsub(self.mu, self.basis.weight(self.d))

    def column(self, e):
        return {f: self.entries[(f, e)] for f in self.rows if (f, e) in self.entries}

    def apply(self, vec):
        """Apply to {e: coeff} on the source piece."""
        out = defaultdict(lambda: ZERO)
        for e, c in vec.items():
            if not c:
                continue
            for f in self.rows:
                v = self.entries.get((f, e))
                if v:
                    out[f] = out[f] + c * v
        return {f: c for f, c in out.items() if c}

    def __matmul__(self, other):
        """self o other as a plain {(f, e): coeff} table."""
        out = {}
        for e in other.cols:
            for f, c in self.apply(other.column(e)).items():
                out[(f, e)] = c
        return out


def _in_cone(mu):
    return all(c >= 0 for c in mu)


def kashiwara_matrix(basis, d, mu, divided=False):
    B = basis
    d, mu = tuple(d), tuple(mu)
    if not _in_cone(mu):
        raise ValueError(f"weight {mu} is outside the positive cone")
    cols = B.exponents(mu)
    tgt = _vsub(mu, B.weight(d))
    rows = B.exponents(tgt) if _in_cone(tgt) else []
    entries = {}
    if rows:
        ed = B.free_e(d)
        dd = B.diagonal(d)
        for f in rows:
            prod = B.concat(B.free_e(f), ed)
            den = (dd * B.diagonal(f)).inverse()
            for e in cols:
                v = B.dot(prod, B.dual_f(e), mu)
                if v:
                    v = v * den
                    if divided:
                        v = v * B.factorial(d) * B.factorial(f) / B.factorial(e)
                    entries[(f, e)] = v
    return KashiwaraMatrix(B, d, mu, divided, rows, cols, entries)


def evaluation_scale(basis, e):
    """r^e(F^e) = prod_k q_k^{e_k(e_k-1)/2} [e_k]_k!"""
    B = basis
    out = ONE
    for k, m in enumerate(e):
        if m > 1:
            t = B.root_length_sq(k) // 2
            out = out * qpow(t * m * (m - 1) // 2) * quantum_factorial(m, B.root_length_sq(k))
    return out


def mix_identity_check(basis, d, mu):
    """Direct r'_d against the scaled composite of single-root operators."""
    B = basis
    d, mu = tuple(d), tuple(mu)
    direct = kashiwara_matrix(B, d, mu)
    # apply r'_1 first, r'_N last
    table = {(e, e): ONE for e in B.exponents(mu)}
    cur = mu
    for k in range(B.N):
        for _ in range(d[k]):
            M = kashiwara_matrix(B, _unit(B.N, k), cur)
            new = {}
            for (f, e), c in table.items():
                for g, v in M.apply({f: c}).items():
                    new[(g, e)] = new.get((g, e), ZERO) + v
            table = {key: v for key, v in new.items() if v}
            cur = M.target
    scale = evaluation_scale(B, d).inverse()
    composite = {key: v * scale for key, v in table.items()}
    return composite == direct.entries


@dataclass
class OperatorElement:
    """sum_d a_d (r'_N)^{d_N} o ... o (r'_1)^{d_1}"""
    basis: PBWBasis
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {tuple(d): c for d, c in self.coeffs.items() if c}

    def __eq__(self, other):
        return isinstance(other, OperatorElement) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, ZERO) + c
        return OperatorElement(self.basis, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return OperatorElement(self.basis, {d: v * c for d, v in self.coeffs.items()})

    def __bool__(self):
        return bool(self.coeffs)

    def components(self):
        out = defaultdict(dict)
        for d, c in self.coeffs.items():
            out[self.basis.weight(d)][d] = c
        return dict(out)

    def adjoint_dual(self, mu):
        """Dual vector of the adjoint element of the degree-mu component."""
        B = self.basis
        acc = None
        for d, c in self.coeffs.items():
            if B.weight(d) != mu:
                continue
            norm = ONE
            for k, m in enumerate(d):
                if m:
                    norm = norm * B.diagonal(_unit(B.N, k)) ** m
            s = c / norm
            v = [s * x for x in B.dual_e(d)]
            acc = v if acc is None else [a + b for a, b in zip(acc, v)]
        return acc

    def matrix(self, mu):
        """Matrix realization on the weight-mu piece, by composing single-root matrices."""
        B = self.basis
        out = {}
        for d, c in self.coeffs.items():
            table = {(e, e): ONE for e in B.exponents(mu)}
            cur = mu
            for k in range(B.N):
                for _ in range(d[k]):
                    if not _in_cone(_vsub(cur, B.roots[k])):
                        table = {}
                        break
                    M = kashiwara_matrix(B, _unit(B.N, k), cur)
                    new = {}
                    for (f, e), v in table.items():
                        for g, w in M.apply({f: v}).items():
                            new[(g, e)] = new.get((g, e), ZERO) + w
                    table = new
                    cur = M.target
            for key, v in table.items():
                out[key] = out.get(key, ZERO) + c * v
        return {key: v for key, v in out.items() if v}

    def at_one(self):
        """{d: value at q=1}"""
        return {d: eval_at_one(c) for d, c in self.coeffs.items() if eval_at_one(c)}

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c}) r^{list(d)}" for d, c in sorted(self.coeffs.items()))


def to_operator_pbw(basis, action, degree):
    """Read off PBW-operator coefficients from the action on the degree piece.

    action is either a callable e -> R(F^e) (a scalar), or a table
    {(f, e): coeff} with f = 0 the only row (as produced by matrix()).
    """
    B = basis
    degree = tuple(degree)
    zero = (0,) * B.N
    if not callable(action):
        table = action
        for (f, e) in table:
            if f != zero:
                raise ValueError("operator is not homogeneous of the stated degree")
            if B.weight(e) != degree:
                raise ValueError("operator is not homogeneous of the stated degree")
        action = lambda e, t=table: t.get((zero, e), ZERO)
    out = {}
    for e in B.exponents(degree):
        v = action(e)
        if v:
            out[e] = v / evaluation_scale(B, e)
    return OperatorElement(B, out)


def read_off(basis, dual, degree):
    """to_operator_pbw applied to an adjoint dual vector."""
    B = basis
    if dual is None:
        return OperatorElement(B, {})
    return to_operator_pbw(B, lambda e: B.dot(B.free_f(e), dual, degree), degree)


def single(basis, k, power=1):
    """(r'_k)^power for a 1-based root index k."""
    d = [0] * basis.N
    d[k - 1] = power
    return OperatorElement(basis, {tuple(d): ONE})


def compose(a, b):
    """a o b in C_q^+, through the product of adjoint elements."""
    B = a.basis
    out = OperatorElement(B, {})
    for mu1 in a.components():
        x1 = a.adjoint_dual(mu1)
        for mu2 in b.components():
            x2 = b.adjoint_dual(mu2)
            mu = _vadd(mu1, mu2)
            out = out + read_off(B, B.shuffle(x1, mu1, x2, mu2), mu)
    return out


def compose_all(ops):
    out = ops[0]
    for o in ops[1:]:
        out = compose(out, o)
    return out


@dataclass
class CommutatorStructure:
    i: int
    j: int
    h: OperatorElement
    closed: OperatorElement
    certificates: dict
    support_ok: bool
    divisible_ok: bool

    @property
    def agrees(self):
        return self.h == self.closed

    @property
    def ok(self):
        return self.support_ok and self.divisible_ok and self.agrees

    def bracket_terms(self):
        """{d: (h_d/(1-q)) at q=1}"""
        one_minus_q = ONE - qpow(1)
        out = {}
        for d, c in self.h.coeffs.items():
            v = eval_at_one(c / one_minus_q)
            if v:
                out[d] = v
        return out


def commutator_structure(basis, i, j, strict=True):
    """[r'_i, r'_j] in the operator PBW basis (1-based i < j).

    h comes from the matrix commutator on the weight piece lambda_i + lambda_j;
    closed is assembled from the LS table and the pairing diagonal.
    """
    from .pbw import ls_relation

    B = basis
    if not 1 <= i < j <= B.N:
        raise ValueError("need 1 <= i < j <= N")
    a, b = i - 1, j - 1
    li, lj = B.roots[a], B.roots[b]
    mu = _vadd(li, lj)
    ui, uj = _unit(B.N, a), _unit(B.N, b)
    zero = (0,) * B.N
    Mi_mu = kashiwara_matrix(B, ui, mu)
    Mj_mu = kashiwara_matrix(B, uj, mu)
    Mi_small = kashiwara_matrix(B, ui, li)
    Mj_small = kashiwara_matrix(B, uj, lj)
    ri_rj = Mi_small @ Mj_mu
    rj_ri = Mj_small @ Mi_mu

    def action(e):
        return ri_rj.get((zero, e), ZERO) - rj_ri.get((zero, e), ZERO)

    h = to_operator_pbw(B, action, mu)

    # closed form
    closed = {}
    t = B.datum.inner(li, lj)
    closed[_vadd(ui, uj)] = qpow(t) - ONE
    rel = ls_relation(B, i, j, "E", strict=strict)
    norm = (B.diagonal(ui) * B.diagonal(uj)).inverse()
    for d, c in rel.coeffs.items():
        v = c * B.diagonal(d) * norm / evaluation_scale(B, d)
        closed[d] = closed.get(d, ZERO) + v
    closed = OperatorElement(B, closed)

    certs = {}
    support_ok = divisible_ok = True
    special = _vadd(ui, uj)
    for d, c in h.coeffs.items():
        cert = in_integral_form(c)
        certs[d] = {"in_A": cert.in_A, "valuation": cert.one_minus_q_valuation}
        if d != special and any(d[k] for k in range(B.N) if k <= a or k >= b):
            support_ok = False
        if not cert.at_least(1):
            divisible_ok = False
    out = CommutatorStructure(i, j, h, closed, certs, support_ok, divisible_ok)
    if strict and not out.ok:
        raise CertificateError(f"commutator certificate failed for ({i},{j}): h={h} closed={closed}")
    return out


def _simple_root_index(basis, alpha):
    lam = tuple(int(j == alpha - 1) for j in range(basis.n))
    return basis.roots.index(lam)


def kashiwara_defining_check(basis, alpha, e):
    """E_a y - y E_a against (K_a r_a(y) - r'_a(y) K_a^-1)/(q_a - q_a^-1), y = F^e.

    Returns (r_a(y) as a PBWElement, whether the K_a^-1 block matches r'_a).
    """
    B = basis
    alg = B.alg
    e = tuple(e)
    y = alg.zero()
    for w, c in B.free_f(e).items():
        y = y + alg.f_word(w, c)
    Ea = alg.E(alpha)
    comm = Ea * y - y * Ea
    plus = tuple(int(j == alpha - 1) for j in range(B.n))
    minus = tuple(-c for c in plus)
    blk_plus, blk_minus = {}, {}
    for (f, k, ee), c in comm.terms.items():
        if ee:
            raise CertificateError(f"E letters survive in the commutator: {comm}")
        if k == plus:
            blk_plus[f] = c
        elif k == minus:
            blk_minus[f] = c
        else:
            raise CertificateError(f"unexpected K letter {k} in the commutator")
    mu = B.weight(e)
    tgt = _vsub(mu, plus)
    t = alg.qa(alpha)
    diff = qpow(t) - qpow(-t)
    k_alpha = _simple_root_index(B, alpha)
    M = kashiwara_matrix(B, _unit(B.N, k_alpha), mu)
    expected = M.column(e)
    if not _in_cone(tgt):
        ok = not blk_plus and not blk_minus and not expected
        return PBWElement(B, "F", {}), ok
    # r'_a(y) = -(q_a - q_a^-1) * (K_a^-1 block)
    got = _expand_f_free(B, {w: -c * diff for w, c in blk_minus.items()}, tgt)
    ok = got == expected
    # K_a r_a(y) = q^{-(a, tgt)} r_a(y) K_a
    shift = B.datum.inner(plus, tgt)
    r_a = _expand_f_free(B, {w: (c * diff).shifted(shift) for w, c in blk_plus.items()}, tgt)
    return PBWElement(B, "F", r_a), ok


def _expand_f_free(B, free, mu):
    free = {w: c for w, c in free.items() if c}
    if not free:
        return {}
    if not any(mu):
        return {(0,) * B.N: free.get((), ZERO)}
    return B.expand_f_dual(B.dual_of_f(free), mu)


def _f_dual_of_pbw(B, vec, mu):
    acc = None
    for f, c in vec.items():
        v = [c * x for x in B.dual_f(f)]
        acc = v if acc is None else [a + b for a, b in zip(acc, v)]
    if acc is None:
        acc = [ZERO] * len(B.words(mu)[0])
    return acc


def leibniz_check(basis, k, y, y2):
    """r'_k(F^y F^y2) against sum q^{(l_d, l_y2 - l_e)} n r'_(d)(F^y) r'_(e)(F^y2)."""
    from .pbw import n_coefficients

    B = basis
    y, y2 = tuple(y), tuple(y2)
    lam = B.roots[k - 1]
    uk = _unit(B.N, k - 1)
    m1, m2 = B.weight(y), B.weight(y2)
    mu = _vadd(m1, m2)
    tgt = _vsub(mu, lam)
    if not _in_cone(tgt):
        return True
    prod = B.shuffle(B.dual_f(y), m1, B.dual_f(y2), m2)
    lhs = {}
    ek = B.free_e(uk)
    dk = B.diagonal(uk)
    for f in B.exponents(tgt):
        v = B.dot(B.concat(B.free_e(f), ek), prod, mu)
        if v:
            lhs[f] = v / (dk * B.diagonal(f))
    lhs_dual = _f_dual_of_pbw(B, lhs, tgt)

    rhs = [ZERO] * len(lhs_dual)
    for nu in _sub_weights(lam):
        rest = _vsub(lam, nu)
        for d in B.exponents(nu):
            for e in B.exponents(rest):
                n = n_coefficients(B, d, e).get(uk, ZERO)
                if not n:
                    continue
                t1, t2 = _vsub(m1, nu), _vsub(m2, rest)
                if not (_in_cone(t1) and _in_cone(t2)):
                    continue
                a = kashiwara_matrix(B, d, m1, divided=True).column(y) if any(d) else {y: ONE}
                b = kashiwara_matrix(B, e, m2, divided=True).column(y2) if any(e) else {y2: ONE}
                # divided matrices act on divided bases; convert to plain F^f
                a = {f: c * B.factorial(y) / B.factorial(f) for f, c in a.items()}
                b = {f: c * B.factorial(y2) / B.factorial(f) for f, c in b.items()}
                if not a or not b:
                    continue
                pa, pb = _f_dual_of_pbw(B, a, t1), _f_dual_of_pbw(B, b, t2)
                term = B.shuffle(pa, t1, pb, t2)
                s = n.shifted(B.datum.inner(nu, _vsub(m2, rest)))
                rhs = [u + s * v for u, v in zip(rhs, term)]
    return rhs == lhs_dual


def _sub_weights(lam):
    out = []

    def rec(prefix, k):
        if k == len(lam):
            out.append(tuple(prefix))
            return
        for c in range(lam[k] + 1):
            rec(prefix + [c], k + 1)

    rec([], 0)
    return out


def c_coefficients(basis, d, j):
    """r'_(d)(F_j) = sum_f c_f F^(f) with (1-q)-valuation reports.

    Returns (coefficients, failures) where failures lists f whose valuation
    falls below |d| + |f| - 1.
    """
    B = basis
    d = tuple(d)
    uj = _unit(B.N, j - 1)
    lam = B.roots[j - 1]
    tgt = _vsub(lam, B.weight(d))
    if not _in_cone(tgt):
        return {}, []
    M = kashiwara_matrix(B, d, lam, divided=True)
    col = M.column(uj)
    failures = []
    for f, c in col.items():
        if not in_integral_form(c).at_least(sum(d) + sum(f) - 1):
            failures.append(f)
    return col, failures


def _interval_index(basis):
    out = {}
    for k in range(1, basis.N + 1):
        out[type_a_interval(basis.datum, k, basis.word.letters)] = k
    return out


def _compositions(n):
    # subsets {k_1 < ... < k_m = n}
    for m in range(1, n + 1):
        for cut in combinations(range(1, n), m - 1):
            yield tuple(cut) + (n,)


def casimir_words(basis):
    """[(coeff, [root indices in composition order])] for the quantized Casimir."""
    n = basis.datum.rank
    idx = _interval_index(basis)
    out = []
    for kappa in _compositions(n):
        parts, start = [], 1
        for k in kappa:
            parts.append(idx[(start, k)])
            start = k + 1
        out.append((qpow(n - len(kappa)), parts + [idx[(1, n)]]))
    return out


def quantum_casimir(basis):
    if basis.datum.cartan_type != "A":
        raise ValueError("the quantized Casimir is defined in type A")
    out = OperatorElement(basis, {})
    for c, ks in casimir_words(basis):
        out = out + compose_all([single(basis, k) for k in ks]).scale(c)
    return out


def centrality_check(basis, psi=None):
    """[Psi, r'_k] = 0 for every k, decided on the weight piece of its degree.

    Returns {k: True/False}.
    """
    B = basis
    if psi is None:
        psi = quantum_casimir(B)
    out = {}
    for k in range(1, B.N + 1):
        rk = single(B, k)
        comm = compose(psi, rk) - compose(rk, psi)
        out[k] = not comm
    return out


def braid_move_identities(basis_a, basis_b, position):
    """Operator identities relating the PBW data of two words one braid move apart.

    Returns {name: bool}.  A2-type and commuting moves are supported.
    """
    A, Bb = basis_a, basis_b
    la, lb = A.word.letters, Bb.word.letters
    if apply_braid_move(A.datum, la, position) != lb:
        raise ValueError("words are not related by a braid move at this position")
    m = A.datum.braid_order(la[position], la[position + 1])
    if m not in (2, 3):
        raise BraidMoveUnsupported(f"braid move of order {m} is not supported")
    p = position
    results = {}

    def op_b(k):
        # r'^B_k as an operator in basis A
        deg = Bb.roots[k - 1]
        x = Bb._root_dual_e[k - 1]
        dk = Bb.diagonal(_unit(Bb.N, k - 1))
        return read_off(A, [v / dk for v in x], deg)

    moved = set(range(p + 1, p + m + 1))
    for k in range(1, A.N + 1):
        if k not in moved:
            results[f"r'_{k} unchanged"] = op_b(k) == single(A, k)
    if m == 2:
        results["swap 1"] = op_b(p + 1) == single(A, p + 2)
        results["swap 2"] = op_b(p + 2) == single(A, p + 1)
        return results
    i = p + 1
    results["r'_i"] = op_b(i) == single(A, i + 2)
    results["r'_i+2"] = op_b(i + 2) == single(A, i)
    rhs = (compose(single(A, i + 2), single(A, i)) + single(A, i + 1)).scale(-qpow(-1))
    results["r'_i+1"] = op_b(i + 1) == rhs
    # F_{l_{i+1}} = -q^-1 F'_{i+1} + (q^-1 - q) F'_{i+2} F'_i on dual vectors
    mu = A.roots[i]
    lhs = A._root_dual_f[i]
    f1 = Bb._root_dual_f[i]
    f2 = Bb.shuffle(Bb._root_dual_f[i + 1], Bb.roots[i + 1], Bb._root_dual_f[i - 1], Bb.roots[i - 1])
    c = qpow(-1) - qpow(1)
    rhs_dual = [(-qpow(-1)) * u + c * v for u, v in zip(f1, f2)]
    results["F_i+1"] = lhs == rhs_dual
    return results
