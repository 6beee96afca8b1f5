"""PBW bases from a reduced word, PBW coordinates via the pairing, LS relations.

Two vector shapes carry everything here:

* a *free* vector is a sparse dict {word: coeff}, the literal word expansion
  of an element of U^+ (E-words) or U^- (F-words);
* a *dual* vector is a dense list over all words of a weight, holding the
  normalized pairings of an element against every word of the other sign.

Dual vectors are faithful (the pairing is nondegenerate) and blind to the
Serre ideal, and products become q-shuffles of dual vectors.  All pairings are
normalized by prod_a <F_a, E_a>^{m_a}; every formula below is homogeneous in
weight so the normalization cancels.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .qscalar import ONE, ZERO, QScalar, in_integral_form, qpow, quantum_factorial
from .rootdata import ReducedWord, canonical_word, positive_roots_from_word
from .wordalg import UElement, algebra, braid_T

__all__ = [
    "PBWBasis", "PBWElement", "LSRelation", "ImpureRootVector", "CertificateError",
    "build_basis", "expand_in_pbw", "ls_relation", "pbw_multiply", "n_coefficients",
    "solve_linear",
]

REVERSE, FORWARD = "reverse", "forward"


class ImpureRootVector(RuntimeError):
    pass


class CertificateError(AssertionError):
    pass


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _unit(N, k):
    return tuple(int(i == k) for i in range(N))


class PBWBasis:
    def __init__(self, datum, word=None):
        self.datum = datum
        letters = canonical_word(datum) if word is None else tuple(
            word.letters if isinstance(word, ReducedWord) else word)
        self.word = ReducedWord(datum, letters)
        self.roots = [tuple(r) for r in positive_roots_from_word(datum, letters)]
        self.N = len(self.roots)
        self.alg = algebra(datum)
        self.n = datum.rank
        self._words = {}
        self._shuffles = {}
        self._exps = {}
        self._free_e = {}
        self._free_f = {}
        self._dual_e = {}
        self._dual_f = {}
        self._diag = {}
        self.e_vectors, self.f_vectors = self._root_vectors()
        self._root_dual_e = [self.dual_of_e(self.free_of(x)) for x in self.e_vectors]
        self._root_dual_f = [self.dual_of_f(self.free_of(y)) for y in self.f_vectors]
        for k in range(self.N):
            self._check_diagonal(_unit(self.N, k))

    def __repr__(self):
        return f"PBWBasis({self.datum.label}, word={self.word.letters})"

    # construction
    def _root_vectors(self):
        es, fs = [], []
        letters = self.word.letters
        for k, i in enumerate(letters):
            x, y = self.alg.E(i), self.alg.F(i)
            for j in reversed(letters[:k]):
                x = braid_T(j, x)
                y = braid_T(j, y)
            lam = self.roots[k]
            if not x.is_pure_e() or x.weights() != {lam}:
                raise ImpureRootVector(f"E root vector {k + 1} is not pure of weight {lam}: {x}")
            neg = tuple(-c for c in lam)
            if not y.is_pure_f() or y.weights() != {neg}:
                raise ImpureRootVector(f"F root vector {k + 1} is not pure of weight {neg}: {y}")
            es.append(x)
            fs.append(y)
        return es, fs

    # weights and words
    def weight(self, d):
        out = [0] * self.n
        for k, m in enumerate(d):
            if m:
                lam = self.roots[k]
                for j in range(self.n):
                    out[j] += m * lam[j]
        return tuple(out)

    def root_length_sq(self, k):
        """(lambda_k, lambda_k) for 0-based k."""
        return self.datum.norm_sq(self.roots[k])

    def words(self, mu):
        """(list of words of weight mu, index dict)."""
        hit = self._words.get(mu)
        if hit is None:
            out = []
            counts = list(mu)

            def rec(prefix, left):
                if not left:
                    out.append(tuple(prefix))
                    return
                for a in range(self.n):
                    if counts[a]:
                        counts[a] -= 1
                        prefix.append(a + 1)
                        rec(prefix, left - 1)
                        prefix.pop()
                        counts[a] += 1

            rec([], sum(mu))
            hit = self._words[mu] = (out, {w: i for i, w in enumerate(out)})
        return hit

    def exponents(self, mu):
        """All d with lambda_d = mu, sorted."""
        mu = tuple(mu)
        hit = self._exps.get(mu)
        if hit is not None:
            return hit
        N = self.N
        out = []
        d = [0] * N

        def rec(k, rest):
            if k == N:
                if not any(rest):
                    out.append(tuple(d))
                return
            lam = self.roots[k]
            m = 0
            r = rest
            while True:
                d[k] = m
                rec(k + 1, r)
                r = tuple(a - b for a, b in zip(r, lam))
                if any(c < 0 for c in r):
                    break
                m += 1
            d[k] = 0

        if all(c >= 0 for c in mu):
            rec(0, mu)
        out.sort()
        self._exps[mu] = out
        return out

    # free and dual vectors
    @staticmethod
    def free_of(x):
        """Word expansion of a pure E or pure F UElement."""
        out = {}
        for (f, k, e), c in x.terms.items():
            w = e if e else f
            out[w] = out.get(w, ZERO) + c
        return {w: c for w, c in out.items() if c}

    def dual_of_e(self, free):
        """Dual vector over F-words of sum_v c_v E_v."""
        if not free:
            return None
        mu = self.alg.word_weight(next(iter(free)))
        ws, _ = self.words(mu)
        wp = self.alg.word_pairing
        out = []
        for w in ws:
            acc = ZERO
            for v, c in free.items():
                p = wp(w, v)
                if p:
                    acc = acc + c * p
            out.append(acc)
        return out

    def dual_of_f(self, free):
        """Dual vector over E-words of sum_w c_w F_w."""
        if not free:
            return None
        mu = self.alg.word_weight(next(iter(free)))
        vs, _ = self.words(mu)
        wp = self.alg.word_pairing
        out = []
        for v in vs:
            acc = ZERO
            for w, c in free.items():
                p = wp(w, v)
                if p:
                    acc = acc + c * p
            out.append(acc)
        return out

    def _shuffle_table(self, mu1, mu2):
        key = (mu1, mu2)
        hit = self._shuffles.get(key)
        if hit is not None:
            return hit
        mu = _vadd(mu1, mu2)
        ws, _ = self.words(mu)
        _, idx1 = self.words(mu1)
        _, idx2 = self.words(mu2)
        g = self.alg.g
        m2 = sum(mu2)
        table = []
        for w in ws:
            entries = []
            L = len(w)
            for S in combinations(range(L), m2):
                sub = tuple(w[s] for s in S)
                if self.alg.word_weight(sub) != mu2:
                    continue
                Sset = set(S)
                comp = tuple(w[t] for t in range(L) if t not in Sset)
                e = 0
                for s in S:
                    for t in range(s + 1, L):
                        if t not in Sset:
                            e += g[w[s]][w[t]]
                entries.append((idx1[comp], idx2[sub], e))
            table.append(entries)
        self._shuffles[key] = table
        return table

    def shuffle(self, x1, mu1, x2, mu2):
        """Dual vector of the product (x1)(x2) from the dual vectors of the factors.

        out[w] = sum_S q^{sum_{s in S, t notin S, s<t} (w_s, w_t)} x1[w_{S^c}] x2[w_S]
        """
        if x1 is None or x2 is None:
            return None
        if not any(mu1):
            return [x1[0] * c for c in x2]
        if not any(mu2):
            return [c * x2[0] for c in x1]
        out = []
        for entries in self._shuffle_table(mu1, mu2):
            acc = ZERO
            for i1, i2, e in entries:
                a = x1[i1]
                if a:
                    b = x2[i2]
                    if b:
                        acc = acc + (a * b).shifted(e)
            out.append(acc)
        return out

    @staticmethod
    def concat(a, b):
        """Product of two free vectors."""
        out = defaultdict(lambda: ZERO)
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                out[w1 + w2] = out[w1 + w2] + c1 * c2
        return {w: c for w, c in out.items() if c}

    def dot(self, free, dual, mu=None):
        """Normalized pairing of a free vector with a dual vector."""
        if dual is None or not free:
            return ZERO
        if mu is None:
            mu = self.alg.word_weight(next(iter(free)))
        _, idx = self.words(mu)
        acc = ZERO
        for w, c in free.items():
            v = dual[idx[w]]
            if v:
                acc = acc + c * v
        return acc

    def _top(self, d, order):
        ks = [k for k, m in enumerate(d) if m]
        return ks[-1] if order == REVERSE else ks[0]

    def free_e(self, d, order=REVERSE):
        """Word expansion of E^d (reverse: E_N^{d_N}...E_1^{d_1})."""
        key = (d, order)
        hit = self._free_e.get(key)
        if hit is None:
            if not any(d):
                hit = {(): ONE}
            else:
                k = self._top(d, order)
                rest = _vsub(d, _unit(self.N, k))
                hit = self.concat(self.free_of(self.e_vectors[k]), self.free_e(rest, order))
            self._free_e[key] = hit
        return hit

    def free_f(self, d, order=REVERSE):
        key = (d, order)
        hit = self._free_f.get(key)
        if hit is None:
            if not any(d):
                hit = {(): ONE}
            else:
                k = self._top(d, order)
                rest = _vsub(d, _unit(self.N, k))
                hit = self.concat(self.free_of(self.f_vectors[k]), self.free_f(rest, order))
            self._free_f[key] = hit
        return hit

    def dual_e(self, d, order=REVERSE):
        """Dual vector (over F-words) of E^d."""
        key = (d, order)
        hit = self._dual_e.get(key)
        if hit is None:
            if not any(d):
                hit = [ONE]
            else:
                k = self._top(d, order)
                rest = _vsub(d, _unit(self.N, k))
                hit = self.shuffle(self._root_dual_e[k], self.roots[k],
                                   self.dual_e(rest, order), self.weight(rest))
            self._dual_e[key] = hit
        return hit

    def dual_f(self, d, order=REVERSE):
        """Dual vector (over E-words) of F^d."""
        key = (d, order)
        hit = self._dual_f.get(key)
        if hit is None:
            if not any(d):
                hit = [ONE]
            else:
                k = self._top(d, order)
                rest = _vsub(d, _unit(self.N, k))
                hit = self.shuffle(self._root_dual_f[k], self.roots[k],
                                   self.dual_f(rest, order), self.weight(rest))
            self._dual_f[key] = hit
        return hit

    # diagonal of the pairing
    def closed_diagonal(self, d):
        """<F^d, E^d> from the product of single-root closed forms (absolute)."""
        out = ONE
        for k, m in enumerate(d):
            if m:
                L = self.root_length_sq(k)
                t = L // 2
                diff = qpow(t) - qpow(-t)
                val = qpow(t * m * (m - 1) // 2) * quantum_factorial(m, L) / diff ** m
                out = out * (val if m % 2 == 0 else -val)
        return out

    def diagonal(self, d):
        """Normalized <F^d, E^d>."""
        hit = self._diag.get(d)
        if hit is None:
            mu = self.weight(d)
            hit = self.closed_diagonal(d) / self.alg.gamma_weight(mu)
            self._diag[d] = hit
        return hit

    def _check_diagonal(self, d):
        direct = self.dot(self.free_f(d), self.dual_e(d))
        if direct != self.diagonal(d):
            raise CertificateError(f"diagonal pairing mismatch at {d}: {direct} vs {self.diagonal(d)}")

    def check_diagonals(self, max_total=3):
        """Cross-check the closed-form diagonal against the recursive pairing."""
        for mu in self.weights_up_to(max_total * max(sum(r) for r in self.roots)):
            for d in self.exponents(mu):
                if sum(d) <= max_total:
                    self._check_diagonal(d)
        return True

    def factorial(self, d):
        """prod_k [d_k]_{lambda_k}!"""
        out = ONE
        for k, m in enumerate(d):
            if m > 1:
                out = out * quantum_factorial(m, self.root_length_sq(k))
        return out

    def weights_up_to(self, height):
        """All weights in the positive cone with PBW monomials, of height <= height."""
        out = []
        n = self.n

        def rec(prefix, left):
            if len(prefix) == n:
                mu = tuple(prefix)
                if any(mu) and self.exponents(mu):
                    out.append(mu)
                return
            for c in range(left + 1):
                rec(prefix + [c], left - c)

        rec([], height)
        return sorted(out, key=lambda m: (sum(m), m))

    # expansions
    def expand_e_dual(self, dual, mu):
        """E-side PBW coordinates of an element given by its dual vector."""
        out = {}
        if dual is None:
            return out
        for d in self.exponents(mu):
            c = self.dot(self.free_f(d), dual, mu)
            if c:
                out[d] = c / self.diagonal(d)
        return out

    def expand_f_dual(self, dual, mu, order=REVERSE):
        """F-side PBW coordinates of an element given by its dual vector over E-words."""
        out = {}
        if dual is None:
            return out
        if order == REVERSE:
            for d in self.exponents(mu):
                c = self.dot(self.free_e(d), dual, mu)
                if c:
                    out[d] = c / self.diagonal(d)
            return out
        exps = self.exponents(mu)
        rhs = [self.dot(self.free_e(e), dual, mu) for e in exps]
        gram = [[self.dot(self.free_e(e), self.dual_f(d, FORWARD), mu) for d in exps] for e in exps]
        sol = solve_linear(gram, rhs)
        return {d: c for d, c in zip(exps, sol) if c}

    def forward_gram(self, mu):
        exps = self.exponents(mu)
        return [[self.dot(self.free_e(e), self.dual_f(d, FORWARD), mu) for d in exps] for e in exps]


def solve_linear(A, b):
    """Solve A x = b over Q(q) by Gaussian elimination."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def build_basis(datum, word=None):
    return PBWBasis(datum, word)


@dataclass
class PBWElement:
    basis: PBWBasis
    side: str
    coeffs: dict
    order: str = REVERSE

    def __post_init__(self):
        self.coeffs = {tuple(d): c for d, c in self.coeffs.items() if c}

    def __eq__(self, other):
        return (isinstance(other, PBWElement) and self.basis is other.basis
                and self.side == other.side and self.order == other.order
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        _same(self, other)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out.get(d, ZERO) + c
        return PBWElement(self.basis, self.side, out, self.order)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return PBWElement(self.basis, self.side, {d: v * c for d, v in self.coeffs.items()}, self.order)

    def components(self):
        out = defaultdict(dict)
        for d, c in self.coeffs.items():
            out[self.basis.weight(d)][d] = c
        return dict(out)

    def free(self):
        B = self.basis
        acc = defaultdict(lambda: ZERO)
        for d, c in self.coeffs.items():
            src = B.free_e(d, self.order) if self.side == "E" else B.free_f(d, self.order)
            for w, v in src.items():
                acc[w] = acc[w] + c * v
        return {w: v for w, v in acc.items() if v}

    def to_uelement(self):
        alg = self.basis.alg
        out = alg.zero()
        for w, c in self.free().items():
            out = out + (alg.e_word(w, c) if self.side == "E" else alg.f_word(w, c))
        return out

    def dual(self, mu):
        """Dual vector of the weight-mu component."""
        B = self.basis
        acc = None
        for d, c in self.coeffs.items():
            if B.weight(d) != mu:
                continue
            v = B.dual_e(d, self.order) if self.side == "E" else B.dual_f(d, self.order)
            v = [c * x for x in v]
            acc = v if acc is None else [a + b for a, b in zip(acc, v)]
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        sym = self.side
        return " + ".join(f"({c}) {sym}^{list(d)}" for d, c in sorted(self.coeffs.items()))


def _same(a, b):
    if a.basis is not b.basis or a.side != b.side or a.order != b.order:
        raise ValueError("PBW elements live in different bases")


def expand_in_pbw(a, basis, order=REVERSE, verify=False):
    """PBW coordinates of a pure, weight-homogeneous UElement."""
    if not a.terms:
        side = "E"
        return PBWElement(basis, side, {}, order)
    ws = a.weights()
    if len(ws) != 1:
        raise ValueError("input is not weight-homogeneous; split it first")
    wt = next(iter(ws))
    free = basis.free_of(a)
    if a.is_pure_e():
        if order != REVERSE:
            raise ValueError("E-side expansions use the reverse order")
        dual = basis.dual_of_e(free)
        out = PBWElement(basis, "E", basis.expand_e_dual(dual, wt), order)
        if verify:
            for e in basis.exponents(wt):
                lhs = basis.dot(basis.free_f(e), dual, wt)
                rhs = sum((c * basis.dot(basis.free_f(e), basis.dual_e(d), wt)
                           for d, c in out.coeffs.items()), ZERO)
                if lhs != rhs:
                    raise CertificateError(f"round trip failed at {e}")
        return out
    if a.is_pure_f():
        mu = tuple(-c for c in wt)
        dual = basis.dual_of_f(free)
        out = PBWElement(basis, "F", basis.expand_f_dual(dual, mu, order), order)
        if verify:
            back = basis.dual_of_f(out.free()) if out.coeffs else [ZERO] * len(dual)
            if back != dual:
                raise CertificateError("round trip failed")
        return out
    raise ValueError("input is not a pure E or pure F element")


@dataclass
class LSRelation:
    i: int
    j: int
    side: str
    order: str
    coeffs: dict
    certificates: dict = field(default_factory=dict)
    support_ok: bool = True
    valuation_ok: bool = True

    @property
    def ok(self):
        return self.support_ok and self.valuation_ok


def ls_relation(basis, i, j, side="E", strict=True):
    """E_i E_j - q^{(l_i,l_j)} E_j E_i in PBW coordinates (1-based i < j).

    The F side uses the forward order F_1^{d_1}...F_N^{d_N}.
    """
    if not 1 <= i < j <= basis.N:
        raise ValueError("need 1 <= i < j <= N")
    B = basis
    a, b = i - 1, j - 1
    li, lj = B.roots[a], B.roots[b]
    mu = _vadd(li, lj)
    t = B.datum.inner(li, lj)
    if side == "E":
        x = B.shuffle(B._root_dual_e[a], li, B._root_dual_e[b], lj)
        y = B.shuffle(B._root_dual_e[b], lj, B._root_dual_e[a], li)
        dual = [u - v.shifted(t) for u, v in zip(x, y)]
        coeffs = B.expand_e_dual(dual, mu)
        order = REVERSE
    elif side == "F":
        x = B.shuffle(B._root_dual_f[a], li, B._root_dual_f[b], lj)
        y = B.shuffle(B._root_dual_f[b], lj, B._root_dual_f[a], li)
        dual = [u - v.shifted(t) for u, v in zip(x, y)]
        coeffs = B.expand_f_dual(dual, mu, FORWARD)
        order = FORWARD
    else:
        raise ValueError("side must be 'E' or 'F'")
    rel = LSRelation(i, j, side, order, coeffs)
    for d, c in coeffs.items():
        cert = in_integral_form(c)
        rel.certificates[d] = {
            "in_A": cert.in_A,
            "valuation": cert.one_minus_q_valuation,
            "laurent": c.denominator_is_unit(),
        }
        if any(d[k] for k in range(B.N) if k <= a or k >= b):
            rel.support_ok = False
        if not cert.at_least(sum(d) - 1):
            rel.valuation_ok = False
    if strict and not rel.ok:
        raise CertificateError(f"LS certificate failed for ({i},{j}) side {side}: {coeffs}")
    return rel


def pbw_multiply(a, b):
    _same(a, b)
    B = a.basis
    out = defaultdict(lambda: ZERO)
    ca, cb = a.components(), b.components()
    for mu1 in ca:
        x1 = a.dual(mu1)
        for mu2 in cb:
            x2 = b.dual(mu2)
            mu = _vadd(mu1, mu2)
            prod = B.shuffle(x1, mu1, x2, mu2)
            if a.side == "E":
                part = B.expand_e_dual(prod, mu)
            else:
                part = B.expand_f_dual(prod, mu, a.order)
            for d, c in part.items():
                out[d] = out[d] + c
    return PBWElement(B, a.side, dict(out), a.order)


def n_coefficients(basis, d, e):
    """F^(d) F^(e) = sum_f n_f F^(f) on the divided reverse-order basis."""
    B = basis
    d, e = tuple(d), tuple(e)
    mu1, mu2 = B.weight(d), B.weight(e)
    mu = _vadd(mu1, mu2)
    prod = B.shuffle(B.dual_f(d), mu1, B.dual_f(e), mu2)
    scale = (B.factorial(d) * B.factorial(e)).inverse()
    out = {}
    for f, c in B.expand_f_dual(prod, mu).items():
        val = c * scale * B.factorial(f)
        if not in_integral_form(val).in_A:
            raise CertificateError(f"n coefficient outside the integral form at {f}: {val}")
        out[f] = val
    return out
