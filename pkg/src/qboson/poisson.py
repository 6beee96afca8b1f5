"""The quasi-classical limit P = Q[x_1..x_N] and its Poisson geometry.

Brackets are computed from operator commutators and divided by (1 - q)
before setting q = 1.  The type-A interval formula, the G2 table and the
Kirillov-Kostant bracket live here as independent closed forms that the
computed brackets are compared against.
"""
from __future__ import annotations

import random
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from flint import fmpq, fmpq_mat

from .qscalar import eval_at_one, qpow, ONE

__all__ = [
    "Poly", "Bivector", "PoissonStructure", "PolyVectorField",
    "hayashi_structure", "closed_form_type_a", "g2_table", "bracket", "jacobiator",
    "jacobi_failures", "is_poisson", "kirillov_kostant", "casimir_psi", "casimir_psi_prime",
    "casimir_check", "vector_field", "vector_field_type_a", "lie_derivative",
    "pencil_checks", "generic_rank", "reduced_word_independence_check",
    "linear_part", "parse_poly", "linear_deformation_report", "pois_bra_diagnostic", "interval_labels",
]


class Poly:
    """Sparse polynomial in x_1..x_n with rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = Fraction(c)

    @classmethod
    def var(cls, n, k):
        """x_k, 1-based."""
        e = [0] * n
        e[k - 1] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def const(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.n, other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.n, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly(self.n)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.n)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.n)
            p = Poly(self.n)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        p = Poly(self.n)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, k):
        """d/dx_k, 1-based."""
        a = k - 1
        out = {}
        for e, c in self.terms.items():
            if e[a]:
                f = list(e)
                f[a] -= 1
                out[tuple(f)] = c * e[a]
        p = Poly(self.n)
        p.terms = out
        return p

    def subs(self, images):
        """Substitute x_k -> images[k-1] (Polys, possibly in another ring)."""
        m = images[0].n
        out = Poly(m)
        for e, c in self.terms.items():
            t = Poly.const(m, c)
            for k, p in enumerate(e):
                if p:
                    t = t * images[k] ** p
            out = out + t
        return out

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(point, e):
                if p:
                    v *= Fraction(x) ** p
            total += v
        return total

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, d):
        return Poly(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def weights(self, roots):
        """Set of lambda-weights of the monomials."""
        out = set()
        for e in self.terms:
            w = [0] * len(roots[0])
            for k, p in enumerate(e):
                for j in range(len(w)):
                    w[j] += p * roots[k][j]
            out.add(tuple(w))
        return out

    def to_string(self, names=None):
        """Canonical text form, terms in descending degree then lex order."""
        if not self.terms:
            return "0"
        names = names or [f"x{k}" for k in range(1, self.n + 1)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Poly({self})"


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text, n, names=None):
    """Inverse of Poly.to_string."""
    names = names or [f"x{k}" for k in range(1, n + 1)]
    pos = {name: k for k, name in enumerate(names)}
    text = text.strip()
    out = Poly(n)
    if text == "0":
        return out
    for sign, body in _TERM.findall(text):
        coeff, e = Fraction(1), [0] * n
        for factor in body.strip().split("*"):
            factor = factor.strip()
            base, _, power = factor.partition("^")
            if base in pos:
                e[pos[base]] += int(power) if power else 1
            else:
                coeff *= Fraction(base)
        out = out + Poly(n, {tuple(e): -coeff if sign == "-" else coeff})
    return out


@dataclass
class Bivector:
    """Antisymmetric table pi(dx_i, dx_j) for i < j (1-based)."""
    N: int
    table: dict = field(default_factory=dict)
    names: list | None = None

    def __post_init__(self):
        self.table = {k: v for k, v in self.table.items() if v}

    def entry(self, i, j):
        if i == j:
            return Poly(self.N)
        if i < j:
            return self.table.get((i, j), Poly(self.N))
        return -self.table.get((j, i), Poly(self.N))

    def __add__(self, other):
        keys = set(self.table) | set(other.table)
        return type(self)(self.N, {k: self.entry(*k) + other.entry(*k) for k in keys}, self.names)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return type(self)(self.N, {k: v * Fraction(c) for k, v in self.table.items()}, self.names)

    def __eq__(self, other):
        return isinstance(other, Bivector) and self.N == other.N and self.table == other.table

    def __bool__(self):
        return bool(self.table)

    def to_json(self):
        return {"pairs": [{"i": i, "j": j, "bracket": self.entry(i, j).to_string()}
                          for i in range(1, self.N + 1) for j in range(i + 1, self.N + 1)]}


class PoissonStructure(Bivector):
    pass


def bracket(f, g, pi):
    """{f, g} = sum_{i,j} d_i f d_j g pi(dx_i, dx_j)."""
    N = pi.N
    out = Poly(N)
    df = [f.diff(k) for k in range(1, N + 1)]
    dg = [g.diff(k) for k in range(1, N + 1)]
    for i in range(N):
        if not df[i]:
            continue
        for j in range(N):
            if i == j or not dg[j]:
                continue
            e = pi.entry(i + 1, j + 1)
            if e:
                out = out + df[i] * dg[j] * e
    return out


def jacobiator(f, g, h, pi):
    return (bracket(bracket(f, g, pi), h, pi) + bracket(bracket(g, h, pi), f, pi)
            + bracket(bracket(h, f, pi), g, pi))


def jacobi_failures(pi):
    N = pi.N
    xs = [Poly.var(N, k) for k in range(1, N + 1)]
    bad = []
    for i, j, k in combinations(range(N), 3):
        if jacobiator(xs[i], xs[j], xs[k], pi):
            bad.append((i + 1, j + 1, k + 1))
    return bad


def is_poisson(pi):
    return not jacobi_failures(pi)


def hayashi_structure(basis, check_jacobi=True):
    """{x_i, x_j} = sum_d (h_d/(1-q))|_{q=1} x^d from the commutator structure."""
    from .boson import commutator_structure

    B = basis
    N = B.N
    table = {}
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            cs = commutator_structure(B, i, j)
            table[(i, j)] = Poly(N, cs.bracket_terms())
    pi = PoissonStructure(N, table, default_names(B))
    if check_jacobi:
        bad = jacobi_failures(pi)
        if bad:
            raise ArithmeticError(f"Jacobi identity fails on {bad[:5]}")
    return pi


def default_names(basis):
    D = basis.datum
    if D.cartan_type == "A" and D.rank == 2 and tuple(basis.word.letters) == (1, 2, 1):
        return ["x", "u", "y"]
    if D.cartan_type == "A" and D.rank == 3 and tuple(basis.word.letters) == (1, 2, 3, 1, 2, 1):
        return ["x", "u", "s", "y", "v", "z"]
    return None


def interval_labels(n):
    """[(i, j)] in the root order of the canonical type-A word."""
    from .rootdata import build_root_datum, type_a_interval

    D = build_root_datum("A", n)
    return [type_a_interval(D, k) for k in range(1, D.N + 1)]


def _interval_bracket(a, b, x):
    # the six relative positions, with [i,j] = a and [k,l] = b; None if no case applies
    (i, j), (k, l) = a, b
    if j <= k - 2:
        return 0
    if j == k - 1:
        return x[a] * x[b] + x[(i, l)] * 2
    if i < k <= j < l:
        return x[(k, j)] * x[(i, l)] * (-2)
    if k < i <= j < l:
        return 0
    if i == k and j < l:
        return -(x[a] * x[b])
    if k < i and j == l:
        return x[a] * x[b]
    return None


def closed_form_type_a(n):
    labels = interval_labels(n)
    N = len(labels)
    x = {lab: Poly.var(N, k + 1) for k, lab in enumerate(labels)}
    table = {}
    for p in range(N):
        for r in range(p + 1, N):
            a, b = labels[p], labels[r]
            v = _interval_bracket(a, b, x)
            if v is None:
                v = _interval_bracket(b, a, x)
                if v is None:
                    raise AssertionError(f"no case for {a}, {b}")
                v = -v if v else v
            table[(p + 1, r + 1)] = v if isinstance(v, Poly) else Poly(N)
    return PoissonStructure(N, table)


def g2_table():
    """The published G2 bracket for the word (1,2,1,2,1,2)."""
    N = 6
    x = [None] + [Poly.var(N, k) for k in range(1, 7)]
    t = {
        (1, 2): x[1] * x[2] * -3,
        (1, 3): -(x[1] * x[3]) + x[2] * 2,
        (1, 4): x[3] ** 2 * -6,
        (1, 5): x[1] * x[5] + x[3] * 4,
        (1, 6): x[1] * x[6] * 3 + x[5] * 6,
        (2, 3): x[2] * x[3] * -3,
        (2, 4): x[2] * x[4] * -3 + x[3] ** 3 * 6,
        (2, 5): x[3] ** 2 * -6,
        (2, 6): x[2] * x[6] * 3 - x[3] * x[5] * 18 - x[4] * 6,
        (3, 4): x[3] * x[4] * -3,
        (3, 5): -(x[3] * x[5]) + x[4] * 2,
        (3, 6): x[5] ** 2 * -6,
        (4, 5): x[4] * x[5] * -3,
        (4, 6): x[4] * x[6] * -3 + x[5] ** 3 * 6,
        (5, 6): x[5] * x[6] * -3,
    }
    return PoissonStructure(N, t)


def kirillov_kostant(n):
    labels = interval_labels(n)
    N = len(labels)
    idx = {lab: k + 1 for k, lab in enumerate(labels)}
    table = {}
    for p in range(N):
        for r in range(p + 1, N):
            (i, j), (k, l) = labels[p], labels[r]
            if k == j + 1:
                table[(p + 1, r + 1)] = Poly.var(N, idx[(i, l)])
            elif i == l + 1:
                table[(p + 1, r + 1)] = -Poly.var(N, idx[(k, j)])
    return PoissonStructure(N, table)


def _compositions(n):
    for m in range(1, n + 1):
        for cut in combinations(range(1, n), m - 1):
            yield tuple(cut) + (n,)


def casimir_psi(n):
    labels = interval_labels(n)
    N = len(labels)
    x = {lab: Poly.var(N, k + 1) for k, lab in enumerate(labels)}
    s = Poly(N)
    for kappa in _compositions(n):
        term, start = Poly.const(N, 1), 1
        for k in kappa:
            term = term * x[(start, k)]
            start = k + 1
        s = s + term
    return s * x[(1, n)]


def casimir_psi_prime():
    """x_{1,2} x_{2,3} - x_2 x_{1,3} in type A3."""
    labels = interval_labels(3)
    x = {lab: Poly.var(6, k + 1) for k, lab in enumerate(labels)}
    return x[(1, 2)] * x[(2, 3)] - x[(2, 2)] * x[(1, 3)]


def casimir_check(f, pi):
    return all(not bracket(f, Poly.var(pi.N, k), pi) for k in range(1, pi.N + 1))


@dataclass
class PolyVectorField:
    N: int
    components: list  # coefficient Poly of d/dx_k, k = 1..N

    def __call__(self, f):
        out = Poly(self.N)
        for k, c in enumerate(self.components):
            if c:
                d = f.diff(k + 1)
                if d:
                    out = out + c * d
        return out

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.components == other.components

    def __sub__(self, other):
        return PolyVectorField(self.N, [a - b for a, b in zip(self.components, other.components)])

    def __add__(self, other):
        return PolyVectorField(self.N, [a + b for a, b in zip(self.components, other.components)])

    def scale(self, c):
        return PolyVectorField(self.N, [a * Fraction(c) for a in self.components])

    def commutator(self, other):
        xs = [Poly.var(self.N, k) for k in range(1, self.N + 1)]
        return PolyVectorField(self.N, [self(other(x)) - other(self(x)) for x in xs])

    def __bool__(self):
        return any(self.components)


def vector_field(basis, k, check_closed_form=True):
    """F_k bar acting by x_j -> -sum_e n^{lambda_k, e}_{lambda_j}|_{q=1} x^e."""
    from .boson import _in_cone
    from .pbw import _unit, _vsub, n_coefficients

    B = basis
    N = B.N
    uk = _unit(N, k - 1)
    comps = []
    for j in range(1, N + 1):
        rest = _vsub(B.roots[j - 1], B.roots[k - 1])
        c = Poly(N)
        if _in_cone(rest):
            uj = _unit(N, j - 1)
            for e in B.exponents(rest):
                n = n_coefficients(B, uk, e).get(uj)
                if n:
                    c = c - Poly.monomial(e, eval_at_one(n))
        comps.append(c)
    X = PolyVectorField(N, comps)
    D = B.datum
    if check_closed_form and D.cartan_type == "A" and tuple(B.word.letters) == _canon(D):
        from .rootdata import type_a_interval
        i, j = type_a_interval(D, k)
        if X != vector_field_type_a(D.rank, i, j):
            raise ArithmeticError(f"vector field for {(i, j)} disagrees with the type-A closed form")
    return X


def _canon(D):
    from .rootdata import canonical_word
    return tuple(canonical_word(D))


def vector_field_type_a(n, i, j):
    """-d_{i,j} + sum_{k=j+1}^n x_{j+1,k} d_{i,k}"""
    labels = interval_labels(n)
    N = len(labels)
    idx = {lab: p for p, lab in enumerate(labels)}
    comps = [Poly(N) for _ in range(N)]
    comps[idx[(i, j)]] = Poly.const(N, -1)
    for k in range(j + 1, n + 1):
        comps[idx[(i, k)]] = comps[idx[(i, k)]] + Poly.var(N, idx[(j + 1, k)] + 1)
    return PolyVectorField(N, comps)


def lie_derivative(X, pi):
    """[X, pi](dx_a, dx_b) = X{x_a,x_b} - {X x_a, x_b} - {x_a, X x_b}."""
    N = pi.N
    xs = [Poly.var(N, k) for k in range(1, N + 1)]
    Xx = [X(x) for x in xs]
    table = {}
    for a in range(N):
        for b in range(a + 1, N):
            v = X(pi.entry(a + 1, b + 1)) - bracket(Xx[a], xs[b], pi) - bracket(xs[a], Xx[b], pi)
            table[(a + 1, b + 1)] = v
    return Bivector(N, table, pi.names)


def pencil_checks(pi1, pi2, X=None):
    """Jacobi for pi1, pi2, pi1 + pi2; with X, also [X, [X, pi1]] = 0."""
    report = {
        "jacobi_1": is_poisson(pi1),
        "jacobi_2": is_poisson(pi2),
        "jacobi_sum": is_poisson(pi1 + pi2),
    }
    report["compatible"] = report["jacobi_1"] and report["jacobi_2"] and report["jacobi_sum"]
    if X is not None:
        report["second_derivative_zero"] = not lie_derivative(X, lie_derivative(X, pi1))
    return report


def _rank_at(pi, point):
    N = pi.N
    rows = [[pi.entry(i, j).evaluate(point) for j in range(1, N + 1)] for i in range(1, N + 1)]
    return fmpq_mat(N, N, [fmpq(c.numerator, c.denominator) for r in rows for c in r]).rank()


def generic_rank(pi, samples=5, seed=0, bound=9):
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        point = [rng.randint(-bound, bound) for _ in range(pi.N)]
        best = max(best, _rank_at(pi, point))
    return best


def linear_part(pi):
    return type(pi)(pi.N, {k: v.homogeneous_part(1) for k, v in pi.table.items()}, pi.names)


def linear_deformation_report(pi, coefficients=(-2, -1, 1, 2)):
    """Whether pi + c * (linear part of pi) is Poisson for each c.

    In type A the linear part is 2 pi_KK; beyond type A this is an empirical
    report only.
    """
    lin = linear_part(pi)
    return {str(c): is_poisson(pi + lin.scale(c)) for c in coefficients}


def _coordinate_change(datum, word, position):
    """Polys for the old coordinates in terms of the new ones after one move."""
    from .rootdata import apply_braid_move

    letters = tuple(word)
    new = apply_braid_move(datum, letters, position)
    m = datum.braid_order(letters[position], letters[position + 1])
    N = len(letters)
    y = [Poly.var(N, k) for k in range(1, N + 1)]
    images = list(y)
    p = position
    if m == 2:
        images[p], images[p + 1] = y[p + 1], y[p]
    elif m == 3:
        # new_i = old_{i+2}, new_{i+2} = old_i, new_{i+1} = -(old_{i+2} old_i + old_{i+1})
        images[p] = y[p + 2]
        images[p + 2] = y[p]
        images[p + 1] = -y[p + 1] - y[p] * y[p + 2]
    else:
        raise NotImplementedError(f"braid move of order {m} is not supported")
    return new, images


def _move_chain(datum, start, goal):
    start, goal = tuple(start), tuple(goal)
    prev = {start: None}
    todo = deque([start])
    from .rootdata import apply_braid_move
    while todo:
        w = todo.popleft()
        if w == goal:
            break
        for p in range(len(w) - 1):
            try:
                m = datum.braid_order(w[p], w[p + 1])
                if m not in (2, 3):
                    continue
                v = apply_braid_move(datum, w, p)
            except Exception:
                continue
            if v not in prev:
                prev[v] = (w, p)
                todo.append(v)
    if goal not in prev:
        return None
    chain, w = [], goal
    while prev[w] is not None:
        w0, p = prev[w]
        chain.append((w0, p))
        w = w0
    return chain[::-1]


def reduced_word_independence_check(datum, word_a, word_b):
    """{x_i(y), x_j(y)}_B = {x_i, x_j}_A (y) through a chain of A2-type/commuting moves.

    Raises NotImplementedError when no supported chain connects the words.
    """
    from .pbw import PBWBasis

    word_a, word_b = tuple(word_a), tuple(word_b)
    chain = _move_chain(datum, word_a, word_b)
    if chain is None:
        raise NotImplementedError("no chain of supported braid moves connects the words")
    N = datum.N
    images = [Poly.var(N, k) for k in range(1, N + 1)]
    for w, p in chain:
        _, step = _coordinate_change(datum, w, p)
        images = [f.subs(step) for f in images]
    pa = hayashi_structure(PBWBasis(datum, word_a), check_jacobi=False)
    pb = hayashi_structure(PBWBasis(datum, word_b), check_jacobi=False)
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            lhs = bracket(images[i - 1], images[j - 1], pb)
            rhs = pa.entry(i, j).subs(images)
            if lhs != rhs:
                return False
    return True


def pois_bra_diagnostic(basis):
    """Compare a corrected reading of the general bracket formula with the computed table.

    The reading uses lambda_d = lambda_i + lambda_j and exponent -d_k.  Returns
    {(i, j): bool}.  Diagnostic only.
    """
    from .pbw import ls_relation

    B = basis
    pi = hayashi_structure(B, check_jacobi=False)
    N = B.N
    one_minus_q = ONE - qpow(1)

    def diff(L):
        t = L // 2
        return qpow(t) - qpow(-t)

    out = {}
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            ui = [0] * N
            ui[i - 1] += 1
            ui[j - 1] += 1
            val = Poly.monomial(ui, -B.datum.inner(B.roots[i - 1], B.roots[j - 1]))
            rel = ls_relation(B, i, j, "E")
            for d, c in rel.coeffs.items():
                s = c * diff(B.root_length_sq(i - 1)) * diff(B.root_length_sq(j - 1)) / one_minus_q
                if sum(d) % 2:
                    s = -s
                for k, m in enumerate(d):
                    if m:
                        s = s / diff(B.root_length_sq(k)) ** m
                val = val + Poly.monomial(d, eval_at_one(s))
            out[(i, j)] = val == pi.entry(i, j)
    return out
