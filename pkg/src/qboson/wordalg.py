"""Free-word model of U_q(g).

Monomials are triples (f, k, e): an F-word, a lattice vector for the K part,
and an E-word, read as F_f K_k E_e.  Words are tuples of 1-based simple
indices.  Serre relations are never imposed; the pairing kills them later.
"""
from __future__ import annotations

import random
from collections import defaultdict
from functools import lru_cache

from .qscalar import ONE, ZERO, QScalar, qpow, quantum_factorial

__all__ = [
    "UElement", "TensorElement", "Algebra", "algebra",
    "multiply", "normal_order", "coproduct", "pairing", "pairing_via_coproduct", "braid_T",
]


class Algebra:
    """Per-root-datum caches for straightening, pairing and braid images."""

    def __init__(self, datum):
        self.datum = datum
        self.n = datum.rank
        self.g = datum.gram
        self.zero_k = (0,) * self.n
        self._ef = {}
        self._wp = {}
        self._tgen = {}
        self._cop = {}
        self._inv = {}

    # small helpers
    def qa(self, a):
        return self.g[a][a] // 2

    def inv_diff(self, a):
        """1/(q_a - q_a^-1)."""
        v = self._inv.get(a)
        if v is None:
            t = self.qa(a)
            v = self._inv[a] = (qpow(t) - qpow(-t)).inverse()
        return v

    def word_weight(self, w):
        out = [0] * self.n
        for a in w:
            out[a - 1] += 1
        return tuple(out)

    def ip_letter(self, a, vec):
        """(alpha_a, vec) for a lattice vector vec."""
        row = self.g[a]
        return sum(row[j + 1] * vec[j] for j in range(self.n) if vec[j])

    def ip_word(self, a, w):
        row = self.g[a]
        return sum(row[b] for b in w)

    def ip_vec(self, u, v):
        return self.datum.inner(u, v)

    def kvec_word(self, w):
        return tuple(self.word_weight(w))

    # straightening
    def _push(self, a, g):
        """E_a F_g as a list of (f, kdelta, has_e, coeff)."""
        out = [(g, self.zero_k, True, ONE)]
        inv = self.inv_diff(a)
        m = len(g)
        tail = 0
        # walk right to left so the (a, wt g_{>k}) sum is cumulative
        for k in range(m - 1, -1, -1):
            if g[k] == a:
                rest = g[:k] + g[k + 1:]
                plus = tuple(int(j == a - 1) for j in range(self.n))
                minus = tuple(-c for c in plus)
                out.append((rest, plus, False, qpow(-tail) * inv))
                out.append((rest, minus, False, -(qpow(tail) * inv)))
            tail += self.g[a][g[k]]
        return out

    def ef(self, e, f):
        """Normal order E_e F_f; returns a tuple of ((g, kappa, h), coeff)."""
        key = (e, f)
        hit = self._ef.get(key)
        if hit is not None:
            return hit
        if not e or not f:
            res = (((f, self.zero_k, e), ONE),)
            self._ef[key] = res
            return res
        a, rest = e[-1], e[:-1]
        acc = defaultdict(lambda: ZERO)
        for g, kd, has_e, c in self._push(a, f):
            h = (a,) if has_e else ()
            for (g2, k2, h2), c2 in self.ef(rest, g):
                # F_g2 K_k2 E_h2 . K_kd E_h
                p = -self.ip_vec(kd, self.word_weight(h2)) if any(kd) else 0
                mono = (g2, tuple(x + y for x, y in zip(k2, kd)), h2 + h)
                acc[mono] = acc[mono] + c * c2.shifted(p)
        res = tuple((m, c) for m, c in acc.items() if c)
        self._ef[key] = res
        return res

    def mono_mul(self, m1, m2):
        f1, k1, e1 = m1
        f2, k2, e2 = m2
        if not e1:
            # K_k1 F_f2 = q^{-(k1, wt f2)} F_f2 K_k1
            p = -self.ip_vec(k1, self.word_weight(f2)) if any(k1) and f2 else 0
            return (((f1 + f2, _vadd(k1, k2), e2), qpow(p)),)
        out = []
        for (g, kap, h), c in self.ef(e1, f2):
            p = 0
            if any(k1) and g:
                p -= self.ip_vec(k1, self.word_weight(g))
            if any(k2) and h:
                p -= self.ip_vec(k2, self.word_weight(h))
            out.append(((f1 + g, _vadd(_vadd(k1, kap), k2), h + e2), c.shifted(p)))
        return out

    # generators
    def E(self, i):
        return UElement(self, {((), self.zero_k, (i,)): ONE})

    def F(self, i):
        return UElement(self, {((i,), self.zero_k, ()): ONE})

    def K(self, mu):
        return UElement(self, {((), tuple(mu), ()): ONE})

    def one(self):
        return UElement(self, {((), self.zero_k, ()): ONE})

    def scalar(self, c):
        return UElement(self, {((), self.zero_k, ()): QScalar(c) if not isinstance(c, QScalar) else c})

    def zero(self):
        return UElement(self, {})

    def e_word(self, w, c=ONE):
        return UElement(self, {((), self.zero_k, tuple(w)): c})

    def f_word(self, w, c=ONE):
        return UElement(self, {(tuple(w), self.zero_k, ()): c})

    def E_div(self, i, n):
        """Divided power E_i^(n) expanded as a word."""
        return self.e_word((i,) * n, quantum_factorial(n, self.g[i][i]).inverse())

    def F_div(self, i, n):
        return self.f_word((i,) * n, quantum_factorial(n, self.g[i][i]).inverse())

    # pairing of pure words, normalized: <F_f, E_e> / prod_a <F_a, E_a>^{m_a}
    def word_pairing(self, f, e):
        key = (f, e)
        hit = self._wp.get(key)
        if hit is not None:
            return hit
        if len(f) != len(e):
            val = ZERO
        elif not f:
            val = ONE
        elif sorted(f) != sorted(e):
            val = ZERO
        else:
            a, rest = f[-1], f[:-1]
            val = ZERO
            tail = 0
            for k in range(len(e) - 1, -1, -1):
                if e[k] == a:
                    sub = self.word_pairing(rest, e[:k] + e[k + 1:])
                    if sub:
                        val = val + sub.shifted(tail)
                tail += self.g[a][e[k]]
        self._wp[key] = val
        return val

    def gamma(self, a):
        """<F_a, E_a> = -1/(q_a - q_a^-1)."""
        return -self.inv_diff(a)

    def gamma_weight(self, mu):
        out = ONE
        for j, m in enumerate(mu):
            if m:
                out = out * self.gamma(j + 1) ** m
        return out

    # braid automorphisms
    def braid_generator(self, i, letter):
        """T_i applied to one generator: letter = ('E', b) | ('F', b)."""
        key = (i, letter)
        hit = self._tgen.get(key)
        if hit is not None:
            return hit
        kind, b = letter
        alpha = tuple(int(j == i - 1) for j in range(self.n))
        if b == i:
            if kind == "E":
                # -F_i K_i
                res = UElement(self, {((i,), alpha, ()): -ONE})
            else:
                # -K_i^{-1} E_i
                res = UElement(self, {((), tuple(-c for c in alpha), (i,)): -ONE})
        else:
            r = -2 * self.g[b][i] // self.g[i][i]
            t = self.qa(i)
            res = self.zero()
            for j in range(r + 1):
                sign = -1 if j % 2 else 1
                if kind == "E":
                    c = qpow(-t * j) * sign
                    w = (i,) * (r - j) + (b,) + (i,) * j
                else:
                    c = qpow(t * j) * sign
                    w = (i,) * j + (b,) + (i,) * (r - j)
                scale = (quantum_factorial(r - j, self.g[i][i])
                         * quantum_factorial(j, self.g[i][i])).inverse()
                mono = ((), self.zero_k, w) if kind == "E" else (w, self.zero_k, ())
                res = res + UElement(self, {mono: c * scale})
        self._tgen[key] = res
        return res

    def braid_monomial(self, i, mono):
        f, k, e = mono
        out = self.one()
        for b in f:
            out = out * self.braid_generator(i, ("F", b))
        if any(k):
            out = out * self.K(self.datum.reflect(i, k))
        for b in e:
            out = out * self.braid_generator(i, ("E", b))
        return out

    # coproduct
    def coproduct_monomial(self, mono):
        hit = self._cop.get(mono)
        if hit is not None:
            return hit
        f, k, e = mono
        z = self.zero_k
        res = TensorElement(self, {(((), z, ()), ((), z, ())): ONE})
        for b in f:
            alpha = tuple(int(j == b - 1) for j in range(self.n))
            malpha = tuple(-c for c in alpha)
            res = res * TensorElement(self, {
                (((b,), z, ()), ((), malpha, ())): ONE,
                (((), z, ()), ((b,), z, ())): ONE,
            })
        if any(k):
            res = res * TensorElement(self, {(((), k, ()), ((), k, ())): ONE})
        for b in e:
            alpha = tuple(int(j == b - 1) for j in range(self.n))
            res = res * TensorElement(self, {
                (((), z, (b,)), ((), z, ())): ONE,
                (((), alpha, ()), ((), z, (b,))): ONE,
            })
        self._cop[mono] = res
        return res


def _vadd(u, v):
    return tuple(x + y for x, y in zip(u, v))


_ALGEBRAS = {}


def algebra(datum):
    alg = _ALGEBRAS.get(datum)
    if alg is None:
        alg = _ALGEBRAS[datum] = Algebra(datum)
    return alg


class UElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return UElement(self.alg, out)

    def __neg__(self):
        return UElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not isinstance(c, QScalar):
            c = QScalar(c)
        return UElement(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, UElement):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, UElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def weights(self):
        w = self.alg.word_weight
        return {tuple(x - y for x, y in zip(w(e), w(f))) for f, k, e in self.terms}

    def is_pure_e(self):
        z = self.alg.zero_k
        return all(not f and k == z for f, k, e in self.terms)

    def is_pure_f(self):
        z = self.alg.zero_k
        return all(not e and k == z for f, k, e in self.terms)

    def e_terms(self):
        """{E-word: coeff} for a pure E element."""
        return {e: c for (f, k, e), c in self.terms.items()}

    def f_terms(self):
        return {f: c for (f, k, e), c in self.terms.items()}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]) + len(t[0][2]), t[0])):
            parts.append(f"({c}) {mono_str(m)}")
        return " + ".join(parts)

    __repr__ = __str__


def mono_str(m):
    f, k, e = m
    out = [f"F{a}" for a in f]
    if any(k):
        out.append("K(" + ",".join(str(x) for x in k) + ")")
    out += [f"E{a}" for a in e]
    return " ".join(out) or "1"


class TensorElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if c}

    def __mul__(self, other):
        alg = self.alg
        acc = defaultdict(lambda: ZERO)
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                left = alg.mono_mul(a1, a2)
                right = alg.mono_mul(b1, b2)
                c = c1 * c2
                for ma, ca in left:
                    for mb, cb in right:
                        acc[(ma, mb)] = acc[(ma, mb)] + c * ca * cb
        return TensorElement(alg, acc)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return TensorElement(self.alg, out)

    def __sub__(self, other):
        return self + TensorElement(self.alg, {m: -c for m, c in other.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return " + ".join(f"({c}) [{mono_str(a)}] x [{mono_str(b)}]"
                          for (a, b), c in self.terms.items()) or "0"


def multiply(a, b):
    alg = a.alg
    acc = defaultdict(lambda: ZERO)
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c = c1 * c2
            for m, cm in alg.mono_mul(m1, m2):
                acc[m] = acc[m] + c * cm
    return UElement(alg, acc)


def normal_order(alg, letters, rng=None):
    """Normal order a raw word of letters ('E', i) / ('F', i) / ('K', vec).

    With rng given, the product is bracketed at random, which exercises a
    different reduction order each time.
    """
    gens = []
    for kind, x in letters:
        if kind == "E":
            gens.append(alg.E(x))
        elif kind == "F":
            gens.append(alg.F(x))
        elif kind == "K":
            gens.append(alg.K(x))
        else:
            raise ValueError(f"unknown letter {kind!r}")
    if not gens:
        return alg.one()

    def prod(lo, hi):
        if hi - lo == 1:
            return gens[lo]
        mid = (lo + hi) // 2 if rng is None else rng.randrange(lo + 1, hi)
        return prod(lo, mid) * prod(mid, hi)

    if rng is None:
        out = gens[0]
        for g in gens[1:]:
            out = out * g
        return out
    return prod(0, len(gens))


def coproduct(a):
    alg = a.alg
    out = TensorElement(alg, {})
    for m, c in a.terms.items():
        d = alg.coproduct_monomial(m)
        out = out + TensorElement(alg, {k: c * v for k, v in d.terms.items()})
    return out


def pairing(y, x):
    """Drinfeld-Killing pairing <y, x> for y in U^{<=0}, x in U^{>=0}."""
    alg = y.alg
    total = ZERO
    for (f, k, e), c in y.terms.items():
        if e:
            raise ValueError("left argument must lie in U^{<=0}")
        for (f2, k2, e2), c2 in x.terms.items():
            if f2:
                raise ValueError("right argument must lie in U^{>=0}")
            if len(f) != len(e2):
                continue
            v = alg.word_pairing(f, e2)
            if not v:
                continue
            # K_k2 E_e2 = q^{(k2, wt e2)} E_e2 K_k2 and <y K_l, x K_m> = q^{-(l,m)} <y,x>
            p = alg.ip_vec(k2, alg.word_weight(e2)) - alg.ip_vec(k, k2)
            total = total + c * c2 * v.shifted(p) * alg.gamma_weight(alg.word_weight(f))
    return total


def pairing_via_coproduct(y, x):
    """Independent route: peel E letters with <y, x x'> = <Delta(y), x' (x) x>.

    Used as an oracle for pairing(); exponential, keep inputs small.
    """
    alg = y.alg
    total = ZERO
    for (f2, k2, e2), c2 in x.terms.items():
        if f2:
            raise ValueError("right argument must lie in U^{>=0}")
        total = total + c2 * _pair_cop(alg, y, k2, e2)
    return total


def _pair_cop(alg, y, kx, e):
    # <y, K_kx E_e>
    if not e:
        total = ZERO
        for (f, k, ee), c in y.terms.items():
            if ee:
                raise ValueError("left argument must lie in U^{<=0}")
            if not f:
                total = total + c * qpow(-alg.ip_vec(k, kx))
        return total
    # K_kx E_e = (K_kx E_{e'}) . E_a with x = K_kx E_{e'}, x' = E_a
    a, rest = e[-1], e[:-1]
    d = coproduct(y)
    total = ZERO
    for (m1, m2), c in d.terms.items():
        f1, k1, e1 = m1
        if e1 or len(f1) != 1 or f1[0] != a:
            continue
        # <F_a K_k1, E_a> = <F_a, E_a>
        val = c * alg.gamma(a)
        total = total + val * _pair_cop(alg, UElement(alg, {m2: ONE}), kx, rest)
    return total


def braid_T(i, a):
    """Lusztig's automorphism T_i applied to a UElement."""
    alg = a.alg
    out = alg.zero()
    for m, c in a.terms.items():
        out = out + alg.braid_monomial(i, m).scale(c)
    return out
