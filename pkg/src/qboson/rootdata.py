"""Root systems, Weyl group words and the root enumeration of a reduced word.

Simple roots and root indices are 1-based throughout, matching the usual
alpha_1..alpha_n labelling.  Positions inside a word are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "RootDatum", "ReducedWord", "RootDataError", "NotReducedError", "NotLongestError",
    "BraidMoveError", "build_root_datum", "positive_roots_from_word", "apply_braid_move",
    "type_a_interval", "canonical_word", "parse_type",
]


class RootDataError(ValueError):
    pass


class NotReducedError(RootDataError):
    pass


class NotLongestError(RootDataError):
    pass


class BraidMoveError(RootDataError):
    pass


def _form_matrix(t, n):
    # Gram matrix of the simple roots, short roots normalized to length^2 = 2
    B = [[0] * n for _ in range(n)]
    if t == "A":
        for i in range(n):
            B[i][i] = 2
            if i + 1 < n:
                B[i][i + 1] = B[i + 1][i] = -1
    elif t == "B":
        for i in range(n - 1):
            B[i][i] = 4
            B[i][i + 1] = B[i + 1][i] = -2
        B[n - 1][n - 1] = 2
    elif t == "C":
        for i in range(n - 1):
            B[i][i] = 2
            B[i][i + 1] = B[i + 1][i] = -1
        B[n - 1][n - 1] = 4
        B[n - 2][n - 1] = B[n - 1][n - 2] = -2
    elif t == "D":
        for i in range(n):
            B[i][i] = 2
        for i in range(n - 2):
            B[i][i + 1] = B[i + 1][i] = -1
        B[n - 3][n - 1] = B[n - 1][n - 3] = -1
    elif t == "E":
        for i in range(n):
            B[i][i] = 2
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        for a, b in edges:
            B[a][b] = B[b][a] = -1
    elif t == "F":
        B = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    elif t == "G":
        B = [[2, -3], [-3, 6]]
    return B


_RANKS = {"A": 1, "B": 2, "C": 2, "D": 4}


def parse_type(label, rank=None):
    """Accept ('A', 3), ('A3', None) or ('A', '3')."""
    label = str(label).strip().upper()
    if rank is None:
        if len(label) < 2 or not label[1:].isdigit():
            raise RootDataError(f"cannot parse Cartan type {label!r}")
        label, rank = label[0], int(label[1:])
    return label, int(rank)


@dataclass(frozen=True)
class RootDatum:
    cartan_type: str
    rank: int
    form: tuple
    cartan_matrix: tuple = field(init=False)

    def __post_init__(self):
        n = self.rank
        C = tuple(tuple(2 * self.form[i][j] // self.form[i][i] for j in range(n))
                  for i in range(n))
        object.__setattr__(self, "cartan_matrix", C)

    @property
    def label(self):
        return f"{self.cartan_type}{self.rank}"

    @cached_property
    def simple_roots(self):
        n = self.rank
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    @cached_property
    def gram(self):
        """1-based padded copy of the form, gram[a][b] = (alpha_a, alpha_b)."""
        n = self.rank
        g = [[0] * (n + 1) for _ in range(n + 1)]
        for i in range(n):
            for j in range(n):
                g[i + 1][j + 1] = self.form[i][j]
        return g

    def inner(self, lam, mu):
        f = self.form
        n = self.rank
        return sum(lam[i] * f[i][j] * mu[j] for i in range(n) if lam[i] for j in range(n) if mu[j])

    def norm_sq(self, lam):
        return self.inner(lam, lam)

    def root_length_sq(self, i):
        """(alpha_i, alpha_i) for a 1-based simple index."""
        return self.form[i - 1][i - 1]

    def reflect(self, i, lam):
        """s_i(lam)."""
        a = i - 1
        c = 2 * sum(lam[j] * self.form[j][a] for j in range(self.rank)) // self.form[a][a]
        out = list(lam)
        out[a] -= c
        return tuple(out)

    @cached_property
    def positive_roots(self):
        seen = set(self.simple_roots)
        todo = list(self.simple_roots)
        while todo:
            beta = todo.pop()
            for i in range(1, self.rank + 1):
                g = self.reflect(i, beta)
                if all(c >= 0 for c in g) and g not in seen:
                    seen.add(g)
                    todo.append(g)
        return tuple(sorted(seen, key=lambda r: (sum(r), r)))

    @property
    def N(self):
        return len(self.positive_roots)

    @cached_property
    def roots(self):
        pos = self.positive_roots
        return pos + tuple(tuple(-c for c in r) for r in pos)

    @cached_property
    def _root_index(self):
        return {r: k for k, r in enumerate(self.roots)}

    @cached_property
    def _reflection_perms(self):
        idx = self._root_index
        return tuple(tuple(idx[self.reflect(i, r)] for r in self.roots)
                     for i in range(1, self.rank + 1))

    def weyl_element(self, letters):
        """Permutation of self.roots given by s_{i1} ... s_{ik}."""
        perm = tuple(range(len(self.roots)))
        for i in reversed(list(letters)):
            s = self._reflection_perms[i - 1]
            perm = tuple(s[p] for p in perm)
        return perm

    @cached_property
    def longest_element(self):
        return self.weyl_element(canonical_word(self))

    def apply(self, perm, lam):
        return self.roots[perm[self._root_index[lam]]]

    def braid_order(self, i, j):
        """Order of s_i s_j."""
        if i == j:
            return 1
        p = self.cartan_matrix[i - 1][j - 1] * self.cartan_matrix[j - 1][i - 1]
        return {0: 2, 1: 3, 2: 4, 3: 6}[p]

    @cached_property
    def highest_root(self):
        return self.positive_roots[-1]

    def height(self, lam):
        return sum(lam)

    @cached_property
    def minus_w0_fixed_dim(self):
        """dim of the subspace of h fixed by -w0."""
        n = self.rank
        # -w0 permutes the simple roots
        perm = [self.apply(self.longest_element, a) for a in self.simple_roots]
        sigma = [tuple(-c for c in r).index(1) for r in perm]
        seen, cycles = set(), 0
        for i in range(n):
            if i not in seen:
                cycles += 1
                j = i
                while j not in seen:
                    seen.add(j)
                    j = sigma[j]
        return cycles


def build_root_datum(cartan_type, rank=None):
    t, n = parse_type(cartan_type, rank)
    if t not in "ABCDEFG" or len(t) != 1:
        raise RootDataError(f"unknown Cartan type {t!r}")
    ok = {
        "A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 4,
        "E": n in (6, 7, 8), "F": n == 4, "G": n == 2,
    }[t]
    if not ok:
        raise RootDataError(f"rank {n} out of range for type {t}")
    B = _form_matrix(t, n)
    return RootDatum(t, n, tuple(tuple(r) for r in B))


@dataclass(frozen=True)
class ReducedWord:
    datum: RootDatum
    letters: tuple

    def __post_init__(self):
        letters = tuple(int(i) for i in self.letters)
        object.__setattr__(self, "letters", letters)
        if any(not 1 <= i <= self.datum.rank for i in letters):
            raise RootDataError(f"letter out of range in {letters}")
        if _inversion_roots(self.datum, letters) is None:
            raise NotReducedError(f"{letters} is not reduced")

    @cached_property
    def target(self):
        return self.datum.weyl_element(self.letters)

    def is_longest(self):
        return len(self.letters) == self.datum.N

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


def _inversion_roots(datum, letters):
    # lambda_k = s_{i1}...s_{i_{k-1}}(alpha_{ik}); all positive iff reduced
    out = []
    for k, i in enumerate(letters):
        lam = datum.simple_roots[i - 1]
        for j in reversed(letters[:k]):
            lam = datum.reflect(j, lam)
        if any(c < 0 for c in lam):
            return None
        out.append(lam)
    return out


def _as_letters(word):
    if isinstance(word, ReducedWord):
        return word.letters
    return tuple(int(i) for i in word)


def canonical_word(datum):
    """Default reduced word for w0.

    Type A uses (1..n)(1..n-1)...(1 2)(1); other types take a greedy word.
    """
    n = datum.rank
    if datum.cartan_type == "A":
        return tuple(i for top in range(n, 0, -1) for i in range(1, top + 1))
    if datum.cartan_type in ("B", "G") and n == 2:
        return (1, 2) * (datum.N // 2)
    letters = []
    perm = tuple(range(len(datum.roots)))
    while len(letters) < datum.N:
        for i in range(1, n + 1):
            # w s_i is longer iff w(alpha_i) > 0
            img = datum.apply(perm, datum.simple_roots[i - 1])
            if all(c >= 0 for c in img):
                letters.append(i)
                perm = datum.weyl_element(letters)
                break
    return tuple(letters)


def positive_roots_from_word(datum, word):
    letters = _as_letters(word)
    roots = _inversion_roots(datum, letters)
    if roots is None:
        raise NotReducedError(f"{letters} is not reduced")
    if len(roots) != datum.N:
        raise NotLongestError(f"{letters} does not multiply to w0")
    return roots


def apply_braid_move(datum, word, position):
    letters = list(_as_letters(word))
    if not 0 <= position < len(letters) - 1:
        raise BraidMoveError(f"position {position} out of range")
    a, b = letters[position], letters[position + 1]
    if a == b:
        raise BraidMoveError("repeated letter; word is not reduced there")
    m = datum.braid_order(a, b)
    seg = letters[position:position + m]
    want = [a if k % 2 == 0 else b for k in range(m)]
    if seg != want:
        raise BraidMoveError(f"segment {seg} does not admit the braid relation of order {m}")
    letters[position:position + m] = [b if k % 2 == 0 else a for k in range(m)]
    if isinstance(word, ReducedWord):
        return ReducedWord(datum, tuple(letters))
    return tuple(letters)


def type_a_interval(datum, k, word=None):
    """(i, j) with lambda_k = alpha_i + ... + alpha_j for the canonical type-A word."""
    if datum.cartan_type != "A":
        raise RootDataError("interval labels exist only in type A")
    roots = positive_roots_from_word(datum, canonical_word(datum) if word is None else word)
    if not 1 <= k <= len(roots):
        raise IndexError(f"root index {k} out of range 1..{len(roots)}")
    lam = roots[k - 1]
    support = [i + 1 for i, c in enumerate(lam) if c]
    return support[0], support[-1]
