"""Coxeter group arithmetic: normal forms, weak order, parabolic subgroups.

Words are tuples of 1-based generator indices.  Every element is stored by its
ShortLex-least reduced word, so equality of elements is equality of words.
The word problem is solved by closing reduced words under braid moves; the
closures are memoized per :class:`CoxeterSystem`.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

INF = math.inf

Word = tuple[int, ...]


class CartanMatrixError(ValueError):
    pass


class CoxeterMatrixError(ValueError):
    pass


class NotFiniteTypeError(ValueError):
    pass


def _format_m(value):
    return "inf" if value == INF else int(value)


def _parse_m(value):
    if value in ("inf", "infinity", "∞", None) or value == INF:
        return INF
    return int(value)


@dataclass(frozen=True)
class GeneralizedCartanMatrix:
    a: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.a)
        object.__setattr__(self, "a", rows)
        n = len(rows)
        if n == 0:
            raise CartanMatrixError("rank must be positive")
        if any(len(row) != n for row in rows):
            raise CartanMatrixError("matrix must be square")
        for i in range(n):
            if rows[i][i] != 2:
                raise CartanMatrixError(f"diagonal entry a[{i+1}][{i+1}] must be 2")
            for j in range(n):
                if i == j:
                    continue
                if rows[i][j] > 0:
                    raise CartanMatrixError(f"off-diagonal entry a[{i+1}][{j+1}] must be <= 0")
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise CartanMatrixError(
                        f"a[{i+1}][{j+1}] = 0 must hold exactly when a[{j+1}][{i+1}] = 0"
                    )

    @property
    def n(self) -> int:
        return len(self.a)

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]

    def to_json(self) -> dict:
        return {"n": self.n, "a": [list(row) for row in self.a]}

    @classmethod
    def from_json(cls, data) -> "GeneralizedCartanMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        a = data["a"]
        if "n" in data and data["n"] != len(a):
            raise CartanMatrixError("declared n does not match the matrix size")
        return cls(tuple(tuple(row) for row in a))


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(_parse_m(x) for x in row) for row in self.m)
        object.__setattr__(self, "m", rows)
        n = len(rows)
        if n == 0:
            raise CoxeterMatrixError("rank must be positive")
        if any(len(row) != n for row in rows):
            raise CoxeterMatrixError("matrix must be square")
        for i in range(n):
            if rows[i][i] != 1:
                raise CoxeterMatrixError(f"m[{i+1}][{i+1}] must be 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise CoxeterMatrixError(f"m[{i+1}][{j+1}] != m[{j+1}][{i+1}]")
                if i != j and rows[i][j] < 2:
                    raise CoxeterMatrixError(f"m[{i+1}][{j+1}] must be >= 2")

    @property
    def n(self) -> int:
        return len(self.m)

    def __call__(self, i: int, j: int):
        """Entry m_ij for 1-based indices."""
        return self.m[i - 1][j - 1]

    def restricted(self, subset: Iterable[int]) -> "CoxeterMatrix":
        idx = sorted(subset)
        return CoxeterMatrix(tuple(tuple(self.m[i - 1][j - 1] for j in idx) for i in idx))

    def to_json(self) -> dict:
        return {"n": self.n, "m": [[_format_m(x) for x in row] for row in self.m]}

    @classmethod
    def from_json(cls, data) -> "CoxeterMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        m = data["m"]
        if "n" in data and data["n"] != len(m):
            raise CoxeterMatrixError("declared n does not match the matrix size")
        return cls(tuple(tuple(row) for row in m))

    @classmethod
    def from_offdiagonal(cls, n: int, entries: dict[tuple[int, int], object], default=2) -> "CoxeterMatrix":
        rows = [[1 if i == j else default for j in range(n)] for i in range(n)]
        for (i, j), v in entries.items():
            rows[i - 1][j - 1] = rows[j - 1][i - 1] = v
        return cls(tuple(tuple(r) for r in rows))


def gcm_to_coxeter(A: GeneralizedCartanMatrix) -> CoxeterMatrix:
    """Coxeter matrix of the Weyl group of a generalized Cartan matrix."""
    table = {0: 2, 1: 3, 2: 4, 3: 6}
    n = A.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(1)
            else:
                row.append(table.get(A.a[i][j] * A.a[j][i], INF))
        rows.append(tuple(row))
    return CoxeterMatrix(tuple(rows))


def _braid_moves(word: Word, m: tuple[tuple, ...]):
    n = len(word)
    for i in range(n - 1):
        a, b = word[i], word[i + 1]
        if a == b:
            continue
        mab = m[a - 1][b - 1]
        if mab == INF or i + mab > n:
            continue
        mab = int(mab)
        if all(word[i + t] == (a if t % 2 == 0 else b) for t in range(mab)):
            alt = tuple(b if t % 2 == 0 else a for t in range(mab))
            yield word[:i] + alt + word[i + mab:]


class CoxeterSystem:
    """A Coxeter group with memoized word-problem machinery.

    The closure cache maps a canonical word to the frozenset of all reduced
    words of that element.  Results never depend on what is cached.
    """

    def __init__(self, matrix: CoxeterMatrix):
        self.matrix = matrix
        self._closures: dict[Word, frozenset[Word]] = {(): frozenset({()})}
        self._products: dict[tuple[Word, int], Word] = {}

    @classmethod
    def from_gcm(cls, A: GeneralizedCartanMatrix) -> "CoxeterSystem":
        return system_for(gcm_to_coxeter(A))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"CoxeterSystem({self.matrix.to_json()['m']})"

    # -- word problem -------------------------------------------------------

    def _close(self, seeds: Iterable[Word]) -> frozenset[Word]:
        seen = set(seeds)
        queue = deque(seen)
        m = self.matrix.m
        while queue:
            word = queue.popleft()
            for nxt in _braid_moves(word, m):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return frozenset(seen)

    def closure(self, canon: Word) -> frozenset[Word]:
        """All reduced words of the element whose canonical word is ``canon``."""
        try:
            return self._closures[canon]
        except KeyError:
            words = self._close([canon])
            self._closures[min(words)] = words
            return words

    def times_generator(self, canon: Word, s: int) -> Word:
        key = (canon, s)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        words = self.closure(canon)
        tails = [w[:-1] for w in words if w and w[-1] == s]
        if tails:
            result = min(tails)
            self._closures.setdefault(result, frozenset(tails))
        else:
            longer = self._close(w + (s,) for w in words)
            result = min(longer)
            self._closures.setdefault(result, longer)
        self._products[key] = result
        return result

    def canonical(self, word: Sequence[int]) -> Word:
        canon: Word = ()
        for s in word:
            if not 1 <= s <= self.n:
                raise IndexError(f"generator index {s} outside 1..{self.n}")
            canon = self.times_generator(canon, s)
        return canon

    def element(self, word: Sequence[int] = ()) -> "WeylElement":
        return WeylElement(self.canonical(tuple(word)), self)

    @property
    def identity(self) -> "WeylElement":
        return WeylElement((), self)

    def generator(self, s: int) -> "WeylElement":
        return self.element((s,))

    def right_descents(self, canon: Word) -> frozenset[int]:
        return frozenset(w[-1] for w in self.closure(canon) if w)

    def left_descents(self, canon: Word) -> frozenset[int]:
        return frozenset(w[0] for w in self.closure(canon) if w)

    def ball(self, radius: int, gens: Iterable[int] | None = None) -> list["WeylElement"]:
        """All elements of length <= radius (in W_I if ``gens`` given), by length."""
        gens = tuple(sorted(gens)) if gens is not None else self.generators
        level = [()]
        out = [()]
        seen = {()}
        for _ in range(radius):
            nxt = []
            for u in level:
                desc = self.right_descents(u)
                for s in gens:
                    if s in desc:
                        continue
                    v = self.times_generator(u, s)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            if not nxt:
                break
            nxt.sort()
            out.extend(nxt)
            level = nxt
        return [WeylElement(w, self) for w in out]

    def enumerate_parabolic(self, gens: Iterable[int], cutoff: int = 10_000) -> int | None:
        """Order of W_I by rewriting-closure enumeration, or None past ``cutoff``."""
        gens = tuple(sorted(gens))
        level = [()]
        count = 1
        while level:
            nxt = set()
            for u in level:
                desc = self.right_descents(u)
                for s in gens:
                    if s not in desc:
                        nxt.add(self.times_generator(u, s))
            count += len(nxt)
            if count > cutoff:
                return None
            level = sorted(nxt)
        return count


@lru_cache(maxsize=None)
def system_for(matrix: CoxeterMatrix) -> CoxeterSystem:
    return CoxeterSystem(matrix)


def _as_system(C) -> CoxeterSystem:
    if isinstance(C, CoxeterSystem):
        return C
    if isinstance(C, CoxeterMatrix):
        return system_for(C)
    if isinstance(C, GeneralizedCartanMatrix):
        return system_for(gcm_to_coxeter(C))
    raise TypeError(f"expected a Coxeter system or matrix, got {type(C).__name__}")


@dataclass(frozen=True)
class WeylElement:
    word: Word
    system: CoxeterSystem = field(repr=False)

    def __len__(self):
        return len(self.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return multiply(self, other)

    def inverse(self) -> "WeylElement":
        return self.system.element(self.word[::-1])

    def right_descents(self) -> frozenset[int]:
        return self.system.right_descents(self.word)

    def left_descents(self) -> frozenset[int]:
        return self.system.left_descents(self.word)

    def times(self, s: int) -> "WeylElement":
        return WeylElement(self.system.times_generator(self.word, s), self.system)

    def to_json(self) -> list[int]:
        return list(self.word)

    def __str__(self):
        if not self.word:
            return "e"
        return "s" + "s".join(str(i) for i in self.word)


def normal_form(word: Sequence[int], C) -> WeylElement:
    """ShortLex-least reduced word equal to ``word``."""
    return _as_system(C).element(tuple(word))


def multiply(v: WeylElement, w: WeylElement) -> WeylElement:
    if v.system != w.system:
        raise ValueError("elements belong to different Coxeter systems")
    sysm = v.system
    canon = v.word
    for s in w.word:
        canon = sysm.times_generator(canon, s)
    return WeylElement(canon, sysm)


def reduced_expressions(w: WeylElement) -> frozenset[Word]:
    return w.system.closure(w.word)


def weak_leq(v: WeylElement, w: WeylElement) -> bool:
    """v <= w in the (right) weak order: v is a prefix of a reduced word of w."""
    if v.system != w.system:
        raise ValueError("elements belong to different Coxeter systems")
    if len(v) > len(w):
        return False
    rest = multiply(v.inverse(), w)
    return len(rest) == len(w) - len(v)


def _greatest_below(targets: Sequence[WeylElement], gens: Iterable[int]) -> WeylElement:
    sysm = targets[0].system
    gens = tuple(sorted(gens))
    start = sysm.identity
    reached = {start.word: start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        desc = u.right_descents()
        for s in gens:
            if s in desc:
                continue
            us = u.times(s)
            if us.word in reached:
                continue
            if all(weak_leq(us, t) for t in targets):
                reached[us.word] = us
                queue.append(us)
    top = max(reached.values(), key=lambda x: (len(x), x.word))
    if not all(weak_leq(x, top) for x in reached.values()):
        raise RuntimeError("common lower bounds have no greatest element")
    return top


def meet(v: WeylElement, w: WeylElement) -> WeylElement:
    """Greatest lower bound of v and w in the weak order."""
    if v.system != w.system:
        raise ValueError("elements belong to different Coxeter systems")
    return _greatest_below([v, w], v.system.generators)


def restrict(w: WeylElement, I: Iterable[int]) -> WeylElement:
    """The longest element of W_I lying below w in the weak order."""
    return _greatest_below([w], I)


# -- finite type classification ----------------------------------------------


def _components(C: CoxeterMatrix, subset: Sequence[int]) -> list[list[int]]:
    subset = sorted(subset)
    remaining = set(subset)
    comps = []
    while remaining:
        start = min(remaining)
        comp, stack = {start}, [start]
        while stack:
            i = stack.pop()
            for j in subset:
                if j not in comp and C(i, j) != 2:
                    comp.add(j)
                    stack.append(j)
        remaining -= comp
        comps.append(sorted(comp))
    return comps


def _classify_connected(C: CoxeterMatrix, comp: list[int]) -> tuple[str, int] | None:
    """Name (type, rank) of a connected finite Coxeter diagram, None if infinite."""
    r = len(comp)
    if r == 1:
        return ("A", 1)
    edges = {}
    for a, b in itertools.combinations(comp, 2):
        if C(a, b) != 2:
            if C(a, b) == INF:
                return None
            edges[(a, b)] = int(C(a, b))
    if r == 2:
        (mab,) = edges.values()
        if mab == 3:
            return ("A", 2)
        if mab == 4:
            return ("B", 2)
        if mab == 6:
            return ("G", 2)
        return ("I", mab)
    if len(edges) != r - 1:
        return None  # a connected graph with r vertices and >= r edges has a cycle
    labels = sorted(edges.values())
    degree = {v: 0 for v in comp}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    big = [lab for lab in labels if lab > 3]
    if any(lab > 5 for lab in labels) or len(big) > 1:
        return None
    if max(degree.values()) > 3:
        return None
    branch = [v for v, d in degree.items() if d == 3]
    if big:
        if branch:
            return None
        ((a, b), lab) = next((e, l) for e, l in edges.items() if l > 3)
        at_end = degree[a] == 1 or degree[b] == 1
        if lab == 4:
            if at_end:
                return ("B", r)
            return ("F", 4) if r == 4 else None
        if at_end and r in (3, 4):
            return ("H", r)
        return None
    if not branch:
        return ("A", r)
    if len(branch) > 1:
        return None
    # arm lengths from the branch vertex
    centre = branch[0]
    adj = {v: [] for v in comp}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    arms = []
    for nb in adj[centre]:
        length, prev, cur = 1, centre, nb
        while degree[cur] == 2:
            prev, cur = cur, next(x for x in adj[cur] if x != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", r)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", r)
    return None


_ORDER = {
    "A": lambda r: math.factorial(r + 1),
    "B": lambda r: 2**r * math.factorial(r),
    "D": lambda r: 2 ** (r - 1) * math.factorial(r),
    "E": lambda r: {6: 51840, 7: 2903040, 8: 696729600}[r],
    "F": lambda r: 1152,
    "G": lambda r: 12,
    "H": lambda r: {3: 120, 4: 14400}[r],
}


def finite_type_decomposition(C: CoxeterMatrix, subset: Iterable[int]) -> list[tuple[str, int]] | None:
    """Irreducible components of W_I as (type, rank) pairs, or None if W_I is infinite.

    Dihedral components of order 2m with m = 5 or m > 6 are reported as ("I", m).
    """
    names = []
    for comp in _components(C, list(subset)):
        name = _classify_connected(C, comp)
        if name is None:
            return None
        names.append(name)
    return names


def is_finite_type(C, subset: Iterable[int]) -> bool:
    C = _as_system(C).matrix
    return finite_type_decomposition(C, subset) is not None


def parabolic_order(C, subset: Iterable[int]) -> int | None:
    """|W_I| from the classification, None when infinite."""
    C = _as_system(C).matrix
    names = finite_type_decomposition(C, subset)
    if names is None:
        return None
    order = 1
    for kind, r in names:
        order *= 2 * r if kind == "I" else _ORDER[kind](r)
    return order


def finite_type_subsets(C):
    """The poset (under inclusion) of generator subsets I with W_I finite."""
    from .posets import FinPoset

    C = _as_system(C).matrix
    subsets = []
    for r in range(C.n + 1):
        for combo in itertools.combinations(range(1, C.n + 1), r):
            if finite_type_decomposition(C, combo) is not None:
                subsets.append(frozenset(combo))
    return FinPoset(subsets, lambda a, b: a <= b)


# -- cosets ----------------------------------------------------------------


def longest_parabolic(C, I: Iterable[int]) -> WeylElement:
    """Longest element w_0(I) of a finite parabolic subgroup."""
    sysm = _as_system(C)
    I = frozenset(I)
    if not is_finite_type(sysm, I):
        raise NotFiniteTypeError(f"W_I is infinite for I = {sorted(I)}")
    u = sysm.identity
    while True:
        ascents = sorted(I - u.right_descents())
        if not ascents:
            return u
        u = u.times(ascents[0])


def min_coset_rep(w: WeylElement, I: Iterable[int]) -> WeylElement:
    I = frozenset(I)
    u = w
    while True:
        down = sorted(u.right_descents() & I)
        if not down:
            return u
        u = u.times(down[0])


def coset_reps(w: WeylElement, I: Iterable[int]) -> tuple[WeylElement, WeylElement]:
    """(shortest, longest) elements of the coset w W_I; I must be of finite type."""
    I = frozenset(I)
    w0 = longest_parabolic(w.system, I)
    low = min_coset_rep(w, I)
    high = multiply(low, w0)
    if len(high) != len(low) + len(w0):
        raise RuntimeError("coset lengths do not add up")
    return low, high


def descent_type(w: WeylElement) -> frozenset[int]:
    """I_w: the generators that end some reduced word of w."""
    I = w.right_descents()
    if not is_finite_type(w.system, I):
        raise RuntimeError(f"descent set {sorted(I)} of {w} is not of finite type")
    if coset_reps(w, I)[1] != w:
        raise RuntimeError(f"{w} is not longest in its coset modulo its descents")
    return I


# -- brute-force order via the geometric representation ------------------------
#
# Numbers in Z[sqrt2, sqrt3, phi] are 8-tuples over the basis
# {1, sqrt2, sqrt3, sqrt6} x {1, phi}, phi^2 = phi + 1.  This ring holds
# 2cos(pi/m) for every m in {2, 3, 4, 5, 6}, so orbits are computed exactly.

_RAD = {  # product of radical basis elements: (coefficient, index)
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 1): (2, 0), (1, 2): (1, 3), (1, 3): (2, 2),
    (2, 2): (3, 0), (2, 3): (3, 1), (3, 3): (6, 0),
}


def _ring_mul(x: tuple, y: tuple) -> tuple:
    out = [0] * 8
    for i in range(8):
        if not x[i]:
            continue
        ri, pi = divmod(i, 2)
        for j in range(8):
            if not y[j]:
                continue
            rj, pj = divmod(j, 2)
            c, r = _RAD[(min(ri, rj), max(ri, rj))]
            c *= x[i] * y[j]
            if pi and pj:  # phi^2 = 1 + phi
                out[2 * r] += c
                out[2 * r + 1] += c
            else:
                out[2 * r + (pi or pj)] += c
    return tuple(out)


def _two_cos(m) -> tuple:
    """2cos(pi/m) as a ring element; 2 for m = infinity."""
    table = {
        2: (0,) * 8,
        3: (1, 0, 0, 0, 0, 0, 0, 0),
        4: (0, 0, 1, 0, 0, 0, 0, 0),
        5: (0, 1, 0, 0, 0, 0, 0, 0),
        6: (0, 0, 0, 0, 1, 0, 0, 0),
    }
    if m == INF:
        return (2, 0, 0, 0, 0, 0, 0, 0)
    if m not in table:
        raise ValueError(f"exact arithmetic covers m in 2..6 and infinity, not {m}")
    return table[m]


def _canonical_key(C: CoxeterMatrix, subset: Sequence[int]) -> tuple:
    idx = sorted(subset)
    best = None
    for perm in itertools.permutations(idx):
        key = tuple(C(a, b) for a in perm for b in perm)
        if best is None or key < best:
            best = key
    return (len(idx), best)


@lru_cache(maxsize=None)
def _orbit_order(key: tuple, cutoff: int) -> int | None:
    r, flat = key
    if r == 0:
        return 1
    coeff = [[None if i == j else _two_cos(flat[i * r + j]) for j in range(r)] for i in range(r)]
    one = (1, 0, 0, 0, 0, 0, 0, 0)
    start = tuple(one for _ in range(r))
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for i in range(r):
            # (s_i f)_j = f_j + 2cos(pi/m_ij) f_i, with the diagonal term giving -f_i
            g = []
            for j in range(r):
                if i == j:
                    g.append(tuple(-c for c in f[i]))
                else:
                    prod = _ring_mul(coeff[i][j], f[i])
                    g.append(tuple(a + b for a, b in zip(f[j], prod)))
            g = tuple(g)
            if g not in seen:
                seen.add(g)
                if len(seen) > cutoff:
                    return None
                queue.append(g)
    return len(seen)


def brute_force_order(C, subset: Iterable[int], cutoff: int = 10_000) -> int | None:
    """|W_I| by enumerating the orbit of a chamber point, None past ``cutoff``.

    The stabilizer of a point inside the fundamental chamber is trivial, so
    the orbit size is the group order.  Independent of the classification.
    """
    C = _as_system(C).matrix
    return _orbit_order(_canonical_key(C, list(subset)), cutoff)
