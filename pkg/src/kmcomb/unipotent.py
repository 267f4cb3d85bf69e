"""A computable model of the positive unipotent group over F_{p^k} when every
off-diagonal Cartan entry has absolute value at least 2.

In that class the Weyl group is a free product of copies of Z/2, its Hasse
diagram is a tree, and the group is the graph product of copies of (F_{p^k}, +)
indexed by tree nodes, two node groups commuting exactly when one node is a
prefix of the other.  Scalars are vectors in F_p^k since only addition is used.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coxeter import GeneralizedCartanMatrix, WeylElement, gcm_to_coxeter, meet, system_for
from .posets import FinPoset, transport
from .roots import Root, theta

Node = tuple[int, ...]
Scalar = tuple[int, ...]


class UnsupportedClassError(ValueError):
    """The Cartan matrix lies outside the tree class |a_ij| >= 2."""


def node_key(u: Node):
    return (len(u), u)


def is_prefix(u: Node, w: Node) -> bool:
    return len(u) <= len(w) and w[: len(u)] == u


def comparable(u: Node, v: Node) -> bool:
    return is_prefix(u, v) or is_prefix(v, u)


@dataclass(frozen=True)
class HasseTree:
    cartan: GeneralizedCartanMatrix
    depth: int
    nodes: tuple[Node, ...]
    roots: dict

    @property
    def rank(self) -> int:
        return self.cartan.n

    @property
    def system(self):
        return system_for(gcm_to_coxeter(self.cartan))

    def __contains__(self, u):
        return tuple(u) in self.roots

    def __len__(self):
        return len(self.nodes)

    def parent(self, u: Node) -> Node | None:
        return u[:-1] if u else None

    def children(self, u: Node) -> list[Node]:
        return [u + (j,) for j in range(1, self.rank + 1) if (not u or u[-1] != j) and len(u) < self.depth]

    def node_root(self, u: Node) -> Root:
        return self.roots[tuple(u)]

    def element(self, u: Node) -> WeylElement:
        return self.system.element(u)

    def edges(self) -> list[tuple[Node, Node]]:
        return [(u[:-1], u) for u in self.nodes if u]

    def to_dot(self, name: str = "hasse") -> str:
        def label(u):
            return "e" if not u else "s" + "s".join(map(str, u))

        ids = {u: f"n{k}" for k, u in enumerate(self.nodes)}
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for u in self.nodes:
            lines.append(f'  {ids[u]} [label="{label(u)}"];')
        for a, b in self.edges():
            lines.append(f"  {ids[a]} -> {ids[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def in_tree_class(A: GeneralizedCartanMatrix) -> bool:
    return all(abs(A.a[i][j]) >= 2 for i in range(A.n) for j in range(A.n) if i != j)


def build_tree(A: GeneralizedCartanMatrix, depth: int) -> HasseTree:
    if not in_tree_class(A):
        raise UnsupportedClassError("the graph-product model needs |a_ij| >= 2 for all i != j")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    n = A.n
    nodes: list[Node] = [()]
    level: list[Node] = [()]
    for _ in range(depth):
        level = [u + (j,) for u in level for j in range(1, n + 1) if not u or u[-1] != j]
        nodes.extend(level)
    system = system_for(gcm_to_coxeter(A))
    roots = {}
    for u in nodes:
        w = system.element(u)
        if w.word != u:
            raise RuntimeError(f"{u} is not a canonical reduced word")
        if u:
            th = theta(w, A)
            roots[u] = th.roots[-1]
            if th.as_set() != {roots[u[:k]] for k in range(1, len(u) + 1)}:
                raise RuntimeError(f"inversion set of {u} does not match its prefix roots")
        else:
            roots[u] = None
    return HasseTree(A, depth, tuple(nodes), roots)


# -- graph-product elements -------------------------------------------------


def _scalar(c, p: int, k: int) -> Scalar:
    if isinstance(c, int):
        c = (c,) + (0,) * (k - 1)
    c = tuple(int(x) % p for x in c)
    if len(c) != k:
        raise ValueError(f"scalar {c} does not have {k} components")
    return c


def _add(a: Scalar, b: Scalar, p: int) -> Scalar:
    return tuple((x + y) % p for x, y in zip(a, b))


def _neg(a: Scalar, p: int) -> Scalar:
    return tuple(-x % p for x in a)


def _reduce(syllables: list) -> list:
    """Merge same-node syllables that can be brought together; drop zeros."""
    out = list(syllables)
    changed = True
    while changed:
        changed = False
        for j in range(len(out)):
            node, c = out[j]
            for i in range(j - 1, -1, -1):
                other = out[i][0]
                if other == node:
                    p_scalar = out[i][1]
                    total = tuple(x + y for x, y in zip(p_scalar, c))
                    out[i] = (node, total)
                    del out[j]
                    changed = True
                    break
                if not comparable(other, node):
                    break
            if changed:
                break
    return out


def _lex_least(syllables: list) -> list:
    """Lexicographically least shuffle (by node key) of a reduced word."""
    remaining = list(syllables)
    out = []
    while remaining:
        best = None
        for idx, (node, _) in enumerate(remaining):
            if all(comparable(remaining[t][0], node) for t in range(idx)):
                if best is None or node_key(node) < node_key(remaining[best][0]):
                    best = idx
        out.append(remaining.pop(best))
    return out


@dataclass(frozen=True)
class GPElement:
    syllables: tuple[tuple[Node, Scalar], ...]
    p: int
    k: int = 1

    @classmethod
    def make(cls, syllables: Iterable, p: int, k: int = 1) -> "GPElement":
        raw = [(tuple(u), _scalar(c, p, k)) for u, c in syllables]
        if any(not u for u, _ in raw):
            raise ValueError("the identity node carries no root group")
        return normalize(raw, p, k)

    @classmethod
    def identity(cls, p: int, k: int = 1) -> "GPElement":
        return cls((), p, k)

    def __len__(self):
        return len(self.syllables)

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    @property
    def support(self) -> set[Node]:
        return {u for u, _ in self.syllables}

    def to_json(self) -> list:
        return [[list(u), list(c)] for u, c in self.syllables]

    @classmethod
    def from_json(cls, data, p: int, k: int = 1) -> "GPElement":
        return cls.make([(tuple(u), tuple(c) if isinstance(c, list) else c) for u, c in data], p, k)

    def __mul__(self, other):
        return gp_multiply(self, other)

    def __str__(self):
        if not self.syllables:
            return "1"
        parts = []
        for u, c in self.syllables:
            val = c[0] if self.k == 1 else "(" + ",".join(map(str, c)) + ")"
            parts.append(f"u[{''.join(map(str, u))}]({val})")
        return " ".join(parts)


def normalize(syllables: Sequence, p: int, k: int = 1) -> GPElement:
    work = [(u, tuple(x % p for x in c)) for u, c in syllables]
    work = [s for s in work if any(s[1])]
    while True:
        reduced = _reduce(work)
        reduced = [(u, tuple(x % p for x in c)) for u, c in reduced]
        cleaned = [s for s in reduced if any(s[1])]
        if cleaned == work:
            break
        work = cleaned
    return GPElement(tuple(_lex_least(work)), p, k)


def _check_nodes(x: GPElement, T: HasseTree | None):
    if T is None:
        return
    for u in x.support:
        if u not in T:
            raise ValueError(f"node {list(u)} lies outside the tree")


def gp_multiply(x: GPElement, y: GPElement, T: HasseTree | None = None) -> GPElement:
    if (x.p, x.k) != (y.p, y.k):
        raise ValueError("elements are over different scalar groups")
    _check_nodes(x, T)
    _check_nodes(y, T)
    return normalize(list(x.syllables) + list(y.syllables), x.p, x.k)


def gp_inverse(x: GPElement) -> GPElement:
    return normalize([(u, _neg(c, x.p)) for u, c in reversed(x.syllables)], x.p, x.k)


def gp_power(x: GPElement, n: int) -> GPElement:
    out = GPElement.identity(x.p, x.k)
    for _ in range(n):
        out = gp_multiply(out, x)
    return out


def in_Uw(g: GPElement, w: WeylElement | Node) -> bool:
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    return all(is_prefix(u, word) for u in g.support)


# -- U_w as a finite group -------------------------------------------------


def scalars(p: int, k: int) -> list[Scalar]:
    return list(itertools.product(range(p), repeat=k))


def prefix_nodes(w: Node) -> list[Node]:
    return [tuple(w[:j]) for j in range(1, len(w) + 1)]


def enumerate_Uw(w: WeylElement | Node, p: int, k: int = 1) -> list[GPElement]:
    """All elements of U_w, as products over the prefix nodes in inversion order."""
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    nodes = prefix_nodes(word)
    out = set()
    for combo in itertools.product(scalars(p, k), repeat=len(nodes)):
        out.add(normalize(list(zip(nodes, combo)), p, k))
    return sorted(out, key=lambda g: g.to_json())


def coordinates(g: GPElement, w: Node) -> tuple[Scalar, ...]:
    """Coordinates of g in U_w = (F_{p^k})^{l(w)}, one per inversion root."""
    found = dict(g.syllables)
    zero = (0,) * g.k
    return tuple(found.get(u, zero) for u in prefix_nodes(w))


@dataclass
class GroupFacts:
    word: Node
    p: int
    k: int
    order: int
    expected_order: int
    abelian: bool
    exponent_divides_p: bool
    first_factors: dict

    @property
    def passed(self) -> bool:
        return (
            self.order == self.expected_order
            and self.abelian
            and self.exponent_divides_p
            and all(self.first_factors.values())
        )

    def to_json(self) -> dict:
        return {
            "w": list(self.word),
            "p": self.p,
            "k": self.k,
            "order": self.order,
            "expectedOrder": self.expected_order,
            "abelian": self.abelian,
            "exponentDividesP": self.exponent_divides_p,
            "homToFqVanishesForQNotP": self.exponent_divides_p,
            "firstFactors": {"".join(map(str, s)): ok for s, ok in self.first_factors.items()},
            "pass": self.passed,
        }


def uw_group_facts(w: WeylElement | Node, p: int, k: int = 1, rank: int | None = None) -> GroupFacts:
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    if rank is None:
        rank = w.system.n if isinstance(w, WeylElement) else max(word, default=1)
    elements = enumerate_Uw(word, p, k)
    gens = [GPElement.make([(u, c)], p, k) for u in prefix_nodes(word) for c in scalars(p, k) if any(c)]
    abelian = all(gp_multiply(a, b) == gp_multiply(b, a) for a in gens for b in gens)
    identity = GPElement.identity(p, k)
    exponent = all(gp_power(g, p) == identity for g in elements)
    first = {}
    zero = (0,) * k
    for s in range(1, rank + 1):
        if word and word[-1] == s:
            continue
        longer = word + (s,)
        coords = {coordinates(g, longer) for g in elements}
        expected = {c + (zero,) for c in itertools.product(scalars(p, k), repeat=len(word))}
        first[longer] = coords == expected
    return GroupFacts(word, p, k, len(elements), p ** (k * len(word)), abelian, exponent, first)


@dataclass
class IntersectionReport:
    v: Node
    w: Node
    meet: Node
    checked: int
    intersection_size: int
    meet_size: int
    mismatches: list

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.intersection_size == self.meet_size

    def to_json(self) -> dict:
        return {
            "v": list(self.v),
            "w": list(self.w),
            "meet": list(self.meet),
            "checked": self.checked,
            "intersectionSize": self.intersection_size,
            "meetSubgroupSize": self.meet_size,
            "mismatches": [g.to_json() for g in self.mismatches],
            "pass": self.passed,
        }


def check_intersection(
    v: WeylElement, w: WeylElement, p: int, k: int = 1, samples: int = 200, seed: int = 0
) -> IntersectionReport:
    """g in U_v and g in U_w  iff  g in U_{meet(v, w)}.

    Every element of U_v and of U_w is tested, plus ``samples`` seeded random
    products of the two (which mostly lie in neither).
    """
    m = meet(v, w)
    Uv = enumerate_Uw(v, p, k)
    Uw = enumerate_Uw(w, p, k)
    rng = random.Random(seed)
    candidates = list(dict.fromkeys(Uv + Uw))
    for _ in range(samples):
        candidates.append(gp_multiply(rng.choice(Uv), rng.choice(Uw)))
    mismatches = []
    inside = set()
    for g in candidates:
        lhs = in_Uw(g, v) and in_Uw(g, w)
        if lhs != in_Uw(g, m):
            mismatches.append(g)
        if lhs:
            inside.add(g)
    meet_size = len(enumerate_Uw(m, p, k))
    return IntersectionReport(v.word, w.word, m.word, len(candidates), len(inside), meet_size, mismatches)


# -- orbit posets -------------------------------------------------------------


def orbit_poset(T: HasseTree, i: int, p: int, k: int = 1, mode: str = "weak", radius: int | None = None) -> FinPoset:
    """Transport poset of the V-orbits v(V n U_{w*}) for V the root group at node s_i.

    mode="weak":  nodes are tree nodes of length <= radius, w* the node itself.
    mode="davis": nodes are cosets of the radius-truncated Davis poset, w* the
                  longest element of the coset.
    """
    from .davis import davis_poset, functor_L, weak_order_poset

    radius = T.depth if radius is None else radius
    system = T.system
    if mode == "weak":
        P = weak_order_poset(system.element(u) for u in T.nodes if len(u) <= radius)
        top = {x: x.word for x in P}
    elif mode == "davis":
        P = davis_poset(system, radius)
        top = {x: functor_L(x).word for x in P}
    else:
        raise ValueError(f"unknown orbit-poset mode {mode!r}")
    V = scalars(p, k)
    zero = (0,) * k

    def absorbs(x) -> bool:  # V n U_{w*} = V exactly when s_i <= w*
        return is_prefix((i,), top[x])

    def fibre(x):
        return [zero] if absorbs(x) else V

    def move(x, y, c):
        return zero if absorbs(y) else c

    return transport(P, fibre, move)
