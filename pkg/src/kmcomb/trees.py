"""Cohomology bookkeeping for the tree class: chain-supported monomials on a
rooted tree, the tower of elementary abelian stages, and the rank 3 example."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .graded import EXT, POLY, Generator, GradedAlgebraSpec, PoincareSeries, _convolve, series_of
from .unipotent import HasseTree


def _positive_part(coeff: GradedAlgebraSpec, max_deg: int) -> list[int]:
    s = list(series_of(coeff, max_deg).dims)
    s[0] = 0
    return s


def chain_series(parents: Mapping[Hashable, Hashable | None], coeff: GradedAlgebraSpec, max_deg: int) -> PoincareSeries:
    """Sum over chains (vertex sets of root-ward paths) of prod (P - 1).

    ``parents`` maps each node to its parent, or None for a root; every node
    carries one copy of the coefficient algebra.  A monomial survives the
    ideal of products across incomparable nodes iff its support is a chain.
    """
    pos = _positive_part(coeff, max_deg)
    unit = [1] + [0] * max_deg
    # upto[v] = 1 + sum of series of chains whose deepest node lies on the path root..v
    upto: dict = {}
    total = list(unit)
    for v in _root_first(parents):
        base = unit if parents[v] is None else upto[parents[v]]
        ending = _convolve(base, pos, max_deg)
        upto[v] = [a + b for a, b in zip(base, ending)]
        total = [a + b for a, b in zip(total, ending)]
    return PoincareSeries(max_deg, total)


def _root_first(parents: Mapping) -> list:
    depth: dict = {}
    for v in parents:
        path = []
        u = v
        while u is not None and u not in depth:
            path.append(u)
            u = parents[u]
            if len(path) > len(parents):
                raise ValueError("parent map has a cycle")
        d = -1 if u is None else depth[u]
        for w in reversed(path):
            d += 1
            depth[w] = d
    return sorted(parents, key=lambda v: depth[v])


def hasse_parents(T: HasseTree, depth: int | None = None) -> dict:
    """Parent map on the non-identity nodes; length-one nodes are roots."""
    depth = T.depth if depth is None else depth
    return {u: (u[:-1] if len(u) > 1 else None) for u in T.nodes if u and len(u) <= depth}


@dataclass
class TreeHilbert:
    max_deg: int
    by_depth: dict[int, PoincareSeries]
    stable: dict[int, list[bool]] = field(default_factory=dict)

    @property
    def series(self) -> PoincareSeries:
        return self.by_depth[max(self.by_depth)]

    def to_json(self) -> dict:
        return {
            "maxDeg": self.max_deg,
            "byDepth": {str(d): s.to_json() for d, s in self.by_depth.items()},
            "stable": {str(d): flags for d, flags in self.stable.items()},
        }


def default_coefficients(q: int = 2) -> GradedAlgebraSpec:
    """Cohomology of Z/2 over F_2: a polynomial ring on one degree one class."""
    return GradedAlgebraSpec(q, (Generator("x", 1, 0, POLY),))


def tree_hilbert(T: HasseTree, coeff: GradedAlgebraSpec | None = None, max_deg: int = 8) -> TreeHilbert:
    """Hilbert series of the chain-monomial quotient, per truncation depth.

    ``stable[d][n]`` records whether degree n did not change from depth d-1 to d.
    """
    coeff = default_coefficients() if coeff is None else coeff
    by_depth = {}
    stable = {}
    for d in range(T.depth + 1):
        by_depth[d] = chain_series(hasse_parents(T, d), coeff, max_deg)
        if d:
            stable[d] = [by_depth[d][n] == by_depth[d - 1][n] for n in range(max_deg + 1)]
    return TreeHilbert(max_deg, by_depth, stable)


# -- the tower of elementary abelian stages ------------------------------------


def elementary_abelian_cohomology(rank: int, p: int, q: int) -> GradedAlgebraSpec:
    """H^*((Z/p)^rank; F_q) as a free graded-commutative algebra."""
    if q != p:
        return GradedAlgebraSpec(q, ())
    if p == 2:
        return GradedAlgebraSpec(2, tuple(Generator(f"x{i}", 1, 0, POLY) for i in range(1, rank + 1)))
    gens = []
    for i in range(1, rank + 1):
        gens.append(Generator(f"x{i}", 1, 0, EXT))
        gens.append(Generator(f"y{i}", 2, 0, POLY))
    return GradedAlgebraSpec(p, tuple(gens))


def _monomials(spec: GradedAlgebraSpec, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the monomial basis in a given degree."""
    gens = spec.generators
    out = []

    def rec(i, left, acc):
        if i == len(gens):
            if left == 0:
                out.append(tuple(acc))
            return
        g = gens[i]
        top = 1 if g.flavor == EXT else left // g.degree
        for e in range(min(top, left // g.degree) + 1):
            acc.append(e)
            rec(i + 1, left - e * g.degree, acc)
            acc.pop()

    rec(0, degree, [])
    return out


def restriction_rank(m: int, p: int, k: int, q: int, degree: int) -> tuple[int, int]:
    """(rank of restriction from stage m+1 to stage m, dimension of stage m) in one degree.

    Stage m is (F_{p^k})^m = (Z/p)^{km}; restriction to the first m factors
    sends each generator of the first block to itself and kills the last
    block.  Monomials therefore map to distinct monomials or to zero, so the
    rank is the number of monomials avoiding the last block.
    """
    big = elementary_abelian_cohomology(k * (m + 1), p, q)
    small = elementary_abelian_cohomology(k * m, p, q)
    keep = len(small.generators)
    if big.generators[:keep] != small.generators:
        raise RuntimeError("first block of the larger stage does not match the smaller stage")
    survivors = GradedAlgebraSpec(big.char, big.generators[:keep])
    return series_of(survivors, degree)[degree], series_of(small, degree)[degree]


def restriction_matrix(m: int, p: int, k: int, q: int, degree: int) -> list[list[int]]:
    """Explicit matrix of the restriction map on monomial bases (small cases only)."""
    big = elementary_abelian_cohomology(k * (m + 1), p, q)
    small = elementary_abelian_cohomology(k * m, p, q)
    src = _monomials(big, degree)
    dst = _monomials(small, degree)
    index = {e: j for j, e in enumerate(dst)}
    keep = len(small.generators)
    matrix = []
    for e in src:
        row = [0] * len(dst)
        if all(x == 0 for x in e[keep:]):
            row[index[tuple(e[:keep])]] = 1
        matrix.append(row)
    return matrix


@dataclass
class TelescopeReport:
    p: int
    k: int
    q: int
    stages: list[int]
    dims: dict[int, list[int]]
    surjective: dict[int, list[bool]]
    stabilizes: list[bool]

    @property
    def vanishing(self) -> bool:
        return all(all(x == 0 for x in d[1:]) for d in self.dims.values())

    @property
    def all_surjective(self) -> bool:
        return all(all(v) for v in self.surjective.values())

    def to_json(self) -> dict:
        return {
            "p": self.p, "k": self.k, "q": self.q,
            "stages": self.stages,
            "dims": {str(m): d for m, d in self.dims.items()},
            "surjective": {str(m): s for m, s in self.surjective.items()},
            "stabilizes": self.stabilizes,
            "vanishingPositiveDegrees": self.vanishing,
            "limOneHypothesis": self.all_surjective,
        }


def telescope_limit(stages: Sequence[int], p: int, k: int, q: int, max_deg: int) -> TelescopeReport:
    """Tower H^*((F_{p^k})^m; F_q) over the given stage lengths with restriction maps."""
    stages = sorted(stages)
    dims = {}
    surj = {}
    for m in stages:
        spec = elementary_abelian_cohomology(k * m, p, q)
        dims[m] = list(series_of(spec, max_deg).dims)
        flags = []
        for n in range(max_deg + 1):
            rank, dim = restriction_rank(m, p, k, q, n)
            flags.append(rank == dim)
        surj[m] = flags
    stab = [len({dims[m][n] for m in stages}) == 1 for n in range(max_deg + 1)]
    return TelescopeReport(p, k, q, stages, dims, surj, stab)


# -- the rank 3 example ---------------------------------------------------------

W3_GENERATORS = ("x", "x0", "x1", "x00", "x01", "x10", "x11")

# The relations exactly as printed, including the repeated x00*x10.
W3_IDEAL_PRINTED = (
    ("x0", "x1"),
    ("x0", "x10"), ("x0", "x11"),
    ("x1", "x00"), ("x1", "x01"),
    ("x00", "x10"), ("x00", "x10"), ("x00", "x11"),
    ("x01", "x10"), ("x01", "x11"),
    ("x10", "x11"),
)

# Summand of the s_2 branch: the label records the branch word read away from the root.
W3_NODES = {
    "x": (2,), "x0": (2, 1), "x1": (2, 3),
    "x00": (2, 1, 2), "x01": (2, 1, 3), "x10": (2, 3, 1), "x11": (2, 3, 2),
}


def w3_ideal_from_tree() -> tuple[tuple[str, str], ...]:
    """Products of generators at incomparable nodes."""
    out = []
    for a, b in itertools.combinations(W3_GENERATORS, 2):
        u, v = W3_NODES[a], W3_NODES[b]
        if not (u == v[: len(u)] or v == u[: len(v)]):
            out.append((a, b))
    return tuple(out)


def monomial_quotient_series(gens: Sequence[str], ideal: Sequence[tuple[str, ...]], max_deg: int) -> PoincareSeries:
    """Hilbert series of F[gens]/ideal with degree one generators and monomial relations."""
    pos = {g: i for i, g in enumerate(gens)}
    rels = [[0] * len(gens) for _ in ideal]
    for r, mono in zip(rels, ideal):
        for g in mono:
            r[pos[g]] += 1
    dims = [0] * (max_deg + 1)
    for d in range(max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), d):
            e = [0] * len(gens)
            for i in combo:
                e[i] += 1
            if not any(all(e[i] >= r[i] for i in range(len(gens))) for r in rels):
                dims[d] += 1
    return PoincareSeries(max_deg, dims)


@dataclass
class W3Presentation:
    generators: tuple[str, ...]
    ideal_printed: tuple[tuple[str, str], ...]
    ideal_from_tree: tuple[tuple[str, str], ...]
    summands: int
    series_printed: PoincareSeries
    series_from_tree: PoincareSeries
    series_total: PoincareSeries
    tree_series: PoincareSeries

    @property
    def matches_tree(self) -> bool:
        return self.series_total == self.tree_series

    @property
    def printed_matches_tree(self) -> bool:
        return self.series_printed == self.series_from_tree

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "idealPrinted": ["*".join(m) for m in self.ideal_printed],
            "idealFromTree": ["*".join(m) for m in self.ideal_from_tree],
            "summands": self.summands,
            "nodes": {g: list(w) for g, w in W3_NODES.items()},
            "seriesPrinted": self.series_printed.to_json(),
            "seriesFromTree": self.series_from_tree.to_json(),
            "seriesTotal": self.series_total.to_json(),
            "treeHilbert": self.tree_series.to_json(),
            "matchesTree": self.matches_tree,
            "printedIdealMatchesTree": self.printed_matches_tree,
            "missingFromPrinted": ["*".join(m) for m in sorted(set(self.ideal_from_tree) - set(self.ideal_printed))],
        }


def w3_presentation(max_deg: int = 8) -> W3Presentation:
    """Three-summand presentation for the rank 3 all-infinity tree at depth 3."""
    from .coxeter import GeneralizedCartanMatrix
    from .unipotent import build_tree

    tree_ideal = w3_ideal_from_tree()
    printed = monomial_quotient_series(W3_GENERATORS, W3_IDEAL_PRINTED, max_deg)
    derived = monomial_quotient_series(W3_GENERATORS, tree_ideal, max_deg)
    total = derived.scaled_positive(3)
    A = GeneralizedCartanMatrix(((2, -2, -2), (-2, 2, -2), (-2, -2, 2)))
    tree = tree_hilbert(build_tree(A, 3), default_coefficients(), max_deg).series
    return W3Presentation(W3_GENERATORS, W3_IDEAL_PRINTED, tree_ideal, 3, printed, derived, total, tree)
