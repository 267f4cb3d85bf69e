"""Davis posets of cosets and the longest-element functor into the weak order.

A node is a coset uW_I with I of finite type, stored by its shortest element.
The longest-element functor L sends uW_I to its longest element; the checks
here certify, on exact finite posets, that preimages of weak-order intervals
under L and the comma fibers of L are contractible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .coxeter import (
    CoxeterSystem,
    WeylElement,
    _as_system,
    coset_reps,
    finite_type_subsets,
    longest_parabolic,
    min_coset_rep,
    multiply,
    reduced_expressions,
    restrict,
    weak_leq,
)
from .posets import Certificate, FinPoset, PosetMap, certify, comma_fiber


@dataclass(frozen=True)
class DavisNode:
    min_rep: WeylElement
    I: frozenset

    def __post_init__(self):
        if self.min_rep.right_descents() & self.I:
            raise ValueError(f"{self.min_rep} is not the shortest element of its coset modulo {sorted(self.I)}")

    @property
    def longest(self) -> WeylElement:
        return multiply(self.min_rep, longest_parabolic(self.min_rep.system, self.I))

    def __lt__(self, other):
        return (len(self.min_rep), self.min_rep.word, sorted(self.I)) < (
            len(other.min_rep), other.min_rep.word, sorted(other.I))

    def __str__(self):
        gens = ",".join(str(i) for i in sorted(self.I))
        return f"{self.min_rep}W{{{gens}}}"

    def to_json(self) -> dict:
        return {"minRep": self.min_rep.to_json(), "I": sorted(self.I)}


def node_of(w: WeylElement, I: Iterable[int]) -> DavisNode:
    I = frozenset(I)
    return DavisNode(min_coset_rep(w, I), I)


def davis_leq(a: DavisNode, b: DavisNode) -> bool:
    """aW_I <= bW_J iff I is inside J and both cosets lie in the same W_J-coset."""
    if not a.I <= b.I:
        return False
    return min_coset_rep(a.min_rep, b.I) == b.min_rep


def _finite_subsets(system: CoxeterSystem) -> list[frozenset]:
    return list(finite_type_subsets(system.matrix))


def davis_poset(C, radius: int, by: str = "min") -> FinPoset:
    """Cosets uW_I (I of finite type) near the identity.

    by="min":    the shortest element has length <= radius.
    by="closed": the downward closure of the "min" family, so every coset
                 contained in a listed coset is listed too.
    """
    system = _as_system(C)
    subsets = _finite_subsets(system)
    nodes = set()
    for u in system.ball(radius):
        desc = u.right_descents()
        for I in subsets:
            if not desc & I:
                nodes.add(DavisNode(u, I))
    if by == "closed":
        for node in list(nodes):
            for J in subsets:
                if J <= node.I:
                    for x in coset_elements(node):
                        nodes.add(node_of(x, J))
    elif by != "min":
        raise ValueError(f"unknown truncation mode {by!r}")
    return FinPoset(sorted(nodes), davis_leq)


def coset_elements(node: DavisNode) -> list[WeylElement]:
    system = node.min_rep.system
    return [multiply(node.min_rep, x) for x in system.ball(10**6, node.I)]


def functor_L(node: DavisNode) -> WeylElement:
    return node.longest


def functor_LI(w: WeylElement, I: Iterable[int]) -> WeylElement:
    return restrict(w, I)


def weak_order_poset(elements: Iterable[WeylElement]) -> FinPoset:
    return FinPoset(sorted(set(elements), key=lambda x: (len(x), x.word)), weak_leq)


def lower_interval(w: WeylElement) -> list[WeylElement]:
    """All u <= w in the weak order (prefixes of reduced words of w)."""
    system = w.system
    words = {word[:k] for word in reduced_expressions(w) for k in range(len(word) + 1)}
    return sorted({system.element(x) for x in words}, key=lambda x: (len(x), x.word))


def interval(v: WeylElement, w: WeylElement) -> list[WeylElement]:
    return [u for u in lower_interval(w) if weak_leq(v, u)]


def _subsets(items) -> list[frozenset]:
    items = sorted(items)
    return [frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)]


def preimage_nodes(v: WeylElement, w: WeylElement) -> list[DavisNode]:
    """Nodes uW_I whose longest element lies in [v, w].

    The coset with longest element x and generator set I exists exactly when
    I consists of right descents of x; its shortest element is x w_0(I).
    """
    nodes = []
    for x in interval(v, w):
        for I in _subsets(x.right_descents()):
            low, high = coset_reps(x, I)
            assert high == x
            nodes.append(DavisNode(low, I))
    return sorted(nodes)


def preimage_poset(v: WeylElement, w: WeylElement) -> FinPoset:
    return FinPoset(preimage_nodes(v, w), davis_leq)


@dataclass(frozen=True)
class CheckReport:
    input: dict
    certificate: Certificate | None
    passed: bool
    details: dict | None = None

    def to_json(self) -> dict:
        out = {"input": self.input, "pass": self.passed}
        if self.certificate is not None:
            out["coreSize"] = self.certificate.core_size
            out["size"] = self.certificate.size
            out["homology"] = [g.to_json() for g in self.certificate.homology]
        if self.details:
            out.update(self.details)
        return out


def check_combin(C, v: WeylElement, w: WeylElement, max_dim: int = 3) -> CheckReport:
    """Certify that L^{-1}[v, w] is contractible.

    Homology is computed on the dismantled core, which has the homotopy type
    of the whole poset.
    """
    system = _as_system(C)
    if v.system != system or w.system != system:
        raise ValueError("elements do not belong to this Coxeter system")
    if not weak_leq(v, w):
        raise ValueError(f"{v} is not below {w} in the weak order")
    cert = certify_via_core(preimage_poset(v, w), max_dim)
    return CheckReport({"v": v.to_json(), "w": w.to_json()}, cert, cert.passed)


def certify_via_core(P: FinPoset, max_dim: int = 3) -> Certificate:
    from .posets import dismantle_core, reduced_homology

    core = dismantle_core(P)
    return Certificate(len(P), len(core), tuple(reduced_homology(core, max_dim)))


def sweep_combin(C, max_len: int) -> list[CheckReport]:
    """check_combin over every pair v <= w with l(w) <= max_len."""
    system = _as_system(C)
    reports = []
    for w in system.ball(max_len):
        for v in lower_interval(w):
            reports.append(check_combin(system, v, w))
    return reports


@dataclass(frozen=True)
class PullbackReport:
    passed: bool
    fibers: tuple[tuple[object, Certificate], ...]

    @property
    def failures(self) -> list:
        return [i for i, c in self.fibers if not c.passed]

    def to_json(self, label=str) -> dict:
        return {
            "pass": self.passed,
            "fibers": [{"over": label(i), **c.to_json()} for i, c in self.fibers],
            "failures": [label(i) for i in self.failures],
        }


def check_pullback(F: PosetMap, over: Iterable | None = None, max_dim: int = 3) -> PullbackReport:
    """Certify every comma fiber i|F (for i in ``over``, default the whole target)."""
    targets = list(F.target) if over is None else list(over)
    fibers = []
    for i in targets:
        fibers.append((i, certify(comma_fiber(F, i), max_dim)))
    return PullbackReport(all(c.passed for _, c in fibers), tuple(fibers))


def longest_element_map(D: FinPoset) -> PosetMap:
    """L from a Davis poset into the weak order on the values it takes and their prefixes."""
    values = {functor_L(node) for node in D}
    closure = {u for x in values for u in lower_interval(x)}
    W = weak_order_poset(closure)
    return PosetMap(D, W, {node: functor_L(node) for node in D})


def check_pullback_interval(C, v: WeylElement, w: WeylElement, max_dim: int = 3) -> PullbackReport:
    """Interval mode: L restricted to L^{-1}[v, w] as a map onto [v, w]."""
    if v.system is not _as_system(C) or w.system is not _as_system(C):
        raise ValueError("v and w must be elements of the given Coxeter system")
    D = preimage_poset(v, w)
    W = weak_order_poset(interval(v, w))
    F = PosetMap(D, W, {node: functor_L(node) for node in D})
    return check_pullback(F, max_dim=max_dim)


def check_pullback_ball(C, radius: int, fiber_len: int | None = None, max_dim: int = 3) -> PullbackReport:
    """Comma fibers of L on the radius-truncated Davis poset over all u with l(u) <= fiber_len."""
    system = _as_system(C)
    D = davis_poset(system, radius)
    F = longest_element_map(D)
    fiber_len = radius if fiber_len is None else fiber_len
    over = [u for u in F.target if len(u) <= fiber_len]
    return check_pullback(F, over, max_dim)


def longest_is_monotone(D: FinPoset) -> bool:
    return all(weak_leq(functor_L(a), functor_L(b)) for a, b in D.covers())
