"""Finite posets: order complexes and their integral homology, dismantling,
comma fibers of poset maps, and transport posets of set-valued functors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

MAX_NONZEROS = 20_000


class PosetError(ValueError):
    pass


class PosetSizeError(RuntimeError):
    """A boundary matrix would exceed the configured nonzero budget."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinPoset:
    """A finite poset stored as up-set and down-set bitmasks.

    ``leq`` is either a callable ``leq(a, b)`` or an iterable of pairs
    ``(a, b)`` generating the order (its reflexive-transitive closure is used).
    Callable orders are validated as partial orders on construction.
    """

    def __init__(self, elements: Iterable[Hashable], leq=None, *, validate: bool = True):
        self.elements: tuple = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate elements")
        n = len(self.elements)
        up = [1 << i for i in range(n)]
        if leq is None:
            pass
        elif callable(leq):
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    if i != j and leq(a, b):
                        up[i] |= 1 << j
        else:
            for a, b in leq:
                up[self.index[a]] |= 1 << self.index[b]
            up = _transitive_closure(up)
        self._up = up
        self._down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                self._down[j] |= 1 << i
        if validate:
            self._validate(given_callable=callable(leq))

    def _validate(self, given_callable: bool):
        for i in range(len(self)):
            if not self._up[i] >> i & 1:
                raise PosetError(f"not reflexive at {self.elements[i]!r}")
            both = self._up[i] & self._down[i] & ~(1 << i)
            if both:
                j = next(_bits(both))
                raise PosetError(
                    f"not antisymmetric: {self.elements[i]!r} and {self.elements[j]!r}"
                )
            if given_callable:
                for j in _bits(self._up[i]):
                    if self._up[j] & ~self._up[i]:
                        raise PosetError(f"not transitive through {self.elements[j]!r}")

    @classmethod
    def _from_masks(cls, elements, up) -> "FinPoset":
        P = cls(elements, validate=False)
        P._up = list(up)
        P._down = [0] * len(up)
        for i in range(len(up)):
            for j in _bits(up[i]):
                P._down[j] |= 1 << i
        return P

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"FinPoset({len(self)} elements)"

    def leq(self, a, b) -> bool:
        return bool(self._up[self.index[a]] >> self.index[b] & 1)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def up_set(self, a) -> list:
        return [self.elements[j] for j in _bits(self._up[self.index[a]])]

    def down_set(self, a) -> list:
        return [self.elements[j] for j in _bits(self._down[self.index[a]])]

    def relations(self) -> list[tuple]:
        return [(a, self.elements[j]) for i, a in enumerate(self.elements) for j in _bits(self._up[i])]

    def least(self):
        full = (1 << len(self)) - 1
        for i, a in enumerate(self.elements):
            if self._up[i] == full:
                return a
        return None

    def greatest(self):
        full = (1 << len(self)) - 1
        for i, a in enumerate(self.elements):
            if self._down[i] == full:
                return a
        return None

    def minimal(self) -> list:
        return [a for i, a in enumerate(self.elements) if self._down[i] == 1 << i]

    def maximal(self) -> list:
        return [a for i, a in enumerate(self.elements) if self._up[i] == 1 << i]

    def subposet(self, keep: Iterable) -> "FinPoset":
        keep_idx = sorted({self.index[x] for x in keep})
        remap = {old: new for new, old in enumerate(keep_idx)}
        up = []
        for old in keep_idx:
            mask = 0
            for j in _bits(self._up[old]):
                if j in remap:
                    mask |= 1 << remap[j]
            up.append(mask)
        return FinPoset._from_masks([self.elements[i] for i in keep_idx], up)

    def opposite(self) -> "FinPoset":
        return FinPoset._from_masks(self.elements, self._down)

    def covers(self) -> list[tuple]:
        """Hasse diagram edges (a, b) with a < b and nothing strictly between."""
        out = []
        for i, a in enumerate(self.elements):
            above = self._up[i] & ~(1 << i)
            for j in _bits(above):
                between = above & self._down[j] & ~(1 << j)
                if not between:
                    out.append((a, self.elements[j]))
        return out

    def chains(self, max_size: int | None = None) -> list[list[list[int]]]:
        """Nonempty chains as index lists, grouped by size (entry k has size k+1)."""
        n = len(self)
        limit = n if max_size is None else min(n, max_size)
        by_size: list[list[list[int]]] = [[] for _ in range(limit)]
        strict_up = [self._up[i] & ~(1 << i) for i in range(n)]

        def extend(chain, candidates):
            by_size[len(chain) - 1].append(chain)
            if len(chain) == limit:
                return
            for j in _bits(candidates):
                extend(chain + [j], candidates & strict_up[j])

        for i in range(n):
            extend([i], strict_up[i])
        return by_size

    def is_chain(self, items: Sequence) -> bool:
        idx = [self.index[x] for x in items]
        return all(
            self._up[a] >> b & 1 or self._up[b] >> a & 1 for k, a in enumerate(idx) for b in idx[k + 1:]
        )

    def to_dot(self, label: Callable[[object], str] = str, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, a in enumerate(self.elements):
            text = label(a).replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for a, b in self.covers():
            lines.append(f"  n{self.index[a]} -> n{self.index[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _transitive_closure(up: list[int]) -> list[int]:
    up = list(up)
    changed = True
    while changed:
        changed = False
        for i in range(len(up)):
            mask = up[i]
            for j in _bits(up[i]):
                mask |= up[j]
            if mask != up[i]:
                up[i] = mask
                changed = True
    return up


# -- homology -----------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    dim: int
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"dim": self.dim, "rank": self.rank, "torsion": list(self.torsion)}


def elementary_divisors(entries: Mapping[tuple[int, int], int], nrows: int, ncols: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix.

    Unit pivots are eliminated sparsely; whatever remains is handed to a
    dense Smith normal form.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress:
        progress = False
        for r in list(rows):
            row = rows.get(r)
            if row is None:
                continue
            pivot = next((c for c, v in row.items() if v in (1, -1)), None)
            if pivot is None:
                continue
            pv = row[pivot]
            for r2 in list(cols[pivot]):
                if r2 == r:
                    continue
                other = rows[r2]
                factor = other[pivot] * pv  # pv = +-1, so this divides exactly
                for c, v in row.items():
                    nv = other.get(c, 0) - factor * v
                    if nv:
                        if c not in other:
                            cols[c].add(r2)
                        other[c] = nv
                    elif c in other:
                        del other[c]
                        cols[c].discard(r2)
                if not other:
                    del rows[r2]
            for c in row:
                cols[c].discard(r)
            del rows[r]
            units += 1
            progress = True
    divisors = [1] * units
    if rows:
        divisors.extend(_dense_invariant_factors(rows))
    return divisors


def _dense_invariant_factors(rows: dict[int, dict[int, int]]) -> list[int]:
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import invariant_factors

    col_ids = sorted({c for row in rows.values() for c in row})
    cpos = {c: k for k, c in enumerate(col_ids)}
    dense = []
    for r in sorted(rows):
        line = [ZZ(0)] * len(col_ids)
        for c, v in rows[r].items():
            line[cpos[c]] = ZZ(v)
        dense.append(line)
    M = DomainMatrix(dense, (len(dense), len(col_ids)), ZZ)
    return [abs(int(d)) for d in invariant_factors(M) if d]


def reduced_homology(P: FinPoset, max_dim: int = 3, max_nonzeros: int = MAX_NONZEROS) -> list[HomologyGroup]:
    """Reduced integral homology of the order complex in dimensions -1..max_dim."""
    chains = P.chains(max_size=max_dim + 2)
    # simplices by dimension; dimension -1 is the empty chain
    simplices = {-1: [()]}
    for size, group in enumerate(chains, start=1):
        simplices[size - 1] = [tuple(c) for c in group]
    for d in range(-1, max_dim + 2):
        simplices.setdefault(d, [])

    def boundary_divisors(d: int) -> list[int]:
        """Invariant factors of the boundary map C_d -> C_{d-1}."""
        if d <= -1 or not simplices[d]:
            return []
        target = {s: k for k, s in enumerate(simplices[d - 1])}
        entries = {}
        for col, s in enumerate(simplices[d]):
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                entries[(target[face], col)] = -1 if k % 2 else 1
        if len(entries) > max_nonzeros:
            raise PosetSizeError(
                f"boundary matrix in dimension {d} has {len(entries)} nonzeros (limit {max_nonzeros})"
            )
        return elementary_divisors(entries, len(target), len(simplices[d]))

    divs = {d: boundary_divisors(d) for d in range(0, max_dim + 2)}
    out = []
    for d in range(-1, max_dim + 1):
        rank_out = len(divs.get(d, []))
        incoming = divs.get(d + 1, [])
        rank = len(simplices[d]) - rank_out - len(incoming)
        torsion = tuple(sorted(x for x in incoming if x > 1))
        out.append(HomologyGroup(d, rank, torsion))
    return out


def nerve_homology(P: FinPoset, max_dim: int = 3, max_nonzeros: int = MAX_NONZEROS) -> list[HomologyGroup]:
    return reduced_homology(P, max_dim, max_nonzeros)


def is_acyclic(groups: Iterable[HomologyGroup]) -> bool:
    return all(g.trivial for g in groups)


# -- dismantling -------------------------------------------------------------


def _beat_point(up: list[int], down: list[int], alive: int, i: int) -> bool:
    above = up[i] & alive & ~(1 << i)
    if above and any(not (above & ~up[j]) for j in _bits(above)):
        return True
    below = down[i] & alive & ~(1 << i)
    return bool(below) and any(not (below & ~down[j]) for j in _bits(below))


def dismantle_core(P: FinPoset, order: Sequence[int] | None = None) -> FinPoset:
    """Delete beat points until none remain.

    An element is a beat point when its strict up-set has a minimum or its
    strict down-set has a maximum.  ``order`` fixes the scan order of element
    indices (default: listing order); the core is unique up to isomorphism.
    """
    n = len(P)
    scan = list(range(n)) if order is None else list(order)
    alive = (1 << n) - 1
    removed = True
    while removed:
        removed = False
        for i in scan:
            if alive >> i & 1 and _beat_point(P._up, P._down, alive, i):
                alive &= ~(1 << i)
                removed = True
                break
    return P.subposet(P.elements[i] for i in _bits(alive))


def beat_points(P: FinPoset) -> list:
    alive = (1 << len(P)) - 1
    return [a for i, a in enumerate(P.elements) if _beat_point(P._up, P._down, alive, i)]


@dataclass(frozen=True)
class Certificate:
    """Contractibility evidence for a finite poset."""

    size: int
    core_size: int
    homology: tuple[HomologyGroup, ...]

    @property
    def dismantlable(self) -> bool:
        return self.core_size == 1

    @property
    def acyclic(self) -> bool:
        return is_acyclic(self.homology)

    @property
    def passed(self) -> bool:
        return self.dismantlable or self.acyclic

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "coreSize": self.core_size,
            "homology": [g.to_json() for g in self.homology],
            "dismantlable": self.dismantlable,
            "acyclic": self.acyclic,
            "pass": self.passed,
        }


def certify(P: FinPoset, max_dim: int = 3) -> Certificate:
    core = dismantle_core(P)
    return Certificate(len(P), len(core), tuple(reduced_homology(P, max_dim)))


# -- maps, comma fibers, transport -------------------------------------------


@dataclass(frozen=True)
class PosetMap:
    source: FinPoset
    target: FinPoset
    assignment: Mapping = field(repr=False)

    def __post_init__(self):
        for x in self.source:
            if x not in self.assignment:
                raise PosetError(f"no image for {x!r}")
            if self.assignment[x] not in self.target:
                raise PosetError(f"image of {x!r} lies outside the target")
        for a, b in self.source.covers():
            if not self.target.leq(self.assignment[a], self.assignment[b]):
                raise PosetError(f"map is not order-preserving on {a!r} <= {b!r}")

    def __call__(self, x):
        return self.assignment[x]

    @classmethod
    def identity(cls, P: FinPoset) -> "PosetMap":
        return cls(P, P, {x: x for x in P})


def comma_fiber(F: PosetMap, i) -> FinPoset:
    """The subposet of the source on {j : i <= F(j)}."""
    if i not in F.target:
        raise PosetError(f"{i!r} is not an element of the target")
    return F.source.subposet(j for j in F.source if F.target.leq(i, F(j)))


def transport(
    P: FinPoset,
    fibre: Callable[[object], Iterable],
    move: Callable[[object, object, object], object],
) -> FinPoset:
    """Transport poset of a functor X from P to finite sets.

    Elements are pairs (p, x) with x in X(p); (p, x) <= (q, y) iff p <= q and
    X(p <= q) sends x to y.  ``move(p, q, x)`` evaluates X(p <= q)(x).
    Functoriality is checked; a violation raises PosetError.
    """
    sets = {p: list(fibre(p)) for p in P}
    members = {p: set(xs) for p, xs in sets.items()}
    image = {}
    for p in P:
        for q in P.up_set(p):
            for x in sets[p]:
                y = move(p, q, x)
                if y not in members[q]:
                    raise PosetError(f"X({p!r} <= {q!r}) sends {x!r} outside X({q!r})")
                if p == q and y != x:
                    raise PosetError(f"X({p!r} <= {p!r}) is not the identity")
                image[(p, q, x)] = y
    for p in P:
        for q in P.up_set(p):
            for r in P.up_set(q):
                for x in sets[p]:
                    if image[(q, r, image[(p, q, x)])] != image[(p, r, x)]:
                        raise PosetError(f"composition fails along {p!r} <= {q!r} <= {r!r}")
    elements = [(p, x) for p in P for x in sets[p]]
    pairs = [((p, x), (q, image[(p, q, x)])) for p in P for q in P.up_set(p) for x in sets[p]]
    return FinPoset(elements, pairs)
