"""Real roots of a Kac-Moody root system and the inversion sets of Weyl group elements."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .coxeter import (
    GeneralizedCartanMatrix,
    WeylElement,
    gcm_to_coxeter,
    system_for,
)


class RootSignError(ArithmeticError):
    """A computed vector mixes signs, so the input was not a real root."""


@dataclass(frozen=True, order=True)
class Root:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not any(c):
            raise RootSignError("the zero vector is not a root")
        if any(x > 0 for x in c) and any(x < 0 for x in c):
            raise RootSignError(f"mixed signs in {list(c)}")

    @classmethod
    def simple(cls, i: int, n: int) -> "Root":
        return cls(tuple(1 if j == i - 1 else 0 for j in range(n)))

    @property
    def positive(self) -> bool:
        return any(x > 0 for x in self.coeffs)

    def __neg__(self):
        return Root(tuple(-x for x in self.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs, start=1):
            if c:
                terms.append(f"{'' if c == 1 else '-' if c == -1 else c}a{i}")
        return " + ".join(terms).replace("+ -", "- ")


def act_simple(j: int, r: Root, A: GeneralizedCartanMatrix) -> Root:
    """s_j applied to r: only the alpha_j coefficient changes."""
    n = r.coeffs
    new_j = -(n[j - 1] + sum(n[i] * A.a[i][j - 1] for i in range(A.n) if i != j - 1))
    return Root(n[: j - 1] + (new_j,) + n[j:])


def act_word(word, r: Root, A: GeneralizedCartanMatrix) -> Root:
    """Apply s_{i1} s_{i2} ... s_{ik}; the rightmost letter acts first."""
    for j in reversed(word):
        r = act_simple(j, r, A)
    return r


def act(w: WeylElement, r: Root, A: GeneralizedCartanMatrix) -> Root:
    _check_system(w, A)
    return act_word(w.word, r, A)


def _check_system(w: WeylElement, A: GeneralizedCartanMatrix):
    if w.system.matrix != gcm_to_coxeter(A):
        raise ValueError("element does not belong to the Weyl group of this Cartan matrix")


@dataclass(frozen=True)
class ThetaSet:
    roots: tuple[Root, ...]
    owner: WeylElement

    def as_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __contains__(self, r):
        return r in self.roots

    def to_json(self) -> list[list[int]]:
        return [r.to_json() for r in self.roots]


def theta_of_word(word, A: GeneralizedCartanMatrix) -> tuple[Root, ...]:
    """[alpha_{i1}, s_{i1} alpha_{i2}, s_{i1} s_{i2} alpha_{i3}, ...] for a word."""
    out = []
    for k, i in enumerate(word):
        out.append(act_word(word[:k], Root.simple(i, A.n), A))
    return tuple(out)


def theta(w: WeylElement, A: GeneralizedCartanMatrix) -> ThetaSet:
    _check_system(w, A)
    roots = theta_of_word(w.word, A)
    if len(set(roots)) != len(roots) or not all(r.positive for r in roots):
        raise RootSignError(f"inversion list of {w} is not a set of distinct positive roots")
    return ThetaSet(roots, w)


@dataclass(frozen=True)
class CommutationVerdict:
    """Outcome of a bounded search; ``certain`` is False when the bound ran out."""

    value: bool
    certain: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.value

    def __str__(self):
        if self.value:
            return "true"
        return "false" if self.certain else "unknown(false)"


@lru_cache(maxsize=None)
def _ball_thetas(A: GeneralizedCartanMatrix, bound: int):
    system = system_for(gcm_to_coxeter(A))
    return [(w.word, frozenset(theta_of_word(w.word, A))) for w in system.ball(bound)]


def commutes(ra: Root, rb: Root, A: GeneralizedCartanMatrix, bound: int) -> CommutationVerdict:
    """Is there w with l(w) <= bound whose inversion set holds both roots?

    A negative answer is certain only when the whole group fits inside the
    ball (finite Weyl group); otherwise it is reported as unknown(false).
    """
    if not (ra.positive and rb.positive):
        raise ValueError("both roots must be positive")
    balls = _ball_thetas(A, bound)
    for word, th in balls:
        if ra in th and rb in th:
            return CommutationVerdict(True, True, word)
    # If the sphere of radius `bound` is empty, the ball is the whole group.
    exhausted = not _ball_thetas(A, bound + 1)[len(balls):]
    return CommutationVerdict(False, exhausted)
