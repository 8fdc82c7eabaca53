"""The skeletal category of finite sets (n] = {1, ..., n}.

A function (m] -> (n] is stored as its value sequence, 1-based on both
sides.  Everything here is pure and immutable: classification, epi-mono
factorization, the first-occurrence canonical form for surjections,
pushouts by union-find, pullbacks, exhaustive hom-set enumeration, and the
counting functions (Stirling, Bell) the test oracles lean on.

Text form: ``"m>n:v1,v2,...,vm"``, e.g. ``"3>2:1,1,2"``; ``"0>n:"`` is the
empty map into (n].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import CodMismatch, DomMismatch, NonCommuting, NotEpi


@dataclass(frozen=True)
class FinFun:
    """A function (dom] -> (cod]; ``values[i-1]`` holds f(i)."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.dom < 0 or self.cod < 0:
            raise ValueError(f"negative object size in {self.dom}>{self.cod}")
        if len(self.values) != self.dom:
            raise ValueError(
                f"expected {self.dom} values, got {len(self.values)}"
            )
        for v in self.values:
            if not 1 <= v <= self.cod:
                raise ValueError(f"value {v} outside 1..{self.cod}")

    def __call__(self, i: int) -> int:
        return self.values[i - 1]

    def __str__(self) -> str:
        return self.text()

    def text(self) -> str:
        return f"{self.dom}>{self.cod}:" + ",".join(map(str, self.values))

    @staticmethod
    def parse(text: str) -> "FinFun":
        head, _, tail = text.partition(":")
        m, _, n = head.partition(">")
        values = [int(v) for v in tail.split(",") if v != ""]
        return FinFun(int(m), int(n), tuple(values))

    @staticmethod
    def identity(n: int) -> "FinFun":
        return FinFun(n, n, tuple(range(1, n + 1)))

    def is_identity(self) -> bool:
        return self.dom == self.cod and self.values == tuple(range(1, self.dom + 1))

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.dom

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.cod

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.values)))


class Classification(NamedTuple):
    injective: bool
    surjective: bool
    bijective: bool


def classify(f: FinFun) -> Classification:
    """Classify by fiber counting: no fiber above 1 element / no empty fiber."""
    fibers = [0] * f.cod
    for v in f.values:
        fibers[v - 1] += 1
    inj = all(c <= 1 for c in fibers)
    sur = all(c >= 1 for c in fibers)
    return Classification(inj, sur, inj and sur)


def compose(g: FinFun, f: FinFun) -> FinFun:
    """g after f.  Raises CodMismatch unless cod(f) = dom(g)."""
    if f.cod != g.dom:
        raise CodMismatch(f"cannot compose {g.text()} after {f.text()}")
    return FinFun(f.dom, g.cod, tuple(g.values[v - 1] for v in f.values))


def epi_mono_factorize(f: FinFun) -> tuple[FinFun, FinFun]:
    """Split f = mono . epi with the mono enumerating im(f) in ascending order.

    Returns (epi, mono).  The ascending-image convention makes the pair
    unique, not just unique up to isomorphism.
    """
    img = f.image()
    rank = {v: i + 1 for i, v in enumerate(img)}
    epi = FinFun(f.dom, len(img), tuple(rank[v] for v in f.values))
    mono = FinFun(len(img), f.cod, img)
    return epi, mono


def canonical_epi_form(x: FinFun) -> tuple[FinFun, FinFun]:
    """Write the surjection x as sigma . c with c in first-occurrence form.

    c introduces new labels in the order 1, 2, 3, ... scanning left to
    right; sigma is the unique permutation with x = sigma . c.  Raises
    NotEpi when x is not surjective.
    """
    if not x.is_surjective():
        raise NotEpi(f"{x.text()} is not surjective")
    labels: dict[int, int] = {}
    canon = []
    for v in x.values:
        if v not in labels:
            labels[v] = len(labels) + 1
        canon.append(labels[v])
    sigma_vals = [0] * x.cod
    for v, lab in labels.items():
        sigma_vals[lab - 1] = v
    sigma = FinFun(x.cod, x.cod, tuple(sigma_vals))
    c = FinFun(x.dom, x.cod, tuple(canon))
    return sigma, c


def is_canonical_epi(x: FinFun) -> bool:
    seen = 0
    for v in x.values:
        if v == seen + 1:
            seen += 1
        elif v > seen:
            return False
    return seen == x.cod


class UnionFind:
    """Plain array union-find with path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


class Pushout(NamedTuple):
    size: int
    in_x: FinFun
    in_y: FinFun


def pushout(f: FinFun, g: FinFun) -> Pushout:
    """Pushout of the span X <-f- Z -g-> Y.

    Computed by union-find on the disjoint sum of (cod f] and (cod g],
    merging f(i) ~ g(i).  Block labels are assigned by first occurrence
    scanning the X part and then the Y part, so the result is
    deterministic and squares can be compared structurally.
    """
    if f.dom != g.dom:
        raise DomMismatch(f"{f.text()} and {g.text()} have different domains")
    nx, ny = f.cod, g.cod
    uf = UnionFind(nx + ny)
    for i in range(1, f.dom + 1):
        uf.union(f(i) - 1, nx + g(i) - 1)
    label: dict[int, int] = {}
    for k in range(nx + ny):
        root = uf.find(k)
        if root not in label:
            label[root] = len(label) + 1
    in_x = FinFun(nx, len(label), tuple(label[uf.find(i)] for i in range(nx)))
    in_y = FinFun(ny, len(label), tuple(label[uf.find(nx + j)] for j in range(ny)))
    return Pushout(len(label), in_x, in_y)


class Pullback(NamedTuple):
    pairs: tuple[tuple[int, int], ...]
    proj_x: FinFun
    proj_y: FinFun


def pullback(f: FinFun, g: FinFun) -> Pullback:
    """Fiber product of X -f-> Z <-g- Y: pairs (i, j) with f(i) = g(j).

    Pairs come out in lexicographic order; the two projections index into
    the domains of f and g.
    """
    if f.cod != g.cod:
        raise CodMismatch(f"{f.text()} and {g.text()} have different codomains")
    buckets: dict[int, list[int]] = {}
    for j in range(1, g.dom + 1):
        buckets.setdefault(g(j), []).append(j)
    pairs = tuple(
        (i, j)
        for i in range(1, f.dom + 1)
        for j in buckets.get(f(i), ())
    )
    proj_x = FinFun(len(pairs), f.dom, tuple(p[0] for p in pairs))
    proj_y = FinFun(len(pairs), g.dom, tuple(p[1] for p in pairs))
    return Pullback(pairs, proj_x, proj_y)


@dataclass(frozen=True)
class Square:
    """A commuting square with the candidate corner at the top left.

        A --top--> B
        |          |
      left       right
        v          v
        C -bottom-> D

    The commuting composite is right . top = bottom . left; that fixed
    reading replaces a separate orientation flag.
    """

    top: FinFun
    left: FinFun
    right: FinFun
    bottom: FinFun

    def commutes(self) -> bool:
        return compose(self.right, self.top) == compose(self.bottom, self.left)


def is_pullback_square(sq: Square) -> tuple[bool, dict | None]:
    """Test whether the corner A is the pullback of right/bottom.

    True iff the comparison a |-> (top(a), left(a)) into the fiber product
    is a bijection.  On failure the witness names either a missed fiber
    pair or two corner elements that collide.  Raises NonCommuting when
    the square does not commute.
    """
    if not sq.commutes():
        raise NonCommuting("square does not commute", witness={
            "top": sq.top.text(), "left": sq.left.text(),
            "right": sq.right.text(), "bottom": sq.bottom.text(),
        })
    fiber = pullback(sq.right, sq.bottom)
    pos = {p: k for k, p in enumerate(fiber.pairs)}
    hit: dict[int, int] = {}
    for a in range(1, sq.top.dom + 1):
        k = pos[(sq.top(a), sq.left(a))]
        if k in hit:
            return False, {"kind": "collision", "elements": [hit[k], a],
                           "pair": list(fiber.pairs[k])}
        hit[k] = a
    for k, p in enumerate(fiber.pairs):
        if k not in hit:
            return False, {"kind": "missed", "pair": list(p)}
    return True, None


KINDS = ("all", "inj", "sur", "bij")


def enumerate_functions(kind: str, m: int, n: int) -> list[FinFun]:
    """All functions (m] -> (n] of the given kind, lexicographic on values."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    out = []
    for vals in itertools.product(range(1, n + 1), repeat=m):
        f = FinFun(m, n, vals)
        if kind == "all":
            out.append(f)
            continue
        c = classify(f)
        if (kind == "inj" and c.injective) or (kind == "sur" and c.surjective) \
                or (kind == "bij" and c.bijective):
            out.append(f)
    return out


def canonical_epis(m: int, n: int) -> list[FinFun]:
    """Surjections (m] -> (n] in first-occurrence form, one per S_n-orbit."""
    return [f for f in enumerate_functions("sur", m, n) if is_canonical_epi(f)]


def window_functions(w: int, kind: str = "all") -> list[FinFun]:
    """Every function (m] -> (n] with m, n <= w, in a fixed global order."""
    return [
        f
        for m in range(w + 1)
        for n in range(w + 1)
        for f in enumerate_functions(kind, m, n)
    ]


def window_injections(w: int) -> list[FinFun]:
    return window_functions(w, "inj")


def window_surjections(w: int) -> list[FinFun]:
    return window_functions(w, "sur")


@lru_cache(maxsize=None)
def stirling2(m: int, n: int) -> int:
    """Stirling numbers of the second kind, S(m, n)."""
    if m == n:
        return 1
    if n <= 0 or n > m:
        return 0
    return n * stirling2(m - 1, n) + stirling2(m - 1, n - 1)


def bell(m: int) -> int:
    return sum(stirling2(m, n) for n in range(m + 1))
