"""Semi-analytic functors at desk scale.

The covariant dual of the main construction: values are orbits of pairs
(b, i) with b a surjection-coefficient at level n and i: (n] -> X
injective, stored with the mono in ascending form and the coefficient
adjusted by the sorting permutation.  For the pplus coefficients these
elements are exactly the nonempty subsets of X and the action is direct
image, which the tests exploit as an independent oracle.

Also here: tensorial strength, its semicartesianness check, the pplus
monad structure at subset level, and the two algebra constructions
(via strength, and pointwise) on function spaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coeff import SurCoeff, act_sur, builtin_sur_coeff
from .errors import IndexOutOfRange, LevelMismatch, NotInjective
from .finset import FinFun, compose, enumerate_functions, epi_mono_factorize
from .tabular import CheckReport

_COMB = itertools.combinations


@dataclass(frozen=True)
class SanElem:
    """Canonical representative: level, coefficient index, ascending mono."""

    level: int
    coeff: int
    mono: FinFun

    def to_json(self, B: SurCoeff) -> dict:
        return {"n": self.level, "b": B.level(self.level)[self.coeff],
                "mono": self.mono.text()}


def canonical_mono_pair(B: SurCoeff, b: int, j: FinFun) -> SanElem:
    """Representative of (b, j) for an arbitrary injection j."""
    if not j.is_injective():
        raise NotInjective(f"{j.text()} is not injective")
    ordered = tuple(sorted(j.values))
    rank = {v: t + 1 for t, v in enumerate(ordered)}
    sigma = FinFun(j.dom, j.dom, tuple(rank[v] for v in j.values))
    mono = FinFun(j.dom, j.cod, ordered)
    return SanElem(j.dom, act_sur(B, sigma, b), mono)


def san_evaluate(B: SurCoeff, k: int) -> list[SanElem]:
    """All canonical elements over (k], ordered by (level, coeff, mono values)."""
    out = []
    for n in range(k + 1):
        names = B.level(n)
        if not names:
            continue
        monos = [FinFun(n, k, c) for c in _COMB(range(1, k + 1), n)]
        for b in range(len(names)):
            for i in monos:
                out.append(SanElem(n, b, i))
    return out


def san_index(B: SurCoeff, k: int) -> dict[SanElem, int]:
    return {e: i for i, e in enumerate(san_evaluate(B, k))}


def san_map(B: SurCoeff, f: FinFun, e: SanElem) -> SanElem:
    """Covariant action along f: X -> Y.

    Factor f . mono = mono' . s with s surjective; s pushes the
    coefficient forward and the ascending mono' is already canonical.
    """
    if e.mono.cod != f.dom:
        raise LevelMismatch(
            f"element over ({e.mono.cod}] cannot be mapped along {f.text()}"
        )
    s, mono = epi_mono_factorize(compose(f, e.mono))
    return SanElem(mono.dom, act_sur(B, s, e.coeff), mono)


def strength(B: SurCoeff, X: int, Y: int, x: int, t: SanElem) -> SanElem:
    """st(x, t): apply the functor to y |-> (x, y), products indexed by
    (x, y) |-> (x-1)*Y + y."""
    if not 1 <= x <= X:
        raise IndexOutOfRange(f"point {x} outside 1..{X}")
    if t.mono.cod != Y:
        raise IndexOutOfRange(f"element over ({t.mono.cod}], expected ({Y}]")
    xbar = FinFun(Y, X * Y, tuple((x - 1) * Y + y for y in range(1, Y + 1)))
    return san_map(B, xbar, t)


def _product_mono(u: FinFun, v: FinFun) -> FinFun:
    """u x v on pair indices, (x, y) |-> (x-1)*Y + y on both sides."""
    X2, Y2 = u.cod, v.cod
    vals = tuple(
        (u(a) - 1) * Y2 + v(b)
        for a in range(1, u.dom + 1)
        for b in range(1, v.dom + 1)
    )
    return FinFun(u.dom * v.dom, X2 * Y2, vals)


def check_strength_semicartesian(
    B: SurCoeff, w: int, strength_fn=None
) -> CheckReport:
    """Check the naturality squares of the strength at pairs of monos.

    For every pair u: X' -> X, v: Y' -> Y of injections with sizes <= w
    the square

        X' x T(Y') --st--> T(X' x Y')
            |                  |
        u x T(v)            T(u x v)
            v                  v
        X  x T(Y)  --st--> T(X  x Y)

    must commute and be a pullback.  Both variables are quantified
    jointly; the report tallies the u-only, v-only and mixed squares
    separately so either one-variable reading can be audited.
    """
    st = strength_fn or strength
    tallies = {"x_only": 0, "y_only": 0, "joint": 0}
    for X2 in range(w + 1):
        for Y2 in range(w + 1):
            ty = san_evaluate(B, Y2)
            bottom = [(x, t) for x in range(1, X2 + 1) for t in ty]
            bottom_pos = {p: i for i, p in enumerate(bottom)}
            st_bottom = [st(B, X2, Y2, x, t) for (x, t) in bottom]
            for X1 in range(X2 + 1):
                for Y1 in range(Y2 + 1):
                    ty1 = san_evaluate(B, Y1)
                    txy1 = san_evaluate(B, X1 * Y1)
                    for u in enumerate_functions("inj", X1, X2):
                        for v in enumerate_functions("inj", Y1, Y2):
                            key = ("x_only" if Y1 == Y2 and v.is_identity()
                                   else "y_only" if X1 == X2 and u.is_identity()
                                   else "joint")
                            wit = _strength_square(
                                B, st, u, v, ty1, txy1, bottom_pos, st_bottom
                            )
                            if wit is not None:
                                wit.update({"u": u.text(), "v": v.text()})
                                return CheckReport("strength-semicartesian",
                                                   "fail", wit)
                            tallies[key] += 1
    return CheckReport("strength-semicartesian", "pass", details=tallies)


def _strength_square(B, st, u, v, ty1, txy1, bottom_pos, st_bottom):
    X1, X2 = u.dom, u.cod
    Y1, Y2 = v.dom, v.cod
    uxv = _product_mono(u, v)
    right = [san_map(B, uxv, s) for s in txy1]
    corner = [(x, t) for x in range(1, X1 + 1) for t in ty1]
    top = [st(B, X1, Y1, x, t) for (x, t) in corner]
    left = [(u(x), san_map(B, v, t)) for (x, t) in corner]
    txy1_pos = {s: i for i, s in enumerate(txy1)}
    # commutation: T(u x v) . st = st . (u x T(v))
    for i, (x, t) in enumerate(corner):
        if right[txy1_pos[top[i]]] != st_bottom[bottom_pos[left[i]]]:
            return {"kind": "noncommuting", "x": x, "t": t.mono.text()}
    # pullback: corner must biject onto the fiber product
    fiber = {}
    right_pos: dict[SanElem, list[int]] = {}
    for i, s in enumerate(right):
        right_pos.setdefault(s, []).append(i)
    for bi, p in enumerate(st_bottom):
        for si in right_pos.get(p, ()):
            fiber[(bi, si)] = None
    seen = {}
    for i in range(len(corner)):
        key = (bottom_pos[left[i]], txy1_pos[top[i]])
        if key in seen:
            return {"kind": "collision", "elements": [seen[key], i]}
        if key not in fiber:
            return {"kind": "noncommuting", "index": i}
        seen[key] = i
    for key in fiber:
        if key not in seen:
            bi, si = key
            return {"kind": "missed",
                    "bottom": bi, "top": txy1[si].mono.text()}
    return None


# ---------------------------------------------------------------------------
# pplus at subset level, and algebras on function spaces


def subset_elem(S, k: int) -> SanElem:
    """Encode a nonempty subset of (k] as a pplus element."""
    members = tuple(sorted(S))
    if not members:
        raise IndexOutOfRange("pplus has no empty element")
    return SanElem(len(members), 0, FinFun(len(members), k, members))


def elem_subset(e: SanElem) -> frozenset[int]:
    return frozenset(e.mono.values)


def pplus_unit(k: int, x: int) -> SanElem:
    if not 1 <= x <= k:
        raise IndexOutOfRange(f"point {x} outside 1..{k}")
    return SanElem(1, 0, FinFun(1, k, (x,)))


def pplus_mult(k: int, tt: SanElem, inner: list[SanElem]) -> SanElem:
    """Union of a nonempty family: tt lives over the index set of ``inner``,
    the evaluation of pplus at (k]."""
    union: set[int] = set()
    for i in tt.mono.values:
        union |= elem_subset(inner[i - 1])
    return subset_elem(union, k)


@dataclass
class Algebra:
    """A structure map on (carrier], one value per evaluated element of
    the acting functor at the carrier, in evaluation order (1-based)."""

    carrier: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        self.alpha = tuple(self.alpha)
        for v in self.alpha:
            if not 1 <= v <= self.carrier:
                raise ValueError(f"structure value {v} outside 1..{self.carrier}")


def max_algebra(n: int) -> Algebra:
    """The join algebra on (n] under pplus: a subset goes to its maximum."""
    B = builtin_sur_coeff("pplus")
    alpha = tuple(max(elem_subset(e)) for e in san_evaluate(B, n))
    return Algebra(n, alpha)


def algebra_apply(alg: Algebra, B: SurCoeff, e: SanElem) -> int:
    idx = san_index(B, alg.carrier)
    if e not in idx:
        raise IndexOutOfRange("element does not live over the carrier")
    return alg.alpha[idx[e]]


def check_algebra_laws(alg: Algebra, B: SurCoeff | None = None) -> CheckReport:
    """Unit and multiplication laws for an algebra of the pplus monad."""
    B = B or builtin_sur_coeff("pplus")
    n = alg.carrier
    inner = san_evaluate(B, n)
    alpha_fun = FinFun(len(inner), n, alg.alpha)
    for x in range(1, n + 1):
        if algebra_apply(alg, B, pplus_unit(n, x)) != x:
            return CheckReport("algebra-laws", "fail",
                               {"kind": "unit", "point": x})
    for tt in san_evaluate(B, len(inner)):
        via_mult = algebra_apply(alg, B, pplus_mult(n, tt, inner))
        via_map = algebra_apply(alg, B, san_map(B, alpha_fun, tt))
        if via_mult != via_map:
            return CheckReport("algebra-laws", "fail",
                               {"kind": "multiplication", "family": tt.mono.text()})
    return CheckReport("algebra-laws", "pass",
                       details={"carrier": n, "families": 2 ** len(inner) - 1})


def _function_tuples(X: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, n + 1), repeat=X))


def exponential_algebra(B: SurCoeff, alg: Algebra, X: int, t: SanElem) -> FinFun:
    """Algebra structure on (n]^X via strength: the exponential adjoint of
    alpha . T(ev) . st.

    Functions X -> (n] are indexed lexicographically by their value
    tuples; t lives over that index set.  Returns the resulting function
    X -> (n].
    """
    n = alg.carrier
    tuples = _function_tuples(X, n)
    npow = len(tuples)
    if t.mono.cod != npow:
        raise IndexOutOfRange(f"element over ({t.mono.cod}], expected ({npow}]")
    ev = FinFun(
        X * npow,
        n,
        tuple(
            tuples[(p - 1) % npow][(p - 1) // npow]
            for p in range(1, X * npow + 1)
        ),
    )
    values = []
    for x in range(1, X + 1):
        lifted = san_map(B, ev, strength(B, X, npow, x, t))
        values.append(algebra_apply(alg, B, lifted))
    return FinFun(X, n, tuple(values))


def pointwise_algebra(B: SurCoeff, alg: Algebra, X: int, t: SanElem) -> FinFun:
    """The same structure defined pointwise: evaluate at x, then alpha.

    Independent of the strength machinery, which is exactly why the tests
    use it as the oracle for exponential_algebra.
    """
    n = alg.carrier
    tuples = _function_tuples(X, n)
    npow = len(tuples)
    if t.mono.cod != npow:
        raise IndexOutOfRange(f"element over ({t.mono.cod}], expected ({npow}]")
    values = []
    for x in range(1, X + 1):
        ev_x = FinFun(npow, n, tuple(g[x - 1] for g in tuples))
        values.append(algebra_apply(alg, B, san_map(B, ev_x, t)))
    return FinFun(X, n, tuple(values))
