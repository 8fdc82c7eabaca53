"""The contravariant functor built from injection coefficients.

An element of the value at (k] is an orbit of pairs (a, x) with a a
coefficient at level n and x: (k] -> (n] surjective, under the
identification (a, sigma . x) ~ (a . sigma, x).  Each orbit is stored by
its unique representative whose surjection is in first-occurrence form,
so equality is structural everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import InjCoeff, InjNat, act_inj
from .errors import IllTyped, LevelMismatch, NotEpi, OutOfWindow
from .finset import (
    FinFun,
    canonical_epi_form,
    canonical_epis,
    compose,
    epi_mono_factorize,
    window_functions,
)
from .tabular import TabFunctor, TabNat


@dataclass(frozen=True)
class CosanElem:
    """Canonical orbit representative: level, coefficient index, canonical epi."""

    level: int
    coeff: int
    epi: FinFun

    def to_json(self, A: InjCoeff) -> dict:
        return {"n": self.level, "a": A.name(self.level, self.coeff),
                "epi": self.epi.text()}


def canonicalize_pair(A: InjCoeff, a: int, x: FinFun) -> CosanElem:
    """Canonical representative of the pair (a, x) with x surjective.

    Writing x = sigma . c with c in first-occurrence form, the orbit
    representative is (a . sigma, c).  Idempotent, and constant on the
    whole orbit of (a, x).
    """
    n = x.cod
    if n > A.window:
        raise OutOfWindow(f"level {n} beyond window {A.window}")
    if not x.is_surjective():
        raise NotEpi(f"{x.text()} is not surjective")
    if not 0 <= a < A.size(n):
        raise LevelMismatch(f"no element {a} at level {n}")
    sigma, c = canonical_epi_form(x)
    return CosanElem(n, act_inj(A, sigma, a), c)


def normalize_general_pair(A: InjCoeff, a: int, f: FinFun) -> CosanElem:
    """Normal form of a pair (a, f) with f: X -> (n] arbitrary.

    Factor f = mono . epi; the mono acts on the coefficient, the epi is
    canonicalized.  This is the single normal form through which every
    map application runs.
    """
    if f.cod > A.window:
        raise OutOfWindow(f"level {f.cod} beyond window {A.window}")
    if not 0 <= a < A.size(f.cod):
        raise LevelMismatch(f"no element {a} at level {f.cod}")
    epi, mono = epi_mono_factorize(f)
    return canonicalize_pair(A, act_inj(A, mono, a), epi)


def evaluate(A: InjCoeff, k: int) -> list[CosanElem]:
    """All canonical elements over (k], ordered by (level, coeff, epi values)."""
    if k > A.window:
        raise OutOfWindow(f"size {k} beyond window {A.window}")
    out = []
    for n in range(min(k, A.window) + 1):
        if not A.size(n):
            continue
        epis = canonical_epis(k, n)
        for a in range(A.size(n)):
            for c in epis:
                out.append(CosanElem(n, a, c))
    return out


def cosan_map(A: InjCoeff, f: FinFun, e: CosanElem) -> CosanElem:
    """Contravariant action along f: Y -> X on an element over X."""
    if e.epi.dom != f.cod:
        raise LevelMismatch(
            f"element over ({e.epi.dom}] cannot be mapped along {f.text()}"
        )
    return normalize_general_pair(A, e.coeff, compose(e.epi, f))


def apply_nat(tau: InjNat, e: CosanElem) -> CosanElem:
    """Replace the coefficient through tau; the canonical epi is untouched."""
    lv = tau.levels[e.level]
    if lv is None:
        raise IllTyped(f"transformation undefined at level {e.level}")
    return CosanElem(e.level, lv[e.coeff], e.epi)


@dataclass
class CosanTabulation:
    """A tabulated functor together with its element lists and index maps."""

    tab: TabFunctor
    elems: tuple[tuple[CosanElem, ...], ...]
    index: tuple[dict[CosanElem, int], ...] = field(repr=False, default=())

    def __post_init__(self):
        if not self.index:
            self.index = tuple(
                {e: i for i, e in enumerate(level)} for level in self.elems
            )

    def index_of(self, e: CosanElem, over: int) -> int:
        return self.index[over][e]


def elem_label(A: InjCoeff, e: CosanElem) -> str:
    return f"[{A.name(e.level, e.coeff)}|{e.epi.text()}]"


def tabulate_cosan(A: InjCoeff, w: int) -> CosanTabulation:
    """Tabulate the functor on sizes 0..w: level sets and one table per function."""
    if w > A.window:
        raise OutOfWindow(f"window {w} beyond coefficient window {A.window}")
    elems = tuple(tuple(evaluate(A, k)) for k in range(w + 1))
    index = tuple({e: i for i, e in enumerate(level)} for level in elems)
    sets = tuple(tuple(elem_label(A, e) for e in level) for level in elems)
    tables = {
        f: tuple(index[f.dom][cosan_map(A, f, e)] for e in elems[f.cod])
        for f in window_functions(w)
    }
    return CosanTabulation(TabFunctor(w, sets, tables), elems, index)


def tabulate_nat(tau: InjNat, w: int) -> TabNat:
    """Tabulate the induced transformation between two tabulations."""
    src = tabulate_cosan(tau.source, w)
    tgt = tabulate_cosan(tau.target, w)
    levels = tuple(
        tuple(tgt.index[k][apply_nat(tau, e)] for e in src.elems[k])
        for k in range(w + 1)
    )
    return TabNat(src.tab, tgt.tab, levels)
