"""Composition of a covariant (surjection-coefficient) functor with a
contravariant (injection-coefficient) one.

The composite is tabulated levelwise: H_k is the covariant evaluation at
the index set of the contravariant evaluation at (k], and H(f) acts by
pushing the index map of the inner functor through the outer one.  The
composite is contravariant overall, so it feeds straight into the
verification pipeline; extraction then certifies that it is again of
evaluated form and returns its coefficients.
"""

from __future__ import annotations

from math import comb

from .coeff import InjCoeff, SurCoeff
from .cosan import tabulate_cosan
from .errors import ResourceBound
from .finset import FinFun, window_functions
from .san import san_evaluate, san_map
from .tabular import CheckReport, TabFunctor
from .verify import Extraction, check_phi_iso, extract_coefficients


def compose_tabulate(
    B: SurCoeff, A: InjCoeff, w: int, cap: int = 10_000
) -> TabFunctor:
    """Tabulate the composite on the window, guarding level sizes.

    The expected size of each level is computed from the counting formula
    before any elements are materialized, so blow-ups surface as a
    ResourceBound error instead of an unbounded run.
    """
    inner = tabulate_cosan(A, w)
    sizes = [len(level) for level in inner.elems]
    for k, nk in enumerate(sizes):
        expected = sum(len(B.level(n)) * comb(nk, n) for n in range(nk + 1))
        if expected > cap:
            raise ResourceBound(
                f"level {k} of the composite would hold {expected} elements "
                f"(cap {cap})"
            )
    elems = [san_evaluate(B, nk) for nk in sizes]
    index = [{e: i for i, e in enumerate(level)} for level in elems]
    sets = tuple(
        tuple(f"[{B.level(e.level)[e.coeff]}|{e.mono.text()}]" for e in level)
        for level in elems
    )
    tables = {}
    for f in window_functions(w):
        n, m = f.cod, f.dom
        inner_map = FinFun(
            sizes[n], sizes[m], tuple(v + 1 for v in inner.tab.tables[f])
        )
        tables[f] = tuple(
            index[m][san_map(B, inner_map, h)] for h in elems[n]
        )
    return TabFunctor(w, sets, tables)


def compose_extract(
    B: SurCoeff, A: InjCoeff, w: int, cap: int = 10_000
) -> tuple[Extraction, CheckReport]:
    """Tabulate the composite, extract its coefficients, certify with phi."""
    H = compose_tabulate(B, A, w, cap)
    ext = extract_coefficients(H)
    if not ext.report.passed:
        return ext, ext.report
    return ext, check_phi_iso(H, ext)
