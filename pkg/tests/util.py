"""Shared test helpers: independent oracles and small constructors.

Everything in here is deliberately naive (explicit orbit enumeration,
brute-force universal properties, subset arithmetic) so it stays
independent of the code paths it checks.
"""

from cosan.coeff import InjCoeff, act_inj
from cosan.cosan import CosanElem
from cosan.finset import (
    FinFun,
    compose,
    enumerate_functions,
    is_canonical_epi,
)


def ff(text: str) -> FinFun:
    return FinFun.parse(text)


def invert(f: FinFun) -> FinFun:
    assert f.is_bijective()
    vals = [0] * f.dom
    for i in range(1, f.dom + 1):
        vals[f(i) - 1] = i
    return FinFun(f.cod, f.dom, tuple(vals))


def orbit_quotient(A: InjCoeff, k: int):
    """Raw pairs (a, epi) quotiented by explicitly enumerated orbits.

    Returns (number of orbits, set of canonical representatives), where a
    representative is the unique orbit member whose epi is in
    first-occurrence form.  Independent of canonicalize_pair: orbits are
    enumerated by walking every permutation.
    """
    count = 0
    reps = set()
    for n in range(min(k, A.window) + 1):
        perms = enumerate_functions("bij", n, n)
        epis = enumerate_functions("sur", k, n)
        seen = set()
        for a in range(A.size(n)):
            for x in epis:
                if (a, x) in seen:
                    continue
                orbit = set()
                for s in perms:
                    # (a, x) = (a, s . y) ~ (a.s, y) with y = s^-1 . x
                    orbit.add((act_inj(A, s, a), compose(invert(s), x)))
                seen |= orbit
                count += 1
                canon = [(b, y) for (b, y) in orbit if is_canonical_epi(y)]
                assert len(canon) == 1
                reps.add(CosanElem(n, canon[0][0], canon[0][1]))
    return count, reps


def powerset_subset(exp2_levels, e: CosanElem) -> frozenset:
    """Subset reading of an evaluated exp:2 element: where a . epi is 1."""
    chi = compose(exp2_levels[e.level][e.coeff], e.epi)
    return frozenset(i for i in range(1, chi.dom + 1) if chi(i) == 1)


def exp2_injection_levels(w: int):
    return [enumerate_functions("inj", m, 2) for m in range(w + 1)]


def preimage(f: FinFun, subset) -> frozenset:
    return frozenset(i for i in range(1, f.dom + 1) if f(i) in subset)


def image_of(f: FinFun, subset) -> frozenset:
    return frozenset(f(i) for i in subset)


def mutate_table(tabfun, fun: FinFun, pos: int, new_val: int):
    """Copy a TabFunctor with one table entry replaced."""
    from cosan.tabular import TabFunctor

    tables = dict(tabfun.tables)
    row = list(tables[fun])
    row[pos] = new_val
    tables[fun] = tuple(row)
    return TabFunctor(tabfun.window, tabfun.sets, tables)
