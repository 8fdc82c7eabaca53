"""Characterization checks on tabulated contravariant functors.

The two image conditions (pullbacks along epis-made-cospans, the finitary
cocone quotient), semicartesianness of transformations, coefficient
extraction with its well-definedness guard, the comparison isomorphism,
transformation extraction, and the Boolean-homomorphism suite for inverse
images.  Every failure carries a concrete witness: a square, a pair of
elements, or a level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coeff import (
    InjCoeff,
    InjNat,
    act_inj,
    builtin_inj_coeff,
    truncate_inj_coeff,
)
from .cosan import (
    CosanElem,
    CosanTabulation,
    apply_nat,
    tabulate_cosan,
    tabulate_nat,
)
from .errors import (
    LevelMismatch,
    NonSemicartesian,
    NotNatural,
    OutOfWindow,
    RoundTripMismatch,
)
from .finset import (
    FinFun,
    Square,
    UnionFind,
    compose,
    enumerate_functions,
    is_pullback_square,
    pushout,
    window_functions,
    window_injections,
)
from .tabular import (
    CheckReport,
    TabFunctor,
    TabNat,
    validate_tab_functor,
    validate_tab_nat,
)

__all__ = [
    "CheckReport",
    "TabFunctor",
    "TabNat",
    "validate_tab_functor",
    "validate_tab_nat",
    "check_pullback_preservation",
    "check_cocone_colimit",
    "check_semicartesian",
    "Extraction",
    "extract_coefficients",
    "check_phi_iso",
    "extract_nat",
    "boolean_hom_check",
    "find_coeff_iso",
    "roundtrip_coeff",
    "roundtrip_nat",
]


def _table_fun(F: TabFunctor, f: FinFun) -> FinFun:
    """F(f) as a function between the (1-based) level index sets."""
    return FinFun(
        F.size(f.cod), F.size(f.dom), tuple(v + 1 for v in F.tables[f])
    )


def check_pullback_preservation(F: TabFunctor) -> CheckReport:
    """Condition one: cospans of epis must go to pullbacks.

    For every surjection f: Z -> X and every g: Z -> Y inside the window,
    the pushout of (f, g) stays inside the window (its size is at most
    |Y|), and the image square under F must be a pullback with corner
    F(pushout).
    """
    w = F.window
    squares = 0
    for z in range(w + 1):
        for x in range(z + 1):
            for f in enumerate_functions("sur", z, x):
                for y in range(w + 1):
                    for g in enumerate_functions("all", z, y):
                        po = pushout(f, g)
                        sq = Square(
                            top=_table_fun(F, po.in_x),
                            left=_table_fun(F, po.in_y),
                            right=_table_fun(F, f),
                            bottom=_table_fun(F, g),
                        )
                        ok, wit = is_pullback_square(sq)
                        squares += 1
                        if not ok:
                            wit = dict(wit)
                            wit.update(
                                {
                                    "pushout_of": f.text(),
                                    "along": g.text(),
                                    "in_x": po.in_x.text(),
                                    "in_y": po.in_y.text(),
                                }
                            )
                            return CheckReport("pullbacks", "fail", wit)
    return CheckReport("pullbacks", "pass", details={"squares": squares})


def check_cocone_colimit(F: TabFunctor, k: int) -> CheckReport:
    """Condition two: the finitary cocone at (k] must present F_k as a quotient.

    Take all pairs (f: (k] -> (n], c in F_n) for n <= W, identify
    (f, F(g)(c')) with (g.f, c') by union-find, and compare the classes
    with F_k through (f, c) |-> F(f)(c).  Three failure modes: a class
    whose members disagree (quotient mismatch), two classes on the same
    value (non-injective), an element of F_k hit by no class.
    """
    w = F.window
    if k > w:
        raise OutOfWindow(f"size {k} beyond window {w}")
    legs = {n: enumerate_functions("all", k, n) for n in range(w + 1)}
    pairs = []
    pos: dict[tuple[int, FinFun, int], int] = {}
    for n in range(w + 1):
        for f in legs[n]:
            for c in range(F.size(n)):
                pos[(n, f, c)] = len(pairs)
                pairs.append((n, f, c))
    uf = UnionFind(len(pairs))
    for n in range(w + 1):
        for n2 in range(w + 1):
            for g in enumerate_functions("all", n, n2):
                table = F.tables[g]
                for f in legs[n]:
                    gf = compose(g, f)
                    for c2 in range(F.size(n2)):
                        uf.union(pos[(n, f, table[c2])], pos[(n2, gf, c2)])
    value = [F.tables[f][c] for (n, f, c) in pairs]
    of_class: dict[int, int] = {}
    for i, (n, f, c) in enumerate(pairs):
        root = uf.find(i)
        if root in of_class:
            if value[of_class[root]] != value[i]:
                j = of_class[root]
                return CheckReport(
                    "cocone",
                    "fail",
                    {
                        "kind": "quotient-mismatch",
                        "at": k,
                        "pair": {"fun": f.text(), "element": F.name(n, c)},
                        "other": {
                            "fun": pairs[j][1].text(),
                            "element": F.name(pairs[j][0], pairs[j][2]),
                        },
                    },
                )
        else:
            of_class[root] = i
    hit: dict[int, int] = {}
    for root, i in of_class.items():
        v = value[i]
        if v in hit:
            j = hit[v]
            return CheckReport(
                "cocone",
                "fail",
                {
                    "kind": "non-injective",
                    "at": k,
                    "value": F.name(k, v),
                    "pair": {"fun": pairs[i][1].text(),
                             "element": F.name(pairs[i][0], pairs[i][2])},
                    "other": {"fun": pairs[j][1].text(),
                              "element": F.name(pairs[j][0], pairs[j][2])},
                },
            )
        hit[v] = i
    for v in range(F.size(k)):
        if v not in hit:
            return CheckReport(
                "cocone",
                "fail",
                {"kind": "not-covered", "at": k, "value": F.name(k, v)},
            )
    return CheckReport("cocone", "pass",
                       details={"at": k, "classes": len(of_class)})


def check_semicartesian(psi: TabNat) -> CheckReport:
    """Naturality squares at surjections must be pullbacks.

    Monomorphisms of the source category correspond to surjections here,
    so for every surjection g the square with corner F at the small side
    is tested against the fiber product of (psi, G(g)).
    """
    wit = validate_tab_nat(psi)
    if wit is not None:
        raise NotNatural("transformation is not natural", witness=wit)
    F, G = psi.source, psi.target
    for g in window_functions(F.window, "sur"):
        # g: (m] -> (k] surjective; the corner is F at (k]
        k, m = g.cod, g.dom
        sq = Square(
            top=_table_fun(F, g),
            left=FinFun(F.size(k), G.size(k), tuple(v + 1 for v in psi.levels[k])),
            right=FinFun(F.size(m), G.size(m), tuple(v + 1 for v in psi.levels[m])),
            bottom=_table_fun(G, g),
        )
        ok, wit = is_pullback_square(sq)
        if not ok:
            wit = dict(wit)
            wit["fun"] = g.text()
            return CheckReport("semicartesian", "fail", wit)
    return CheckReport("semicartesian", "pass")


@dataclass
class Extraction:
    """Coefficients recovered from a tabulation, with the embedding of each
    coefficient level into the functor level that produced it."""

    coeff: InjCoeff | None
    embed: tuple[tuple[int, ...], ...]
    report: CheckReport


def extract_coefficients(F: TabFunctor) -> Extraction:
    """Recover coefficients: level n keeps what no proper epi image covers.

    A_n = F_n minus the union of im(F(h)) over non-injective surjections
    h out of (n]; injections act by restriction.  If a restricted value
    escapes its level the input cannot be a tabulated evaluation, and the
    guard reports a well-definedness failure instead of guessing.
    """
    w = F.window
    embed: list[tuple[int, ...]] = []
    back: list[dict[int, int]] = []
    for n in range(w + 1):
        covered: set[int] = set()
        for m in range(n):
            for h in enumerate_functions("sur", n, m):
                covered.update(F.tables[h])
        keep = tuple(i for i in range(F.size(n)) if i not in covered)
        embed.append(keep)
        back.append({fi: ai for ai, fi in enumerate(keep)})
    action: dict[FinFun, tuple[int, ...]] = {}
    for u in window_injections(w):
        n, n2 = u.cod, u.dom
        table = []
        for fi in embed[n]:
            v = F.tables[u][fi]
            if v not in back[n2]:
                report = CheckReport(
                    "extract",
                    "fail",
                    {
                        "kind": "well-definedness",
                        "fun": u.text(),
                        "element": F.name(n, fi),
                        "value": F.name(n2, v),
                    },
                )
                return Extraction(None, tuple(embed), report)
            table.append(back[n2][v])
        action[u] = tuple(table)
    sets = tuple(
        tuple(F.name(n, fi) for fi in embed[n]) for n in range(w + 1)
    )
    coeff = InjCoeff(w, sets, action)
    return Extraction(
        coeff,
        tuple(embed),
        CheckReport("extract", "pass", details={"sizes": coeff.level_sizes()}),
    )


def check_phi_iso(F: TabFunctor, ext: Extraction) -> CheckReport:
    """The comparison [a, x] |-> F(x)(a) must be a natural levelwise bijection
    between the tabulation of the extracted coefficients and F."""
    if not ext.report.passed:
        return CheckReport(
            "phi-iso",
            "fail",
            ext.report.witness,
            details={"reason": "extraction failed"},
        )
    T = tabulate_cosan(ext.coeff, F.window)
    phi: list[list[int]] = []
    for kk in range(F.window + 1):
        layer = []
        hit: dict[int, int] = {}
        for i, e in enumerate(T.elems[kk]):
            v = F.tables[e.epi][ext.embed[e.level][e.coeff]]
            if v in hit:
                return CheckReport(
                    "phi-iso",
                    "fail",
                    {
                        "kind": "collision",
                        "level": kk,
                        "elements": [T.tab.name(kk, hit[v]), T.tab.name(kk, i)],
                        "value": F.name(kk, v),
                    },
                )
            hit[v] = i
            layer.append(v)
        for v in range(F.size(kk)):
            if v not in hit:
                return CheckReport(
                    "phi-iso",
                    "fail",
                    {"kind": "missed", "level": kk, "value": F.name(kk, v)},
                )
        phi.append(layer)
    for f in window_functions(F.window):
        tf = T.tab.tables[f]
        for i in range(len(T.elems[f.cod])):
            if phi[f.dom][tf[i]] != F.tables[f][phi[f.cod][i]]:
                return CheckReport(
                    "phi-iso",
                    "fail",
                    {
                        "kind": "naturality",
                        "fun": f.text(),
                        "element": T.tab.name(f.cod, i),
                    },
                )
    return CheckReport(
        "phi-iso",
        "pass",
        details={"sizes": F.level_sizes(), "coeff_sizes": ext.coeff.level_sizes()},
    )


def extract_nat(A: InjCoeff, B: InjCoeff, psi: TabNat) -> InjNat:
    """Recover the coefficient-level transformation from a tabulated one.

    Reading psi at the canonical element [a, id] must give a pair whose
    epi component is a bijection (stored canonically, the identity);
    otherwise the transformation is not semicartesian and extraction
    raises.  The recovered family is re-tabulated and compared with psi
    over the whole window before being returned.
    """
    w = psi.source.window
    A = truncate_inj_coeff(A, min(w, A.window))
    B = truncate_inj_coeff(B, min(w, B.window))
    TA = tabulate_cosan(A, w)
    TB = tabulate_cosan(B, w)
    if TA.tab.level_sizes() != psi.source.level_sizes() or \
            TB.tab.level_sizes() != psi.target.level_sizes():
        raise LevelMismatch("tabulations do not match the transformation")
    wit = validate_tab_nat(psi)
    if wit is not None:
        raise NotNatural("transformation is not natural", witness=wit)
    levels = []
    for m in range(w + 1):
        row = []
        for a in range(A.size(m)):
            i = TA.index[m][CosanElem(m, a, FinFun.identity(m))]
            out = TB.elems[m][psi.levels[m][i]]
            p = out.epi
            if p.cod != m:
                raise NonSemicartesian(
                    "epi component is not a bijection",
                    witness={
                        "level": m,
                        "element": A.name(m, a),
                        "p": p.text(),
                    },
                )
            row.append(act_inj(B, p, out.coeff))
        levels.append(tuple(row))
    tau = InjNat(A, B, tuple(levels))
    for k in range(w + 1):
        for i, e in enumerate(TA.elems[k]):
            if TB.index[k][apply_nat(tau, e)] != psi.levels[k][i]:
                raise RoundTripMismatch(
                    "recovered transformation does not reproduce the tabulation",
                    witness={"level": k, "element": TA.tab.name(k, i)},
                )
    return tau


def boolean_hom_check(w: int, tabulation: CosanTabulation | None = None) -> CheckReport:
    """Inverse images must be Boolean homomorphisms.

    Subsets of (k] are encoded as evaluated exp:2 elements through the
    comparison map (membership is where the composite takes the value 1),
    the Boolean operations are defined through that encoding, and every
    window table is checked to preserve union, intersection, complement,
    bottom and top.
    """
    A = builtin_inj_coeff("exp:2", w)
    T = tabulation or tabulate_cosan(A, w)
    injs = [enumerate_functions("inj", m, 2) for m in range(w + 1)]
    dec: list[list[frozenset[int]]] = []
    enc: list[dict[frozenset[int], int]] = []
    for kk in range(w + 1):
        layer = []
        for e in T.elems[kk]:
            chi = compose(injs[e.level][e.coeff], e.epi)
            layer.append(frozenset(i for i in range(1, kk + 1) if chi(i) == 1))
        dec.append(layer)
        enc.append({s: i for i, s in enumerate(layer)})

    def fail(f, op, args):
        return CheckReport(
            "boolean-hom",
            "fail",
            {"fun": f.text(), "op": op,
             "elements": [sorted(s) for s in args]},
        )

    for f in window_functions(w):
        m, n = f.dom, f.cod
        table = T.tab.tables[f]
        full_n = frozenset(range(1, n + 1))
        full_m = frozenset(range(1, m + 1))
        if dec[m][table[enc[n][frozenset()]]] != frozenset():
            return fail(f, "bottom", [])
        if dec[m][table[enc[n][full_n]]] != full_m:
            return fail(f, "top", [])
        size = T.tab.size(n)
        for i in range(size):
            si = dec[n][i]
            pre_i = dec[m][table[i]]
            if dec[m][table[enc[n][full_n - si]]] != full_m - pre_i:
                return fail(f, "complement", [si])
            for j in range(size):
                sj = dec[n][j]
                pre_j = dec[m][table[j]]
                if dec[m][table[enc[n][si | sj]]] != pre_i | pre_j:
                    return fail(f, "union", [si, sj])
                if dec[m][table[enc[n][si & sj]]] != pre_i & pre_j:
                    return fail(f, "intersection", [si, sj])
    return CheckReport("boolean-hom", "pass", details={"window": w})


def find_coeff_iso(A: InjCoeff, B: InjCoeff) -> list[tuple[int, ...]] | None:
    """A levelwise bijection A -> B commuting with every injection action,
    or None.  Backtracking over per-level permutations, bottom up."""
    if A.window != B.window or A.level_sizes() != B.level_sizes():
        return None
    w = A.window
    inj_to: dict[int, list[FinFun]] = {n: [] for n in range(w + 1)}
    for f in window_injections(w):
        inj_to[f.cod].append(f)

    def extend(n: int, chosen: list[tuple[int, ...]]):
        if n > w:
            return chosen
        for perm in itertools.permutations(range(A.size(n))):
            ok = True
            for f in inj_to[n]:
                low = perm if f.dom == n else chosen[f.dom]
                for a in range(A.size(n)):
                    if low[act_inj(A, f, a)] != act_inj(B, f, perm[a]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                result = extend(n + 1, chosen + [perm])
                if result is not None:
                    return result
        return None

    return extend(0, [])


def roundtrip_coeff(A: InjCoeff, w: int) -> CheckReport:
    """Tabulate, extract, and compare: the extracted coefficients must be
    isomorphic to the originals and the comparison map an isomorphism."""
    T = tabulate_cosan(A, w)
    ext = extract_coefficients(T.tab)
    if not ext.report.passed:
        return CheckReport("roundtrip", "fail", ext.report.witness)
    iso = find_coeff_iso(truncate_inj_coeff(A, w), ext.coeff)
    if iso is None:
        return CheckReport(
            "roundtrip",
            "fail",
            {
                "kind": "not-isomorphic",
                "expected": A.level_sizes()[: w + 1],
                "extracted": ext.coeff.level_sizes(),
            },
        )
    phi = check_phi_iso(T.tab, ext)
    if not phi.passed:
        return CheckReport("roundtrip", "fail", phi.witness)
    return CheckReport(
        "roundtrip",
        "pass",
        details={
            "sizes": T.tab.level_sizes(),
            "coeff_sizes": ext.coeff.level_sizes(),
        },
    )


def roundtrip_nat(tau: InjNat, w: int) -> CheckReport:
    """Tabulate a transformation and recover it; indices must match exactly."""
    psi = tabulate_nat(tau, w)
    try:
        tau2 = extract_nat(tau.source, tau.target, psi)
    except (NonSemicartesian, RoundTripMismatch) as exc:
        return CheckReport("roundtrip-nat", "fail", exc.witness)
    if tau2.levels[: w + 1] != tau.levels[: w + 1]:
        return CheckReport("roundtrip-nat", "fail", {"kind": "level-mismatch"})
    return CheckReport("roundtrip-nat", "pass")
