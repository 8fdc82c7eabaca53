"""Coefficient functors.

``InjCoeff`` is a contravariant functor on injections between canonical
finite sets, truncated at a window: one ordered set of element names per
level plus a full action table per injection.  ``SurCoeff`` is the
covariant counterpart on surjections, either tabulated or generated by a
named rule so levels beyond any fixed window stay available (the
composition action needs them).  Element identity is (level, index);
names are display metadata only.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .errors import (
    IndexOutOfRange,
    LevelUnavailable,
    NotInjective,
    NotSurjective,
    OutOfWindow,
    SchemaError,
)
from .finset import (
    FinFun,
    UnionFind,
    compose,
    enumerate_functions,
    window_injections,
    window_surjections,
)


@dataclass
class InjCoeff:
    """Sets A_0..A_W plus one table per injection f: (n] -> (m], n <= m <= W.

    The table for f maps A_m -> A_n (contravariance), as 0-based indices.
    Construction checks shape only; the functor laws are the job of
    validate_inj_coeff, so deliberately broken tables remain constructible
    for mutation tests.
    """

    window: int
    sets: tuple[tuple[str, ...], ...]
    action: dict[FinFun, tuple[int, ...]]

    def __post_init__(self):
        self.sets = tuple(tuple(level) for level in self.sets)
        self.action = {f: tuple(t) for f, t in self.action.items()}
        if len(self.sets) != self.window + 1:
            raise ValueError(
                f"need {self.window + 1} levels, got {len(self.sets)}"
            )
        needed = window_injections(self.window)
        for f in needed:
            if f not in self.action:
                raise ValueError(f"missing action table for {f.text()}")
            table = self.action[f]
            if len(table) != len(self.sets[f.cod]):
                raise ValueError(f"table for {f.text()} has wrong length")
            for v in table:
                if not 0 <= v < len(self.sets[f.dom]):
                    raise ValueError(f"table for {f.text()} escapes level {f.dom}")
        if len(self.action) != len(needed):
            raise ValueError("action tables do not match the window injections")

    def size(self, n: int) -> int:
        return len(self.sets[n])

    def level_sizes(self) -> list[int]:
        return [len(level) for level in self.sets]

    def name(self, n: int, a: int) -> str:
        return self.sets[n][a]


def act_inj(A: InjCoeff, f: FinFun, a: int) -> int:
    """The contravariant action a . f, by table lookup.

    f: (n] -> (m] injective sends a in A_m to an element of A_n.
    """
    if not f.is_injective():
        raise NotInjective(f"{f.text()} is not injective")
    if f.cod > A.window:
        raise OutOfWindow(f"{f.text()} exceeds window {A.window}")
    table = A.action[f]
    if not 0 <= a < len(table):
        raise IndexOutOfRange(f"no element {a} at level {f.cod}")
    return table[a]


def validate_inj_coeff(A: InjCoeff) -> dict | None:
    """Exhaustive identity and contravariant-composition check.

    Returns None when every law holds, else a witness naming the first
    violating injection (pair).
    """
    injections = window_injections(A.window)
    for f in injections:
        if f.is_identity() and A.action[f] != tuple(range(A.size(f.dom))):
            return {"kind": "identity", "fun": f.text()}
    by_cod: dict[int, list[FinFun]] = {}
    for g in injections:
        by_cod.setdefault(g.cod, []).append(g)
    for f in injections:
        # A(f.g) = A(g).A(f) for g landing in dom(f)
        for g in by_cod.get(f.dom, ()):
            h = compose(f, g)
            tf, tg, th = A.action[f], A.action[g], A.action[h]
            for a in range(A.size(f.cod)):
                if th[a] != tg[tf[a]]:
                    return {
                        "kind": "composition",
                        "f": f.text(),
                        "g": g.text(),
                        "element": A.name(f.cod, a),
                    }
    return None


def builtin_inj_coeff(name: str, window: int) -> InjCoeff:
    """Built-in coefficient functors.

    exp:n      level m holds the injections (m] -> (n], acting by
               precomposition (the coefficients of the functor X |-> (n]^X)
    powerset   exp:2 with elements displayed as the subsets where the
               represented map takes the value 1
    partition  one element at every level (equivalence relations)
    constant   a point at levels 0 and 1, empty above
    """
    if name.startswith("exp:"):
        return _representable(int(name.split(":", 1)[1]), window)
    if name == "powerset":
        base = _representable(2, window)
        sets = tuple(
            tuple(_subset_name(FinFun.parse(t)) for t in level)
            for level in base.sets
        )
        return InjCoeff(window, sets, base.action)
    if name == "partition":
        sets = tuple(("*",) for _ in range(window + 1))
        action = {f: (0,) for f in window_injections(window)}
        return InjCoeff(window, sets, action)
    if name == "constant":
        sets = tuple(("*",) if n <= 1 else () for n in range(window + 1))
        action = {
            f: (0,) if f.cod <= 1 else ()
            for f in window_injections(window)
        }
        return InjCoeff(window, sets, action)
    raise ValueError(f"unknown builtin coefficient {name!r}")


def _representable(n: int, window: int) -> InjCoeff:
    levels = [enumerate_functions("inj", m, n) for m in range(window + 1)]
    index = [{f: i for i, f in enumerate(lv)} for lv in levels]
    sets = tuple(tuple(f.text() for f in lv) for lv in levels)
    action = {
        f: tuple(index[f.dom][compose(a, f)] for a in levels[f.cod])
        for f in window_injections(window)
    }
    return InjCoeff(window, sets, action)


def _subset_name(a: FinFun) -> str:
    members = [str(i) for i in range(1, a.dom + 1) if a(i) == 1]
    return "{" + ",".join(members) + "}"


class SurCoeff:
    """Covariant coefficients B: one set per level, acting along surjections.

    Tabulated instances carry explicit tables up to a window.  Rule
    instances ("pplus", "identity") generate any level on demand and are
    memoized, which is what the composition action needs: it asks for
    levels as large as the evaluated set it feeds in.
    """

    def __init__(self, *, rule=None, window=None, sets=None, action=None):
        self.rule = rule
        self.window = window
        self._sets = {}
        self._action = {}
        if rule is None:
            sets = tuple(tuple(level) for level in sets)
            if len(sets) != window + 1:
                raise ValueError(f"need {window + 1} levels, got {len(sets)}")
            for n, level in enumerate(sets):
                self._sets[n] = level
            for s in window_surjections(window):
                if s not in action:
                    raise ValueError(f"missing action table for {s.text()}")
                table = tuple(action[s])
                if len(table) != len(sets[s.dom]):
                    raise ValueError(f"table for {s.text()} has wrong length")
                for v in table:
                    if not 0 <= v < len(sets[s.cod]):
                        raise ValueError(f"table for {s.text()} escapes level {s.cod}")
                self._action[s] = table
        elif rule not in ("pplus", "identity"):
            raise ValueError(f"unknown rule {rule!r}")

    @classmethod
    def tabulated(cls, window: int, sets, action) -> "SurCoeff":
        return cls(window=window, sets=sets, action=action)

    @classmethod
    def from_rule(cls, name: str) -> "SurCoeff":
        return cls(rule=name)

    def level(self, n: int) -> tuple[str, ...]:
        if n in self._sets:
            return self._sets[n]
        if self.rule is None:
            raise LevelUnavailable(f"level {n} beyond window {self.window}")
        if self.rule == "pplus":
            names = ("*",) if n >= 1 else ()
        else:  # identity
            names = ("*",) if n == 1 else ()
        self._sets[n] = names
        return names

    def act(self, s: FinFun, b: int) -> int:
        if not s.is_surjective():
            raise NotSurjective(f"{s.text()} is not surjective")
        if not 0 <= b < len(self.level(s.dom)):
            raise IndexOutOfRange(f"no element {b} at level {s.dom}")
        if self.rule is None:
            if s.dom > self.window:
                raise LevelUnavailable(f"{s.text()} beyond window {self.window}")
            return self._action[s][b]
        # both rules have at most a point per level
        if not self.level(s.cod):
            raise LevelUnavailable(f"level {s.cod} is empty under {self.rule}")
        return 0


def act_sur(B: SurCoeff, s: FinFun, b: int) -> int:
    return B.act(s, b)


def builtin_sur_coeff(name: str) -> SurCoeff:
    """pplus: nonempty-finite-powerset coefficients; identity: the identity functor."""
    if name in ("pplus", "identity"):
        return SurCoeff.from_rule(name)
    raise ValueError(f"unknown builtin coefficient {name!r}")


@dataclass
class InjNat:
    """A levelwise family tau_n: A_n -> B_n between two InjCoeff values.

    A level may be None, representing a family that is undefined there;
    validation flags that, and applying such a family at a missing level
    raises IllTyped.
    """

    source: InjCoeff
    target: InjCoeff
    levels: tuple[tuple[int, ...] | None, ...]

    def __post_init__(self):
        self.levels = tuple(
            None if lv is None else tuple(lv) for lv in self.levels
        )
        if self.source.window != self.target.window:
            raise ValueError("source and target windows differ")
        if len(self.levels) != self.source.window + 1:
            raise ValueError("one level map per window level required")
        for n, lv in enumerate(self.levels):
            if lv is None:
                continue
            if len(lv) != self.source.size(n):
                raise ValueError(f"level {n} map has wrong length")
            for v in lv:
                if not 0 <= v < self.target.size(n):
                    raise ValueError(f"level {n} map escapes the target")


def validate_inj_nat(tau: InjNat) -> dict | None:
    """Totality plus naturality against every window injection."""
    for n, lv in enumerate(tau.levels):
        if lv is None:
            return {"kind": "partial", "level": n}
    A, B = tau.source, tau.target
    for f in window_injections(A.window):
        tn, tm = tau.levels[f.dom], tau.levels[f.cod]
        for a in range(A.size(f.cod)):
            if tn[act_inj(A, f, a)] != act_inj(B, f, tm[a]):
                return {
                    "kind": "naturality",
                    "fun": f.text(),
                    "element": A.name(f.cod, a),
                }
    return None


def truncate_inj_coeff(A: InjCoeff, w: int) -> InjCoeff:
    """Restrict to a smaller window (a no-op when w equals the window)."""
    if w > A.window:
        raise OutOfWindow(f"window {w} beyond coefficient window {A.window}")
    if w == A.window:
        return A
    return InjCoeff(
        w,
        tuple(A.sets[: w + 1]),
        {f: A.action[f] for f in window_injections(w)},
    )


def identity_inj_nat(A: InjCoeff) -> InjNat:
    return InjNat(A, A, tuple(tuple(range(A.size(n))) for n in range(A.window + 1)))


def compose_inj_nat(second: InjNat, first: InjNat) -> InjNat:
    if second.source is not first.target and second.source.sets != first.target.sets:
        raise ValueError("transformations are not composable")
    levels = tuple(
        tuple(second.levels[n][v] for v in first.levels[n])
        for n in range(first.source.window + 1)
    )
    return InjNat(first.source, second.target, levels)


def yoneda_inj_nat(j: FinFun, window: int) -> InjNat:
    """The transformation exp:dom(j) -> exp:cod(j) given by postcomposition with j."""
    if not j.is_injective():
        raise NotInjective(f"{j.text()} is not injective")
    source = _representable(j.dom, window)
    target = _representable(j.cod, window)
    tgt_levels = [enumerate_functions("inj", m, j.cod) for m in range(window + 1)]
    tgt_index = [{f: i for i, f in enumerate(lv)} for lv in tgt_levels]
    src_levels = [enumerate_functions("inj", m, j.dom) for m in range(window + 1)]
    levels = tuple(
        tuple(tgt_index[m][compose(j, u)] for u in src_levels[m])
        for m in range(window + 1)
    )
    return InjNat(source, target, levels)


def sum_inj_coeff(A: InjCoeff, B: InjCoeff) -> tuple[InjCoeff, InjNat, InjNat]:
    """Levelwise disjoint union, with the two inclusion transformations."""
    if A.window != B.window:
        raise ValueError("windows differ")
    w = A.window
    sets = tuple(
        tuple(f"L:{s}" for s in A.sets[n]) + tuple(f"R:{s}" for s in B.sets[n])
        for n in range(w + 1)
    )
    action = {}
    for f in window_injections(w):
        shift = A.size(f.dom)
        action[f] = A.action[f] + tuple(v + shift for v in B.action[f])
    S = InjCoeff(w, sets, action)
    inc_a = InjNat(A, S, tuple(tuple(range(A.size(n))) for n in range(w + 1)))
    inc_b = InjNat(
        B, S,
        tuple(tuple(A.size(n) + i for i in range(B.size(n))) for n in range(w + 1)),
    )
    return S, inc_a, inc_b


def quotient_inj_coeff(
    A: InjCoeff, pairs: list[tuple[int, int, int]]
) -> tuple[InjCoeff, InjNat]:
    """Quotient A by the congruence generated by (level, i, j) pairs.

    The closure propagates every identification along every injection
    action until stable, so the quotient inherits functoriality.  Returns
    the quotient and the projection transformation.
    """
    w = A.window
    ufs = [UnionFind(A.size(n)) for n in range(w + 1)]
    for n, i, j in pairs:
        ufs[n].union(i, j)
    injections = window_injections(w)
    changed = True
    while changed:
        changed = False
        for f in injections:
            table = A.action[f]
            groups: dict[int, list[int]] = {}
            for a in range(A.size(f.cod)):
                groups.setdefault(ufs[f.cod].find(a), []).append(a)
            for members in groups.values():
                first = table[members[0]]
                for a in members[1:]:
                    if ufs[f.dom].union(first, table[a]):
                        changed = True
    reps: list[list[int]] = []
    cls: list[dict[int, int]] = []
    for n in range(w + 1):
        seen: dict[int, int] = {}
        reps_n = []
        cls_n = {}
        for a in range(A.size(n)):
            root = ufs[n].find(a)
            if root not in seen:
                seen[root] = len(reps_n)
                reps_n.append(a)
            cls_n[a] = seen[root]
        reps.append(reps_n)
        cls.append(cls_n)
    sets = tuple(
        tuple(A.name(n, a) for a in reps[n]) for n in range(w + 1)
    )
    action = {
        f: tuple(cls[f.dom][A.action[f][a]] for a in reps[f.cod])
        for f in injections
    }
    Q = InjCoeff(w, sets, action)
    proj = InjNat(
        A, Q, tuple(tuple(cls[n][a] for a in range(A.size(n))) for n in range(w + 1))
    )
    return Q, proj


def random_inj_coeff(
    rng: Random, window: int = 3, max_level_size: int = 2
) -> InjCoeff:
    """A random valid coefficient functor, by free completion.

    Pick representable generators, form their sum (free, so functorial by
    construction), quotient by a random congruence, then keep merging
    pairs at overfull levels until every level fits max_level_size.
    Quotients of sums of representables reach every functor, so the
    sample space is not artificially thin.
    """
    gens = [rng.randint(0, window) for _ in range(rng.randint(1, 2))]
    A = _representable(gens[0], window)
    for lv in gens[1:]:
        A, _, _ = sum_inj_coeff(A, _representable(lv, window))
    pairs = []
    for _ in range(rng.randint(0, 4)):
        candidates = [n for n in range(window + 1) if A.size(n) >= 2]
        if not candidates:
            break
        n = rng.choice(candidates)
        i, j = rng.sample(range(A.size(n)), 2)
        pairs.append((n, i, j))
    A, _ = quotient_inj_coeff(A, pairs)
    while True:
        overfull = [n for n in range(window + 1) if A.size(n) > max_level_size]
        if not overfull:
            return A
        n = overfull[-1]
        i, j = rng.sample(range(A.size(n)), 2)
        A, _ = quotient_inj_coeff(A, [(n, i, j)])


def random_inj_nat(rng: Random, A: InjCoeff) -> InjNat:
    """A random valid transformation out of A: a quotient projection, an
    inclusion into a sum, or the composite of both."""
    mode = rng.choice(("quotient", "inclusion", "both"))
    tau = identity_inj_nat(A)
    if mode in ("quotient", "both"):
        pairs = []
        for _ in range(rng.randint(1, 3)):
            candidates = [n for n in range(A.window + 1) if A.size(n) >= 2]
            if not candidates:
                break
            n = rng.choice(candidates)
            i, j = rng.sample(range(A.size(n)), 2)
            pairs.append((n, i, j))
        _, proj = quotient_inj_coeff(A, pairs)
        tau = proj
    if mode in ("inclusion", "both"):
        extra = random_inj_coeff(rng, A.window)
        _, inc, _ = sum_inj_coeff(tau.target, extra)
        tau = compose_inj_nat(inc, tau)
    return tau


# ---------------------------------------------------------------------------
# JSON forms


def inj_coeff_to_json(A: InjCoeff) -> dict:
    return {
        "kind": "inj-coeff",
        "window": A.window,
        "sets": [list(level) for level in A.sets],
        "maps": [
            {"fun": f.text(), "table": [v + 1 for v in A.action[f]]}
            for f in window_injections(A.window)
        ],
    }


def inj_coeff_from_json(doc: dict) -> InjCoeff:
    _expect_kind(doc, "inj-coeff")
    window, sets = _read_sets(doc)
    action = _read_maps(doc, sets, window_injections(window), contravariant=True)
    try:
        return InjCoeff(window, sets, action)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def sur_coeff_to_json(B: SurCoeff, window: int) -> dict:
    return {
        "kind": "sur-coeff",
        "window": window,
        "sets": [list(B.level(n)) for n in range(window + 1)],
        "maps": [
            {"fun": s.text(), "table": [B.act(s, b) + 1 for b in range(len(B.level(s.dom)))]}
            for s in window_surjections(window)
        ],
    }


def sur_coeff_from_json(doc: dict) -> SurCoeff:
    _expect_kind(doc, "sur-coeff")
    window, sets = _read_sets(doc)
    action = _read_maps(doc, sets, window_surjections(window), contravariant=False)
    try:
        return SurCoeff.tabulated(window, sets, action)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def inj_nat_to_json(tau: InjNat) -> dict:
    return {
        "kind": "inj-nat",
        "levels": [None if lv is None else [v + 1 for v in lv] for lv in tau.levels],
    }


def inj_nat_from_json(doc: dict, source: InjCoeff, target: InjCoeff) -> InjNat:
    _expect_kind(doc, "inj-nat")
    levels = doc.get("levels")
    if not isinstance(levels, list):
        raise SchemaError("inj-nat needs a list of levels")
    try:
        return InjNat(
            source,
            target,
            tuple(
                None if lv is None else tuple(v - 1 for v in lv) for lv in levels
            ),
        )
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad inj-nat levels: {exc}") from exc


def _expect_kind(doc: dict, kind: str):
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise SchemaError(f"expected a {kind} document")


def _read_sets(doc: dict) -> tuple[int, tuple[tuple[str, ...], ...]]:
    window = doc.get("window")
    sets = doc.get("sets")
    if not isinstance(window, int) or window < 0:
        raise SchemaError("window must be a natural number")
    if not isinstance(sets, list) or len(sets) != window + 1:
        raise SchemaError("sets must list one level per window level")
    for level in sets:
        if not isinstance(level, list) or not all(isinstance(s, str) for s in level):
            raise SchemaError("each level must be a list of names")
    return window, tuple(tuple(level) for level in sets)


def _read_maps(doc, sets, funs, contravariant: bool) -> dict[FinFun, tuple[int, ...]]:
    maps = doc.get("maps")
    if not isinstance(maps, list):
        raise SchemaError("maps must be a list")
    by_fun: dict[FinFun, tuple[int, ...]] = {}
    for entry in maps:
        try:
            f = FinFun.parse(entry["fun"])
            table = tuple(int(v) - 1 for v in entry["table"])
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad map entry: {exc}") from exc
        by_fun[f] = table
    for f in funs:
        if f not in by_fun:
            raise SchemaError(f"missing table for {f.text()}")
        src = f.cod if contravariant else f.dom
        tgt = f.dom if contravariant else f.cod
        table = by_fun[f]
        if len(table) != len(sets[src]):
            raise SchemaError(f"table for {f.text()} has wrong length")
        if any(not 0 <= v < len(sets[tgt]) for v in table):
            raise SchemaError(f"table for {f.text()} is out of range")
    if len(by_fun) != len(funs):
        raise SchemaError("maps must cover exactly the window functions")
    return by_fun
