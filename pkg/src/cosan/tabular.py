"""Fully tabulated contravariant functors on a window, and check reports.

A TabFunctor stores one value set per level 0..W and one total table per
function f: (m] -> (n] with m, n <= W; the table realizes F(f): F_n -> F_m.
TabNat is a levelwise family between two tabulations.  CheckReport is the
uniform result carrier for every verification pass: name, pass/fail/error,
and a concrete witness when something goes wrong.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SchemaError
from .finset import FinFun, compose, window_functions


@dataclass
class CheckReport:
    check: str
    result: str  # "pass" | "fail" | "error"
    witness: dict | None = None
    details: dict | None = None

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def to_json(self) -> dict:
        doc = {"check": self.check, "result": self.result, "witness": self.witness}
        if self.details is not None:
            doc["details"] = self.details
        return doc


@dataclass
class TabFunctor:
    window: int
    sets: tuple[tuple[str, ...], ...]
    tables: dict[FinFun, tuple[int, ...]]

    def __post_init__(self):
        self.sets = tuple(tuple(level) for level in self.sets)
        self.tables = {f: tuple(t) for f, t in self.tables.items()}
        if len(self.sets) != self.window + 1:
            raise ValueError(
                f"need {self.window + 1} levels, got {len(self.sets)}"
            )
        needed = window_functions(self.window)
        for f in needed:
            if f not in self.tables:
                raise ValueError(f"missing table for {f.text()}")
            table = self.tables[f]
            if len(table) != len(self.sets[f.cod]):
                raise ValueError(f"table for {f.text()} has wrong length")
            for v in table:
                if not 0 <= v < len(self.sets[f.dom]):
                    raise ValueError(f"table for {f.text()} escapes level {f.dom}")
        if len(self.tables) != len(needed):
            raise ValueError("tables do not match the window functions")

    def size(self, n: int) -> int:
        return len(self.sets[n])

    def level_sizes(self) -> list[int]:
        return [len(level) for level in self.sets]

    def name(self, n: int, i: int) -> str:
        return self.sets[n][i]

    def apply(self, f: FinFun, i: int) -> int:
        return self.tables[f][i]


def validate_tab_functor(F: TabFunctor) -> CheckReport:
    """Exhaustive identity and composition check over the window."""
    funs = window_functions(F.window)
    for f in funs:
        if f.is_identity() and F.tables[f] != tuple(range(F.size(f.dom))):
            return CheckReport(
                "functor", "fail", {"kind": "identity", "fun": f.text()}
            )
    by_cod: dict[int, list[FinFun]] = {}
    for g in funs:
        by_cod.setdefault(g.cod, []).append(g)
    for f in funs:
        for g in by_cod.get(f.dom, ()):
            h = compose(f, g)
            tf, tg, th = F.tables[f], F.tables[g], F.tables[h]
            for x in range(F.size(f.cod)):
                if th[x] != tg[tf[x]]:
                    return CheckReport(
                        "functor",
                        "fail",
                        {
                            "kind": "composition",
                            "f": f.text(),
                            "g": g.text(),
                            "element": F.name(f.cod, x),
                        },
                    )
    return CheckReport("functor", "pass", details={"sizes": F.level_sizes()})


@dataclass
class TabNat:
    source: TabFunctor
    target: TabFunctor
    levels: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        self.levels = tuple(tuple(lv) for lv in self.levels)
        if self.source.window != self.target.window:
            raise ValueError("source and target windows differ")
        if len(self.levels) != self.source.window + 1:
            raise ValueError("one level map per window level required")
        for k, lv in enumerate(self.levels):
            if len(lv) != self.source.size(k):
                raise ValueError(f"level {k} map has wrong length")
            for v in lv:
                if not 0 <= v < self.target.size(k):
                    raise ValueError(f"level {k} map escapes the target")


def validate_tab_nat(psi: TabNat) -> dict | None:
    """Naturality against every window function; None when it holds."""
    F, G = psi.source, psi.target
    for f in window_functions(F.window):
        pm, pn = psi.levels[f.dom], psi.levels[f.cod]
        tf, tg = F.tables[f], G.tables[f]
        for x in range(F.size(f.cod)):
            if pm[tf[x]] != tg[pn[x]]:
                return {
                    "kind": "naturality",
                    "fun": f.text(),
                    "element": F.name(f.cod, x),
                }
    return None


# ---------------------------------------------------------------------------
# JSON forms


def tab_functor_to_json(F: TabFunctor) -> dict:
    return {
        "kind": "tab-functor",
        "window": F.window,
        "sets": [list(level) for level in F.sets],
        "maps": [
            {"fun": f.text(), "table": [v + 1 for v in F.tables[f]]}
            for f in window_functions(F.window)
        ],
    }


def tab_functor_from_json(doc: dict) -> TabFunctor:
    if not isinstance(doc, dict) or doc.get("kind") != "tab-functor":
        raise SchemaError("expected a tab-functor document")
    window = doc.get("window")
    sets = doc.get("sets")
    if not isinstance(window, int) or window < 0:
        raise SchemaError("window must be a natural number")
    if not isinstance(sets, list) or len(sets) != window + 1:
        raise SchemaError("sets must list one level per window level")
    maps = doc.get("maps")
    if not isinstance(maps, list):
        raise SchemaError("maps must be a list")
    tables: dict[FinFun, tuple[int, ...]] = {}
    for entry in maps:
        try:
            f = FinFun.parse(entry["fun"])
            tables[f] = tuple(int(v) - 1 for v in entry["table"])
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad map entry: {exc}") from exc
    try:
        return TabFunctor(window, tuple(tuple(level) for level in sets), tables)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def tab_nat_to_json(psi: TabNat) -> dict:
    return {
        "kind": "tab-nat",
        "levels": [[v + 1 for v in lv] for lv in psi.levels],
    }


def tab_nat_from_json(doc: dict, source: TabFunctor, target: TabFunctor) -> TabNat:
    if not isinstance(doc, dict) or doc.get("kind") != "tab-nat":
        raise SchemaError("expected a tab-nat document")
    levels = doc.get("levels")
    if not isinstance(levels, list):
        raise SchemaError("tab-nat needs a list of levels")
    try:
        return TabNat(
            source, target, tuple(tuple(v - 1 for v in lv) for lv in levels)
        )
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad tab-nat levels: {exc}") from exc
