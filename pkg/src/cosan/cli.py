"""Command-line front end.

One invocation prints exactly one JSON document on standard output and
exits 0 on success or a passing check, 1 on a failing check (the report
is still printed), 2 on usage or input errors.  Given identical inputs
the output is byte-identical across runs.

Coefficient arguments accept either a file path or ``builtin:NAME`` with
NAME one of powerset, partition, constant, exp:N (injection side) and
pplus, identity (surjection side).  exp:2 / powerset elements are
displayed as subsets: membership is where the represented map takes the
value 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from random import Random

from .action import compose_extract
from .coeff import (
    InjCoeff,
    SurCoeff,
    builtin_inj_coeff,
    builtin_sur_coeff,
    inj_coeff_from_json,
    inj_coeff_to_json,
    inj_nat_to_json,
    random_inj_coeff,
    random_inj_nat,
    sur_coeff_from_json,
    sur_coeff_to_json,
)
from .cosan import cosan_map, evaluate, tabulate_cosan
from .errors import (
    CosanError,
    NonSemicartesian,
    NotNatural,
    ResourceBound,
    RoundTripMismatch,
    SchemaError,
)
from .finset import FinFun
from .tabular import (
    CheckReport,
    tab_functor_from_json,
    tab_functor_to_json,
    tab_nat_from_json,
)
from .san import check_strength_semicartesian, san_evaluate
from .verify import (
    boolean_hom_check,
    check_cocone_colimit,
    check_phi_iso,
    check_pullback_preservation,
    check_semicartesian,
    extract_coefficients,
    extract_nat,
    find_coeff_iso,
    roundtrip_coeff,
    roundtrip_nat,
    validate_tab_functor,
)

CHECK_NAMES = (
    "functor",
    "pullbacks",
    "cocone",
    "semicartesian",
    "strength",
    "boolean-hom",
    "all",
)


@dataclass
class Plan:
    command: str
    what: str | None = None
    options: dict = field(default_factory=dict)


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cosan",
        description="co-semi-analytic functor toolkit",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, **flags):
        p = sub.add_parser(name)
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag}", **kwargs)
        return p

    add(
        "eval",
        coeff={"help": "injection coefficients (file or builtin:NAME)"},
        san={"help": "surjection coefficients (file or builtin:NAME)"},
        size={"type": int, "required": True},
        window={"type": int},
    )
    add(
        "map",
        coeff={}, tab={},
        fun={"required": True, "help": 'function literal "m>n:v1,...,vm"'},
        window={"type": int},
    )
    add("tabulate", coeff={"required": True}, window={"type": int, "required": True},
        out={})
    add("extract", tab={"required": True}, out={})
    p = sub.add_parser("extract-nat")
    p.add_argument("--coeff", action="append", required=True)
    p.add_argument("--nat", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--out")
    p = sub.add_parser("check")
    p.add_argument("what", choices=CHECK_NAMES)
    p.add_argument("--tab", action="append")
    p.add_argument("--nat")
    p.add_argument("--coeff")
    p.add_argument("--san")
    p.add_argument("--at", type=int)
    p.add_argument("--window", type=int)
    add(
        "compose",
        san={"required": True},
        coeff={"required": True},
        window={"type": int, "required": True},
        cap={"type": int, "default": 10_000},
        out={},
    )
    add("builtin", coeff={}, san={}, window={"type": int, "required": True}, out={})
    p = sub.add_parser("roundtrip")
    p.add_argument("--coeff")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--random", type=int)
    p.add_argument("--seed", type=int, default=0)
    return top


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def _resolve_inj_coeff(ref: str, window: int | None) -> InjCoeff:
    if ref.startswith("builtin:"):
        if window is None:
            raise SchemaError("builtin coefficients need --window or --size")
        return builtin_inj_coeff(ref.split(":", 1)[1], window)
    return inj_coeff_from_json(_load_json(ref))


def _resolve_sur_coeff(ref: str) -> SurCoeff:
    if ref.startswith("builtin:"):
        return builtin_sur_coeff(ref.split(":", 1)[1])
    return sur_coeff_from_json(_load_json(ref))


def build_plan(argv: list[str]) -> Plan:
    """Parse arguments and resolve every referenced file against its schema."""
    ns = _parser().parse_args(argv)
    opts: dict = {}
    cmd = ns.command
    if cmd == "eval":
        if (ns.coeff is None) == (ns.san is None):
            raise SchemaError("eval needs exactly one of --coeff / --san")
        opts["size"] = ns.size
        if ns.coeff:
            w = ns.window if ns.window is not None else ns.size
            opts["coeff"] = _resolve_inj_coeff(ns.coeff, w)
            opts["coeff_spec"] = ns.coeff
        else:
            opts["san"] = _resolve_sur_coeff(ns.san)
            opts["san_spec"] = ns.san
    elif cmd == "map":
        try:
            opts["fun"] = FinFun.parse(ns.fun)
        except (ValueError, IndexError) as exc:
            raise SchemaError(f"bad function literal: {exc}") from exc
        if (ns.coeff is None) == (ns.tab is None):
            raise SchemaError("map needs exactly one of --coeff / --tab")
        if ns.coeff:
            w = ns.window if ns.window is not None else max(
                opts["fun"].dom, opts["fun"].cod
            )
            opts["coeff"] = _resolve_inj_coeff(ns.coeff, w)
            opts["coeff_spec"] = ns.coeff
        else:
            opts["tab"] = tab_functor_from_json(_load_json(ns.tab))
    elif cmd == "tabulate":
        opts["coeff"] = _resolve_inj_coeff(ns.coeff, ns.window)
        opts["window"] = ns.window
        opts["out"] = ns.out
    elif cmd == "extract":
        opts["tab"] = tab_functor_from_json(_load_json(ns.tab))
        opts["out"] = ns.out
    elif cmd == "extract-nat":
        if len(ns.coeff) != 2:
            raise SchemaError("extract-nat needs --coeff twice (source, target)")
        w = ns.window
        src = _resolve_inj_coeff(ns.coeff[0], w)
        tgt = _resolve_inj_coeff(ns.coeff[1], w)
        opts["source"], opts["target"] = src, tgt
        opts["window"] = w if w is not None else min(src.window, tgt.window)
        opts["nat_doc"] = _load_json(ns.nat)
        opts["out"] = ns.out
    elif cmd == "check":
        opts["at"] = ns.at
        opts["window"] = ns.window
        tabs = [tab_functor_from_json(_load_json(p)) for p in (ns.tab or [])]
        if ns.what in ("functor", "pullbacks", "cocone", "all"):
            if len(tabs) != 1:
                raise SchemaError(f"check {ns.what} needs exactly one --tab")
            opts["tab"] = tabs[0]
        if ns.what == "semicartesian":
            if len(tabs) != 2 or ns.nat is None:
                raise SchemaError(
                    "check semicartesian needs --tab source --tab target --nat"
                )
            opts["psi"] = tab_nat_from_json(_load_json(ns.nat), tabs[0], tabs[1])
        if ns.what == "strength":
            if ns.san is None or ns.window is None:
                raise SchemaError("check strength needs --san and --window")
            opts["san"] = _resolve_sur_coeff(ns.san)
        if ns.what == "boolean-hom" and ns.window is None:
            raise SchemaError("check boolean-hom needs --window")
        if ns.what == "all" and ns.coeff:
            opts["coeff"] = _resolve_inj_coeff(
                ns.coeff, tabs[0].window if tabs else ns.window
            )
    elif cmd == "compose":
        opts["san"] = _resolve_sur_coeff(ns.san)
        opts["coeff"] = _resolve_inj_coeff(ns.coeff, ns.window)
        opts["window"] = ns.window
        opts["cap"] = ns.cap
        opts["out"] = ns.out
    elif cmd == "builtin":
        if (ns.coeff is None) == (ns.san is None):
            raise SchemaError("builtin needs exactly one of --coeff / --san")
        if ns.coeff:
            opts["coeff"] = _resolve_inj_coeff(ns.coeff, ns.window)
        else:
            opts["san"] = _resolve_sur_coeff(ns.san)
        opts["window"] = ns.window
        opts["out"] = ns.out
    elif cmd == "roundtrip":
        opts["window"] = ns.window
        if ns.random is not None:
            opts["random"] = ns.random
            opts["seed"] = ns.seed
        elif ns.coeff:
            opts["coeff"] = _resolve_inj_coeff(ns.coeff, ns.window)
            opts["coeff_spec"] = ns.coeff
        else:
            raise SchemaError("roundtrip needs --coeff or --random")
    return Plan(cmd, getattr(ns, "what", None), opts)


def _emit(doc: dict, out: str | None = None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    print(text)


def _report_code(*reports: CheckReport) -> int:
    if any(r.result == "error" for r in reports):
        return 2
    return 0 if all(r.passed for r in reports) else 1


def execute(plan: Plan) -> int:
    """Run a resolved plan; print one JSON document; return the exit code."""
    opts = plan.options
    if plan.command == "eval":
        if "coeff" in opts:
            A = opts["coeff"]
            elems = evaluate(A, opts["size"])
            doc = {
                "kind": "cosan-eval",
                "coeff": opts["coeff_spec"],
                "size": opts["size"],
                "count": len(elems),
                "elements": [e.to_json(A) for e in elems],
            }
        else:
            B = opts["san"]
            elems = san_evaluate(B, opts["size"])
            doc = {
                "kind": "san-eval",
                "san": opts["san_spec"],
                "size": opts["size"],
                "count": len(elems),
                "elements": [e.to_json(B) for e in elems],
            }
        _emit(doc)
        return 0

    if plan.command == "map":
        f = opts["fun"]
        if "coeff" in opts:
            A = opts["coeff"]
            pairs = [
                {"from": e.to_json(A), "to": cosan_map(A, f, e).to_json(A)}
                for e in evaluate(A, f.cod)
            ]
            _emit({"kind": "cosan-map", "fun": f.text(), "pairs": pairs})
        else:
            F = opts["tab"]
            if f not in F.tables:
                raise SchemaError(f"{f.text()} is outside the tabulated window")
            _emit({
                "kind": "tab-map",
                "fun": f.text(),
                "table": [v + 1 for v in F.tables[f]],
            })
        return 0

    if plan.command == "tabulate":
        T = tabulate_cosan(opts["coeff"], opts["window"])
        _emit(tab_functor_to_json(T.tab), opts.get("out"))
        return 0

    if plan.command == "extract":
        ext = extract_coefficients(opts["tab"])
        if not ext.report.passed:
            _emit(ext.report.to_json())
            return 1
        _emit(inj_coeff_to_json(ext.coeff), opts.get("out"))
        return 0

    if plan.command == "extract-nat":
        w = opts["window"]
        src = tabulate_cosan(opts["source"], w)
        tgt = tabulate_cosan(opts["target"], w)
        psi = tab_nat_from_json(opts["nat_doc"], src.tab, tgt.tab)
        try:
            tau = extract_nat(opts["source"], opts["target"], psi)
        except (NonSemicartesian, RoundTripMismatch) as exc:
            _emit(CheckReport("extract-nat", "fail", exc.witness).to_json())
            return 1
        _emit(inj_nat_to_json(tau), opts.get("out"))
        return 0

    if plan.command == "check":
        return _execute_check(plan.what, opts)

    if plan.command == "compose":
        ext, report = compose_extract(
            opts["san"], opts["coeff"], opts["window"], opts["cap"]
        )
        if not report.passed:
            _emit(report.to_json())
            return 1
        _emit(inj_coeff_to_json(ext.coeff), opts.get("out"))
        return 0

    if plan.command == "builtin":
        if "coeff" in opts:
            _emit(inj_coeff_to_json(opts["coeff"]), opts.get("out"))
        else:
            _emit(sur_coeff_to_json(opts["san"], opts["window"]), opts.get("out"))
        return 0

    if plan.command == "roundtrip":
        w = opts["window"]
        if "random" in opts:
            rng = Random(opts["seed"])
            runs = []
            worst = "pass"
            for i in range(opts["random"]):
                A = random_inj_coeff(rng, w)
                rc = roundtrip_coeff(A, w)
                rn = roundtrip_nat(random_inj_nat(rng, A), w)
                if not (rc.passed and rn.passed):
                    worst = "fail"
                runs.append({
                    "index": i,
                    "sizes": A.level_sizes(),
                    "coeff": rc.to_json(),
                    "nat": rn.to_json(),
                })
            doc = {"check": "roundtrip-sweep", "result": worst,
                   "count": opts["random"], "seed": opts["seed"], "runs": runs}
            _emit(doc)
            return 0 if worst == "pass" else 1
        report = roundtrip_coeff(opts["coeff"], w)
        _emit(report.to_json())
        return _report_code(report)

    raise SchemaError(f"unknown command {plan.command!r}")


def _execute_check(what: str, opts: dict) -> int:
    if what == "functor":
        report = validate_tab_functor(opts["tab"])
    elif what == "pullbacks":
        report = check_pullback_preservation(opts["tab"])
    elif what == "cocone":
        F = opts["tab"]
        if opts.get("at") is not None:
            report = check_cocone_colimit(F, opts["at"])
        else:
            parts = [check_cocone_colimit(F, k) for k in range(F.window + 1)]
            failed = [p for p in parts if not p.passed]
            report = CheckReport(
                "cocone",
                "fail" if failed else "pass",
                failed[0].witness if failed else None,
                details={"levels": [p.to_json() for p in parts]},
            )
    elif what == "semicartesian":
        report = check_semicartesian(opts["psi"])
    elif what == "strength":
        report = check_strength_semicartesian(opts["san"], opts["window"])
    elif what == "boolean-hom":
        report = boolean_hom_check(opts["window"])
    elif what == "all":
        return _execute_check_all(opts)
    else:
        raise SchemaError(f"unknown check {what!r}")
    _emit(report.to_json())
    return _report_code(report)


def _execute_check_all(opts: dict) -> int:
    """Chain functor validation, both image conditions, and the comparison
    isomorphism; short-circuits on errors but not on failures."""
    F = opts["tab"]
    reports = [validate_tab_functor(F)]
    reports.append(check_pullback_preservation(F))
    for k in range(F.window + 1):
        reports.append(check_cocone_colimit(F, k))
    ext = extract_coefficients(F)
    reports.append(ext.report)
    if ext.report.passed:
        reports.append(check_phi_iso(F, ext))
        if "coeff" in opts:
            iso = find_coeff_iso(opts["coeff"], ext.coeff)
            reports.append(
                CheckReport(
                    "coefficient-iso",
                    "pass" if iso is not None else "fail",
                    None if iso is not None else {
                        "kind": "not-isomorphic",
                        "expected": opts["coeff"].level_sizes(),
                        "extracted": ext.coeff.level_sizes(),
                    },
                )
            )
    result = "pass" if all(r.passed for r in reports) else "fail"
    _emit({
        "check": "all",
        "result": result,
        "reports": [r.to_json() for r in reports],
    })
    return 0 if result == "pass" else 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = build_plan(argv)
    except SchemaError as exc:
        print(json.dumps({"error": {"kind": "schema", "message": str(exc)}},
                         indent=2))
        return 2
    try:
        return execute(plan)
    except SchemaError as exc:
        print(json.dumps({"error": {"kind": "schema", "message": str(exc)}},
                         indent=2))
        return 2
    except NotNatural as exc:
        print(json.dumps(
            CheckReport("naturality", "error", exc.witness).to_json(), indent=2
        ))
        return 2
    except ResourceBound as exc:
        print(json.dumps({"error": {"kind": "resource-bound",
                                    "message": str(exc)}}, indent=2))
        return 2
    except CosanError as exc:
        print(json.dumps({
            "error": {
                "kind": type(exc).__name__,
                "message": str(exc),
                "witness": exc.witness,
            }
        }, indent=2))
        return 2


if __name__ == "__main__":
    sys.exit(main())
