"""Command-line interface: ``effalg <command> [options]``.

Every command writes one JSON document (sorted keys, exact rationals as
"p/q" strings) to stdout or ``--out``.  Exit codes: 0 ok, 1 bad input,
2 map not finite, 3 hypothesis violated, 4 polynomial not regular in t.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, List, Optional

from gmpy2 import mpq

from . import invariants as inv
from .bertini import (
    HypothesisError,
    SmoothConeSpec,
    count_bertini,
    count_bertini_multi,
    find_bertini_witness,
    hyperplane_family,
    subspace_family,
)
from .groebner import elimination_generator
from .linear import FormSystem, ParameterError, check_independent, count_loj_proper, vandermonde_system
from .local import INFINITE
from .parse import (
    MapSpec,
    ParseError,
    SchemaError,
    load_json,
    parse_cone,
    parse_forms,
    parse_map,
    parse_polynomial,
    parse_rational,
)
from .poly import INFINITY, Polynomial, format_polynomial, rational_str

EXIT_OK, EXIT_INPUT, EXIT_NOT_FINITE, EXIT_HYPOTHESIS, EXIT_NOT_REGULAR = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation


def to_json(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if type(value).__name__ in ("mpq", "mpz", "Fraction"):
        return rational_str(mpq(value))
    if isinstance(value, float):
        if value == INFINITY:
            return "INFINITY"
        raise TypeError("floats are not allowed in result documents")
    if isinstance(value, Polynomial):
        return format_polynomial(value)
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    raise TypeError(f"cannot serialise {type(value).__name__}")


def render(doc: dict) -> str:
    return json.dumps(to_json(doc), sort_keys=True, indent=2) + "\n"


def system_doc(system: FormSystem) -> dict:
    doc = {"ambient": system.ambient_dim, "length": len(system)}
    if system.nodes is not None:
        doc["nodes"] = list(system.nodes)
    else:
        doc["rows"] = [list(r) for r in system.rows]
    return doc


def colength_value(v):
    return "INFINITE" if v == INFINITE else v


# ---------------------------------------------------------------------------
# input helpers


def _load(path: Optional[str], flag: str) -> dict:
    if not path:
        raise InputError(f"missing required option {flag}")
    try:
        return load_json(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _map(args) -> MapSpec:
    doc = _load(args.map, "--map")
    if args.degree_bound is not None:
        doc = dict(doc, degree_bound=args.degree_bound)
    return parse_map(doc)


def _nodes(args) -> Optional[List[mpq]]:
    if not args.nodes:
        return None
    return [parse_rational(x.strip()) for x in args.nodes.split(",")]


def _echo_map(f: MapSpec) -> dict:
    return {"vars": list(f.variable_names), "components": [format_polynomial(p) for p in f.components], "d": f.d}


# ---------------------------------------------------------------------------
# commands


def cmd_mult(args):
    f = _map(args)
    report = inv.multiplicity(f, _nodes(args))
    doc = {
        "command": "mult",
        "inputs": {"map": _echo_map(f), "L_system": system_doc(report.system)},
        "output": {
            "value": colength_value(report.value),
            "witness_tuple": report.witness_tuple,
            "per_tuple": [{"tuple": t, "colength": colength_value(v)} for t, v in report.per_tuple_values],
        },
    }
    if not report.finite:
        doc["output"]["status"] = "NOT_FINITE"
        return doc, EXIT_NOT_FINITE
    return doc, EXIT_OK


def _exponent_entry(e: dict) -> dict:
    return {
        "s": e["s"],
        "H": e["H"],
        "value": e["value"],
        "witness_i": e["witness_i"],
        "P": e["P"],
        "r_plus_1": e["r_plus_1"],
        "delta": e["delta"],
        "surviving": e["surviving"],
        "probed": e["probed"],
        "stopped_early": e["stopped_early"],
    }


def cmd_loj(args):
    f = _map(args)
    method = args.method or "auto"
    if method not in ("auto", "trace", "groebner"):
        raise InputError(f"unknown method {method!r} for loj")
    if args.proper:
        report = inv.lojasiewicz_proper(f, _nodes(args), method, args.jobs)
    else:
        report = inv.lojasiewicz(f, None, _nodes(args), method, args.jobs)
    doc = {
        "command": "loj",
        "inputs": {
            "map": _echo_map(f),
            "proper": bool(args.proper),
            "L_system": system_doc(report.L_system),
            "N_system": system_doc(report.N_system),
        },
        "output": {
            "value": report.value,
            "bound": f.d**f.n,
            "witness_s": report.witness_s,
            "per_s": [_exponent_entry(e) for e in report.per_s_values],
        },
    }
    return doc, EXIT_OK


def _dimension(args, f: MapSpec):
    method = args.method or "colength"
    if method == "colength":
        return inv.local_dimension(f), method
    if method == "threshold":
        return inv.local_dimension_threshold(f, jobs=args.jobs), method
    raise InputError(f"unknown method {method!r}; use colength or threshold")


def _dimension_inputs(f: MapSpec, method: str) -> dict:
    systems = {}
    for q in range(f.n):
        L, M = inv.dimension_systems(f, q)
        systems[str(q)] = {"L_system": system_doc(L), "M_system": system_doc(M)}
    doc = {"map": _echo_map(f), "method": method, "systems_by_q": systems}
    if method == "threshold":
        bound = f.d**f.n
        doc["N_system"] = system_doc(vandermonde_system(f.n, count_loj_proper(f.n, bound + 1)))
    return doc


def cmd_dim0(args):
    f = _map(args)
    dim, method = _dimension(args, f)
    doc = {"command": "dim0", "inputs": _dimension_inputs(f, method), "output": {"dim0": dim, "finite": dim == 0}}
    return doc, EXIT_OK


def cmd_finite(args):
    f = _map(args)
    dim, method = _dimension(args, f)
    doc = {"command": "finite", "inputs": _dimension_inputs(f, method), "output": {"dim0": dim, "finite": dim == 0}}
    if dim:
        doc["output"]["status"] = "NOT_FINITE"
        return doc, EXIT_NOT_FINITE
    return doc, EXIT_OK


def cmd_bertini(args):
    cone_doc = parse_cone(_load(args.cone, "--cone"))
    spec = cone_doc.spec
    if args.degree_bound is not None:
        spec = MapSpec(spec.variable_names, spec.component_sources, args.degree_bound, spec.components)
    cone = SmoothConeSpec(spec.components, cone_doc.claimed_dim, cone_doc.claimed_rank)
    m, q, d = cone.m, cone.claimed_dim, spec.d
    if q < 1:
        raise HypothesisError("the cone must have positive dimension")
    if args.mode == "multi":
        if args.s is None or not (1 <= args.s <= q - 1):
            raise InputError("multi mode needs --s with 1 <= s <= q - 1")
        length = count_bertini_multi(d, m, q)
        system = vandermonde_system(m * (q - 1), length, _nodes(args))
        family = subspace_family(system, m, q, args.s)
    else:
        length = count_bertini(d, m, q)
        system = vandermonde_system(m, length, _nodes(args))
        family = hyperplane_family(system)
    search = find_bertini_witness(cone, family, full_table=True)
    w = search.witness
    doc = {
        "command": "bertini",
        "inputs": {
            "cone": _echo_map(spec),
            "claimed_dim": q,
            "claimed_rank": cone.claimed_rank,
            "mode": args.mode,
            "s": args.s if args.mode == "multi" else 1,
            "system": system_doc(system),
        },
        "output": {
            "family_size": len(family),
            "witness": None if w is None else {"tuple": w.tuple_index, "forms": [list(f) for f in w.forms]},
            "table": [{"tuple": t, "transversal": ok} for t, ok in search.table],
        },
    }
    return doc, EXIT_OK


def cmd_delta(args):
    t = args.t
    source = args.poly
    names = _identifiers(source)
    if t not in names:
        names.append(t)
    names = sorted(n for n in names if n != t) + [t]
    P = parse_polynomial(source, names)
    value, order = inv.delta(P, t)
    doc = {
        "command": "delta",
        "inputs": {"P": P, "t": t},
        "output": {"delta": value, "r_plus_1": order, "exponent": inv.exponent_from_delta(value)},
    }
    return doc, EXIT_OK


def _identifiers(source: str) -> List[str]:
    import re

    return sorted(set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", source)))


def cmd_indep(args):
    ambient, rows, nodes = parse_forms(_load(args.forms, "--forms"))
    if rows is None:
        system = vandermonde_system(ambient, len(nodes), nodes)
    else:
        system = FormSystem(ambient, tuple(tuple(r) for r in rows))
    if len(system) < ambient:
        raise InputError("need at least as many forms as the ambient dimension")
    doc = {"command": "indep", "inputs": system_doc(system), "output": {"independent": check_independent(system)}}
    return doc, EXIT_OK


def cmd_elim(args):
    f = _map(args)
    if not args.N:
        raise InputError("elim needs the linear form N as an argument")
    N = parse_polynomial(args.N, f.variable_names)
    if N.is_zero() or not N.is_homogeneous() or N.degree() != 1:
        raise InputError("N must be a nonzero linear form")
    method = args.method or "groebner"
    image = elimination_generator(list(f.components), N, method=method)
    doc = {
        "command": "elim",
        "inputs": {"map": _echo_map(f), "N": N, "method": method},
        "output": {"P": image.P, "y": list(image.y_names), "t": image.t_name, "regular_order": image.regularity_order()},
    }
    return doc, EXIT_OK


COMMANDS = {
    "mult": cmd_mult,
    "loj": cmd_loj,
    "dim0": cmd_dim0,
    "finite": cmd_finite,
    "bertini": cmd_bertini,
    "delta": cmd_delta,
    "indep": cmd_indep,
    "elim": cmd_elim,
}


METHOD_HELP = {
    "loj": "auto, trace or groebner elimination",
    "dim0": "colength (default) or threshold",
    "finite": "colength (default) or threshold",
    "elim": "groebner (default), trace or auto",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="effalg", description="Exact local invariants of polynomial maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for independent probes")
        p.add_argument("--timing", action="store_true", help="report wall-clock time on stderr")

    for name, help_text in (
        ("mult", "multiplicity i_0(f)"),
        ("loj", "local Lojasiewicz exponent"),
        ("dim0", "local dimension of V(f) at 0"),
        ("finite", "decide finiteness of f at 0"),
        ("elim", "image polynomial of z -> (f(z), N(z))"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--map", help="map JSON file")
        p.add_argument("--degree-bound", type=int, help="override the degree bound d")
        if name in ("mult", "loj"):
            p.add_argument("--nodes", help="comma-separated nodes of the L-system (mult) or N-system (loj)")
        if name != "mult":
            p.add_argument("--method", help=METHOD_HELP[name])
        if name == "loj":
            p.add_argument("--proper", action="store_true", help="use the proper-map variant")
        if name == "elim":
            p.add_argument("N", nargs="?", help="linear form N, e.g. 'z1 + 2*z2'")
        common(p)

    p = sub.add_parser("bertini", help="effective Bertini witness search")
    p.add_argument("--cone", help="cone JSON file")
    p.add_argument("--degree-bound", type=int, help="override the degree bound d")
    p.add_argument("--nodes", help="comma-separated nodes of the form system")
    p.add_argument("--mode", choices=("hyperplane", "multi"), default="hyperplane")
    p.add_argument("--s", type=int, help="codimension of the sections in multi mode")
    common(p)

    p = sub.add_parser("delta", help="Delta(P) of a polynomial regular in t")
    p.add_argument("poly", help="polynomial text in y-variables and t")
    p.add_argument("--t", default="t", help="name of the distinguished variable")
    common(p)

    p = sub.add_parser("indep", help="check independence of a form system")
    p.add_argument("--forms", help="form-system JSON file")
    common(p)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    try:
        doc, code = COMMANDS[args.command](args)
    except (InputError, ParseError, SchemaError, ParameterError, inv.MapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except inv.NotFinite as exc:
        doc, code = {"command": args.command, "output": {"status": "NOT_FINITE", "message": str(exc)}}, EXIT_NOT_FINITE
    except HypothesisError as exc:
        doc, code = {"command": args.command, "output": {"status": "HYPOTHESIS_FAILED", "message": str(exc)}}, EXIT_HYPOTHESIS
    except inv.NotRegular as exc:
        doc = {
            "command": args.command,
            "output": {"status": "NOT_REGULAR", "message": str(exc), "P": exc.P, "t": exc.t_name},
        }
        code = EXIT_NOT_REGULAR
    text = render(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timing:
        print(f"{args.command}: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    if code == EXIT_NOT_REGULAR:
        print(f"error: {doc['output']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
