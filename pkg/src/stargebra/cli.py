"""Command-line frontend: ``stargebra <command> [options]``.

Exit codes: 0 success, 1 unreadable or malformed input, 2 violated
precondition, 3 numerical failure or failed property check.
"""

import argparse
import json
import sys

import numpy as np

from . import checks
from .algebra import algebra_from_basis
from .commutant import bicommutant, commutant, wstar
from .errors import NotPositiveError, NumericalError, PreconditionError
from .evolution import evolve, ivp_residual
from .gelfand import characters, gelfand_transform
from .io import (
    InputError,
    algebra_from_json,
    array_to_json,
    complex_to_json,
    functional_matrix_from_json,
    load_json,
    matrix_input,
    rational_from_json,
    rep_from_json,
    vector_from_json,
)
from .linalg import op_norm
from .measures import resolve_normal, vector_measure
from .spectral import (
    abs_value,
    functional_calculus,
    polar_factorize,
    positive_sqrt,
    ptak,
    rational_apply,
    spectral_radius_limit,
    spectrum,
)
from .states import Functional, classify_state, decompose_cyclic, gns, is_positive, variation

FUNCTIONS = {
    "exp": np.exp,
    "cos": np.cos,
    "sin": np.sin,
    "log": np.log,
    "conj": np.conj,
}


def cmd_spectrum(args):
    a = matrix_input(load_json(args.input))
    sp = spectrum(a, args.tol)
    return {
        "eigenvalues": [complex_to_json(z) for z in sp],
        "spectral_radius": sp.radius,
        "spectral_radius_limit": spectral_radius_limit(a, args.k),
        "squarings": args.k,
        "ptak": ptak(a),
        "norm": op_norm(a),
    }


def cmd_calculus(args):
    a = matrix_input(load_json(args.input))
    if args.rational:
        out = rational_apply(a, rational_from_json(load_json(args.rational)))
        name = "rational"
    elif args.fn == "sqrt":
        out, name = positive_sqrt(a, args.tol), "sqrt"
    elif args.fn == "abs":
        out, name = abs_value(a, args.tol), "abs"
    elif args.fn == "polar":
        u, p = polar_factorize(a, args.tol)
        return {"function": "polar", "u": array_to_json(u), "abs": array_to_json(p),
                "residual": op_norm(a - u @ p) / max(op_norm(a), 1e-300)}
    else:
        out, name = functional_calculus(a, FUNCTIONS[args.fn], args.tol), args.fn
    return {"function": name, "result": array_to_json(out),
            "spectrum": [complex_to_json(z) for z in spectrum(out, args.tol)]}


def cmd_gelfand(args):
    alg, gens = algebra_from_json(load_json(args.input), args.tol)
    chars = characters(alg, seed=args.seed)
    return {
        "dim": alg.dim,
        "characters": array_to_json(chars.values),
        "generator_values": array_to_json([chars.evaluate(g) for g in gens]),
        "transforms": array_to_json([gelfand_transform(alg.coords(g), chars) for g in gens]),
    }


def _full_matrix_algebra(n):
    units = np.zeros((n * n, n, n), dtype=complex)
    for k in range(n * n):
        units[k].flat[k] = 1
    return algebra_from_basis(units, unital=True)


def cmd_gns(args):
    doc = load_json(args.input)
    f = functional_matrix_from_json(doc)
    if args.algebra:
        alg, _ = algebra_from_json(load_json(args.algebra), args.tol)
    elif "generators" in doc or "group" in doc:
        alg, _ = algebra_from_json(doc, args.tol)
    else:
        alg = _full_matrix_algebra(f.shape[0])
    phi = Functional(f, alg)
    if not is_positive(phi, args.tol):
        raise NotPositiveError("gns: φ positive", "Gram matrix φ(b_i* b_j) is not positive semidefinite")
    res = gns(phi, args.tol)
    report = classify_state(phi, args.tol)
    return {
        "quotient_dim": res.quotient_dim,
        "rep": array_to_json(res.rep),
        "cyclic_vector": array_to_json(res.cyclic_vector),
        "variation": variation(phi, args.tol),
        "is_state": report.is_state,
        "is_pure": report.is_pure,
        "commutant_dim": report.commutant_dim,
    }


def cmd_decompose(args):
    rep = rep_from_json(load_json(args.input))
    pieces = decompose_cyclic(rep, seed=args.seed)
    return {
        "dims": [int(b.shape[1]) for b, _ in pieces],
        "pieces": [{"basis": array_to_json(b), "cyclic_vector": array_to_json(x)} for b, x in pieces],
    }


def cmd_commutant(args):
    alg, gens = algebra_from_json(load_json(args.input), args.tol)
    s1 = commutant(gens, alg.ambient_dim)
    s2 = bicommutant(gens, alg.ambient_dim)
    w = wstar(gens, alg.ambient_dim)
    maximal = bool(alg.is_commutative(1e-9) and s1.dim == alg.dim and s1.angle(alg) <= 1e-8)
    return {
        "algebra_dim": alg.dim,
        "commutant_dim": s1.dim,
        "bicommutant_dim": s2.dim,
        "wstar_dim": w.dim,
        "maximal_commutative": maximal,
    }


def cmd_resolve(args):
    b = matrix_input(load_json(args.input))
    res = resolve_normal(b, args.tol)
    recon = sum(p * q for p, q in zip(res.points, res.projections))
    out = {
        "points": [complex_to_json(p) for p in res.points],
        "ranks": [int(r) for r in res.ranks],
        "reconstruction_error": op_norm(b - recon),
    }
    if args.vector:
        mu = vector_measure(res, vector_from_json(load_json(args.vector)))
        out["vector_measure"] = [float(w) for w in mu.weights]
    return out


def _parse_times(text):
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError as exc:
        raise InputError(f"--times: {exc}") from exc
    if len(parts) == 1:
        return np.array(parts)
    if len(parts) != 3 or parts[2] <= 0:
        raise InputError("--times must be T or START:STOP:STEP with STEP > 0")
    start, stop, step = parts
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(max(count, 0))


def cmd_evolve(args):
    a = matrix_input(load_json(args.a))
    x = vector_from_json(load_json(args.x))
    ts = _parse_times(args.times)
    states = evolve(a, x, ts, args.tol)
    x0 = np.linalg.norm(x)
    rows = []
    for t, y in zip(ts, states):
        rows.append({
            "t": float(t),
            "state": [complex_to_json(z) for z in y],
            "norm_deviation": abs(float(np.linalg.norm(y)) - x0),
            "ivp_residual": ivp_residual(a, x, t, args.h, args.tol),
        })
    return {"h": args.h, "rows": rows}


def cmd_check(args):
    results = checks.run_checks(seed=args.seed, cases=args.cases, workers=args.workers)
    passed = sum(r.passed for r in results)
    return {
        "passed": passed,
        "failed": len(results) - passed,
        "total": len(results),
        "seed": args.seed,
        "cases": args.cases,
        "properties": {r.name: {"passed": r.passed, "residuals": r.residuals,
                                "thresholds": r.thresholds} for r in results},
    }


DEFAULT_TOL = {"resolve": 1e-8}


def _global_flags(parser, suppress):
    # subparsers must not overwrite flags given before the command name
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(None), help="numerical tolerance")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized steps")
    parser.add_argument("--output", choices=("json", "text"), default=d("json"))
    parser.add_argument("--k", type=int, default=d(30), help="squaring depth for the spectral radius limit")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    parser = argparse.ArgumentParser(prog="stargebra",
                                     description="Spectral theory of finite-dimensional *-algebras.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum, spectral radius, Pták function")
    p.add_argument("input")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("calculus", parents=[common], help="functional calculus of a matrix")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fn", choices=sorted(FUNCTIONS) + ["abs", "polar", "sqrt"])
    g.add_argument("--rational", help="JSON {'num': [...], 'den': [...]}, ascending coefficients")
    p.set_defaults(func=cmd_calculus)

    p = sub.add_parser("gelfand", parents=[common], help="characters and Gelfand transforms")
    p.add_argument("input")
    p.set_defaults(func=cmd_gelfand)

    p = sub.add_parser("gns", parents=[common], help="GNS representation of a functional")
    p.add_argument("input")
    p.add_argument("--algebra", help="algebra JSON; defaults to the full matrix algebra")
    p.set_defaults(func=cmd_gns)

    p = sub.add_parser("decompose", parents=[common], help="cyclic decomposition of a representation")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("commutant", parents=[common], help="commutant, bicommutant, generated W*-algebra")
    p.add_argument("input")
    p.set_defaults(func=cmd_commutant)

    p = sub.add_parser("resolve", parents=[common], help="spectral resolution of a normal matrix")
    p.add_argument("input")
    p.add_argument("--vector", help="vector JSON; adds the vector measure ||P_i x||^2")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("evolve", parents=[common], help="unitary evolution exp(-ita) x")
    p.add_argument("--a", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--times", default="0:1:0.1", help="T or START:STOP:STEP")
    p.add_argument("--h", type=float, default=1e-4, help="step for the IVP residual")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("check", parents=[common], help="run the property-check suite")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_check)
    return parser


def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{prefix}{k}:")
                lines.extend(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{prefix}[{i}]")
                lines.extend(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}[{i}] {json.dumps(v)}")
    return lines


def _flat(v):
    """Lists of scalars or of ``[re, im]`` pairs stay on one line."""
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (len(x) == 2 and all(isinstance(y, float) for y in x))
               for x in v)


def render(result, fmt):
    if fmt == "json":
        return json.dumps(result, sort_keys=True)
    return "\n".join(_text(result))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        args.tol = DEFAULT_TOL.get(args.command, 1e-10)
    try:
        result = args.func(args)
    except (InputError, OSError) as exc:
        print(f"stargebra: input error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError) as exc:
        print(f"stargebra: input error: missing or malformed field {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"stargebra: precondition violated: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"stargebra: numerical failure: {exc}", file=sys.stderr)
        return 3
    print(render(result, args.output))
    if args.command == "check" and result["failed"]:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
