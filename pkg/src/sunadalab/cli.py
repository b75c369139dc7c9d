"""Batch command line front end.

Four subcommands: ``group-info`` summarizes a group file, ``gassmann``
certifies or searches for almost conjugate subgroup pairs, ``sunada``
runs the full Cayley-graph pipeline on a triple, and ``heat`` evaluates
flat-model indicators and the audibility chain.  All reports are JSON
with sorted keys and floats normalized to 15 significant digits, so a
fixed invocation produces byte-identical output.  Exit codes: 0 success,
2 parse failure, 3 precondition failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import chartab, gassmann, heatkit, quotspec
from .errors import (
    NumericalError,
    ParseError,
    PreconditionError,
    SunadaLabError,
)
from .permgrp import (
    DEFAULT_MAX_ORDER,
    DEFAULT_SUBGROUP_BUDGET,
    cycle_string,
    load_group_file,
    load_subgroup_file,
    parse_cycles,
    subgroup_generate,
)

ENV_PREFIX = "SUNADALAB_"


def _env(name, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        return fallback


def round15(x):
    x = float(f"{float(x):.15g}")
    return 0.0 if x == 0 else x


def _normalize(obj):
    """Make a report JSON-ready: plain types only, floats at 15 digits."""
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round15(obj)
    if isinstance(obj, np.ndarray):
        return [_normalize(v) for v in obj.tolist()]
    return obj


def _emit(report, out_path):
    text = json.dumps(_normalize(report), sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum_pairs(decomp):
    return [[round15(v), int(m)] for v, m in decomp.clusters]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_group_info(args):
    G = load_group_file(args.group, max_order=args.max_order)
    cc = chartab.conjugacy_classes(G)
    ct = chartab.character_table(G, seed=args.seed)
    table_rows = [
        [chartab.format_complex(z) for z in ct.table[r]]
        for r in range(ct.num_irreps)
    ]
    report = {
        "command": "group-info",
        "group_file": args.group,
        "degree": G.degree,
        "order": G.order,
        "num_classes": cc.num_classes,
        "class_sizes": list(cc.class_sizes),
        "class_representatives": [
            cycle_string(G.elements[r]) for r in cc.representatives
        ],
        "irrep_degrees": list(ct.degrees),
        "character_table": table_rows,
    }
    _emit(report, args.out)
    return 0


def cmd_gassmann(args):
    G = load_group_file(args.group, max_order=args.max_order)
    if args.search is not None:
        if args.h1 or args.h2:
            raise PreconditionError("--search replaces the subgroup files")
        pairs = gassmann.gassmann_search(G, args.search, budget=args.budget)
        reports = [gassmann.triple_report(G, h1, h2).to_json_dict() for h1, h2 in pairs]
        report = {
            "command": "gassmann",
            "group_file": args.group,
            "group_order": G.order,
            "subgroup_order": args.search,
            "num_pairs": len(reports),
            "pairs": reports,
        }
        _emit(report, args.out)
        return 0
    if not (args.h1 and args.h2):
        raise PreconditionError("need two subgroup files or --search m")
    H1 = load_subgroup_file(args.h1, G)
    H2 = load_subgroup_file(args.h2, G)
    _emit(gassmann.triple_report(G, H1, H2).to_json_dict(), args.out)
    return 0


def _cayley_space(G, gens_text):
    if gens_text:
        indices = []
        for chunk in gens_text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                perm = parse_cycles(chunk, G.degree)
            except ValueError as exc:
                raise ParseError(f"bad connection element {chunk!r}: {exc}") from exc
            try:
                indices.append(G.index_of(perm))
            except KeyError as exc:
                raise PreconditionError(f"{chunk} is not in the group") from exc
        return quotspec.cayley_graph(G, indices)
    return quotspec.cayley_graph(G)


def _identity_dict(rep):
    return {
        "eigenvalues": [round15(v) for v in rep.eigenvalues],
        "invariant_dims": list(rep.invariant_dims),
        "induced_sums": list(rep.induced_sums),
        "k_rows": list(rep.k_rows),
        "holds": rep.holds,
    }


def cmd_sunada(args):
    G = load_group_file(args.group, max_order=args.max_order)
    H1 = load_subgroup_file(args.h1, G)
    H2 = load_subgroup_file(args.h2, G)
    K = load_subgroup_file(args.k, G) if args.k else subgroup_generate(G, [])
    space = _cayley_space(G, args.gens)
    triple = gassmann.triple_report(G, H1, H2)
    ct = chartab.character_table(G, seed=args.seed)
    s1 = quotspec.invariant_spectrum(space, H1, cluster_tol=args.cluster_tol)
    s2 = quotspec.invariant_spectrum(space, H2, cluster_tol=args.cluster_tol)
    if s1.dim == s2.dim:
        gap = float(np.max(np.abs(s1.values - s2.values))) if s1.dim else 0.0
    else:
        gap = math.inf
    id1 = quotspec.sunada_identity_check(space, H1, K, ct=ct, cluster_tol=args.cluster_tol)
    id2 = quotspec.sunada_identity_check(space, H2, K, ct=ct, cluster_tol=args.cluster_tol)
    isospectral = gap <= args.tol
    report = {
        "command": "sunada",
        "group_file": args.group,
        "group_order": G.order,
        "triple": triple.to_json_dict(),
        "k_order": K.order,
        "k_equivalent": gassmann.k_equivalent(G, H1, H2, K, ct=ct),
        "spectrum_h1": _spectrum_pairs(s1),
        "spectrum_h2": _spectrum_pairs(s2),
        "max_gap": round15(gap) if math.isfinite(gap) else "infinite",
        "identity_h1": _identity_dict(id1),
        "identity_h2": _identity_dict(id2),
        "isospectral": isospectral,
        "verdict": "isospectral" if isospectral else "not isospectral",
    }
    _emit(report, args.out)
    return 0


def _parse_model(text, nmax):
    parts = text.split(":")
    kind = parts[0]
    try:
        params = [float(p) for p in parts[1:]]
    except ValueError as exc:
        raise ParseError(f"bad model parameter in {text!r}") from exc
    if kind == "circle" and len(params) == 1:
        return heatkit.circle_spectrum(params[0], nmax if nmax else 20000)
    if kind == "interval" and len(params) == 1:
        return heatkit.interval_neumann_spectrum(params[0], nmax if nmax else 20000)
    if kind == "torus" and len(params) == 2:
        n = nmax if nmax else 700
        if (n + 1) ** 2 > 4e7:
            raise PreconditionError(
                f"torus lattice at nmax={n} is too large; lower --nmax"
            )
        return heatkit.rect_torus_spectrum(params[0], params[1], n)
    raise ParseError(
        f"bad model {text!r}: expected circle:L, interval:L, or torus:a:b"
    )


def cmd_heat(args):
    t_grid = np.geomspace(args.t_lo, args.t_hi, args.t_num)
    inputs = []
    for text in args.model or []:
        inputs.append((f"model {text}", _parse_model(text, args.nmax)))
    for path in args.spectrum or []:
        with open(path, encoding="utf-8") as fh:
            inputs.append((f"file {path}", heatkit.read_spectrum_json(fh, path=path)))
    if not inputs:
        raise PreconditionError("give at least one --model or --spectrum")
    entries = []
    for label, spec in inputs:
        entry = {"input": label}
        if isinstance(spec, heatkit.FlatModelSpectrum):
            if args.trace_tol is not None:
                heatkit.heat_trace(spec, t_grid, tol=args.trace_tol)
            entry["model"] = spec.model
            entry["lengths"] = list(spec.lengths)
            entry["nmax"] = spec.nmax
            entry["volume"] = spec.volume
            if spec.dim == 1:
                ind = heatkit.constant_term_estimate(spec, t_grid)
                entry["indicator"] = ind.to_json_dict()
            else:
                curve = heatkit.heat_trace(spec, [args.t_lo])
                est = float(curve.values[0] * (4.0 * np.pi * args.t_lo) ** (spec.dim / 2.0))
                entry["leading_volume_estimate"] = est
                entry["volume_recovered"] = (
                    abs(est - spec.volume) <= 0.01 * spec.volume
                )
                entry["tail_bound_max"] = curve.max_tail()
        else:
            curve = heatkit.heat_trace(spec, t_grid)
            entry["count"] = int(sum(m for _, m in spec))
            entry["trace"] = {
                "t": [round15(t) for t in t_grid],
                "values": [round15(v) for v in curve.values],
            }
        entries.append(entry)
    report = {"command": "heat", "inputs": entries}
    if args.audit:
        if len(inputs) != 4:
            raise PreconditionError(
                "--audit needs exactly four inputs: quotient1 quotient2 cover1 cover2"
            )
        d1, d2 = args.audit
        (_, o1), (_, o2), (_, m1), (_, m2) = inputs
        audit = heatkit.singularity_audibility_report(
            o1, o2, m1, m2, d1, d2, tol=args.tol
        )
        report["audibility"] = audit.to_json_dict()
    _emit(report, args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--tol", type=float, default=_env("TOL", float, 1e-9),
                   help="spectral comparison tolerance")
    p.add_argument("--cluster-tol", dest="cluster_tol", type=float,
                   default=_env("CLUSTER_TOL", float, None),
                   help="eigenvalue clustering tolerance (default: scaled)")
    p.add_argument("--nmax", type=int, default=_env("NMAX", int, None),
                   help="flat-model truncation index")
    p.add_argument("--budget", type=int,
                   default=_env("BUDGET", int, DEFAULT_SUBGROUP_BUDGET),
                   help="closure budget for subgroup searches")
    p.add_argument("--max-order", dest="max_order", type=int,
                   default=_env("MAX_ORDER", int, DEFAULT_MAX_ORDER),
                   help="largest group order to enumerate")
    p.add_argument("--seed", type=int, default=_env("SEED", int, 0),
                   help="seed for randomized internals")
    p.add_argument("--out", default=_env("OUT", str, None),
                   help="write the report here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sunadalab",
        description="isospectrality experiments on finite groups and flat models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", help="order, classes, character table")
    p.add_argument("group", help="group file")
    _add_common(p)
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("gassmann", help="certify or search almost conjugate pairs")
    p.add_argument("group", help="group file")
    p.add_argument("h1", nargs="?", help="first subgroup file")
    p.add_argument("h2", nargs="?", help="second subgroup file")
    p.add_argument("--search", type=int, default=None,
                   help="search all subgroup pairs of this order instead")
    _add_common(p)
    p.set_defaults(func=cmd_gassmann)

    p = sub.add_parser("sunada", help="run the Cayley pipeline on a triple")
    p.add_argument("group", help="group file")
    p.add_argument("h1", help="first subgroup file")
    p.add_argument("h2", help="second subgroup file")
    p.add_argument("--k", default=None, help="subgroup file for the equivalence level")
    p.add_argument("--gens", default=None,
                   help="semicolon-separated connection elements in cycle notation")
    _add_common(p)
    p.set_defaults(func=cmd_sunada)

    p = sub.add_parser("heat", help="flat-model indicators and audibility")
    p.add_argument("--model", action="append",
                   help="circle:L, interval:L, or torus:a:b (repeatable)")
    p.add_argument("--spectrum", action="append",
                   help="spectrum JSON file (repeatable)")
    p.add_argument("--audit", nargs=2, type=int, metavar=("D1", "D2"), default=None,
                   help="sheet counts; inputs must be O1 O2 M1 M2")
    p.add_argument("--t-lo", dest="t_lo", type=float, default=1e-4)
    p.add_argument("--t-hi", dest="t_hi", type=float, default=1e-3)
    p.add_argument("--t-num", dest="t_num", type=int, default=33)
    p.add_argument("--trace-tol", dest="trace_tol", type=float,
                   default=_env("TRACE_TOL", float, None),
                   help="fail if a truncation bound exceeds this")
    _add_common(p)
    p.set_defaults(func=cmd_heat)

    return parser


_EXIT_CODES = (
    (ParseError, 2),
    (PreconditionError, 3),
    (NumericalError, 4),
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SunadaLabError as exc:
        code = 1
        for cls, c in _EXIT_CODES:
            if isinstance(exc, cls):
                code = c
                break
        payload = {
            "error": {
                "type": type(exc).__name__,
                "message": str(exc),
                "exit_code": code,
            }
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return code
    except FileNotFoundError as exc:
        payload = {
            "error": {"type": "FileNotFoundError", "message": str(exc), "exit_code": 2}
        }
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
