"""Command-line interface: exact pipeline from instance files to reports.

Subcommands: dualize, nefdual, cone, decompose, bridge, verify, pipeline,
example.  Reports are UTF-8 JSON with sorted keys and LF endings; identical
inputs and flags produce byte-identical output (timing goes to stderr only).
Exit codes: 0 success, 1 input error, 2 warnings escalated under --strict,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import __version__
from .bridge import build_bridge, enumerate_decompositions, random_coefficients, slice_root_keys
from .cones import build_cone, normalize_cone, verify_reflexive_gorenstein
from .errors import InputError, InternalError
from .evidence import birationality_evidence
from .instances import (
    Instance,
    build_partition,
    dumps,
    example_instance,
    loads,
    parse_instance,
)
from .laurent import RATIONAL, CoefficientAssignment
from .nefpart import pairing_minima
from .polytope import Polytope, facet_enumeration, is_reflexive


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _load_instance(path) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    return parse_instance(loads(text))


def _pair_from_instance(instance: Instance):
    """Cone pair plus normalization info for either input mode."""
    if instance.kind == "nef_partition":
        np_, note = build_partition(instance)
        pair = build_cone(np_)
        info = {"input_mode": "nef_partition"}
        if note:
            info["shift"] = note
        return pair, info
    if instance.kind == "cone":
        pair, norm = normalize_cone(
            instance.lattice,
            instance.cone_generators,
            instance.cone_deg,
            instance.cone_deg_dual,
        )
        info = {"input_mode": "cone"}
        info.update({k: _jsonable(v) for k, v in norm.items()})
        return pair, info
    raise InputError("this command requires a nef_partition or cone instance")


def _coefficients(instance: Instance, pair, domain, seed):
    spec = instance.coefficients
    if spec is not None and spec.explicit is not None:
        if spec.domain != domain:
            raise InputError(
                "explicit coefficients are over a different field than requested"
            )
        keys = set(slice_root_keys(pair))
        given = set(spec.explicit)
        if given != keys:
            missing = sorted(keys - given)[:3]
            extra = sorted(given - keys)[:3]
            raise InputError(
                f"coefficient map must cover exactly the slice points; missing {missing}, extra {extra}"
            )
        return CoefficientAssignment.explicit(spec.explicit, domain)
    return random_coefficients(pair, domain, seed)


def _effective_seed(args, instance: Instance):
    if args.seed is not None:
        return args.seed
    if instance.coefficients is not None:
        return instance.coefficients.seed
    return 0


def _decomposition_payload(pair, decs):
    items = []
    for dec in decs:
        items.append(
            {
                "p": _jsonable(dec.p),
                "e_tilde": _jsonable(dec.e_tilde()),
                "blocks": [[i + 1 for i in block] for block in dec.blocks],
                "r": dec.r,
                "block_sizes": list(dec.block_sizes),
                "trivial": dec.is_trivial(),
            }
        )
    return {"count": len(decs), "decompositions": items}


def _bridge_payload(bridge, pair_idx, domain, seed):
    dets = []
    for det in bridge.determinants:
        ranges = [det.exponent_range(c) for c in range(bridge.torus_rank)]
        dets.append(
            {
                "terms": len(det.terms),
                "exponent_ranges": [list(r) for r in ranges],
            }
        )
    return {
        "pair": list(pair_idx),
        "coefficient_field": "rational" if domain == RATIONAL else {"prime": domain},
        "seed": seed,
        "saturation_index": bridge.sat_index,
        "torus_rank": bridge.torus_rank,
        "blocks": [[i + 1 for i in b] for b in bridge.blocks],
        "matrix_sizes": [len(m) for m in bridge.matrices],
        "identity_results": {k: bool(v) for k, v in sorted(bridge.identity_results.items())},
        "identities_pass": all(bridge.identity_results.values()),
        "determinants": dets,
        "diagonal_witness": list(bridge.diag_witness),
        "warnings": list(bridge.warnings),
    }


def _select_pair(decs, pair_flag):
    if pair_flag is None:
        i, j = 1, 2
    else:
        i, j = pair_flag
    if not (1 <= i <= len(decs) and 1 <= j <= len(decs)):
        raise InputError(
            f"pair index out of range: {len(decs)} decompositions available"
        )
    return i, j


def cmd_dualize(args):
    instance = _load_instance(args.file)
    if instance.kind == "polytope":
        vertices = instance.polytope_vertices
    elif instance.kind == "nef_partition" and len(instance.parts) == 1:
        vertices = instance.parts[0]
    else:
        raise InputError("dualize requires a 'polytope' instance")
    from .lattices import LatticeEmbedding

    poly = Polytope.from_points(LatticeEmbedding.full(instance.lattice.rank), vertices)
    cert = is_reflexive(poly)
    result = {
        "vertices": _jsonable(poly.vertices),
        "is_reflexive": cert.is_reflexive,
        "interior_witness": cert.interior_witness,
    }
    if cert.interior_witness:
        result["facets"] = [
            {"normal": list(nrm), "offset": off} for nrm, off in facet_enumeration(poly.vertices)
        ]
    if cert.is_reflexive:
        result["dual_vertices"] = _jsonable(cert.dual_vertices)
    elif cert.witness is not None:
        result["witness"] = _jsonable(cert.witness)
    return result, [], instance


def cmd_nefdual(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    np_ = pair.parts
    dual = pair.dual_parts
    minima = {}
    for j, nabla in enumerate(dual.parts):
        for w in nabla.vertices:
            key = ",".join(str(int(x)) for x in w)
            minima[key] = list(pairing_minima(np_, tuple(int(x) for x in w)))
    result = {
        "normalization": info,
        "parts": [_jsonable(p.vertices) for p in np_.parts],
        "sum_vertices": _jsonable(np_.sum.vertices),
        "dual_parts": [_jsonable(p.vertices) for p in dual.parts],
        "pairing_minima_at_dual_vertices": minima,
    }
    return result, [], instance


def cmd_cone(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    ok, index = verify_reflexive_gorenstein(pair)
    result = {
        "normalization": info,
        "reflexive_gorenstein": ok,
        "index": index,
        "s": pair.s,
        "d": pair.d,
        "k_generator_count": len(pair.k_generators),
        "k_dual_generator_count": len(pair.k_dual_generators),
        "deg": list(pair.deg),
        "deg_dual": list(pair.deg_dual),
    }
    return result, [], instance


def cmd_decompose(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    decs = enumerate_decompositions(pair)
    result = {"normalization": info}
    result.update(_decomposition_payload(pair, decs))
    warnings = []
    if len(decs) == 1:
        warnings.append("no nontrivial double mirror: only the trivial decomposition exists")
    return result, warnings, instance


def cmd_bridge(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    decs = enumerate_decompositions(pair)
    i, j = _select_pair(decs, args.pair)
    seed = _effective_seed(args, instance)
    domain = RATIONAL
    coeffs = _coefficients(instance, pair, domain, seed)
    bridge = build_bridge(pair, decs[i - 1], decs[j - 1], coeffs)
    result = {"normalization": info}
    result.update(_bridge_payload(bridge, (i, j), domain, seed))
    return result, list(bridge.warnings), instance


def cmd_verify(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    decs = enumerate_decompositions(pair)
    i, j = _select_pair(decs, args.pair)
    seed = _effective_seed(args, instance)
    coeffs = _coefficients(instance, pair, args.prime, seed)
    bridge = build_bridge(pair, decs[i - 1], decs[j - 1], coeffs)
    report = birationality_evidence(bridge, args.samples, args.prime, seed)
    result = {"normalization": info, "pair": [i, j], "evidence": report.payload()}
    return result, list(report.warnings), instance


def cmd_pipeline(args):
    instance = _load_instance(args.file)
    pair, info = _pair_from_instance(instance)
    ok, index = verify_reflexive_gorenstein(pair)
    decs = enumerate_decompositions(pair)
    seed = _effective_seed(args, instance)
    result = {
        "normalization": info,
        "cone": {
            "reflexive_gorenstein": ok,
            "index": index,
            "s": pair.s,
            "d": pair.d,
            "k_generator_count": len(pair.k_generators),
        },
        "dual_parts": [_jsonable(p.vertices) for p in pair.dual_parts.parts],
    }
    result.update(_decomposition_payload(pair, decs))
    warnings = []
    if len(decs) == 1 and args.pair is None:
        warnings.append("no nontrivial double mirror: only the trivial decomposition exists")
        result["notice"] = "pipeline stopped before the bridge stage"
        return result, warnings, instance
    i, j = _select_pair(decs, args.pair)
    rational_coeffs = _coefficients(instance, pair, RATIONAL, seed)
    sym_bridge = build_bridge(pair, decs[i - 1], decs[j - 1], rational_coeffs)
    result["bridge"] = _bridge_payload(sym_bridge, (i, j), RATIONAL, seed)
    warnings.extend(sym_bridge.warnings)
    fp_coeffs = _coefficients(instance, pair, args.prime, seed)
    fp_bridge = build_bridge(pair, decs[i - 1], decs[j - 1], fp_coeffs)
    report = birationality_evidence(fp_bridge, args.samples, args.prime, seed)
    result["evidence"] = report.payload()
    warnings.extend(w for w in report.warnings if w not in warnings)
    return result, warnings, instance


def cmd_example(args):
    data = example_instance(args.name, n=args.n, t=args.t)
    return data, [], None


COMMANDS = {
    "dualize": cmd_dualize,
    "nefdual": cmd_nefdual,
    "cone": cmd_cone,
    "decompose": cmd_decompose,
    "bridge": cmd_bridge,
    "verify": cmd_verify,
    "pipeline": cmd_pipeline,
    "example": cmd_example,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="doublemirror",
        description="Exact toric double-mirror constructions and finite-field evidence",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="instance JSON file")
        p.add_argument("--pretty", action="store_true", help="indented output")
        p.add_argument("--strict", action="store_true", help="escalate warnings to exit code 2")
        p.add_argument("--output", help="write the report to this path")

    for name in ("dualize", "nefdual", "cone", "decompose"):
        add_common(sub.add_parser(name))

    for name in ("bridge", "verify", "pipeline"):
        p = sub.add_parser(name)
        add_common(p)
        p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"), default=None)
        p.add_argument("--seed", type=int, default=None)
        if name != "bridge":
            p.add_argument("--samples", type=int, default=100)
            p.add_argument("--prime", type=int, default=10007)

    p = sub.add_parser("example")
    p.add_argument("name", help="two-segment | square | product-projective")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    add_common(p, with_file=False)
    return parser


def _args_echo(args):
    skip = {"command", "pretty", "output", "func"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        echo[key] = value
    return echo


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    handler = COMMANDS[args.command]
    try:
        result, warnings, instance = handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3

    if args.command == "example":
        text = dumps(result, pretty=args.pretty)
    else:
        report = {
            "command": args.command,
            "args": _args_echo(args),
            "input_digest": instance.digest() if instance is not None else None,
            "result": result,
            "warnings": list(warnings),
        }
        text = dumps(report, pretty=args.pretty)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    elapsed = time.monotonic() - started
    print(f"{args.command}: {elapsed:.2f}s", file=sys.stderr)
    if warnings and args.strict:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
