"""Instance files: parsing, canonical serialization, built-in examples.

An instance file is UTF-8 JSON with exact integers only (big integers may be
quoted as strings; floating point is rejected outright).  It declares a
lattice presentation plus exactly one payload:

* ``nef_partition`` -- list of parts, each a list of ambient vertex vectors;
* ``cone``          -- generator list with optional ``deg``/``deg_dual``;
* ``polytope``      -- a bare vertex list (accepted by ``dualize`` only).

Optional ``coefficients`` fix the field (``"rational"`` or ``{"prime": p}``),
a seed, and an explicit value map keyed by slice-point coordinates in the
instance lattice's basis (comma-separated integers).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .canned import product_projective, square_part, two_segment_parts
from .errors import InputError, SumNotReflexiveError
from .intmat import IntMatrix
from .lattices import LatticeEmbedding
from .laurent import RATIONAL
from .nefpart import validate_nef_partition
from .polytope import Polytope, lattice_points, minkowski_sum_all


def _reject_float(_value):
    raise InputError("floating point numbers are not accepted; use exact integers")


def loads(text: str):
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def dumps(obj, pretty=False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _as_int(value, context):
    if isinstance(value, bool):
        raise InputError(f"{context}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise InputError(f"{context}: {value!r} is not an integer")
    raise InputError(f"{context}: expected an integer, got {type(value).__name__}")


def _as_vector(value, context):
    if not isinstance(value, list):
        raise InputError(f"{context}: expected a list of integers")
    return tuple(_as_int(x, context) for x in value)


def _as_fraction(value, context):
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{context}: {value!r} is not an exact rational")
    raise InputError(f"{context}: expected an integer or 'num/den' string")


@dataclass(frozen=True)
class CoefficientSpec:
    domain: object  # RATIONAL or prime int
    seed: int
    explicit: dict | None  # key tuple -> value


@dataclass(frozen=True)
class Instance:
    lattice: LatticeEmbedding
    kind: str  # "nef_partition" | "cone" | "polytope"
    parts: tuple | None  # vertex lists in lattice coordinates
    cone_generators: tuple | None
    cone_deg: tuple | None
    cone_deg_dual: tuple | None
    polytope_vertices: tuple | None
    coefficients: CoefficientSpec | None
    canonical: dict
    shift_note: str | None = None

    def digest(self) -> str:
        return hashlib.sha256(dumps(self.canonical).encode("utf-8")).hexdigest()


def parse_instance(data) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance file must be a JSON object")
    lattice_spec = data.get("lattice")
    if lattice_spec is None:
        raise InputError("missing 'lattice' field")
    lattice = _parse_lattice(lattice_spec)

    payload_keys = [k for k in ("nef_partition", "cone", "polytope") if k in data]
    if len(payload_keys) != 1:
        raise InputError("exactly one of 'nef_partition', 'cone', 'polytope' is required")
    kind = payload_keys[0]

    parts = None
    generators = None
    deg = None
    deg_dual = None
    poly_vertices = None

    if kind == "nef_partition":
        raw_parts = data["nef_partition"]
        if not isinstance(raw_parts, list) or not raw_parts:
            raise InputError("'nef_partition' must be a non-empty list of vertex lists")
        parts = []
        for idx, vl in enumerate(raw_parts):
            if not isinstance(vl, list) or not vl:
                raise InputError(f"part {idx + 1} must be a non-empty vertex list")
            verts = [
                lattice.to_coords(_as_vector(v, f"part {idx + 1} vertex")) for v in vl
            ]
            parts.append(tuple(verts))
        parts = tuple(parts)
    elif kind == "cone":
        cone = data["cone"]
        if not isinstance(cone, dict) or "generators" not in cone:
            raise InputError("'cone' must be an object with a 'generators' list")
        generators = tuple(
            lattice.to_coords(_as_vector(g, "cone generator")) for g in cone["generators"]
        )
        if "deg" in cone:
            deg = lattice.to_coords(_as_vector(cone["deg"], "deg"))
        if "deg_dual" in cone:
            deg_dual = lattice.dual().to_coords(_as_vector(cone["deg_dual"], "deg_dual"))
    else:
        poly_vertices = tuple(
            lattice.to_coords(_as_vector(v, "polytope vertex")) for v in data["polytope"]
        )

    coefficients = _parse_coefficients(data.get("coefficients"))
    canonical = _canonical_dict(data)
    return Instance(
        lattice=lattice,
        kind=kind,
        parts=parts,
        cone_generators=generators,
        cone_deg=deg,
        cone_deg_dual=deg_dual,
        polytope_vertices=poly_vertices,
        coefficients=coefficients,
        canonical=canonical,
    )


def _parse_lattice(spec) -> LatticeEmbedding:
    if not isinstance(spec, dict):
        raise InputError("'lattice' must be an object")
    rank = _as_int(spec.get("ambient_rank"), "lattice.ambient_rank")
    kind = spec.get("kind", "full")
    if kind == "full":
        return LatticeEmbedding.full(rank)
    if kind == "kernel":
        rows = spec.get("equations")
        if not rows:
            raise InputError("kernel lattice requires 'equations'")
        eqs = IntMatrix(tuple(_as_vector(r, "lattice equation") for r in rows))
        if eqs.cols != rank:
            raise InputError("equation rows must have length ambient_rank")
        return LatticeEmbedding.from_kernel(eqs)
    if kind == "quotient":
        rows = spec.get("relations")
        if not rows:
            raise InputError("quotient lattice requires 'relations'")
        rels = IntMatrix(tuple(_as_vector(r, "lattice relation") for r in rows))
        if rels.cols != rank:
            raise InputError("relation rows must have length ambient_rank")
        return LatticeEmbedding.from_quotient(rels)
    raise InputError(f"unknown lattice kind {kind!r}")


def _parse_coefficients(spec) -> CoefficientSpec | None:
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise InputError("'coefficients' must be an object")
    field = spec.get("field", "rational")
    if field == "rational":
        domain = RATIONAL
    elif isinstance(field, dict) and "prime" in field:
        domain = _as_int(field["prime"], "coefficients.field.prime")
    else:
        raise InputError("coefficients.field must be 'rational' or {'prime': p}")
    seed = _as_int(spec.get("seed", 0), "coefficients.seed")
    explicit = None
    if "values" in spec:
        explicit = {}
        for key, val in spec["values"].items():
            try:
                coords = tuple(int(x) for x in key.split(","))
            except ValueError:
                raise InputError(f"coefficient key {key!r} is not comma-separated integers")
            if domain == RATIONAL:
                explicit[coords] = _as_fraction(val, f"coefficient {key}")
            else:
                explicit[coords] = _as_int(val, f"coefficient {key}") % domain
    return CoefficientSpec(domain=domain, seed=seed, explicit=explicit)


def _canonical_dict(data):
    """Round-trip the raw JSON into a canonical nested structure."""
    if isinstance(data, dict):
        return {str(k): _canonical_dict(v) for k, v in sorted(data.items())}
    if isinstance(data, list):
        return [_canonical_dict(v) for v in data]
    if isinstance(data, bool) or data is None:
        return data
    if isinstance(data, int):
        return data
    if isinstance(data, str):
        return data
    raise InputError(f"unsupported JSON value {data!r}")


def build_partition(instance: Instance):
    """Validate the instance's nef-partition, translating a shifted sum.

    Returns ``(nef_partition, shift_note)``.
    """
    if instance.kind != "nef_partition":
        raise InputError("instance does not declare a nef-partition")
    lattice = LatticeEmbedding.full(instance.lattice.rank)
    polys = [Polytope.from_points(lattice, pts) for pts in instance.parts]
    try:
        return validate_nef_partition(polys), None
    except SumNotReflexiveError:
        total = minkowski_sum_all(polys)
        for m in lattice_points(total):
            shifted = [polys[0].translate(tuple(-x for x in m))] + polys[1:]
            try:
                np_ = validate_nef_partition(shifted)
            except Exception:
                continue
            note = "partition translated by -(" + ",".join(str(x) for x in m) + ")"
            return np_, note
        raise


def example_instance(name: str, n=None, t=None) -> dict:
    """A bundled instance file as a JSON-ready dict."""
    if name == "product-projective":
        if n is None or t is None:
            raise InputError("product-projective requires --n and --t")
        data = product_projective(int(n), int(t))
        return {
            "lattice": {
                "ambient_rank": data["ambient_rank"],
                "kind": "kernel",
                "equations": [list(r) for r in data["equations"]],
            },
            "cone": {
                "generators": [list(g) for g in data["generators"]],
                "deg": list(data["deg"]),
                "deg_dual": list(data["deg_dual"]),
            },
        }
    if name == "two-segment":
        return {
            "lattice": {"ambient_rank": 2, "kind": "full"},
            "nef_partition": [[list(v) for v in part] for part in two_segment_parts()],
        }
    if name == "square":
        return {
            "lattice": {"ambient_rank": 2, "kind": "full"},
            "nef_partition": [[list(v) for v in part] for part in square_part()],
        }
    raise InputError(f"unknown example {name!r}")
