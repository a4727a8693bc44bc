"""Input and output documents (JSON text, exact rationals as strings)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .complex import SimplicialComplex, validate
from .configspace import Configuration, MonicPolynomial
from .field import Field, format_rational, make_field, parse_rational
from .persistence import OrthoConfiguration, VectorConfiguration

CONFIG_FORMAT = "refbetti.configuration/1"
POLY_FORMAT = "refbetti.polynomial/1"


class InputError(ValueError):
    """Malformed or invalid document; the message names the offending location."""


@dataclass
class InputDocument:
    field: Field
    complex: SimplicialComplex
    functions: dict  # label -> tuple of Fractions
    meta: dict = dc_field(default_factory=dict)

    def function(self, label: str | None = None) -> tuple:
        if label is None:
            return next(iter(self.functions.values()))
        try:
            return self.functions[label]
        except KeyError:
            raise InputError(f"functions: no function named {label!r} (have {sorted(self.functions)})") from None

    def function_label(self, label: str | None = None) -> str:
        return label if label is not None else next(iter(self.functions))


def _parse_field(raw, where="field") -> Field:
    try:
        return make_field(raw)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _parse_values(raw, n: int, where: str) -> tuple:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of {n} values")
    if len(raw) != n:
        raise InputError(f"{where}: expected {n} values, got {len(raw)}")
    out = []
    for i, x in enumerate(raw):
        try:
            out.append(parse_rational(x))
        except ValueError as exc:
            raise InputError(f"{where}[{i}]: {exc}") from None
    return tuple(out)


def parse_input(data: bytes | str) -> InputDocument:
    """Parse and validate an input document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise InputError("document: expected a JSON object")
    fld = _parse_field(raw.get("field", "Q"))
    n = raw.get("n_vertices")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"n_vertices: expected a non-negative integer, got {n!r}")
    simplices = raw.get("simplices")
    if not isinstance(simplices, list):
        raise InputError("simplices: expected a list of vertex lists")
    for i, s in enumerate(simplices):
        if not isinstance(s, list) or not s or not all(isinstance(v, int) and not isinstance(v, bool) for v in s):
            raise InputError(f"simplices[{i}]: expected a non-empty list of integers")
        bad = next((v for v in s if not 0 <= v < n), None)
        if bad is not None:
            raise InputError(f"simplices[{i}]: vertex index {bad} is out of range (n_vertices={n})")
    k = SimplicialComplex.from_simplices(n, simplices)
    missing = sorted(set(range(n)) - {s[0] for s in k.cells(0)})
    if missing:
        raise InputError(f"simplices: vertex {missing[0]} is not listed as a 0-simplex")
    violation = validate(k)
    if violation is not None:
        raise InputError(f"simplices: {violation}")
    if "functions" in raw:
        funcs_raw = raw["functions"]
        if not isinstance(funcs_raw, dict) or not funcs_raw:
            raise InputError("functions: expected a non-empty object of named value lists")
        functions = {str(lbl): _parse_values(v, n, f"functions.{lbl}") for lbl, v in funcs_raw.items()}
    elif "values" in raw:
        functions = {"f": _parse_values(raw["values"], n, "values")}
    else:
        raise InputError("document: needs 'values' or 'functions'")
    meta = raw.get("meta", {})
    if not isinstance(meta, dict):
        raise InputError("meta: expected an object")
    return InputDocument(fld, k, functions, meta)


def input_to_json(doc: InputDocument) -> dict:
    out = {
        "field": str(doc.field),
        "n_vertices": doc.complex.n_vertices,
        "simplices": [list(s) for s in doc.complex.all_simplices()],
        "functions": {lbl: [format_rational(x) for x in vals] for lbl, vals in doc.functions.items()},
    }
    if doc.meta:
        out["meta"] = doc.meta
    return out


def _render(obj, indent: int) -> str:
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if len(obj) <= 4 and all(not isinstance(v, (dict, list, tuple)) for v in obj.values()):
            return json.dumps(obj, ensure_ascii=False)
        body = ",\n".join(f"{inner}{json.dumps(str(k))}: {_render(v, indent + 2)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return json.dumps(list(obj), ensure_ascii=False)
        body = ",\n".join(inner + _render(v, indent + 2) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(obj) -> str:
    """Deterministic JSON text; lists of scalars stay on one line."""
    return _render(obj, 0) + "\n"


# --- configuration documents --------------------------------------------------


def _vec(field: Field, v) -> list[str]:
    return [field.format(x) for x in v]


def configuration_to_json(c: Configuration) -> list[dict]:
    return [{"a": format_rational(a), "b": format_rational(b), "multiplicity": m} for (a, b), m in c.items()]


def degree_entry(r: int, betti: int, delta: Configuration, field: Field,
                 hat: VectorConfiguration | None = None, ortho: OrthoConfiguration | None = None) -> dict:
    entry = {"degree": r, "betti": betti, "total": delta.total, "support": configuration_to_json(delta)}
    if hat is not None:
        entry["representatives"] = [
            {"a": format_rational(a), "b": format_rational(b), "vectors": [_vec(field, v) for v in hat.entries[a, b]]}
            for (a, b) in sorted(hat.entries)
        ]
    if ortho is not None:
        entry["orthogonal"] = [
            {"a": format_rational(a), "b": format_rational(b), "basis": [_vec(field, v) for v in ortho.entries[a, b].vectors]}
            for (a, b) in sorted(ortho.entries)
        ]
    return entry


def configuration_document(field: Field, degrees: list[dict], source: dict | None = None) -> dict:
    doc = {"format": CONFIG_FORMAT, "field": str(field)}
    if source:
        doc["source"] = source
    doc["degrees"] = degrees
    return doc


def parse_configuration_document(data: bytes | str) -> dict[int, Configuration]:
    """Degree -> configuration from a ``compute`` output document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict) or raw.get("format") != CONFIG_FORMAT:
        raise InputError(f"format: expected {CONFIG_FORMAT!r}")
    out = {}
    for i, entry in enumerate(raw.get("degrees", [])):
        try:
            r = entry["degree"]
            pts = {}
            for j, p in enumerate(entry["support"]):
                m = p["multiplicity"]
                if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                    raise InputError(f"degrees[{i}].support[{j}].multiplicity: expected a positive integer")
                pts[parse_rational(p["a"]), parse_rational(p["b"])] = m
        except (KeyError, TypeError) as exc:
            raise InputError(f"degrees[{i}]: missing or malformed field {exc}") from None
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"degrees[{i}]: {exc}") from None
        out[r] = Configuration(pts)
    return out


def polynomial_to_json(p: MonicPolynomial) -> list[dict]:
    return [{"re": format_rational(re), "im": format_rational(im)} for re, im in p.coefficients]


def polynomial_from_json(raw: list[dict]) -> MonicPolynomial:
    return MonicPolynomial(tuple((parse_rational(c["re"]), parse_rational(c["im"])) for c in raw))


def is_configuration_document(data: bytes | str) -> bool:
    try:
        raw = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return False
    return isinstance(raw, dict) and raw.get("format") == CONFIG_FORMAT


def fraction_list(xs) -> list[str]:
    return [format_rational(Fraction(x)) for x in xs]
